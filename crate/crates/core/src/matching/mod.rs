//! Minimum bottleneck matching between a sampled point set and a lattice.

mod hopcroft_karp;
mod rate;

pub use rate::RateEnvelope;

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, PointSet};
use crate::graph::DenseMatrix;
use crate::scalar::Scalar;
use crate::spatial::BucketGrid;

/// Largest instance [`brute_force_bottleneck`] accepts.
pub const BRUTE_FORCE_MAX: usize = 8;

/// Bijection from `X` indices to `D` indices with its bottleneck distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching<T> {
    forward: Vec<usize>,
    bottleneck: T,
}

impl<T: Scalar> Matching<T> {
    /// `forward[i]` is the `D` index matched to `X` index `i`.
    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn bottleneck(&self) -> T {
        self.bottleneck
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// CSV with header `x_index,d_index,distance`, one row per matched pair.
    pub fn write_csv<W: Write>(
        &self,
        x: &PointSet<T>,
        d: &PointSet<T>,
        mut w: W,
    ) -> std::io::Result<()> {
        writeln!(w, "x_index,d_index,distance")?;
        for (i, &j) in self.forward.iter().enumerate() {
            let dist = distance_unchecked(x.point(i).coords(), d.point(j).coords());
            writeln!(w, "{i},{j},{dist:.16e}")?;
        }
        Ok(())
    }
}

fn check_pair<T: Scalar>(x: &PointSet<T>, d: &PointSet<T>) -> Result<()> {
    if x.len() != d.len() {
        return Err(Error::SizeMismatch {
            left: x.len(),
            right: d.len(),
        });
    }
    if x.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: d.dim(),
        });
    }
    Ok(())
}

fn from_forward<T: Scalar>(x: &PointSet<T>, d: &PointSet<T>, forward: Vec<usize>) -> Matching<T> {
    let bottleneck = forward
        .iter()
        .enumerate()
        .map(|(i, &j)| distance_unchecked(x.point(i).coords(), d.point(j).coords()))
        .fold(T::zero(), T::max);
    Matching {
        forward,
        bottleneck,
    }
}

/// Candidate edges within `cap`, each left vertex's list sorted by distance.
struct Candidates<T> {
    targets: Vec<Vec<u32>>,
    dists: Vec<Vec<T>>,
}

impl<T: Scalar> Candidates<T> {
    fn gather(x: &PointSet<T>, d: &PointSet<T>, cap: T) -> Self {
        let all = cap >= T::of_usize(x.dim()).sqrt();
        let buckets = (!all).then(|| BucketGrid::new(d, cap));
        let mut targets = Vec::with_capacity(x.len());
        let mut dists = Vec::with_capacity(x.len());
        let mut row: Vec<(T, u32)> = Vec::new();
        for p in x.points() {
            row.clear();
            let mut consider = |j: usize| {
                let dist = distance_unchecked(p.coords(), d.point(j).coords());
                if dist <= cap {
                    row.push((dist, j as u32));
                }
            };
            match &buckets {
                Some(b) => b.for_each_candidate(p.coords(), &mut consider),
                None => (0..d.len()).for_each(&mut consider),
            }
            row.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            targets.push(row.iter().map(|&(_, j)| j).collect());
            dists.push(row.iter().map(|&(t, _)| t).collect());
        }
        Candidates { targets, dists }
    }

    fn limits(&self, threshold: T) -> Vec<usize> {
        self.dists
            .iter()
            .map(|row| row.partition_point(|&t| t <= threshold))
            .collect()
    }

    fn matching_at(&self, threshold: T) -> (Vec<usize>, usize) {
        hopcroft_karp::max_matching(&self.targets, &self.limits(threshold), self.targets.len())
    }
}

/// Perfect matching of `x` onto `d` minimising the largest matched distance.
///
/// Candidate edges are first restricted to distances at most four times the
/// unit-constant rate envelope (bucketed over `d`); the cap doubles until the
/// candidate graph has a perfect matching. Feasibility is monotone in the
/// threshold, so a binary search over the sorted candidate distances, each
/// step checked by Hopcroft-Karp, finds the optimal bottleneck.
pub fn bottleneck_matching<T: Scalar>(x: &PointSet<T>, d: &PointSet<T>) -> Result<Matching<T>> {
    check_pair(x, d)?;
    let n = x.len();
    if n == 0 {
        return Ok(Matching {
            forward: Vec::new(),
            bottleneck: T::zero(),
        });
    }
    let diameter = T::of_usize(x.dim()).sqrt();
    let mut cap = if n >= 2 {
        let env = RateEnvelope::new(x.dim()).with_epsilon(T::one() / T::of_usize(n));
        T::of(4.0) * env.evaluate(T::of_usize(n))?
    } else {
        diameter
    };
    let candidates = loop {
        let c = Candidates::gather(x, d, cap);
        if c.matching_at(cap).1 == n {
            break c;
        }
        if cap >= diameter {
            // Unreachable for equal-size sets: the full graph is complete.
            return Err(Error::Domain(
                "no perfect matching in the complete graph".into(),
            ));
        }
        cap = (cap + cap).min(diameter);
    };

    let mut levels: Vec<T> = candidates.dists.iter().flatten().copied().collect();
    levels.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    // Smallest level admitting a perfect matching; the last level always does.
    let (mut lo, mut hi) = (0, levels.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if candidates.matching_at(levels[mid]).1 == n {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (forward, size) = candidates.matching_at(levels[lo]);
    debug_assert_eq!(size, n);
    Ok(from_forward(x, d, forward))
}

/// Whether a perfect matching exists using only pairs at distance `<= threshold`.
pub fn feasible_at<T: Scalar>(x: &PointSet<T>, d: &PointSet<T>, threshold: T) -> Result<bool> {
    check_pair(x, d)?;
    let c = Candidates::gather(x, d, threshold);
    Ok(c.matching_at(threshold).1 == x.len())
}

/// Exhaustive minimum over all `n!` bijections, for `n <= BRUTE_FORCE_MAX`.
pub fn brute_force_bottleneck<T: Scalar>(x: &PointSet<T>, d: &PointSet<T>) -> Result<Matching<T>> {
    check_pair(x, d)?;
    let n = x.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let cost = DenseMatrix::from_fn(n, |i, j| {
        distance_unchecked(x.point(i).coords(), d.point(j).coords())
    });

    fn search<T: Scalar>(
        cost: &DenseMatrix<T>,
        i: usize,
        worst: T,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut (T, Vec<usize>),
    ) {
        if i == used.len() {
            if worst < best.0 || best.1.is_empty() {
                *best = (worst, perm.clone());
            }
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                perm.push(j);
                search(cost, i + 1, worst.max(cost.get(i, j)), perm, used, best);
                perm.pop();
                used[j] = false;
            }
        }
    }

    let mut best = (T::infinity(), Vec::new());
    search(
        &cost,
        0,
        T::zero(),
        &mut Vec::with_capacity(n),
        &mut vec![false; n],
        &mut best,
    );
    Ok(from_forward(x, d, best.1))
}
