//! Point clouds in the unit cube, centred lattices, and radius schedules.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed;

/// Largest point count a grid may have.
pub const MAX_GRID_POINTS: usize = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    /// Fails on an empty coordinate list or a coordinate outside `[0, 1]`.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(c) = coords
            .iter()
            .find(|c| !(**c >= T::zero() && **c <= T::one()))
        {
            return Err(Error::Domain(format!("coordinate {c} outside [0, 1]")));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }
}

/// How a point set was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointSetKind<T> {
    Sampled {
        seed: u64,
    },
    /// `side^dim` lattice points at `(i + offset) / side`.
    Grid {
        side: usize,
        offset: T,
    },
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    points: Vec<Point<T>>,
    dim: usize,
    kind: PointSetKind<T>,
}

impl<T: Scalar> PointSet<T> {
    pub fn from_points(points: Vec<Point<T>>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        Ok(PointSet {
            points,
            dim,
            kind: PointSetKind::Explicit,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> PointSetKind<T> {
        self.kind
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point<T> {
        &self.points[i]
    }

    pub fn grid_side(&self) -> Option<usize> {
        match self.kind {
            PointSetKind::Grid { side, .. } => Some(side),
            _ => None,
        }
    }
}

/// Volume of the Euclidean unit ball in `d` dimensions, `pi^(d/2) / Gamma(d/2 + 1)`.
///
/// Evaluated in closed form: `pi^k / k!` for `d = 2k` and
/// `2 (2 pi)^k / (2k + 1)!!` for `d = 2k + 1`.
pub fn unit_ball_volume<T: Scalar>(d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    let k = d / 2;
    let pi = T::PI();
    let v = if d.is_multiple_of(2) {
        let mut v = T::one();
        for j in 1..=k {
            v = v * pi / T::of_usize(j);
        }
        v
    } else {
        let two_pi = pi + pi;
        let mut v = T::of(2.0);
        for j in 1..=k {
            v = v * two_pi / T::of_usize(2 * j + 1);
        }
        v
    };
    Ok(v)
}

/// `n` points with iid uniform coordinates, drawn point by point from the
/// stream seeded by `seed`.
pub fn sample_uniform<T: Scalar>(n: usize, d: usize, seed: u64) -> Result<PointSet<T>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    let mut rng = seed::stream(seed);
    let points = (0..n)
        .map(|_| Point {
            coords: (0..d).map(|_| T::of(seed::uniform_f64(&mut rng))).collect(),
        })
        .collect();
    Ok(PointSet {
        points,
        dim: d,
        kind: PointSetKind::Sampled { seed },
    })
}

/// Centred lattice of `m^d` points at `(i_k + 1/2) / m`, first axis varying fastest.
pub fn make_grid<T: Scalar>(m: usize, d: usize) -> Result<PointSet<T>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    if m == 0 {
        return Err(Error::Domain("grid side must be at least 1".into()));
    }
    let n = u32::try_from(d)
        .ok()
        .and_then(|d| m.checked_pow(d))
        .filter(|&n| n <= MAX_GRID_POINTS)
        .ok_or(Error::GridTooLarge { side: m, dim: d })?;
    let offset = T::of(0.5);
    let side = T::of_usize(m);
    let points = (0..n)
        .map(|mut idx| {
            let coords = (0..d)
                .map(|_| {
                    let i = idx % m;
                    idx /= m;
                    (T::of_usize(i) + offset) / side
                })
                .collect();
            Point { coords }
        })
        .collect();
    Ok(PointSet {
        points,
        dim: d,
        kind: PointSetKind::Grid { side: m, offset },
    })
}

/// The integer `m` with `m^d = n`, if there is one.
pub fn perfect_root(n: usize, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    let guess = (n as f64).powf(1.0 / d as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1)
        .find(|&m| u32::try_from(d).ok().and_then(|d| m.checked_pow(d)) == Some(n))
        .ok_or(Error::NotPerfectPower(n, d))
}

pub fn distance<T: Scalar>(u: &Point<T>, v: &Point<T>) -> Result<T> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(distance_unchecked(&u.coords, &v.coords))
}

#[inline]
pub(crate) fn distance_unchecked<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| (a - b) * (a - b))
        .fold(T::zero(), |acc, x| acc + x)
        .sqrt()
}

/// Connection radius `r(n) = c * (ln(n)^beta / n)^(1/d)`.
///
/// Strictly decreasing in `n` for `n > e^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSchedule<T> {
    pub c: T,
    pub beta: T,
}

impl<T: Scalar> RadiusSchedule<T> {
    pub fn new(c: T, beta: T) -> Result<Self> {
        if !(c > T::zero()) {
            return Err(Error::Domain(format!(
                "schedule scale c = {c} must be positive"
            )));
        }
        if !(beta >= T::one()) {
            return Err(Error::Domain(format!(
                "schedule exponent beta = {beta} must be >= 1"
            )));
        }
        Ok(RadiusSchedule { c, beta })
    }

    /// `c = 1`; `beta = 2` in the plane and `beta = 3/2` otherwise.
    pub fn default_for(d: usize) -> Self {
        let beta = if d == 2 { 2.0 } else { 1.5 };
        RadiusSchedule {
            c: T::one(),
            beta: T::of(beta),
        }
    }

    /// Below this `n` the radius may still increase.
    pub fn monotone_threshold(&self) -> T {
        self.beta.exp()
    }

    /// Takes a real `n` so the schedule can be probed between integers.
    pub fn radius(&self, n: T, d: usize) -> Result<T> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        if !(n > T::one()) {
            return Err(Error::Domain(format!("radius needs n > 1, got {n}")));
        }
        let base = n.ln().powf(self.beta) / n;
        Ok(self.c * base.powf(T::one() / T::of_usize(d)))
    }
}
