//! Walk spectra, spectral measures, and distances between them.

mod eigen;
mod staircase;

pub use eigen::{symmetric_eigenvalues, tridiagonal_eigenvalues, tridiagonalize, EigenConfig};
pub use staircase::{lipschitz_staircase, ramp, StaircaseApprox};

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{symmetrize, DenseMatrix, GeometricGraph, SymmetricMatrix};
use crate::scalar::Scalar;

/// Real eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    values: Vec<T>,
    source: String,
}

impl<T: Scalar> Spectrum<T> {
    /// Sorts `values` descending.
    pub fn new(mut values: Vec<T>, source: impl Into<String>) -> Self {
        values.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Spectrum {
            values,
            source: source.into(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `k`-th largest value, 1-based.
    pub fn nth_largest(&self, k: usize) -> Option<T> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn measure(&self) -> SpectralMeasure<T> {
        let mut atoms = self.values.clone();
        atoms.reverse();
        SpectralMeasure { atoms }
    }

    /// Header lines prefixed `#`, then `rank,eigenvalue` with ranks from 1.
    pub fn write_csv<W: Write>(&self, meta: &[(&str, String)], mut w: W) -> std::io::Result<()> {
        writeln!(w, "# source={}", self.source)?;
        for (k, v) in meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "rank,eigenvalue")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{:.16e}", i + 1, v)?;
        }
        Ok(())
    }
}

/// Empirical measure with mass `1/n` on each eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure<T> {
    atoms: Vec<T>,
}

impl<T: Scalar> SpectralMeasure<T> {
    /// Atom locations, ascending.
    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn total_mass(&self) -> T {
        if self.atoms.is_empty() {
            T::zero()
        } else {
            T::one()
        }
    }

    /// `mu(-inf, x] = |{lambda <= x}| / n`.
    pub fn cdf(&self, x: T) -> T {
        if self.atoms.is_empty() {
            return T::zero();
        }
        let count = self.atoms.partition_point(|&a| a <= x);
        T::of_usize(count) / T::of_usize(self.atoms.len())
    }

    /// `(1/n) sum f(lambda)`.
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        let n = T::of_usize(self.atoms.len().max(1));
        self.atoms
            .iter()
            .map(|&a| f(a))
            .fold(T::zero(), |s, x| s + x)
            / n
    }
}

/// Eigenvalues of `m`, descending.
pub fn eigenvalues_symmetric<T: Scalar>(
    m: &SymmetricMatrix<T>,
    cfg: &EigenConfig<T>,
) -> Result<Spectrum<T>> {
    Ok(Spectrum {
        values: symmetric_eigenvalues(m, cfg)?,
        source: "symmetric".into(),
    })
}

/// Spectrum of the walk matrix, computed from the similar matrix
/// `D^{-1/2} A D^{-1/2}`.
pub fn walk_spectrum<T: Scalar>(
    g: &GeometricGraph<T>,
    cfg: &EigenConfig<T>,
) -> Result<Spectrum<T>> {
    let values = symmetric_eigenvalues(&symmetrize(g)?, cfg)?;
    Ok(Spectrum {
        values,
        source: format!("walk(n={}, r={:e})", g.len(), g.radius()),
    })
}

fn same_len<T: Scalar>(a: &Spectrum<T>, b: &Spectrum<T>) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::Empty("spectrum"));
    }
    Ok(a.len())
}

/// Wasserstein distance between the two spectral measures:
/// `(1/n) sum |lambda_(i) - kappa_(i)|` over the sorted values.
pub fn wasserstein_distance<T: Scalar>(a: &Spectrum<T>, b: &Spectrum<T>) -> Result<T> {
    let n = same_len(a, b)?;
    let sum = a
        .values
        .iter()
        .zip(&b.values)
        .fold(T::zero(), |s, (&x, &y)| s + (x - y).abs());
    Ok(sum / T::of_usize(n))
}

/// The same distance as `integral |F_a - F_b|`, summed exactly over the
/// merged breakpoints of the two step CDFs.
pub fn wasserstein_cdf_form<T: Scalar>(a: &Spectrum<T>, b: &Spectrum<T>) -> Result<T> {
    let n = same_len(a, b)?;
    let xa: Vec<T> = a.values.iter().rev().copied().collect();
    let xb: Vec<T> = b.values.iter().rev().copied().collect();
    let (mut i, mut j) = (0usize, 0usize);
    let mut prev: Option<T> = None;
    let mut total = T::zero();
    while i < n || j < n {
        let x = match (xa.get(i), xb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        if let Some(p) = prev {
            let gap = i.abs_diff(j);
            total = total + (x - p) * T::of_usize(gap);
        }
        while i < n && xa[i] <= x {
            i += 1;
        }
        while j < n && xb[j] <= x {
            j += 1;
        }
        prev = Some(x);
    }
    Ok(total / T::of_usize(n))
}

/// `|trace(A - B)| / n`, the gap between mean eigenvalues.
pub fn mean_spectral_gap<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<T> {
    let n = a.order();
    if b.order() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: b.order(),
        });
    }
    if n == 0 {
        return Ok(T::zero());
    }
    let tr = (0..n).fold(T::zero(), |s, i| s + (a.get(i, i) - b.get(i, i)));
    Ok(tr.abs() / T::of_usize(n))
}

/// `(1/n) sum |f(lambda_(i)) - f(kappa_(i))|^2`, pairing the `i`-th largest
/// values of the two spectra.
pub fn conjecture_statistic<T: Scalar>(
    a: &Spectrum<T>,
    b: &Spectrum<T>,
    f: impl Fn(T) -> T,
) -> Result<T> {
    let n = same_len(a, b)?;
    let sum = a
        .values
        .iter()
        .zip(&b.values)
        .fold(T::zero(), |s, (&x, &y)| {
            let d = f(x) - f(y);
            s + d * d
        });
    Ok(sum / T::of_usize(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum_of(v: &[f64]) -> Spectrum<f64> {
        Spectrum::new(v.to_vec(), "test")
    }

    fn ring(n: usize) -> GeometricGraph<f64> {
        let lists = (0..n).map(|i| vec![(i + 1) % n]).collect();
        GeometricGraph::from_adjacency(2, 1.0, lists).unwrap()
    }

    fn complete(n: usize) -> GeometricGraph<f64> {
        let lists = (0..n).map(|i| (i + 1..n).collect()).collect();
        GeometricGraph::from_adjacency(2, 1.0, lists).unwrap()
    }

    #[test]
    fn complete_graph_walk() {
        let s = walk_spectrum(&complete(8), &EigenConfig::default()).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-10);
        for &v in &s.values()[1..] {
            assert!((v + 1.0 / 7.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cycle_walk() {
        let s = walk_spectrum(&ring(12), &EigenConfig::default()).unwrap();
        let want = Spectrum::new(
            (0..12)
                .map(|k| (2.0 * std::f64::consts::PI * k as f64 / 12.0).cos())
                .collect(),
            "closed form",
        );
        for (a, b) in s.values().iter().zip(want.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g =
            GeometricGraph::<f64>::from_adjacency(1, 0.1, vec![vec![1], vec![], vec![]]).unwrap();
        assert_eq!(
            walk_spectrum(&g, &EigenConfig::default()),
            Err(Error::IsolatedVertex(2))
        );
    }

    #[test]
    fn wasserstein_examples() {
        assert_eq!(
            wasserstein_distance(&spectrum_of(&[0.3, -0.2]), &spectrum_of(&[0.3, -0.2])).unwrap(),
            0.0
        );
        assert_eq!(
            wasserstein_distance(&spectrum_of(&[0.0]), &spectrum_of(&[1.0])).unwrap(),
            1.0
        );
        assert_eq!(
            wasserstein_distance(&spectrum_of(&[0.0, 1.0]), &spectrum_of(&[0.5, 0.5])).unwrap(),
            0.5
        );
        assert_eq!(
            wasserstein_cdf_form(&spectrum_of(&[0.0, 1.0]), &spectrum_of(&[0.5, 0.5])).unwrap(),
            0.5
        );
        assert_eq!(
            wasserstein_cdf_form(&spectrum_of(&[0.1, 0.7]), &spectrum_of(&[0.7, 0.1])).unwrap(),
            0.0
        );
        assert!(wasserstein_distance(&spectrum_of(&[0.0]), &spectrum_of(&[0.0, 1.0])).is_err());
        assert!(wasserstein_distance(&spectrum_of(&[]), &spectrum_of(&[])).is_err());
    }

    #[test]
    fn measure_cdf() {
        let m = spectrum_of(&[0.5, -1.0, 0.5, 1.0]).measure();
        assert_eq!(m.atoms(), &[-1.0, 0.5, 0.5, 1.0]);
        assert_eq!(m.total_mass(), 1.0);
        assert_eq!(m.cdf(-2.0), 0.0);
        assert_eq!(m.cdf(-1.0), 0.25);
        assert_eq!(m.cdf(0.5), 0.75);
        assert_eq!(m.cdf(0.99), 0.75);
        assert_eq!(m.cdf(1.0), 1.0);
        assert_eq!(m.integrate(|x| x), 0.25);
    }

    #[test]
    fn conjecture_examples() {
        let a = spectrum_of(&[1.0, 0.0]);
        let b = spectrum_of(&[1.0, 1.0]);
        assert_eq!(conjecture_statistic(&a, &a, |x| x.cos()).unwrap(), 0.0);
        assert_eq!(conjecture_statistic(&a, &b, |x| x).unwrap(), 0.5);
    }

    #[test]
    fn mean_gap_is_trace_difference() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(mean_spectral_gap(&a, &a).unwrap(), 0.0);
        assert_eq!(
            mean_spectral_gap(&a, &b).unwrap(),
            (a.trace() - b.trace()).abs() / 2.0
        );
    }

    #[test]
    fn spectrum_csv() {
        let mut buf = Vec::new();
        spectrum_of(&[0.25, 1.0])
            .write_csv(&[("n", "2".into())], &mut buf)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# source=test");
        assert_eq!(lines[1], "# n=2");
        assert_eq!(lines[2], "rank,eigenvalue");
        assert_eq!(lines[3], "1,1.0000000000000000e0");
        assert_eq!(
            lines[4].split(',').nth(1).unwrap().parse::<f64>().unwrap(),
            0.25
        );
    }
}
