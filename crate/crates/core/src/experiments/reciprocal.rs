//! Monte Carlo audit of the reciprocal binomial tail bound.

use rand_distr::{Binomial, Distribution};

use crate::bounds::reciprocal_tail_bound;
use crate::error::{Error, Result};
use crate::experiments::csv::{real, CsvRow};
use crate::seed::{mix64, stream};

/// Smallest `n p` for which conditioning on `X >= 1` is negligible.
pub const MIN_MEAN: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalRecord {
    pub n: u64,
    pub p: f64,
    pub t: f64,
    pub draws: usize,
    pub mean: f64,
    /// Frequency of `|1/X - 1/EX| > t/EX`; `X = 0` counts as a deviation.
    pub empirical: f64,
    pub std_error: f64,
    pub bound: f64,
    /// `empirical <= bound + 3 std_error`.
    pub within: bool,
    /// Set, with NaN statistics, when `n p` is below [`MIN_MEAN`].
    pub warning: Option<String>,
}

impl CsvRow for ReciprocalRecord {
    fn header(&self) -> Vec<String> {
        [
            "n",
            "p",
            "t",
            "draws",
            "mean",
            "empirical",
            "std_error",
            "bound",
            "within",
            "warning",
        ]
        .map(String::from)
        .to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            real(self.p),
            real(self.t),
            self.draws.to_string(),
            real(self.mean),
            real(self.empirical),
            real(self.std_error),
            real(self.bound),
            self.within.to_string(),
            self.warning.clone().unwrap_or_default(),
        ]
    }
}

fn pair_seed(master: u64, n: u64, p: f64) -> u64 {
    mix64(master ^ mix64(n.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ p.to_bits()))
}

/// One record per `(n, p, t)`, in grid order. All `t` of an `(n, p)` pair
/// share the same `draws` binomial samples.
pub fn run_reciprocal_mc(
    n_grid: &[u64],
    p_grid: &[f64],
    t_grid: &[f64],
    draws: usize,
    master_seed: u64,
) -> Result<Vec<ReciprocalRecord>> {
    if draws == 0 {
        return Err(Error::Domain("draws must be positive".into()));
    }
    if n_grid.is_empty() || p_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::Empty("n, p or t grid"));
    }
    if let Some(&t) = t_grid.iter().find(|&&t| !(t >= 0.0)) {
        return Err(Error::Domain(format!("t = {t} must be non-negative")));
    }
    let mut out = Vec::with_capacity(n_grid.len() * p_grid.len() * t_grid.len());
    for &n in n_grid {
        for &p in p_grid {
            let mean = n as f64 * p;
            if mean < MIN_MEAN {
                for &t in t_grid {
                    out.push(ReciprocalRecord {
                        n,
                        p,
                        t,
                        draws,
                        mean,
                        empirical: f64::NAN,
                        std_error: f64::NAN,
                        bound: f64::NAN,
                        within: false,
                        warning: Some(format!("np = {mean} < {MIN_MEAN}; skipped")),
                    });
                }
                continue;
            }
            let binomial = Binomial::new(n, p).map_err(|e| Error::Domain(e.to_string()))?;
            let mut rng = stream(pair_seed(master_seed, n, p));
            let samples: Vec<u64> = (0..draws).map(|_| binomial.sample(&mut rng)).collect();
            for &t in t_grid {
                let hits = samples
                    .iter()
                    .filter(|&&x| x == 0 || (1.0 / x as f64 - 1.0 / mean).abs() > t / mean)
                    .count();
                let empirical = hits as f64 / draws as f64;
                let std_error = (empirical * (1.0 - empirical) / draws as f64).sqrt();
                let bound = reciprocal_tail_bound(t, mean)?;
                out.push(ReciprocalRecord {
                    n,
                    p,
                    t,
                    draws,
                    mean,
                    empirical,
                    std_error,
                    bound,
                    within: empirical <= bound + 3.0 * std_error,
                    warning: None,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_deviation_never_happens() {
        let recs = run_reciprocal_mc(&[200, 1000], &[0.3], &[100.0], 10_000, 3).unwrap();
        for r in recs {
            assert_eq!(r.empirical, 0.0);
            let expect = 2.0 * (-0.5 * (100.0f64 / 101.0).powi(2) * r.mean).exp();
            assert!((r.bound - expect).abs() < 1e-15);
            assert!(r.within);
        }
    }

    #[test]
    fn small_means_are_warned() {
        let recs = run_reciprocal_mc(&[50], &[0.1], &[0.5], 10_000, 3).unwrap();
        assert!(recs[0].warning.is_some());
        assert!(recs[0].empirical.is_nan());
    }

    #[test]
    fn audit_point() {
        let recs = run_reciprocal_mc(&[200], &[0.3], &[0.5], 100_000, 11).unwrap();
        assert!(recs[0].within, "{:?}", recs[0]);
    }

    #[test]
    fn quadrupling_draws_halves_the_standard_error() {
        let a = run_reciprocal_mc(&[200], &[0.3], &[0.1], 25_000, 8).unwrap();
        let b = run_reciprocal_mc(&[200], &[0.3], &[0.1], 100_000, 8).unwrap();
        let ratio = b[0].std_error / a[0].std_error;
        assert!((ratio - 0.5).abs() <= 0.05, "{ratio}");
    }

    #[test]
    fn reproducible() {
        let a = run_reciprocal_mc(&[200, 1000], &[0.1, 0.5], &[0.25, 1.0], 20_000, 4).unwrap();
        let b = run_reciprocal_mc(&[200, 1000], &[0.1, 0.5], &[0.25, 1.0], 20_000, 4).unwrap();
        assert_eq!(a, b);
    }
}
