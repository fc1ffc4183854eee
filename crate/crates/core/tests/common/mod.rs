#![allow(dead_code)]

use rgg_core::seed::{stream, uniform_f64, StreamRng};

pub struct Uniform(StreamRng);

impl Uniform {
    pub fn new(seed: u64) -> Self {
        Uniform(stream(seed))
    }

    pub fn next(&mut self) -> f64 {
        uniform_f64(&mut self.0)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }

    pub fn index(&mut self, n: usize) -> usize {
        ((self.next() * n as f64) as usize).min(n - 1)
    }
}

/// A random function on `[-1, 1]` with Lipschitz constant at most `lipschitz`:
/// a few sinusoids plus a kink, with weights normalised so the slopes sum to
/// at most `lipschitz`.
pub fn random_lipschitz(rng: &mut Uniform, lipschitz: f64) -> impl Fn(f64) -> f64 {
    let waves: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.range(-1.0, 1.0),
                rng.range(0.5, 12.0),
                rng.range(0.0, 6.3),
            )
        })
        .collect();
    let kink = (rng.range(-1.0, 1.0), rng.range(-0.9, 0.9));
    let slope: f64 = waves.iter().map(|(a, w, _)| a.abs() * w).sum::<f64>() + kink.0.abs();
    let scale = lipschitz / slope;
    move |x: f64| {
        let s: f64 = waves
            .iter()
            .map(|(a, w, phi)| a * (w * x + phi).sin())
            .sum();
        scale * (s + kink.0 * (x - kink.1).abs())
    }
}

#[allow(clippy::needless_range_loop)]
/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap();
        if m[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

#[allow(clippy::needless_range_loop)]
/// Solves `m x = b` with partial pivoting.
pub fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = m.len();
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap();
        m.swap(piv, c);
        b.swap(piv, c);
        let d = if m[c][c] == 0.0 { 1e-300 } else { m[c][c] };
        for r in c + 1..n {
            let f = m[r][c] / d;
            if f != 0.0 {
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        let d = if m[r][r] == 0.0 { 1e-300 } else { m[r][r] };
        x[r] = (b[r] - s) / d;
    }
    x
}

/// `min ||M v - lambda v||` over unit `v` found by a few inverse-iteration steps.
pub fn inverse_iteration_residual(m: &[Vec<f64>], lambda: f64, seed: u64) -> f64 {
    let n = m.len();
    let norm: f64 = m
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let shift = lambda + 1e-10 * norm;
    let shifted: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m[i][j] - if i == j { shift } else { 0.0 })
                .collect()
        })
        .collect();
    let mut rng = Uniform::new(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.range(-1.0, 1.0)).collect();
    for _ in 0..3 {
        v = solve(shifted.clone(), v);
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= len);
    }
    (0..n)
        .map(|i| {
            let mv: f64 = (0..n).map(|j| m[i][j] * v[j]).sum();
            (mv - lambda * v[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}
