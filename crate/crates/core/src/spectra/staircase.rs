//! Piecewise-linear approximation of Lipschitz functions by a finite sum of
//! clipped ramps.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The clipped ramp `g(y) = y` on `[0, eps]`, `0` below and `eps` above.
pub fn ramp<T: Scalar>(y: T, eps: T) -> T {
    if y <= T::zero() {
        T::zero()
    } else if y >= eps {
        eps
    } else {
        y
    }
}

/// Interpolant of `f` at the nodes `lo, lo + eps, lo + 2 eps, ...`, the last
/// node clipped to `hi`.
///
/// Writing `c_k = (f(x_{k+1}) - f(x_k)) / (L eps)`, the approximant equals
/// `f(lo) + L sum_k c_k g(x - x_k)` with every `c_k` in `[-1, 1]` when `f` is
/// `L`-Lipschitz, and deviates from `f` by at most `L eps / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseApprox<T> {
    epsilon: T,
    lipschitz: T,
    nodes: Vec<T>,
    node_values: Vec<T>,
}

/// Builds the approximant. `f` is assumed `lipschitz`-Lipschitz on `[lo, hi]`;
/// that is not checked.
pub fn lipschitz_staircase<T: Scalar>(
    f: impl Fn(T) -> T,
    lipschitz: T,
    eps: T,
    domain: (T, T),
) -> Result<StaircaseApprox<T>> {
    let (lo, hi) = domain;
    if !(hi > lo) {
        return Err(Error::Domain(format!("empty domain [{lo}, {hi}]")));
    }
    if !(eps > T::zero()) || eps >= hi - lo {
        return Err(Error::Domain(format!(
            "step {eps} degenerate on a domain of length {}",
            hi - lo
        )));
    }
    if !(lipschitz > T::zero()) {
        return Err(Error::Domain(format!(
            "Lipschitz constant {lipschitz} must be positive"
        )));
    }
    let steps = ((hi - lo) / eps).ceil().to_usize().unwrap_or(0).max(1);
    let nodes: Vec<T> = (0..=steps)
        .map(|k| (lo + T::of_usize(k) * eps).min(hi))
        .collect();
    let node_values = nodes.iter().map(|&x| f(x)).collect();
    Ok(StaircaseApprox {
        epsilon: eps,
        lipschitz,
        nodes,
        node_values,
    })
}

impl<T: Scalar> StaircaseApprox<T> {
    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn domain(&self) -> (T, T) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[T] {
        &self.node_values
    }

    /// Ramp weights `c_k`, one per node interval; in `[-1, 1]` for an
    /// admissible input function.
    pub fn ramp_coefficients(&self) -> Vec<T> {
        self.nodes
            .windows(2)
            .zip(self.node_values.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / ((x[1] - x[0]) * self.lipschitz))
            .collect()
    }

    /// Linear interpolation between neighbouring nodes; clamped outside the domain.
    pub fn eval(&self, x: T) -> T {
        let (lo, hi) = self.domain();
        let x = x.max(lo).min(hi);
        let last = self.nodes.len() - 2;
        let k = ((x - lo) / self.epsilon)
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(last);
        let (x0, x1) = (self.nodes[k], self.nodes[k + 1]);
        let (y0, y1) = (self.node_values[k], self.node_values[k + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// The same function assembled from the ramp decomposition.
    pub fn eval_ramps(&self, x: T) -> T {
        let (lo, hi) = self.domain();
        let x = x.max(lo).min(hi);
        self.ramp_coefficients()
            .iter()
            .zip(&self.nodes)
            .fold(self.node_values[0], |acc, (&c, &node)| {
                acc + self.lipschitz * c * ramp(x - node, self.epsilon)
            })
    }

    /// Largest `|f - approx|` over a uniform grid `refine` times finer than the nodes.
    pub fn sup_error(&self, f: impl Fn(T) -> T, refine: usize) -> T {
        let (lo, hi) = self.domain();
        let steps = self.nodes.len().saturating_sub(1) * refine.max(1);
        (0..=steps)
            .map(|k| lo + (hi - lo) * T::of_usize(k) / T::of_usize(steps))
            .map(|x| (f(x) - self.eval(x)).abs())
            .fold(T::zero(), T::max)
    }
}
