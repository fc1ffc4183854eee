use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Growth envelope for the bottleneck matching distance between `n` uniform
/// points and the `n`-point lattice, up to the multiplicative `constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEnvelope<T> {
    pub d: usize,
    pub constant: T,
    /// Failure probability; only the one-dimensional envelope uses it.
    pub epsilon: Option<T>,
}

impl<T: Scalar> RateEnvelope<T> {
    pub fn new(d: usize) -> Self {
        RateEnvelope {
            d,
            constant: T::one(),
            epsilon: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// - `d >= 3`: `C (ln n / n)^(1/d)`
    /// - `d = 2`: `C (ln(n)^(3/2) / n)^(1/2)`
    /// - `d = 1`: `C (ln(1/eps) / n)^(1/2)`
    ///
    /// `n` is real so the envelope can be probed off the integers.
    pub fn evaluate(&self, n: T) -> Result<T> {
        if !(n > T::one()) {
            return Err(Error::Domain(format!("rate envelope needs n > 1, got {n}")));
        }
        let half = T::of(0.5);
        let base = match self.d {
            0 => return Err(Error::InvalidDimension(0)),
            1 => {
                let eps = self
                    .epsilon
                    .ok_or_else(|| Error::Domain("the d = 1 envelope needs epsilon".into()))?;
                if !(eps > T::zero() && eps < T::one()) {
                    return Err(Error::Domain(format!("epsilon {eps} outside (0, 1)")));
                }
                ((T::one() / eps).ln() / n).powf(half)
            }
            2 => (n.ln().powf(T::of(1.5)) / n).powf(half),
            d => (n.ln() / n).powf(T::one() / T::of_usize(d)),
        };
        Ok(self.constant * base)
    }
}
