//! Closed-form tail bounds for the walk-matrix and spectral-measure deviations.
//!
//! Every evaluator returns the raw value, including vacuous values above one;
//! [`is_informative`] tells them apart.

use std::fmt::Display;

use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams<T> {
    pub n: usize,
    pub d: usize,
    pub r: T,
    /// Deviation parameter.
    pub t: T,
    pub c_d: T,
    /// Ratio of the almost-sure matching-distance bound to the radius.
    pub m_plus_over_r: T,
}

impl<T: Scalar> BoundParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if self.d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(self.r > T::zero()) {
            return Err(Error::Domain(format!("radius {} must be positive", self.r)));
        }
        if !(self.t >= T::zero()) {
            return Err(Error::Domain(format!(
                "deviation {} must be non-negative",
                self.t
            )));
        }
        if !(self.c_d > T::zero()) {
            return Err(Error::Domain(format!(
                "c_d = {} must be positive",
                self.c_d
            )));
        }
        if !(self.m_plus_over_r >= T::zero() && self.m_plus_over_r < T::of(0.5)) {
            return Err(Error::Domain(format!(
                "M+/r = {} outside [0, 1/2)",
                self.m_plus_over_r
            )));
        }
        Ok(())
    }

    pub fn a(&self) -> Result<T> {
        a_of_n(self.n, self.d, self.r)
    }
}

pub fn is_informative<T: Scalar>(bound: T) -> bool {
    bound < T::one()
}

/// Degree scale `a(n) = n pi_d r^d`.
pub fn a_of_n<T: Scalar>(n: usize, d: usize, r: T) -> Result<T> {
    Ok(T::of_usize(n) * unit_ball_volume::<T>(d)? * r.powi(d as i32))
}

/// `2 exp(-(1/2) (t / (1 + t))^2 mean)`: bound on
/// `P(|1/X - 1/EX| > t / EX)` for binomial `X` with mean `mean`.
pub fn reciprocal_tail_bound<T: Scalar>(t: T, mean: T) -> Result<T> {
    if !(t >= T::zero()) || !(mean > T::zero()) {
        return Err(Error::Domain(format!(
            "need t >= 0 and mean > 0, got t = {t}, mean = {mean}"
        )));
    }
    let ratio = t / (T::one() + t);
    let half = T::of(0.5);
    Ok((T::of(2.0) * (-(half * ratio * ratio * mean)).exp())
        .max(T::zero())
        .min(T::of(2.0)))
}

/// `2n [2 exp(-(1/2)(t/(8t+16))^2 a) + exp(-c_d (t^2/2) a)]`, the bound on
/// `P(||P_X - P_D||_HS^2 > t / a)`.
pub fn hs_tail_bound<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    p.validate()?;
    let [_, middle, last] = hs_terms(p)?;
    Ok(T::of_usize(2 * p.n) * (T::of(2.0) * middle + last))
}

/// The three-term form the two-term bound packages:
/// `2n [exp(-(1/2)(t/(t+8))^2 a) + exp(-(1/2)(t/(8t+16))^2 a) + exp(-c_d (t^2/2) a)]`.
pub fn hs_tail_bound_three_term<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    p.validate()?;
    let [first, middle, last] = hs_terms(p)?;
    Ok(T::of_usize(2 * p.n) * (first + middle + last))
}

/// The three exponentials, unscaled.
pub fn hs_terms<T: Scalar>(p: &BoundParams<T>) -> Result<[T; 3]> {
    let a = p.a()?;
    let t = p.t;
    let half = T::of(0.5);
    let r1 = t / (t + T::of(8.0));
    let r2 = t / (T::of(8.0) * t + T::of(16.0));
    Ok([
        (-(half * r1 * r1 * a)).exp(),
        (-(half * r2 * r2 * a)).exp(),
        (-(p.c_d * t * t * half * a)).exp(),
    ])
}

/// `(16 n a^{1/4} / t) [2 exp(-(1/2)(t^4/(8t^4+4096))^2 a) + exp(-c_d (t^8/512) a)]`,
/// the bound on `P(W1(mu_X, mu_D) > t / a^{1/4})`.
pub fn ws_tail_bound<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    p.validate()?;
    if p.t == T::zero() {
        return Err(Error::Domain(
            "the Wasserstein bound divides by t; t must be positive".into(),
        ));
    }
    let a = p.a()?;
    let t = p.t;
    let t4 = t.powi(4);
    let ratio = t4 / (T::of(8.0) * t4 + T::of(4096.0));
    let bracket = T::of(2.0) * (-(T::of(0.5) * ratio * ratio * a)).exp()
        + (-(p.c_d * t4 * t4 / T::of(512.0) * a)).exp();
    Ok(T::of(16.0) * T::of_usize(p.n) * a.powf(T::of(0.25)) / t * bracket)
}

/// Largest `c_d` with
/// `c_d t / 8 <= min((1 + t/8) / (1 - 2q)^d - 1, |(1 - t/8) / (1 - 2q)^d - 1|)`,
/// i.e. `(8/t)` times that minimum.
///
/// Generic over any signed field so it can be evaluated exactly over rationals.
pub fn c_d_feasible<T>(t: T, q: T, d: usize) -> Result<T>
where
    T: Num + Signed + PartialOrd + Copy + Display,
{
    let two = T::one() + T::one();
    let eight = two * two * two;
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    if q < T::zero() || !(q < T::one() / two) {
        return Err(Error::Domain(format!("q = {q} outside [0, 1/2)")));
    }
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let base = T::one() - two * q;
    let shrink = (0..d).fold(T::one(), |acc, _| acc * base);
    let upper = (T::one() + t / eight) / shrink - T::one();
    let lower = ((T::one() - t / eight) / shrink - T::one()).abs();
    let binding = if upper < lower { upper } else { lower };
    Ok(eight / t * binding)
}
