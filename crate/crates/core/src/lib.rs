//! Random geometric graphs, their lattice counterparts, and the spectra of
//! the simple random walks on them.
//!
//! The numerical core is generic over [`Scalar`] (`f32`/`f64`); the aliases
//! below fix it to `f64`, which is what the experiment harness uses.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod matching;
pub mod scalar;
pub mod seed;
mod spatial;
pub mod spectra;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point = geometry::Point<f64>;
pub type PointSet = geometry::PointSet<f64>;
pub type RadiusSchedule = geometry::RadiusSchedule<f64>;
pub type GeometricGraph = graph::GeometricGraph<f64>;
pub type DenseMatrix = graph::DenseMatrix<f64>;
pub type RowStochasticMatrix = graph::RowStochasticMatrix<f64>;
pub type SymmetricMatrix = graph::SymmetricMatrix<f64>;
pub type Matching = matching::Matching<f64>;
pub type RateEnvelope = matching::RateEnvelope<f64>;
pub type Spectrum = spectra::Spectrum<f64>;
pub type SpectralMeasure = spectra::SpectralMeasure<f64>;
pub type StaircaseApprox = spectra::StaircaseApprox<f64>;
pub type BoundParams = bounds::BoundParams<f64>;
