//! Projection-based metrics on convex polytopes.
//!
//! The kernels are generic over the scalar type (`f32` or `f64`); the
//! aliases at the crate root fix the double-precision instantiation used by
//! the estimators and experiment runners.

pub mod bodies;
pub mod constructions;
pub mod error;
pub mod grassmann;
pub mod metrics;
pub mod numerics;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type VPolytope = bodies::VPolytope<f64>;
pub type Interval = bodies::Interval<f64>;
pub type Matrix = numerics::Matrix<f64>;
pub type Subspace = grassmann::Subspace<f64>;
pub type GoodnessCertificate = grassmann::GoodnessCertificate<f64>;
pub type MetricEstimate = metrics::MetricEstimate<f64>;
pub type FiberProfile = metrics::FiberProfile<f64>;
pub type NeedleSpec = constructions::NeedleSpec<f64>;
pub type ScheduleRow = constructions::ScheduleRow<f64>;
