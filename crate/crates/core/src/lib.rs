//! Euler characteristic processes of random geometric complexes built on the
//! sample points that fall outside an expanding ball.
//!
//! The crate samples spherically symmetric heavy- and exponential-tailed
//! point clouds ([`radial_models`]), builds Vietoris–Rips and Čech complexes
//! on the exterior points ([`complexes`]), evaluates the Euler characteristic
//! as a function of the filtration scale ([`ec_process`]), computes the
//! deterministic limit curves of the scaled process ([`limits`]) and runs
//! convergence studies ([`experiments`]).
//!
//! Geometry is generic over the coordinate type through [`Scalar`]; the
//! aliases below fix it to `f64` (or `f32`).

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexes;
pub mod ec_process;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod limits;
pub mod quadrature;
pub mod radial_models;
pub mod rng;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PointSet64 = geometry::PointSet<f64>;
pub type PointCloud64 = radial_models::PointCloud<f64>;
pub type ComplexRule64 = complexes::ComplexRule<f64>;
pub type SimplexCounts64 = complexes::SimplexCounts<f64>;
pub type EcProcess64 = ec_process::EcProcess<f64>;

pub type PointSet32 = geometry::PointSet<f32>;
pub type PointCloud32 = radial_models::PointCloud<f32>;
pub type ComplexRule32 = complexes::ComplexRule<f32>;
pub type SimplexCounts32 = complexes::SimplexCounts<f32>;
pub type EcProcess32 = ec_process::EcProcess<f32>;
