//! Step paths on a finite horizon, Skorokhod J1/M1 distances, pathwise Stieltjes
//! integrals against step integrators, and the window machinery used to study limits
//! of such integrals when integrand and integrator jump at nearby times.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod error;
pub mod experiments;
pub mod integral;
pub mod metrics;
pub mod path;
pub mod scenarios;

pub use error::{Error, Result};
pub use metrics::{d_j1, d_m1, MetricConfig};
pub use path::{CompletedGraph, Segment, StepPath};
