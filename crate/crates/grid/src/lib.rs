//! Numerical dispersion operators on rectangular Euclidean grids.
//!
//! This is the floating-point companion to the exact finite layer: ball
//! averages of powered difference quotients recover squared gradient norms
//! in the small-radius limit, the oriented variant halves them at interior
//! points and vanishes at minima, and a weighted measure construction
//! realizes `‖R(x)∇f(x)‖²` for positive-semidefinite matrix fields `R`.
//! Everything here is binary64 with stated tolerances; the exact layer
//! never depends on it.

#![allow(clippy::needless_range_loop)]

pub mod domain;
pub mod dispersion;
pub mod gfield;
pub mod mc;
pub mod nonlocal;
pub mod weighted;

pub use domain::{GridDomain, RadiusSweep};
pub use dispersion::{dispersion_limit, grid_dispersion, DispersionEstimate};
pub use gfield::{Analytic, GridField};
pub use mc::mc_ball_identity;
pub use nonlocal::nonlocal_grid_operator;
pub use weighted::{weighted_dispersion_check, WeightedMeasureSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("point {0:?} is outside the box")]
    OutsideBox(Vec<f64>),
    #[error("radius {radius} is below two grid cells ({min})")]
    RadiusTooSmall { radius: f64, min: f64 },
    #[error("empty integration region")]
    EmptyRegion,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("sweep needs at least {0} radii")]
    SweepTooShort(usize),
    #[error("matrix field: {0}")]
    MatrixField(String),
    #[error(transparent)]
    Core(#[from] descent_core::Error),
}

pub type Result<T> = std::result::Result<T, GridError>;
