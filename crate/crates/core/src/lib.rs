//! Certified evaluation of Jacobian bounds for the barycenter map on
//! rank-one symmetric spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: exact rationals, outward-rounded rational intervals and
//!   enclosures of roots. Everything above it certifies inequalities by
//!   comparing exact interval endpoints.
//! * [`kernels`]: closed-form bound functions (the two-variable and reduced
//!   objective `P`, the cubic `Q`, the Jacobian bounds, the sequence `C_n`).
//! * [`optimizers`]: root isolation for `Q`, certified maxima of `P`, and the
//!   brute-force lattice oracles.
//! * [`gap`]: critical-exponent gap, homology-vanishing decisions and the
//!   critical-exponent lower bound.
//! * [`matrix`]: randomized checks of the determinant and eigenvalue
//!   inequalities behind the bound.
//! * [`suites`]: the verification suites driven by the CLI.

pub mod error;
pub mod gap;
pub mod kernels;
pub mod matrix;
pub mod numerics;
pub mod optimizers;
pub mod suites;

pub use error::{Error, Result};
pub use numerics::{Comparison, ExactReal, Interval, Mode, Rat, Scalar};
