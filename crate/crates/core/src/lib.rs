//! Exact expected signature of planar Brownian motion run until it first
//! leaves the unit disc.
//!
//! The pipeline works in the truncated tensor algebra over the plane with
//! exact Gaussian-rational coefficients:
//!
//! * [`tensor`] and [`eigen`]: the algebra, the quarter-turn eigenbasis and
//!   its grading;
//! * [`recurrence`]: the graded radial coefficients `aₙ^β`, obtained from a
//!   generating-function solution of the radial recurrence and a Neumann
//!   series for the boundary data;
//! * [`evaluator`]: exact Cartesian polynomials per tensor level and numeric
//!   evaluation;
//! * [`pde`]: an independent oracle solving the defining elliptic system
//!   level by level as polynomial Dirichlet problems;
//! * [`mc`]: a Monte-Carlo estimator for statistical cross-checks.

pub mod eigen;
pub mod error;
pub mod evaluator;
pub mod field;
pub mod linalg;
pub mod mc;
pub mod pde;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod tensor;
pub mod word;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use scalar::{GaussianRational, Rational};
pub use tensor::{Basis, LevelComponent, Mat2, TensorSeries};
pub use word::Word;
