//! Error type shared across the crate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quaternion::SliceSphere;

/// A singular locus: where a denominator symmetrization vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SingularLocus {
    #[serde(rename = "real")]
    RealPoint(f64),
    #[serde(rename = "sphere")]
    Sphere(SliceSphere),
}

impl std::fmt::Display for SingularLocus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularLocus::RealPoint(x) => write!(f, "real point {}", x),
            SingularLocus::Sphere(s) => write!(f, "sphere {} + {}S", s.x(), s.y()),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero quaternion")]
    DivisionByZero,

    #[error("not an imaginary unit: real part {re}, norm {norm}")]
    NotAUnit { re: f64, norm: f64 },

    #[error("degenerate sphere parameters x = {x}, y = {y} (need y > 0)")]
    InvalidSphere { x: f64, y: f64 },

    #[error("points do not lie on a common slice sphere")]
    NotSameSphere,

    #[error("pair is degenerate: |beta - conj(alpha)| = {separation}")]
    DegeneratePair { separation: f64 },

    #[error("invalid sampling region")]
    InvalidRegion,

    #[error("degree cap exceeded: result degree {degree} > cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("point is not a root: residual {residual} exceeds {tol}")]
    NotARoot { residual: f64, tol: f64 },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("zero denominator polynomial")]
    ZeroDenominator,

    #[error("evaluation at a singularity near {locus}: |den^s(q)| = {den_s}")]
    Singular { locus: SingularLocus, den_s: f64 },

    #[error("matrix is singular (invertibility residual {residual})")]
    SingularMatrix { residual: f64 },

    #[error("root finding did not converge after {iterations} iterations (max residual {residual})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}
