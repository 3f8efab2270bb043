//! Slice-regular quaternionic polynomials and their fractional calculus.
//!
//! The crate works with polynomials `f(q) = sum q^n a_n` with quaternionic
//! coefficients on the right, the noncommutative `*`-product under which
//! they stay regular, regular quotients `den^{-*} * num`, the structure of
//! zero sets (isolated points and whole slice spheres), and the two faces
//! of linear fractional transformations: pointwise on the extended
//! quaternions and regular via quotients, including the Moebius maps of
//! the unit ball.
//!
//! Randomized verification suites for the algebraic laws live in
//! [`verify`]; bulk sampling helpers in [`grid`] and [`batch`] run on a
//! thread pool under the default `parallel` feature and sequentially
//! without it, with identical results.

pub mod batch;
pub mod error;
pub mod fractional;
pub mod grid;
pub mod matrix;
pub mod poly;
pub mod quaternion;
pub mod quotient;
pub mod verify;
pub mod zeros;

pub use error::{Error, SingularLocus};
pub use fractional::{
    act, canonical_form, canonical_rational, classify_pole, generators_decompose,
    generators_eval, lft_eval, moebius_from_params, moebius_map_pair, moebius_params,
    relation_transport_eval, rft_eval, rft_rational, CanonicalRFT, Generator, PoleClass,
};
pub use grid::{grid_points, sample_grid, GridSample, GridSpec};
pub use matrix::{MatrixH, Sp11Report};
pub use poly::{RegularPolynomial, SphereAffine};
pub use quaternion::{
    sphere_transport_lemma, ExtendedQuaternion, ImaginaryUnit, Quaternion, QuaternionSampler,
    Region, SliceSphere,
};
pub use quotient::{transport, RegularRational, Singularity};
pub use verify::{run_suite, CheckReport, Suite, SuiteReport};
pub use zeros::{
    conjugate_zero_pairing, real_poly_roots, sphere_min_scan, zero_set, IsolatedZero, RealPolyRoot,
    SphereZero, SphericalZero, ZeroSet,
};
