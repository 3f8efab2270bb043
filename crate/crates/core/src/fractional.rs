//! Linear fractional transformations of the quaternions and their regular
//! counterparts.
//!
//! An invertible matrix `[[a, c], [b, d]]` acts two ways:
//!
//! * pointwise, `F(q) = (qc + d)^{-1} (qa + b)` on `H + {infinity}`;
//! * regularly, as the quotient `(qc + d)^{-*} * (qa + b)`.
//!
//! The pointwise maps compose along matrix products as a right action
//! (`F_{AB} = F_B . F_A`), decompose into affine maps and the reciprocal,
//! and restrict to ball automorphisms exactly for the isometries of the
//! indefinite form `diag(1, -1)`. The regular counterparts act on
//! quotients coefficientwise and agree with the pointwise map after a
//! conjugation transport of the argument.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::MatrixH;
use crate::poly::RegularPolynomial;
use crate::quaternion::{ExtendedQuaternion, Quaternion, SliceSphere};
use crate::quotient::RegularRational;

/// Pole snap: `(qc + d)` below this relative size maps to infinity.
pub const POLE_SNAP_TOL: f64 = 1e-14;

/// Relative tolerance for recovering Moebius parameters from a matrix.
pub const PARAM_RECOVERY_TOL: f64 = 1e-8;

/// The pointwise map `q -> (qc + d)^{-1} (qa + b)` on the extended
/// quaternions: when `c = 0` infinity is fixed, otherwise the pole
/// `-c^{-1} d` maps to infinity and infinity to `c^{-1} a`.
pub fn lft_eval(m: &MatrixH, q: ExtendedQuaternion) -> ExtendedQuaternion {
    let scale = 1.0 + m.entry_scale();
    match q {
        ExtendedQuaternion::Infinity => {
            if m.c_is_zero() {
                ExtendedQuaternion::Infinity
            } else {
                match m.c.inverse() {
                    Ok(ci) => ExtendedQuaternion::Finite(ci * m.a),
                    Err(_) => ExtendedQuaternion::Infinity,
                }
            }
        }
        ExtendedQuaternion::Finite(q) => {
            let den = q * m.c + m.d;
            if den.norm() <= POLE_SNAP_TOL * (1.0 + q.norm()) * scale {
                return ExtendedQuaternion::Infinity;
            }
            match den.inverse() {
                Ok(di) => ExtendedQuaternion::Finite(di * (q * m.a + m.b)),
                Err(_) => ExtendedQuaternion::Infinity,
            }
        }
    }
}

/// One factor in a decomposition into elementary maps, applied in sequence
/// order (first element first).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// `q -> qa + b`.
    Affine { a: Quaternion, b: Quaternion },
    /// `q -> q^{-1}`.
    Reciprocal,
}

impl Generator {
    pub fn eval(&self, q: ExtendedQuaternion) -> ExtendedQuaternion {
        match (*self, q) {
            (Generator::Affine { .. }, ExtendedQuaternion::Infinity) => {
                ExtendedQuaternion::Infinity
            }
            (Generator::Affine { a, b }, ExtendedQuaternion::Finite(q)) => {
                ExtendedQuaternion::Finite(q * a + b)
            }
            (Generator::Reciprocal, ExtendedQuaternion::Infinity) => {
                ExtendedQuaternion::Finite(Quaternion::ZERO)
            }
            (Generator::Reciprocal, ExtendedQuaternion::Finite(q)) => {
                if q.is_zero() {
                    ExtendedQuaternion::Infinity
                } else {
                    match q.inverse() {
                        Ok(qi) => ExtendedQuaternion::Finite(qi),
                        Err(_) => ExtendedQuaternion::Infinity,
                    }
                }
            }
        }
    }
}

/// Writes the pointwise map of an invertible matrix as a sequence of
/// affine maps and reciprocals: `[l, rho, l']` when `c` is invertible
/// (with `l = qc + d` and `l'` built from the Schur-type complement), and
/// `[l, rho, l', rho]` in the affine case `c = 0`.
pub fn generators_decompose(m: &MatrixH) -> Result<Vec<Generator>, Error> {
    m.inverse()?;
    if m.c_is_zero() {
        return Ok(vec![
            Generator::Affine { a: m.a, b: m.b },
            Generator::Reciprocal,
            Generator::Affine {
                a: m.d,
                b: Quaternion::ZERO,
            },
            Generator::Reciprocal,
        ]);
    }
    let ci = m.c.inverse()?;
    let schur = m.b - m.d * ci * m.a;
    Ok(vec![
        Generator::Affine { a: m.c, b: m.d },
        Generator::Reciprocal,
        Generator::Affine {
            a: schur,
            b: ci * m.a,
        },
    ])
}

/// Applies a generator sequence in order.
pub fn generators_eval(seq: &[Generator], q: ExtendedQuaternion) -> ExtendedQuaternion {
    seq.iter().fold(q, |acc, g| g.eval(acc))
}

/// The regular counterpart as a stored quotient:
/// `(qc + d)^{-*} * (qa + b)`.
pub fn rft_rational(m: &MatrixH) -> Result<RegularRational, Error> {
    m.inverse()?;
    RegularRational::new(
        RegularPolynomial::from_coeffs(vec![m.d, m.c]),
        RegularPolynomial::from_coeffs(vec![m.b, m.a]),
    )
}

/// Evaluates the regular counterpart at one point.
pub fn rft_eval(m: &MatrixH, q: Quaternion) -> Result<Quaternion, Error> {
    rft_rational(m)?.eval(q)
}

/// The right action of a matrix on a quotient `f^{-*} * g`, coefficientwise:
/// the result is `(gc + fd)^{-*} * (ga + fb)`. Satisfies
/// `act(act(r, A), B) = act(r, AB)` exactly up to rounding.
pub fn act(r: &RegularRational, m: &MatrixH) -> Result<RegularRational, Error> {
    m.inverse()?;
    let den = r.num().scale_right(m.c).add(&r.den().scale_right(m.d));
    let num = r.num().scale_right(m.a).add(&r.den().scale_right(m.b));
    RegularRational::new(den, num)
}

/// Evaluates the transformed quotient `r.A` through the pointwise map and a
/// conjugation transport:
/// `(r.A)(q) = F_A(r(T(q)))` with `T` the transport of the denominator
/// quotient `gc + fd` over `f`. Independent route kept as a cross-check of
/// [`act`].
pub fn relation_transport_eval(
    r: &RegularRational,
    m: &MatrixH,
    q: Quaternion,
) -> Result<Quaternion, Error> {
    let u = r.num().scale_right(m.c).add(&r.den().scale_right(m.d));
    let w = u.regular_conjugate().star_mul(r.den())?;
    let v = w.eval(q);
    let vi = v.inverse()?;
    let t = vi * q * v;
    let val = r.eval(t)?;
    match lft_eval(m, ExtendedQuaternion::Finite(val)) {
        ExtendedQuaternion::Finite(out) => Ok(out),
        ExtendedQuaternion::Infinity => Err(Error::Domain(
            "transported value lands on the pole of the pointwise map".into(),
        )),
    }
}

/// Canonical shape of a regular fractional transformation: affine, or a
/// reciprocal-type map with a single pole parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalRFT {
    /// `q a + b`.
    Affine { a: Quaternion, b: Quaternion },
    /// `(q - p)^{-*} * (q a + b)`.
    Pole {
        a: Quaternion,
        b: Quaternion,
        p: Quaternion,
    },
}

/// Normalizes an invertible matrix to its canonical transformation shape
/// by clearing the leading denominator coefficient.
pub fn canonical_form(m: &MatrixH) -> Result<CanonicalRFT, Error> {
    m.inverse()?;
    if m.c_is_zero() {
        let di = m.d.inverse()?;
        return Ok(CanonicalRFT::Affine {
            a: di * m.a,
            b: di * m.b,
        });
    }
    let ci = m.c.inverse()?;
    Ok(CanonicalRFT::Pole {
        a: ci * m.a,
        b: ci * m.b,
        p: -(ci * m.d),
    })
}

/// The canonical shape as a stored quotient.
pub fn canonical_rational(cf: &CanonicalRFT) -> Result<RegularRational, Error> {
    Ok(match *cf {
        CanonicalRFT::Affine { a, b } => {
            RegularRational::from_polynomial(RegularPolynomial::from_coeffs(vec![b, a]))
        }
        CanonicalRFT::Pole { a, b, p } => RegularRational::new(
            RegularPolynomial::linear(p),
            RegularPolynomial::from_coeffs(vec![b, a]),
        )?,
    })
}

/// Where the regular counterpart is singular: nowhere (affine), at one
/// real point, or on one slice sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleClass {
    Affine,
    #[serde(rename = "real")]
    RealPole(f64),
    #[serde(rename = "sphere")]
    SpherePole(SliceSphere),
}

/// Classifies the singular locus of the regular counterpart.
pub fn classify_pole(m: &MatrixH) -> Result<PoleClass, Error> {
    Ok(match canonical_form(m)? {
        CanonicalRFT::Affine { .. } => PoleClass::Affine,
        CanonicalRFT::Pole { p, .. } => {
            let (x, y) = p.slice_coords();
            if y <= 1e-12 * (1.0 + p.norm()) {
                PoleClass::RealPole(x)
            } else {
                PoleClass::SpherePole(SliceSphere::new(x, y)?)
            }
        }
    })
}

/// The Moebius matrix with parameters `(a, u)`: `|a| < 1` interior, `u` a
/// unit quaternion. Normalized onto the indefinite isometry group; its
/// regular transformation maps the open unit ball onto itself, and its
/// pointwise map sends `a` to 0 and 0 to `-au`.
pub fn moebius_from_params(a: Quaternion, u: Quaternion) -> Result<MatrixH, Error> {
    if a.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "Moebius parameter must be interior to the unit ball (|a| = {})",
            a.norm()
        )));
    }
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "Moebius rotation parameter must be a unit quaternion (|u| = {})",
            u.norm()
        )));
    }
    let raw = MatrixH::new(u, -a.conj(), -(a * u), Quaternion::ONE);
    raw.sp11_normalize()
}

/// The normalized Moebius matrix whose pointwise map sends `a` to `b`,
/// both interior to the unit ball: the product of the matrix sending `a`
/// to 0, the real-parameter matrix sending 0 to `|b|`, and the rotation
/// aligning `|b|` with `b`.
pub fn moebius_map_pair(a: Quaternion, b: Quaternion) -> Result<MatrixH, Error> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "both points must be interior to the unit ball (|a| = {}, |b| = {})",
            a.norm(),
            b.norm()
        )));
    }
    let first = MatrixH::new(
        Quaternion::ONE,
        -a.conj(),
        -a,
        Quaternion::ONE,
    );
    if b.is_zero() {
        return first.sp11_normalize();
    }
    let t = b.norm();
    let radial = MatrixH::new(
        Quaternion::ONE,
        Quaternion::real(t),
        Quaternion::real(t),
        Quaternion::ONE,
    );
    let rotation = MatrixH::new(
        b * (1.0 / t),
        Quaternion::ZERO,
        Quaternion::ZERO,
        Quaternion::ONE,
    );
    first.mul(&radial).mul(&rotation).sp11_normalize()
}

/// Recovers `(a, u)` from any nonzero left scalar multiple of a Moebius
/// matrix: the rotation from the normalized top corner, the parameter
/// from the transformation's value at 0 (which is `-au`), with the
/// remaining entry cross-checked. Ill-conditioned or inconsistent input
/// is refused rather than guessed at.
pub fn moebius_params(m: &MatrixH) -> Result<(Quaternion, Quaternion), Error> {
    let scale = m.entry_scale();
    let lambda = m.d;
    if lambda.norm() <= 1e-12 * scale {
        return Err(Error::Domain(
            "matrix is not a scalar multiple of a Moebius matrix (vanishing corner)".into(),
        ));
    }
    let li = lambda.inverse()?;
    let u = li * m.a;
    if (u.norm() - 1.0).abs() > PARAM_RECOVERY_TOL {
        return Err(Error::Domain(format!(
            "recovered rotation is not a unit (|u| = {})",
            u.norm()
        )));
    }
    let value_at_zero = li * m.b;
    let a = -(value_at_zero * u.conj());
    if a.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "recovered fixed point is not interior (|a| = {})",
            a.norm()
        )));
    }
    let c_expected = -(lambda * a.conj());
    if (m.c - c_expected).norm() > PARAM_RECOVERY_TOL * (1.0 + scale) {
        return Err(Error::Domain(
            "matrix entries are inconsistent with the Moebius shape".into(),
        ));
    }
    Ok((a, u))
}
