//! Regular quotients `den^{-*} * num` of regular polynomials.
//!
//! A quotient is stored as the pair `(den, num)` and evaluated through the
//! symmetrized denominator:
//!
//! ```text
//! (den^{-*} * num)(q) = den^s(q)^{-1} . (den^c * num)(q)
//! ```
//!
//! with the quaternion inverse multiplied from the left. `den^s(q)` is a
//! real number only when `q` lies in the slice plane of the coefficients;
//! in general it is a full quaternion, and the left-inverse form above is
//! the one that matches the transported evaluation
//! `den(T(q))^{-1} num(T(q))` with `T(q) = den^c(q)^{-1} q den^c(q)`.
//!
//! Evaluation is singular exactly where `den^s` vanishes: isolated real
//! points and whole slice spheres. No common-factor cancellation is
//! attempted; products grow the stored degrees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, SingularLocus};
use crate::poly::RegularPolynomial;
use crate::quaternion::{Quaternion, SliceSphere};
use crate::zeros::{
    real_linear_divisibility, real_poly_roots, sphere_divisibility, RealPolyRoot,
};

/// Evaluation refuses points with
/// `|den^s(q)| <= 1e-12 * scale(den^s) * (1 + |q|)^(2 deg den)`.
pub const SINGULAR_GUARD_TOL: f64 = 1e-12;

/// A regular quotient of polynomials, `den^{-*} * num`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularRational {
    den: RegularPolynomial,
    num: RegularPolynomial,
}

impl<'de> Deserialize<'de> for RegularRational {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Repr {
            den: RegularPolynomial,
            num: RegularPolynomial,
        }
        let repr = Repr::deserialize(deserializer)?;
        RegularRational::new(repr.den, repr.num).map_err(serde::de::Error::custom)
    }
}

impl RegularRational {
    /// `den^{-*} * num`; the denominator must be nonzero.
    pub fn new(den: RegularPolynomial, num: RegularPolynomial) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RegularRational { den, num })
    }

    /// A polynomial viewed as a quotient with denominator 1.
    pub fn from_polynomial(num: RegularPolynomial) -> Self {
        RegularRational {
            den: RegularPolynomial::one(),
            num,
        }
    }

    /// The regular reciprocal `f^{-*}`.
    pub fn reciprocal(f: RegularPolynomial) -> Result<Self, Error> {
        Self::new(f, RegularPolynomial::one())
    }

    /// The identity map `q`.
    pub fn identity() -> Self {
        Self::from_polynomial(RegularPolynomial::identity())
    }

    pub fn den(&self) -> &RegularPolynomial {
        &self.den
    }

    pub fn num(&self) -> &RegularPolynomial {
        &self.num
    }

    /// Precomputes the symmetrized denominator and effective numerator for
    /// repeated evaluation.
    pub fn evaluator(&self) -> Result<RationalEvaluator, Error> {
        let den_s = self.den.symmetrization()?;
        let effective_num = self.den.regular_conjugate().star_mul(&self.num)?;
        let guard_scale = den_s.coeff_scale();
        let deg2 = den_s.degree().unwrap_or(0) as i32;
        Ok(RationalEvaluator {
            den_s,
            effective_num,
            guard_scale,
            deg2,
        })
    }

    /// Evaluates at one point. For many points build an [`evaluator`] once.
    ///
    /// [`evaluator`]: Self::evaluator
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion, Error> {
        self.evaluator()?.eval(q)
    }

    /// Evaluates through the transported route
    /// `den(T(q))^{-1} num(T(q))`, `T(q) = den^c(q)^{-1} q den^c(q)`.
    /// Agrees with [`eval`](Self::eval) wherever both are defined; kept as
    /// an independent cross-check.
    pub fn relation_eval(&self, q: Quaternion) -> Result<Quaternion, Error> {
        let ev = self.evaluator()?;
        ev.guard(q)?;
        let t = transport(&self.den, q)?;
        let a = self.den.eval(t);
        let b = self.num.eval(t);
        Ok(a.inverse()? * b)
    }

    /// The regular product of two quotients:
    /// `(f^{-*} g) * (h^{-*} k) = (f^s h^s)^{-*} * (f^c * g * h^c * k)`.
    pub fn star_mul(&self, other: &Self) -> Result<Self, Error> {
        let den = self
            .den
            .symmetrization()?
            .star_mul(&other.den.symmetrization()?)?;
        let num = self
            .den
            .regular_conjugate()
            .star_mul(&self.num)?
            .star_mul(&other.den.regular_conjugate())?
            .star_mul(&other.num)?;
        RegularRational::new(den, num)
    }

    /// Conjugation transport of the quotient itself, through the polynomial
    /// `num^c * den`; real scalar factors cancel in the sandwich
    /// `w(q)^{-1} q w(q)`.
    pub fn transport_point(&self, q: Quaternion) -> Result<Quaternion, Error> {
        let w = self.num.regular_conjugate().star_mul(&self.den)?;
        let v = w.eval(q);
        let vi = v.inverse()?;
        Ok(vi * q * v)
    }

    /// The singular loci (zeros of `den^s`) with their root multiplicities
    /// in `den^s`: real points carry the full even multiplicity, spheres
    /// the conjugate-pair multiplicity.
    pub fn singular_loci(&self) -> Result<Vec<(SingularLocus, usize)>, Error> {
        let den_s = self.den.symmetrization()?;
        if den_s.degree().map_or(true, |d| d == 0) {
            return Ok(Vec::new());
        }
        let roots = real_poly_roots(&den_s.real_coeffs()?)?;
        let mut out = Vec::with_capacity(roots.len());
        for root in roots {
            out.push(match root {
                RealPolyRoot::Real { x, multiplicity } => {
                    (SingularLocus::RealPoint(x), multiplicity)
                }
                RealPolyRoot::Pair { x, y, multiplicity } => {
                    (SingularLocus::Sphere(SliceSphere::new(x, y)?), multiplicity)
                }
            });
        }
        Ok(out)
    }

    /// The singular set with pole orders and removability flags.
    pub fn singular_set(&self) -> Result<Vec<Singularity>, Error> {
        if self.num.is_zero() {
            // The zero function: den^s divides out entirely.
            return Ok(Vec::new());
        }
        let loci = self.singular_loci()?;
        if loci.is_empty() {
            return Ok(Vec::new());
        }
        let effective = self.den.regular_conjugate().star_mul(&self.num)?;
        let num_s = self.num.symmetrization()?;
        let mut out = Vec::with_capacity(loci.len());
        for (locus, mult) in loci {
            let (shared, removable_shared) = match locus {
                SingularLocus::RealPoint(x) => (
                    real_linear_divisibility(&effective, x).0,
                    real_linear_divisibility(&num_s, x).0,
                ),
                SingularLocus::Sphere(s) => (
                    sphere_divisibility(&effective, s).0,
                    sphere_divisibility(&num_s, s).0,
                ),
            };
            out.push(Singularity {
                locus,
                multiplicity: mult,
                order: mult.saturating_sub(shared),
                potentially_removable: removable_shared >= 1 && !num_s.is_zero(),
            });
        }
        Ok(out)
    }
}

/// Reusable evaluation state for one quotient.
#[derive(Debug, Clone)]
pub struct RationalEvaluator {
    den_s: RegularPolynomial,
    effective_num: RegularPolynomial,
    guard_scale: f64,
    deg2: i32,
}

impl RationalEvaluator {
    fn guard(&self, q: Quaternion) -> Result<Quaternion, Error> {
        let ds = self.den_s.eval(q);
        let bound = SINGULAR_GUARD_TOL * self.guard_scale * (1.0 + q.norm()).powi(self.deg2);
        if ds.norm() <= bound {
            // Root finding can fail on heavily repeated factors of deep
            // composites; the flagged point is then its own best locus
            // estimate, since it sits on the vanishing set anyway.
            let locus = nearest_locus(&self.den_s, q).unwrap_or_else(|_| {
                let (x, y) = q.slice_coords();
                match SliceSphere::new(x, y) {
                    Ok(s) if y > 1e-12 * (1.0 + q.norm()) => SingularLocus::Sphere(s),
                    _ => SingularLocus::RealPoint(x),
                }
            });
            return Err(Error::Singular {
                locus,
                den_s: ds.norm(),
            });
        }
        Ok(ds)
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion, Error> {
        let ds = self.guard(q)?;
        Ok(ds.inverse()? * self.effective_num.eval(q))
    }
}

fn nearest_locus(den_s: &RegularPolynomial, q: Quaternion) -> Result<SingularLocus, Error> {
    let roots = real_poly_roots(&den_s.real_coeffs()?)?;
    let mut best: Option<(SingularLocus, f64)> = None;
    for root in roots {
        let (locus, d) = match root {
            RealPolyRoot::Real { x, .. } => (
                SingularLocus::RealPoint(x),
                q.dist(Quaternion::real(x)),
            ),
            RealPolyRoot::Pair { x, y, .. } => {
                let s = SliceSphere::new(x, y)?;
                (SingularLocus::Sphere(s), s.dist(q))
            }
        };
        if best.as_ref().map_or(true, |(_, bd)| d < *bd) {
            best = Some((locus, d));
        }
    }
    best.map(|(l, _)| l)
        .ok_or_else(|| Error::Inconsistency("singular evaluation with no singular locus".into()))
}

/// Conjugation transport of a polynomial: `T(q) = f^c(q)^{-1} q f^c(q)`,
/// defined off the zeros of `f^c`. Fixes real points and maps each slice
/// sphere into itself.
pub fn transport(f: &RegularPolynomial, q: Quaternion) -> Result<Quaternion, Error> {
    let v = f.regular_conjugate().eval(q);
    let vi = v.inverse()?;
    Ok(vi * q * v)
}

/// One singular locus of a quotient with its structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub locus: SingularLocus,
    /// Root multiplicity of the locus in `den^s` (pair multiplicity for
    /// spheres, full even multiplicity for real points).
    #[serde(rename = "mult")]
    pub multiplicity: usize,
    /// Pole order: the locus multiplicity less the number of times the
    /// locus factor divides `den^c * num`. Order 0 means the singularity
    /// is removable in the evaluated function.
    pub order: usize,
    /// `num^s` also vanishes on the locus, so numerator and denominator
    /// share a zero there.
    pub potentially_removable: bool,
}
