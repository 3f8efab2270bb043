//! Regular polynomials `f(q) = sum q^n a_n` with right coefficients.
//!
//! The regular product is the coefficient convolution
//! `(f * g)_n = sum_k a_k b_{n-k}`; it agrees with the pointwise product
//! when the left factor has real coefficients and is associative and
//! distributive but not commutative. The regular conjugate `f^c` conjugates
//! the coefficients, and the symmetrization `f^s = f * f^c` has real
//! coefficients and is central.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quaternion::{ImaginaryUnit, Quaternion, SliceSphere};

/// Default cap on result degrees for products; guards runaway growth.
pub const DEGREE_CAP: usize = 64;

/// Symmetrization coefficients must be real to this accuracy (relative to
/// the coefficient scale); the imaginary residue is zeroed after the check.
pub const SYMMETRIZATION_REAL_TOL: f64 = 1e-13;

/// An imaginary residue above this (relative) bound in a symmetrization is an
/// internal-consistency failure rather than rounding.
pub const SYMMETRIZATION_FAIL_TOL: f64 = 1e-10;

/// The affine restriction to a sphere is degenerate when
/// `|c| < 1e-10 * (1 + |b|)`.
pub const AFFINE_DEGENERATE_TOL: f64 = 1e-10;

/// Verification tolerance for the third-unit check in [`RegularPolynomial::sphere_affine`].
pub const AFFINE_VERIFY_TOL: f64 = 1e-10;

/// A polynomial in normalized form: the trailing (leading-degree) coefficient
/// is nonzero unless the polynomial is zero, which is stored as no
/// coefficients at all. Coefficients are ascending: `coeffs[n]` multiplies
/// `q^n` on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularPolynomial {
    coeffs: Vec<Quaternion>,
}

impl RegularPolynomial {
    pub fn zero() -> Self {
        RegularPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RegularPolynomial::constant(Quaternion::ONE)
    }

    pub fn constant(c: Quaternion) -> Self {
        RegularPolynomial::from_coeffs(vec![c])
    }

    /// The identity `f(q) = q`.
    pub fn identity() -> Self {
        RegularPolynomial::from_coeffs(vec![Quaternion::ZERO, Quaternion::ONE])
    }

    /// The linear factor `q - p`.
    pub fn linear(p: Quaternion) -> Self {
        RegularPolynomial::from_coeffs(vec![-p, Quaternion::ONE])
    }

    /// Builds from ascending coefficients, trimming exactly-zero trailing ones.
    pub fn from_coeffs(coeffs: Vec<Quaternion>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RegularPolynomial { coeffs }
    }

    /// The *-product of the factors `q - p_k`, left to right.
    pub fn from_roots(roots: &[Quaternion]) -> Result<Self, Error> {
        let mut f = RegularPolynomial::one();
        for &p in roots {
            f = f.star_mul(&RegularPolynomial::linear(p))?;
        }
        Ok(f)
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// Coefficient of `q^n` (zero beyond the degree).
    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient norm (0 for the zero polynomial).
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Left-nested Horner evaluation `a_0 + q(a_1 + q(a_2 + ...))`, which
    /// realizes `sum q^n a_n` keeping powers of `q` on the left.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = q * acc + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        RegularPolynomial::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        RegularPolynomial::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        RegularPolynomial::from_coeffs(self.coeffs.iter().map(|&c| -c).collect())
    }

    /// Coefficientwise right multiplication by a constant: `f(q) c`.
    pub fn scale_right(&self, c: Quaternion) -> Self {
        RegularPolynomial::from_coeffs(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Coefficientwise left multiplication by a constant. Equals
    /// `constant(c) * f` under the *-product.
    pub fn scale_left(&self, c: Quaternion) -> Self {
        RegularPolynomial::from_coeffs(self.coeffs.iter().map(|&a| c * a).collect())
    }

    /// Largest coefficient distance to `other`; the comparison metric used by
    /// the coefficientwise identities.
    pub fn coeff_dist(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| self.coeff(k).dist(other.coeff(k)))
            .fold(0.0, f64::max)
    }

    /// Regular product by coefficient convolution, capped at [`DEGREE_CAP`].
    pub fn star_mul(&self, other: &Self) -> Result<Self, Error> {
        self.star_mul_capped(other, DEGREE_CAP)
    }

    pub fn star_mul_capped(&self, other: &Self, cap: usize) -> Result<Self, Error> {
        if self.is_zero() || other.is_zero() {
            return Ok(RegularPolynomial::zero());
        }
        let (df, dg) = (self.coeffs.len() - 1, other.coeffs.len() - 1);
        if df + dg > cap {
            return Err(Error::DegreeCap { degree: df + dg, cap });
        }
        let mut coeffs = vec![Quaternion::ZERO; df + dg + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            for (m, &b) in other.coeffs.iter().enumerate() {
                coeffs[k + m] += a * b;
            }
        }
        Ok(RegularPolynomial::from_coeffs(coeffs))
    }

    /// Regular conjugate `f^c`: conjugated coefficients.
    pub fn regular_conjugate(&self) -> Self {
        RegularPolynomial::from_coeffs(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Symmetrization `f^s = f * f^c`. The result has real coefficients; the
    /// imaginary residue is checked against [`SYMMETRIZATION_FAIL_TOL`]
    /// (relative to the coefficient scale) and then zeroed.
    pub fn symmetrization(&self) -> Result<Self, Error> {
        let raw = self.star_mul(&self.regular_conjugate())?;
        let scale = raw.coeff_scale().max(1.0);
        let residue = raw
            .coeffs
            .iter()
            .map(|c| c.imag_norm())
            .fold(0.0, f64::max);
        if residue > SYMMETRIZATION_FAIL_TOL * scale {
            return Err(Error::Inconsistency(format!(
                "symmetrization imaginary residue {} at scale {}",
                residue, scale
            )));
        }
        Ok(RegularPolynomial::from_coeffs(
            raw.coeffs.iter().map(|c| Quaternion::real(c.w)).collect(),
        ))
    }

    /// Real coefficients of a real polynomial (errors if any coefficient has
    /// an imaginary part).
    pub fn real_coeffs(&self) -> Result<Vec<f64>, Error> {
        let scale = self.coeff_scale().max(1.0);
        for c in &self.coeffs {
            if c.imag_norm() > SYMMETRIZATION_FAIL_TOL * scale {
                return Err(Error::Inconsistency(
                    "polynomial is not real".to_string(),
                ));
            }
        }
        Ok(self.coeffs.iter().map(|c| c.w).collect())
    }

    /// Solves `f = (q - p) * g` for `g`, requiring `eval(f, p) ≈ 0`.
    ///
    /// The product recursion `f_n = g_{n-1} - p g_n` is solved top-down; the
    /// division remainder equals `f(p)` and is checked against
    /// `1e-9 * (1 + coefficient scale)`.
    pub fn left_divide_linear(&self, p: Quaternion) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(RegularPolynomial::zero());
        }
        let tol = 1e-9 * (1.0 + self.coeff_scale());
        let residual = self.eval(p).norm();
        if residual > tol {
            return Err(Error::NotARoot { residual, tol });
        }
        if self.degree() == Some(0) {
            // A nonzero constant cannot vanish at p; caught above.
            return Err(Error::NotARoot { residual, tol });
        }
        if p.is_zero() {
            return Ok(RegularPolynomial::from_coeffs(self.coeffs[1..].to_vec()));
        }
        let d = self.coeffs.len() - 1;
        let mut g = vec![Quaternion::ZERO; d];
        g[d - 1] = self.coeffs[d];
        for n in (1..d).rev() {
            g[n - 1] = self.coeffs[n] + p * g[n];
        }
        Ok(RegularPolynomial::from_coeffs(g))
    }

    /// Restriction to a slice sphere: `f(x + yI) = b + Ic` for every unit `I`.
    ///
    /// Solved from the evaluations at `I = i` and `I = j`, then verified at
    /// `I = k` within [`AFFINE_VERIFY_TOL`] (relative to `1 + |b| + |c|`).
    pub fn sphere_affine(&self, sphere: SliceSphere) -> Result<SphereAffine, Error> {
        let v1 = self.eval(sphere.point(ImaginaryUnit::I));
        let v2 = self.eval(sphere.point(ImaginaryUnit::J));
        // v1 - v2 = (i - j) c
        let c = (Quaternion::I - Quaternion::J).inverse()? * (v1 - v2);
        let b = v1 - Quaternion::I * c;
        let at_k = self.eval(sphere.point(ImaginaryUnit::K));
        let residual = (at_k - (b + Quaternion::K * c)).norm();
        let scale = 1.0 + b.norm() + c.norm();
        if residual > AFFINE_VERIFY_TOL * scale {
            return Err(Error::Inconsistency(format!(
                "sphere restriction is not affine in I: residual {} at scale {}",
                residual, scale
            )));
        }
        let degenerate = c.norm() < AFFINE_DEGENERATE_TOL * (1.0 + b.norm());
        Ok(SphereAffine { b, c, degenerate })
    }

    /// Finite-difference Cauchy-Riemann residual `|(d/dx + I d/dy) f| / 2` on
    /// the complex line through `I`, with central differences of step `h`.
    ///
    /// `q` is first projected onto the line `L_I`. For a regular `f` the
    /// residual is `O(h^2)`.
    pub fn dbar_residual(&self, q: Quaternion, unit: ImaginaryUnit, h: f64) -> f64 {
        dbar_residual_fn(|p| self.eval(p), q, unit, h)
    }
}

/// The affine data `(b, c)` of a sphere restriction `f(x + yI) = b + Ic`.
/// `degenerate` when `|c| < 1e-10 (1 + |b|)`, in which case the restriction
/// is constant on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereAffine {
    pub b: Quaternion,
    pub c: Quaternion,
    pub degenerate: bool,
}

impl SphereAffine {
    /// The value `b + Ic` at a chosen unit.
    pub fn at(&self, unit: ImaginaryUnit) -> Quaternion {
        self.b + unit.as_quaternion() * self.c
    }

    /// Solves `b + Ic = 0` on the sphere: the zero's unit is `I = -b c^{-1}`
    /// when that quaternion is a valid imaginary unit.
    ///
    /// Returns `None` when the restriction has no zero on the sphere, i.e.
    /// the solved `I` fails the unit check `|I^2 + 1| <= 1e-8` (a degenerate
    /// `c` with nonzero `b` also has no zero).
    pub fn solve_zero_unit(&self) -> Option<ImaginaryUnit> {
        if self.degenerate {
            return None;
        }
        let i = -self.b * self.c.inverse().ok()?;
        let defect = (i * i + Quaternion::ONE).norm();
        if defect > 1e-8 {
            return None;
        }
        // Snap onto the unit sphere so downstream consumers can rely on it.
        ImaginaryUnit::from_vec(i.x, i.y, i.z).ok()
    }
}

/// Finite-difference regularity residual for an arbitrary evaluator; used for
/// polynomials directly and for quotient evaluations.
pub fn dbar_residual_fn<F>(f: F, q: Quaternion, unit: ImaginaryUnit, h: f64) -> f64
where
    F: Fn(Quaternion) -> Quaternion,
{
    let iq = unit.as_quaternion();
    // Project q onto L_I: x = Re q, y = <Im q, I>.
    let x = q.re();
    let y = q.x * iq.x + q.y * iq.y + q.z * iq.z;
    let at = |x: f64, y: f64| f(Quaternion::real(x) + iq * y);
    let dx = (at(x + h, y) - at(x - h, y)) / (2.0 * h);
    let dy = (at(x, y + h) - at(x, y - h)) / (2.0 * h);
    ((dx + iq * dy) / 2.0).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    #[test]
    fn normalization_trims_trailing_zeros() {
        let f = RegularPolynomial::from_coeffs(vec![I, Quaternion::ZERO, Quaternion::ZERO]);
        assert_eq!(f.degree(), Some(0));
        assert!(RegularPolynomial::from_coeffs(vec![Quaternion::ZERO]).is_zero());
        assert_eq!(RegularPolynomial::zero().degree(), None);
    }

    #[test]
    fn star_product_of_two_linear_factors() {
        let f = RegularPolynomial::linear(I);
        let g = RegularPolynomial::linear(J);
        let fg = f.star_mul(&g).unwrap();
        assert_eq!(fg.coeffs(), &[K, -I - J, Quaternion::ONE]);
        // Pointwise at q = j, where the product does NOT factor pointwise:
        // the left factor at j is j - i != 0 but the product evaluates to 2k.
        assert!(fg.eval(J).dist(K * 2.0) < 1e-15);
    }

    #[test]
    fn evaluation_keeps_powers_left_of_coefficients() {
        // f(q) = q*i: at j this is ji = -k, not ij = k.
        let f = RegularPolynomial::from_coeffs(vec![Quaternion::ZERO, I]);
        assert_eq!(f.eval(J), -K);
    }

    #[test]
    fn star_product_degree_cap() {
        let big = RegularPolynomial::from_coeffs(
            std::iter::repeat(Quaternion::ONE).take(40).collect(),
        );
        match big.star_mul(&big) {
            Err(Error::DegreeCap { degree: 78, cap: DEGREE_CAP }) => {}
            other => panic!("expected degree cap error, got {:?}", other),
        }
        assert!(big.star_mul_capped(&big, 100).is_ok());
    }

    #[test]
    fn conjugate_and_symmetrization() {
        let f = RegularPolynomial::linear(I);
        assert_eq!(f.regular_conjugate().coeffs(), &[I, Quaternion::ONE]);
        let s = f.symmetrization().unwrap();
        assert_eq!(s.coeffs(), &[Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE]);

        // (qc + d)^s = q^2 |c|^2 + q (d conj(c) + c conj(d)) + |d|^2.
        let c = q(0.3, -1.0, 0.5, 0.2);
        let d = q(-0.4, 0.9, -1.2, 0.7);
        let f = RegularPolynomial::from_coeffs(vec![d, c]);
        let s = f.symmetrization().unwrap();
        let mid = d * c.conj() + c * d.conj();
        assert!(s.coeff(0).dist(Quaternion::real(d.norm_sqr())) < 1e-14);
        assert!(s.coeff(1).dist(Quaternion::real(mid.w)) < 1e-14);
        assert!(mid.imag_norm() < 1e-14);
        assert!(s.coeff(2).dist(Quaternion::real(c.norm_sqr())) < 1e-14);
    }

    #[test]
    fn symmetrization_is_central() {
        let f = RegularPolynomial::from_coeffs(vec![q(0.1, 2.0, -0.3, 1.0), I + J, K]);
        let s = f.symmetrization().unwrap();
        let g = RegularPolynomial::from_coeffs(vec![J, q(1.0, 0.5, 0.0, -2.0)]);
        let left = s.star_mul(&g).unwrap();
        let right = g.star_mul(&s).unwrap();
        assert!(left.coeff_dist(&right) < 1e-12);
    }

    #[test]
    fn divide_out_planted_linear_factor() {
        // (q - i) * (q + i) = q^2 + 1.
        let s = RegularPolynomial::from_coeffs(vec![
            Quaternion::ONE,
            Quaternion::ZERO,
            Quaternion::ONE,
        ]);
        let g = s.left_divide_linear(I).unwrap();
        assert_eq!(g.coeffs(), &[I, Quaternion::ONE]);

        let f = RegularPolynomial::linear(I)
            .star_mul(&RegularPolynomial::linear(J))
            .unwrap();
        let g = f.left_divide_linear(I).unwrap();
        assert!(g.coeff_dist(&RegularPolynomial::linear(J)) < 1e-15);
    }

    #[test]
    fn divide_rejects_non_roots_and_shifts_at_zero() {
        let f = RegularPolynomial::linear(I);
        assert!(matches!(f.left_divide_linear(J), Err(Error::NotARoot { .. })));

        let f = RegularPolynomial::from_coeffs(vec![Quaternion::ZERO, I, J]);
        let g = f.left_divide_linear(Quaternion::ZERO).unwrap();
        assert_eq!(g.coeffs(), &[I, J]);
    }

    #[test]
    fn sphere_restriction_is_affine() {
        let f = RegularPolynomial::linear(I)
            .star_mul(&RegularPolynomial::linear(J))
            .unwrap();
        let sphere = SliceSphere::new(0.0, 1.0).unwrap();
        let aff = f.sphere_affine(sphere).unwrap();
        assert!(aff.b.dist(-Quaternion::ONE + K) < 1e-14);
        assert!(aff.c.dist(-(I + J)) < 1e-14);
        assert!(!aff.degenerate);
        // Its zero unit is i.
        let unit = aff.solve_zero_unit().unwrap();
        assert!(unit.as_quaternion().dist(I) < 1e-14);

        // q^2 restricted to the unit sphere is the constant -1.
        let sq = RegularPolynomial::from_coeffs(vec![
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ONE,
        ]);
        let aff = sq.sphere_affine(sphere).unwrap();
        assert!(aff.b.dist(-Quaternion::ONE) < 1e-14);
        assert!(aff.c.norm() < 1e-14);
        assert!(aff.degenerate);
        assert!(aff.solve_zero_unit().is_none());
    }

    #[test]
    fn dbar_residual_is_small_for_regular_polynomials() {
        let f = RegularPolynomial::from_coeffs(vec![q(0.3, -0.2, 1.0, 0.4), I - K, J, Quaternion::ONE]);
        let unit = ImaginaryUnit::from_vec(1.0, 2.0, -0.5).unwrap();
        let at = q(0.7, -0.3, 0.4, 0.1);
        assert!(f.dbar_residual(at, unit, 1e-5) < 1e-9);
    }

    #[test]
    fn dbar_residual_detects_non_regular_map() {
        // q |-> conj(q) restricted to a line is anti-holomorphic: residual |f'| != 0.
        let unit = ImaginaryUnit::I;
        let r = dbar_residual_fn(|p| p.conj(), q(0.5, 0.3, 0.0, 0.0), unit, 1e-5);
        assert!(r > 0.9);
    }

    #[test]
    fn poly_json_schema() {
        let f: RegularPolynomial =
            serde_json::from_str(r#"{"coeffs":[[0,-1,0,0],[1,0,0,0]]}"#).unwrap();
        assert_eq!(f.coeffs(), &[-I, Quaternion::ONE]);
        let text = serde_json::to_string(&f).unwrap();
        let back: RegularPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
