//! 2 x 2 quaternionic matrices acting as linear fractional transformations.
//!
//! A matrix `[[a, c], [b, d]]` acts by `q -> (qc + d)^{-1} (qa + b)`.
//! Invertibility over the quaternions is decided without determinants:
//! for `c` invertible the Schur-type complement `b - d c^{-1} a` must be
//! invertible; for `c = 0` both `a` and `d` must be. The Study determinant
//! (the determinant of the 4 x 4 complex adjoint) is kept for reporting and
//! the indefinite-form checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quaternion::Quaternion;

/// `c` counts as zero below `1e-12` of the entry scale; the same threshold
/// drives the Schur-complement invertibility test (quadratic in scale, since
/// the complement carries a `c^{-1}` conditioning factor).
pub const MATRIX_SINGULAR_TOL: f64 = 1e-12;

/// Residual bound for membership in the isometry group of the indefinite
/// form `diag(1, -1)`.
pub const SP11_TOL: f64 = 1e-10;

/// A 2 x 2 quaternionic matrix `[[a, c], [b, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixH {
    pub a: Quaternion,
    pub c: Quaternion,
    pub b: Quaternion,
    pub d: Quaternion,
}

impl MatrixH {
    pub const fn new(a: Quaternion, c: Quaternion, b: Quaternion, d: Quaternion) -> Self {
        MatrixH { a, c, b, d }
    }

    pub const IDENTITY: MatrixH = MatrixH::new(
        Quaternion::ONE,
        Quaternion::ZERO,
        Quaternion::ZERO,
        Quaternion::ONE,
    );

    /// The reciprocal map `q -> q^{-1}` as a matrix.
    pub const RECIPROCAL: MatrixH = MatrixH::new(
        Quaternion::ZERO,
        Quaternion::ONE,
        Quaternion::ONE,
        Quaternion::ZERO,
    );

    /// The indefinite form `diag(1, -1)`.
    pub const FORM: MatrixH = MatrixH::new(
        Quaternion::ONE,
        Quaternion::ZERO,
        Quaternion::ZERO,
        Quaternion::new(-1.0, 0.0, 0.0, 0.0),
    );

    /// The affine map `q -> qa + b` as a matrix.
    pub fn affine(a: Quaternion, b: Quaternion) -> Self {
        MatrixH::new(a, Quaternion::ZERO, b, Quaternion::ONE)
    }

    /// Largest entry norm.
    pub fn entry_scale(&self) -> f64 {
        self.a
            .norm()
            .max(self.c.norm())
            .max(self.b.norm())
            .max(self.d.norm())
    }

    /// Whether `c` is negligible at this matrix's scale, so the
    /// transformation is affine.
    pub fn c_is_zero(&self) -> bool {
        self.c.norm() <= MATRIX_SINGULAR_TOL * self.entry_scale()
    }

    /// Matrix product; composition of the induced maps reads left to right
    /// (`(AB)` acts as `A` then... see the composition law: the induced map
    /// of `AB` is the composite of the maps of `B` after `A`).
    pub fn mul(&self, other: &MatrixH) -> MatrixH {
        MatrixH::new(
            self.a * other.a + self.c * other.b,
            self.a * other.c + self.c * other.d,
            self.b * other.a + self.d * other.b,
            self.b * other.c + self.d * other.d,
        )
    }

    /// Left scalar multiple `t M`.
    pub fn scale(&self, t: Quaternion) -> MatrixH {
        MatrixH::new(t * self.a, t * self.c, t * self.b, t * self.d)
    }

    /// Conjugate transpose.
    pub fn conj_transpose(&self) -> MatrixH {
        MatrixH::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// Inverse, via the Schur-type complement when `c` is invertible and
    /// the triangular formula when `c = 0`.
    pub fn inverse(&self) -> Result<MatrixH, Error> {
        let scale = self.entry_scale();
        if scale == 0.0 {
            return Err(Error::SingularMatrix { residual: 0.0 });
        }
        if self.c_is_zero() {
            let floor = MATRIX_SINGULAR_TOL * scale;
            if self.a.norm() <= floor || self.d.norm() <= floor {
                return Err(Error::SingularMatrix {
                    residual: self.a.norm().min(self.d.norm()),
                });
            }
            let ai = self.a.inverse()?;
            let di = self.d.inverse()?;
            return Ok(MatrixH::new(ai, Quaternion::ZERO, -(di * self.b * ai), di));
        }
        let ci = self.c.inverse()?;
        let schur = self.b - self.d * ci * self.a;
        if schur.norm() <= MATRIX_SINGULAR_TOL * (1.0 + scale) * (1.0 + scale) {
            return Err(Error::SingularMatrix {
                residual: schur.norm(),
            });
        }
        let si = schur.inverse()?;
        Ok(MatrixH::new(
            -(si * self.d * ci),
            si,
            ci + ci * self.a * si * self.d * ci,
            -(ci * self.a * si),
        ))
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    /// Max entry norm of `M* H M - H`, `H = diag(1, -1)`: zero exactly on
    /// the isometry group of the indefinite form.
    pub fn sp11_residual(&self) -> f64 {
        let hm = MatrixH::new(self.a, self.c, -self.b, -self.d);
        let p = self.conj_transpose().mul(&hm);
        (p.a - Quaternion::ONE)
            .norm()
            .max(p.c.norm())
            .max(p.b.norm())
            .max((p.d + Quaternion::ONE).norm())
    }

    /// Membership check for the indefinite isometry group.
    pub fn sp11_check(&self, tol: f64) -> Sp11Report {
        let residual = self.sp11_residual();
        Sp11Report {
            residual,
            pass: residual < tol,
        }
    }

    /// Rescales a positive real multiple of an indefinite isometry onto the
    /// group: if `M* H M = mu H` with `mu > 0`, returns `M / sqrt(mu)`.
    pub fn sp11_normalize(&self) -> Result<MatrixH, Error> {
        let hm = MatrixH::new(self.a, self.c, -self.b, -self.d);
        let p = self.conj_transpose().mul(&hm);
        let mu = p.a.re();
        let scale2 = 1.0 + self.entry_scale() * self.entry_scale();
        let residual = (p.a - Quaternion::real(mu))
            .norm()
            .max(p.c.norm())
            .max(p.b.norm())
            .max((p.d + Quaternion::real(mu)).norm());
        if mu <= MATRIX_SINGULAR_TOL * scale2 || residual > SP11_TOL * scale2 {
            return Err(Error::Domain(format!(
                "matrix is not a positive multiple of an indefinite isometry \
                 (mu = {}, residual = {})",
                mu, residual
            )));
        }
        Ok(self.scale(Quaternion::real(1.0 / mu.sqrt())))
    }

    /// The complex adjoint: each entry `z1 + z2 j` becomes the 2 x 2 block
    /// `[[z1, z2], [-conj(z2), conj(z1)]]`, giving a 4 x 4 complex matrix.
    pub fn complex_adjoint(&self) -> [[Complex64; 4]; 4] {
        fn block(q: Quaternion) -> [[Complex64; 2]; 2] {
            let z1 = Complex64::new(q.w, q.x);
            let z2 = Complex64::new(q.y, q.z);
            [[z1, z2], [-z2.conj(), z1.conj()]]
        }
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (pos, q) in [
            ((0, 0), self.a),
            ((0, 1), self.c),
            ((1, 0), self.b),
            ((1, 1), self.d),
        ] {
            let b = block(q);
            for r in 0..2 {
                for s in 0..2 {
                    m[2 * pos.0 + r][2 * pos.1 + s] = b[r][s];
                }
            }
        }
        m
    }

    /// The Study determinant: the determinant of the complex adjoint. Real
    /// and non-negative, zero exactly for singular matrices, and
    /// multiplicative.
    pub fn study_determinant(&self) -> f64 {
        let mut m = self.complex_adjoint();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..4 {
            let pivot_row = (col..4)
                .max_by(|r1, r2| {
                    m[*r1][col]
                        .norm()
                        .partial_cmp(&m[*r2][col].norm())
                        .unwrap()
                })
                .unwrap();
            if m[pivot_row][col].norm() == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                m.swap(pivot_row, col);
                det = -det;
            }
            det *= m[col][col];
            for r in (col + 1)..4 {
                let factor = m[r][col] / m[col][col];
                for s in col..4 {
                    let sub = factor * m[col][s];
                    m[r][s] -= sub;
                }
            }
        }
        det.re
    }
}

/// Result of the indefinite-isometry membership check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sp11Report {
    pub residual: f64,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    #[test]
    fn product_blocks() {
        let a = MatrixH::new(Quaternion::ONE, I, J, K);
        let id = MatrixH::IDENTITY;
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);

        // Associativity on noncommuting entries.
        let b = MatrixH::new(I, J, K, Quaternion::ONE);
        let c = MatrixH::new(J, Quaternion::ONE, I, K);
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        for (x, y) in [
            (left.a, right.a),
            (left.c, right.c),
            (left.b, right.b),
            (left.d, right.d),
        ] {
            assert!(x.dist(y) < 1e-14);
        }
    }

    fn assert_inverse(m: MatrixH) {
        let inv = m.inverse().unwrap();
        let p = m.mul(&inv);
        let q = inv.mul(&m);
        for prod in [p, q] {
            assert!((prod.a - Quaternion::ONE).norm() < 1e-12);
            assert!(prod.c.norm() < 1e-12);
            assert!(prod.b.norm() < 1e-12);
            assert!((prod.d - Quaternion::ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_general_branch() {
        assert_inverse(MatrixH::new(Quaternion::ONE, Quaternion::ONE, Quaternion::ZERO, -I));
        assert_inverse(MatrixH::new(I, J, K, Quaternion::new(0.5, 0.0, 1.0, 0.0)));
        assert_inverse(MatrixH::RECIPROCAL);
    }

    #[test]
    fn inverse_affine_branch() {
        assert_inverse(MatrixH::affine(Quaternion::real(2.0), J));
        assert_inverse(MatrixH::new(
            Quaternion::real(2.0),
            Quaternion::ZERO,
            J,
            Quaternion::ONE + K,
        ));
    }

    #[test]
    fn singular_matrices_rejected() {
        let m = MatrixH::new(
            Quaternion::ONE,
            Quaternion::ONE,
            Quaternion::ONE,
            Quaternion::ONE,
        );
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix { .. })));
        assert!(!m.is_invertible());
        assert!(m.study_determinant().abs() < 1e-12);

        let z = MatrixH::new(
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ZERO,
        );
        assert!(!z.is_invertible());
    }

    #[test]
    fn indefinite_isometry_members() {
        assert!(MatrixH::IDENTITY.sp11_check(SP11_TOL).pass);
        assert!(MatrixH::FORM.sp11_check(SP11_TOL).pass);
        // diag(u, 1) with u a unit.
        let u = Quaternion::new(0.5, 0.5, 0.5, 0.5);
        let m = MatrixH::new(u, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ONE);
        let rep = m.sp11_check(SP11_TOL);
        assert!(rep.pass, "residual {}", rep.residual);
    }

    #[test]
    fn indefinite_isometry_rejects_scaling() {
        let m = MatrixH::new(
            Quaternion::real(2.0),
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ONE,
        );
        let rep = m.sp11_check(SP11_TOL);
        assert!(!rep.pass);
        assert!((rep.residual - 3.0).abs() < 1e-14);
    }

    #[test]
    fn normalization_recovers_membership() {
        let m = MatrixH::IDENTITY.scale(Quaternion::real(3.0));
        let n = m.sp11_normalize().unwrap();
        assert!(n.sp11_check(SP11_TOL).pass);
        assert!((n.a - Quaternion::ONE).norm() < 1e-12);

        // A matrix with no positive-multiple structure is refused.
        let bad = MatrixH::new(Quaternion::ONE, I, Quaternion::ZERO, Quaternion::ONE);
        assert!(bad.sp11_normalize().is_err());
    }

    #[test]
    fn study_determinant_values() {
        assert!((MatrixH::IDENTITY.study_determinant() - 1.0).abs() < 1e-14);
        let m = MatrixH::new(
            Quaternion::real(2.0),
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ONE,
        );
        assert!((m.study_determinant() - 4.0).abs() < 1e-12);

        // Multiplicative over products.
        let a = MatrixH::new(Quaternion::ONE, I, J, K);
        let b = MatrixH::new(I, Quaternion::ONE + J, K, Quaternion::real(0.5));
        let lhs = a.mul(&b).study_determinant();
        let rhs = a.study_determinant() * b.study_determinant();
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn matrix_json_field_order() {
        let m = MatrixH::new(Quaternion::ONE, I, J, K);
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.starts_with("{\"a\""));
        let ka = text.find("\"a\"").unwrap();
        let kc = text.find("\"c\"").unwrap();
        let kb = text.find("\"b\"").unwrap();
        let kd = text.find("\"d\"").unwrap();
        assert!(ka < kc && kc < kb && kb < kd);
        let back: MatrixH = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
