//! Randomized structural invariants. Identities that hold exactly in
//! floating point are asserted exactly; the rest carry scale-relative
//! slack.

use proptest::prelude::*;
use slice_regular::{
    lft_eval, real_poly_roots, zero_set, ExtendedQuaternion, MatrixH, Quaternion,
    RegularPolynomial, RegularRational, RealPolyRoot, SliceSphere,
};

fn quat() -> impl Strategy<Value = Quaternion> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
}

fn poly(max_len: usize) -> impl Strategy<Value = RegularPolynomial> {
    prop::collection::vec(quat(), 1..=max_len).prop_map(RegularPolynomial::from_coeffs)
}

fn real_poly(max_len: usize) -> impl Strategy<Value = RegularPolynomial> {
    prop::collection::vec(-1.0..1.0f64, 1..=max_len)
        .prop_map(|c| RegularPolynomial::from_coeffs(c.into_iter().map(Quaternion::real).collect()))
}

fn matrix() -> impl Strategy<Value = MatrixH> {
    (quat(), quat(), quat(), quat()).prop_map(|(a, c, b, d)| MatrixH::new(a, c, b, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quaternion_norm_is_multiplicative(p in quat(), q in quat()) {
        let lhs = (p * q).norm();
        let rhs = p.norm() * q.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn quaternion_conjugation_reverses_products(p in quat(), q in quat()) {
        prop_assert!((p * q).conj().dist(q.conj() * p.conj()) <= 1e-14);
    }

    #[test]
    fn quaternion_inverse_cancels(q in quat()) {
        prop_assume!(q.norm() >= 0.1);
        let qi = q.inverse().unwrap();
        prop_assert!((q * qi).dist(Quaternion::ONE) <= 1e-12);
        prop_assert!((qi * q).dist(Quaternion::ONE) <= 1e-12);
    }

    #[test]
    fn slice_sphere_points_carry_their_coordinates(
        x in -2.0..2.0f64,
        y in 0.05..2.0f64,
        u in quat(),
    ) {
        prop_assume!(u.imag_norm() >= 0.1);
        let unit = slice_regular::ImaginaryUnit::new(u.imag() * (1.0 / u.imag_norm())).unwrap();
        let q = SliceSphere::new(x, y).unwrap().point(unit);
        let (qx, qy) = q.slice_coords();
        prop_assert!((qx - x).abs() <= 1e-13 && (qy - y).abs() <= 1e-13 * (1.0 + y));
    }

    #[test]
    fn regular_conjugate_is_an_exact_involution(f in poly(7)) {
        prop_assert_eq!(f.regular_conjugate().regular_conjugate(), f);
    }

    #[test]
    fn regular_conjugate_is_exactly_additive(f in poly(6), g in poly(6)) {
        let lhs = f.add(&g).regular_conjugate();
        let rhs = f.regular_conjugate().add(&g.regular_conjugate());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn real_polynomials_star_commute(f in real_poly(6), g in real_poly(6)) {
        let lhs = f.star_mul(&g).unwrap();
        let rhs = g.star_mul(&f).unwrap();
        prop_assert!(lhs.coeff_dist(&rhs) <= 1e-13);
    }

    #[test]
    fn symmetrization_ignores_conjugation_and_doubles_degree(f in poly(6)) {
        prop_assume!(f.degree().is_some());
        prop_assume!(f.coeffs().last().unwrap().norm() >= 0.1);
        let fs = f.symmetrization().unwrap();
        prop_assert_eq!(fs.degree(), f.degree().map(|d| 2 * d));
        let cs = f.regular_conjugate().symmetrization().unwrap();
        prop_assert!(fs.coeff_dist(&cs) <= 1e-12);
    }

    #[test]
    fn star_product_evaluates_pointwise_on_the_reals(
        f in poly(6),
        g in poly(6),
        x in -1.5..1.5f64,
    ) {
        let q = Quaternion::real(x);
        let direct = f.star_mul(&g).unwrap().eval(q);
        let pointwise = f.eval(q) * g.eval(q);
        prop_assert!(direct.dist(pointwise) <= 1e-11 * (1.0 + pointwise.norm()));
    }

    #[test]
    fn linear_factors_vanish_exactly_at_their_root(p in quat()) {
        let f = RegularPolynomial::linear(p);
        prop_assert_eq!(f.eval(p), Quaternion::ZERO);
        let zs = zero_set(&f).unwrap();
        prop_assert!(zs.spheres.is_empty());
        prop_assert_eq!(zs.isolated.len(), 1);
        prop_assert!(zs.isolated[0].point.dist(p) <= 1e-9);
    }

    #[test]
    fn real_quadratic_roots_are_recovered(a in -1.0..1.0f64, b in -1.0..1.0f64) {
        prop_assume!((a - b).abs() >= 0.1);
        let roots = real_poly_roots(&[a * b, -(a + b), 1.0]).unwrap();
        let mut xs: Vec<f64> = roots
            .iter()
            .map(|r| match r {
                RealPolyRoot::Real { x, .. } => *x,
                RealPolyRoot::Pair { .. } => f64::NAN,
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        prop_assert_eq!(xs.len(), 2);
        prop_assert!((xs[0] - a.min(b)).abs() <= 1e-7 && (xs[1] - a.max(b)).abs() <= 1e-7);
    }

    #[test]
    fn matrix_inverse_round_trips(m in matrix()) {
        prop_assume!(m.study_determinant() >= 1e-2);
        let inv = match m.inverse() {
            Ok(inv) => inv,
            Err(_) => return Err(TestCaseError::reject("borderline invertibility")),
        };
        for p in [m.mul(&inv), inv.mul(&m)] {
            let residual = (p.a - Quaternion::ONE)
                .norm()
                .max(p.c.norm())
                .max(p.b.norm())
                .max((p.d - Quaternion::ONE).norm());
            prop_assert!(residual <= 1e-9);
        }
    }

    #[test]
    fn study_determinant_is_nonnegative_and_multiplicative(m in matrix(), n in matrix()) {
        prop_assert!(m.study_determinant() >= -1e-12);
        let lhs = m.mul(&n).study_determinant();
        let rhs = m.study_determinant() * n.study_determinant();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn real_scalar_matrices_act_as_the_identity(t in 0.2..3.0f64, sign in prop::bool::ANY, q in quat()) {
        let t = if sign { t } else { -t };
        let m = MatrixH::IDENTITY.scale(Quaternion::real(t));
        match lft_eval(&m, ExtendedQuaternion::Finite(q)) {
            ExtendedQuaternion::Finite(v) => prop_assert!(v.dist(q) <= 1e-13),
            ExtendedQuaternion::Infinity => prop_assert!(false, "scalar matrix lost finiteness"),
        }
    }

    #[test]
    fn json_round_trips_are_exact(f in poly(6), m in matrix(), q in quat()) {
        let back: Quaternion =
            serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q);
        let back: RegularPolynomial =
            serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f.clone());
        let back: MatrixH = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);

        prop_assume!(!f.is_zero());
        let r = RegularRational::new(f, RegularPolynomial::constant(q)).unwrap();
        let back: RegularRational =
            serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
