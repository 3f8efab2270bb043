//! Randomized verification suites for the algebraic laws.
//!
//! Every check draws a fresh deterministic random stream per trial, mixed
//! from the suite seed, a per-check salt, and the trial index, so results
//! are reproducible and independent of thread scheduling. Trials run
//! through [`batch`], parallel by default.
//!
//! Reports carry the maximum observed residual next to the tolerance it is
//! judged against, plus a count of structural failures (wrong shapes,
//! counts, or unexpected errors). A check passes when the residual is under
//! tolerance and no structural failure occurred.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch;
use crate::error::{Error, SingularLocus};
use crate::fractional::{
    act, canonical_form, classify_pole, generators_decompose, generators_eval, lft_eval,
    moebius_from_params, moebius_map_pair, moebius_params, relation_transport_eval, rft_eval,
    rft_rational, CanonicalRFT, PoleClass,
};
use crate::matrix::{MatrixH, SP11_TOL};
use crate::poly::RegularPolynomial;
use crate::quaternion::{
    sphere_transport_lemma, ExtendedQuaternion, Quaternion, QuaternionSampler, Region,
    SliceSphere,
};
use crate::quotient::{transport, RegularRational};
use crate::zeros::{fibonacci_units, zero_set};

// Tolerances, one rationale each. Sampling keeps all inputs at desk scale
// (coefficients and points of order one), so absolute and relative
// residuals agree up to small factors and the margins quoted below are
// against worst cases actually reachable by the samplers.

/// Coefficient identities that hold exactly in exact arithmetic
/// (associativity, distributivity, conjugation antihomomorphism, reality
/// and centrality of the symmetrization). Rounding per convolution term is
/// a few ulps; degree <= 6 with entries in [-1, 1] stays below 1e-14.
pub const COEFF_IDENTITY_TOL: f64 = 1e-12;

/// Divide-out-a-planted-root round trip; division is one back
/// substitution per coefficient.
pub const FACTOR_ROUNDTRIP_TOL: f64 = 1e-11;

/// Pointwise product law `(f*g)(q) = f(q) g(f(q)^{-1} q f(q))` with
/// `|f(q)|` floored at 0.1: the conjugation loses at most two digits.
pub const EVAL_PRODUCT_TOL: f64 = 1e-10;

/// Two-route quotient oracle, relative: symmetrized-denominator route vs
/// transported-argument route, points at distance > 0.05 from the
/// denominator's singular spheres (spheres of radius >= 0.2, pairwise
/// separated by 0.3, so the conditioning of `den^s` stays bounded).
pub const QUOTIENT_ORACLE_TOL: f64 = 1e-9;

/// Reciprocal times original evaluates to 1, away from the poles.
pub const RECIPROCAL_TOL: f64 = 1e-10;

/// Transport preserves the slice coordinates of its argument.
pub const TRANSPORT_SPHERE_TOL: f64 = 1e-10;

/// Transport fixes real points; the sandwich is exact up to two
/// multiplications.
pub const TRANSPORT_REAL_TOL: f64 = 1e-13;

/// Transport by the conjugate inverts transport by the polynomial: the
/// composite is conjugation by the real-coefficient value `f^s(q)`, which
/// commutes with `q`.
pub const TRANSPORT_INVOLUTION_TOL: f64 = 1e-10;

/// Evaluation route equality for products of quotients.
pub const QUOTIENT_PRODUCT_TOL: f64 = 1e-9;

/// `f^s(q) = f^c(q) f(T(q))`: the identity behind quotient evaluation.
pub const SYM_EVAL_TOL: f64 = 1e-10;

/// Finite-difference slice-regularity residual at step 1e-5: truncation
/// `h^2 |f'''| / 6` plus roundoff `eps |f| / h`. Unit-scale polynomials
/// sit near 1e-10; quotients at distance >= 0.35 from their poles near
/// 3e-8.
pub const DBAR_TOL: f64 = 1e-7;

/// Step for the finite-difference regularity probe.
pub const DBAR_STEP: f64 = 1e-5;

/// Reported singular-locus coordinates against the constructed ones.
pub const SINGULAR_LOCUS_TOL: f64 = 1e-6;

/// Zero residuals `|f(zero)|` after root finding and sphere resolution.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-8;

/// Product-zero law: each zero of `f*g` is a zero of `f` or a transported
/// zero of `g`.
pub const PRODUCT_ZERO_TOL: f64 = 1e-10;

/// Same-sphere pair transport formula `(b - conj(a))^{-1} b (b - conj(a))
/// = a` with separation floored at 1e-3 on desk-scale spheres: the
/// conditioning loses three digits from machine precision.
pub const LEMMA_TOL: f64 = 1e-12;

/// Right-action composition and the transported-evaluation oracle.
pub const ACTION_TOL: f64 = 1e-9;

/// Scalar multiples of a matrix induce the same regular transformation
/// (full quaternion scalars; the stored pair just rescales).
pub const SCALAR_EQUIV_TOL: f64 = 1e-10;

/// Pointwise composition antihomomorphism `F_{AB} = F_B . F_A`.
pub const ANTIHOM_TOL: f64 = 1e-9;

/// Real scalar matrices act as the identity map.
pub const KERNEL_TOL: f64 = 1e-12;

/// Matrix inverse round trip and Study-determinant multiplicativity, with
/// sampled matrices kept away from the singular locus (Study determinant
/// floored at 1e-2).
pub const MATRIX_TOL: f64 = 1e-9;

/// Boundary modulus drift under Moebius transformations.
pub const BALL_BOUNDARY_TOL: f64 = 1e-9;

/// Endpoint residual for the two-point Moebius construction (regular
/// evaluation at the source point).
pub const MAP_PAIR_TOL: f64 = 1e-9;

/// Moebius parameter recovery round trip.
pub const PARAM_ROUNDTRIP_TOL: f64 = 1e-9;

/// Rotation factor after dividing `qu` by its root at 0 has unit modulus.
pub const SCHWARZ_TOL: f64 = 1e-12;

/// Real-pole canonical forms: regular and pointwise evaluation agree.
pub const POLE_DICHOTOMY_TOL: f64 = 1e-10;

/// Transport collapses a pole sphere to the pole itself.
pub const SPHERE_COLLAPSE_TOL: f64 = 1e-10;

/// Generator sequences reproduce the pointwise map.
pub const GENERATOR_TOL: f64 = 1e-10;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tol: f64,
    /// Structural violations: wrong counts or shapes, unexpected errors,
    /// non-finite residuals.
    pub failures: usize,
    pub pass: bool,
}

/// Outcome of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

/// One residual and a count of structural failures from a single trial.
type TrialOutcome = (f64, usize);

fn fnv(name: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    h
}

/// Per-trial generator: seed, check salt, and trial index mixed through a
/// splitmix-style finalizer, so trials are independent of scheduling.
fn trial_rng(seed: u64, salt: u64, trial: usize) -> ChaCha8Rng {
    let mut x = seed
        ^ salt.rotate_left(17)
        ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^= x >> 31;
    ChaCha8Rng::seed_from_u64(x)
}

fn run_check<F>(name: &'static str, seed: u64, trials: usize, tol: f64, trial: F) -> CheckReport
where
    F: Fn(&mut QuaternionSampler, usize) -> TrialOutcome + Sync,
{
    let salt = fnv(name);
    let outcomes = batch::map_indexed(trials, |i| {
        let mut sampler = QuaternionSampler::from_rng(trial_rng(seed, salt, i));
        trial(&mut sampler, i)
    });
    let mut max_residual = 0.0f64;
    let mut failures = 0usize;
    for (r, f) in outcomes {
        failures += f;
        if r.is_finite() {
            max_residual = max_residual.max(r);
        } else {
            failures += 1;
        }
    }
    CheckReport {
        name: name.to_string(),
        trials,
        max_residual,
        tol,
        failures,
        pass: failures == 0 && max_residual < tol,
    }
}

// Sampling helpers. All draw from the trial's own stream.

fn cube(s: &mut QuaternionSampler, half: f64) -> Quaternion {
    s.sample(Region::Cube { half_width: half })
        .expect("cube region is valid")
}

fn ball(s: &mut QuaternionSampler, radius: f64) -> Quaternion {
    s.sample(Region::UnitBall).expect("ball region is valid") * radius
}

fn unit_quaternion(s: &mut QuaternionSampler) -> Quaternion {
    s.sample(Region::Boundary).expect("boundary region is valid")
}

fn rand_poly(s: &mut QuaternionSampler, min_deg: usize, max_deg: usize) -> RegularPolynomial {
    let deg = min_deg + (s.range(0.0, (max_deg - min_deg + 1) as f64).floor() as usize)
        .min(max_deg - min_deg);
    let mut coeffs: Vec<Quaternion> = (0..=deg).map(|_| cube(s, 1.0)).collect();
    while coeffs[deg].norm() < 0.2 {
        coeffs[deg] = cube(s, 1.0);
    }
    RegularPolynomial::from_coeffs(coeffs)
}

/// Roots on distinct slice spheres: `x` in [-1, 1], `y` in `[y_lo, y_hi]`,
/// pairwise slice-coordinate separation at least `sep`.
fn sep_roots(
    s: &mut QuaternionSampler,
    n: usize,
    y_lo: f64,
    y_hi: f64,
    sep: f64,
) -> Vec<Quaternion> {
    let mut roots: Vec<Quaternion> = Vec::with_capacity(n);
    while roots.len() < n {
        let mut placed = false;
        for _ in 0..500 {
            let x = s.range(-1.0, 1.0);
            let y = s.range(y_lo, y_hi);
            let u = s.unit();
            let cand = Quaternion::real(x) + u.as_quaternion() * y;
            let apart = roots.iter().all(|r| {
                let (rx, ry) = r.slice_coords();
                ((x - rx).powi(2) + (y - ry).powi(2)).sqrt() >= sep
            });
            if apart {
                roots.push(cand);
                placed = true;
                break;
            }
        }
        if !placed {
            roots.clear();
        }
    }
    roots
}

fn factored_poly(
    s: &mut QuaternionSampler,
    deg: usize,
    y_lo: f64,
    sep: f64,
) -> (RegularPolynomial, Vec<Quaternion>) {
    let roots = sep_roots(s, deg, y_lo, 1.2, sep);
    let f = RegularPolynomial::from_roots(&roots).expect("small factored degree");
    (f, roots)
}

/// Distance from `q` to the nearest slice sphere through one of `roots`.
fn sphere_distance(q: Quaternion, roots: &[Quaternion]) -> f64 {
    roots
        .iter()
        .map(|r| {
            let (x, y) = r.slice_coords();
            SliceSphere::new(x, y)
                .map(|sp| sp.dist(q))
                .unwrap_or_else(|_| q.dist(Quaternion::real(x)))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Point in the cube of half-width `half` at distance at least `floor`
/// from every root sphere.
fn point_off_spheres(
    s: &mut QuaternionSampler,
    half: f64,
    roots: &[Quaternion],
    floor: f64,
) -> Quaternion {
    for _ in 0..2000 {
        let q = cube(s, half);
        if sphere_distance(q, roots) >= floor {
            return q;
        }
    }
    // Unreachable for the floors used by the checks; fall back to a far
    // real point rather than panicking inside a trial.
    Quaternion::real(half + 1.0 + floor)
}

fn rand_invertible(s: &mut QuaternionSampler) -> MatrixH {
    loop {
        let m = MatrixH::new(cube(s, 1.0), cube(s, 1.0), cube(s, 1.0), cube(s, 1.0));
        if m.study_determinant() >= 1e-2 && m.inverse().is_ok() {
            return m;
        }
    }
}

fn rand_moebius(s: &mut QuaternionSampler) -> MatrixH {
    let a = ball(s, 0.8);
    let u = unit_quaternion(s);
    moebius_from_params(a, u).expect("interior parameter and unit rotation")
}

// Algebra suite.

fn check_star_associativity(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("star_associativity", seed, trials, tol, |s, _| {
        let f = rand_poly(s, 0, 6);
        let g = rand_poly(s, 0, 6);
        let h = rand_poly(s, 0, 6);
        let lhs = f.star_mul(&g).and_then(|fg| fg.star_mul(&h));
        let rhs = g.star_mul(&h).and_then(|gh| f.star_mul(&gh));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => (a.coeff_dist(&b), 0),
            _ => (0.0, 1),
        }
    })
}

fn check_star_distributivity(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("star_distributivity", seed, trials, tol, |s, _| {
        let f = rand_poly(s, 0, 6);
        let g = rand_poly(s, 0, 6);
        let h = rand_poly(s, 0, 6);
        let lhs = f.star_mul(&g.add(&h));
        let rhs = f.star_mul(&g).map(|fg| {
            fg.add(&f.star_mul(&h).expect("degree within cap"))
        });
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => (a.coeff_dist(&b), 0),
            _ => (0.0, 1),
        }
    })
}

fn check_conjugate_antihomomorphism(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("conjugate_antihomomorphism", seed, trials, tol, |s, _| {
        let f = rand_poly(s, 0, 6);
        let g = rand_poly(s, 0, 6);
        match (
            f.star_mul(&g).map(|fg| fg.regular_conjugate()),
            g.regular_conjugate().star_mul(&f.regular_conjugate()),
        ) {
            (Ok(a), Ok(b)) => (a.coeff_dist(&b), 0),
            _ => (0.0, 1),
        }
    })
}

fn check_symmetrization_real_central(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("symmetrization_real_central", seed, trials, tol, |s, _| {
        let f = rand_poly(s, 0, 6);
        let g = rand_poly(s, 0, 4);
        // Reality: the raw product f * f^c has vanishing imaginary parts.
        let raw = match f.star_mul(&f.regular_conjugate()) {
            Ok(p) => p,
            Err(_) => return (0.0, 1),
        };
        let imag = raw
            .coeffs()
            .iter()
            .map(|c| c.imag().norm())
            .fold(0.0f64, f64::max);
        // Centrality: f^s commutes with arbitrary polynomials under *.
        let sym = match f.symmetrization() {
            Ok(p) => p,
            Err(_) => return (0.0, 1),
        };
        let central = match (sym.star_mul(&g), g.star_mul(&sym)) {
            (Ok(a), Ok(b)) => a.coeff_dist(&b),
            _ => return (imag, 1),
        };
        (imag.max(central), 0)
    })
}

fn check_symmetrization_multiplicative(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check(
        "symmetrization_multiplicative",
        seed,
        trials,
        tol,
        |s, _| {
            let f = rand_poly(s, 0, 5);
            let g = rand_poly(s, 0, 5);
            let lhs = f.star_mul(&g).and_then(|fg| fg.symmetrization());
            let rhs = f
                .symmetrization()
                .and_then(|fs| Ok(fs.star_mul(&g.symmetrization()?)?));
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => (a.coeff_dist(&b), 0),
                _ => (0.0, 1),
            }
        },
    )
}

fn check_planted_root_roundtrip(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("planted_root_roundtrip", seed, trials, tol, |s, _| {
        let p = cube(s, 1.0);
        let g = rand_poly(s, 0, 5);
        let f = match RegularPolynomial::linear(p).star_mul(&g) {
            Ok(f) => f,
            Err(_) => return (0.0, 1),
        };
        match f.left_divide_linear(p) {
            Ok(back) => {
                let rebuilt = RegularPolynomial::linear(p)
                    .star_mul(&back)
                    .expect("degree preserved");
                (rebuilt.coeff_dist(&f).max(back.coeff_dist(&g)), 0)
            }
            Err(_) => (0.0, 1),
        }
    })
}

fn check_eval_product_law(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("eval_product_law", seed, trials, tol, |s, _| {
        let f = rand_poly(s, 1, 3);
        let g = rand_poly(s, 0, 3);
        let fg = match f.star_mul(&g) {
            Ok(p) => p,
            Err(_) => return (0.0, 1),
        };
        // Keep |f(q)| away from 0 so the conjugation stays conditioned.
        let mut q = cube(s, 1.2);
        let mut tries = 0;
        while f.eval(q).norm() < 0.1 && tries < 500 {
            q = cube(s, 1.2);
            tries += 1;
        }
        let fq = f.eval(q);
        if fq.norm() < 0.1 {
            return (0.0, 1);
        }
        let fqi = fq.inverse().expect("guarded away from zero");
        let transported = fqi * q * fq;
        let expect = fq * g.eval(transported);
        let direct = fg.eval(q);
        (direct.dist(expect) / (1.0 + direct.norm()), 0)
    })
}

fn check_dbar_polynomial(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("dbar_polynomial", seed, trials, tol, |s, _| {
        let f = rand_poly(s, 0, 4);
        let q = cube(s, 1.0);
        let unit = s.unit();
        (f.dbar_residual(q, unit, DBAR_STEP), 0)
    })
}

// Quotient suite.

fn check_quotient_two_route_oracle(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("quotient_two_route_oracle", seed, trials, tol, |s, i| {
        let deg = 1 + i % 2;
        let (f, roots) = factored_poly(s, deg, 0.2, 0.3);
        let g = rand_poly(s, 0, 3);
        let r = match RegularRational::new(f, g) {
            Ok(r) => r,
            Err(_) => return (0.0, 1),
        };
        let q = point_off_spheres(s, 1.2, &roots, 0.05);
        match (r.eval(q), r.relation_eval(q)) {
            (Ok(a), Ok(b)) => (a.dist(b) / (1.0 + a.norm()), 0),
            _ => (0.0, 1),
        }
    })
}

fn check_reciprocal_identity(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("reciprocal_identity", seed, trials, tol, |s, _| {
        let deg = 1 + (s.range(0.0, 2.0) as usize).min(1);
        let (f, roots) = factored_poly(s, deg, 0.25, 0.35);
        let r = RegularRational::reciprocal(f.clone())
            .and_then(|rec| rec.star_mul(&RegularRational::from_polynomial(f)));
        let r = match r {
            Ok(r) => r,
            Err(_) => return (0.0, 1),
        };
        let q = point_off_spheres(s, 1.2, &roots, 0.25);
        match r.eval(q) {
            Ok(v) => (v.dist(Quaternion::ONE), 0),
            Err(_) => (0.0, 1),
        }
    })
}

fn check_transport_sphere_preservation(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check(
        "transport_sphere_preservation",
        seed,
        trials,
        tol,
        |s, _| {
            let (f, roots) = factored_poly(s, 2, 0.2, 0.3);
            let q = point_off_spheres(s, 1.2, &roots, 0.1);
            match transport(&f, q) {
                Ok(t) => {
                    let dx = (t.re() - q.re()).abs();
                    let dy = (t.imag_norm() - q.imag_norm()).abs();
                    (dx.max(dy), 0)
                }
                Err(_) => (0.0, 1),
            }
        },
    )
}

fn check_transport_real_fixed(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("transport_real_fixed", seed, trials, tol, |s, _| {
        let (f, _) = factored_poly(s, 2, 0.2, 0.3);
        let x = Quaternion::real(s.range(-1.2, 1.2));
        match transport(&f, x) {
            Ok(t) => (t.dist(x), 0),
            Err(_) => (0.0, 1),
        }
    })
}

fn check_transport_involution(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("transport_involution", seed, trials, tol, |s, _| {
        let (f, roots) = factored_poly(s, 2, 0.2, 0.3);
        let q = point_off_spheres(s, 1.2, &roots, 0.1);
        let back = transport(&f, q).and_then(|t| transport(&f.regular_conjugate(), t));
        match back {
            Ok(b) => (b.dist(q), 0),
            Err(_) => (0.0, 1),
        }
    })
}

fn check_quotient_product_associativity(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check(
        "quotient_product_associativity",
        seed,
        trials,
        tol,
        |s, _| {
            let roots = sep_roots(s, 3, 0.3, 1.0, 0.4);
            let quotients: Vec<RegularRational> = roots
                .iter()
                .map(|p| {
                    RegularRational::new(RegularPolynomial::linear(*p), rand_poly(s, 0, 1))
                        .expect("linear denominator")
                })
                .collect();
            let lhs = quotients[0]
                .star_mul(&quotients[1])
                .and_then(|a| a.star_mul(&quotients[2]));
            let rhs = quotients[1]
                .star_mul(&quotients[2])
                .and_then(|b| quotients[0].star_mul(&b));
            let (lhs, rhs) = match (lhs, rhs) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return (0.0, 1),
            };
            // The two associations store different (den, num) pairs whose
            // symmetrized denominators reach degree 20; evaluate well away
            // from every pole sphere so the singular guard has slack.
            let mut residual = 0.0f64;
            for k in 0..4 {
                let q = if k < 3 {
                    Quaternion::real(s.range(1.6, 2.4))
                } else {
                    Quaternion::real(s.range(-0.5, 0.5))
                        + s.unit().as_quaternion() * s.range(2.3, 2.7)
                };
                match (lhs.eval(q), rhs.eval(q)) {
                    (Ok(a), Ok(b)) => {
                        residual = residual.max(a.dist(b) / (1.0 + a.norm()))
                    }
                    _ => return (residual, 1),
                }
            }
            (residual, 0)
        },
    )
}

fn check_symmetrization_eval_identity(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check(
        "symmetrization_eval_identity",
        seed,
        trials,
        tol,
        |s, _| {
            let (f, roots) = factored_poly(s, 2, 0.2, 0.3);
            let q = point_off_spheres(s, 1.2, &roots, 0.1);
            let sym = match f.symmetrization() {
                Ok(p) => p,
                Err(_) => return (0.0, 1),
            };
            let fc = f.regular_conjugate().eval(q);
            match transport(&f, q) {
                Ok(t) => {
                    let lhs = sym.eval(q);
                    let rhs = fc * f.eval(t);
                    (lhs.dist(rhs) / (1.0 + lhs.norm()), 0)
                }
                Err(_) => (0.0, 1),
            }
        },
    )
}

fn check_dbar_quotient(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("dbar_quotient", seed, trials, tol, |s, _| {
        // Third derivatives of a quotient grow like dist^-4, so the
        // finite-difference truncation h^2 f''' / 6 needs points kept
        // clear of the pole sphere and a numerator of moderate size.
        let (den, roots) = factored_poly(s, 1, 0.5, 0.3);
        let deg = (s.range(0.0, 3.0).floor() as usize).min(2);
        let mut nc: Vec<Quaternion> = (0..=deg).map(|_| cube(s, 0.5)).collect();
        while nc[deg].norm() < 0.1 {
            nc[deg] = cube(s, 0.5);
        }
        let num = RegularPolynomial::from_coeffs(nc);
        let r = match RegularRational::new(den, num) {
            Ok(r) => r,
            Err(_) => return (0.0, 1),
        };
        let ev = match r.evaluator() {
            Ok(ev) => ev,
            Err(_) => return (0.0, 1),
        };
        // The probe differentiates along the slice plane of `unit`, so the
        // distance constraint must hold for the in-plane point itself.
        let unit = s.unit();
        let mut point = None;
        for _ in 0..2000 {
            let x = s.range(-1.0, 1.0);
            let y = s.range(-1.2, 1.2);
            let cand = Quaternion::real(x) + unit.as_quaternion() * y;
            if sphere_distance(cand, &roots) >= 0.45 {
                point = Some(cand);
                break;
            }
        }
        let point = match point {
            Some(p) => p,
            None => return (0.0, 1),
        };
        let nan = Quaternion::new(f64::NAN, 0.0, 0.0, 0.0);
        let res = crate::poly::dbar_residual_fn(
            |p| ev.eval(p).unwrap_or(nan),
            point,
            unit,
            DBAR_STEP,
        );
        (res, 0)
    })
}

fn check_singular_structure(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("singular_structure", seed, trials, tol, |s, i| {
        let variant = i % 3;
        let mut failures = 0usize;
        let mut drift = 0.0f64;

        let find = |set: &[crate::quotient::Singularity], x: f64, y: f64| {
            set.iter()
                .find_map(|sing| match sing.locus {
                    SingularLocus::Sphere(sp) if y > 0.0 => {
                        let d = ((sp.x() - x).powi(2) + (sp.y() - y).powi(2)).sqrt();
                        (d < 1e-4).then_some((d, *sing))
                    }
                    SingularLocus::RealPoint(px) if y == 0.0 => {
                        let d = (px - x).abs();
                        (d < 1e-4).then_some((d, *sing))
                    }
                    _ => None,
                })
        };

        match variant {
            0 => {
                // Generic numerator: both spheres are genuine poles.
                let roots = sep_roots(s, 2, 0.3, 1.0, 0.4);
                let den = RegularPolynomial::from_roots(&roots).expect("degree 2");
                let num = rand_poly(s, 0, 1);
                let r = RegularRational::new(den, num).expect("nonzero denominator");
                let set = match r.singular_set() {
                    Ok(v) => v,
                    Err(_) => return (0.0, 1),
                };
                if set.len() != 2 {
                    return (0.0, 1);
                }
                for root in &roots {
                    let (x, y) = root.slice_coords();
                    match find(&set, x, y) {
                        Some((d, sing)) => {
                            drift = drift.max(d);
                            if sing.order != 1 || sing.multiplicity != 1 {
                                failures += 1;
                            }
                        }
                        None => failures += 1,
                    }
                }
            }
            1 => {
                // Numerator shares the first factor: removable there.
                let roots = sep_roots(s, 2, 0.3, 1.0, 0.4);
                let den = RegularPolynomial::from_roots(&roots).expect("degree 2");
                let mut h = cube(s, 1.0);
                while h.norm() < 0.2 {
                    h = cube(s, 1.0);
                }
                let num = RegularPolynomial::linear(roots[0])
                    .star_mul(&RegularPolynomial::constant(h))
                    .expect("degree 1");
                let r = RegularRational::new(den, num).expect("nonzero denominator");
                let set = match r.singular_set() {
                    Ok(v) => v,
                    Err(_) => return (0.0, 1),
                };
                let (x0, y0) = roots[0].slice_coords();
                match find(&set, x0, y0) {
                    Some((d, sing)) => {
                        drift = drift.max(d);
                        if sing.order != 0 || !sing.potentially_removable {
                            failures += 1;
                        }
                    }
                    None => failures += 1,
                }
                let (x1, y1) = roots[1].slice_coords();
                match find(&set, x1, y1) {
                    Some((d, sing)) => {
                        drift = drift.max(d);
                        if sing.order != 1 || sing.potentially_removable {
                            failures += 1;
                        }
                    }
                    None => failures += 1,
                }
            }
            _ => {
                // Mixed real point and sphere.
                let x = s.range(-1.0, 1.0);
                let mut roots = sep_roots(s, 1, 0.5, 1.0, 0.4);
                while (roots[0].slice_coords().0 - x).abs() < 0.3 {
                    roots = sep_roots(s, 1, 0.5, 1.0, 0.4);
                }
                let den = RegularPolynomial::linear(Quaternion::real(x))
                    .star_mul(&RegularPolynomial::linear(roots[0]))
                    .expect("degree 2");
                let num = rand_poly(s, 0, 1);
                let r = RegularRational::new(den, num).expect("nonzero denominator");
                let set = match r.singular_set() {
                    Ok(v) => v,
                    Err(_) => return (0.0, 1),
                };
                match find(&set, x, 0.0) {
                    Some((d, sing)) => {
                        drift = drift.max(d);
                        if sing.order != 1 || sing.multiplicity != 2 {
                            failures += 1;
                        }
                    }
                    None => failures += 1,
                }
                let (x1, y1) = roots[0].slice_coords();
                match find(&set, x1, y1) {
                    Some((d, sing)) => {
                        drift = drift.max(d);
                        if sing.order != 1 {
                            failures += 1;
                        }
                    }
                    None => failures += 1,
                }
            }
        }
        (drift, failures)
    })
}

// Zeros suite.

fn check_zero_set_known_cases(seed: u64, _trials: usize, tol: f64) -> CheckReport {
    // Fixed catalog; the trial count records how many cases ran.
    let i = Quaternion::I;
    let j = Quaternion::J;
    run_check("zero_set_known_cases", seed, 5, tol, |_, case| {
        let mut failures = 0usize;
        let mut residual = 0.0f64;
        match case {
            0 => {
                // q^2 + 1: the unit sphere, nothing else.
                let f = RegularPolynomial::from_coeffs(vec![
                    Quaternion::ONE,
                    Quaternion::ZERO,
                    Quaternion::ONE,
                ]);
                match zero_set(&f) {
                    Ok(z) => {
                        if z.isolated.is_empty()
                            && z.spheres.len() == 1
                            && z.spheres[0].multiplicity == 1
                        {
                            residual = z.spheres[0]
                                .sphere
                                .x()
                                .abs()
                                .max((z.spheres[0].sphere.y() - 1.0).abs());
                        } else {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
            1 => {
                // (q - i) * (q - j): only i, with the pair multiplicity.
                let f = RegularPolynomial::from_roots(&[i, j]).expect("degree 2");
                match zero_set(&f) {
                    Ok(z) => {
                        if z.spheres.is_empty() && z.isolated.len() == 1 {
                            residual = z.isolated[0].point.dist(i).max(f.eval(z.isolated[0].point).norm());
                        } else {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
            2 => {
                // (q - i) * (q - i): the repeated point, no sphere.
                let f = RegularPolynomial::from_roots(&[i, i]).expect("degree 2");
                match zero_set(&f) {
                    Ok(z) => {
                        if z.spheres.is_empty()
                            && z.isolated.len() == 1
                            && z.isolated[0].multiplicity == 2
                        {
                            residual = z.isolated[0].point.dist(i);
                        } else {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
            3 => {
                // (q^2 + 1) * (q - 1 - 2j): sphere plus translated point.
                let p = Quaternion::new(1.0, 0.0, 2.0, 0.0);
                let f = RegularPolynomial::from_coeffs(vec![
                    Quaternion::ONE,
                    Quaternion::ZERO,
                    Quaternion::ONE,
                ])
                .star_mul(&RegularPolynomial::linear(p))
                .expect("degree 3");
                match zero_set(&f) {
                    Ok(z) => {
                        if z.spheres.len() == 1 && z.isolated.len() == 1 {
                            residual = z.isolated[0].point.dist(p).max(f.eval(z.isolated[0].point).norm());
                        } else {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
            _ => {
                // q - 2: a simple real zero.
                let f = RegularPolynomial::linear(Quaternion::real(2.0));
                match zero_set(&f) {
                    Ok(z) => {
                        if z.spheres.is_empty()
                            && z.isolated.len() == 1
                            && z.isolated[0].multiplicity == 1
                        {
                            residual = z.isolated[0].point.dist(Quaternion::real(2.0));
                        } else {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
        }
        (residual, failures)
    })
}

fn check_sphere_scan_isolation(seed: u64, trials: usize, tol: f64) -> CheckReport {
    // One fixed function; the trial count is the lattice size of the scan.
    let scan_points = trials.max(50);
    run_check("sphere_scan_isolation", seed, 1, tol, move |_, _| {
        let i = Quaternion::I;
        let j = Quaternion::J;
        let f = RegularPolynomial::from_roots(&[i, j]).expect("degree 2");
        let sphere = SliceSphere::new(0.0, 1.0).expect("unit sphere");
        let (point, min_at) = crate::zeros::sphere_min_scan(|q| f.eval(q), sphere, scan_points, true);
        let mut failures = 0usize;
        if point.dist(i) > 1e-3 {
            failures += 1;
        }
        // Off the zero the lattice stays clearly away from vanishing.
        let off_min = fibonacci_units(scan_points)
            .into_iter()
            .map(|u| sphere.point(u))
            .filter(|p| p.dist(i) >= 0.3)
            .map(|p| f.eval(p).norm())
            .fold(f64::INFINITY, f64::min);
        if off_min <= 1e-3 {
            failures += 1;
        }
        (min_at, failures)
    })
}

fn check_product_zero_law(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("product_zero_law", seed, trials, tol, |s, _| {
        // Shared separated root pool keeps the product's spheres distinct.
        let roots = sep_roots(s, 4, 0.2, 1.0, 0.35);
        let f = RegularPolynomial::from_roots(&roots[..2]).expect("degree 2");
        let g = RegularPolynomial::from_roots(&roots[2..]).expect("degree 2");
        let fg = match f.star_mul(&g) {
            Ok(p) => p,
            Err(_) => return (0.0, 1),
        };
        let z = match zero_set(&fg) {
            Ok(z) => z,
            Err(_) => return (0.0, 1),
        };
        let mut failures = 0usize;
        if z.count_with_multiplicity() != 4 {
            failures += 1;
        }
        let mut residual = 0.0f64;
        for zero in &z.isolated {
            let p = zero.point;
            let fp = f.eval(p);
            let direct = fp.norm();
            let through = if direct > PRODUCT_ZERO_TOL {
                let c = fp.inverse().expect("nonzero by guard");
                g.eval(c * p * fp).norm()
            } else {
                f64::INFINITY
            };
            residual = residual.max(direct.min(through));
        }
        (residual, failures)
    })
}

fn check_zero_completeness(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("zero_completeness", seed, trials, tol, |s, i| {
        let n = 2 + i % 3;
        let roots = sep_roots(s, n, 0.2, 1.0, 0.35);
        let f = RegularPolynomial::from_roots(&roots).expect("small degree");
        let z = match zero_set(&f) {
            Ok(z) => z,
            Err(_) => return (0.0, 1),
        };
        let mut failures = 0usize;
        if z.count_with_multiplicity() != n {
            failures += 1;
        }
        // The first root is planted exactly; it must be reported.
        let reported = z
            .isolated
            .iter()
            .any(|zr| zr.point.dist(roots[0]) < 1e-6);
        if !reported {
            failures += 1;
        }
        let residual = z
            .isolated
            .iter()
            .map(|zr| f.eval(zr.point).norm())
            .fold(0.0f64, f64::max);
        (residual, failures)
    })
}

fn check_conjugate_pairing(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("conjugate_pairing", seed, trials, tol, |s, i| {
        let roots = sep_roots(s, 2, 0.25, 1.0, 0.4);
        let (x, y) = roots[0].slice_coords();
        let sphere = SliceSphere::new(x, y).expect("positive radius");
        let mut failures = 0usize;
        let mut residual = 0.0f64;
        if i % 2 == 0 {
            // Point zero on the sphere: both f and f^c carry one.
            let f = RegularPolynomial::from_roots(&roots).expect("degree 2");
            match crate::zeros::conjugate_zero_pairing(&f, sphere) {
                Ok((crate::zeros::SphereZero::Point(p), crate::zeros::SphereZero::Point(pc))) => {
                    residual = f
                        .eval(p)
                        .norm()
                        .max(f.regular_conjugate().eval(pc).norm());
                }
                Ok(_) => failures += 1,
                Err(_) => failures += 1,
            }
        } else {
            // Spherical zero: both sides see the whole sphere.
            let quad = RegularPolynomial::from_coeffs(vec![
                Quaternion::real(x * x + y * y),
                Quaternion::real(-2.0 * x),
                Quaternion::ONE,
            ]);
            let f = quad
                .star_mul(&RegularPolynomial::linear(roots[1]))
                .expect("degree 3");
            match crate::zeros::conjugate_zero_pairing(&f, sphere) {
                Ok((crate::zeros::SphereZero::Spherical, crate::zeros::SphereZero::Spherical)) => {}
                Ok(_) => failures += 1,
                Err(_) => failures += 1,
            }
        }
        (residual, failures)
    })
}

fn check_sphere_pair_lemma(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("sphere_pair_lemma", seed, trials, tol, |s, _| {
        let x = s.range(-0.7, 0.7);
        let y = s.range(0.1, 0.8);
        let sphere = SliceSphere::new(x, y).expect("positive radius");
        let alpha = sphere.point(s.unit());
        let mut beta = sphere.point(s.unit());
        let mut tries = 0;
        while (beta - alpha.conj()).norm() <= 1e-3 && tries < 500 {
            beta = sphere.point(s.unit());
            tries += 1;
        }
        if (beta - alpha.conj()).norm() <= 1e-3 {
            return (0.0, 1);
        }
        match sphere_transport_lemma(alpha, beta, 1e-8) {
            Ok(v) => (v.dist(alpha), 0),
            Err(_) => (0.0, 1),
        }
    })
}

// Action suite.

fn check_right_action_composition(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("right_action_composition", seed, trials, tol, |s, _| {
        let (den, roots) = factored_poly(s, 2, 0.3, 0.4);
        let num = rand_poly(s, 0, 2);
        let r = match RegularRational::new(den, num) {
            Ok(r) => r,
            Err(_) => return (0.0, 1),
        };
        let a = rand_invertible(s);
        let b = rand_invertible(s);
        let two = act(&r, &a).and_then(|ra| act(&ra, &b));
        let one = act(&r, &a.mul(&b));
        let (two, one) = match (two, one) {
            (Ok(x), Ok(y)) => (x, y),
            _ => return (0.0, 1),
        };
        let mut residual = 0.0f64;
        let mut evaluated = 0usize;
        for _ in 0..20 {
            let q = point_off_spheres(s, 1.2, &roots, 0.05);
            if let (Ok(va), Ok(vb)) = (two.eval(q), one.eval(q)) {
                if va.norm() <= 20.0 {
                    residual = residual.max(va.dist(vb));
                    evaluated += 1;
                }
            }
        }
        (residual, usize::from(evaluated == 0))
    })
}

fn check_scalar_equivalence(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("scalar_equivalence", seed, trials, tol, |s, _| {
        let m = rand_invertible(s);
        let mut c = cube(s, 1.5);
        while c.norm() < 0.2 {
            c = cube(s, 1.5);
        }
        let scaled = m.scale(c);
        let mut residual = 0.0f64;
        let mut evaluated = 0usize;
        for _ in 0..5 {
            let q = cube(s, 1.2);
            if let (Ok(x), Ok(y)) = (rft_eval(&m, q), rft_eval(&scaled, q)) {
                if x.norm() <= 20.0 {
                    residual = residual.max(x.dist(y));
                    evaluated += 1;
                }
            }
        }
        (residual, usize::from(evaluated == 0))
    })
}

fn check_action_relation_oracle(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("action_relation_oracle", seed, trials, tol, |s, _| {
        let (den, roots) = factored_poly(s, 1, 0.3, 0.4);
        let num = rand_poly(s, 0, 2);
        let r = match RegularRational::new(den, num) {
            Ok(r) => r,
            Err(_) => return (0.0, 1),
        };
        let m = rand_invertible(s);
        for _ in 0..50 {
            let q = point_off_spheres(s, 1.2, &roots, 0.1);
            let direct = act(&r, &m).and_then(|ra| ra.eval(q));
            let routed = relation_transport_eval(&r, &m, q);
            if let (Ok(x), Ok(y)) = (direct, routed) {
                if x.norm() <= 20.0 {
                    return (x.dist(y) / (1.0 + x.norm()), 0);
                }
            }
        }
        (0.0, 1)
    })
}

fn check_pole_dichotomy_real(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("pole_dichotomy_real", seed, trials, tol, |s, _| {
        // d = -c x puts the canonical pole on the real axis; there the
        // canonical form's regular and pointwise evaluations coincide.
        let x = s.range(-1.0, 1.0);
        let mut c = cube(s, 1.0);
        while c.norm() < 0.3 {
            c = cube(s, 1.0);
        }
        let m = MatrixH::new(cube(s, 1.0), c, cube(s, 1.0), -(c * x));
        if m.inverse().is_err() {
            return (0.0, 0);
        }
        let (ca, cb, p) = match canonical_form(&m) {
            Ok(CanonicalRFT::Pole { a, b, p }) => {
                if p.dist(Quaternion::real(x)) > 1e-10
                    || !matches!(classify_pole(&m), Ok(PoleClass::RealPole(_)))
                {
                    return (0.0, 1);
                }
                (a, b, p)
            }
            _ => return (0.0, 1),
        };
        let mut q = cube(s, 1.2);
        let mut tries = 0;
        while (q - Quaternion::real(x)).norm() < 0.2 && tries < 500 {
            q = cube(s, 1.2);
            tries += 1;
        }
        // rft_eval already equals the canonical form's regular value;
        // compare against the canonical pointwise one.
        let regular = match rft_eval(&m, q) {
            Ok(v) => v,
            Err(_) => return (0.0, 1),
        };
        let den_inv = match (q - p).inverse() {
            Ok(v) => v,
            Err(_) => return (0.0, 1),
        };
        let pointwise = den_inv * (q * ca + cb);
        (regular.dist(pointwise) / (1.0 + regular.norm()), 0)
    })
}

fn check_sphere_pole_collapse(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("sphere_pole_collapse", seed, trials, tol, |s, _| {
        let x = s.range(-1.0, 1.0);
        let y = s.range(0.2, 1.0);
        let sphere = SliceSphere::new(x, y).expect("positive radius");
        let p = sphere.point(s.unit());
        let f = RegularPolynomial::linear(p);
        let mut q = sphere.point(s.unit());
        let mut tries = 0;
        while (q - p.conj()).norm() < 1e-3 && tries < 500 {
            q = sphere.point(s.unit());
            tries += 1;
        }
        match transport(&f, q) {
            Ok(t) => (t.dist(p), 0),
            Err(_) => (0.0, 1),
        }
    })
}

fn check_generator_sequences(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("generator_sequences", seed, trials, tol, |s, i| {
        let m = if i % 3 == 0 {
            // Force the affine branch periodically.
            let mut mm = rand_invertible(s);
            mm.c = Quaternion::ZERO;
            if mm.inverse().is_err() {
                return (0.0, 0);
            }
            mm
        } else {
            rand_invertible(s)
        };
        let seq = match generators_decompose(&m) {
            Ok(seq) => seq,
            Err(_) => return (0.0, 1),
        };
        let mut residual = 0.0f64;
        let mut evaluated = 0usize;
        for _ in 0..5 {
            let q = cube(s, 1.2);
            let direct = lft_eval(&m, ExtendedQuaternion::Finite(q));
            let chained = generators_eval(&seq, ExtendedQuaternion::Finite(q));
            match (direct, chained) {
                (ExtendedQuaternion::Finite(x), ExtendedQuaternion::Finite(y)) => {
                    if x.norm() <= 20.0 {
                        residual = residual.max(x.dist(y));
                        evaluated += 1;
                    }
                }
                (ExtendedQuaternion::Infinity, ExtendedQuaternion::Infinity) => {
                    evaluated += 1;
                }
                _ => return (residual, 1),
            }
        }
        (residual, usize::from(evaluated == 0))
    })
}

// Antihomomorphism suite.

fn check_pointwise_antihomomorphism(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("pointwise_antihomomorphism", seed, trials, tol, |s, _| {
        let a = rand_invertible(s);
        let b = rand_invertible(s);
        let ab = a.mul(&b);
        for _ in 0..100 {
            let q = cube(s, 1.2);
            let step = lft_eval(&a, ExtendedQuaternion::Finite(q));
            let chained = match step {
                ExtendedQuaternion::Finite(v) if v.norm() <= 10.0 => lft_eval(&b, step),
                _ => continue,
            };
            let direct = lft_eval(&ab, ExtendedQuaternion::Finite(q));
            if let (ExtendedQuaternion::Finite(x), ExtendedQuaternion::Finite(y)) =
                (direct, chained)
            {
                if x.norm() <= 10.0 {
                    return (x.dist(y), 0);
                }
            }
        }
        (0.0, 1)
    })
}

fn check_kernel_real_scalars(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("kernel_real_scalars", seed, trials, tol, |s, _| {
        let sign = if s.range(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let t = sign * s.range(0.2, 3.0);
        let m = MatrixH::IDENTITY.scale(Quaternion::real(t));
        let q = cube(s, 1.5);
        match lft_eval(&m, ExtendedQuaternion::Finite(q)) {
            ExtendedQuaternion::Finite(v) => (v.dist(q), 0),
            ExtendedQuaternion::Infinity => (0.0, 1),
        }
    })
}

fn check_matrix_inverse_roundtrip(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("matrix_inverse_roundtrip", seed, trials, tol, |s, _| {
        let m = rand_invertible(s);
        let inv = match m.inverse() {
            Ok(inv) => inv,
            Err(_) => return (0.0, 1),
        };
        let mut residual = 0.0f64;
        for p in [m.mul(&inv), inv.mul(&m)] {
            residual = residual
                .max((p.a - Quaternion::ONE).norm())
                .max(p.c.norm())
                .max(p.b.norm())
                .max((p.d - Quaternion::ONE).norm());
        }
        (residual, 0)
    })
}

fn check_study_determinant_multiplicative(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check(
        "study_determinant_multiplicative",
        seed,
        trials,
        tol,
        |s, _| {
            let a = rand_invertible(s);
            let b = rand_invertible(s);
            let lhs = a.mul(&b).study_determinant();
            let rhs = a.study_determinant() * b.study_determinant();
            ((lhs - rhs).abs() / (1.0 + rhs.abs()), 0)
        },
    )
}

// Indefinite-isometry suite.

fn check_moebius_membership(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("moebius_membership", seed, trials, tol, |s, i| {
        let m = if i % 2 == 0 {
            rand_moebius(s)
        } else {
            // Group closure: products stay members.
            rand_moebius(s).mul(&rand_moebius(s))
        };
        (m.sp11_residual(), 0)
    })
}

fn check_ball_boundary_preservation(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("ball_boundary_preservation", seed, trials, tol, |s, _| {
        let m = rand_moebius(s);
        let r = match rft_rational(&m) {
            Ok(r) => r,
            Err(_) => return (0.0, 1),
        };
        let ev = match r.evaluator() {
            Ok(ev) => ev,
            Err(_) => return (0.0, 1),
        };
        let mut failures = 0usize;
        let mut residual = 0.0f64;
        for _ in 0..10 {
            let q = ball(s, 0.95);
            match ev.eval(q) {
                Ok(v) if v.norm() < 1.0 => {}
                _ => failures += 1,
            }
        }
        for _ in 0..10 {
            let q = unit_quaternion(s);
            match ev.eval(q) {
                Ok(v) => residual = residual.max((v.norm() - 1.0).abs()),
                Err(_) => failures += 1,
            }
        }
        (residual, failures)
    })
}

fn check_map_pair_endpoints(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("map_pair_endpoints", seed, trials, tol, |s, _| {
        let a = ball(s, 0.8);
        let b = ball(s, 0.8);
        let m = match moebius_map_pair(a, b) {
            Ok(m) => m,
            Err(_) => return (0.0, 1),
        };
        let mut failures = 0usize;
        if !m.sp11_check(SP11_TOL).pass {
            failures += 1;
        }
        match rft_eval(&m, a) {
            Ok(v) => (v.dist(b), failures),
            Err(_) => (0.0, failures + 1),
        }
    })
}

fn check_params_roundtrip(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("params_roundtrip", seed, trials, tol, |s, i| {
        let a = ball(s, 0.8);
        let u = unit_quaternion(s);
        let mut m = match moebius_from_params(a, u) {
            Ok(m) => m,
            Err(_) => return (0.0, 1),
        };
        if i % 3 == 1 {
            m = m.scale(Quaternion::real(s.range(0.3, 3.0)));
        } else if i % 3 == 2 {
            let mut c = cube(s, 1.0);
            while c.norm() < 0.3 {
                c = cube(s, 1.0);
            }
            m = m.scale(c);
        }
        match moebius_params(&m) {
            Ok((ra, ru)) => (ra.dist(a).max(ru.dist(u)), 0),
            Err(_) => (0.0, 1),
        }
    })
}

fn check_schwarz_rotation_factor(seed: u64, trials: usize, tol: f64) -> CheckReport {
    run_check("schwarz_rotation_factor", seed, trials, tol, |s, _| {
        let u = unit_quaternion(s);
        let f = RegularPolynomial::from_coeffs(vec![Quaternion::ZERO, u]);
        match f.left_divide_linear(Quaternion::ZERO) {
            Ok(g) => {
                if g.degree() != Some(0) {
                    return (0.0, 1);
                }
                let q = cube(s, 1.0);
                ((g.eval(q).norm() - 1.0).abs(), 0)
            }
            Err(_) => (0.0, 1),
        }
    })
}

/// A check definition: name, defaults, and runner.
#[derive(Clone, Copy)]
pub struct CheckDef {
    pub name: &'static str,
    pub default_trials: usize,
    pub default_tol: f64,
    runner: fn(u64, usize, f64) -> CheckReport,
}

const ALGEBRA_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "star_associativity",
        default_trials: 200,
        default_tol: COEFF_IDENTITY_TOL,
        runner: check_star_associativity,
    },
    CheckDef {
        name: "star_distributivity",
        default_trials: 200,
        default_tol: COEFF_IDENTITY_TOL,
        runner: check_star_distributivity,
    },
    CheckDef {
        name: "conjugate_antihomomorphism",
        default_trials: 200,
        default_tol: COEFF_IDENTITY_TOL,
        runner: check_conjugate_antihomomorphism,
    },
    CheckDef {
        name: "symmetrization_real_central",
        default_trials: 200,
        default_tol: COEFF_IDENTITY_TOL,
        runner: check_symmetrization_real_central,
    },
    CheckDef {
        name: "symmetrization_multiplicative",
        default_trials: 200,
        default_tol: COEFF_IDENTITY_TOL,
        runner: check_symmetrization_multiplicative,
    },
    CheckDef {
        name: "planted_root_roundtrip",
        default_trials: 200,
        default_tol: FACTOR_ROUNDTRIP_TOL,
        runner: check_planted_root_roundtrip,
    },
    CheckDef {
        name: "eval_product_law",
        default_trials: 200,
        default_tol: EVAL_PRODUCT_TOL,
        runner: check_eval_product_law,
    },
    CheckDef {
        name: "dbar_polynomial",
        default_trials: 100,
        default_tol: DBAR_TOL,
        runner: check_dbar_polynomial,
    },
];

const QUOTIENT_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "quotient_two_route_oracle",
        default_trials: 500,
        default_tol: QUOTIENT_ORACLE_TOL,
        runner: check_quotient_two_route_oracle,
    },
    CheckDef {
        name: "reciprocal_identity",
        default_trials: 300,
        default_tol: RECIPROCAL_TOL,
        runner: check_reciprocal_identity,
    },
    CheckDef {
        name: "transport_sphere_preservation",
        default_trials: 500,
        default_tol: TRANSPORT_SPHERE_TOL,
        runner: check_transport_sphere_preservation,
    },
    CheckDef {
        name: "transport_real_fixed",
        default_trials: 500,
        default_tol: TRANSPORT_REAL_TOL,
        runner: check_transport_real_fixed,
    },
    CheckDef {
        name: "transport_involution",
        default_trials: 500,
        default_tol: TRANSPORT_INVOLUTION_TOL,
        runner: check_transport_involution,
    },
    CheckDef {
        name: "quotient_product_associativity",
        default_trials: 200,
        default_tol: QUOTIENT_PRODUCT_TOL,
        runner: check_quotient_product_associativity,
    },
    CheckDef {
        name: "symmetrization_eval_identity",
        default_trials: 200,
        default_tol: SYM_EVAL_TOL,
        runner: check_symmetrization_eval_identity,
    },
    CheckDef {
        name: "dbar_quotient",
        default_trials: 100,
        default_tol: DBAR_TOL,
        runner: check_dbar_quotient,
    },
    CheckDef {
        name: "singular_structure",
        default_trials: 99,
        default_tol: SINGULAR_LOCUS_TOL,
        runner: check_singular_structure,
    },
];

const ZEROS_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "zero_set_known_cases",
        default_trials: 5,
        default_tol: ZERO_RESIDUAL_TOL,
        runner: check_zero_set_known_cases,
    },
    CheckDef {
        name: "sphere_scan_isolation",
        default_trials: 1000,
        default_tol: ZERO_RESIDUAL_TOL,
        runner: check_sphere_scan_isolation,
    },
    CheckDef {
        name: "product_zero_law",
        default_trials: 200,
        default_tol: PRODUCT_ZERO_TOL,
        runner: check_product_zero_law,
    },
    CheckDef {
        name: "zero_completeness",
        default_trials: 200,
        default_tol: ZERO_RESIDUAL_TOL,
        runner: check_zero_completeness,
    },
    CheckDef {
        name: "conjugate_pairing",
        default_trials: 150,
        default_tol: ZERO_RESIDUAL_TOL,
        runner: check_conjugate_pairing,
    },
    CheckDef {
        name: "sphere_pair_lemma",
        default_trials: 200,
        default_tol: LEMMA_TOL,
        runner: check_sphere_pair_lemma,
    },
];

const ACTION_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "right_action_composition",
        default_trials: 100,
        default_tol: ACTION_TOL,
        runner: check_right_action_composition,
    },
    CheckDef {
        name: "scalar_equivalence",
        default_trials: 100,
        default_tol: SCALAR_EQUIV_TOL,
        runner: check_scalar_equivalence,
    },
    CheckDef {
        name: "action_relation_oracle",
        default_trials: 200,
        default_tol: ACTION_TOL,
        runner: check_action_relation_oracle,
    },
    CheckDef {
        name: "pole_dichotomy_real",
        default_trials: 100,
        default_tol: POLE_DICHOTOMY_TOL,
        runner: check_pole_dichotomy_real,
    },
    CheckDef {
        name: "sphere_pole_collapse",
        default_trials: 20,
        default_tol: SPHERE_COLLAPSE_TOL,
        runner: check_sphere_pole_collapse,
    },
    CheckDef {
        name: "generator_sequences",
        default_trials: 100,
        default_tol: GENERATOR_TOL,
        runner: check_generator_sequences,
    },
];

const ANTIHOM_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "pointwise_antihomomorphism",
        default_trials: 200,
        default_tol: ANTIHOM_TOL,
        runner: check_pointwise_antihomomorphism,
    },
    CheckDef {
        name: "kernel_real_scalars",
        default_trials: 200,
        default_tol: KERNEL_TOL,
        runner: check_kernel_real_scalars,
    },
    CheckDef {
        name: "matrix_inverse_roundtrip",
        default_trials: 200,
        default_tol: MATRIX_TOL,
        runner: check_matrix_inverse_roundtrip,
    },
    CheckDef {
        name: "study_determinant_multiplicative",
        default_trials: 200,
        default_tol: MATRIX_TOL,
        runner: check_study_determinant_multiplicative,
    },
];

const SP11_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "moebius_membership",
        default_trials: 50,
        default_tol: SP11_TOL,
        runner: check_moebius_membership,
    },
    CheckDef {
        name: "ball_boundary_preservation",
        default_trials: 50,
        default_tol: BALL_BOUNDARY_TOL,
        runner: check_ball_boundary_preservation,
    },
    CheckDef {
        name: "map_pair_endpoints",
        default_trials: 100,
        default_tol: MAP_PAIR_TOL,
        runner: check_map_pair_endpoints,
    },
    CheckDef {
        name: "params_roundtrip",
        default_trials: 100,
        default_tol: PARAM_ROUNDTRIP_TOL,
        runner: check_params_roundtrip,
    },
    CheckDef {
        name: "schwarz_rotation_factor",
        default_trials: 50,
        default_tol: SCHWARZ_TOL,
        runner: check_schwarz_rotation_factor,
    },
];

/// A verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Quotient,
    Zeros,
    Action,
    Antihom,
    Sp11,
    All,
}

impl Suite {
    pub const ALL_NAMES: &'static [&'static str] = &[
        "algebra", "quotient", "zeros", "action", "antihom", "sp11", "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Quotient => "quotient",
            Suite::Zeros => "zeros",
            Suite::Action => "action",
            Suite::Antihom => "antihom",
            Suite::Sp11 => "sp11",
            Suite::All => "all",
        }
    }

    pub fn checks(self) -> Vec<CheckDef> {
        match self {
            Suite::Algebra => ALGEBRA_CHECKS.to_vec(),
            Suite::Quotient => QUOTIENT_CHECKS.to_vec(),
            Suite::Zeros => ZEROS_CHECKS.to_vec(),
            Suite::Action => ACTION_CHECKS.to_vec(),
            Suite::Antihom => ANTIHOM_CHECKS.to_vec(),
            Suite::Sp11 => SP11_CHECKS.to_vec(),
            Suite::All => [
                ALGEBRA_CHECKS,
                QUOTIENT_CHECKS,
                ZEROS_CHECKS,
                ACTION_CHECKS,
                ANTIHOM_CHECKS,
                SP11_CHECKS,
            ]
            .concat(),
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "quotient" => Ok(Suite::Quotient),
            "zeros" => Ok(Suite::Zeros),
            "action" => Ok(Suite::Action),
            "antihom" => Ok(Suite::Antihom),
            "sp11" => Ok(Suite::Sp11),
            "all" => Ok(Suite::All),
            other => Err(Error::Domain(format!(
                "unknown suite '{}', expected one of {}",
                other,
                Suite::ALL_NAMES.join(", ")
            ))),
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs one suite. `trials` overrides every check's trial count; `tol`
/// overrides every check's tolerance.
pub fn run_suite(
    suite: Suite,
    seed: u64,
    trials: Option<usize>,
    tol: Option<f64>,
) -> SuiteReport {
    let checks: Vec<CheckReport> = suite
        .checks()
        .iter()
        .map(|def| {
            (def.runner)(
                seed,
                trials.unwrap_or(def.default_trials),
                tol.unwrap_or(def.default_tol),
            )
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    SuiteReport {
        suite: suite.name().to_string(),
        seed,
        checks,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::ALL_NAMES {
            let suite: Suite = name.parse().unwrap();
            assert_eq!(&suite.name(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Algebra, 7, Some(20), None);
        let b = run_suite(Suite::Algebra, 7, Some(20), None);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn trial_streams_differ_across_checks_and_trials() {
        let r1 = trial_rng(7, fnv("a"), 0);
        let r2 = trial_rng(7, fnv("b"), 0);
        let r3 = trial_rng(7, fnv("a"), 1);
        let mut s1 = QuaternionSampler::from_rng(r1);
        let mut s2 = QuaternionSampler::from_rng(r2);
        let mut s3 = QuaternionSampler::from_rng(r3);
        let v1 = s1.range(0.0, 1.0);
        let v2 = s2.range(0.0, 1.0);
        let v3 = s3.range(0.0, 1.0);
        assert_ne!(v1, v2);
        assert_ne!(v1, v3);
    }

    #[test]
    fn quick_smoke_all_suites() {
        // Tiny trial counts: exercises every runner end to end.
        for suite in [
            Suite::Algebra,
            Suite::Quotient,
            Suite::Zeros,
            Suite::Action,
            Suite::Antihom,
            Suite::Sp11,
        ] {
            let rep = run_suite(suite, 11, Some(3), None);
            assert_eq!(rep.suite, suite.name());
            assert!(!rep.checks.is_empty());
            for c in &rep.checks {
                assert!(
                    c.pass,
                    "{} failed in smoke run: residual {} vs tol {}, failures {}",
                    c.name, c.max_residual, c.tol, c.failures
                );
            }
        }
    }
}
