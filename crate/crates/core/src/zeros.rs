//! Zero structure of regular polynomials.
//!
//! Zeros are isolated points or whole slice spheres, never anything else.
//! The symmetrization `f^s` vanishes exactly on the spheres (and real
//! points) that carry zeros of `f`, so the zero set is computed from the
//! complex roots of the real polynomial `f^s`: each conjugate root pair
//! `x ± yi` names a candidate sphere `x + yS`, then the affine restriction
//! `f(x + yI) = b + Ic` resolves whether the whole sphere vanishes
//! (`b = c = 0`) or only the single point with unit `I = -b c^{-1}`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::batch;
use crate::error::Error;
use crate::poly::RegularPolynomial;
use crate::quaternion::{ImaginaryUnit, Quaternion, SliceSphere};

/// Roots closer than this are treated as one root with multiplicity.
/// Reliable through double roots at desk scale (double-root scatter is
/// ~1e-8 in doubles); higher multiplicities may split.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// Root residual contract: `|p(root)| < 1e-9 * scale * max(1, |root|)^deg`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

/// Iteration cap for the simultaneous-iteration root finder.
pub const MAX_ITERATIONS: usize = 200;

/// Relative remainder tolerance for exact-factor division tests.
const DIVISIBILITY_TOL: f64 = 1e-9;

/// A root of a real polynomial: real, or a conjugate pair folded to `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealPolyRoot {
    Real { x: f64, multiplicity: usize },
    Pair { x: f64, y: f64, multiplicity: usize },
}

/// All complex roots of a real-coefficient polynomial (ascending
/// coefficients), by Aberth-Ehrlich simultaneous iteration with
/// conjugate-symmetry enforcement and multiplicity clustering.
pub fn real_poly_roots(coeffs: &[f64]) -> Result<Vec<RealPolyRoot>, Error> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().map_or(false, |v| *v == 0.0) {
        c.pop();
    }
    if c.len() < 2 {
        return Err(Error::Domain(
            "root finding requires degree >= 1 with a nonzero leading coefficient".into(),
        ));
    }
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for v in &mut c {
        *v /= scale;
    }
    let deg = c.len() - 1;
    let raw = aberth(&c)?;
    let mut clusters = cluster_roots(&raw);
    polish_clusters(&c, &mut clusters);

    // Residual contract at each cluster representative.
    for (z, _) in &clusters {
        let (p, _) = horner2(&c, *z);
        let bound = ROOT_RESIDUAL_TOL * z.norm().max(1.0).powi(deg as i32);
        if p.norm() > bound {
            return Err(Error::NonConvergence {
                iterations: MAX_ITERATIONS,
                residual: p.norm() * scale,
            });
        }
    }
    fold_conjugate_pairs(clusters)
}

/// Newton polish of cluster representatives. An `m`-fold root evaluates
/// to rounding noise on a whole disk of radius near `eps^(1/m)`, so the
/// polynomial itself cannot pin it down; its `(m-1)`-th derivative has a
/// simple root at the same place and supports full-precision Newton.
/// Steps are kept while the derivative residual drops, and a polish that
/// tries to wander off its cluster is discarded.
fn polish_clusters(c: &[f64], clusters: &mut [(Complex64, usize)]) {
    for (z, m) in clusters.iter_mut() {
        let mut target: Vec<f64> = c.to_vec();
        for _ in 1..*m {
            target = derivative_coeffs(&target);
        }
        if target.len() < 2 {
            continue;
        }
        let start = *z;
        let (mut p, _) = horner2(&target, *z);
        for _ in 0..8 {
            let (pv, dp) = horner2(&target, *z);
            if dp.norm() == 0.0 || !pv.norm().is_finite() {
                break;
            }
            let step = pv / dp;
            let cand = *z - step;
            let (pc, _) = horner2(&target, cand);
            if !pc.norm().is_finite() || pc.norm() >= p.norm() {
                break;
            }
            *z = cand;
            p = pc;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
        if (*z - start).norm() > 1e-4 * (1.0 + start.norm()) {
            *z = start;
        }
    }
}

fn derivative_coeffs(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * k as f64)
        .collect()
}

fn horner2(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth(c: &[f64]) -> Result<Vec<Complex64>, Error> {
    let deg = c.len() - 1;
    let lead = c[deg];
    if deg == 1 {
        return Ok(vec![Complex64::new(-c[0] / c[1], 0.0)]);
    }

    // Initial guesses on a circle: center at the root centroid, radius the
    // Cauchy bound, angles staggered off any coordinate symmetry.
    let center = Complex64::new(-c[deg - 1] / (deg as f64 * lead), 0.0);
    let radius = 1.0
        + c[..deg]
            .iter()
            .map(|a| (a / lead).abs())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.41;
            center + Complex64::from_polar(radius, angle)
        })
        .collect();

    // Deterministic perturbation source for stagnation restarts.
    let mut hash: u64 = 0xcbf29ce484222325;
    for v in c {
        hash = (hash ^ v.to_bits()).wrapping_mul(0x100000001b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(hash);

    let mut last_residual = f64::INFINITY;
    for iter in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let (p, dp) = horner2(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() < 1e-300 {
                // Exactly-critical point: nudge off it.
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 1e-300 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() < 1e-12 { w } else { w / denom };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
        // Stagnation restart: perturb when late iterations stop improving.
        if iter > 0 && iter % 60 == 0 {
            if max_step > 0.5 * last_residual {
                for zk in z.iter_mut() {
                    let (p, _) = horner2(c, *zk);
                    if p.norm() > 1e-12 {
                        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                        *zk += Complex64::from_polar(1e-3 * (1.0 + zk.norm()), angle);
                    }
                }
            }
            last_residual = max_step;
        }
    }
    Ok(z)
}

/// Greedy clustering within [`CLUSTER_RADIUS`]; returns centroid and count,
/// deterministically ordered.
fn cluster_roots(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut sorted: Vec<Complex64> = roots.to_vec();
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let mut used = vec![false; sorted.len()];
    let mut out = Vec::new();
    for i in 0..sorted.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![sorted[i]];
        used[i] = true;
        for j in (i + 1)..sorted.len() {
            if !used[j] && (sorted[j] - sorted[i]).norm() <= CLUSTER_RADIUS {
                members.push(sorted[j]);
                used[j] = true;
            }
        }
        let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((centroid, members.len()));
    }
    out
}

fn fold_conjugate_pairs(clusters: Vec<(Complex64, usize)>) -> Result<Vec<RealPolyRoot>, Error> {
    let mut reals: Vec<(f64, usize)> = Vec::new();
    let mut upper: Vec<(Complex64, usize)> = Vec::new();
    let mut lower: Vec<(Complex64, usize)> = Vec::new();
    for (z, m) in clusters {
        if z.im.abs() <= CLUSTER_RADIUS {
            reals.push((z.re, m));
        } else if z.im > 0.0 {
            upper.push((z, m));
        } else {
            lower.push((z, m));
        }
    }
    let mut out: Vec<RealPolyRoot> = reals
        .into_iter()
        .map(|(x, m)| RealPolyRoot::Real { x, multiplicity: m })
        .collect();

    let mut taken = vec![false; lower.len()];
    for (z, m) in upper {
        let mut best: Option<(usize, f64)> = None;
        for (idx, (v, _)) in lower.iter().enumerate() {
            if taken[idx] {
                continue;
            }
            let d = (v.conj() - z).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((idx, d));
            }
        }
        let pair_tol = 1e-4 * (1.0 + z.norm());
        match best {
            Some((idx, d)) if d <= pair_tol && lower[idx].1 == m => {
                taken[idx] = true;
                let v = lower[idx].0;
                out.push(RealPolyRoot::Pair {
                    x: (z.re + v.re) / 2.0,
                    y: (z.im + v.im.abs()) / 2.0,
                    multiplicity: m,
                });
            }
            _ => {
                return Err(Error::Inconsistency(
                    "conjugate symmetry violated in computed roots".into(),
                ))
            }
        }
    }
    if taken.iter().filter(|t| !**t).count() > 0 {
        return Err(Error::Inconsistency(
            "unpaired lower half-plane roots".into(),
        ));
    }
    out.sort_by(|a, b| {
        let ka = match a {
            RealPolyRoot::Real { x, .. } => (*x, 0.0),
            RealPolyRoot::Pair { x, y, .. } => (*x, *y),
        };
        let kb = match b {
            RealPolyRoot::Real { x, .. } => (*x, 0.0),
            RealPolyRoot::Pair { x, y, .. } => (*x, *y),
        };
        ka.partial_cmp(&kb).unwrap()
    });
    Ok(out)
}

/// Quotient and remainder of `f` divided by the central real quadratic of a
/// sphere, `s(q) = q^2 - 2x q + (x^2 + y^2)`: returns `(g, r1, r0)` with
/// `f = s * g + q r1 + r0`.
pub fn divide_sphere_quadratic(
    f: &RegularPolynomial,
    sphere: SliceSphere,
) -> (RegularPolynomial, Quaternion, Quaternion) {
    let beta = -2.0 * sphere.x();
    let gamma = sphere.x() * sphere.x() + sphere.y() * sphere.y();
    let d = match f.degree() {
        None | Some(0) | Some(1) => {
            return (RegularPolynomial::zero(), f.coeff(1), f.coeff(0))
        }
        Some(d) => d,
    };
    let mut g = vec![Quaternion::ZERO; d - 1];
    for n in (2..=d).rev() {
        let b1 = if n - 1 < g.len() { g[n - 1] } else { Quaternion::ZERO };
        let b2 = if n < g.len() { g[n] } else { Quaternion::ZERO };
        g[n - 2] = f.coeff(n) - b1 * beta - b2 * gamma;
    }
    let r1 = f.coeff(1) - g[0] * beta - g.get(1).copied().unwrap_or(Quaternion::ZERO) * gamma;
    let r0 = f.coeff(0) - g[0] * gamma;
    (RegularPolynomial::from_coeffs(g), r1, r0)
}

/// Largest `j` with `s^j | f` for the sphere's quadratic, together with the
/// cofactor `f / s^j`. Divisibility is exact up to `1e-9` relative remainder.
pub fn sphere_divisibility(
    f: &RegularPolynomial,
    sphere: SliceSphere,
) -> (usize, RegularPolynomial) {
    let mut j = 0;
    let mut current = f.clone();
    loop {
        if current.degree().map_or(true, |d| d < 2) {
            return (j, current);
        }
        let scale = current.coeff_scale().max(1.0);
        let (g, r1, r0) = divide_sphere_quadratic(&current, sphere);
        if r1.norm() <= DIVISIBILITY_TOL * scale && r0.norm() <= DIVISIBILITY_TOL * scale {
            current = g;
            j += 1;
        } else {
            return (j, current);
        }
    }
}

/// Largest `j` with `(q - x)^j | f` for real `x`, with the cofactor.
pub fn real_linear_divisibility(f: &RegularPolynomial, x: f64) -> (usize, RegularPolynomial) {
    let mut j = 0;
    let mut current = f.clone();
    loop {
        if current.is_zero() || current.degree() == Some(0) {
            return (j, current);
        }
        match current.left_divide_linear(Quaternion::real(x)) {
            Ok(g) => {
                current = g;
                j += 1;
            }
            Err(_) => return (j, current),
        }
    }
}

/// An isolated zero with its multiplicity (the `f^s` pair multiplicity for
/// non-real points, half the real root multiplicity for real points).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolatedZero {
    pub point: Quaternion,
    #[serde(rename = "mult")]
    pub multiplicity: usize,
}

/// A spherical zero: `f` vanishes identically on the sphere; the
/// multiplicity is the number of times the sphere's quadratic divides `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalZero {
    #[serde(flatten)]
    pub sphere: SliceSphere,
    #[serde(rename = "mult")]
    pub multiplicity: usize,
}

/// The full zero set: isolated points (real or on spheres) and whole spheres.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ZeroSet {
    pub isolated: Vec<IsolatedZero>,
    pub spheres: Vec<SphericalZero>,
}

impl ZeroSet {
    /// Zero count with multiplicity, spheres counting twice per degree
    /// bookkeeping (a spherical factor has degree 2). Equals `deg f` for a
    /// complete zero set.
    pub fn count_with_multiplicity(&self) -> usize {
        self.isolated.iter().map(|z| z.multiplicity).sum::<usize>()
            + 2 * self.spheres.iter().map(|z| z.multiplicity).sum::<usize>()
    }
}

/// Computes the zero set of a nonzero regular polynomial.
pub fn zero_set(f: &RegularPolynomial) -> Result<ZeroSet, Error> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(ZeroSet::default());
    }
    let scale = f.coeff_scale().max(1.0);
    let sym = f.symmetrization()?;
    let roots = real_poly_roots(&sym.real_coeffs()?)?;

    let mut out = ZeroSet::default();
    for root in roots {
        match root {
            RealPolyRoot::Real { x, multiplicity } => {
                // f^s(x) = |f(x)|^2 for real x, so real roots come in even
                // multiplicity; a stray odd count is a clustering artifact.
                let mult = (multiplicity as f64 / 2.0).round().max(1.0) as usize;
                out.isolated.push(IsolatedZero {
                    point: Quaternion::real(x),
                    multiplicity: mult,
                });
            }
            RealPolyRoot::Pair { x, y, multiplicity } => {
                let sphere = SliceSphere::new(x, y)?;
                let (j, _) = sphere_divisibility(f, sphere);
                if j >= 1 {
                    out.spheres.push(SphericalZero {
                        sphere,
                        multiplicity: j,
                    });
                    continue;
                }
                let aff = f.sphere_affine(sphere)?;
                match aff.solve_zero_unit() {
                    Some(unit) => {
                        let point = sphere.point(unit);
                        let residual = f.eval(point).norm();
                        if residual > 1e-8 * scale {
                            return Err(Error::Inconsistency(format!(
                                "resolved zero has residual {}",
                                residual
                            )));
                        }
                        out.isolated.push(IsolatedZero {
                            point,
                            multiplicity,
                        });
                    }
                    None => {
                        return Err(Error::Inconsistency(format!(
                            "symmetrization vanishes on sphere ({}, {}) but no zero resolves",
                            x, y
                        )))
                    }
                }
            }
        }
    }
    Ok(out)
}

/// How `f` vanishes on one chosen sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereZero {
    /// No zero on the sphere.
    Empty,
    /// The single point carrying the zero.
    Point(Quaternion),
    /// The whole sphere vanishes.
    Spherical,
}

fn resolve_on_sphere(f: &RegularPolynomial, sphere: SliceSphere) -> Result<SphereZero, Error> {
    let (j, _) = sphere_divisibility(f, sphere);
    if j >= 1 {
        return Ok(SphereZero::Spherical);
    }
    let aff = f.sphere_affine(sphere)?;
    Ok(match aff.solve_zero_unit() {
        Some(unit) => SphereZero::Point(sphere.point(unit)),
        None => SphereZero::Empty,
    })
}

/// Zeros of `f` and of `f^c` on one sphere. They are present or absent
/// together, and spherical zeros map to spherical zeros.
pub fn conjugate_zero_pairing(
    f: &RegularPolynomial,
    sphere: SliceSphere,
) -> Result<(SphereZero, SphereZero), Error> {
    Ok((
        resolve_on_sphere(f, sphere)?,
        resolve_on_sphere(&f.regular_conjugate(), sphere)?,
    ))
}

/// Deterministic quasi-uniform sphere coverage (Fibonacci lattice).
pub fn fibonacci_units(n: usize) -> Vec<ImaginaryUnit> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            let z = 1.0 - 2.0 * t;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = std::f64::consts::TAU * (k as f64) / golden;
            ImaginaryUnit::from_vec(r * phi.cos(), r * phi.sin(), z)
                .expect("lattice point is a unit vector")
        })
        .collect()
}

/// Brute-force minimum of `|eval|` over a sphere: `n` lattice units, then
/// optional local shrinking-step refinement from the best one. Returns the
/// minimizing point and the minimum.
pub fn sphere_min_scan<F>(
    eval: F,
    sphere: SliceSphere,
    n: usize,
    refine: bool,
) -> (Quaternion, f64)
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    let units = fibonacci_units(n);
    let values = batch::map_indexed(units.len(), |k| {
        eval(sphere.point(units[k])).norm()
    });
    scan_finish(eval, sphere, units, values, refine)
}

/// Sequential twin of [`sphere_min_scan`] for measurement baselines.
pub fn sphere_min_scan_seq<F>(
    eval: F,
    sphere: SliceSphere,
    n: usize,
    refine: bool,
) -> (Quaternion, f64)
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    let units = fibonacci_units(n);
    let values = batch::map_indexed_seq(units.len(), |k| {
        eval(sphere.point(units[k])).norm()
    });
    scan_finish(eval, sphere, units, values, refine)
}

fn scan_finish<F>(
    eval: F,
    sphere: SliceSphere,
    units: Vec<ImaginaryUnit>,
    values: Vec<f64>,
    refine: bool,
) -> (Quaternion, f64)
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    let (mut best_idx, mut best) = (0usize, f64::INFINITY);
    for (k, v) in values.iter().enumerate() {
        if *v < best {
            best = *v;
            best_idx = k;
        }
    }
    let mut v = units[best_idx].as_quaternion();
    if refine {
        let mut step = (4.0 / (units.len() as f64)).sqrt().max(1e-3);
        while step > 1e-10 {
            let (e1, e2) = tangent_basis(v);
            let mut improved = false;
            for dir in 0..8 {
                let phi = std::f64::consts::TAU * (dir as f64) / 8.0;
                let cand = normalize3(
                    v + (e1 * phi.cos() + e2 * phi.sin()) * step,
                );
                let val = eval(sphere.point(
                    ImaginaryUnit::new(cand).expect("normalized tangent step"),
                ))
                .norm();
                if val < best {
                    best = val;
                    v = cand;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }
    (
        sphere.point(ImaginaryUnit::new(v).expect("unit maintained by normalization")),
        best,
    )
}

fn normalize3(q: Quaternion) -> Quaternion {
    let n = q.imag_norm();
    Quaternion::new(0.0, q.x / n, q.y / n, q.z / n)
}

fn tangent_basis(v: Quaternion) -> (Quaternion, Quaternion) {
    // Pick the axis least aligned with v, orthogonalize, complete by cross.
    let axis = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
        (1.0, 0.0, 0.0)
    } else if v.y.abs() <= v.z.abs() {
        (0.0, 1.0, 0.0)
    } else {
        (0.0, 0.0, 1.0)
    };
    let dot = axis.0 * v.x + axis.1 * v.y + axis.2 * v.z;
    let raw = Quaternion::new(0.0, axis.0 - dot * v.x, axis.1 - dot * v.y, axis.2 - dot * v.z);
    let e1 = normalize3(raw);
    // Cross product v x e1 in imaginary coordinates.
    let e2 = Quaternion::new(
        0.0,
        v.y * e1.z - v.z * e1.y,
        v.z * e1.x - v.x * e1.z,
        v.x * e1.y - v.y * e1.x,
    );
    (e1, e2)
}
