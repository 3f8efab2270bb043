//! Quaternion arithmetic, imaginary units, slice spheres, and samplers.
//!
//! A quaternion is written `w + xi + yj + zk` with the Hamilton relations
//! `i^2 = j^2 = k^2 = -1`, `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`.
//! Every non-real quaternion decomposes uniquely as `x + yI` with `x` real,
//! `y > 0`, and `I` an imaginary unit (a point of the unit 2-sphere of
//! square roots of -1).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Tolerance for the unit checks on [`ImaginaryUnit`]: `|I| = 1` and `Re I = 0`
/// must hold to this accuracy, which keeps `I^2 = -1` within ~2e-12.
pub const UNIT_TOL: f64 = 1e-12;

/// A quaternion `w + xi + yj + zk` with `f64` components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// The conjugate `w - xi - yj - zk`.
    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Real part.
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a quaternion with zero real part.
    pub fn imag(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    /// Norm of the imaginary part.
    pub fn imag_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Multiplicative inverse `conj(q) / |q|^2`. Errors on zero.
    pub fn inverse(self) -> Result<Quaternion, Error> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() / n)
    }

    pub fn is_zero(self) -> bool {
        self.w == 0.0 && self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    /// Distance `|self - other|`.
    pub fn dist(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }

    /// Slice decomposition `q = x + yI` with `y >= 0`.
    ///
    /// Returns `(x, y, I)` where `I` is `None` exactly when `q` is real
    /// (`y = 0` leaves the unit undefined).
    pub fn slice_decompose(self) -> (f64, f64, Option<ImaginaryUnit>) {
        let y = self.imag_norm();
        if y == 0.0 {
            return (self.w, 0.0, None);
        }
        let unit = Quaternion::new(0.0, self.x / y, self.y / y, self.z / y);
        (self.w, y, Some(ImaginaryUnit(unit)))
    }

    /// Slice coordinates `(x, y)` with `y >= 0`, ignoring the unit.
    pub fn slice_coords(self) -> (f64, f64) {
        (self.w, self.imag_norm())
    }

    /// Integer power by repeated multiplication.
    pub fn powi(self, n: u32) -> Quaternion {
        let mut acc = Quaternion::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        let mut part = |f: &mut fmt::Formatter<'_>, v: f64, sym: &str| -> fmt::Result {
            if v == 0.0 {
                return Ok(());
            }
            if wrote {
                write!(f, "{}", if v < 0.0 { " - " } else { " + " })?;
                write!(f, "{}{}", v.abs(), sym)?;
            } else {
                write!(f, "{}{}", v, sym)?;
            }
            wrote = true;
            Ok(())
        };
        part(f, self.w, "")?;
        part(f, self.x, "i")?;
        part(f, self.y, "j")?;
        part(f, self.z, "k")?;
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// JSON encoding is the flat array [w, x, y, z].
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        t.serialize_element(&self.w)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.serialize_element(&self.z)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct QVisitor;
        impl<'de> Visitor<'de> for QVisitor {
            type Value = Quaternion;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array [w, x, y, z] of four numbers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Quaternion, A::Error> {
                let w = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let x = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let y = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                let z = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(3, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(5, &self));
                }
                Ok(Quaternion::new(w, x, y, z))
            }
        }
        d.deserialize_tuple(4, QVisitor)
    }
}

/// An imaginary unit: a quaternion with zero real part and norm 1, so that
/// `I^2 = -1`. Validated on construction to [`UNIT_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit(Quaternion::I);
    pub const J: ImaginaryUnit = ImaginaryUnit(Quaternion::J);
    pub const K: ImaginaryUnit = ImaginaryUnit(Quaternion::K);

    /// Validates `|Re q| <= UNIT_TOL` and `||q| - 1| <= UNIT_TOL`.
    pub fn new(q: Quaternion) -> Result<Self, Error> {
        if q.re().abs() > UNIT_TOL || (q.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotAUnit {
                re: q.re(),
                norm: q.norm(),
            });
        }
        Ok(ImaginaryUnit(q))
    }

    /// Builds the unit along `(x, y, z)`, normalizing. Errors on the zero vector.
    pub fn from_vec(x: f64, y: f64, z: f64) -> Result<Self, Error> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(ImaginaryUnit(Quaternion::new(0.0, x / n, y / n, z / n)))
    }

    pub fn as_quaternion(self) -> Quaternion {
        self.0
    }
}

impl<'de> Deserialize<'de> for ImaginaryUnit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let q = Quaternion::deserialize(d)?;
        ImaginaryUnit::new(q).map_err(de::Error::custom)
    }
}

impl Mul<Quaternion> for ImaginaryUnit {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        self.0 * rhs
    }
}

/// The 2-sphere `x + yS` of quaternions with real part `x` and imaginary norm
/// `y`. Normalized to `y > 0`; `x + yS` and `x + (-y)S` are the same sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSphere {
    x: f64,
    y: f64,
}

impl SliceSphere {
    /// Errors unless `y > 0` (a degenerate sphere is a real point, not a sphere).
    pub fn new(x: f64, y: f64) -> Result<Self, Error> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidSphere { x, y });
        }
        Ok(SliceSphere { x, y })
    }

    /// The sphere through `q`, or `None` when `q` is real.
    pub fn through(q: Quaternion) -> Option<Self> {
        let (x, y) = q.slice_coords();
        if y > 0.0 {
            Some(SliceSphere { x, y })
        } else {
            None
        }
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    /// The point `x + yI` of the sphere.
    pub fn point(self, unit: ImaginaryUnit) -> Quaternion {
        Quaternion::real(self.x) + unit.as_quaternion() * self.y
    }

    /// Distance from `q` to the sphere: the slice-plane distance
    /// `|(x_q, y_q) - (x, y)|`, which equals the 4-space distance from `q`
    /// to the nearest sphere point.
    pub fn dist(self, q: Quaternion) -> f64 {
        let (qx, qy) = q.slice_coords();
        ((qx - self.x).powi(2) + (qy - self.y).powi(2)).sqrt()
    }

    pub fn contains(self, q: Quaternion, tol: f64) -> bool {
        self.dist(q) <= tol
    }
}

/// A point of the one-point extension `H ∪ {∞}` on which linear fractional
/// transformations act.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedQuaternion {
    Finite(Quaternion),
    Infinity,
}

impl ExtendedQuaternion {
    pub fn is_infinity(self) -> bool {
        matches!(self, ExtendedQuaternion::Infinity)
    }

    pub fn finite(self) -> Option<Quaternion> {
        match self {
            ExtendedQuaternion::Finite(q) => Some(q),
            ExtendedQuaternion::Infinity => None,
        }
    }
}

impl From<Quaternion> for ExtendedQuaternion {
    fn from(q: Quaternion) -> Self {
        ExtendedQuaternion::Finite(q)
    }
}

impl fmt::Display for ExtendedQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedQuaternion::Finite(q) => write!(f, "{}", q),
            ExtendedQuaternion::Infinity => write!(f, "inf"),
        }
    }
}

/// Conjugation identity on a slice sphere: for `alpha`, `beta` on a common
/// sphere with `beta != conj(alpha)`,
/// `(beta - conj(alpha))^-1 * beta * (beta - conj(alpha)) = alpha`.
///
/// Errors unless both points lie on a common sphere (slice coordinates equal
/// within `tol`) and `|beta - conj(alpha)| > 1e-6`.
pub fn sphere_transport_lemma(
    alpha: Quaternion,
    beta: Quaternion,
    tol: f64,
) -> Result<Quaternion, Error> {
    let (ax, ay) = alpha.slice_coords();
    let (bx, by) = beta.slice_coords();
    if ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt() > tol {
        return Err(Error::NotSameSphere);
    }
    let v = beta - alpha.conj();
    if v.norm() <= 1e-6 {
        return Err(Error::DegeneratePair { separation: v.norm() });
    }
    let vi = v.inverse()?;
    Ok(vi * beta * v)
}

/// Sampling regions for [`QuaternionSampler`].
#[derive(Debug, Clone, Copy)]
pub enum Region {
    /// Uniform in the closed unit ball `|q| <= 1`.
    UnitBall,
    /// Uniform on the boundary 3-sphere `|q| = 1`.
    Boundary,
    /// Uniform over a slice sphere `x + yS` (uniform unit `I`).
    Sphere(SliceSphere),
    /// Uniform in the cube `[-half_width, half_width]^4`; requires
    /// `half_width > 0`.
    Cube { half_width: f64 },
}

impl Region {
    fn validate(&self) -> Result<(), Error> {
        match self {
            Region::Cube { half_width } if !(*half_width > 0.0) => {
                Err(Error::InvalidRegion)
            }
            _ => Ok(()),
        }
    }
}

/// Deterministic quaternion sampler: explicit state seeded from a `u64`,
/// passed by value. The stream is stable across platforms.
#[derive(Debug, Clone)]
pub struct QuaternionSampler {
    rng: ChaCha8Rng,
}

impl QuaternionSampler {
    pub fn new(seed: u64) -> Self {
        QuaternionSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn from_rng(rng: ChaCha8Rng) -> Self {
        QuaternionSampler { rng }
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Draws one quaternion from `region`.
    pub fn sample(&mut self, region: Region) -> Result<Quaternion, Error> {
        region.validate()?;
        Ok(match region {
            Region::UnitBall => loop {
                let q = Quaternion::new(
                    self.rng.gen_range(-1.0..=1.0),
                    self.rng.gen_range(-1.0..=1.0),
                    self.rng.gen_range(-1.0..=1.0),
                    self.rng.gen_range(-1.0..=1.0),
                );
                if q.norm_sqr() <= 1.0 {
                    break q;
                }
            },
            Region::Boundary => {
                let q = loop {
                    let g = Quaternion::new(self.normal(), self.normal(), self.normal(), self.normal());
                    if g.norm() > 1e-6 {
                        break g;
                    }
                };
                q / q.norm()
            }
            Region::Sphere(s) => s.point(self.unit()),
            Region::Cube { half_width } => Quaternion::new(
                self.rng.gen_range(-half_width..=half_width),
                self.rng.gen_range(-half_width..=half_width),
                self.rng.gen_range(-half_width..=half_width),
                self.rng.gen_range(-half_width..=half_width),
            ),
        })
    }

    /// Draws a uniform imaginary unit (uniform on the 2-sphere `S`).
    pub fn unit(&mut self) -> ImaginaryUnit {
        loop {
            let (x, y, z) = (self.normal(), self.normal(), self.normal());
            let n = (x * x + y * y + z * z).sqrt();
            if n > 1e-6 {
                return ImaginaryUnit(Quaternion::new(0.0, x / n, y / n, z / n));
            }
        }
    }

    /// Uniform scalar in `[lo, hi]`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }
}
