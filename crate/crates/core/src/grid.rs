//! Grid sampling of quaternionic functions for plotting and scanning.

use serde::{Deserialize, Serialize};

use crate::batch;
use crate::error::Error;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::zeros::fibonacci_units;

/// Where to sample: a square patch of a slice plane, or a slice sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpec {
    /// `res x res` points `x + y I` with `x, y` on a uniform grid over
    /// `[lo, hi]^2`, row-major with `x` varying fastest.
    Plane {
        unit: ImaginaryUnit,
        lo: f64,
        hi: f64,
        res: usize,
    },
    /// `res` quasi-uniform lattice points on the sphere `x + y S`.
    Sphere { x: f64, y: f64, res: usize },
}

impl GridSpec {
    pub fn len(&self) -> usize {
        match self {
            GridSpec::Plane { res, .. } => res * res,
            GridSpec::Sphere { res, .. } => *res,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<(), Error> {
        match *self {
            GridSpec::Plane { lo, hi, res, .. } => {
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() || res < 2 {
                    return Err(Error::Domain(
                        "plane grid needs lo < hi and res >= 2".into(),
                    ));
                }
            }
            GridSpec::Sphere { x, y, res } => {
                if !(y > 0.0) || !x.is_finite() || !y.is_finite() || res < 1 {
                    return Err(Error::Domain(
                        "sphere grid needs y > 0 and res >= 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The sample point at flat index `k`.
    pub fn point(&self, k: usize, sphere_units: &[ImaginaryUnit]) -> Quaternion {
        match *self {
            GridSpec::Plane { unit, lo, hi, res } => {
                let step = (hi - lo) / (res - 1) as f64;
                let ix = k % res;
                let iy = k / res;
                let x = lo + step * ix as f64;
                let y = lo + step * iy as f64;
                Quaternion::real(x) + unit.as_quaternion() * y
            }
            GridSpec::Sphere { x, y, .. } => {
                Quaternion::real(x) + sphere_units[k].as_quaternion() * y
            }
        }
    }
}

/// One sampled point and the function value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub point: Quaternion,
    pub value: Quaternion,
}

/// Samples `eval` over the grid, in grid order.
pub fn sample_grid<F>(eval: F, spec: &GridSpec) -> Result<Vec<GridSample>, Error>
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    spec.validate()?;
    let units = sphere_units_for(spec);
    Ok(batch::map_indexed(spec.len(), |k| {
        let point = spec.point(k, &units);
        GridSample {
            point,
            value: eval(point),
        }
    }))
}

/// Sequential twin of [`sample_grid`] for baseline measurements.
pub fn sample_grid_seq<F>(eval: F, spec: &GridSpec) -> Result<Vec<GridSample>, Error>
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    spec.validate()?;
    let units = sphere_units_for(spec);
    Ok(batch::map_indexed_seq(spec.len(), |k| {
        let point = spec.point(k, &units);
        GridSample {
            point,
            value: eval(point),
        }
    }))
}

/// The grid's points in order, after validation. For callers whose
/// evaluation is fallible and cannot go through [`sample_grid`].
pub fn grid_points(spec: &GridSpec) -> Result<Vec<Quaternion>, Error> {
    spec.validate()?;
    let units = sphere_units_for(spec);
    Ok((0..spec.len()).map(|k| spec.point(k, &units)).collect())
}

fn sphere_units_for(spec: &GridSpec) -> Vec<ImaginaryUnit> {
    match spec {
        GridSpec::Sphere { res, .. } => fibonacci_units(*res),
        GridSpec::Plane { .. } => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RegularPolynomial;

    #[test]
    fn plane_grid_order_and_values() {
        let f = RegularPolynomial::identity();
        let spec = GridSpec::Plane {
            unit: ImaginaryUnit::I,
            lo: -1.0,
            hi: 1.0,
            res: 3,
        };
        let samples = sample_grid(|q| f.eval(q), &spec).unwrap();
        assert_eq!(samples.len(), 9);
        // Row-major, x fastest: first row y = -1, x = -1, 0, 1.
        assert_eq!(samples[0].point, Quaternion::new(-1.0, -1.0, 0.0, 0.0));
        assert_eq!(samples[1].point, Quaternion::new(0.0, -1.0, 0.0, 0.0));
        assert_eq!(samples[5].point, Quaternion::new(1.0, 0.0, 0.0, 0.0));
        for s in &samples {
            assert_eq!(s.value, s.point);
        }
        let pts = grid_points(&spec).unwrap();
        let from_samples: Vec<Quaternion> = samples.iter().map(|s| s.point).collect();
        assert_eq!(pts, from_samples);
    }

    #[test]
    fn sphere_grid_stays_on_sphere() {
        let spec = GridSpec::Sphere {
            x: 0.5,
            y: 2.0,
            res: 64,
        };
        let samples = sample_grid(|q| q, &spec).unwrap();
        assert_eq!(samples.len(), 64);
        for s in samples {
            assert!((s.point.re() - 0.5).abs() < 1e-12);
            assert!((s.point.imag_norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let f = RegularPolynomial::from_roots(&[Quaternion::I]).unwrap();
        let spec = GridSpec::Plane {
            unit: ImaginaryUnit::J,
            lo: -2.0,
            hi: 2.0,
            res: 17,
        };
        let a = sample_grid(|q| f.eval(q), &spec).unwrap();
        let b = sample_grid_seq(|q| f.eval(q), &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(sample_grid(
            |q| q,
            &GridSpec::Plane {
                unit: ImaginaryUnit::I,
                lo: 1.0,
                hi: -1.0,
                res: 4
            }
        )
        .is_err());
        assert!(sample_grid(
            |q| q,
            &GridSpec::Sphere {
                x: 0.0,
                y: -1.0,
                res: 10
            }
        )
        .is_err());
    }
}
