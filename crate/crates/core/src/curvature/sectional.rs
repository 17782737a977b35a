//! Sectional curvature and pinching statistics.

use nalgebra::DVector;

use super::CurvatureTensor;
use crate::linalg::{seeded_rng, uniform_vector};
use crate::{Error, Result};

/// `K(X, Y) = R(X, Y, X, Y) / (g(X,X) g(Y,Y) - g(X,Y)^2)`, which is `+1` on the
/// unit sphere in this crate's sign convention.
pub fn sectional_curvature(r: &CurvatureTensor, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    let base = r.base();
    base.require_pseudo()?;
    base.check_dim(x.len())?;
    base.check_dim(y.len())?;
    let gxy = base.pair(x, y);
    let area = base.pair(x, x) * base.pair(y, y) - gxy * gxy;
    if area.abs() < 1e-8 {
        return Err(Error::Degenerate(alloc::format!("plane with |area| = {:e}", area.abs())));
    }
    let m = r.tensor().contract_front(x, y);
    Ok(x.dot(&(m * y)) / area)
}

/// Extremes of the sectional curvature over sampled planes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinchingReport {
    pub min: f64,
    pub max: f64,
    /// `min / max` when `max > 0`.
    pub ratio: Option<f64>,
    pub planes: usize,
}

/// Evaluates every coordinate plane and then `samples` random planes,
/// skipping degenerate ones.
pub fn pinching_report(r: &CurvatureTensor, samples: usize, seed: u64) -> Result<PinchingReport> {
    let d = r.dim();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut planes = 0;
    let mut record = |k: f64| {
        min = min.min(k);
        max = max.max(k);
        planes += 1;
    };
    let unit = |i: usize| DVector::from_fn(d, |k, _| if k == i { 1.0 } else { 0.0 });
    for a in 0..d {
        for b in a + 1..d {
            record(sectional_curvature(r, &unit(a), &unit(b))?);
        }
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..samples {
        let x = uniform_vector(&mut rng, d);
        let y = uniform_vector(&mut rng, d);
        match sectional_curvature(r, &x, &y) {
            Ok(k) => record(k),
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let ratio = (max > 0.0).then(|| min / max);
    Ok(PinchingReport { min, max, ratio, planes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::constant_curvature;
    use crate::spaces::BilinearStructure;

    #[test]
    fn sphere_and_flat() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let sphere = constant_curvature(1.0, &base).unwrap();
        let mut rng = seeded_rng(4);
        for _ in 0..10 {
            let x = uniform_vector(&mut rng, 4);
            let y = uniform_vector(&mut rng, 4);
            assert!((sectional_curvature(&sphere, &x, &y).unwrap() - 1.0).abs() < 1e-12);
        }
        let report = pinching_report(&sphere, 20, 1).unwrap();
        assert!((report.min - 1.0).abs() < 1e-12 && (report.ratio.unwrap() - 1.0).abs() < 1e-12);
        let flat = CurvatureTensor::zero(&base);
        assert_eq!(pinching_report(&flat, 5, 1).unwrap().max, 0.0);
        let x = DVector::from_element(4, 1.0);
        assert!(sectional_curvature(&sphere, &x, &(&x * 2.0)).is_err());
    }
}
