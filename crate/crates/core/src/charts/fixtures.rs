//! Coordinate metric formulas.
//!
//! Space forms use the conformally flat chart
//! `g = eta / (1 + K eta(x,x)/4)^2`, which has constant curvature `K` for any
//! signature of `eta`: the stereographic chart of the sphere (south pole
//! removed), the Poincare ball for `K < 0`, and the stereographic chart of
//! the quadric for the neutral space form. `eta` is the standard diagonal
//! form `diag(I_{p,q}, I_{p,q})`.
//!
//! Fubini-Study uses the Kahler potential `log(1 + |z|^2)` in coordinates
//! `(x1, y1, x2, y2)` with `z_k = x_k + i y_k`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Below this absolute value of the conformal denominator a point counts as
/// outside the chart.
const DOMAIN_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixture {
    Flat,
    /// Round sphere of the given radius, `K = 1/radius^2`.
    Sphere {
        radius: f64,
    },
    /// Hyperbolic space of the given radius, `K = -1/radius^2`.
    Hyperbolic {
        radius: f64,
    },
    /// `S^2(r1) x S^2(r2)`, coordinates `(u1, u2)` on the first factor and
    /// `(u3, u4)` on the second.
    ProductSpheres {
        r1: f64,
        r2: f64,
    },
    /// Fubini-Study metric on CP^2 scaled by `scale` (holomorphic sectional
    /// curvature `4/scale`).
    FubiniStudyCp2 {
        scale: f64,
    },
    /// Neutral signature space form with `K = 1/radius^2`.
    PseudoSphere22 {
        radius: f64,
    },
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Flat => "flat",
            Fixture::Sphere { .. } => "sphere",
            Fixture::Hyperbolic { .. } => "hyperbolic",
            Fixture::ProductSpheres { .. } => "product_spheres",
            Fixture::FubiniStudyCp2 { .. } => "fubini_study_cp2",
            Fixture::PseudoSphere22 { .. } => "pseudo_sphere_22",
        }
    }

    /// Builds a fixture by name; `radius` feeds every length parameter.
    pub fn from_name(name: &str, radius: f64) -> Result<Self> {
        Ok(match name {
            "flat" => Fixture::Flat,
            "sphere" => Fixture::Sphere { radius },
            "hyperbolic" => Fixture::Hyperbolic { radius },
            "product_spheres" => Fixture::ProductSpheres { r1: radius, r2: radius },
            "fubini_study_cp2" => Fixture::FubiniStudyCp2 { scale: radius },
            "pseudo_sphere_22" => Fixture::PseudoSphere22 { radius },
            other => return Err(Error::UnsupportedFixture(String::from(other))),
        })
    }

    fn parameters(&self) -> Vec<f64> {
        match *self {
            Fixture::Flat => Vec::new(),
            Fixture::Sphere { radius } | Fixture::Hyperbolic { radius } | Fixture::PseudoSphere22 { radius } => {
                alloc::vec![radius]
            }
            Fixture::ProductSpheres { r1, r2 } => alloc::vec![r1, r2],
            Fixture::FubiniStudyCp2 { scale } => alloc::vec![scale],
        }
    }

    /// Signature halves the fixture uses unless overridden.
    pub fn default_signature(&self, dim: usize) -> (usize, usize) {
        match self {
            Fixture::PseudoSphere22 { .. } => (1, 1),
            _ => (dim / 2, 0),
        }
    }

    /// Whether the fixture accepts a signature other than its default.
    pub fn any_signature(&self) -> bool {
        matches!(self, Fixture::Flat | Fixture::Sphere { .. } | Fixture::Hyperbolic { .. })
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        if let Some(bad) = self.parameters().into_iter().find(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::UnsupportedFixture(format!("{}: parameter {bad} must be positive", self.name())));
        }
        if dim < 2 || dim % 2 != 0 {
            return Err(Error::UnsupportedFixture(format!("{}: dimension {dim} must be even", self.name())));
        }
        let four_only = matches!(
            self,
            Fixture::ProductSpheres { .. } | Fixture::FubiniStudyCp2 { .. } | Fixture::PseudoSphere22 { .. }
        );
        if four_only && dim != 4 {
            return Err(Error::UnsupportedFixture(format!("{} exists only in dimension 4", self.name())));
        }
        Ok(())
    }

    /// Constant sectional curvature, if the fixture is a space form.
    pub fn constant_curvature(&self) -> Option<f64> {
        match *self {
            Fixture::Flat => Some(0.0),
            Fixture::Sphere { radius } | Fixture::PseudoSphere22 { radius } => Some(1.0 / (radius * radius)),
            Fixture::Hyperbolic { radius } => Some(-1.0 / (radius * radius)),
            _ => None,
        }
    }

    /// Rejects points whose stencil of the given reach may leave the domain.
    pub(crate) fn check_domain(&self, x: &[f64], eta: &[f64], reach: f64) -> Result<()> {
        let Some(k) = self.constant_curvature() else {
            // Product spheres and Fubini-Study charts cover all of R^4.
            return Ok(());
        };
        let radius = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        let den = 1.0 + k * quad(eta, x) / 4.0;
        let slack = k.abs() * (2.0 * radius * reach + reach * reach) / 4.0;
        if den.abs() - slack < DOMAIN_MARGIN {
            return Err(Error::OutsideChart(format!("{x:?} ({}: conformal factor {den:e})", self.name())));
        }
        Ok(())
    }

    /// Metric components at `x` (no domain check).
    pub(crate) fn metric(&self, x: &[f64], eta: &[f64]) -> DMatrix<f64> {
        let d = x.len();
        match *self {
            Fixture::ProductSpheres { r1, r2 } => {
                let f1 = stereographic_factor(&x[0..2], r1);
                let f2 = stereographic_factor(&x[2..4], r2);
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![f1, f1, f2, f2]))
            }
            Fixture::FubiniStudyCp2 { scale } => fubini_study(x, scale),
            _ => {
                let k = self.constant_curvature().unwrap_or(0.0);
                let den = 1.0 + k * quad(eta, x) / 4.0;
                DMatrix::from_fn(d, d, |a, b| if a == b { eta[a] / (den * den) } else { 0.0 })
            }
        }
    }
}

fn quad(eta: &[f64], x: &[f64]) -> f64 {
    eta.iter().zip(x).map(|(e, v)| e * v * v).sum()
}

/// Conformal factor of the stereographic chart of a round 2-sphere.
fn stereographic_factor(u: &[f64], r: f64) -> f64 {
    let den = 1.0 + (u[0] * u[0] + u[1] * u[1]) / (4.0 * r * r);
    1.0 / (den * den)
}

/// Real part of `h_{ij} = (delta_ij (1+|z|^2) - conj(z_i) z_j) / (1+|z|^2)^2`
/// in the real basis `(d/dx1, d/dy1, d/dx2, d/dy2)`.
fn fubini_study(x: &[f64], scale: f64) -> DMatrix<f64> {
    let z = [(x[0], x[1]), (x[2], x[3])];
    let s = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
    let mut g = DMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            // conj(z_i) z_j
            let (a, b) = z[i];
            let (c, e) = z[j];
            let re = a * c + b * e;
            let im = a * e - b * c;
            let delta = if i == j { s } else { 0.0 };
            let (hr, hi) = ((delta - re) / (s * s), -im / (s * s));
            g[(2 * i, 2 * j)] = scale * hr;
            g[(2 * i + 1, 2 * j + 1)] = scale * hr;
            g[(2 * i, 2 * j + 1)] = scale * hi;
            g[(2 * i + 1, 2 * j)] = -scale * hi;
        }
    }
    g
}
