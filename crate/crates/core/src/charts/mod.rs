//! Curvature of concrete coordinate metrics by finite differences, plus
//! closed-form oracles and symplectic point fixtures.
//!
//! Derivatives use the fourth-order central stencil
//! `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`, optionally
//! Richardson-extrapolated as `(16 D(h/2) - D(h)) / 15`. Christoffel symbols
//! come from differentiated metrics and the curvature from differentiated
//! Christoffel symbols. The coordinate tensor is moved to a
//! pseudo-orthonormal frame and snapped onto the curvature space.

mod fixtures;
mod symplectic;

pub use fixtures::Fixture;
pub use symplectic::{symplectic_fixture_curvature, SymplecticPointFixture};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::curvature::{constant_curvature, invariant_residual, CurvatureSpace, CurvatureTensor};
use crate::spaces::{pseudo_orthonormal_frame, BilinearStructure};
use crate::tensor::Tensor4;
use crate::{Error, Result, Tolerances};

/// A metric in a coordinate chart together with differentiation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartMetric {
    fixture: Fixture,
    dim: usize,
    signature: (usize, usize),
    eta: Vec<f64>,
    fd_step: f64,
    richardson: bool,
}

impl ChartMetric {
    /// `dim` must be even; curvature needs `dim >= 4`. Product spheres,
    /// Fubini-Study and the neutral space form only exist in dimension 4.
    pub fn new(fixture: Fixture, dim: usize) -> Result<Self> {
        fixture.validate(dim)?;
        let (p, q) = fixture.default_signature(dim);
        Ok(Self { fixture, dim, signature: (p, q), eta: eta(p, q), fd_step: 1e-3, richardson: true })
    }

    /// Overrides the signature halves `(p, q)`; `eta` becomes
    /// `diag(I_{p,q}, I_{p,q})`. Only flat and space-form fixtures accept
    /// this.
    pub fn with_signature(mut self, p: usize, q: usize) -> Result<Self> {
        if 2 * (p + q) != self.dim {
            return Err(Error::SignatureMismatch(format!("({p},{q}) halves for dimension {}", self.dim)));
        }
        if (p, q) != self.signature && !self.fixture.any_signature() {
            return Err(Error::SignatureMismatch(format!("{} has a fixed signature", self.fixture.name())));
        }
        self.signature = (p, q);
        self.eta = eta(p, q);
        Ok(self)
    }

    pub fn with_step(mut self, h: f64) -> Result<Self> {
        if !(1e-6..=1e-1).contains(&h) {
            return Err(Error::BadStep(h));
        }
        self.fd_step = h;
        Ok(self)
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn fixture(&self) -> &Fixture {
        &self.fixture
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    /// Signature halves `(p, q)` of the metric.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Model structure matching the metric's signature.
    pub fn base(&self, oriented: bool) -> Result<BilinearStructure> {
        let (p, q) = self.signature();
        BilinearStructure::pseudo(p, q, oriented)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutsideChart(format!("{x:?}")));
        }
        // The stencil reaches 2h away in every direction.
        let reach = 2.0 * self.fd_step * 2.0;
        self.fixture.check_domain(x, &self.eta, reach)
    }

    /// Metric components at `x`.
    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        Ok(self.fixture.metric(x, &self.eta))
    }

    /// `d/dx^k` of `f` at `x` by the configured stencil.
    fn derivative<F>(&self, x: &[f64], k: usize, f: &F) -> Vec<f64>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let stencil = |h: f64| {
            let at = |s: f64| {
                let mut y = x.to_vec();
                y[k] += s * h;
                f(&y)
            };
            let (p2, p1, m1, m2) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
            p2.iter()
                .zip(&p1)
                .zip(&m1)
                .zip(&m2)
                .map(|(((a, b), c), d)| (-a + 8.0 * b - 8.0 * c + d) / (12.0 * h))
                .collect::<Vec<f64>>()
        };
        let coarse = stencil(self.fd_step);
        if !self.richardson {
            return coarse;
        }
        let fine = stencil(self.fd_step / 2.0);
        fine.iter().zip(&coarse).map(|(f, c)| (16.0 * f - c) / 15.0).collect()
    }

    fn christoffel_raw(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let g = self.fixture.metric(x, &self.eta);
        let g_inv = g.clone().try_inverse().expect("fixture metrics are non-degenerate in their domain");
        let metric = |y: &[f64]| self.fixture.metric(y, &self.eta).as_slice().to_vec();
        // dg[k][(a, b)] = d_k g_ab, column-major like nalgebra storage.
        let dg: Vec<DMatrix<f64>> =
            (0..d).map(|k| DMatrix::from_column_slice(d, d, &self.derivative(x, k, &metric))).collect();
        let mut gamma = vec![0.0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in b..d {
                    let mut acc = 0.0;
                    for e in 0..d {
                        acc += g_inv[(a, e)] * (dg[b][(e, c)] + dg[c][(e, b)] - dg[e][(b, c)]);
                    }
                    gamma[(a * d + b) * d + c] = 0.5 * acc;
                    gamma[(a * d + c) * d + b] = 0.5 * acc;
                }
            }
        }
        gamma
    }

    /// Christoffel symbols `Gamma^a_{bc}` at `x`, flattened as `(a, b, c)`.
    pub fn christoffel_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        Ok(self.christoffel_raw(x))
    }

    /// Coordinate components `R(d_x, d_y, d_z, d_t)` in this crate's sign
    /// convention (`+1` sectional curvature on the unit sphere).
    pub fn coordinate_curvature_at(&self, x: &[f64]) -> Result<Tensor4> {
        self.check_point(x)?;
        let d = self.dim;
        let g = self.fixture.metric(x, &self.eta);
        let gamma = self.christoffel_raw(x);
        let christoffel = |y: &[f64]| self.christoffel_raw(y);
        let dgamma: Vec<Vec<f64>> = (0..d).map(|k| self.derivative(x, k, &christoffel)).collect();
        let gm = |a: usize, b: usize, c: usize| gamma[(a * d + b) * d + c];
        let dgm = |k: usize, a: usize, b: usize, c: usize| dgamma[k][(a * d + b) * d + c];
        // Rm[a][b][c][e] = R^a_{bce} = d_c G^a_{eb} - d_e G^a_{cb} + G^a_{cf} G^f_{eb} - G^a_{ef} G^f_{cb}
        let mut rm = Tensor4::zeros(d);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut v = dgm(c, a, e, b) - dgm(e, a, c, b);
                        for f in 0..d {
                            v += gm(a, c, f) * gm(f, e, b) - gm(a, e, f) * gm(f, c, b);
                        }
                        rm[[a, b, c, e]] = v;
                    }
                }
            }
        }
        // Our R(X,Y,Z,T) is minus g(R_std(X,Y)Z, T) = -R^a_{zxy} g_{at}.
        Ok(Tensor4::from_fn(d, |x_, y, z, t| -(0..d).map(|a| rm[[a, z, x_, y]] * g[(a, t)]).sum::<f64>()))
    }

    /// Curvature at `x` in a pseudo-orthonormal frame, snapped onto the
    /// curvature space. Fails if the raw finite-difference tensor violates
    /// the curvature identities by more than `tol.fd_presnap` (relative to
    /// `max(1, |R|)`).
    pub fn curvature_at(&self, x: &[f64], oriented: bool, tol: &Tolerances) -> Result<CurvatureTensor> {
        let base = self.base(oriented)?;
        let space = CurvatureSpace::new(&base)?;
        self.curvature_at_with(x, &space, tol)
    }

    /// [`ChartMetric::curvature_at`] reusing a prebuilt curvature space.
    pub fn curvature_at_with(&self, x: &[f64], space: &CurvatureSpace, tol: &Tolerances) -> Result<CurvatureTensor> {
        let base = space.base();
        if base.signature() != self.signature() || base.dim() != self.dim {
            return Err(Error::BaseMismatch);
        }
        let coords = self.coordinate_curvature_at(x)?;
        let g = self.fixture.metric(x, &self.eta);
        let frame = pseudo_orthonormal_frame(&g, base, tol)?;
        let framed = coords.pullback(&frame);
        let residual = invariant_residual(base.kind(), &framed);
        if residual > tol.fd_presnap * framed.norm().max(1.0) {
            return Err(Error::FiniteDifference(residual));
        }
        space.project(&framed)
    }

    /// Closed-form curvature in an orthonormal frame, for the constant
    /// curvature fixtures.
    pub fn oracle(&self, oriented: bool) -> Result<Option<CurvatureTensor>> {
        let base = self.base(oriented)?;
        Ok(match self.fixture.constant_curvature() {
            Some(k) => Some(constant_curvature_oracle(k, &base)?),
            None => None,
        })
    }
}

/// `K (G(X,Z) G(Y,T) - G(X,T) G(Y,Z))`, scalar curvature `2n(2n-1) K`.
pub fn constant_curvature_oracle(kappa: f64, base: &BilinearStructure) -> Result<CurvatureTensor> {
    constant_curvature(kappa, base)
}

fn eta(p: usize, q: usize) -> Vec<f64> {
    let half = (0..p).map(|_| 1.0).chain((0..q).map(|_| -1.0));
    half.clone().chain(half).collect()
}

/// A deterministic generic point with coordinates in `[-0.4, 0.4]`.
pub fn generic_point(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = crate::linalg::seeded_rng(seed);
    let v: DVector<f64> = crate::linalg::uniform_vector(&mut rng, dim);
    v.iter().map(|x| 0.4 * x).collect()
}
