//! Ricci/Weyl decompositions and the closed-form generators behind them.

use nalgebra::DMatrix;

use super::{ricci, scalar_curvature, CurvatureTensor};
use crate::spaces::BilinearStructure;
use crate::tensor::Tensor4;
use crate::{Error, Result};

fn check_symmetric(m: &DMatrix<f64>, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
    }
    let asym = (m - m.transpose()).amax();
    if asym > 1e-12 * m.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// `(h o k)[abcd] = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad`.
pub fn kulkarni_nomizu(h: &DMatrix<f64>, k: &DMatrix<f64>, base: &BilinearStructure) -> Result<CurvatureTensor> {
    base.require_pseudo()?;
    check_symmetric(h, base.dim())?;
    check_symmetric(k, base.dim())?;
    let t = Tensor4::from_fn(base.dim(), |a, b, c, d| {
        h[(a, c)] * k[(b, d)] + h[(b, d)] * k[(a, c)] - h[(a, d)] * k[(b, c)] - h[(b, c)] * k[(a, d)]
    });
    Ok(CurvatureTensor::new_unchecked(base, t))
}

/// Constant sectional curvature `kappa`: `kappa (G_ac G_bd - G_ad G_bc)`.
/// Its scalar curvature is `d(d-1) kappa`.
pub fn constant_curvature(kappa: f64, base: &BilinearStructure) -> Result<CurvatureTensor> {
    base.require_pseudo()?;
    let g = base.g();
    let t = Tensor4::from_fn(base.dim(), |a, b, c, d| kappa * (g[(a, c)] * g[(b, d)] - g[(a, d)] * g[(b, c)]));
    Ok(CurvatureTensor::new_unchecked(base, t))
}

/// `R = S + E + C`: scalar, traceless-Ricci and Weyl parts.
#[derive(Debug, Clone)]
pub struct PseudoDecomposition {
    pub s_part: CurvatureTensor,
    pub e_part: CurvatureTensor,
    pub c_part: CurvatureTensor,
    pub scal: f64,
    pub ricci: DMatrix<f64>,
    pub traceless_ricci: DMatrix<f64>,
}

pub fn decompose_pseudo(r: &CurvatureTensor) -> Result<PseudoDecomposition> {
    let base = r.base();
    base.require_pseudo()?;
    let d = base.dim() as f64;
    let g = base.g();
    let ric = ricci(r);
    let scal = scalar_curvature(r)?;
    let traceless = &ric - g * (scal / d);
    let s_part = constant_curvature(scal / (d * (d - 1.0)), base)?;
    let e_part = kulkarni_nomizu(g, &symmetrize(&traceless), base)?.scaled(1.0 / (d - 2.0));
    let mut c = r.tensor() - s_part.tensor();
    c -= e_part.tensor();
    let c_part = CurvatureTensor::new_unchecked(base, c);
    let residual = ricci(&c_part).amax();
    if residual > 1e-8 * r.norm().max(1.0) {
        return Err(Error::NotRicciFlat(residual));
    }
    Ok(PseudoDecomposition { s_part, e_part, c_part, scal, ricci: ric, traceless_ricci: traceless })
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// The Ricci-type tensor `E(r)` of a symmetric form `r`; `Ric(E(r)) = r`.
pub fn build_e_of_r(r: &DMatrix<f64>, base: &BilinearStructure) -> Result<CurvatureTensor> {
    base.require_symplectic()?;
    check_symmetric(r, base.dim())?;
    let om = base.g();
    let c = -1.0 / (2.0 * (base.n() as f64 + 1.0));
    let t = Tensor4::from_fn(base.dim(), |x, y, z, w| {
        c * (2.0 * om[(x, y)] * r[(z, w)] + om[(x, z)] * r[(y, w)] - om[(y, z)] * r[(x, w)] + r[(y, z)] * om[(x, w)]
            - r[(x, z)] * om[(y, w)])
    });
    Ok(CurvatureTensor::new_unchecked(base, t))
}

/// `R = E(Ric R) + W`.
#[derive(Debug, Clone)]
pub struct SymplecticDecomposition {
    pub e_part: CurvatureTensor,
    pub w_part: CurvatureTensor,
    pub ricci: DMatrix<f64>,
}

pub fn decompose_symplectic(r: &CurvatureTensor) -> Result<SymplecticDecomposition> {
    let base = r.base();
    base.require_symplectic()?;
    let ric = ricci(r);
    let e_part = build_e_of_r(&symmetrize(&ric), base)?;
    let w_part = CurvatureTensor::new_unchecked(base, r.tensor() - e_part.tensor());
    let residual = ricci(&w_part).amax();
    if residual > 1e-8 * r.norm().max(1.0) {
        return Err(Error::NotRicciFlat(residual));
    }
    Ok(SymplecticDecomposition { e_part, w_part, ricci: ric })
}

/// Whether the Weyl part is negligible: `|W| <= rel_tol |R|`. Returns the
/// ratio `|W| / |R|` (zero for `R = 0`).
pub fn is_ricci_type(r: &CurvatureTensor, rel_tol: f64) -> Result<(bool, f64)> {
    let dec = decompose_symplectic(r)?;
    let norm = r.norm();
    if norm == 0.0 {
        return Ok((true, 0.0));
    }
    let ratio = dec.w_part.norm() / norm;
    Ok((ratio <= rel_tol, ratio))
}
