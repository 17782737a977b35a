//! `Omega_1`, `Omega_2` and the canonical 2-form on the twistor space.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::check_same_space;
use crate::curvature::CurvatureTensor;
use crate::spaces::{vertical_basis, ComplexStructure};
use crate::{Error, Result, Tolerances};

/// `Omega_1(X, Y) = Tr(R(X, Y) o j)`.
pub fn omega1(r: &CurvatureTensor, j: &ComplexStructure) -> Result<DMatrix<f64>> {
    check_same_space(r, j)?;
    let m = j.matrix() * r.base().g_inv().transpose();
    Ok(r.tensor().contract_back(&m))
}

/// `Omega_2(X, Y) = Omega_1(jX, jY) - Omega_1(X, Y)`.
pub fn omega2(r: &CurvatureTensor, j: &ComplexStructure) -> Result<DMatrix<f64>> {
    let o1 = omega1(r, j)?;
    let jm = j.matrix();
    Ok(jm.transpose() * &o1 * jm - o1)
}

/// `|Omega_2|_F / |R|_F`: zero exactly when the 2-form is of type (1,1) at `j`.
pub fn type11_check(r: &CurvatureTensor, j: &ComplexStructure) -> Result<f64> {
    let norm = r.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(omega2(r, j)?.norm() / norm)
}

/// Gram matrix of the canonical 2-form over `e_1..e_{2n}` followed by the
/// vertical basis at `j`.
#[derive(Debug, Clone)]
pub struct TwoFormAtJ {
    pub at: ComplexStructure,
    pub r: CurvatureTensor,
    pub vertical_basis: Vec<DMatrix<f64>>,
    pub gram: DMatrix<f64>,
}

impl TwoFormAtJ {
    pub fn horizontal_block(&self) -> DMatrix<f64> {
        let d = self.at.dim();
        self.gram.view((0, 0), (d, d)).into_owned()
    }

    pub fn vertical_block(&self) -> DMatrix<f64> {
        let d = self.at.dim();
        let m = self.vertical_basis.len();
        self.gram.view((d, d), (m, m)).into_owned()
    }

    /// Matrix of `J+` (`sign = 1`) or `J-` (`sign = -1`) in the same basis:
    /// `+-j` on horizontals, `S -> j S` on verticals.
    pub fn complex_structure_matrix(&self, sign: f64) -> DMatrix<f64> {
        let d = self.at.dim();
        let m = self.vertical_basis.len();
        let jm = self.at.matrix();
        let mut out = DMatrix::zeros(d + m, d + m);
        out.view_mut((0, 0), (d, d)).copy_from(&(jm * sign));
        for (b, sb) in self.vertical_basis.iter().enumerate() {
            let image = jm * sb;
            for (a, sa) in self.vertical_basis.iter().enumerate() {
                out[(d + a, d + b)] = sa.dot(&image);
            }
        }
        out
    }
}

/// Horizontal block `-2 Omega_1`, mixed blocks zero, vertical block
/// `-Tr(j [S_a, S_b])`.
pub fn build_two_form(r: &CurvatureTensor, j: &ComplexStructure) -> Result<TwoFormAtJ> {
    let o1 = omega1(r, j)?;
    let basis = vertical_basis(j)?;
    let d = j.dim();
    let m = basis.len();
    let jm = j.matrix();
    let mut gram = DMatrix::zeros(d + m, d + m);
    gram.view_mut((0, 0), (d, d)).copy_from(&(o1 * -2.0));
    for a in 0..m {
        for b in 0..m {
            let bracket = &basis[a] * &basis[b] - &basis[b] * &basis[a];
            gram[(d + a, d + b)] = -(jm * bracket).trace();
        }
    }
    Ok(TwoFormAtJ { at: j.clone(), r: r.clone(), vertical_basis: basis, gram })
}

/// Non-degeneracy data for the canonical 2-form at `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonDegeneracy {
    /// The horizontal block `Omega_1` is non-degenerate.
    pub nondegenerate: bool,
    /// The vertical block is non-degenerate (always expected).
    pub vertical_nondegenerate: bool,
    /// `sigma_min / sigma_max` of the horizontal block (zero if it vanishes).
    pub horizontal_condition: f64,
    /// `|det gram|^{1/dim}`.
    pub det_root: f64,
}

fn sigma_ratio(m: &DMatrix<f64>) -> f64 {
    let sv = crate::linalg::singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

pub fn two_form_nondegenerate(r: &CurvatureTensor, j: &ComplexStructure, tol: &Tolerances) -> Result<NonDegeneracy> {
    let form = build_two_form(r, j)?;
    let horizontal_condition = sigma_ratio(&form.horizontal_block());
    let vertical_condition = sigma_ratio(&form.vertical_block());
    let dim = form.gram.nrows() as f64;
    let det_root = libm::pow(form.gram.determinant().abs(), 1.0 / dim);
    Ok(NonDegeneracy {
        nondegenerate: horizontal_condition >= tol.rank,
        vertical_nondegenerate: vertical_condition >= tol.rank,
        horizontal_condition,
        det_root,
    })
}

/// Whether `omega(Xi, J Xi) > 0` for every non-zero tangent vector, with
/// `J = J+` for `sign = 1` and `J-` for `sign = -1`.
pub fn two_form_positivity(r: &CurvatureTensor, j: &ComplexStructure, sign: f64, tol: &Tolerances) -> Result<bool> {
    let nd = two_form_nondegenerate(r, j, tol)?;
    if !nd.nondegenerate {
        return Err(Error::Degenerate("the 2-form is degenerate at j".into()));
    }
    let form = build_two_form(r, j)?;
    let q = &form.gram * form.complex_structure_matrix(sign);
    let sym = (&q + q.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let max = eig.amax();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min > tol.rank * max)
}
