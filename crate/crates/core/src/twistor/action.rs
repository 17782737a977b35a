//! The natural action of `j` on curvature tensors and its `4i` eigenspaces.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix};

use super::check_same_space;
use crate::curvature::{CurvatureSpace, CurvatureTensor};
use crate::spaces::ComplexStructure;
use crate::tensor::Tensor4;
use crate::{Error, Result};

/// Eigenvalues the action can have.
pub const SPECTRUM: [Complex<f64>; 5] = [
    Complex::new(0.0, 0.0),
    Complex::new(0.0, 2.0),
    Complex::new(0.0, -2.0),
    Complex::new(0.0, 4.0),
    Complex::new(0.0, -4.0),
];

/// `(j.R)(U,V) = j o R(U,V) - R(jU,V) - R(U,jV) - R(U,V) o j`, covariantly
/// `-(R(jX,Y,Z,T) + R(X,jY,Z,T) + R(X,Y,jZ,T) + R(X,Y,Z,jT))`.
pub fn j_action(t: &Tensor4, j: &DMatrix<f64>) -> Tensor4 {
    -&t.derivation(j)
}

/// Matrix of the action on the orthonormal basis of `space`.
pub fn j_action_operator(space: &CurvatureSpace, j: &ComplexStructure) -> Result<DMatrix<f64>> {
    if space.base().g() != j.base().g() || space.base().kind() != j.base().kind() {
        return Err(Error::BaseMismatch);
    }
    Ok(derivation_operator(space, j.matrix()))
}

fn derivation_operator(space: &CurvatureSpace, jm: &DMatrix<f64>) -> DMatrix<f64> {
    let m = space.dim();
    let n4 = space.basis().nrows();
    let mut images = DMatrix::zeros(n4, m);
    for k in 0..m {
        let image = j_action(&space.basis_tensor(k), jm);
        images.column_mut(k).copy_from_slice(image.as_slice());
    }
    space.basis().tr_mul(&images)
}

/// Eigenvalues of [`j_action_operator`].
///
/// The identities cutting out curvature tensors do not involve the form, so
/// the space is preserved by pullback along any linear map. With
/// `Id + j^T j = L L^T`, the structure `L^T j L^{-T}` is orthogonal, and the
/// action of `j` is similar to that of this structure, whose matrix on the
/// orthonormal basis is skew-symmetric. Its eigenvalues are therefore well
/// conditioned even when `j` is far from orthogonal.
pub fn j_action_spectrum(space: &CurvatureSpace, j: &ComplexStructure) -> Result<Vec<Complex<f64>>> {
    if space.base().g() != j.base().g() || space.base().kind() != j.base().kind() {
        return Err(Error::BaseMismatch);
    }
    let jm = j.matrix();
    let d = jm.nrows();
    let p = DMatrix::identity(d, d) + jm.transpose() * jm;
    let l = p.cholesky().ok_or_else(|| Error::Degenerate("Id + j^T j is not positive".into()))?.l();
    let l_inv_t = l.transpose().try_inverse().ok_or_else(|| Error::Degenerate("singular Cholesky factor".into()))?;
    let orthogonal = l.transpose() * jm * l_inv_t;
    let a = derivation_operator(space, &orthogonal);
    Ok(a.complex_eigenvalues().iter().copied().collect())
}

/// Largest distance from an eigenvalue to [`SPECTRUM`].
pub fn spectrum_distance(eigenvalues: &[Complex<f64>]) -> f64 {
    eigenvalues
        .iter()
        .map(|z| SPECTRUM.iter().map(|s| libm::hypot(z.re - s.re, z.im - s.im)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Component of `R` in the `+-4i` eigenspaces, through the real polynomial
/// `A^2 (A^2 + 4) / 192`, which is `1` at `A^2 = -16` and `0` at `A^2 = -4`
/// and `A^2 = 0`. Returns the component and its Frobenius norm.
pub fn four_i_component(r: &CurvatureTensor, j: &ComplexStructure) -> Result<(CurvatureTensor, f64)> {
    check_same_space(r, j)?;
    let jm = j.matrix();
    let a2 = j_action(&j_action(r.tensor(), jm), jm);
    let mut out = j_action(&j_action(&a2, jm), jm);
    out.axpy(4.0, &a2);
    out.scale_mut(1.0 / 192.0);
    let norm = out.norm();
    Ok((CurvatureTensor::new_unchecked(r.base(), out), norm))
}
