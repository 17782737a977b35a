//! Algebraic curvature tensors of both kinds and their decompositions.
//!
//! Components are fully covariant, `R[a][b][c][d] = G(R(e_a, e_b) e_c, e_d)`.
//! The sign convention makes the unit round sphere
//! `R = G_ac G_bd - G_ad G_bc`, that is `R(X,Y)Z = G(X,Z)Y - G(Y,Z)X`, and
//! [`sectional_curvature`] is normalised to be `+1` there.

mod decompose;
mod hodge;
mod sectional;
mod space;

pub use decompose::{
    build_e_of_r, constant_curvature, decompose_pseudo, decompose_symplectic, is_ricci_type, kulkarni_nomizu,
    PseudoDecomposition, SymplecticDecomposition,
};
pub use hodge::{hodge_star, hodge_star_first_pair, reflect_orientation, sd_asd_split, two_form_basis};
pub use sectional::{pinching_report, sectional_curvature, PinchingReport};
pub use space::{CurvatureSpace, MAX_TENSOR_DIM};

use nalgebra::{DMatrix, DVector};

use crate::spaces::{BilinearStructure, Kind};
use crate::tensor::Tensor4;
use crate::{Error, Result, Tolerances};

/// An algebraic curvature tensor over a model space.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    base: BilinearStructure,
    r: Tensor4,
}

impl CurvatureTensor {
    /// Checks the kind-dependent symmetries and the first Bianchi identity to
    /// `tol.identity` relative to `max(1, |R|)`.
    pub fn new(base: &BilinearStructure, r: Tensor4, tol: &Tolerances) -> Result<Self> {
        base.check_dim(r.dim())?;
        let residual = invariant_residual(base.kind(), &r);
        if residual > tol.identity * r.norm().max(1.0) {
            return Err(Error::NotCurvature(residual));
        }
        Ok(Self { base: base.clone(), r })
    }

    pub(crate) fn new_unchecked(base: &BilinearStructure, r: Tensor4) -> Self {
        debug_assert_eq!(base.dim(), r.dim());
        Self { base: base.clone(), r }
    }

    pub fn zero(base: &BilinearStructure) -> Self {
        Self::new_unchecked(base, Tensor4::zeros(base.dim()))
    }

    pub fn base(&self) -> &BilinearStructure {
        &self.base
    }

    pub fn kind(&self) -> Kind {
        self.base.kind()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.r
    }

    pub fn into_tensor(self) -> Tensor4 {
        self.r
    }

    /// Frobenius norm of the components.
    pub fn norm(&self) -> f64 {
        self.r.norm()
    }

    /// Largest violation of the curvature identities.
    pub fn residual(&self) -> f64 {
        invariant_residual(self.kind(), &self.r)
    }

    /// Linear combination `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut r = &self.r * a;
        r.axpy(b, &other.r);
        Self::new_unchecked(&self.base, r)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new_unchecked(&self.base, &self.r * s)
    }

    /// `(h.R)(X,Y)Z = h R(h^{-1}X, h^{-1}Y) h^{-1}Z` for `h` in the structure
    /// group; covariantly this is the pullback by `h^{-1}`.
    pub fn act(&self, h: &DMatrix<f64>) -> Result<Self> {
        let inv = h.clone().try_inverse().ok_or_else(|| Error::Degenerate("group element is singular".into()))?;
        Ok(Self::new_unchecked(&self.base, self.r.pullback(&inv)))
    }
}

/// Largest absolute violation of: antisymmetry in `(a,b)`, antisymmetry
/// (pseudo) or symmetry (symplectic) in `(c,d)`, and the cyclic sum over
/// `(a,b,c)`.
pub fn invariant_residual(kind: Kind, r: &Tensor4) -> f64 {
    let d = r.dim();
    let cd_sign = match kind {
        Kind::PseudoRiemannian => 1.0,
        Kind::Symplectic => -1.0,
    };
    let mut worst = 0.0_f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let x = r[[a, b, c, e]];
                    worst = worst.max((x + r[[b, a, c, e]]).abs());
                    worst = worst.max((x + cd_sign * r[[a, b, e, c]]).abs());
                    worst = worst.max((x + r[[b, c, a, e]] + r[[c, a, b, e]]).abs());
                }
            }
        }
    }
    worst
}

/// The endomorphism `R(X, Y)`, i.e. the matrix `M` with
/// `G(M Z, T) = R(X, Y, Z, T)`.
pub fn endomorphism_of(r: &CurvatureTensor, x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
    (r.r.contract_front(x, y) * r.base.g_inv()).transpose()
}

/// Ricci form. Pseudo-Riemannian: `Ric(X,Z) = Tr(Y -> R(X,Y)Z)`; symplectic:
/// `Ric(X,Y) = Tr(Z -> R(X,Z)Y)`. With covariant components and the slot
/// symmetries of each kind both reduce to `sum R[a][b][c][d] G^{db}`.
pub fn ricci(r: &CurvatureTensor) -> DMatrix<f64> {
    r.r.contract_middle(r.base.g_inv())
}

/// `Tr(G^{-1} Ric)`.
pub fn scalar_curvature(r: &CurvatureTensor) -> Result<f64> {
    r.base.require_pseudo()?;
    Ok((r.base.g_inv() * ricci(r)).trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_endomorphism_and_ricci() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let s = constant_curvature(1.0, &base).unwrap();
        let e = |i: usize| DVector::from_fn(4, |k, _| if k == i { 1.0 } else { 0.0 });
        let m = endomorphism_of(&s, &e(0), &e(1));
        // R(e1, e2) e1 = e2 and R(e1, e2) e2 = -e1 in this convention.
        let mut expected = DMatrix::zeros(4, 4);
        expected[(1, 0)] = 1.0;
        expected[(0, 1)] = -1.0;
        assert!((&m - &expected).amax() < 1e-15);
        let m2 = endomorphism_of(&s, &e(1), &e(0));
        assert!((&m + &m2).amax() == 0.0);
        assert!((ricci(&s) - DMatrix::identity(4, 4) * 3.0).amax() < 1e-14);
        assert!((scalar_curvature(&s).unwrap() - 12.0).abs() < 1e-13);
        let zero = CurvatureTensor::zero(&base);
        assert_eq!(endomorphism_of(&zero, &e(0), &e(2)), DMatrix::zeros(4, 4));
        assert_eq!(ricci(&zero), DMatrix::zeros(4, 4));
    }

    #[test]
    fn rejects_non_curvature() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let mut t = Tensor4::zeros(4);
        t[[0, 1, 2, 3]] = 1.0;
        assert!(matches!(CurvatureTensor::new(&base, t, &Tolerances::default()), Err(Error::NotCurvature(_))));
        let sym = BilinearStructure::symplectic(2).unwrap();
        assert!(scalar_curvature(&CurvatureTensor::zero(&sym)).is_err());
    }
}
