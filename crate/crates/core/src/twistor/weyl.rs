//! Weyl tensors built from `j`-anti-invariant 2-forms and the projector `P_j`.

use nalgebra::DMatrix;

use super::{check_same_space, omega2};
use crate::curvature::CurvatureTensor;
use crate::spaces::{ComplexStructure, Kind};
use crate::tensor::Tensor4;
use crate::{Error, Result};

/// Largest violation of `S^T = -S` and `S(jX, jY) = -S(X, Y)`, relative to
/// `max(1, |S|) max(1, |j|^2)`.
pub fn anti_invariant_residual(s: &DMatrix<f64>, j: &ComplexStructure) -> f64 {
    let jm = j.matrix();
    let antisym = (s + s.transpose()).amax();
    let anti = (jm.transpose() * s * jm + s).amax();
    antisym.max(anti) / (s.amax().max(1.0) * jm.norm_squared().max(1.0))
}

fn require_anti_invariant(s: &DMatrix<f64>, j: &ComplexStructure) -> Result<()> {
    j.base().check_dim(s.nrows())?;
    let residual = anti_invariant_residual(s, j);
    if residual > 1e-8 {
        return Err(Error::NotAntiInvariant(residual));
    }
    Ok(())
}

/// Pseudo-Riemannian `psi_j(S)`:
/// `2g(X,jY)S(Z,jW) + 2g(Z,jW)S(X,jY) + g(X,jZ)S(Y,jW) + g(Y,jW)S(X,jZ)
///  - g(X,jW)S(Y,jZ) - g(Y,jZ)S(X,jW)`.
pub fn psi_j(s: &DMatrix<f64>, j: &ComplexStructure) -> Result<CurvatureTensor> {
    let base = j.base();
    base.require_pseudo()?;
    require_anti_invariant(s, j)?;
    let gj = base.g() * j.matrix();
    let sj = s * j.matrix();
    let t = Tensor4::from_fn(base.dim(), |x, y, z, w| {
        2.0 * gj[(x, y)] * sj[(z, w)]
            + 2.0 * gj[(z, w)] * sj[(x, y)]
            + gj[(x, z)] * sj[(y, w)]
            + gj[(y, w)] * sj[(x, z)]
            - gj[(x, w)] * sj[(y, z)]
            - gj[(y, z)] * sj[(x, w)]
    });
    Ok(CurvatureTensor::new_unchecked(base, t))
}

/// Symplectic `R(S, j)`, normalised so that
/// `Omega_2(X, Y) = -8(n-1) S(X, jY)`.
///
/// The five-term expression
/// `-2w(Z,jT)S(X,jY) + w(X,jZ)S(Y,jT) + w(X,jT)S(Y,jZ) - w(Y,jT)S(X,jZ) - w(Y,jZ)S(X,jT)`
/// is a Ricci-flat curvature tensor whose `Omega_2` equals `+8(n+1) S(X, jY)`;
/// it is rescaled by `-(n-1)/(n+1)`.
pub fn r_of_s(s: &DMatrix<f64>, j: &ComplexStructure) -> Result<CurvatureTensor> {
    let base = j.base();
    base.require_symplectic()?;
    require_anti_invariant(s, j)?;
    let n = base.n() as f64;
    let scale = -(n - 1.0) / (n + 1.0);
    let oj = base.g() * j.matrix();
    let sj = s * j.matrix();
    let t = Tensor4::from_fn(base.dim(), |x, y, z, w| {
        scale
            * (-2.0 * oj[(z, w)] * sj[(x, y)] + oj[(x, z)] * sj[(y, w)] + oj[(x, w)] * sj[(y, z)]
                - oj[(y, w)] * sj[(x, z)]
                - oj[(y, z)] * sj[(x, w)])
    });
    Ok(CurvatureTensor::new_unchecked(base, t))
}

/// `S(X, Y) = Omega_2(X, jY) / (8(n+1))` (pseudo) or `/ (8(n-1))`
/// (symplectic).
pub fn s_from_r(r: &CurvatureTensor, j: &ComplexStructure) -> Result<DMatrix<f64>> {
    check_same_space(r, j)?;
    let n = r.base().n() as f64;
    let denom = match r.kind() {
        Kind::PseudoRiemannian => 8.0 * (n + 1.0),
        Kind::Symplectic => {
            if r.base().n() < 2 {
                return Err(Error::DimensionTooSmall(r.base().n()));
            }
            8.0 * (n - 1.0)
        }
    };
    let s = omega2(r, j)? * j.matrix() / denom;
    debug_assert!(anti_invariant_residual(&s, j) < 1e-8);
    Ok(s)
}

/// `P_j(R) = psi_j(S^{R,j})` or `R(S^{R,j}, j)`.
pub fn projector_pj(r: &CurvatureTensor, j: &ComplexStructure) -> Result<CurvatureTensor> {
    let s = s_from_r(r, j)?;
    match r.kind() {
        Kind::PseudoRiemannian => psi_j(&s, j),
        Kind::Symplectic => r_of_s(&s, j),
    }
}

/// Random anti-invariant 2-form at `j` with Frobenius norm one: the
/// anti-invariant part of an antisymmetric matrix with entries uniform in
/// `[-1, 1]`.
pub fn random_anti_invariant(j: &ComplexStructure, seed: u64) -> DMatrix<f64> {
    let d = j.dim();
    let m = crate::linalg::uniform_matrix(&mut crate::linalg::seeded_rng(seed), d, d);
    let s = &m - m.transpose();
    let jm = j.matrix();
    let s = (&s - jm.transpose() * &s * jm) * 0.5;
    let norm = s.norm();
    s / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{decompose_pseudo, decompose_symplectic, ricci, sd_asd_split, CurvatureSpace};
    use crate::spaces::{random_group_element, standard_j0, BilinearStructure, FiberSampler};

    #[test]
    fn psi_is_weyl_and_satisfies_the_omega2_identity() {
        for (p, q) in [(2, 0), (1, 1), (2, 1), (4, 0)] {
            let base = BilinearStructure::pseudo(p, q, false).unwrap();
            let n = base.n() as f64;
            for (i, j) in FiberSampler::new(&base, 12).samples(4).into_iter().enumerate() {
                let s = random_anti_invariant(&j, i as u64);
                let r = psi_j(&s, &j).unwrap();
                assert!(r.residual() < 1e-10 * r.norm());
                assert!(ricci(&r).amax() < 1e-10 * r.norm());
                let dec = decompose_pseudo(&r).unwrap();
                assert!(dec.s_part.norm() + dec.e_part.norm() < 1e-10 * r.norm());
                let o2 = omega2(&r, &j).unwrap();
                assert!((o2 + &s * j.matrix() * (8.0 * (n + 1.0))).amax() < 1e-9);
                assert!((s_from_r(&r, &j).unwrap() - &s).amax() < 1e-9);
            }
        }
    }

    #[test]
    fn r_of_s_is_weyl_and_recovers_s() {
        for n in 2..=4 {
            let base = BilinearStructure::symplectic(n).unwrap();
            let nf = n as f64;
            for (i, j) in FiberSampler::new(&base, 2).samples(3).into_iter().enumerate() {
                let s = random_anti_invariant(&j, 40 + i as u64);
                let r = r_of_s(&s, &j).unwrap();
                assert!(r.residual() < 1e-10 * r.norm());
                assert!(ricci(&r).amax() < 1e-10 * r.norm());
                assert!(decompose_symplectic(&r).unwrap().e_part.norm() < 1e-10 * r.norm());
                let o2 = omega2(&r, &j).unwrap();
                assert!((o2 + &s * j.matrix() * (8.0 * (nf - 1.0))).amax() < 1e-9);
                assert!((s_from_r(&r, &j).unwrap() - &s).amax() < 1e-9);
            }
        }
    }

    #[test]
    fn projector_is_idempotent_and_equivariant() {
        for base in [BilinearStructure::pseudo(2, 1, false).unwrap(), BilinearStructure::symplectic(3).unwrap()] {
            let space = CurvatureSpace::new(&base).unwrap();
            let r = space.random(6);
            let j = FiberSampler::new(&base, 3).sample(2);
            let p = projector_pj(&r, &j).unwrap();
            let pp = projector_pj(&p, &j).unwrap();
            assert!((p.tensor() - pp.tensor()).max_abs() < 1e-9);
            assert!(ricci(&p).amax() < 1e-10);
            let h = random_group_element(&base, 77);
            let h_inv = h.clone().try_inverse().unwrap();
            let hj = crate::spaces::conjugate_unchecked(&h, &h_inv, &j);
            let lhs = projector_pj(&r.act(&h).unwrap(), &hj).unwrap();
            let rhs = p.act(&h).unwrap();
            assert!((lhs.tensor() - rhs.tensor()).max_abs() < 1e-8);
        }
    }

    #[test]
    fn riemannian_psi_is_anti_self_dual() {
        let base = BilinearStructure::pseudo(2, 0, true).unwrap();
        let j = standard_j0(&base);
        let r = psi_j(&random_anti_invariant(&j, 5), &j).unwrap();
        let (plus, minus) = sd_asd_split(&r, 1e-9).unwrap();
        assert!(plus.norm() < 1e-12 && minus.norm() > 0.1);
    }

    #[test]
    fn membership_is_enforced() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let j = standard_j0(&base);
        let mut s = DMatrix::zeros(4, 4);
        s[(0, 1)] = 1.0;
        s[(1, 0)] = -1.0;
        // S(e1, e2) with j e1 = e3, j e2 = e4 would need S(e3, e4) = -1.
        assert!(matches!(psi_j(&s, &j), Err(Error::NotAntiInvariant(_))));
        assert_eq!(psi_j(&DMatrix::zeros(4, 4), &j).unwrap().norm(), 0.0);
    }
}
