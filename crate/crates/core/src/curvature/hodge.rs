//! Hodge star on 2-forms in dimension four and the self-dual splitting.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{ricci, CurvatureTensor};
use crate::spaces::{BilinearStructure, Kind};
use crate::tensor::Tensor4;
use crate::{Error, Result};

/// Basis `e_a ^ e_b` (`a < b`) of 2-forms in lexicographic order.
pub fn two_form_basis(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            out.push((a, b));
        }
    }
    out
}

fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn require_four_oriented(base: &BilinearStructure) -> Result<()> {
    if base.kind() != Kind::PseudoRiemannian {
        return Err(Error::WrongKind(Kind::PseudoRiemannian.name()));
    }
    if base.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: base.dim() });
    }
    if !base.oriented() {
        return Err(Error::NotOriented);
    }
    Ok(())
}

/// `*(e_c ^ e_d) = sum_{a<b} eps_{abcd} eta_c eta_d e_a ^ e_b` with
/// `eta = diag G` and orientation `e_1 ^ e_2 ^ e_3 ^ e_4`, as a `6 x 6`
/// matrix on [`two_form_basis`] (column `k` is the image of form `k`).
pub fn hodge_star(base: &BilinearStructure) -> Result<DMatrix<f64>> {
    require_four_oriented(base)?;
    let g = base.g();
    let forms = two_form_basis(4);
    Ok(DMatrix::from_fn(6, 6, |row, col| {
        let (a, b) = forms[row];
        let (c, d) = forms[col];
        levi_civita([a, b, c, d]) * g[(c, c)] * g[(d, d)]
    }))
}

/// Hodge star applied to the first index pair of `t`:
/// `(*t)[abcd] = 1/2 sum_{ef} eps_{abef} eta_e eta_f t[efcd]`.
pub fn hodge_star_first_pair(t: &Tensor4, base: &BilinearStructure) -> Result<Tensor4> {
    require_four_oriented(base)?;
    let g = base.g();
    Ok(Tensor4::from_fn(4, |a, b, c, d| {
        let mut acc = 0.0;
        for e in 0..4 {
            for f in 0..4 {
                let eps = levi_civita([a, b, e, f]);
                if eps != 0.0 {
                    acc += eps * g[(e, e)] * g[(f, f)] * t[[e, f, c, d]];
                }
            }
        }
        0.5 * acc
    }))
}

/// `C = C+ + C-` with `C+- = (C +- *C) / 2`, the parts living on the
/// `+-1` eigenspaces of the Hodge star. Requires a Ricci-flat input.
pub fn sd_asd_split(c: &CurvatureTensor, rel_tol: f64) -> Result<(CurvatureTensor, CurvatureTensor)> {
    let base = c.base();
    require_four_oriented(base)?;
    let residual = ricci(c).amax();
    if residual > rel_tol * c.norm().max(1.0) {
        return Err(Error::NotRicciFlat(residual));
    }
    let star = hodge_star_first_pair(c.tensor(), base)?;
    let plus = (c.tensor() + &star) * 0.5;
    let minus = (c.tensor() - &star) * 0.5;
    Ok((CurvatureTensor::new_unchecked(base, plus), CurvatureTensor::new_unchecked(base, minus)))
}

/// `R` expressed in a frame whose last vector is negated, i.e. the same
/// curvature seen with the opposite orientation. The reflection preserves
/// the standard form, so the result lives over the same structure.
pub fn reflect_orientation(r: &CurvatureTensor) -> Result<CurvatureTensor> {
    let base = r.base();
    base.require_pseudo()?;
    let d = base.dim();
    let h = DMatrix::from_fn(d, d, |a, b| match (a == b, a + 1 == d) {
        (false, _) => 0.0,
        (true, false) => 1.0,
        (true, true) => -1.0,
    });
    r.act(&h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{decompose_pseudo, invariant_residual, CurvatureSpace};

    fn signatures() -> [BilinearStructure; 3] {
        [
            BilinearStructure::pseudo(2, 0, true).unwrap(),
            BilinearStructure::pseudo(0, 2, true).unwrap(),
            BilinearStructure::pseudo(1, 1, true).unwrap(),
        ]
    }

    #[test]
    fn star_table_and_involution() {
        let riem = hodge_star(&signatures()[0]).unwrap();
        // *(e1^e2) = e3^e4: column of (0,1) has +1 at row (2,3).
        assert_eq!(riem[(5, 0)], 1.0);
        let split = hodge_star(&signatures()[2]).unwrap();
        assert_eq!(split[(5, 0)], -1.0);
        for base in signatures() {
            let s = hodge_star(&base).unwrap();
            assert!((&s * &s - DMatrix::identity(6, 6)).amax() < 1e-12);
        }
        assert!(matches!(hodge_star(&BilinearStructure::pseudo(2, 0, false).unwrap()), Err(Error::NotOriented)));
    }

    #[test]
    fn weyl_parts_split_into_curvature_tensors() {
        for base in signatures() {
            let space = CurvatureSpace::new(&base).unwrap();
            let c = decompose_pseudo(&space.random(11)).unwrap().c_part;
            let (plus, minus) = sd_asd_split(&c, 1e-9).unwrap();
            assert!((&(plus.tensor() + minus.tensor()) - c.tensor()).max_abs() < 1e-14);
            for part in [&plus, &minus] {
                assert!(invariant_residual(Kind::PseudoRiemannian, part.tensor()) < 1e-12);
                assert!(ricci(part).amax() < 1e-12);
            }
            let star_plus = hodge_star_first_pair(plus.tensor(), &base).unwrap();
            assert!((&star_plus - plus.tensor()).max_abs() < 1e-12);
            let zero = CurvatureTensor::zero(&base);
            let (p0, m0) = sd_asd_split(&zero, 1e-9).unwrap();
            assert_eq!(p0.norm() + m0.norm(), 0.0);
            assert!(sd_asd_split(&space.random(1), 1e-9).is_err());
        }
    }

    #[test]
    fn reflection_swaps_self_dual_halves() {
        for base in signatures() {
            let r = CurvatureSpace::new(&base).unwrap().random(5);
            let c = decompose_pseudo(&r).unwrap().c_part;
            let (plus, minus) = sd_asd_split(&c, 1e-9).unwrap();
            let (flipped_plus, flipped_minus) = sd_asd_split(&reflect_orientation(&plus).unwrap(), 1e-9).unwrap();
            assert!(flipped_plus.norm() <= 1e-12 * plus.norm().max(1.0));
            assert!((flipped_minus.norm() - plus.norm()).abs() <= 1e-12);
            let twice = reflect_orientation(&reflect_orientation(&minus).unwrap()).unwrap();
            assert!((twice.tensor() - minus.tensor()).max_abs() <= 1e-14);
        }
    }
}
