//! The linear space of algebraic curvature tensors and its projector.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::CurvatureTensor;
use crate::linalg::{seeded_rng, uniform_vector};
use crate::spaces::{BilinearStructure, Kind};
use crate::tensor::Tensor4;
use crate::{Error, Result};

/// Largest model dimension for which dense tensor-space operators are built.
pub const MAX_TENSOR_DIM: usize = 10;

/// Orthonormal basis of the curvature tensors over a structure.
///
/// Built numerically: tensors antisymmetric in the first pair and
/// (anti)symmetric in the second pair get orthonormal coordinates, the first
/// Bianchi identity is imposed as a linear system on those coordinates, and
/// its kernel is extracted with a column-pivoted QR factorisation.
#[derive(Debug, Clone)]
pub struct CurvatureSpace {
    base: BilinearStructure,
    /// `d^4 x m`, orthonormal columns.
    basis: DMatrix<f64>,
}

/// A pair-adapted coordinate: up to four `(flat index, coefficient)` entries.
type Coordinate = Vec<(usize, f64)>;

impl CurvatureSpace {
    pub fn new(base: &BilinearStructure) -> Result<Self> {
        let d = base.dim();
        if d > MAX_TENSOR_DIM {
            return Err(Error::DimensionTooLarge { dim: d, max: MAX_TENSOR_DIM });
        }
        let coords = pair_coordinates(base.kind(), d);
        let constraints = bianchi_constraints(d, &coords);
        let kernel = kernel_basis(&constraints)?;
        let expected = Self::expected_dimension(base);
        if kernel.ncols() != expected {
            return Err(Error::Degenerate(alloc::format!(
                "curvature space has dimension {}, expected {expected}",
                kernel.ncols()
            )));
        }
        let mut basis = DMatrix::zeros(d * d * d * d, expected);
        for (k, coord) in coords.iter().enumerate() {
            for &(flat, v) in coord {
                for col in 0..expected {
                    basis[(flat, col)] += v * kernel[(k, col)];
                }
            }
        }
        Ok(Self { base: base.clone(), basis })
    }

    /// `d^2(d^2-1)/12` for pseudo-Riemannian, `d(d+1)(d+2)(d-1)/8` for
    /// symplectic structures.
    pub fn expected_dimension(base: &BilinearStructure) -> usize {
        let d = base.dim();
        match base.kind() {
            Kind::PseudoRiemannian => d * d * (d * d - 1) / 12,
            Kind::Symplectic => d * (d + 1) * (d + 2) * (d - 1) / 8,
        }
    }

    pub fn base(&self) -> &BilinearStructure {
        &self.base
    }

    /// Dimension of the curvature space.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Basis tensors as the columns of a `d^4 x m` matrix.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_tensor(&self, k: usize) -> Tensor4 {
        Tensor4::from_vec(self.base.dim(), self.basis.column(k).iter().copied().collect())
            .expect("basis columns have d^4 entries")
    }

    /// Coordinates of the orthogonal projection of `t`.
    pub fn coordinates(&self, t: &Tensor4) -> DVector<f64> {
        self.basis.tr_mul(&DVector::from_column_slice(t.as_slice()))
    }

    pub fn from_coordinates(&self, c: &DVector<f64>) -> CurvatureTensor {
        let v = &self.basis * c;
        CurvatureTensor::new_unchecked(
            &self.base,
            Tensor4::from_vec(self.base.dim(), v.as_slice().to_vec()).expect("d^4 entries"),
        )
    }

    /// Frobenius-orthogonal projection onto the curvature space.
    pub fn project(&self, t: &Tensor4) -> Result<CurvatureTensor> {
        self.base.check_dim(t.dim())?;
        Ok(self.from_coordinates(&self.coordinates(t)))
    }

    /// The projector as a dense `d^4 x d^4` matrix. Memory grows as `d^8`;
    /// intended for small dimensions and tests.
    pub fn projector_matrix(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Projection of a random array with entries uniform in `[-1, 1]`,
    /// normalised to Frobenius norm one. Redraws in the (practically
    /// impossible) event that the projection is shorter than `1e-3`.
    pub fn random(&self, seed: u64) -> CurvatureTensor {
        let d = self.base.dim();
        let mut rng = seeded_rng(seed);
        loop {
            let v = uniform_vector(&mut rng, d * d * d * d);
            let c = self.basis.tr_mul(&v);
            let norm = c.norm();
            if norm >= 1e-3 {
                return self.from_coordinates(&(c / norm));
            }
        }
    }
}

/// Orthonormal coordinates on tensors antisymmetric in `(a,b)` and
/// antisymmetric (pseudo) or symmetric (symplectic) in `(c,d)`.
fn pair_coordinates(kind: Kind, d: usize) -> Vec<Coordinate> {
    let flat = |a: usize, b: usize, c: usize, e: usize| ((a * d + b) * d + c) * d + e;
    let mut coords = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            for c in 0..d {
                let start = match kind {
                    Kind::PseudoRiemannian => c + 1,
                    Kind::Symplectic => c,
                };
                for e in start..d {
                    if c == e {
                        let w = core::f64::consts::FRAC_1_SQRT_2;
                        coords.push(vec![(flat(a, b, c, c), w), (flat(b, a, c, c), -w)]);
                    } else {
                        let s = match kind {
                            Kind::PseudoRiemannian => -0.5,
                            Kind::Symplectic => 0.5,
                        };
                        coords.push(vec![
                            (flat(a, b, c, e), 0.5),
                            (flat(b, a, c, e), -0.5),
                            (flat(a, b, e, c), s),
                            (flat(b, a, e, c), -s),
                        ]);
                    }
                }
            }
        }
    }
    coords
}

/// Rows: cyclic sums `R[xyze] + R[yzxe] + R[zxye]` for `x < y < z` and any
/// `e`; for tensors antisymmetric in the first pair these are totally
/// antisymmetric in `(x,y,z)`, so sorted triples suffice.
fn bianchi_constraints(d: usize, coords: &[Coordinate]) -> DMatrix<f64> {
    let mut triple = vec![usize::MAX; d * d * d];
    let mut count = 0;
    for x in 0..d {
        for y in x + 1..d {
            for z in y + 1..d {
                triple[(x * d + y) * d + z] = count;
                count += 1;
            }
        }
    }
    let mut c = DMatrix::zeros(count * d, coords.len());
    for (k, coord) in coords.iter().enumerate() {
        for &(flat, v) in coord {
            let e = flat % d;
            let z = (flat / d) % d;
            let y = (flat / (d * d)) % d;
            let x = flat / (d * d * d);
            // Only entries whose first three indices form a cyclic rotation
            // of a sorted triple appear in a row; their antisymmetric
            // partners are accounted for by the same row with opposite sign.
            let sorted = if x < y && y < z {
                Some((x, y, z))
            } else if y < z && z < x {
                Some((y, z, x))
            } else if z < x && x < y {
                Some((z, x, y))
            } else {
                None
            };
            if let Some((p, q, r)) = sorted {
                let row = triple[(p * d + q) * d + r] * d + e;
                c[(row, k)] += v;
            }
        }
    }
    c
}

/// Orthonormal basis (columns) of the right kernel of `c`.
fn kernel_basis(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let cols = c.ncols();
    if c.nrows() == 0 {
        return Ok(DMatrix::identity(cols, cols));
    }
    let qr = c.transpose().col_piv_qr();
    let r = qr.r();
    let diag_max = r.diagonal().amax();
    let rank = r.diagonal().iter().filter(|x| x.abs() > 1e-9 * diag_max).count();
    let mut qt = DMatrix::identity(cols, cols);
    qr.q_tr_mul(&mut qt);
    let kernel = qt.rows(rank, cols - rank).transpose();
    let residual = (c * &kernel).amax();
    if residual > 1e-10 {
        return Err(Error::Degenerate(alloc::format!("kernel residual {residual:e}")));
    }
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::invariant_residual;

    fn structures() -> Vec<BilinearStructure> {
        vec![
            BilinearStructure::pseudo(2, 0, false).unwrap(),
            BilinearStructure::pseudo(1, 1, false).unwrap(),
            BilinearStructure::pseudo(2, 1, false).unwrap(),
            BilinearStructure::symplectic(2).unwrap(),
            BilinearStructure::symplectic(3).unwrap(),
        ]
    }

    #[test]
    fn dimensions_match_formulas() {
        for base in structures() {
            let space = CurvatureSpace::new(&base).unwrap();
            assert_eq!(space.dim(), CurvatureSpace::expected_dimension(&base));
        }
        assert_eq!(CurvatureSpace::expected_dimension(&BilinearStructure::pseudo(2, 0, false).unwrap()), 20);
        assert_eq!(CurvatureSpace::expected_dimension(&BilinearStructure::symplectic(2).unwrap()), 45);
        assert!(matches!(
            CurvatureSpace::new(&BilinearStructure::pseudo(6, 0, false).unwrap()),
            Err(Error::DimensionTooLarge { dim: 12, .. })
        ));
    }

    #[test]
    fn projector_is_orthogonal_and_idempotent() {
        for base in structures().into_iter().filter(|b| b.dim() == 4) {
            let space = CurvatureSpace::new(&base).unwrap();
            let p = space.projector_matrix();
            assert!((&p * &p - &p).amax() < 1e-12);
            assert!((&p - p.transpose()).amax() < 1e-14);
        }
    }

    #[test]
    fn random_tensors_satisfy_identities() {
        for base in structures() {
            let space = CurvatureSpace::new(&base).unwrap();
            let a = space.random(1);
            let b = space.random(2);
            assert!(invariant_residual(base.kind(), a.tensor()) < 1e-12);
            assert!((a.norm() - 1.0).abs() < 1e-12);
            assert!((a.tensor() - b.tensor()).norm() > 1e-6);
            let again = space.project(a.tensor()).unwrap();
            assert!((again.tensor() - a.tensor()).max_abs() < 1e-12);
            assert_eq!(space.project(&Tensor4::zeros(base.dim())).unwrap().norm(), 0.0);
        }
    }
}
