//! Dense rank-4 covariant tensors on `R^d`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Components `T[a][b][c][d]` stored row-major (last index fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        data.push(f(a, b, c, d));
                    }
                }
            }
        }
        Self { dim, data }
    }

    pub fn from_vec(dim: usize, data: Vec<f64>) -> Result<Self> {
        let expected = dim * dim * dim * dim;
        if data.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn offset(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(x, y)| x * y).sum()
    }

    /// Tensor with permuted slots: `out[i0,i1,i2,i3] = self[i_{p0}, i_{p1}, i_{p2}, i_{p3}]`.
    pub fn permuted(&self, p: [usize; 4]) -> Self {
        Self::from_fn(self.dim, |a, b, c, d| {
            let i = [a, b, c, d];
            self[[i[p[0]], i[p[1]], i[p[2]], i[p[3]]]]
        })
    }

    /// Pullback by a linear map: `out(X,Y,Z,T) = self(AX, AY, AZ, AT)`.
    pub fn pullback(&self, a: &DMatrix<f64>) -> Self {
        let mut t = self.clone();
        for slot in 0..4 {
            t = t.mode_product(a, slot);
        }
        t
    }

    /// `out[..i..] = sum_k self[..k..] A[k][i]` in the given slot.
    fn mode_product(&self, a: &DMatrix<f64>, slot: usize) -> Self {
        let d = self.dim;
        let stride = d.pow(3 - slot as u32);
        let mut out = Self::zeros(d);
        for (pos, slot_out) in out.data.iter_mut().enumerate() {
            let i = (pos / stride) % d;
            let base = pos - i * stride;
            let mut acc = 0.0;
            for k in 0..d {
                acc += self.data[base + k * stride] * a[(k, i)];
            }
            *slot_out = acc;
        }
        out
    }

    /// Sum over slots of the tensor with that slot pulled back by `m`:
    /// `out(X,Y,Z,T) = T(mX,Y,Z,T) + T(X,mY,Z,T) + T(X,Y,mZ,T) + T(X,Y,Z,mT)`.
    pub fn derivation(&self, m: &DMatrix<f64>) -> Self {
        let mut out = Self::zeros(self.dim);
        for slot in 0..4 {
            out += &self.mode_product(m, slot);
        }
        out
    }

    /// `M[c][d] = sum_{a,b} T[a][b][c][d] x^a y^b`.
    pub fn contract_front(&self, x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim;
        let mut m = DMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let w = x[a] * y[b];
                if w == 0.0 {
                    continue;
                }
                let base = (a * d + b) * d * d;
                for c in 0..d {
                    for e in 0..d {
                        m[(c, e)] += w * self.data[base + c * d + e];
                    }
                }
            }
        }
        m
    }

    /// `out[a][b] = sum_{c,d} T[a][b][c][d] m[c][d]`.
    pub fn contract_back(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |a, b| {
            let base = (a * d + b) * d * d;
            let mut acc = 0.0;
            for c in 0..d {
                for e in 0..d {
                    acc += self.data[base + c * d + e] * m[(c, e)];
                }
            }
            acc
        })
    }

    /// `out[a][c] = sum_{b,d} T[a][b][c][d] m[d][b]`.
    pub fn contract_middle(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |a, c| {
            let mut acc = 0.0;
            for b in 0..d {
                for e in 0..d {
                    acc += self[[a, b, c, e]] * m[(e, b)];
                }
            }
            acc
        })
    }

    /// `out[a][b][c][d] = x[a][b] y[c][d]`.
    pub fn outer(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Self {
        Self::from_fn(x.nrows(), |a, b, c, d| x[(a, b)] * y[(c, d)])
    }

    pub fn scale_mut(&mut self, s: f64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        self.data.iter_mut().zip(&other.data).for_each(|(x, y)| *x += s * y);
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.data)
    }
}

impl Index<[usize; 4]> for Tensor4 {
    type Output = f64;

    #[inline]
    fn index(&self, [a, b, c, d]: [usize; 4]) -> &f64 {
        &self.data[self.offset(a, b, c, d)]
    }
}

impl IndexMut<[usize; 4]> for Tensor4 {
    #[inline]
    fn index_mut(&mut self, [a, b, c, d]: [usize; 4]) -> &mut f64 {
        let o = self.offset(a, b, c, d);
        &mut self.data[o]
    }
}

impl AddAssign<&Tensor4> for Tensor4 {
    fn add_assign(&mut self, rhs: &Tensor4) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&Tensor4> for Tensor4 {
    fn sub_assign(&mut self, rhs: &Tensor4) {
        self.axpy(-1.0, rhs);
    }
}

impl Add<&Tensor4> for &Tensor4 {
    type Output = Tensor4;
    fn add(self, rhs: &Tensor4) -> Tensor4 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Tensor4> for &Tensor4 {
    type Output = Tensor4;
    fn sub(self, rhs: &Tensor4) -> Tensor4 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<f64> for &Tensor4 {
    type Output = Tensor4;
    fn mul(self, s: f64) -> Tensor4 {
        let mut out = self.clone();
        out.scale_mut(s);
        out
    }
}

impl Mul<f64> for Tensor4 {
    type Output = Tensor4;
    fn mul(mut self, s: f64) -> Tensor4 {
        self.scale_mut(s);
        self
    }
}

impl Neg for &Tensor4 {
    type Output = Tensor4;
    fn neg(self) -> Tensor4 {
        self * -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{seeded_rng, uniform_matrix};

    fn random(dim: usize, seed: u64) -> Tensor4 {
        let mut rng = seeded_rng(seed);
        let m = uniform_matrix(&mut rng, dim * dim, dim * dim);
        Tensor4::from_vec(dim, m.as_slice().to_vec()).unwrap()
    }

    #[test]
    fn pullback_matches_naive_sum() {
        let t = random(3, 1);
        let a = uniform_matrix(&mut seeded_rng(2), 3, 3);
        let p = t.pullback(&a);
        let naive = Tensor4::from_fn(3, |x, y, z, w| {
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            acc += a[(i, x)] * a[(j, y)] * a[(k, z)] * a[(l, w)] * t[[i, j, k, l]];
                        }
                    }
                }
            }
            acc
        });
        assert!((&p - &naive).max_abs() < 1e-12);
    }

    #[test]
    fn pullback_by_identity_is_noop() {
        let t = random(4, 3);
        assert!((&t.pullback(&DMatrix::identity(4, 4)) - &t).max_abs() == 0.0);
    }

    #[test]
    fn permutation_round_trip() {
        let t = random(3, 4);
        let p = t.permuted([2, 0, 3, 1]);
        assert_eq!(p[[0, 1, 2, 0]], t[[2, 0, 0, 1]]);
        assert_eq!(t.permuted([1, 0, 2, 3]).permuted([1, 0, 2, 3]), t);
    }

    #[test]
    fn derivation_is_linearised_pullback() {
        let t = random(3, 5);
        let m = uniform_matrix(&mut seeded_rng(6), 3, 3);
        let eps = 1e-6;
        let a = DMatrix::identity(3, 3) + &m * eps;
        let fd = (&t.pullback(&a) - &t) * (1.0 / eps);
        assert!((&fd - &t.derivation(&m)).max_abs() < 1e-4);
    }

    #[test]
    fn contractions_agree_with_indices() {
        let t = random(3, 7);
        let x = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let y = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let m = t.contract_front(&x, &y);
        assert_eq!(m[(1, 2)], t[[0, 2, 1, 2]]);
        let id = DMatrix::identity(3, 3);
        let back = t.contract_back(&id);
        assert!((back[(0, 1)] - (0..3).map(|c| t[[0, 1, c, c]]).sum::<f64>()).abs() < 1e-15);
        let mid = t.contract_middle(&id);
        assert!((mid[(2, 0)] - (0..3).map(|b| t[[2, b, 0, b]]).sum::<f64>()).abs() < 1e-15);
    }
}
