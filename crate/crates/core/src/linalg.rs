//! Small dense linear-algebra helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used for every seeded draw in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent entries uniform in `[-1, 1]`.
pub fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

pub fn uniform_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-1.0..=1.0))
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// The argument is scaled until its 1-norm is at most 1/2, where 24 Taylor
/// terms are far below double precision.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm of a non-square matrix");
    let n = a.nrows();
    let norm1 = (0..n).map(|c| a.column(c).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm1 * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * scale;
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &x / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Singular values sorted in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values strictly above `threshold`.
pub fn rank_above(m: &DMatrix<f64>, threshold: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > threshold).count()
}

/// Orthonormal basis of the right kernel of `c`.
///
/// With `expected = Some(k)` the `k` right singular vectors of smallest
/// singular value are returned, after checking that they are negligible
/// (`<= rel * sigma_max`) and that the next one is not. Without it the kernel
/// is everything below `rel * sigma_max`. Returns `None` when the gap test
/// fails.
pub fn right_kernel(c: &DMatrix<f64>, expected: Option<usize>, rel: f64) -> Option<Vec<DVector<f64>>> {
    let cols = c.ncols();
    // Pad to at least square so that the SVD yields a full right basis.
    let padded = if c.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (c.nrows(), cols)).copy_from(c);
        p
    } else {
        c.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let sigma_max = order.last().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let cutoff = rel * sigma_max.max(f64::MIN_POSITIVE);
    let k = match expected {
        Some(k) => {
            if k > order.len() {
                return None;
            }
            if k > 0 && svd.singular_values[order[k - 1]] > cutoff {
                return None;
            }
            if k < order.len() && svd.singular_values[order[k]] <= cutoff {
                return None;
            }
            k
        }
        None => order.iter().take_while(|&&i| svd.singular_values[i] <= cutoff).count(),
    };
    Some(order[..k].iter().map(|&i| v_t.row(i).transpose()).collect())
}

/// Residual `|A^T G A - G|_F`.
pub fn form_residual(a: &DMatrix<f64>, g: &DMatrix<f64>) -> f64 {
    (a.transpose() * g * a - g).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(5, 5);
        assert_eq!(expm(&z), DMatrix::identity(5, 5));
    }

    #[test]
    fn expm_rotation_generator() {
        let t = 2.7_f64;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&a);
        let expected = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!((e - expected).norm() < 1e-14);
    }

    #[test]
    fn expm_diagonal_large_norm() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(alloc::vec![3.0, -4.0, 0.5]));
        let e = expm(&a);
        for (i, x) in [3.0_f64, -4.0, 0.5].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() < 1e-13 * x.exp().max(1.0));
        }
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let c = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = right_kernel(&c, Some(2), 1e-12).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&c * v).norm() < 1e-14);
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
        assert!(right_kernel(&c, Some(1), 1e-12).is_none());
    }
}
