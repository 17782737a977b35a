//! Nijenhuis tensors of `J+` and `J-` for torsion-free connections.

use nalgebra::{DMatrix, DVector};

use super::check_same_space;
use crate::curvature::{endomorphism_of, CurvatureTensor};
use crate::linalg::{rank_above, seeded_rng, singular_values, uniform_vector};
use crate::spaces::{vertical_basis, ComplexStructure, TwistorTangent};
use crate::{Error, Result, Tolerances};

/// Which almost complex structure: `J+` acts as `j` on horizontals, `J-`
/// as `-j`. Both act by `S -> j S` on verticals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Plus => "J+",
            Sign::Minus => "J-",
        }
    }
}

fn commutator_with(m: &DMatrix<f64>, j: &DMatrix<f64>) -> DMatrix<f64> {
    m * j - j * m
}

/// Vertical part of `N(X, X')` for horizontal arguments:
/// `-[R(jX,jX'),j] +- j[R(jX,X'),j] +- j[R(X,jX'),j] + [R(X,X'),j]`.
pub fn vertical_nijenhuis(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    sign: Sign,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    check_same_space(r, j)?;
    let jm = j.matrix();
    let s = sign.value();
    let jx = jm * x;
    let jy = jm * y;
    let e = |a: &DVector<f64>, b: &DVector<f64>| commutator_with(&endomorphism_of(r, a, b), jm);
    let mixed = e(&jx, y) + e(x, &jy);
    Ok(e(x, y) - e(&jx, &jy) + jm * mixed * s)
}

/// `N(Xi, Xi')` extended bilinearly over horizontal and vertical parts.
///
/// Two verticals give zero; a vertical `S` against a horizontal `Y` gives the
/// horizontal vector `2 S(jY)` for `J-` and zero for `J+`; two horizontals
/// give the vertical part [`vertical_nijenhuis`].
pub fn nijenhuis(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    sign: Sign,
    a: &TwistorTangent,
    b: &TwistorTangent,
) -> Result<TwistorTangent> {
    let vertical = vertical_nijenhuis(r, j, sign, &a.horizontal, &b.horizontal)?;
    let horizontal = match sign {
        Sign::Plus => DVector::zeros(j.dim()),
        Sign::Minus => {
            let jm = j.matrix();
            (&a.vertical * (jm * &b.horizontal) - &b.vertical * (jm * &a.horizontal)) * 2.0
        }
    };
    Ok(TwistorTangent { horizontal, vertical })
}

/// Rank of the span of sampled Nijenhuis values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanReport {
    /// Numerical rank of all sampled values.
    pub rank: usize,
    /// Rank of their horizontal projections.
    pub horizontal_rank: usize,
    /// `2n`.
    pub horizontal_dim: usize,
    /// `dim T_j J = 2n + dim V_j`.
    pub tangent_dim: usize,
    pub samples: usize,
    /// Largest Frobenius norm of a sampled value.
    pub max_value_norm: f64,
}

impl SpanReport {
    /// The image contains the whole horizontal space.
    pub fn contains_horizontal(&self) -> bool {
        self.horizontal_rank == self.horizontal_dim
    }
}

/// Samples `sample_count` random argument pairs (horizontal parts uniform in
/// `[-1, 1]`, vertical parts uniform combinations of the vertical basis) and
/// returns the numerical rank of the values. Singular values count when they
/// exceed both `tol.rank * sigma_max` and `tol.structural_zero * |R|`.
pub fn nijenhuis_span(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    sign: Sign,
    sample_count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SpanReport> {
    let basis = vertical_basis(j)?;
    let d = j.dim();
    let m = basis.len();
    let tangent_dim = d + m;
    if sample_count < tangent_dim {
        return Err(Error::TooFewSamples { needed: tangent_dim, got: sample_count });
    }
    let mut rng = seeded_rng(seed);
    let random_tangent = |rng: &mut rand_chacha::ChaCha8Rng| {
        let x = uniform_vector(rng, d);
        let c = uniform_vector(rng, m);
        let mut s = DMatrix::zeros(d, d);
        for (k, b) in basis.iter().enumerate() {
            s += b * c[k];
        }
        TwistorTangent { horizontal: x, vertical: s }
    };
    let mut values = DMatrix::zeros(tangent_dim, sample_count);
    let mut max_value_norm = 0.0_f64;
    for col in 0..sample_count {
        let a = random_tangent(&mut rng);
        let b = random_tangent(&mut rng);
        let n = nijenhuis(r, j, sign, &a, &b)?;
        max_value_norm = max_value_norm.max(n.norm());
        for i in 0..d {
            values[(i, col)] = n.horizontal[i];
        }
        for (k, sb) in basis.iter().enumerate() {
            values[(d + k, col)] = sb.dot(&n.vertical);
        }
    }
    let floor = tol.structural_zero * r.norm();
    let threshold = |m: &DMatrix<f64>| {
        let smax = singular_values(m).first().copied().unwrap_or(0.0);
        (tol.rank * smax).max(floor)
    };
    let rank = rank_above(&values, threshold(&values));
    let horizontal = values.rows(0, d).into_owned();
    let horizontal_rank = rank_above(&horizontal, threshold(&horizontal));
    Ok(SpanReport { rank, horizontal_rank, horizontal_dim: d, tangent_dim, samples: sample_count, max_value_norm })
}

/// `rho` with `Omega(rho X, Y) = r(X, Y)`.
pub fn rho_from_ricci(ric: &DMatrix<f64>, omega: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let inv = omega.clone().try_inverse().ok_or_else(|| Error::Degenerate("symplectic form is singular".into()))?;
    Ok((ric * inv).transpose())
}

/// Closed form of the vertical Nijenhuis tensor of `J-` for a curvature of
/// Ricci type with Ricci endomorphism `rho`:
/// `-1/(n+1) [j, -X (x) B Y - BY (x) X + Y (x) BX + BX (x) Y]` where
/// `B = rho - j rho j` and `U (x) W` is the endomorphism `Z -> omega(U, Z) W`.
pub fn ricci_type_vertical_image(
    rho: &DMatrix<f64>,
    j: &ComplexStructure,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    let base = j.base();
    base.require_symplectic()?;
    let jm = j.matrix();
    let om = base.g();
    let b = rho - jm * rho * jm;
    let tens = |u: &DVector<f64>, w: &DVector<f64>| w * (u.transpose() * om);
    let by = &b * y;
    let bx = &b * x;
    let inner = tens(y, &bx) + tens(&bx, y) - tens(x, &by) - tens(&by, x);
    let n = base.n() as f64;
    Ok((jm * &inner - &inner * jm) * (-1.0 / (n + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{build_e_of_r, constant_curvature, ricci, scalar_curvature, CurvatureSpace};
    use crate::linalg::uniform_matrix;
    use crate::spaces::{BilinearStructure, FiberSampler};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn vertical_values_are_vertical_and_antisymmetric() {
        for base in [BilinearStructure::pseudo(2, 1, false).unwrap(), BilinearStructure::symplectic(2).unwrap()] {
            let r = CurvatureSpace::new(&base).unwrap().random(1);
            let j = FiberSampler::new(&base, 4).sample(1);
            let mut rng = seeded_rng(3);
            let d = base.dim();
            let basis = vertical_basis(&j).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                let a = TwistorTangent { horizontal: uniform_vector(&mut rng, d), vertical: &basis[0] * 0.7 };
                let b = TwistorTangent { horizontal: uniform_vector(&mut rng, d), vertical: &basis[1] * -0.3 };
                let ab = nijenhuis(&r, &j, sign, &a, &b).unwrap();
                let ba = nijenhuis(&r, &j, sign, &b, &a).unwrap();
                assert!((ab.horizontal.clone() + &ba.horizontal).amax() <= 1e-12 * ab.max_abs().max(1.0));
                assert!((&ab.vertical + &ba.vertical).amax() <= 1e-12 * ab.max_abs().max(1.0));
                crate::spaces::VerticalVector::new(ab.vertical.clone(), &j, &tol()).unwrap();
            }
        }
    }

    #[test]
    fn vertical_pairs_and_mixed_terms() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let r = constant_curvature(1.0, &base).unwrap();
        let j = FiberSampler::new(&base, 1).sample(0);
        let basis = vertical_basis(&j).unwrap();
        let v0 = TwistorTangent::vertical(basis[0].clone());
        let v1 = TwistorTangent::vertical(basis[1].clone());
        for sign in [Sign::Plus, Sign::Minus] {
            assert_eq!(nijenhuis(&r, &j, sign, &v0, &v1).unwrap().max_abs(), 0.0);
        }
        let e1 = DVector::from_fn(4, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let y = TwistorTangent::horizontal(e1.clone());
        let minus = nijenhuis(&r, &j, Sign::Minus, &v0, &y).unwrap();
        assert!((&minus.horizontal - &basis[0] * (j.matrix() * &e1) * 2.0).amax() < 1e-14);
        assert_eq!(minus.vertical.amax(), 0.0);
        assert_eq!(nijenhuis(&r, &j, Sign::Plus, &v0, &y).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn sphere_closed_form() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let r = constant_curvature(1.0, &base).unwrap();
        let scal = scalar_curvature(&r).unwrap();
        let n = 2.0;
        let mut rng = seeded_rng(8);
        for j in FiberSampler::new(&base, 6).samples(4) {
            let x = uniform_vector(&mut rng, 4);
            let y = uniform_vector(&mut rng, 4);
            // g(Y, .) X - g(X, .) Y
            let m = &x * (base.g() * &y).transpose() - &y * (base.g() * &x).transpose();
            let jm = j.matrix();
            let expected = (jm * &m - &m * jm) * (2.0 * scal / (n * (2.0 * n - 1.0)));
            let minus = vertical_nijenhuis(&r, &j, Sign::Minus, &x, &y).unwrap();
            assert!((minus - expected).amax() < 1e-12);
            assert!(vertical_nijenhuis(&r, &j, Sign::Plus, &x, &y).unwrap().amax() < 1e-12);
        }
    }

    #[test]
    fn span_dimensions() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let j = FiberSampler::new(&base, 2).sample(0);
        let flat = CurvatureTensor::zero(&base);
        let rep = nijenhuis_span(&flat, &j, Sign::Plus, 12, 1, &tol()).unwrap();
        assert_eq!(rep.rank, 0);
        let sphere = constant_curvature(1.0, &base).unwrap();
        let rep = nijenhuis_span(&sphere, &j, Sign::Minus, 12, 1, &tol()).unwrap();
        assert_eq!((rep.rank, rep.tangent_dim), (6, 6));
        assert!(rep.contains_horizontal());
        let rep = nijenhuis_span(&flat, &j, Sign::Minus, 12, 1, &tol()).unwrap();
        assert!(rep.contains_horizontal());
        assert!(matches!(nijenhuis_span(&flat, &j, Sign::Minus, 3, 1, &tol()), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn ricci_type_closed_form_matches_direct() {
        for n in 2..=3 {
            let base = BilinearStructure::symplectic(n).unwrap();
            let d = 2 * n;
            let m = uniform_matrix(&mut seeded_rng(n as u64), d, d);
            let r = &m + m.transpose();
            let e = build_e_of_r(&r, &base).unwrap();
            let rho = rho_from_ricci(&ricci(&e), base.g()).unwrap();
            let mut rng = seeded_rng(10);
            for j in FiberSampler::new(&base, 4).samples(3) {
                let x = uniform_vector(&mut rng, d);
                let y = uniform_vector(&mut rng, d);
                let closed = ricci_type_vertical_image(&rho, &j, &x, &y).unwrap();
                let direct = vertical_nijenhuis(&e, &j, Sign::Minus, &x, &y).unwrap();
                assert!((&closed - &direct).amax() <= 1e-9 * direct.amax().max(1.0));
            }
            let zero = DMatrix::zeros(d, d);
            let j = FiberSampler::new(&base, 4).sample(0);
            let x = uniform_vector(&mut rng, d);
            assert_eq!(ricci_type_vertical_image(&zero, &j, &x, &x).unwrap().amax(), 0.0);
        }
    }
}
