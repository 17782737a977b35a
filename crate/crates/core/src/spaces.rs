//! Model tangent spaces, compatible complex structures and the twistor fibre.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::linalg::{expm, form_residual, right_kernel, seeded_rng};
use crate::{Error, Result, Tolerances};

/// Which kind of bilinear form the model space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    PseudoRiemannian,
    Symplectic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::PseudoRiemannian => "pseudo_riemannian",
            Kind::Symplectic => "symplectic",
        }
    }
}

/// `V = R^{2n}` with its standard form: `blockdiag(I_{p,q}, I_{p,q})` in the
/// pseudo-Riemannian case, `[[0, I], [-I, 0]]` in the symplectic case.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearStructure {
    kind: Kind,
    n: usize,
    p: usize,
    q: usize,
    oriented: bool,
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
}

impl BilinearStructure {
    /// Pseudo-Riemannian structure of signature `(2p, 2q)`.
    pub fn pseudo(p: usize, q: usize, oriented: bool) -> Result<Self> {
        let n = p + q;
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let s = if i < p { 1.0 } else { -1.0 };
            g[(i, i)] = s;
            g[(n + i, n + i)] = s;
        }
        let g_inv = g.clone();
        Ok(Self { kind: Kind::PseudoRiemannian, n, p, q, oriented, g, g_inv })
    }

    /// Standard symplectic structure on `R^{2n}`.
    pub fn symplectic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            g[(i, n + i)] = 1.0;
            g[(n + i, i)] = -1.0;
        }
        let g_inv = -&g;
        Ok(Self { kind: Kind::Symplectic, n, p: 0, q: 0, oriented: false, g, g_inv })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Half-dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Signature halves `(p, q)`; `(0, 0)` for symplectic structures.
    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn oriented(&self) -> bool {
        self.oriented
    }

    /// Gram matrix of the form.
    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn g_inv(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    /// `G(x, y)`.
    pub fn pair(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.g * y))
    }

    fn require(&self, kind: Kind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongKind(kind.name()))
        }
    }

    pub(crate) fn require_pseudo(&self) -> Result<()> {
        self.require(Kind::PseudoRiemannian)
    }

    pub(crate) fn require_symplectic(&self) -> Result<()> {
        self.require(Kind::Symplectic)
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), got })
        }
    }
}

/// Builds the standard structure. `n` is only read for symplectic structures.
pub fn standard_structure(kind: Kind, p: usize, q: usize, n: usize, oriented: bool) -> Result<BilinearStructure> {
    match kind {
        Kind::PseudoRiemannian => BilinearStructure::pseudo(p, q, oriented),
        Kind::Symplectic => BilinearStructure::symplectic(n),
    }
}

/// `j0 = [[0, -I], [I, 0]]`.
pub fn j0_matrix(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(n + i, i)] = 1.0;
        j[(i, n + i)] = -1.0;
    }
    j
}

/// A compatible complex structure on the model space: a point of the fibre.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    j: DMatrix<f64>,
    base: BilinearStructure,
}

impl ComplexStructure {
    /// Validates `j` against every invariant relevant to `base`.
    pub fn new(j: DMatrix<f64>, base: &BilinearStructure, tol: &Tolerances) -> Result<Self> {
        let report = compatibility_check(&j, base, tol)?;
        if !report.passes() {
            return Err(Error::NotComplexStructure(format!("{report:?}")));
        }
        Ok(Self { j, base: base.clone() })
    }

    pub(crate) fn new_unchecked(j: DMatrix<f64>, base: &BilinearStructure) -> Self {
        Self { j, base: base.clone() }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn base(&self) -> &BilinearStructure {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

/// The reference point `j0` of the fibre.
pub fn standard_j0(base: &BilinearStructure) -> ComplexStructure {
    ComplexStructure::new_unchecked(j0_matrix(base.n()), base)
}

/// Outcome of [`compatibility_check`]. Residuals are scaled by `max(1, |J|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Compatibility {
    pub is_complex: bool,
    pub is_compatible: bool,
    /// Symplectic only: `G J` is symmetric positive definite.
    pub is_positive: Option<bool>,
    /// Oriented pseudo-Riemannian only.
    pub orientation: Option<i8>,
    pub complex_residual: f64,
    pub compatibility_residual: f64,
}

impl Compatibility {
    pub fn passes(&self) -> bool {
        self.is_complex
            && self.is_compatible
            && self.is_positive.unwrap_or(true)
            && self.orientation.is_none_or(|o| o == 1)
    }
}

pub fn compatibility_check(j: &DMatrix<f64>, base: &BilinearStructure, tol: &Tolerances) -> Result<Compatibility> {
    if !j.is_square() {
        return Err(Error::DimensionMismatch { expected: base.dim(), got: j.ncols().max(j.nrows()) });
    }
    base.check_dim(j.nrows())?;
    let d = base.dim();
    let scale = j.norm_squared().max(1.0);
    let complex_residual = (j * j + DMatrix::identity(d, d)).norm() / scale;
    let compatibility_residual = form_residual(j, base.g()) / scale;
    let is_complex = complex_residual <= tol.identity;
    let is_compatible = compatibility_residual <= tol.identity;
    let mut is_positive = None;
    let mut orientation = None;
    match base.kind() {
        Kind::Symplectic => {
            let gj = base.g() * j;
            let sym = (&gj + gj.transpose()) * 0.5;
            let min = sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
            is_positive = Some(min > 0.0);
        }
        Kind::PseudoRiemannian if base.oriented() && is_complex => {
            orientation = Some(orientation_class(j, base)?);
        }
        Kind::PseudoRiemannian => {}
    }
    Ok(Compatibility { is_complex, is_compatible, is_positive, orientation, complex_residual, compatibility_residual })
}

/// Random element of the Lie algebra of the structure group: `G^{-1} K` with
/// `K` antisymmetric (pseudo) or symmetric (symplectic), independent entries
/// uniform in `[-1, 1]`.
pub fn random_algebra_element<R: Rng + ?Sized>(base: &BilinearStructure, rng: &mut R) -> DMatrix<f64> {
    let d = base.dim();
    let mut k = DMatrix::zeros(d, d);
    let sign = match base.kind() {
        Kind::PseudoRiemannian => -1.0,
        Kind::Symplectic => 1.0,
    };
    for a in 0..d {
        for b in a..d {
            if a == b && sign < 0.0 {
                continue;
            }
            let u: f64 = rng.random_range(-1.0..=1.0);
            k[(a, b)] = u;
            k[(b, a)] = sign * u;
        }
    }
    base.g_inv() * k
}

/// `exp(xi)` for a seeded random algebra element `xi`; lies in the identity
/// component of the structure group.
pub fn random_group_element(base: &BilinearStructure, seed: u64) -> DMatrix<f64> {
    expm(&random_algebra_element(base, &mut seeded_rng(seed)))
}

/// `A j A^{-1}`, validated as a compatible complex structure.
pub fn conjugate_j(a: &DMatrix<f64>, j: &ComplexStructure, tol: &Tolerances) -> Result<ComplexStructure> {
    j.base().check_dim(a.nrows())?;
    let inv =
        a.clone().try_inverse().ok_or_else(|| Error::Degenerate(format!("group element of size {}", a.nrows())))?;
    ComplexStructure::new(a * j.matrix() * inv, j.base(), tol)
}

/// Conjugation without validation, for group elements known to preserve the
/// structure.
pub(crate) fn conjugate_unchecked(a: &DMatrix<f64>, a_inv: &DMatrix<f64>, j: &ComplexStructure) -> ComplexStructure {
    ComplexStructure::new_unchecked(a * j.matrix() * a_inv, j.base())
}

/// Expected dimension of the vertical space: `n(n-1)` or `n(n+1)`.
pub fn vertical_dimension(base: &BilinearStructure) -> usize {
    let n = base.n();
    match base.kind() {
        Kind::PseudoRiemannian => n * (n - 1),
        Kind::Symplectic => n * (n + 1),
    }
}

/// Frobenius-orthonormal basis of `{S : SJ + JS = 0, S^T G + G S = 0}`.
pub fn vertical_basis(j: &ComplexStructure) -> Result<Vec<DMatrix<f64>>> {
    let base = j.base();
    let d = base.dim();
    let jm = j.matrix();
    let g = base.g();
    // Column-major vec(S): S[(r, c)] sits at c * d + r.
    let mut c = DMatrix::zeros(2 * d * d, d * d);
    for r in 0..d {
        for col in 0..d {
            let row = r * d + col;
            for k in 0..d {
                // (SJ + JS)[r, col] = sum_k S[r,k] J[k,col] + J[r,k] S[k,col]
                c[(row, k * d + r)] += jm[(k, col)];
                c[(row, col * d + k)] += jm[(r, k)];
                // (S^T G + G S)[r, col] = sum_k S[k,r] G[k,col] + G[r,k] S[k,col]
                c[(d * d + row, r * d + k)] += g[(k, col)];
                c[(d * d + row, col * d + k)] += g[(r, k)];
            }
        }
    }
    let expected = vertical_dimension(base);
    let kernel = right_kernel(&c, Some(expected), 1e-9)
        .ok_or_else(|| Error::Degenerate(format!("vertical space at j is not {expected}-dimensional")))?;
    Ok(kernel.into_iter().map(|v| DMatrix::from_column_slice(d, d, v.as_slice())).collect())
}

/// Orientation class of `j`: `+1` when the orientation induced by `j`
/// matches that of `j0`, `-1` otherwise.
pub fn orientation_class(j: &DMatrix<f64>, base: &BilinearStructure) -> Result<i8> {
    let order: Vec<usize> = (0..base.dim()).collect();
    orientation_class_with_order(j, base, &order)
}

/// [`orientation_class`] with an explicit order in which standard basis
/// vectors are offered to the greedy construction. The result does not
/// depend on the order; the variant exists so this can be checked.
pub fn orientation_class_with_order(j: &DMatrix<f64>, base: &BilinearStructure, order: &[usize]) -> Result<i8> {
    base.require_pseudo()?;
    base.check_dim(j.nrows())?;
    let reference = adapted_basis_sign(&j0_matrix(base.n()), order)?;
    Ok(adapted_basis_sign(j, order)? * reference)
}

/// Sign of `det[v1, j v1, ..., vn, j vn]` for a complex basis chosen
/// greedily from the standard basis. Any two complex bases differ by an
/// element of `GL(n, C)`, which has positive real determinant.
fn adapted_basis_sign(j: &DMatrix<f64>, order: &[usize]) -> Result<i8> {
    let d = j.nrows();
    let mut basis = DMatrix::<f64>::zeros(d, 0);
    for &k in order {
        if basis.ncols() == d {
            break;
        }
        let e = DVector::from_fn(d, |i, _| if i == k { 1.0 } else { 0.0 });
        let je = j * &e;
        let cols = basis.ncols();
        let mut candidate = basis.clone().insert_columns(cols, 2, 0.0);
        candidate.set_column(cols, &e);
        candidate.set_column(cols + 1, &je);
        // Complex independence from the previous pairs.
        let sv = candidate.clone().svd(false, false).singular_values;
        let smax = sv.max();
        if sv.min() > 1e-8 * smax.max(1.0) {
            basis = candidate;
        }
    }
    if basis.ncols() != d {
        return Err(Error::NotComplexStructure("no complex basis could be extracted".into()));
    }
    Ok(if basis.determinant() > 0.0 { 1 } else { -1 })
}

/// Frame `xi` with `xi^T gx xi` equal to the standard form of `base`.
///
/// Pseudo-Riemannian: Gram-Schmidt that always continues with the remaining
/// vector of largest `|G|`-norm, falling back to the sum of two
/// vectors when every remaining vector is nearly null. Symplectic: Darboux
/// pairing on the pair of largest `|omega|`. Pseudo-Riemannian frames are
/// made orientation preserving.
pub fn pseudo_orthonormal_frame(gx: &DMatrix<f64>, base: &BilinearStructure, tol: &Tolerances) -> Result<DMatrix<f64>> {
    base.check_dim(gx.nrows())?;
    let scale = gx.amax().max(f64::MIN_POSITIVE);
    let mut frame = match base.kind() {
        Kind::PseudoRiemannian => {
            let asym = (gx - gx.transpose()).amax();
            if asym > tol.identity * scale {
                return Err(Error::NotSymmetric(asym));
            }
            gram_schmidt(gx, base, tol.pivot * scale)?
        }
        Kind::Symplectic => {
            let sym = (gx + gx.transpose()).amax();
            if sym > tol.identity * scale {
                return Err(Error::Degenerate(format!("form is not antisymmetric ({sym:e})")));
            }
            darboux(gx, base, tol.pivot * scale)?
        }
    };
    // Symplectic frames carry the orientation of the Liouville form already.
    if base.kind() == Kind::PseudoRiemannian && frame.determinant() < 0.0 {
        let last = frame.ncols() - 1;
        frame.column_mut(last).neg_mut();
    }
    Ok(frame)
}

fn gram_schmidt(gx: &DMatrix<f64>, base: &BilinearStructure, pivot: f64) -> Result<DMatrix<f64>> {
    let d = base.dim();
    let (p, q) = base.signature();
    let mut remaining: Vec<DVector<f64>> =
        (0..d).map(|k| DVector::from_fn(d, |i, _| if i == k { 1.0 } else { 0.0 })).collect();
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let ip = |x: &DVector<f64>, y: &DVector<f64>| x.dot(&(gx * y));
    while !remaining.is_empty() {
        let (best, best_norm) = remaining
            .iter()
            .enumerate()
            .map(|(i, v)| (i, ip(v, v)))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("non-empty");
        let v = if best_norm.abs() > pivot {
            remaining.swap_remove(best)
        } else {
            // Every remaining vector is (nearly) null: combine the pair with
            // the largest mutual pairing.
            let mut pick = (0, 0, 0.0_f64);
            for a in 0..remaining.len() {
                for b in a + 1..remaining.len() {
                    let m = ip(&remaining[a], &remaining[b]);
                    if m.abs() > pick.2.abs() {
                        pick = (a, b, m);
                    }
                }
            }
            if pick.2.abs() <= pivot {
                return Err(Error::Degenerate(format!("pivot below {pivot:e}")));
            }
            let combined = &remaining[pick.0] + &remaining[pick.1];
            remaining.swap_remove(pick.0);
            combined
        };
        let norm = ip(&v, &v);
        let unit = &v / libm::sqrt(norm.abs());
        let sign = norm.signum();
        for w in remaining.iter_mut() {
            let c = ip(w, &unit) * sign;
            *w -= &unit * c;
        }
        if sign > 0.0 {
            positive.push(unit);
        } else {
            negative.push(unit);
        }
    }
    if positive.len() != 2 * p || negative.len() != 2 * q {
        return Err(Error::SignatureMismatch(format!(
            "expected ({}, {}), found ({}, {})",
            2 * p,
            2 * q,
            positive.len(),
            negative.len()
        )));
    }
    // Standard order: (p positive, q negative) twice.
    let mut cols = Vec::with_capacity(d);
    let mut pos = positive.into_iter();
    let mut neg = negative.into_iter();
    for _ in 0..2 {
        cols.extend(pos.by_ref().take(p));
        cols.extend(neg.by_ref().take(q));
    }
    Ok(DMatrix::from_columns(&cols))
}

fn darboux(gx: &DMatrix<f64>, base: &BilinearStructure, pivot: f64) -> Result<DMatrix<f64>> {
    let d = base.dim();
    let n = base.n();
    let mut remaining: Vec<DVector<f64>> =
        (0..d).map(|k| DVector::from_fn(d, |i, _| if i == k { 1.0 } else { 0.0 })).collect();
    let om = |x: &DVector<f64>, y: &DVector<f64>| x.dot(&(gx * y));
    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let mut pick = (0, 0, 0.0_f64);
        for a in 0..remaining.len() {
            for b in a + 1..remaining.len() {
                let m = om(&remaining[a], &remaining[b]);
                if m.abs() > pick.2.abs() {
                    pick = (a, b, m);
                }
            }
        }
        if pick.2.abs() <= pivot {
            return Err(Error::Degenerate(format!("symplectic pivot below {pivot:e}")));
        }
        let e = remaining[pick.0].clone();
        let f = &remaining[pick.1] / pick.2;
        remaining.swap_remove(pick.1);
        remaining.swap_remove(pick.0);
        for w in remaining.iter_mut() {
            let a = om(w, &f);
            let b = om(w, &e);
            *w += &f * b - &e * a;
        }
        es.push(e);
        fs.push(f);
    }
    es.extend(fs);
    Ok(DMatrix::from_columns(&es))
}

/// A vertical tangent vector at a fibre point `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalVector {
    s: DMatrix<f64>,
}

impl VerticalVector {
    pub fn new(s: DMatrix<f64>, at: &ComplexStructure, tol: &Tolerances) -> Result<Self> {
        at.base().check_dim(s.nrows())?;
        let jm = at.matrix();
        let g = at.base().g();
        let scale = jm.norm_squared().max(1.0) * s.norm().max(1.0);
        let anti = (&s * jm + jm * &s).norm();
        let skew = (s.transpose() * g + g * &s).norm();
        let residual = anti.max(skew) / scale;
        if residual > tol.identity {
            return Err(Error::NotComplexStructure(format!("not a vertical vector (residual {residual:e})")));
        }
        Ok(Self { s })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.s
    }
}

/// Tangent vector to the twistor space at `j`: a horizontal part in `V` and a
/// vertical endomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorTangent {
    pub horizontal: DVector<f64>,
    pub vertical: DMatrix<f64>,
}

impl TwistorTangent {
    pub fn zero(dim: usize) -> Self {
        Self { horizontal: DVector::zeros(dim), vertical: DMatrix::zeros(dim, dim) }
    }

    pub fn horizontal(x: DVector<f64>) -> Self {
        let d = x.len();
        Self { horizontal: x, vertical: DMatrix::zeros(d, d) }
    }

    pub fn vertical(s: DMatrix<f64>) -> Self {
        Self { horizontal: DVector::zeros(s.nrows()), vertical: s }
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.horizontal.norm_squared() + self.vertical.norm_squared())
    }

    pub fn max_abs(&self) -> f64 {
        self.horizontal.amax().max(self.vertical.amax())
    }
}

/// Deterministic sampler of fibre points `h_k exp(xi) j0 exp(-xi) h_k^{-1}`.
///
/// `exp(xi)` stays in the identity component of the structure group; the
/// fixed representatives `h_k` reach the other components that carry
/// compatible complex structures, so every component of the fibre is visited.
/// Sample `i` uses seed `seed ^ i` and representative `i mod #reps`.
#[derive(Debug, Clone)]
pub struct FiberSampler {
    base: BilinearStructure,
    seed: u64,
    reps: Vec<DMatrix<f64>>,
}

impl FiberSampler {
    pub fn new(base: &BilinearStructure, seed: u64) -> Self {
        let d = base.dim();
        let id = DMatrix::<f64>::identity(d, d);
        let reflect = |k: usize| {
            let mut r = id.clone();
            r[(k, k)] = -1.0;
            r
        };
        let (p, q) = base.signature();
        let reps = match base.kind() {
            Kind::Symplectic => alloc::vec![id],
            Kind::PseudoRiemannian => {
                // First positive and first negative basis vectors.
                let r_plus = (p > 0).then(|| reflect(0));
                let r_minus = (q > 0).then(|| reflect(p));
                let mut reps = alloc::vec![id];
                match (r_plus, r_minus, base.oriented()) {
                    (Some(a), Some(b), true) => reps.push(a * b),
                    (_, _, true) => {}
                    (a, b, false) => {
                        let both = match (&a, &b) {
                            (Some(a), Some(b)) => Some(a * b),
                            _ => None,
                        };
                        reps.extend(a);
                        reps.extend(b);
                        reps.extend(both);
                    }
                }
                reps
            }
        };
        Self { base: base.clone(), seed, reps }
    }

    pub fn base(&self) -> &BilinearStructure {
        &self.base
    }

    /// Group element `h_k exp(xi)` used for sample `index`.
    pub fn group_element(&self, index: usize) -> DMatrix<f64> {
        let a = random_group_element(&self.base, self.seed ^ index as u64);
        &self.reps[index % self.reps.len()] * a
    }

    pub fn sample(&self, index: usize) -> ComplexStructure {
        let h = self.group_element(index);
        let h_inv = h.clone().try_inverse().expect("group elements are invertible");
        conjugate_unchecked(&h, &h_inv, &standard_j0(&self.base))
    }

    pub fn samples(&self, count: usize) -> Vec<ComplexStructure> {
        (0..count).map(|i| self.sample(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn standard_forms() {
        let b = BilinearStructure::pseudo(2, 0, false).unwrap();
        assert_eq!(b.g(), &DMatrix::identity(4, 4));
        let b = BilinearStructure::pseudo(1, 1, false).unwrap();
        assert_eq!(b.g(), &DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 1.0, -1.0])));
        let s = BilinearStructure::symplectic(2).unwrap();
        assert_eq!(s.g()[(0, 2)], 1.0);
        assert_eq!(s.g()[(2, 0)], -1.0);
        assert_eq!(s.g() * s.g_inv(), DMatrix::identity(4, 4));
        assert!(matches!(BilinearStructure::pseudo(1, 0, false), Err(Error::DimensionTooSmall(1))));
        assert!(matches!(BilinearStructure::symplectic(1), Err(Error::DimensionTooSmall(1))));
    }

    #[test]
    fn j0_passes_every_check() {
        for base in [
            BilinearStructure::pseudo(2, 0, true).unwrap(),
            BilinearStructure::pseudo(1, 1, true).unwrap(),
            BilinearStructure::pseudo(2, 1, false).unwrap(),
            BilinearStructure::symplectic(3).unwrap(),
        ] {
            let j = standard_j0(&base);
            assert!((j.matrix() * j.matrix() + DMatrix::identity(base.dim(), base.dim())).norm() == 0.0);
            assert!(compatibility_check(j.matrix(), &base, &tol()).unwrap().passes());
        }
        let s = BilinearStructure::symplectic(2).unwrap();
        let j = standard_j0(&s);
        assert_eq!(s.g()[(0, 2)] * j.matrix()[(2, 0)], 1.0);
    }

    #[test]
    fn compatibility_failures() {
        let s = BilinearStructure::symplectic(2).unwrap();
        let id = DMatrix::identity(4, 4);
        assert!(!compatibility_check(&id, &s, &tol()).unwrap().is_complex);
        let neg = -j0_matrix(2);
        let c = compatibility_check(&neg, &s, &tol()).unwrap();
        assert!(c.is_complex && c.is_compatible);
        assert_eq!(c.is_positive, Some(false));
        assert!(!c.passes());
        assert!(compatibility_check(&DMatrix::identity(6, 6), &s, &tol()).is_err());
    }

    #[test]
    fn group_elements_preserve_the_form() {
        for base in [
            BilinearStructure::pseudo(2, 0, false).unwrap(),
            BilinearStructure::pseudo(2, 2, false).unwrap(),
            BilinearStructure::symplectic(2).unwrap(),
            BilinearStructure::symplectic(4).unwrap(),
        ] {
            for seed in 0..50 {
                let a = random_group_element(&base, seed);
                assert!(form_residual(&a, base.g()) <= 1e-9, "{base:?} {seed}");
                assert!(a.determinant() > 0.0);
            }
        }
    }

    #[test]
    fn conjugation_keeps_invariants_and_orientation() {
        let base = BilinearStructure::pseudo(1, 1, true).unwrap();
        let j0 = standard_j0(&base);
        assert_eq!(conjugate_j(&DMatrix::identity(4, 4), &j0, &tol()).unwrap(), j0);
        for seed in 0..20 {
            let a = random_group_element(&base, seed);
            let j = conjugate_j(&a, &j0, &tol()).unwrap();
            assert_eq!(orientation_class(j.matrix(), &base).unwrap(), 1);
        }
        assert!(conjugate_j(&DMatrix::zeros(4, 4), &j0, &tol()).is_err());
    }

    #[test]
    fn reflection_reverses_orientation() {
        let base = BilinearStructure::pseudo(2, 0, true).unwrap();
        let mut r = DMatrix::identity(4, 4);
        r[(3, 3)] = -1.0;
        let j = &r * j0_matrix(2) * &r;
        assert_eq!(orientation_class(&j, &base).unwrap(), -1);
        assert!(ComplexStructure::new(j, &base, &tol()).is_err());
    }

    #[test]
    fn vertical_dimensions() {
        for n in 2..=4 {
            for base in [BilinearStructure::pseudo(n, 0, false).unwrap(), BilinearStructure::symplectic(n).unwrap()] {
                let j = FiberSampler::new(&base, 9).sample(3);
                let basis = vertical_basis(&j).unwrap();
                assert_eq!(basis.len(), vertical_dimension(&base));
                for s in &basis {
                    VerticalVector::new(s.clone(), &j, &tol()).unwrap();
                }
            }
        }
        assert_eq!(vertical_dimension(&BilinearStructure::pseudo(2, 0, false).unwrap()), 2);
        assert_eq!(vertical_dimension(&BilinearStructure::symplectic(2).unwrap()), 6);
    }

    #[test]
    fn frames_reach_standard_form() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let g2 = DMatrix::identity(4, 4) * 2.0;
        let f = pseudo_orthonormal_frame(&g2, &base, &tol()).unwrap();
        assert!((f.transpose() * &g2 * &f - base.g()).norm() < 1e-12);

        // Indefinite with null standard basis vectors.
        let base = BilinearStructure::pseudo(1, 1, false).unwrap();
        let mut g = DMatrix::zeros(4, 4);
        g[(0, 1)] = 1.0;
        g[(1, 0)] = 1.0;
        g[(2, 3)] = 1.0;
        g[(3, 2)] = 1.0;
        let f = pseudo_orthonormal_frame(&g, &base, &tol()).unwrap();
        assert!((f.transpose() * &g * &f - base.g()).norm() < 1e-12);
        assert!(f.determinant() > 0.0);

        let wrong = BilinearStructure::pseudo(2, 0, false).unwrap();
        assert!(matches!(pseudo_orthonormal_frame(&g, &wrong, &tol()), Err(Error::SignatureMismatch(_))));

        let s = BilinearStructure::symplectic(2).unwrap();
        let a = random_group_element(&BilinearStructure::pseudo(2, 0, false).unwrap(), 4) * 1.7;
        let om = a.transpose() * s.g() * &a;
        let f = pseudo_orthonormal_frame(&om, &s, &tol()).unwrap();
        assert!((f.transpose() * &om * &f - s.g()).norm() < 1e-10);
    }

    #[test]
    fn sampler_covers_components() {
        let base = BilinearStructure::pseudo(2, 0, false).unwrap();
        let sampler = FiberSampler::new(&base, 1);
        let classes: Vec<i8> = (0..4)
            .map(|i| {
                orientation_class(sampler.sample(i).matrix(), &BilinearStructure::pseudo(2, 0, true).unwrap()).unwrap()
            })
            .collect();
        assert!(classes.contains(&1) && classes.contains(&-1));

        let oriented = BilinearStructure::pseudo(1, 1, true).unwrap();
        let sampler = FiberSampler::new(&oriented, 1);
        for i in 0..8 {
            assert!(compatibility_check(sampler.sample(i).matrix(), &oriented, &tol()).unwrap().passes());
        }
    }
}
