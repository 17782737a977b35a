//! Closed-form criteria checked against fibre sampling.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{four_i_component, nijenhuis_span, rho_from_ricci, two_form_nondegenerate, type11_check, Sign};
use crate::curvature::{decompose_pseudo, decompose_symplectic, sd_asd_split, CurvatureTensor};
use crate::linalg::singular_values;
use crate::spaces::{ComplexStructure, FiberSampler, Kind};
use crate::{Error, Result, Tolerances};

/// The questions a [`Verdict`] can answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Question {
    JplusIntegrable,
    JminusIntegrable,
    Type11Compatible,
    TwoFormSymplectic,
}

impl Question {
    pub fn name(self) -> &'static str {
        match self {
            Question::JplusIntegrable => "Jplus_integrable",
            Question::JminusIntegrable => "Jminus_integrable",
            Question::Type11Compatible => "type11_compatible",
            Question::TwoFormSymplectic => "two_form_symplectic",
        }
    }
}

/// Fibre sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Number of fibre points `j`.
    pub fiber_samples: usize,
    /// Argument pairs per fibre point for Nijenhuis spans; `0` means twice
    /// the tangent dimension.
    pub pair_samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { fiber_samples: 64, pair_samples: 0, seed: 0, tolerances: Tolerances::default() }
    }
}

/// Answer to a [`Question`] by the closed-form criterion and by sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub question: Question,
    /// `None` when no closed-form criterion applies.
    pub closed_form: Option<bool>,
    pub reason: String,
    pub sampled: bool,
    /// Largest obstruction seen while sampling (see each verdict function).
    pub worst_residual: f64,
    pub samples: usize,
}

impl Verdict {
    pub fn answer(&self) -> bool {
        self.closed_form.unwrap_or(self.sampled)
    }

    fn checked(self) -> Result<Self> {
        match self.closed_form {
            Some(c) if c != self.sampled => Err(Error::VerdictDisagreement {
                question: self.question,
                closed_form: c,
                sampled: self.sampled,
                worst_residual: self.worst_residual,
            }),
            _ => Ok(self),
        }
    }
}

/// Evaluates `f` for every sample index, in parallel when the `parallel`
/// feature is on. Results keep index order.
fn per_sample<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// Closed-form criterion shared by `J+` integrability and type (1,1)
/// compatibility: the Weyl part vanishes, or, for oriented four-dimensional
/// structures, the half of it that the fibre sees; in the symplectic case
/// the curvature is of Ricci type.
fn weyl_criterion(r: &CurvatureTensor, tol: &Tolerances) -> Result<(bool, String)> {
    let base = r.base();
    let threshold = tol.structural_zero * r.norm();
    match base.kind() {
        Kind::Symplectic => {
            let w = decompose_symplectic(r)?.w_part.norm();
            Ok((w <= threshold, format!("Ricci type required: |W| = {w:.3e}")))
        }
        Kind::PseudoRiemannian => {
            let c = decompose_pseudo(r)?.c_part;
            if base.oriented() && base.dim() == 4 {
                let (plus, minus) = sd_asd_split(&c, 1e-8)?;
                let (p, q) = base.signature();
                if p == 0 || q == 0 {
                    let m = minus.norm();
                    Ok((m <= threshold, format!("self-dual Weyl tensor required: |C-| = {m:.3e}")))
                } else {
                    let pl = plus.norm();
                    Ok((pl <= threshold, format!("anti-self-dual Weyl tensor required: |C+| = {pl:.3e}")))
                }
            } else {
                let n = c.norm();
                Ok((n <= threshold, format!("vanishing Weyl tensor required: |C| = {n:.3e}")))
            }
        }
    }
}

/// Integrability of `J+` or `J-`.
///
/// `J+`: the sampled residual is the largest `4i`-component norm over the
/// fibre, compared with `structural_zero * |R|`. `J-`: never integrable; the
/// sampled residual is the largest Nijenhuis value norm, and every sampled
/// span must contain the horizontal space.
pub fn integrability_verdict(r: &CurvatureTensor, sign: Sign, config: &SamplingConfig) -> Result<Verdict> {
    let tol = &config.tolerances;
    let sampler = FiberSampler::new(r.base(), config.seed);
    let count = config.fiber_samples;
    match sign {
        Sign::Plus => {
            let (closed, reason) = weyl_criterion(r, tol)?;
            let norms = per_sample(count, |i| Ok(four_i_component(r, &sampler.sample(i))?.1))?;
            let worst = max_of(&norms);
            Verdict {
                question: Question::JplusIntegrable,
                closed_form: Some(closed),
                reason,
                sampled: worst <= tol.structural_zero * r.norm(),
                worst_residual: worst,
                samples: count,
            }
            .checked()
        }
        Sign::Minus => {
            let tangent = r.dim() + crate::spaces::vertical_dimension(r.base());
            let pairs = if config.pair_samples == 0 { 2 * tangent } else { config.pair_samples };
            let spans = per_sample(count, |i| {
                nijenhuis_span(r, &sampler.sample(i), Sign::Minus, pairs, config.seed ^ (i as u64), tol)
            })?;
            let worst = spans.iter().map(|s| s.max_value_norm).fold(0.0, f64::max);
            let min_horizontal = spans.iter().map(|s| s.horizontal_rank).min().unwrap_or(0);
            Verdict {
                question: Question::JminusIntegrable,
                closed_form: Some(false),
                reason: format!(
                    "the Nijenhuis image always contains the horizontal space (minimum horizontal rank {min_horizontal} of {})",
                    r.dim()
                ),
                sampled: worst <= tol.structural_zero,
                worst_residual: worst,
                samples: count,
            }
            .checked()
        }
    }
}

/// Whether the canonical 2-form is of type (1,1) for every `j`; the sampled
/// residual is the largest `|Omega_2| / |R|`.
pub fn type11_verdict(r: &CurvatureTensor, config: &SamplingConfig) -> Result<Verdict> {
    let tol = &config.tolerances;
    let (closed, reason) = weyl_criterion(r, tol)?;
    let sampler = FiberSampler::new(r.base(), config.seed);
    let residuals = per_sample(config.fiber_samples, |i| type11_check(r, &sampler.sample(i)))?;
    let worst = max_of(&residuals);
    Verdict {
        question: Question::Type11Compatible,
        closed_form: Some(closed),
        reason,
        sampled: worst <= tol.structural_zero,
        worst_residual: worst,
        samples: config.fiber_samples,
    }
    .checked()
}

fn condition(m: &DMatrix<f64>) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

/// Whether the canonical 2-form is non-degenerate at `j`. Closed forms:
/// for constant curvature `Omega_1 = scal/(n(2n-1)) g(., j.)`, so the answer
/// is `scal != 0`; for a symplectic curvature of Ricci type it is the
/// invertibility of `Tr(rho j) Id + rho j + j rho`. Otherwise only the direct
/// computation is reported. The residual is `sigma_min / sigma_max` of the
/// horizontal block.
pub fn two_form_verdict(r: &CurvatureTensor, j: &ComplexStructure, tol: &Tolerances) -> Result<Verdict> {
    let direct = two_form_nondegenerate(r, j, tol)?;
    let norm = r.norm();
    let threshold = tol.structural_zero * norm;
    let (closed, reason) = match r.kind() {
        Kind::PseudoRiemannian => {
            let dec = decompose_pseudo(r)?;
            if dec.c_part.norm() <= threshold && dec.e_part.norm() <= threshold {
                let ok = dec.scal.abs() > threshold;
                (Some(ok), format!("constant curvature: non-degenerate iff scal != 0 (scal = {:.6e})", dec.scal))
            } else {
                (None, String::from("no closed form outside constant curvature"))
            }
        }
        Kind::Symplectic => {
            let dec = decompose_symplectic(r)?;
            if dec.w_part.norm() <= threshold {
                let rho = rho_from_ricci(&dec.ricci, r.base().g())?;
                let jm = j.matrix();
                let rj = &rho * jm;
                let m = DMatrix::identity(r.dim(), r.dim()) * rj.trace() + &rj + jm * &rho;
                let c = condition(&m);
                (Some(c >= tol.rank), format!("Ricci type: Tr(rho j) Id + rho j + j rho has condition {c:.3e}"))
            } else {
                (None, String::from("no closed form outside Ricci type"))
            }
        }
    };
    Verdict {
        question: Question::TwoFormSymplectic,
        closed_form: closed,
        reason,
        sampled: direct.nondegenerate,
        worst_residual: direct.horizontal_condition,
        samples: 1,
    }
    .checked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{build_e_of_r, constant_curvature, CurvatureSpace};
    use crate::spaces::{standard_j0, BilinearStructure};

    fn config(samples: usize) -> SamplingConfig {
        SamplingConfig { fiber_samples: samples, seed: 11, ..SamplingConfig::default() }
    }

    #[test]
    fn sphere_jplus_is_integrable_and_jminus_is_not() {
        let base = BilinearStructure::pseudo(2, 0, true).unwrap();
        let r = constant_curvature(1.0, &base).unwrap();
        let plus = integrability_verdict(&r, Sign::Plus, &config(8)).unwrap();
        assert_eq!((plus.closed_form, plus.sampled), (Some(true), true));
        let minus = integrability_verdict(&r, Sign::Minus, &config(4)).unwrap();
        assert!(!minus.answer() && minus.reason.contains("horizontal rank 4 "));
        let t11 = type11_verdict(&r, &config(8)).unwrap();
        assert!(t11.answer());
    }

    #[test]
    fn generic_tensor_fails_both_ways() {
        let base = BilinearStructure::pseudo(2, 1, false).unwrap();
        let r = CurvatureSpace::new(&base).unwrap().random(4);
        let plus = integrability_verdict(&r, Sign::Plus, &config(6)).unwrap();
        assert_eq!((plus.closed_form, plus.sampled), (Some(false), false));
        let t11 = type11_verdict(&r, &config(6)).unwrap();
        assert_eq!((t11.closed_form, t11.sampled), (Some(false), false));
    }

    #[test]
    fn symplectic_ricci_type_is_type11() {
        let base = BilinearStructure::symplectic(2).unwrap();
        let rm = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 + i as f64 } else { 0.2 });
        let r = build_e_of_r(&rm, &base).unwrap();
        let v = type11_verdict(&r, &config(8)).unwrap();
        assert_eq!((v.closed_form, v.sampled), (Some(true), true));
        let tf = two_form_verdict(&r, &standard_j0(&base), &Tolerances::default()).unwrap();
        assert!(tf.closed_form.is_some());
    }

    #[test]
    fn two_form_follows_scalar_curvature_for_space_forms() {
        let base = BilinearStructure::pseudo(1, 1, false).unwrap();
        let j = standard_j0(&base);
        let tol = Tolerances::default();
        let r = constant_curvature(-1.0, &base).unwrap();
        assert_eq!(two_form_verdict(&r, &j, &tol).unwrap().closed_form, Some(true));
        let flat = CurvatureTensor::zero(&base);
        assert_eq!(two_form_verdict(&flat, &j, &tol).unwrap().closed_form, Some(false));
        let generic = CurvatureSpace::new(&base).unwrap().random(2);
        assert_eq!(two_form_verdict(&generic, &j, &tol).unwrap().closed_form, None);
    }
}
