//! The report-producing subcommands.

use std::time::Instant;

use rayon::prelude::*;
use twistor_core::curvature::{
    decompose_pseudo, decompose_symplectic, invariant_residual, is_ricci_type, pinching_report, sd_asd_split,
    CurvatureSpace, CurvatureTensor,
};
use twistor_core::spaces::{standard_j0, vertical_dimension, FiberSampler, Kind};
use twistor_core::twistor::{
    four_i_component, integrability_verdict, j_action, j_action_spectrum, nijenhuis_span, spectrum_distance,
    two_form_nondegenerate, two_form_positivity, two_form_verdict, type11_check, type11_verdict, SamplingConfig, Sign,
    SPECTRUM,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{
    Cluster, CurvatureSummary, DecompositionOut, MatrixOut, NijenhuisOut, Real, ReportDocument, SectionalSummary,
    SpectrumOut, StructureEcho, Timing, TwoFormOut, VerdictOut, SCHEMA_VERSION,
};
use crate::source::build_tensor;

/// Planes sampled for the sectional curvature range, beyond the coordinate
/// planes.
const SECTIONAL_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decompose,
    Verdict,
    Nijenhuis,
    TwoForm,
    Spectrum,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Verdict => "verdict",
            Command::Nijenhuis => "nijenhuis",
            Command::TwoForm => "two-form",
            Command::Spectrum => "spectrum",
        }
    }
}

/// Builds the tensor described by `cfg` and runs `command` on it.
pub fn run(command: Command, cfg: &RunConfig) -> Result<ReportDocument, CliError> {
    let start = Instant::now();
    let r = build_tensor(cfg)?;
    let mut doc = empty_report(command, cfg, &r);
    match command {
        Command::Decompose => doc.decomposition = Some(decompose(&r)?),
        Command::Verdict => doc.verdicts = verdicts(&r, cfg)?,
        Command::Nijenhuis => doc.nijenhuis = nijenhuis(&r, cfg)?,
        Command::TwoForm => doc.two_form = Some(two_form(&r, cfg)?),
        Command::Spectrum => doc.spectrum = Some(spectrum(&r, cfg)?),
    }
    if cfg.output.timing {
        doc.timing = Some(Timing { elapsed_ms: Real(start.elapsed().as_secs_f64() * 1e3) });
    }
    Ok(doc)
}

fn empty_report(command: Command, cfg: &RunConfig, r: &CurvatureTensor) -> ReportDocument {
    let base = r.base();
    let (p, q) = base.signature();
    ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: command.name(),
        input: cfg.clone(),
        seed: cfg.sampling.seed,
        tolerances: cfg.tolerances,
        structure: StructureEcho {
            kind: base.kind().name(),
            dim: base.dim(),
            signature: (base.kind() == Kind::PseudoRiemannian).then_some([2 * p, 2 * q]),
            oriented: base.oriented(),
            orientation_flipped: cfg.structure.flip_orientation,
        },
        curvature: CurvatureSummary {
            norm: Real(r.norm()),
            invariant_residual: Real(invariant_residual(base.kind(), r.tensor())),
        },
        decomposition: None,
        verdicts: Vec::new(),
        nijenhuis: Vec::new(),
        two_form: None,
        spectrum: None,
        timing: None,
    }
}

fn sampling(cfg: &RunConfig) -> SamplingConfig {
    SamplingConfig {
        fiber_samples: cfg.sampling.fiber_samples,
        pair_samples: cfg.sampling.pair_samples.unwrap_or(0),
        seed: cfg.sampling.seed,
        tolerances: cfg.tolerances(),
    }
}

/// Reconstruction must hold to this relative accuracy.
const RECONSTRUCTION_TOL: f64 = 1e-9;

fn check_reconstruction(residual: f64, r: &CurvatureTensor) -> Result<(), CliError> {
    if residual > RECONSTRUCTION_TOL * r.norm().max(1.0) {
        return Err(CliError::Invariant(format!("decomposition does not reconstruct the tensor ({residual:e})")));
    }
    Ok(())
}

fn decompose(r: &CurvatureTensor) -> Result<DecompositionOut, CliError> {
    let base = r.base();
    match base.kind() {
        Kind::PseudoRiemannian => {
            let dec = decompose_pseudo(r)?;
            let sum = &(dec.s_part.tensor() + dec.e_part.tensor()) + dec.c_part.tensor();
            let residual = (&sum - r.tensor()).max_abs();
            check_reconstruction(residual, r)?;
            let (c_plus_norm, c_minus_norm) = if base.oriented() && base.dim() == 4 {
                let (plus, minus) = sd_asd_split(&dec.c_part, 1e-8)?;
                (Some(Real(plus.norm())), Some(Real(minus.norm())))
            } else {
                (None, None)
            };
            let pinch = pinching_report(r, SECTIONAL_SAMPLES, 0)?;
            Ok(DecompositionOut::PseudoRiemannian {
                scal: Real(dec.scal),
                s_norm: Real(dec.s_part.norm()),
                e_norm: Real(dec.e_part.norm()),
                c_norm: Real(dec.c_part.norm()),
                c_plus_norm,
                c_minus_norm,
                ricci: MatrixOut::from(&dec.ricci),
                sectional: SectionalSummary {
                    min: Real(pinch.min),
                    max: Real(pinch.max),
                    pinching: pinch.ratio.map(Real),
                    planes: pinch.planes,
                },
                reconstruction_residual: Real(residual),
            })
        }
        Kind::Symplectic => {
            let dec = decompose_symplectic(r)?;
            let residual = (&(dec.e_part.tensor() + dec.w_part.tensor()) - r.tensor()).max_abs();
            check_reconstruction(residual, r)?;
            let (ricci_type, ratio) = is_ricci_type(r, twistor_core::Tolerances::default().structural_zero)?;
            Ok(DecompositionOut::Symplectic {
                e_norm: Real(dec.e_part.norm()),
                w_norm: Real(dec.w_part.norm()),
                ricci_type,
                ricci_type_ratio: Real(ratio),
                ricci: MatrixOut::from(&dec.ricci),
                reconstruction_residual: Real(residual),
            })
        }
    }
}

fn verdicts(r: &CurvatureTensor, cfg: &RunConfig) -> Result<Vec<VerdictOut>, CliError> {
    let sc = sampling(cfg);
    let plus = integrability_verdict(r, Sign::Plus, &sc)?;
    let minus = integrability_verdict(r, Sign::Minus, &sc)?;
    let t11 = type11_verdict(r, &sc)?;
    Ok([plus, minus, t11].iter().map(VerdictOut::from).collect())
}

fn pair_count(r: &CurvatureTensor, cfg: &RunConfig) -> usize {
    cfg.sampling.pair_samples.unwrap_or(2 * (r.dim() + vertical_dimension(r.base())))
}

fn nijenhuis(r: &CurvatureTensor, cfg: &RunConfig) -> Result<Vec<NijenhuisOut>, CliError> {
    let tol = cfg.tolerances();
    let sampler = FiberSampler::new(r.base(), cfg.sampling.seed);
    let pairs = pair_count(r, cfg);
    let count = cfg.sampling.fiber_samples;
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|sign| {
            let spans = (0..count)
                .into_par_iter()
                .map(|i| nijenhuis_span(r, &sampler.sample(i), sign, pairs, cfg.sampling.seed ^ (i as u64), &tol))
                .collect::<Result<Vec<_>, _>>()?;
            let first = &spans[0];
            Ok(NijenhuisOut {
                sign: sign.name(),
                fiber_samples: count,
                pair_samples: pairs,
                tangent_dim: first.tangent_dim,
                rank_min: spans.iter().map(|s| s.rank).min().unwrap_or(0),
                rank_max: spans.iter().map(|s| s.rank).max().unwrap_or(0),
                horizontal_dim: first.horizontal_dim,
                horizontal_rank_min: spans.iter().map(|s| s.horizontal_rank).min().unwrap_or(0),
                horizontal_containment: spans.iter().all(|s| s.contains_horizontal()),
                max_value_norm: Real(spans.iter().map(|s| s.max_value_norm).fold(0.0, f64::max)),
            })
        })
        .collect()
}

fn two_form(r: &CurvatureTensor, cfg: &RunConfig) -> Result<TwoFormOut, CliError> {
    let tol = cfg.tolerances();
    let j0 = standard_j0(r.base());
    let direct = two_form_nondegenerate(r, &j0, &tol)?;
    let verdict = two_form_verdict(r, &j0, &tol)?;
    let sampler = FiberSampler::new(r.base(), cfg.sampling.seed);
    let per_j = (0..cfg.sampling.fiber_samples)
        .into_par_iter()
        .map(|i| {
            let j = sampler.sample(i);
            Ok((two_form_nondegenerate(r, &j, &tol)?.nondegenerate, type11_check(r, &j)?))
        })
        .collect::<Result<Vec<_>, twistor_core::Error>>()?;
    let positivity =
        |sign| if direct.nondegenerate { two_form_positivity(r, &j0, sign, &tol).map(Some) } else { Ok(None) };
    Ok(TwoFormOut {
        nondegenerate: direct.nondegenerate,
        vertical_nondegenerate: direct.vertical_nondegenerate,
        horizontal_condition: Real(direct.horizontal_condition),
        type11_residual: Real(type11_check(r, &j0)?),
        positive_plus: positivity(1.0)?,
        positive_minus: positivity(-1.0)?,
        verdict: VerdictOut::from(&verdict),
        fiber_samples: per_j.len(),
        nondegenerate_samples: per_j.iter().filter(|(nd, _)| *nd).count(),
        type11_max_residual: Real(per_j.iter().map(|(_, t)| *t).fold(0.0, f64::max)),
    })
}

fn spectrum(r: &CurvatureTensor, cfg: &RunConfig) -> Result<SpectrumOut, CliError> {
    let space = CurvatureSpace::new(r.base())?;
    let sampler = FiberSampler::new(r.base(), cfg.sampling.seed);
    let spectra = (0..cfg.sampling.fiber_samples)
        .into_par_iter()
        .map(|i| j_action_spectrum(&space, &sampler.sample(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let max_distance = spectra.iter().map(|s| spectrum_distance(s)).fold(0.0, f64::max);
    let mut counts = [0usize; SPECTRUM.len()];
    for z in &spectra[0] {
        let nearest = (0..SPECTRUM.len())
            .min_by(|&a, &b| {
                let da = (z.re - SPECTRUM[a].re).hypot(z.im - SPECTRUM[a].im);
                let db = (z.re - SPECTRUM[b].re).hypot(z.im - SPECTRUM[b].im);
                da.total_cmp(&db)
            })
            .expect("spectrum is non-empty");
        counts[nearest] += 1;
    }
    let clusters = SPECTRUM
        .iter()
        .zip(counts)
        .map(|(s, multiplicity)| Cluster { eigenvalue: [Real(s.re), Real(s.im)], multiplicity })
        .collect();

    // Components through the polynomials vanishing on the other eigenvalues.
    let j0 = standard_j0(r.base());
    let jm = j0.matrix();
    let a2 = j_action(&j_action(r.tensor(), jm), jm);
    let a4 = j_action(&j_action(&a2, jm), jm);
    let (four, four_norm) = four_i_component(r, &j0)?;
    // -A^2 (A^2 + 16) / 48 projects onto +-2i.
    let mut two = &a4 * (-1.0 / 48.0);
    two.axpy(-16.0 / 48.0, &a2);
    let zero = &(r.tensor() - &two) - four.tensor();
    Ok(SpectrumOut {
        operator_dim: space.dim(),
        fiber_samples: spectra.len(),
        max_distance: Real(max_distance),
        clusters,
        component_norms: [Real(zero.norm()), Real(two.norm()), Real(four_norm)],
    })
}
