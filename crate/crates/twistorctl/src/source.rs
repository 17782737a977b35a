//! Builds the curvature tensor a run is about.

use twistor_core::charts::{symplectic_fixture_curvature, ChartMetric, Fixture, SymplecticPointFixture};
use twistor_core::curvature::{
    decompose_pseudo, decompose_symplectic, reflect_orientation, CurvatureSpace, CurvatureTensor,
};
use twistor_core::linalg::{seeded_rng, uniform_matrix};
use twistor_core::spaces::BilinearStructure;
use twistor_core::DMatrix;

use crate::config::{KindName, RandomPart, RunConfig, SourceConfig};
use crate::error::CliError;

/// Model structure of the run. Fixtures without an explicit signature use
/// their own.
pub fn base_structure(cfg: &RunConfig) -> Result<BilinearStructure, CliError> {
    let s = &cfg.structure;
    Ok(match s.kind {
        KindName::Symplectic => BilinearStructure::symplectic(s.dim / 2)?,
        KindName::PseudoRiemannian => {
            let (p, q) = match (s.signature, cfg.resolved_source()) {
                (Some([p, q]), _) => (p / 2, q / 2),
                (None, SourceConfig::Fixture { name, radius, .. }) => {
                    Fixture::from_name(&name, radius)?.default_signature(s.dim)
                }
                (None, _) => (s.dim / 2, 0),
            };
            BilinearStructure::pseudo(p, q, s.oriented)?
        }
    })
}

/// The curvature tensor described by the configuration, after the optional
/// orientation flip.
pub fn build_tensor(cfg: &RunConfig) -> Result<CurvatureTensor, CliError> {
    let base = base_structure(cfg)?;
    let tol = cfg.tolerances();
    let r = match cfg.resolved_source() {
        SourceConfig::Fixture { name, radius, radius2, point, fd_step, richardson } => {
            let mut fixture = Fixture::from_name(&name, radius)?;
            if let (Fixture::ProductSpheres { r2, .. }, Some(second)) = (&mut fixture, radius2) {
                *r2 = second;
            }
            let (p, q) = base.signature();
            let chart = ChartMetric::new(fixture, base.dim())?
                .with_signature(p, q)?
                .with_step(fd_step)?
                .with_richardson(richardson);
            let x = point.unwrap_or_else(|| vec![0.0; base.dim()]);
            chart.curvature_at(&x, base.oriented(), &tol)?
        }
        SourceConfig::Random { seed, part } => {
            let r = CurvatureSpace::new(&base)?.random(seed);
            match (part, base.kind()) {
                (RandomPart::Full, _) => r,
                (RandomPart::ConformallyFlat, twistor_core::spaces::Kind::PseudoRiemannian) => {
                    r.combine(1.0, &decompose_pseudo(&r)?.c_part, -1.0)
                }
                (RandomPart::Weyl, twistor_core::spaces::Kind::PseudoRiemannian) => decompose_pseudo(&r)?.c_part,
                (RandomPart::ConformallyFlat, twistor_core::spaces::Kind::Symplectic) => {
                    decompose_symplectic(&r)?.e_part
                }
                (RandomPart::Weyl, twistor_core::spaces::Kind::Symplectic) => decompose_symplectic(&r)?.w_part,
            }
        }
        SourceConfig::Symplectic { r, weyl_seeds, weyl_weight, seed } => {
            let d = base.dim();
            let rm = match r {
                Some(rows) => DMatrix::from_fn(d, d, |i, j| rows[i][j]),
                None => {
                    let m = uniform_matrix(&mut seeded_rng(seed), d, d);
                    (&m + m.transpose()) * 0.5
                }
            };
            let fx = SymplecticPointFixture::new(d / 2, rm)?.with_random_seeds(weyl_seeds, weyl_weight, seed);
            symplectic_fixture_curvature(&fx)?
        }
    };
    if cfg.structure.flip_orientation {
        Ok(reflect_orientation(&r)?)
    } else {
        Ok(r)
    }
}
