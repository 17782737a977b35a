//! Run configuration: a JSON document, optionally overridden by flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twistor_core::Tolerances;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    #[value(alias = "pseudo")]
    PseudoRiemannian,
    Symplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Text,
}

/// Which part of a random tensor to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RandomPart {
    Full,
    /// Pseudo: `R - C`. Symplectic: the Ricci-type part.
    ConformallyFlat,
    /// Pseudo: `C`. Symplectic: `W`.
    Weyl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Fixture,
    Random,
    Symplectic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StructureConfig {
    pub kind: KindName,
    pub dim: usize,
    /// Full signature `(2p, 2q)`; defaults to the fixture's own or to
    /// definite.
    pub signature: Option<[usize; 2]>,
    pub oriented: bool,
    pub flip_orientation: bool,
}

impl Default for StructureConfig {
    fn default() -> Self {
        Self { kind: KindName::PseudoRiemannian, dim: 4, signature: None, oriented: false, flip_orientation: false }
    }
}

/// Where the curvature tensor comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    /// Finite-difference curvature of a coordinate metric.
    Fixture {
        name: String,
        #[serde(default = "one")]
        radius: f64,
        /// Second factor radius for `product_spheres`; defaults to `radius`.
        #[serde(default)]
        radius2: Option<f64>,
        /// Chart point; defaults to the origin.
        #[serde(default)]
        point: Option<Vec<f64>>,
        #[serde(default = "default_step")]
        fd_step: f64,
        #[serde(default = "yes")]
        richardson: bool,
    },
    /// Uniform random element of the curvature space.
    Random {
        #[serde(default)]
        seed: u64,
        #[serde(default = "full")]
        part: RandomPart,
    },
    /// Symplectic point fixture `E(r) + sum R(S, j)`.
    Symplectic {
        /// Rows of the symmetric matrix `r`; random from `seed` when absent.
        #[serde(default)]
        r: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        weyl_seeds: usize,
        #[serde(default = "one")]
        weyl_weight: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn default_step() -> f64 {
    1e-3
}

fn full() -> RandomPart {
    RandomPart::Full
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSettings {
    pub fiber_samples: usize,
    /// Argument pairs per fibre point; twice the tangent dimension if absent.
    pub pair_samples: Option<usize>,
    pub seed: u64,
}

impl Default for SamplingSettings {
    fn default() -> Self {
        Self { fiber_samples: 64, pair_samples: None, seed: 0 }
    }
}

/// Serializable mirror of [`Tolerances`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceProfile {
    pub identity: f64,
    pub group: f64,
    pub rank: f64,
    pub structural_zero: f64,
    pub pivot: f64,
    pub fd_presnap: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Tolerances::default().into()
    }
}

impl From<Tolerances> for ToleranceProfile {
    fn from(t: Tolerances) -> Self {
        Self {
            identity: t.identity,
            group: t.group,
            rank: t.rank,
            structural_zero: t.structural_zero,
            pivot: t.pivot,
            fd_presnap: t.fd_presnap,
        }
    }
}

impl From<ToleranceProfile> for Tolerances {
    fn from(t: ToleranceProfile) -> Self {
        Self {
            identity: t.identity,
            group: t.group,
            rank: t.rank,
            structural_zero: t.structural_zero,
            pivot: t.pivot,
            fd_presnap: t.fd_presnap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
    /// Adds wall-clock timing, which makes reports differ between runs.
    pub timing: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { format: OutputFormat::Json, path: None, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub structure: StructureConfig,
    /// Defaults to the unit sphere (pseudo-Riemannian) or a Ricci-type
    /// symplectic fixture.
    pub source: Option<SourceConfig>,
    pub sampling: SamplingSettings,
    pub tolerances: ToleranceProfile,
    pub output: OutputConfig,
}

fn parse_pair(text: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [p, q] => {
            let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
            Ok([parse(p)?, parse(q)?])
        }
        _ => Err(String::from("expected two comma-separated integers")),
    }
}

/// Flags that override the configuration file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ConfigArgs {
    /// JSON run configuration.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<KindName>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Full signature, e.g. `2,2`.
    #[arg(long, value_name = "P,Q", value_parser = parse_pair)]
    pub signature: Option<[usize; 2]>,
    #[arg(long)]
    pub oriented: bool,
    /// Evaluate with the orientation reversed.
    #[arg(long)]
    pub flip_orientation: bool,
    /// Tensor source (implied by --fixture).
    #[arg(long, value_enum)]
    pub source: Option<SourceKind>,
    /// Fixture name: flat, sphere, hyperbolic, product_spheres,
    /// fubini_study_cp2, pseudo_sphere_22.
    #[arg(long, value_name = "NAME")]
    pub fixture: Option<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub radius2: Option<f64>,
    #[arg(long, value_name = "X1,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<f64>>,
    /// Seed of random and symplectic tensor sources.
    #[arg(long)]
    pub tensor_seed: Option<u64>,
    #[arg(long, value_enum)]
    pub part: Option<RandomPart>,
    /// Number of Weyl pieces in a symplectic fixture.
    #[arg(long)]
    pub weyl_seeds: Option<usize>,
    /// Fibre sampling seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub fiber_samples: Option<usize>,
    #[arg(long)]
    pub pair_samples: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    pub timing: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Loads `--config` if given and applies the remaining flags on top.
    pub fn from_args(args: &ConfigArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        cfg.apply(args)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, a: &ConfigArgs) -> Result<(), CliError> {
        let s = &mut self.structure;
        if let Some(k) = a.kind {
            s.kind = k;
        }
        if let Some(d) = a.dim {
            s.dim = d;
        }
        if a.signature.is_some() {
            s.signature = a.signature;
        }
        s.oriented |= a.oriented;
        s.flip_orientation |= a.flip_orientation;

        let wanted = match (a.source, &a.fixture) {
            (Some(SourceKind::Fixture), _) | (None, Some(_)) => Some(SourceKind::Fixture),
            (Some(other), None) => Some(other),
            (Some(other), Some(_)) => {
                return Err(CliError::Config(format!("--fixture conflicts with --source {other:?}")));
            }
            (None, None) => None,
        };
        if let Some(kind) = wanted {
            if self.source.as_ref().map(source_kind) != Some(kind) {
                self.source = Some(match kind {
                    SourceKind::Fixture => SourceConfig::Fixture {
                        name: String::from("sphere"),
                        radius: 1.0,
                        radius2: None,
                        point: None,
                        fd_step: default_step(),
                        richardson: true,
                    },
                    SourceKind::Random => SourceConfig::Random { seed: 0, part: RandomPart::Full },
                    SourceKind::Symplectic => {
                        SourceConfig::Symplectic { r: None, weyl_seeds: 0, weyl_weight: 1.0, seed: 0 }
                    }
                });
            }
        }
        let touches_source = a.radius.is_some()
            || a.radius2.is_some()
            || a.point.is_some()
            || a.tensor_seed.is_some()
            || a.part.is_some()
            || a.weyl_seeds.is_some();
        if touches_source && self.source.is_none() {
            self.source = Some(self.resolved_source());
        }
        match &mut self.source {
            Some(SourceConfig::Fixture { name, radius, radius2, point, .. }) => {
                if let Some(f) = &a.fixture {
                    name.clone_from(f);
                }
                if let Some(r) = a.radius {
                    *radius = r;
                }
                if a.radius2.is_some() {
                    *radius2 = a.radius2;
                }
                if a.point.is_some() {
                    point.clone_from(&a.point);
                }
                reject(a.tensor_seed.is_some() || a.part.is_some() || a.weyl_seeds.is_some(), "fixture")?;
            }
            Some(SourceConfig::Random { seed, part }) => {
                if let Some(v) = a.tensor_seed {
                    *seed = v;
                }
                if let Some(p) = a.part {
                    *part = p;
                }
                reject(
                    a.radius.is_some() || a.radius2.is_some() || a.point.is_some() || a.weyl_seeds.is_some(),
                    "random",
                )?;
            }
            Some(SourceConfig::Symplectic { weyl_seeds, seed, .. }) => {
                if let Some(v) = a.tensor_seed {
                    *seed = v;
                }
                if let Some(w) = a.weyl_seeds {
                    *weyl_seeds = w;
                }
                reject(
                    a.radius.is_some() || a.radius2.is_some() || a.point.is_some() || a.part.is_some(),
                    "symplectic",
                )?;
            }
            None => {}
        }

        let sm = &mut self.sampling;
        if let Some(v) = a.seed {
            sm.seed = v;
        }
        if let Some(v) = a.fiber_samples {
            sm.fiber_samples = v;
        }
        if a.pair_samples.is_some() {
            sm.pair_samples = a.pair_samples;
        }
        if let Some(f) = a.format {
            self.output.format = f;
        }
        if a.out.is_some() {
            self.output.path.clone_from(&a.out);
        }
        self.output.timing |= a.timing;
        Ok(())
    }

    /// Checks everything that does not need the numerical engine.
    pub fn validate(&self) -> Result<(), CliError> {
        let s = &self.structure;
        let bad = |msg: String| Err(CliError::Config(msg));
        if s.dim < 4 || s.dim % 2 != 0 {
            return bad(format!("dimension {} must be even and at least 4", s.dim));
        }
        if let Some([p, q]) = s.signature {
            if s.kind == KindName::Symplectic {
                return bad(String::from("a signature only applies to pseudo-Riemannian structures"));
            }
            if p % 2 != 0 || q % 2 != 0 || p + q != s.dim {
                return bad(format!("signature ({p},{q}) must be two even numbers summing to {}", s.dim));
            }
        }
        if s.kind == KindName::Symplectic && (s.oriented || s.flip_orientation) {
            return bad(String::from("orientation only applies to pseudo-Riemannian structures"));
        }
        if s.flip_orientation && !s.oriented {
            return bad(String::from("--flip-orientation requires --oriented"));
        }
        if self.sampling.fiber_samples == 0 {
            return bad(String::from("fiber_samples must be at least 1"));
        }
        if self.sampling.pair_samples == Some(0) {
            return bad(String::from("pair_samples must be at least 1"));
        }
        let t = self.tolerances;
        let all = [t.identity, t.group, t.rank, t.structural_zero, t.pivot, t.fd_presnap];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return bad(String::from("tolerances must be positive and finite"));
        }
        match &self.source {
            Some(SourceConfig::Fixture { radius, radius2, point, fd_step, .. }) => {
                if s.kind == KindName::Symplectic {
                    return bad(String::from("chart fixtures are pseudo-Riemannian; use the symplectic source"));
                }
                if !(radius.is_finite() && *radius > 0.0) || radius2.is_some_and(|r| !(r.is_finite() && r > 0.0)) {
                    return bad(String::from("fixture radii must be positive"));
                }
                if let Some(x) = point {
                    if x.len() != s.dim || x.iter().any(|v| !v.is_finite()) {
                        return bad(format!("point must have {} finite coordinates", s.dim));
                    }
                }
                if !fd_step.is_finite() {
                    return bad(String::from("fd_step must be finite"));
                }
            }
            Some(SourceConfig::Symplectic { r, weyl_weight, .. }) => {
                if s.kind != KindName::Symplectic {
                    return bad(String::from("the symplectic source requires --kind symplectic"));
                }
                if let Some(rows) = r {
                    if rows.len() != s.dim || rows.iter().any(|row| row.len() != s.dim) {
                        return bad(format!("r must be a {0}x{0} matrix", s.dim));
                    }
                }
                if !weyl_weight.is_finite() {
                    return bad(String::from("weyl_weight must be finite"));
                }
            }
            Some(SourceConfig::Random { .. }) | None => {}
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.into()
    }

    /// Source with the per-kind default filled in.
    pub fn resolved_source(&self) -> SourceConfig {
        self.source.clone().unwrap_or_else(|| match self.structure.kind {
            KindName::PseudoRiemannian => SourceConfig::Fixture {
                name: String::from("sphere"),
                radius: 1.0,
                radius2: None,
                point: None,
                fd_step: default_step(),
                richardson: true,
            },
            KindName::Symplectic => SourceConfig::Symplectic { r: None, weyl_seeds: 0, weyl_weight: 1.0, seed: 0 },
        })
    }
}

fn source_kind(s: &SourceConfig) -> SourceKind {
    match s {
        SourceConfig::Fixture { .. } => SourceKind::Fixture,
        SourceConfig::Random { .. } => SourceKind::Random,
        SourceConfig::Symplectic { .. } => SourceKind::Symplectic,
    }
}

fn reject(conflict: bool, source: &str) -> Result<(), CliError> {
    if conflict {
        Err(CliError::Config(format!("flag does not apply to the {source} source")))
    } else {
        Ok(())
    }
}
