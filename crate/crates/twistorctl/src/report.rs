//! Report document and its JSON / text renderings.
//!
//! JSON floats carry 17 significant digits so that reports round-trip
//! exactly; non-finite values abort serialization.

use std::io::{self, Write};

use serde::{Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};
use twistor_core::DMatrix;

use crate::config::{RunConfig, ToleranceProfile};

pub const SCHEMA_VERSION: u32 = 1;

/// A float that refuses to serialize unless finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            Err(serde::ser::Error::custom(format!("non-finite value {} in report", self.0)))
        }
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

/// Square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixOut {
    pub dim: usize,
    pub data: Vec<Real>,
}

impl From<&DMatrix<f64>> for MatrixOut {
    fn from(m: &DMatrix<f64>) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| Real(m[(i, j)]))).collect();
        Self { dim: m.nrows(), data }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureEcho {
    pub kind: &'static str,
    pub dim: usize,
    /// Full signature `(2p, 2q)`; absent for symplectic structures.
    pub signature: Option<[usize; 2]>,
    pub oriented: bool,
    pub orientation_flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureSummary {
    pub norm: Real,
    /// Largest violation of the curvature identities.
    pub invariant_residual: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionalSummary {
    pub min: Real,
    pub max: Real,
    pub pinching: Option<Real>,
    pub planes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompositionOut {
    PseudoRiemannian {
        scal: Real,
        s_norm: Real,
        e_norm: Real,
        c_norm: Real,
        /// Present for oriented four-dimensional structures.
        c_plus_norm: Option<Real>,
        c_minus_norm: Option<Real>,
        ricci: MatrixOut,
        sectional: SectionalSummary,
        reconstruction_residual: Real,
    },
    Symplectic {
        e_norm: Real,
        w_norm: Real,
        ricci_type: bool,
        /// `|W| / |R|`.
        ricci_type_ratio: Real,
        ricci: MatrixOut,
        reconstruction_residual: Real,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictOut {
    pub question: &'static str,
    pub answer: bool,
    pub closed_form: Option<bool>,
    pub sampled: bool,
    /// Closed form and sampling agree (always true in a written report;
    /// disagreements abort the run).
    pub agreement: bool,
    pub reason: String,
    pub worst_residual: Real,
    pub samples: usize,
}

impl From<&twistor_core::twistor::Verdict> for VerdictOut {
    fn from(v: &twistor_core::twistor::Verdict) -> Self {
        Self {
            question: v.question.name(),
            answer: v.answer(),
            closed_form: v.closed_form,
            sampled: v.sampled,
            agreement: v.closed_form.is_none_or(|c| c == v.sampled),
            reason: v.reason.clone(),
            worst_residual: Real(v.worst_residual),
            samples: v.samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NijenhuisOut {
    pub sign: &'static str,
    pub fiber_samples: usize,
    pub pair_samples: usize,
    pub tangent_dim: usize,
    pub rank_min: usize,
    pub rank_max: usize,
    pub horizontal_dim: usize,
    pub horizontal_rank_min: usize,
    /// Every sampled span contains the horizontal space.
    pub horizontal_containment: bool,
    pub max_value_norm: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoFormOut {
    /// At the standard complex structure.
    pub nondegenerate: bool,
    pub vertical_nondegenerate: bool,
    pub horizontal_condition: Real,
    pub type11_residual: Real,
    /// Positivity only makes sense for a non-degenerate form; `None` otherwise.
    pub positive_plus: Option<bool>,
    pub positive_minus: Option<bool>,
    pub verdict: VerdictOut,
    /// Over the sampled fibre.
    pub fiber_samples: usize,
    pub nondegenerate_samples: usize,
    pub type11_max_residual: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    /// `[re, im]` of the nearest admissible eigenvalue.
    pub eigenvalue: [Real; 2],
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumOut {
    pub operator_dim: usize,
    pub fiber_samples: usize,
    /// Largest distance of a computed eigenvalue to `{0, +-2i, +-4i}`.
    pub max_distance: Real,
    /// Multiplicities at the first sampled structure.
    pub clusters: Vec<Cluster>,
    /// Norms of the tensor's components in the `0`, `+-2i` and `+-4i`
    /// eigenspaces at the standard complex structure.
    pub component_norms: [Real; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: RunConfig,
    pub seed: u64,
    pub tolerances: ToleranceProfile,
    pub structure: StructureEcho,
    pub curvature: CurvatureSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nijenhuis: Vec<NijenhuisOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_form: Option<TwoFormOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Pretty printing with `{:.16e}` floats.
struct SignificantDigits(PrettyFormatter<'static>);

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with 17 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// One `path = value` line per leaf of the JSON rendering.
pub fn to_text<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let json: serde_json::Value = serde_json::from_str(&to_json(value)?)?;
    let mut out = String::new();
    flatten("", &json, &mut out);
    Ok(out)
}

fn flatten(path: &str, v: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&p, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().map(leaf).collect();
            out.push_str(&format!("{path} = [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), child, out);
            }
        }
        other => out.push_str(&format!("{path} = {}\n", leaf(other))),
    }
}

fn leaf(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_u64() && !n.is_i64() => format!("{f:.16e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}
