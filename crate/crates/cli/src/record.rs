//! Machine-readable run records and the fixed-precision JSON printer.

use genfn::{
    CalibrationReport, Complex64, Growth, OracleResult, QuadratureConfig, SeriesFamily, TransformOutput, Verdict,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One invocation of the tool: the echoed command line, its payload and how
/// long the numerical work took.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    #[serde(flatten)]
    pub payload: Payload,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Transform(TransformView),
    Verify(VerifyView),
    Oracle(OracleResult),
    Calibration(CalibrationReport),
    Converge { reference: Complex64, rows: Vec<ConvergeRow> },
    Coeffs { rows: Vec<CoeffRow> },
    Sequences { sequences: Vec<SequenceInfo> },
}

/// Flat view of a [`TransformOutput`] in the published schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformView {
    pub family: String,
    /// Full target including its parameters.
    pub target: SeriesFamily,
    pub z: Complex64,
    pub value: Complex64,
    pub error_estimate: f64,
    pub method: String,
    pub evals: usize,
    pub oracle: Option<Complex64>,
    pub abs_diff: Option<f64>,
    pub raw_value: Option<Complex64>,
    pub config: QuadratureConfig,
}

impl From<&TransformOutput> for TransformView {
    fn from(t: &TransformOutput) -> Self {
        TransformView {
            family: t.family.cli_name().to_string(),
            target: t.family,
            z: t.z,
            value: t.value,
            error_estimate: t.abs_error_estimate,
            method: t.method.clone(),
            evals: t.evals,
            oracle: t.oracle_value,
            abs_diff: t.abs_diff,
            raw_value: t.raw_value,
            config: t.config,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyView {
    pub verdict: Verdict,
    pub transform: TransformView,
    pub oracle_result: OracleResult,
    pub transform_budget: f64,
    pub oracle_budget: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub nodes: usize,
    pub abs_error: f64,
    pub evals: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub n: usize,
    pub a_n: f64,
    pub error_estimate: f64,
    pub evals: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceInfo {
    pub id: String,
    pub growth: Growth,
    /// `None` when the OGF is entire.
    pub ogf_radius: Option<f64>,
    pub closed_ogf: bool,
    pub closed_egf: bool,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        print_json(&serde_json::to_value(self).expect("run records are plain data"))
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Float with 17 significant digits, which round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Compact JSON with every float printed by [`fmt_f64`].
pub fn print_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                // serde_json never stores non-finite floats
                out.push_str(&fmt_f64(n.as_f64().unwrap_or(0.0)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}
