//! Report envelopes and canonical emission. Payloads are `serde_json`
//! values whose maps are ordered (sorted keys), all floating fields are
//! pre-rendered fixed-width decimal strings, and the payload digest binds
//! the numeric content; wall time lives only in the manifest, so re-running
//! an identical command reproduces byte-identical payloads.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("payload rejected by schema: {0}")]
    SchemaViolation(String),
    #[error("unknown payload kind {0:?}")]
    UnknownKind(String),
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Reproducibility metadata attached to every emission.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub precision: usize,
    pub version: String,
    pub input_hash: String,
    pub payload_digest: String,
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub payload: Value,
    pub manifest: RunManifest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Canonical payload bytes: compact JSON with sorted keys (the default
/// `serde_json` map is ordered).
pub fn canonical_payload_bytes(payload: &Value) -> Vec<u8> {
    serde_json::to_vec(payload).expect("json value serializes")
}

pub fn payload_digest(payload: &Value) -> String {
    let mut h = Sha256::new();
    h.update(canonical_payload_bytes(payload));
    format!("sha256:{}", hex_string(&h.finalize()))
}

pub fn input_hash(argv: &[String], config_bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    for a in argv {
        h.update((a.len() as u64).to_le_bytes());
        h.update(a.as_bytes());
    }
    h.update(config_bytes);
    format!("sha256:{}", hex_string(&h.finalize()))
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

enum Field {
    Str,
    Num,
    Bool,
    Arr,
}

fn schema_for(kind: &str) -> Option<&'static [(&'static str, Field)]> {
    use Field::*;
    match kind {
        "cf" => Some(&[
            ("theta", Str),
            ("quotients", Arr),
            ("terminated", Bool),
            ("heuristic", Bool),
            ("convergents", Arr),
        ]),
        "eisenstein" => Some(&[
            ("mu", Str),
            ("k", Num),
            ("set", Str),
            ("value_re", Str),
            ("value_im", Str),
            ("term_count", Num),
            ("mode", Str),
            ("precision", Num),
        ]),
        "automorphy" => Some(&[
            ("mu", Str),
            ("k", Num),
            ("set", Str),
            ("mode", Str),
            ("precision", Num),
            ("cases", Arr),
        ]),
        "orbit" => Some(&[
            ("mu", Str),
            ("precision", Num),
            ("reduced_mu", Str),
            ("reduction_matrix", Str),
        ]),
        "jclass" => Some(&[
            ("mu", Str),
            ("box_max", Num),
            ("order", Num),
            ("precision", Num),
            ("j_re", Str),
            ("j_im", Str),
            ("error_bound", Str),
            ("g2_re", Str),
            ("g2_im", Str),
            ("g3_re", Str),
            ("g3_im", Str),
        ]),
        "jquant" => Some(&[
            ("mu", Str),
            ("theta", Str),
            ("window", Num),
            ("precision", Num),
            ("preperiod", Num),
            ("period", Num),
            ("stages", Arr),
            ("class_stats", Arr),
        ]),
        "weier-residual" => Some(&[
            ("mu", Str),
            ("z", Str),
            ("scheme", Str),
            ("precision", Num),
            ("rows", Arr),
        ]),
        _ => None,
    }
}

/// Checks the payload against the published field list for its kind.
pub fn validate_payload(payload: &Value) -> Result<(), ReportError> {
    let obj = payload
        .as_object()
        .ok_or_else(|| ReportError::SchemaViolation("payload must be an object".into()))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ReportError::SchemaViolation("missing string field `kind`".into()))?;
    let fields = schema_for(kind).ok_or_else(|| ReportError::UnknownKind(kind.to_string()))?;
    for (name, fk) in fields {
        let v = obj.get(*name).ok_or_else(|| {
            ReportError::SchemaViolation(format!("kind {kind}: missing field `{name}`"))
        })?;
        let ok = match fk {
            Field::Str => v.is_string(),
            Field::Num => v.is_number(),
            Field::Bool => v.is_boolean(),
            Field::Arr => v.is_array(),
        };
        if !ok {
            return Err(ReportError::SchemaViolation(format!(
                "kind {kind}: field `{name}` has the wrong type"
            )));
        }
    }
    Ok(())
}

/// Flat CSV projection of a payload, for plotting tools.
pub fn to_csv(payload: &Value) -> Result<String, ReportError> {
    let kind = payload
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ReportError::SchemaViolation("missing `kind`".into()))?;
    let rows_of = |key: &str, cols: &[&str]| -> Result<String, ReportError> {
        let mut out = String::new();
        out.push_str(&cols.join(","));
        out.push('\n');
        for row in payload[key].as_array().into_iter().flatten() {
            let cells: Vec<String> = cols.iter().map(|c| cell(&row[*c])).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Ok(out)
    };
    match kind {
        "jquant" => rows_of("stages", &["stage", "re", "im", "im_fraction", "class"]),
        "weier-residual" => rows_of("rows", &["stage", "label", "residual_abs", "normalized"]),
        "automorphy" => rows_of("cases", &["index", "matrix", "det", "residual_abs"]),
        "cf" => rows_of("convergents", &["index", "p", "q", "quality"]),
        "eisenstein" | "jclass" | "orbit" => {
            let obj = payload.as_object().expect("validated object");
            let cols: Vec<&String> = obj.keys().filter(|k| !obj[*k].is_array()).collect();
            let mut out = String::new();
            out.push_str(
                &cols
                    .iter()
                    .map(|c| c.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
            let cells: Vec<String> = cols.iter().map(|c| cell(&obj[c.as_str()])).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
            Ok(out)
        }
        other => Err(ReportError::UnknownKind(other.to_string())),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Validates, serializes, and writes an envelope; returns the payload
/// digest. Nothing is written when validation fails.
pub fn emit(
    envelope: &ReportEnvelope,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<String, ReportError> {
    validate_payload(&envelope.payload)?;
    let digest = payload_digest(&envelope.payload);
    match format {
        OutputFormat::Json => {
            let doc = json!({
                "schema_version": envelope.schema_version,
                "payload": envelope.payload,
                "manifest": serde_json::to_value(&envelope.manifest).expect("manifest serializes"),
            });
            let text = serde_json::to_string_pretty(&doc).expect("document serializes");
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")?;
        }
        OutputFormat::Csv => {
            let text = to_csv(&envelope.payload)?;
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(digest)
}
