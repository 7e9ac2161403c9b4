//! Problem files: a TOML document with 1-based tensor indices.
//!
//! ```toml
//! order = 4
//! dim = 2
//! q = [1.0, -1.0]
//! u = [0.5, 0.4]      # optional
//! z = [0.0, 0.5]      # optional
//!
//! [[entries]]
//! idx = [1, 1, 1, 1]
//! val = 1.0
//!
//! [[entries]]
//! idx = [2, 2, 2, 2]
//! val = 8.0
//! ```

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Result, TcpError};
use crate::solve::TcpInstance;
use crate::tensor::DenseTensor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// 1-based index tuple of length `order`.
    pub idx: Vec<usize>,
    pub val: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemFile {
    pub order: usize,
    pub dim: usize,
    pub q: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    pub entries: Vec<Entry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    idx: Spanned<Vec<usize>>,
    val: Spanned<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    order: Spanned<usize>,
    dim: Spanned<usize>,
    #[serde(default)]
    entries: Vec<RawEntry>,
    q: Spanned<Vec<f64>>,
    z: Option<Spanned<Vec<f64>>>,
    u: Option<Spanned<Vec<f64>>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

fn invalid(text: &str, span: std::ops::Range<usize>, field: &str, msg: String) -> TcpError {
    TcpError::Parse(format!(
        "line {}: {field}: {msg}",
        line_of(text, span.start)
    ))
}

pub fn parse_problem(path: impl AsRef<Path>) -> Result<ProblemFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| TcpError::Io(format!("{}: {e}", path.display())))?;
    parse_problem_str(&text).map_err(|e| match e {
        TcpError::Parse(msg) => TcpError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile> {
    let raw: RawProblem =
        toml::from_str(text).map_err(|e| TcpError::Parse(e.to_string().trim_end().to_string()))?;

    let order = *raw.order.get_ref();
    let dim = *raw.dim.get_ref();
    if order < 2 {
        return Err(invalid(
            text,
            raw.order.span(),
            "order",
            format!("must be at least 2, got {order}"),
        ));
    }
    if dim < 1 {
        return Err(invalid(
            text,
            raw.dim.span(),
            "dim",
            "must be at least 1".into(),
        ));
    }

    let check_vector = |name: &str, v: &Spanned<Vec<f64>>| -> Result<Vec<f64>> {
        let values = v.get_ref();
        if values.len() != dim {
            return Err(invalid(
                text,
                v.span(),
                name,
                format!("expected {dim} values, found {}", values.len()),
            ));
        }
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            return Err(invalid(
                text,
                v.span(),
                name,
                format!("component {} is not finite", k + 1),
            ));
        }
        Ok(values.clone())
    };
    let q = check_vector("q", &raw.q)?;
    let z = raw.z.as_ref().map(|v| check_vector("z", v)).transpose()?;
    let u = raw.u.as_ref().map(|v| check_vector("u", v)).transpose()?;

    let mut seen: HashMap<&[usize], usize> = HashMap::new();
    let mut entries = Vec::with_capacity(raw.entries.len());
    for (k, e) in raw.entries.iter().enumerate() {
        let field = format!("entries[{k}].idx");
        let idx = e.idx.get_ref();
        if idx.len() != order {
            return Err(invalid(
                text,
                e.idx.span(),
                &field,
                format!("expected {order} indices, found {}", idx.len()),
            ));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i < 1 || i > dim) {
            return Err(invalid(
                text,
                e.idx.span(),
                &field,
                format!("index {bad} out of range [1, {dim}]"),
            ));
        }
        if let Some(prev) = seen.insert(idx.as_slice(), k) {
            return Err(invalid(
                text,
                e.idx.span(),
                &field,
                format!("duplicate of entries[{prev}]"),
            ));
        }
        let val = *e.val.get_ref();
        if !val.is_finite() {
            return Err(invalid(
                text,
                e.val.span(),
                &format!("entries[{k}].val"),
                "value is not finite".into(),
            ));
        }
        entries.push(Entry {
            idx: idx.clone(),
            val,
        });
    }

    Ok(ProblemFile {
        order,
        dim,
        q,
        z,
        u,
        entries,
    })
}

pub fn emit_problem(problem: &ProblemFile) -> Result<String> {
    toml::to_string(problem).map_err(|e| TcpError::Parse(e.to_string()))
}

impl ProblemFile {
    pub fn tensor(&self) -> Result<DenseTensor> {
        DenseTensor::from_entries(
            self.order,
            self.dim,
            self.entries
                .iter()
                .map(|e| (e.idx.iter().map(|i| i - 1).collect(), e.val)),
        )
    }

    pub fn instance(&self) -> Result<TcpInstance> {
        TcpInstance::new(self.tensor()?, self.q.clone())
    }

    /// File contents describing `inst`, with 1-based indices.
    pub fn from_instance(inst: &TcpInstance, z: Option<Vec<f64>>, u: Option<Vec<f64>>) -> Self {
        let a = inst.tensor();
        ProblemFile {
            order: a.order(),
            dim: a.dim(),
            q: inst.q().to_vec(),
            z,
            u,
            entries: a
                .entries()
                .map(|(idx, val)| Entry {
                    idx: idx.iter().map(|i| i + 1).collect(),
                    val,
                })
                .collect(),
        }
    }
}
