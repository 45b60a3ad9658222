//! File formats: CSV for Q-matrices, dense matrices, and datasets; JSON for
//! parameters and reports.
//!
//! JSON numbers are written with the shortest representation that round-trips
//! the exact binary value, so saved parameters reload bit for bit and
//! repeated runs produce byte-identical files.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CoreParams, CovariateDesign, GDINACoeffs, ModelSpec, QMatrix, RegressionParams,
};
use crate::sim::Dataset;

// ---------------------------------------------------------------------------
// Q-matrix CSV
// ---------------------------------------------------------------------------

/// Parse a Q-matrix from CSV text: one row per item, comma-separated 0/1
/// entries, optional header line (detected by non-binary tokens).
pub fn parse_qmatrix(text: &str, path_label: &str) -> Result<QMatrix> {
    let mut entries = Vec::new();
    let mut labels = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split(',').map(str::trim).collect();
        let is_binary = tokens.iter().all(|t| *t == "0" || *t == "1");
        if !is_binary {
            if entries.is_empty() && labels.is_none() {
                labels = Some(tokens.iter().map(|t| t.to_string()).collect());
                continue;
            }
            let bad = tokens
                .iter()
                .find(|t| **t != "0" && **t != "1")
                .unwrap_or(&"");
            return Err(Error::Parse {
                path: path_label.to_string(),
                line: lineno + 1,
                message: format!("non-binary Q-matrix entry {bad:?}"),
            });
        }
        entries.push(tokens.iter().map(|t| u8::from(*t == "1")).collect());
    }
    if entries.is_empty() {
        return Err(Error::Parse {
            path: path_label.to_string(),
            line: 1,
            message: "no Q-matrix rows found".into(),
        });
    }
    let mut q = QMatrix::new(entries)?;
    q.labels = labels;
    q.validate()?;
    Ok(q)
}

pub fn load_qmatrix(path: &Path) -> Result<QMatrix> {
    let text = fs::read_to_string(path)?;
    parse_qmatrix(&text, &path.display().to_string())
}

pub fn save_qmatrix(q: &QMatrix, path: &Path) -> Result<()> {
    let mut out = String::new();
    if let Some(labels) = &q.labels {
        out.push_str(&labels.join(","));
        out.push('\n');
    }
    for row in &q.entries {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Parameter files
// ---------------------------------------------------------------------------

/// The on-disk parameter document. `spec` is mandatory; the parameter blocks
/// are optional and the checks degrade to whatever is available:
///
/// * `core` — covariate-free probabilities;
/// * `regression` — logit coefficients (zero-covariate probabilities are
///   derived when `core` is absent);
/// * `gdina` — attribute-effect coefficients; when present they replace the
///   response intercepts of `regression` (a zero regression block is created
///   if none was given);
/// * `design` — observed covariates for the design-rank check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub spec: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regression: Option<RegressionParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gdina: Option<GDINACoeffs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignFile>,
}

/// Covariate design as stored on disk: the response covariates may be given
/// once (shared across items) or per item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignFile {
    /// `x[i]` of length `p+1` with a leading 1.
    pub x: Vec<Vec<f64>>,
    /// Shared response covariates, `z_shared[i]` of length `q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_shared: Option<Vec<Vec<f64>>>,
    /// Per-item response covariates, `z_items[j][i]` of length `q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_items: Option<Vec<Vec<Vec<f64>>>>,
}

impl DesignFile {
    pub fn into_design(self, spec: &ModelSpec) -> Result<CovariateDesign> {
        let n = self.x.len();
        let z = match (self.z_shared, self.z_items) {
            (Some(shared), None) => vec![shared; spec.n_items()],
            (None, Some(items)) => items,
            (None, None) => vec![vec![vec![0.0; spec.q]; n]; spec.n_items()],
            (Some(_), Some(_)) => {
                return Err(Error::InvalidSpec(
                    "supply either shared or per-item response covariates, not both".into(),
                ))
            }
        };
        let design = CovariateDesign { x: self.x, z };
        design.validate(spec)?;
        Ok(design)
    }
}

pub fn load_params(path: &Path) -> Result<ParamsFile> {
    let text = fs::read_to_string(path)?;
    let file: ParamsFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    file.spec.validate()?;
    Ok(file)
}

pub fn save_params(file: &ParamsFile, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(file)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Dataset CSV
// ---------------------------------------------------------------------------

/// Write a dataset as CSV with a header row: the latent class (when stored),
/// the membership covariates, the first item's response covariates, and the
/// item responses.
pub fn save_dataset(data: &Dataset, path: &Path) -> Result<()> {
    let n = data.responses.len();
    let j_total = data.responses.first().map_or(0, Vec::len);
    let p = data.design.x.first().map_or(1, Vec::len) - 1;
    let q = data
        .design
        .z
        .first()
        .and_then(|zj| zj.first())
        .map_or(0, Vec::len);

    let mut header = Vec::new();
    if data.latent.is_some() {
        header.push("class".to_string());
    }
    header.extend((1..=p).map(|d| format!("x{d}")));
    header.extend((1..=q).map(|t| format!("z{t}")));
    header.extend((1..=j_total).map(|j| format!("item{j}")));

    let mut out = header.join(",");
    out.push('\n');
    for i in 0..n {
        let mut cells: Vec<String> = Vec::new();
        if let Some(latent) = &data.latent {
            cells.push(latent[i].to_string());
        }
        cells.extend(data.design.x[i][1..].iter().map(|v| format_float(*v)));
        if q > 0 {
            cells.extend(data.design.z[0][i].iter().map(|v| format_float(*v)));
        }
        cells.extend(data.responses[i].iter().map(|r| r.to_string()));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Shortest decimal that round-trips the binary value (matches the JSON
/// number formatting).
fn format_float(v: f64) -> String {
    let mut buf = ryu_format(v);
    // Trim a trailing ".0" for integral values to keep CSVs tidy.
    if buf.ends_with(".0") {
        buf.truncate(buf.len() - 2);
    }
    buf
}

fn ryu_format(v: f64) -> String {
    // serde_json's number formatting is shortest-round-trip.
    serde_json::to_string(&v).unwrap_or_else(|_| v.to_string())
}

// ---------------------------------------------------------------------------
// Dense matrix CSV (for the standalone rank commands)
// ---------------------------------------------------------------------------

/// Parse a dense real matrix from CSV (no header).
pub fn parse_matrix(text: &str, path_label: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split(',') {
            let v: f64 = token.trim().parse().map_err(|_| Error::Parse {
                path: path_label.to_string(),
                line: lineno + 1,
                message: format!("not a number: {token:?}"),
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    path: path_label.to_string(),
                    line: lineno + 1,
                    message: format!(
                        "row has {} entries, expected {}",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path_label.to_string(),
            line: 1,
            message: "no matrix rows found".into(),
        });
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn load_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Write a JSON value with stable formatting (pretty, fixed key order as
/// constructed, trailing newline).
pub fn save_json(value: &serde_json::Value, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}
