//! Model representation and link functions.
//!
//! A latent class model has `C` classes and `J` categorical items; item `j`
//! takes levels `0..M_j`. Class membership probabilities `eta` and
//! class-conditional response probabilities `theta` may depend on covariates
//! through multinomial-logit links. The cognitive-diagnosis variant restricts
//! the classes to binary attribute profiles governed by a Q-matrix, with the
//! response logits decomposed into attribute effects.
//!
//! Everything in this module is a pure function of immutable inputs.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default ceiling on the number of response patterns that will be
/// materialized in memory.
pub const DEFAULT_PATTERN_CAP: u128 = 1 << 22;

/// Tolerance used for exactness-style comparisons (masking restrictions,
/// round trips, vector equality of probability profiles).
pub const EXACT_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Model specification
// ---------------------------------------------------------------------------

/// Dimensions of a latent class model: items, per-item response levels,
/// class count, and covariate dimensions (`p` for class membership, `q` for
/// item responses).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Per-item numbers of response levels `M_j >= 2`; the length is `J`.
    pub levels: Vec<usize>,
    /// Number of latent classes `C >= 2` (a single-class model is allowed
    /// only internally for degenerate tests; public constructors enforce 2).
    pub n_classes: usize,
    /// Covariate dimension for class membership (excluding the intercept).
    #[serde(default)]
    pub p: usize,
    /// Covariate dimension for item responses.
    #[serde(default)]
    pub q: usize,
}

impl ModelSpec {
    pub fn new(levels: Vec<usize>, n_classes: usize, p: usize, q: usize) -> Result<Self> {
        let spec = ModelSpec {
            levels,
            n_classes,
            p,
            q,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Specification for an attribute-based model with `K` binary attributes,
    /// i.e. `C = 2^K` classes.
    pub fn for_attributes(levels: Vec<usize>, n_attributes: usize, p: usize, q: usize) -> Result<Self> {
        if n_attributes == 0 || n_attributes >= usize::BITS as usize {
            return Err(Error::InvalidSpec(format!(
                "attribute count {n_attributes} out of range"
            )));
        }
        Self::new(levels, 1usize << n_attributes, p, q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::InvalidSpec("at least one item is required".into()));
        }
        if let Some(&m) = self.levels.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidSpec(format!(
                "every item needs at least 2 levels, found {m}"
            )));
        }
        if self.n_classes < 1 {
            return Err(Error::InvalidSpec("class count must be positive".into()));
        }
        Ok(())
    }

    pub fn n_items(&self) -> usize {
        self.levels.len()
    }

    /// Total number of response patterns `S = prod_j M_j`, or `None` on
    /// overflow (in which case it certainly exceeds any practical cap).
    pub fn pattern_count(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
    }

    /// Number of free parameters of the covariate-free model:
    /// `C - 1` membership probabilities plus `C * sum_j (M_j - 1)`
    /// conditional response probabilities.
    pub fn free_param_count(&self) -> usize {
        let theta_free: usize = self.levels.iter().map(|&m| m - 1).sum();
        self.n_classes - 1 + self.n_classes * theta_free
    }
}

// ---------------------------------------------------------------------------
// Response pattern space
// ---------------------------------------------------------------------------

/// The enumerated space of response patterns, in lexicographic order with the
/// all-zeros reference pattern first. The reduced space excludes exactly the
/// reference pattern.
#[derive(Debug, Clone)]
pub struct PatternSpace {
    levels: Vec<usize>,
    patterns: Vec<Vec<usize>>,
}

impl PatternSpace {
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// All patterns, reference first.
    pub fn patterns(&self) -> &[Vec<usize>] {
        &self.patterns
    }

    /// The reference pattern (all zeros).
    pub fn reference(&self) -> &[usize] {
        &self.patterns[0]
    }

    /// Patterns of the reduced space (everything except the reference).
    pub fn nonreference(&self) -> &[Vec<usize>] {
        &self.patterns[1..]
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Position of a pattern in the lexicographic enumeration.
    pub fn index_of(&self, pattern: &[usize]) -> Option<usize> {
        if pattern.len() != self.levels.len() {
            return None;
        }
        let mut idx = 0usize;
        for (j, (&r, &m)) in pattern.iter().zip(&self.levels).enumerate() {
            if r >= m {
                return None;
            }
            let _ = j;
            idx = idx * m + r;
        }
        Some(idx)
    }
}

/// Enumerate all response patterns with the default size cap.
pub fn enumerate_patterns(spec: &ModelSpec) -> Result<PatternSpace> {
    enumerate_patterns_capped(spec, DEFAULT_PATTERN_CAP)
}

/// Enumerate all response patterns, refusing when `prod_j M_j` exceeds `cap`.
pub fn enumerate_patterns_capped(spec: &ModelSpec, cap: u128) -> Result<PatternSpace> {
    spec.validate()?;
    let total = spec.pattern_count().unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: format!("pattern space of size {total}"),
            limit: cap.min(u64::MAX as u128) as u64,
        });
    }
    let total = total as usize;
    let j = spec.n_items();
    let mut patterns = Vec::with_capacity(total);
    let mut current = vec![0usize; j];
    loop {
        patterns.push(current.clone());
        // Odometer increment with the last item varying fastest, so the
        // output is lexicographic on (r_1, ..., r_J).
        let mut pos = j;
        loop {
            if pos == 0 {
                return Ok(PatternSpace {
                    levels: spec.levels.clone(),
                    patterns,
                });
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < spec.levels[pos] {
                break;
            }
            current[pos] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Q-matrix and attribute profiles
// ---------------------------------------------------------------------------

/// Binary item-by-attribute structure: `entries[j][k] = 1` means item `j`
/// requires attribute `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QMatrix {
    pub entries: Vec<Vec<u8>>,
    /// Optional attribute labels, e.g. column headers from a CSV file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl QMatrix {
    pub fn new(entries: Vec<Vec<u8>>) -> Result<Self> {
        let q = QMatrix {
            entries,
            labels: None,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() || self.entries[0].is_empty() {
            return Err(Error::InvalidSpec("Q-matrix must be nonempty".into()));
        }
        let k = self.entries[0].len();
        for (j, row) in self.entries.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "Q-matrix row {j} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if row.iter().any(|&e| e > 1) {
                return Err(Error::InvalidSpec(format!(
                    "Q-matrix row {j} contains a non-binary entry"
                )));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != k {
                return Err(Error::DimensionMismatch(
                    "attribute label count does not match column count".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn n_items(&self) -> usize {
        self.entries.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.entries[0].len()
    }

    pub fn requires(&self, item: usize, attribute: usize) -> bool {
        self.entries[item][attribute] == 1
    }

    /// Bitmask of attributes required by `item` (bit `k` set iff required).
    pub fn required_mask(&self, item: usize) -> u32 {
        self.entries[item]
            .iter()
            .enumerate()
            .fold(0u32, |m, (k, &e)| m | (u32::from(e) << k))
    }

    /// Number of items requiring each attribute.
    pub fn column_sums(&self) -> Vec<usize> {
        let k = self.n_attributes();
        let mut sums = vec![0usize; k];
        for row in &self.entries {
            for (s, &e) in sums.iter_mut().zip(row) {
                *s += e as usize;
            }
        }
        sums
    }
}

/// Attribute profile of class `c` under the big-endian class indexing
/// `c = sum_k alpha_k 2^(K-1-k)`: attribute 0 is the highest-order bit.
pub fn alpha_of_class(class: usize, n_attributes: usize) -> Vec<u8> {
    (0..n_attributes)
        .map(|k| ((class >> (n_attributes - 1 - k)) & 1) as u8)
        .collect()
}

/// Inverse of [`alpha_of_class`].
pub fn class_of_alpha(alpha: &[u8]) -> usize {
    alpha.iter().fold(0usize, |c, &a| (c << 1) | a as usize)
}

/// Bitmask (bit `k` = attribute `k`) of the profile of class `c`.
pub fn alpha_mask_of_class(class: usize, n_attributes: usize) -> u32 {
    (0..n_attributes).fold(0u32, |m, k| {
        m | ((((class >> (n_attributes - 1 - k)) & 1) as u32) << k)
    })
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Covariate-free parameters: class membership probabilities and
/// class-conditional response probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreParams {
    /// Class membership probabilities, length `C`, summing to one.
    pub eta: Vec<f64>,
    /// `theta[j][c][r]`: probability of level `r` on item `j` in class `c`;
    /// each `theta[j][c]` sums to one.
    pub theta: Vec<Vec<Vec<f64>>>,
}

impl CoreParams {
    pub fn validate(&self, spec: &ModelSpec) -> Result<()> {
        if self.eta.len() != spec.n_classes {
            return Err(Error::DimensionMismatch(format!(
                "eta has length {}, expected {}",
                self.eta.len(),
                spec.n_classes
            )));
        }
        if self.theta.len() != spec.n_items() {
            return Err(Error::DimensionMismatch(format!(
                "theta has {} items, expected {}",
                self.theta.len(),
                spec.n_items()
            )));
        }
        check_simplex(&self.eta, "eta")?;
        for (j, item) in self.theta.iter().enumerate() {
            if item.len() != spec.n_classes {
                return Err(Error::DimensionMismatch(format!(
                    "theta[{j}] has {} classes, expected {}",
                    item.len(),
                    spec.n_classes
                )));
            }
            for (c, probs) in item.iter().enumerate() {
                if probs.len() != spec.levels[j] {
                    return Err(Error::DimensionMismatch(format!(
                        "theta[{j}][{c}] has {} levels, expected {}",
                        probs.len(),
                        spec.levels[j]
                    )));
                }
                check_simplex(probs, &format!("theta[{j}][{c}]"))?;
            }
        }
        Ok(())
    }

    /// True when every probability is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.eta.iter().all(|&e| e > 0.0)
            && self
                .theta
                .iter()
                .flatten()
                .flatten()
                .all(|&t| t > 0.0)
    }
}

fn check_simplex(v: &[f64], what: &str) -> Result<()> {
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidSpec(format!(
            "{what} must consist of finite nonnegative entries"
        )));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidSpec(format!(
            "{what} sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Logit-scale regression coefficients.
///
/// `beta` drives class membership: column `c` holds the `p+1` coefficients of
/// class `c`, with column 0 (the reference class) fixed to zero. `gamma` and
/// `lambda` drive item responses: `gamma[j][c][r]` is the intercept of level
/// `r` (level 0 fixed to zero) and `lambda[j][r]` the length-`q` slope shared
/// across classes (level 0 fixed to zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionParams {
    /// `beta[d][c]` for `d` in `0..=p`, `c` in `0..C`; `beta[d][0] = 0`.
    pub beta: Vec<Vec<f64>>,
    /// `gamma[j][c][r]` with `gamma[j][c][0] = 0`.
    pub gamma: Vec<Vec<Vec<f64>>>,
    /// `lambda[j][r]` of length `q`, with `lambda[j][0]` all zeros.
    pub lambda: Vec<Vec<Vec<f64>>>,
}

impl RegressionParams {
    /// All-zero coefficients of the right shapes (uniform links).
    pub fn zeros(spec: &ModelSpec) -> Self {
        RegressionParams {
            beta: vec![vec![0.0; spec.n_classes]; spec.p + 1],
            gamma: spec
                .levels
                .iter()
                .map(|&m| vec![vec![0.0; m]; spec.n_classes])
                .collect(),
            lambda: spec
                .levels
                .iter()
                .map(|&m| vec![vec![0.0; spec.q]; m])
                .collect(),
        }
    }

    pub fn validate(&self, spec: &ModelSpec) -> Result<()> {
        if self.beta.len() != spec.p + 1 {
            return Err(Error::DimensionMismatch(format!(
                "beta has {} rows, expected {}",
                self.beta.len(),
                spec.p + 1
            )));
        }
        for (d, row) in self.beta.iter().enumerate() {
            if row.len() != spec.n_classes {
                return Err(Error::DimensionMismatch(format!(
                    "beta row {d} has {} entries, expected {}",
                    row.len(),
                    spec.n_classes
                )));
            }
            if row[0] != 0.0 {
                return Err(Error::InvalidSpec(
                    "reference-class beta column must be exactly zero".into(),
                ));
            }
        }
        if self.gamma.len() != spec.n_items() || self.lambda.len() != spec.n_items() {
            return Err(Error::DimensionMismatch(
                "gamma/lambda item count does not match the specification".into(),
            ));
        }
        for (j, (g_item, l_item)) in self.gamma.iter().zip(&self.lambda).enumerate() {
            if g_item.len() != spec.n_classes {
                return Err(Error::DimensionMismatch(format!(
                    "gamma[{j}] has {} classes, expected {}",
                    g_item.len(),
                    spec.n_classes
                )));
            }
            for (c, levels) in g_item.iter().enumerate() {
                if levels.len() != spec.levels[j] {
                    return Err(Error::DimensionMismatch(format!(
                        "gamma[{j}][{c}] has {} levels, expected {}",
                        levels.len(),
                        spec.levels[j]
                    )));
                }
                if levels[0] != 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "gamma[{j}][{c}][0] must be exactly zero"
                    )));
                }
            }
            if l_item.len() != spec.levels[j] {
                return Err(Error::DimensionMismatch(format!(
                    "lambda[{j}] has {} levels, expected {}",
                    l_item.len(),
                    spec.levels[j]
                )));
            }
            for (r, slope) in l_item.iter().enumerate() {
                if slope.len() != spec.q {
                    return Err(Error::DimensionMismatch(format!(
                        "lambda[{j}][{r}] has length {}, expected {}",
                        slope.len(),
                        spec.q
                    )));
                }
                if r == 0 && slope.iter().any(|&s| s != 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "lambda[{j}][0] must be exactly zero"
                    )));
                }
            }
        }
        self.check_finite()
    }

    pub fn check_finite(&self) -> Result<()> {
        let beta_ok = self.beta.iter().flatten().all(|v| v.is_finite());
        let gamma_ok = self.gamma.iter().flatten().flatten().all(|v| v.is_finite());
        let lambda_ok = self.lambda.iter().flatten().flatten().all(|v| v.is_finite());
        if beta_ok && gamma_ok && lambda_ok {
            Ok(())
        } else {
            Err(Error::NonFinite(
                "regression coefficients contain a NaN or infinity".into(),
            ))
        }
    }
}

/// Observed covariates: `x` rows (with leading intercept 1) drive class
/// membership, `z[j]` rows drive the responses of item `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateDesign {
    /// `x[i]` has length `p+1` with `x[i][0] = 1`.
    pub x: Vec<Vec<f64>>,
    /// `z[j][i]` has length `q`.
    pub z: Vec<Vec<Vec<f64>>>,
}

impl CovariateDesign {
    pub fn n_subjects(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self, spec: &ModelSpec) -> Result<()> {
        let n = self.x.len();
        for (i, row) in self.x.iter().enumerate() {
            if row.len() != spec.p + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "x row {i} has length {}, expected {}",
                    row.len(),
                    spec.p + 1
                )));
            }
            if row[0] != 1.0 {
                return Err(Error::InvalidSpec(format!(
                    "x row {i} must start with the intercept 1"
                )));
            }
        }
        if self.z.len() != spec.n_items() {
            return Err(Error::DimensionMismatch(format!(
                "z has {} items, expected {}",
                self.z.len(),
                spec.n_items()
            )));
        }
        for (j, zj) in self.z.iter().enumerate() {
            if zj.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "z[{j}] has {} rows, expected {n}",
                    zj.len()
                )));
            }
            for (i, row) in zj.iter().enumerate() {
                if row.len() != spec.q {
                    return Err(Error::DimensionMismatch(format!(
                        "z[{j}][{i}] has length {}, expected {}",
                        row.len(),
                        spec.q
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.x.iter().flatten().all(|v| v.is_finite())
            && self.z.iter().flatten().flatten().all(|v| v.is_finite())
    }
}

// ---------------------------------------------------------------------------
// Attribute-effect (G-DINA style) coefficients
// ---------------------------------------------------------------------------

/// Attribute-effect decomposition of the response logits: for each item `j`
/// and level `r >= 1`, a coefficient per subset of the attributes required by
/// the item (including the empty set, the intercept).
///
/// Subsets are stored as bitmasks over attribute indices; in JSON they are
/// keyed by comma-joined zero-based attribute indices, with `""` for the
/// intercept (e.g. `""`, `"0"`, `"0,2"`).
#[derive(Debug, Clone, PartialEq)]
pub struct GDINACoeffs {
    /// `coeffs[j][r-1]`: map from attribute-subset bitmask to coefficient.
    pub coeffs: Vec<Vec<BTreeMap<u32, f64>>>,
}

impl GDINACoeffs {
    pub fn validate(&self, q: &QMatrix, spec: &ModelSpec) -> Result<()> {
        if self.coeffs.len() != q.n_items() || self.coeffs.len() != spec.n_items() {
            return Err(Error::DimensionMismatch(
                "attribute-effect coefficient item count mismatch".into(),
            ));
        }
        for (j, item) in self.coeffs.iter().enumerate() {
            if item.len() != spec.levels[j] - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "item {j} has coefficients for {} levels, expected {}",
                    item.len(),
                    spec.levels[j] - 1
                )));
            }
            let req = q.required_mask(j);
            let expected = 1usize << req.count_ones();
            for (r, map) in item.iter().enumerate() {
                if map.len() != expected {
                    return Err(Error::DimensionMismatch(format!(
                        "item {j} level {} has {} coefficients, expected {expected}",
                        r + 1,
                        map.len()
                    )));
                }
                if let Some((&mask, _)) = map.iter().find(|(&mask, _)| mask & !req != 0) {
                    return Err(Error::InvalidSpec(format!(
                        "item {j} level {} has a coefficient for attributes {mask:#b} \
                         not required by the item",
                        r + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn mask_to_label(mask: u32) -> String {
    let mut parts = Vec::new();
    let mut m = mask;
    while m != 0 {
        let k = m.trailing_zeros();
        parts.push(k.to_string());
        m &= m - 1;
    }
    parts.join(",")
}

fn label_to_mask(label: &str) -> std::result::Result<u32, String> {
    if label.is_empty() {
        return Ok(0);
    }
    let mut mask = 0u32;
    for part in label.split(',') {
        let k: u32 = part
            .trim()
            .parse()
            .map_err(|_| format!("bad attribute index {part:?}"))?;
        if k >= 32 {
            return Err(format!("attribute index {k} out of range"));
        }
        mask |= 1 << k;
    }
    Ok(mask)
}

impl Serialize for GDINACoeffs {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let as_labels: Vec<Vec<BTreeMap<String, f64>>> = self
            .coeffs
            .iter()
            .map(|item| {
                item.iter()
                    .map(|map| {
                        map.iter()
                            .map(|(&mask, &v)| (mask_to_label(mask), v))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        as_labels.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GDINACoeffs {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let as_labels: Vec<Vec<BTreeMap<String, f64>>> = Deserialize::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(as_labels.len());
        for item in as_labels {
            let mut per_level = Vec::with_capacity(item.len());
            for map in item {
                let mut parsed = BTreeMap::new();
                for (label, v) in map {
                    let mask = label_to_mask(&label).map_err(D::Error::custom)?;
                    if parsed.insert(mask, v).is_some() {
                        return Err(D::Error::custom(format!(
                            "duplicate attribute subset {label:?}"
                        )));
                    }
                }
                per_level.push(parsed);
            }
            coeffs.push(per_level);
        }
        Ok(GDINACoeffs { coeffs })
    }
}

// ---------------------------------------------------------------------------
// Log-odds transform of core parameters
// ---------------------------------------------------------------------------

/// Log-odds reparameterization of [`CoreParams`]: `epsilon[c] =
/// ln(eta_c / eta_0)` and `omega[j][c][r] = ln(theta_jrc / theta_j0c)`.
/// The additive gauge of `epsilon` is free; the forward transform pins
/// `epsilon[0] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedParams {
    pub epsilon: Vec<f64>,
    pub omega: Vec<Vec<Vec<f64>>>,
}

// ---------------------------------------------------------------------------
// Link functions
// ---------------------------------------------------------------------------

/// Numerically stable softmax; scores must be finite.
fn softmax(scores: &[f64], what: &str) -> Result<Vec<f64>> {
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite(format!("non-finite score in {what}")));
    }
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    Ok(exps.iter().map(|&e| e / total).collect())
}

/// Class membership probabilities of a subject with covariate row `x`
/// (length `p+1`, leading 1): softmax over the linear scores `x . beta_c`,
/// with the reference class pinned to score zero by `beta[.][0] = 0`.
pub fn eta_from_beta(beta: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>> {
    if beta.is_empty() {
        return Err(Error::DimensionMismatch("beta has no rows".into()));
    }
    if x.len() != beta.len() {
        return Err(Error::DimensionMismatch(format!(
            "covariate row has length {}, beta has {} rows",
            x.len(),
            beta.len()
        )));
    }
    let c = beta[0].len();
    let mut scores = vec![0.0f64; c];
    for (xd, row) in x.iter().zip(beta) {
        for (s, b) in scores.iter_mut().zip(row) {
            *s += xd * b;
        }
    }
    softmax(&scores, "class membership link")
}

/// Item response probabilities of a subject with per-item covariate rows
/// `z[j]` (length `q`): for each item and class, a softmax over the scores
/// `gamma[j][c][r] + lambda[j][r] . z[j]`, with level 0 pinned to zero.
pub fn theta_from_gamma_lambda(
    gamma: &[Vec<Vec<f64>>],
    lambda: &[Vec<Vec<f64>>],
    z: &[Vec<f64>],
) -> Result<Vec<Vec<Vec<f64>>>> {
    if gamma.len() != lambda.len() || gamma.len() != z.len() {
        return Err(Error::DimensionMismatch(
            "gamma, lambda and z must agree on the item count".into(),
        ));
    }
    let mut theta = Vec::with_capacity(gamma.len());
    for (j, ((g_item, l_item), zj)) in gamma.iter().zip(lambda).zip(z).enumerate() {
        let mut per_class = Vec::with_capacity(g_item.len());
        for levels in g_item {
            if levels.len() != l_item.len() {
                return Err(Error::DimensionMismatch(format!(
                    "gamma[{j}] and lambda[{j}] disagree on the level count"
                )));
            }
            let scores: Vec<f64> = levels
                .iter()
                .zip(l_item)
                .map(|(&g, slope)| {
                    let dot: f64 = slope.iter().zip(zj).map(|(l, zv)| l * zv).sum();
                    g + dot
                })
                .collect();
            per_class.push(softmax(&scores, &format!("item {j} response link"))?);
        }
        theta.push(per_class);
    }
    Ok(theta)
}

/// Response probabilities from the logit intercepts alone (zero covariates).
pub fn theta_from_gamma(gamma: &[Vec<Vec<f64>>]) -> Result<Vec<Vec<Vec<f64>>>> {
    gamma
        .iter()
        .enumerate()
        .map(|(j, g_item)| {
            g_item
                .iter()
                .map(|levels| softmax(levels, &format!("item {j} response link")))
                .collect()
        })
        .collect()
}

/// The marginal probability of every response pattern:
/// `P(r) = sum_c eta_c prod_j theta[j][c][r_j]`, ordered as in `space`.
pub fn response_distribution(params: &CoreParams, space: &PatternSpace) -> Result<Vec<f64>> {
    if params.theta.len() != space.levels().len() {
        return Err(Error::DimensionMismatch(
            "parameters and pattern space disagree on the item count".into(),
        ));
    }
    let dist = space
        .patterns()
        .iter()
        .map(|pattern| {
            params
                .eta
                .iter()
                .enumerate()
                .map(|(c, &eta_c)| {
                    let prod: f64 = pattern
                        .iter()
                        .enumerate()
                        .map(|(j, &r)| params.theta[j][c][r])
                        .product();
                    eta_c * prod
                })
                .sum()
        })
        .collect();
    Ok(dist)
}

// ---------------------------------------------------------------------------
// Attribute-effect decomposition <-> logit intercepts
// ---------------------------------------------------------------------------

/// Expand attribute-effect coefficients into per-class logit intercepts:
/// `gamma[j][c][r]` is the sum of coefficients over all subsets of the
/// required attributes mastered by class `c` (level 0 stays zero).
pub fn gdina_to_gamma(b: &GDINACoeffs, q: &QMatrix, spec: &ModelSpec) -> Result<Vec<Vec<Vec<f64>>>> {
    b.validate(q, spec)?;
    let k = q.n_attributes();
    if spec.n_classes != 1usize << k {
        return Err(Error::InvalidSpec(format!(
            "class count {} is not 2^{k}",
            spec.n_classes
        )));
    }
    let mut gamma = Vec::with_capacity(spec.n_items());
    for (j, item) in b.coeffs.iter().enumerate() {
        let req = q.required_mask(j);
        let mut per_class = Vec::with_capacity(spec.n_classes);
        for c in 0..spec.n_classes {
            let mastered = alpha_mask_of_class(c, k) & req;
            let mut levels = vec![0.0f64; spec.levels[j]];
            for (r, map) in item.iter().enumerate() {
                levels[r + 1] = map
                    .iter()
                    .filter(|(&mask, _)| mask & !mastered == 0)
                    .map(|(_, &v)| v)
                    .sum();
            }
            per_class.push(levels);
        }
        gamma.push(per_class);
    }
    Ok(gamma)
}

/// Invert [`gdina_to_gamma`] by Moebius inversion over attribute subsets.
///
/// Fails when `gamma` is not constant across classes sharing the same masked
/// profile for an item, since then no attribute-effect decomposition exists.
pub fn gamma_to_gdina(gamma: &[Vec<Vec<f64>>], q: &QMatrix, spec: &ModelSpec) -> Result<GDINACoeffs> {
    let k = q.n_attributes();
    if spec.n_classes != 1usize << k {
        return Err(Error::InvalidSpec(format!(
            "class count {} is not 2^{k}",
            spec.n_classes
        )));
    }
    if gamma.len() != q.n_items() {
        return Err(Error::DimensionMismatch(
            "gamma and Q-matrix disagree on the item count".into(),
        ));
    }
    let mut coeffs = Vec::with_capacity(gamma.len());
    for (j, g_item) in gamma.iter().enumerate() {
        let req = q.required_mask(j);
        // Representative gamma value per masked profile, with a consistency
        // check across the classes mapped to that profile.
        let mut by_profile: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for (c, levels) in g_item.iter().enumerate() {
            let mastered = alpha_mask_of_class(c, k) & req;
            match by_profile.get(&mastered) {
                None => {
                    by_profile.insert(mastered, levels.clone());
                }
                Some(seen) => {
                    let consistent = seen
                        .iter()
                        .zip(levels)
                        .all(|(a, b)| (a - b).abs() <= EXACT_TOL);
                    if !consistent {
                        return Err(Error::NotGdinaRepresentable(format!(
                            "item {j}: gamma differs across classes with the same \
                             masked attribute profile"
                        )));
                    }
                }
            }
        }
        let n_levels = spec.levels[j];
        let mut per_level = Vec::with_capacity(n_levels - 1);
        for r in 1..n_levels {
            let mut map = BTreeMap::new();
            // b[B] = sum over subsets A of B of (-1)^{|B \ A|} gamma(A).
            let mut subset = req;
            loop {
                let b_mask = subset;
                let mut value = 0.0f64;
                let mut a = b_mask;
                loop {
                    let sign = if (b_mask.count_ones() - a.count_ones()) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    value += sign * by_profile[&a][r];
                    if a == 0 {
                        break;
                    }
                    a = (a - 1) & b_mask;
                }
                map.insert(b_mask, value);
                if subset == 0 {
                    break;
                }
                subset = (subset - 1) & req;
            }
            per_level.push(map);
        }
        coeffs.push(per_level);
    }
    Ok(GDINACoeffs { coeffs })
}

// ---------------------------------------------------------------------------
// Log-odds transform
// ---------------------------------------------------------------------------

/// Map strictly positive core parameters to their log-odds coordinates.
pub fn lemma1_forward(params: &CoreParams) -> Result<TransformedParams> {
    if !params.is_strictly_positive() {
        return Err(Error::NonPositiveProbability(
            "log-odds transform requires strictly positive probabilities".into(),
        ));
    }
    let eta0 = params.eta[0];
    let epsilon = params.eta.iter().map(|&e| (e / eta0).ln()).collect();
    let omega = params
        .theta
        .iter()
        .map(|item| {
            item.iter()
                .map(|probs| {
                    let base = probs[0];
                    probs.iter().map(|&t| (t / base).ln()).collect()
                })
                .collect()
        })
        .collect();
    Ok(TransformedParams { epsilon, omega })
}

/// Invert [`lemma1_forward`]; accepts any additive gauge of `epsilon`.
pub fn lemma1_backward(t: &TransformedParams) -> Result<CoreParams> {
    let eta = softmax(&t.epsilon, "log-odds class coordinates")?;
    let theta = t
        .omega
        .iter()
        .enumerate()
        .map(|(j, item)| {
            item.iter()
                .map(|levels| softmax(levels, &format!("log-odds item {j} coordinates")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoreParams { eta, theta })
}

// ---------------------------------------------------------------------------
// Per-subject parameters
// ---------------------------------------------------------------------------

/// The class membership and response probabilities of subject `i` under the
/// regression links and the observed covariates.
pub fn per_subject_params(
    reg: &RegressionParams,
    design: &CovariateDesign,
    i: usize,
) -> Result<CoreParams> {
    if i >= design.n_subjects() {
        return Err(Error::DimensionMismatch(format!(
            "subject index {i} out of range ({} subjects)",
            design.n_subjects()
        )));
    }
    let eta = eta_from_beta(&reg.beta, &design.x[i])?;
    let z_rows: Vec<Vec<f64>> = design.z.iter().map(|zj| zj[i].clone()).collect();
    let theta = theta_from_gamma_lambda(&reg.gamma, &reg.lambda, &z_rows)?;
    Ok(CoreParams { eta, theta })
}

/// Parameters of the hypothetical zero-covariate subject: intercept-only
/// class scores and response scores.
pub fn zero_covariate_params(reg: &RegressionParams) -> Result<CoreParams> {
    let beta_intercepts = &reg.beta[0];
    let eta = softmax(beta_intercepts, "class membership link")?;
    let theta = theta_from_gamma(&reg.gamma)?;
    Ok(CoreParams { eta, theta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pattern_enumeration_binary_pair() {
        let spec = ModelSpec::new(vec![2, 2], 2, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        assert_eq!(
            space.patterns(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(space.reference(), &[0, 0]);
        assert_eq!(space.nonreference().len(), 3);
    }

    #[test]
    fn pattern_enumeration_single_triadic_item() {
        let spec = ModelSpec::new(vec![3], 2, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        assert_eq!(space.patterns(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn pattern_enumeration_respects_cap() {
        let spec = ModelSpec::new(vec![2; 25], 128, 0, 0).unwrap();
        assert_eq!(spec.pattern_count(), Some(1 << 25));
        match enumerate_patterns(&spec) {
            Err(Error::CapExceeded { .. }) => {}
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn pattern_index_round_trip() {
        let spec = ModelSpec::new(vec![2, 3, 2], 2, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        for (i, pattern) in space.patterns().iter().enumerate() {
            assert_eq!(space.index_of(pattern), Some(i));
        }
        assert_eq!(space.index_of(&[0, 3, 0]), None);
    }

    #[test]
    fn eta_symmetric_under_zero_beta() {
        let beta = vec![vec![0.0; 3]];
        let eta = eta_from_beta(&beta, &[1.0]).unwrap();
        for &e in &eta {
            assert!(close(e, 1.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn eta_log_three_intercept() {
        let beta = vec![vec![0.0, 3.0f64.ln()]];
        let eta = eta_from_beta(&beta, &[1.0]).unwrap();
        assert!(close(eta[0], 0.25, 1e-15));
        assert!(close(eta[1], 0.75, 1e-15));
    }

    #[test]
    fn eta_matches_extended_precision_oracle() {
        // C=3, p=1, x=(1,2), beta columns (0,0), (1,-1), (0.5,0.5);
        // expected values frozen from a 50-digit softmax evaluation of the
        // resulting scores (0, -1, 1.5).
        let beta = vec![vec![0.0, 1.0, 0.5], vec![0.0, -1.0, 0.5]];
        let eta = eta_from_beta(&beta, &[1.0, 2.0]).unwrap();
        assert!(close(eta[0], 0.17095278019779027376, 1e-15));
        assert!(close(eta[1], 0.062890013245867496866, 1e-15));
        assert!(close(eta[2], 0.76615720655634222937, 1e-15));
    }

    #[test]
    fn eta_rejects_non_finite_scores() {
        let beta = vec![vec![0.0, f64::NAN]];
        match eta_from_beta(&beta, &[1.0]) {
            Err(Error::NonFinite(_)) => {}
            other => panic!("expected finiteness error, got {other:?}"),
        }
    }

    #[test]
    fn theta_uniform_under_zero_coefficients() {
        let gamma = vec![vec![vec![0.0, 0.0]]];
        let lambda = vec![vec![vec![], vec![]]];
        let theta = theta_from_gamma_lambda(&gamma, &lambda, &[vec![]]).unwrap();
        assert!(close(theta[0][0][0], 0.5, 1e-15));
        assert!(close(theta[0][0][1], 0.5, 1e-15));
    }

    #[test]
    fn theta_log_nine_intercept() {
        let gamma = vec![vec![vec![0.0, 9.0f64.ln()]]];
        let lambda = vec![vec![vec![], vec![]]];
        let theta = theta_from_gamma_lambda(&gamma, &lambda, &[vec![]]).unwrap();
        assert!(close(theta[0][0][0], 0.1, 1e-14));
        assert!(close(theta[0][0][1], 0.9, 1e-14));
    }

    #[test]
    fn theta_matches_extended_precision_oracle() {
        // One item with 3 levels, q=2, z=(1,-1); expected values frozen from
        // a 50-digit softmax evaluation of the scores (0, 1.05, -1.2).
        let gamma = vec![vec![vec![0.0, 0.3, -0.2]]];
        let lambda = vec![vec![vec![0.0, 0.0], vec![0.5, -0.25], vec![-0.4, 0.6]]];
        let theta = theta_from_gamma_lambda(&gamma, &lambda, &[vec![1.0, -1.0]]).unwrap();
        assert!(close(theta[0][0][0], 0.2404513562436146882, 1e-14));
        assert!(close(theta[0][0][1], 0.68712608700936964356, 1e-14));
        assert!(close(theta[0][0][2], 0.072422556747015668243, 1e-14));
    }

    #[test]
    fn distribution_single_class_factorizes() {
        let spec = ModelSpec::new(vec![2, 2], 1, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        let params = CoreParams {
            eta: vec![1.0],
            theta: vec![
                vec![vec![0.3, 0.7]],
                vec![vec![0.6, 0.4]],
            ],
        };
        let dist = response_distribution(&params, &space).unwrap();
        assert!(close(dist[0], 0.3 * 0.6, 1e-15));
        assert!(close(dist[3], 0.7 * 0.4, 1e-15));
    }

    #[test]
    fn distribution_uniform_theta_is_uniform() {
        let spec = ModelSpec::new(vec![2, 2], 2, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        let params = CoreParams {
            eta: vec![0.3, 0.7],
            theta: vec![vec![vec![0.5, 0.5]; 2]; 2],
        };
        let dist = response_distribution(&params, &space).unwrap();
        for &p in &dist {
            assert!(close(p, 0.25, 1e-15));
        }
    }

    #[test]
    fn distribution_matches_brute_force_double_sum() {
        let spec = ModelSpec::new(vec![2, 2], 2, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        let params = CoreParams {
            eta: vec![0.35, 0.65],
            theta: vec![
                vec![vec![0.2, 0.8], vec![0.7, 0.3]],
                vec![vec![0.55, 0.45], vec![0.1, 0.9]],
            ],
        };
        let dist = response_distribution(&params, &space).unwrap();
        for (pattern, &p) in space.patterns().iter().zip(&dist) {
            let mut expected = 0.0;
            for c in 0..2 {
                expected +=
                    params.eta[c] * params.theta[0][c][pattern[0]] * params.theta[1][c][pattern[1]];
            }
            assert!(close(p, expected, 1e-15));
        }
        let total: f64 = dist.iter().sum();
        assert!(close(total, 1.0, 1e-12));
    }

    #[test]
    fn class_alpha_round_trip() {
        for k in 1..=4 {
            for c in 0..(1usize << k) {
                let alpha = alpha_of_class(c, k);
                assert_eq!(class_of_alpha(&alpha), c);
            }
        }
        // Attribute 0 is the high-order bit of the class index.
        assert_eq!(alpha_of_class(4, 3), vec![1, 0, 0]);
        assert_eq!(alpha_of_class(1, 3), vec![0, 0, 1]);
    }

    #[test]
    fn gdina_intercept_only_is_constant() {
        let q = QMatrix::new(vec![vec![1, 1]]).unwrap();
        let spec = ModelSpec::for_attributes(vec![2], 2, 0, 0).unwrap();
        let mut map = BTreeMap::new();
        map.insert(0u32, 0.4);
        map.insert(1u32, 0.0);
        map.insert(2u32, 0.0);
        map.insert(3u32, 0.0);
        let b = GDINACoeffs {
            coeffs: vec![vec![map]],
        };
        let gamma = gdina_to_gamma(&b, &q, &spec).unwrap();
        for c in 0..4 {
            assert!(close(gamma[0][c][1], 0.4, 1e-15));
        }
    }

    #[test]
    fn gdina_single_attribute_main_effect() {
        let q = QMatrix::new(vec![vec![1]]).unwrap();
        let spec = ModelSpec::for_attributes(vec![2], 1, 0, 0).unwrap();
        let mut map = BTreeMap::new();
        map.insert(0u32, -1.0);
        map.insert(1u32, 2.5);
        let b = GDINACoeffs {
            coeffs: vec![vec![map]],
        };
        let gamma = gdina_to_gamma(&b, &q, &spec).unwrap();
        assert!(close(gamma[0][0][1], -1.0, 1e-15)); // alpha = 0
        assert!(close(gamma[0][1][1], 1.5, 1e-15)); // alpha = 1
    }

    #[test]
    fn gdina_two_attribute_subset_sums() {
        let q = QMatrix::new(vec![vec![1, 1]]).unwrap();
        let spec = ModelSpec::for_attributes(vec![2], 2, 0, 0).unwrap();
        let (b0, b1, b2, b12) = (0.2, 0.9, -0.4, 0.7);
        let mut map = BTreeMap::new();
        map.insert(0u32, b0);
        map.insert(0b01u32, b1); // attribute 0
        map.insert(0b10u32, b2); // attribute 1
        map.insert(0b11u32, b12);
        let b = GDINACoeffs {
            coeffs: vec![vec![map]],
        };
        let gamma = gdina_to_gamma(&b, &q, &spec).unwrap();
        // Classes in big-endian alpha order: 0=(0,0), 1=(0,1), 2=(1,0), 3=(1,1).
        assert!(close(gamma[0][0][1], b0, 1e-15));
        assert!(close(gamma[0][1][1], b0 + b2, 1e-15));
        assert!(close(gamma[0][2][1], b0 + b1, 1e-15));
        assert!(close(gamma[0][3][1], b0 + b1 + b2 + b12, 1e-15));

        let back = gamma_to_gdina(&gamma, &q, &spec).unwrap();
        for (mask, &v) in &b.coeffs[0][0] {
            assert!(close(back.coeffs[0][0][mask], v, 1e-12));
        }
    }

    #[test]
    fn gamma_to_gdina_rejects_unmaskable_gamma() {
        // Item requires only attribute 0, but gamma varies with attribute 1.
        let q = QMatrix::new(vec![vec![1, 0]]).unwrap();
        let spec = ModelSpec::for_attributes(vec![2], 2, 0, 0).unwrap();
        let gamma = vec![vec![
            vec![0.0, 0.1],
            vec![0.0, 0.2],
            vec![0.0, 0.3],
            vec![0.0, 0.4],
        ]];
        match gamma_to_gdina(&gamma, &q, &spec) {
            Err(Error::NotGdinaRepresentable(_)) => {}
            other => panic!("expected representability error, got {other:?}"),
        }
    }

    #[test]
    fn log_odds_uniform_params_are_zero() {
        let params = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![vec![vec![0.5, 0.5]; 2]],
        };
        let t = lemma1_forward(&params).unwrap();
        assert!(t.epsilon.iter().all(|&e| e == 0.0));
        assert!(t.omega.iter().flatten().flatten().all(|&w| w == 0.0));
    }

    #[test]
    fn log_odds_ratio_matches_ln_three() {
        let params = CoreParams {
            eta: vec![0.25, 0.75],
            theta: vec![vec![vec![0.5, 0.5]; 2]],
        };
        let t = lemma1_forward(&params).unwrap();
        assert!(close(t.epsilon[1] - t.epsilon[0], 3.0f64.ln(), 1e-14));
    }

    #[test]
    fn log_odds_round_trip() {
        let params = CoreParams {
            eta: vec![0.2, 0.5, 0.3],
            theta: vec![
                vec![vec![0.1, 0.9], vec![0.6, 0.4], vec![0.45, 0.55]],
                vec![
                    vec![0.2, 0.3, 0.5],
                    vec![0.7, 0.1, 0.2],
                    vec![0.25, 0.5, 0.25],
                ],
            ],
        };
        let back = lemma1_backward(&lemma1_forward(&params).unwrap()).unwrap();
        for (a, b) in params.eta.iter().zip(&back.eta) {
            assert!(close(*a, *b, 1e-12));
        }
        for (ia, ib) in params.theta.iter().zip(&back.theta) {
            for (ca, cb) in ia.iter().zip(ib) {
                for (a, b) in ca.iter().zip(cb) {
                    assert!(close(*a, *b, 1e-12));
                }
            }
        }
    }

    #[test]
    fn log_odds_rejects_zero_probability() {
        let params = CoreParams {
            eta: vec![0.0, 1.0],
            theta: vec![vec![vec![0.5, 0.5]; 2]],
        };
        match lemma1_forward(&params) {
            Err(Error::NonPositiveProbability(_)) => {}
            other => panic!("expected positivity error, got {other:?}"),
        }
    }

    #[test]
    fn per_subject_zero_covariates_depend_on_intercepts_only() {
        let spec = ModelSpec::new(vec![2, 2], 2, 1, 1).unwrap();
        let mut reg = RegressionParams::zeros(&spec);
        reg.beta[0][1] = 0.7;
        reg.beta[1][1] = -2.0; // slope must not matter at x = (1, 0)
        reg.gamma[0][1][1] = 1.3;
        reg.lambda[0][1][0] = 5.0; // slope must not matter at z = 0
        reg.lambda[1][1][0] = -5.0;
        let design = CovariateDesign {
            x: vec![vec![1.0, 0.0]],
            z: vec![vec![vec![0.0]], vec![vec![0.0]]],
        };
        let params = per_subject_params(&reg, &design, 0).unwrap();
        let reference = zero_covariate_params(&reg).unwrap();
        assert_eq!(params.eta, reference.eta);
        assert_eq!(params.theta, reference.theta);
    }

    #[test]
    fn per_subject_all_zero_regression_is_uniform() {
        let spec = ModelSpec::new(vec![2, 3], 2, 1, 1).unwrap();
        let reg = RegressionParams::zeros(&spec);
        let design = CovariateDesign {
            x: vec![vec![1.0, 0.4]],
            z: vec![vec![vec![-0.3]], vec![vec![2.0]]],
        };
        let params = per_subject_params(&reg, &design, 0).unwrap();
        assert!(params.eta.iter().all(|&e| close(e, 0.5, 1e-15)));
        assert!(params.theta[0]
            .iter()
            .flatten()
            .all(|&t| close(t, 0.5, 1e-15)));
        assert!(params.theta[1]
            .iter()
            .flatten()
            .all(|&t| close(t, 1.0 / 3.0, 1e-15)));
    }

    #[test]
    fn gdina_coefficients_json_round_trip() {
        let mut map = BTreeMap::new();
        map.insert(0u32, 0.25);
        map.insert(0b101u32, -1.5);
        let b = GDINACoeffs {
            coeffs: vec![vec![map]],
        };
        let json = serde_json::to_string(&b).unwrap();
        assert!(json.contains("\"0,2\""));
        let back: GDINACoeffs = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back);
    }
}
