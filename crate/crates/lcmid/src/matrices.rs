//! Labeled probability matrices and the response-distribution Jacobian.
//!
//! For a covariate-free model the class-conditional pattern probabilities
//! form a matrix with one column per class. Three flavors appear in the
//! identifiability conditions:
//!
//! * `Psi`  — pattern probabilities over the reduced space (reference
//!   pattern removed), built from response probabilities `theta`;
//! * `Phi`  — the same matrix built from the logit intercepts `gamma`
//!   (i.e. at zero covariates);
//! * `Tmat` — cumulative probabilities `P(R >= r | class)` over the full
//!   pattern space, rank-equivalent to `Psi` plus its reference row.
//!
//! The Jacobian of the pattern distribution with respect to the free
//! parameters, and the Fisher information it induces, are built here as well.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    enumerate_patterns, response_distribution, theta_from_gamma, CoreParams, ModelSpec,
    PatternSpace, RegressionParams,
};

/// Which probability matrix a [`ProbMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixKind {
    Psi,
    Phi,
    Tmat,
}

/// A dense class-conditional probability matrix with its row labels
/// (response patterns) and the per-item probabilities it was built from.
#[derive(Debug, Clone)]
pub struct ProbMatrix {
    pub kind: MatrixKind,
    pub values: DMatrix<f64>,
    /// Pattern labeling each row, over the items in `items`.
    pub row_patterns: Vec<Vec<usize>>,
    /// The items whose responses index the rows (all items for the full
    /// matrices; a subset for partition blocks).
    pub items: Vec<usize>,
    /// `theta[j][c][r]` the matrix was built from, kept so partition blocks
    /// can be formed as exact products rather than marginal sums.
    item_probs: Vec<Vec<Vec<f64>>>,
    n_classes: usize,
}

impl ProbMatrix {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// `Psi` (or `Phi`) with its reference row restored on top, so that
    /// every column sums to one. Not meaningful for `Tmat`, whose rows
    /// already cover the full pattern space.
    pub fn with_reference_row(&self) -> Result<DMatrix<f64>> {
        if self.kind == MatrixKind::Tmat {
            return Err(Error::InvalidSpec(
                "the cumulative matrix has no removed reference row".into(),
            ));
        }
        let (rows, cols) = self.values.shape();
        let mut full = DMatrix::<f64>::zeros(rows + 1, cols);
        for c in 0..cols {
            let reference: f64 = self.items.iter().map(|&j| self.item_probs[j][c][0]).product();
            full[(0, c)] = reference;
        }
        full.view_mut((1, 0), (rows, cols)).copy_from(&self.values);
        Ok(full)
    }
}

/// Identifier of one free parameter of the covariate-free model, used to
/// label Jacobian columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParamLabel {
    /// Membership probability of class `c >= 1` (class 0 is dependent).
    Eta { class: usize },
    /// Response probability `theta[item][class][level]` with `level >= 1`
    /// (level 0 is dependent).
    Theta {
        item: usize,
        class: usize,
        level: usize,
    },
}

/// Jacobian of the pattern distribution over the reduced pattern space with
/// respect to the free parameters, columns labeled by [`ParamLabel`] in the
/// fixed order: memberships ascending by class, then response probabilities
/// ordered by (item, class, level).
#[derive(Debug, Clone)]
pub struct JacobianMatrix {
    pub values: DMatrix<f64>,
    pub columns: Vec<ParamLabel>,
}

/// A tripartition of the items, used by the Kruskal-rank conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Block index (1, 2 or 3) of each item.
    pub assignment: Vec<u8>,
}

impl Partition {
    pub fn new(assignment: Vec<u8>) -> Result<Self> {
        if assignment.iter().any(|&b| !(1..=3).contains(&b)) {
            return Err(Error::InvalidSpec(
                "partition entries must be 1, 2 or 3".into(),
            ));
        }
        let part = Partition { assignment };
        for t in 1..=3u8 {
            if part.block(t).is_empty() {
                return Err(Error::InvalidSpec(format!("partition block {t} is empty")));
            }
        }
        Ok(part)
    }

    /// Items assigned to block `t`, ascending.
    pub fn block(&self, t: u8) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == t)
            .map(|(j, _)| j)
            .collect()
    }

    /// Row dimensions `kappa_t = prod_{j in block t} M_j`, saturating.
    pub fn kappas(&self, levels: &[usize]) -> [u128; 3] {
        let mut kappas = [1u128; 3];
        for (j, &b) in self.assignment.iter().enumerate() {
            let slot = &mut kappas[(b - 1) as usize];
            *slot = slot.saturating_mul(levels[j] as u128);
        }
        kappas
    }
}

// ---------------------------------------------------------------------------
// Matrix builders
// ---------------------------------------------------------------------------

fn pattern_probability(theta: &[Vec<Vec<f64>>], items: &[usize], pattern: &[usize], c: usize) -> f64 {
    items
        .iter()
        .zip(pattern)
        .map(|(&j, &r)| theta[j][c][r])
        .product()
}

/// Class-conditional pattern probabilities over the reduced space:
/// entry `(r, c) = prod_j theta[j][c][r_j]`, reference row excluded.
pub fn build_psi(params: &CoreParams, space: &PatternSpace) -> Result<ProbMatrix> {
    build_product_matrix(params.theta.clone(), space, MatrixKind::Psi)
}

/// Same matrix built from logit intercepts (zero-covariate probabilities).
/// Identical — bit for bit — to [`build_psi`] applied to the softmax of
/// `gamma`, because it is computed exactly that way.
pub fn build_phi(gamma: &[Vec<Vec<f64>>], space: &PatternSpace) -> Result<ProbMatrix> {
    let theta = theta_from_gamma(gamma)?;
    build_product_matrix(theta, space, MatrixKind::Phi)
}

fn build_product_matrix(
    theta: Vec<Vec<Vec<f64>>>,
    space: &PatternSpace,
    kind: MatrixKind,
) -> Result<ProbMatrix> {
    let n_items = space.levels().len();
    if theta.len() != n_items {
        return Err(Error::DimensionMismatch(
            "probabilities and pattern space disagree on the item count".into(),
        ));
    }
    let n_classes = theta[0].len();
    let items: Vec<usize> = (0..n_items).collect();
    let patterns = space.nonreference();
    let mut values = DMatrix::<f64>::zeros(patterns.len(), n_classes);
    for (row, pattern) in patterns.iter().enumerate() {
        for c in 0..n_classes {
            values[(row, c)] = pattern_probability(&theta, &items, pattern, c);
        }
    }
    Ok(ProbMatrix {
        kind,
        values,
        row_patterns: patterns.to_vec(),
        items,
        item_probs: theta,
        n_classes,
    })
}

/// Cumulative class-conditional probabilities over the full pattern space:
/// entry `(r, c) = prod_j P(R_j >= r_j | class c)`. The all-zeros row is
/// exactly one in every column.
pub fn build_t(params: &CoreParams, space: &PatternSpace) -> Result<ProbMatrix> {
    let n_items = space.levels().len();
    if params.theta.len() != n_items {
        return Err(Error::DimensionMismatch(
            "parameters and pattern space disagree on the item count".into(),
        ));
    }
    let n_classes = params.eta.len();
    // survival[j][c][r] = P(R_j >= r | c); exactly 1 at r = 0.
    let survival: Vec<Vec<Vec<f64>>> = params
        .theta
        .iter()
        .map(|item| {
            item.iter()
                .map(|probs| {
                    (0..probs.len())
                        .map(|r| {
                            if r == 0 {
                                1.0
                            } else {
                                probs[r..].iter().sum()
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let items: Vec<usize> = (0..n_items).collect();
    let patterns = space.patterns();
    let mut values = DMatrix::<f64>::zeros(patterns.len(), n_classes);
    for (row, pattern) in patterns.iter().enumerate() {
        for c in 0..n_classes {
            values[(row, c)] = pattern_probability(&survival, &items, pattern, c);
        }
    }
    Ok(ProbMatrix {
        kind: MatrixKind::Tmat,
        values,
        row_patterns: patterns.to_vec(),
        items,
        item_probs: survival,
        n_classes,
    })
}

/// The fixed column order of the Jacobian: memberships for classes
/// `1..C`, then response probabilities by (item, class, level >= 1).
pub fn jacobian_columns(levels: &[usize], n_classes: usize) -> Vec<ParamLabel> {
    let mut columns = Vec::new();
    for class in 1..n_classes {
        columns.push(ParamLabel::Eta { class });
    }
    for (item, &m) in levels.iter().enumerate() {
        for class in 0..n_classes {
            for level in 1..m {
                columns.push(ParamLabel::Theta { item, class, level });
            }
        }
    }
    columns
}

fn jacobian_rows(
    params: &CoreParams,
    patterns: &[Vec<usize>],
    levels: &[usize],
) -> DMatrix<f64> {
    let n_classes = params.eta.len();
    let columns = jacobian_columns(levels, n_classes);
    let mut values = DMatrix::<f64>::zeros(patterns.len(), columns.len());
    let items: Vec<usize> = (0..levels.len()).collect();
    for (row, pattern) in patterns.iter().enumerate() {
        // Full per-class pattern probabilities, reused by every column.
        let psi: Vec<f64> = (0..n_classes)
            .map(|c| pattern_probability(&params.theta, &items, pattern, c))
            .collect();
        let mut col = 0;
        // Membership derivatives: class 0 absorbs the simplex constraint,
        // so d P(r) / d eta_c = psi_rc - psi_r0.
        for c in 1..n_classes {
            values[(row, col)] = psi[c] - psi[0];
            col += 1;
        }
        // Response derivatives: level 0 absorbs the per-(item, class)
        // simplex constraint.
        for (j, &m) in levels.iter().enumerate() {
            for c in 0..n_classes {
                let leave_one_out = if params.theta[j][c][pattern[j]] != 0.0 {
                    psi[c] / params.theta[j][c][pattern[j]]
                } else {
                    pattern_probability_skipping(&params.theta, pattern, c, j)
                };
                for r in 1..m {
                    values[(row, col)] = if pattern[j] == r {
                        params.eta[c] * leave_one_out
                    } else if pattern[j] == 0 {
                        -params.eta[c] * leave_one_out
                    } else {
                        0.0
                    };
                    col += 1;
                }
            }
        }
    }
    values
}

fn pattern_probability_skipping(
    theta: &[Vec<Vec<f64>>],
    pattern: &[usize],
    c: usize,
    skip: usize,
) -> f64 {
    pattern
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != skip)
        .map(|(j, &r)| theta[j][c][r])
        .product()
}

/// Jacobian of the reduced pattern distribution with respect to the free
/// parameters of the covariate-free model.
pub fn build_jacobian(params: &CoreParams, space: &PatternSpace) -> Result<JacobianMatrix> {
    if params.theta.len() != space.levels().len() {
        return Err(Error::DimensionMismatch(
            "parameters and pattern space disagree on the item count".into(),
        ));
    }
    let values = jacobian_rows(params, space.nonreference(), space.levels());
    Ok(JacobianMatrix {
        values,
        columns: jacobian_columns(space.levels(), params.eta.len()),
    })
}

/// Jacobian at the hypothetical zero-covariate subject: intercept-only
/// memberships and response probabilities. For models with covariates, full
/// column rank here decides local identifiability of the whole regression
/// parameterization.
pub fn build_jacobian_zero_covariate(
    reg: &RegressionParams,
    space: &PatternSpace,
) -> Result<JacobianMatrix> {
    let params = crate::model::zero_covariate_params(reg)?;
    build_jacobian(&params, space)
}

/// Fisher information of the pattern distribution:
/// `sum_r (1 / P(r)) g_r g_r^T` over the full pattern space, where `g_r` is
/// the gradient of `P(r)` in the free parameters. Symmetric positive
/// semidefinite, and rank-equivalent to the reduced Jacobian.
pub fn fisher_information(params: &CoreParams, space: &PatternSpace) -> Result<DMatrix<f64>> {
    let dist = response_distribution(params, space)?;
    if let Some((idx, _)) = dist.iter().enumerate().find(|(_, &p)| p <= 0.0) {
        return Err(Error::NonPositiveProbability(format!(
            "pattern {:?} has zero probability",
            space.patterns()[idx]
        )));
    }
    // Gradient rows over the FULL space (the reference row equals minus the
    // sum of the others, since the P(r) sum to one).
    let mut grads = jacobian_rows(params, space.patterns(), space.levels());
    for (row, &p) in dist.iter().enumerate() {
        let w = 1.0 / p.sqrt();
        grads.row_mut(row).scale_mut(w);
    }
    Ok(grads.transpose() * grads)
}

/// Split a `Psi`/`Phi` matrix along an item tripartition: block `t` is the
/// class-conditional pattern-probability matrix of the items in block `t`,
/// over the block's FULL pattern space (no reference removal), so it has
/// `kappa_t` rows.
pub fn partition_submatrices(
    m: &ProbMatrix,
    part: &Partition,
) -> Result<(ProbMatrix, ProbMatrix, ProbMatrix)> {
    if m.kind == MatrixKind::Tmat {
        return Err(Error::InvalidSpec(
            "partitions apply to the reduced probability matrices only".into(),
        ));
    }
    if part.assignment.len() != m.items.len() {
        return Err(Error::DimensionMismatch(
            "partition length does not match the item count".into(),
        ));
    }
    let mut blocks = Vec::with_capacity(3);
    for t in 1..=3u8 {
        let items = part.block(t);
        if items.is_empty() {
            return Err(Error::InvalidSpec(format!("partition block {t} is empty")));
        }
        blocks.push(block_matrix(m, &items)?);
    }
    let b3 = blocks.pop().unwrap();
    let b2 = blocks.pop().unwrap();
    let b1 = blocks.pop().unwrap();
    Ok((b1, b2, b3))
}

fn block_matrix(m: &ProbMatrix, items: &[usize]) -> Result<ProbMatrix> {
    let levels: Vec<usize> = items.iter().map(|&j| m.item_probs[j][0].len()).collect();
    let spec = ModelSpec::new(levels, m.n_classes.max(1), 0, 0)?;
    let space = enumerate_patterns(&spec)?;
    let mut values = DMatrix::<f64>::zeros(space.len(), m.n_classes);
    for (row, pattern) in space.patterns().iter().enumerate() {
        for c in 0..m.n_classes {
            values[(row, c)] = pattern_probability(&m.item_probs, items, pattern, c);
        }
    }
    Ok(ProbMatrix {
        kind: m.kind,
        values,
        row_patterns: space.patterns().to_vec(),
        items: items.to_vec(),
        item_probs: m.item_probs.clone(),
        n_classes: m.n_classes,
    })
}
