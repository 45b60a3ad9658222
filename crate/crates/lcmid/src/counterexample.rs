//! Explicit non-identifiability counterexamples for attribute models.
//!
//! When some attribute is required by exactly one item, the response
//! distribution cannot pin the parameters down: mixing each class that lacks
//! the attribute with its counterpart that has it — by a scaling constant `E`
//! near 1 — changes the parameters while leaving every pattern probability
//! untouched. This module builds that parameter pair and verifies the
//! distributional equality by full enumeration.
//!
//! For the class pair `(lo, hi)` agreeing on all attributes but the lone one,
//! and the lone item `1` (after relabeling), the perturbation is
//!
//! ```text
//! theta_bar[1][hi][r] = (1/E) theta[1][hi][r] + (1 - 1/E) theta[1][lo][r]
//! eta_bar[lo]         = eta[lo] + (1 - E) eta[hi]
//! eta_bar[hi]         = E eta[hi]
//! ```
//!
//! which preserves `eta[lo] theta[1][lo] + eta[hi] theta[1][hi]` identically,
//! and hence every pattern probability, provided all OTHER items respond
//! identically in `lo` and `hi`. The construction therefore mixes exactly the
//! class pairs with that agreement; when the lone attribute truly is required
//! by a single item and the parameters respect the attribute masking, that is
//! every pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{response_distribution, CoreParams, PatternSpace, QMatrix};

/// Per-coordinate tolerance for the agreement checks that decide which class
/// pairs can be mixed.
const AGREEMENT_TOL: f64 = 1e-12;

/// A distribution-equivalent parameter pair exhibiting non-identifiability.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexamplePair {
    pub original: CoreParams,
    pub perturbed: CoreParams,
    /// The scaling constant used.
    pub e: f64,
    /// The attribute whose single supporting item anchors the construction.
    pub lone_attribute: usize,
    /// That supporting item.
    pub lone_item: usize,
    /// The `(lo, hi)` class pairs that were mixed.
    pub mixed_pairs: Vec<(usize, usize)>,
}

/// Build the perturbation for a given scaling constant `E > 0`.
///
/// The lone attribute is the lowest-index attribute required by exactly one
/// item; if no attribute qualifies, any attribute whose supporting item still
/// admits agreeing class pairs is tried in index order. Errors when `E` is
/// not positive, when the lone item's probabilities depend on more than the
/// lone attribute, when no class pair can be mixed, or when `E` pushes a
/// probability out of the open interval (0, 1).
pub fn construct_prop2_pair(
    params: &CoreParams,
    q: &QMatrix,
    e: f64,
) -> Result<CounterexamplePair> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::InadmissibleScaling(format!(
            "scaling constant must be positive and finite, got {e}"
        )));
    }
    let k = q.n_attributes();
    let n_classes = 1usize << k;
    if params.eta.len() != n_classes {
        return Err(Error::DimensionMismatch(format!(
            "{} classes do not match 2^{k} attribute profiles",
            params.eta.len()
        )));
    }
    if params.theta.len() != q.n_items() {
        return Err(Error::DimensionMismatch(
            "parameters and Q-matrix disagree on the item count".into(),
        ));
    }

    // Lone attributes first (the case the construction is proven for), then
    // the remaining attributes as a generalization: any attribute works as
    // long as some class pair agrees on every other item.
    let sums = q.column_sums();
    let mut candidates: Vec<usize> = (0..k).filter(|&a| sums[a] == 1).collect();
    candidates.extend((0..k).filter(|&a| sums[a] != 1 && sums[a] > 0));

    let mut failure = String::from("no attribute is required by any item");
    for attr in candidates {
        let lone_item = (0..q.n_items())
            .find(|&j| q.requires(j, attr))
            .expect("candidate attributes have a supporting item");
        if !item_depends_only_on(params, lone_item, attr, k) {
            failure = format!(
                "item {lone_item} responds differently in classes sharing attribute {attr}, \
                 violating the attribute masking restriction"
            );
            continue;
        }
        let pairs = mixable_pairs(params, lone_item, attr, k);
        if pairs.is_empty() {
            failure = format!(
                "no class pair differing only in attribute {attr} agrees on every item \
                 other than item {lone_item}"
            );
            continue;
        }
        let perturbed = apply_scaling(params, lone_item, &pairs, e)?;
        return Ok(CounterexamplePair {
            original: params.clone(),
            perturbed,
            e,
            lone_attribute: attr,
            lone_item,
            mixed_pairs: pairs,
        });
    }
    Err(Error::NoMixablePair(failure))
}

/// [`construct_prop2_pair`] with automatic shrinking: starting from `e`,
/// halve the distance to 1 (up to 10 times) whenever the scaling is
/// inadmissible. Returns the pair together with the scaling actually used.
pub fn construct_prop2_pair_auto(
    params: &CoreParams,
    q: &QMatrix,
    e: f64,
) -> Result<(CounterexamplePair, f64)> {
    let mut current = e;
    let mut last_err = None;
    for _ in 0..=10 {
        match construct_prop2_pair(params, q, current) {
            Ok(pair) => return Ok((pair, current)),
            Err(err @ Error::InadmissibleScaling(_)) => {
                last_err = Some(err);
                current = 1.0 + (current - 1.0) / 2.0;
            }
            Err(other) => return Err(other),
        }
    }
    Err(last_err.expect("loop exits early unless an admissibility error occurred"))
}

/// Does item `item` respond identically in every pair of classes that agree
/// on attribute `attr`?
fn item_depends_only_on(params: &CoreParams, item: usize, attr: usize, k: usize) -> bool {
    let bit = k - 1 - attr; // class-index bit of the attribute
    let n_classes = 1usize << k;
    // Compare every class against the canonical class with the same value of
    // `attr` and all other attributes cleared.
    (0..n_classes).all(|c| {
        let canonical = c & (1 << bit);
        vectors_agree(&params.theta[item][c], &params.theta[item][canonical])
    })
}

/// Class pairs `(lo, hi)` differing only in `attr` whose response
/// probabilities agree on every item except `lone_item`.
fn mixable_pairs(params: &CoreParams, lone_item: usize, attr: usize, k: usize) -> Vec<(usize, usize)> {
    let bit = k - 1 - attr;
    let n_classes = 1usize << k;
    (0..n_classes)
        .filter(|c| c & (1 << bit) == 0)
        .map(|lo| (lo, lo | (1 << bit)))
        .filter(|&(lo, hi)| {
            params
                .theta
                .iter()
                .enumerate()
                .all(|(j, item)| j == lone_item || vectors_agree(&item[lo], &item[hi]))
        })
        .collect()
}

fn vectors_agree(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= AGREEMENT_TOL)
}

fn apply_scaling(
    params: &CoreParams,
    lone_item: usize,
    pairs: &[(usize, usize)],
    e: f64,
) -> Result<CoreParams> {
    let mut out = params.clone();
    for &(lo, hi) in pairs {
        let (w_hi, w_lo) = (1.0 / e, 1.0 - 1.0 / e);
        for r in 0..params.theta[lone_item][hi].len() {
            out.theta[lone_item][hi][r] =
                w_hi * params.theta[lone_item][hi][r] + w_lo * params.theta[lone_item][lo][r];
        }
        out.eta[lo] = params.eta[lo] + (1.0 - e) * params.eta[hi];
        out.eta[hi] = e * params.eta[hi];
    }
    let in_open_unit = |v: f64| v > 0.0 && v < 1.0;
    let theta_ok = out.theta.iter().flatten().flatten().all(|&t| in_open_unit(t));
    let eta_ok = out.eta.iter().all(|&v| in_open_unit(v));
    if !(theta_ok && eta_ok) {
        return Err(Error::InadmissibleScaling(format!(
            "scaling {e} pushes a probability out of (0, 1)"
        )));
    }
    Ok(out)
}

/// Compare the full response distributions of two parameter sets; returns
/// whether the maximal pattern-probability deviation is within `tol`, along
/// with that deviation.
pub fn verify_distribution_equality(
    a: &CoreParams,
    b: &CoreParams,
    space: &PatternSpace,
    tol: f64,
) -> Result<(bool, f64)> {
    let da = response_distribution(a, space)?;
    let db = response_distribution(b, space)?;
    if da.len() != db.len() {
        return Err(Error::DimensionMismatch(
            "distributions over differently sized pattern spaces".into(),
        ));
    }
    let deviation = da
        .iter()
        .zip(&db)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    Ok((deviation <= tol, deviation))
}

/// Largest absolute parameter deviation between two parameter sets
/// (membership and response probabilities pooled).
pub fn max_param_deviation(a: &CoreParams, b: &CoreParams) -> f64 {
    let eta_dev = a
        .eta
        .iter()
        .zip(&b.eta)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    let theta_dev = a
        .theta
        .iter()
        .flatten()
        .flatten()
        .zip(b.theta.iter().flatten().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    eta_dev.max(theta_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{alpha_mask_of_class, enumerate_patterns, ModelSpec};

    fn dina_theta(q: &QMatrix, guess: f64, slip: f64) -> Vec<Vec<Vec<f64>>> {
        let k = q.n_attributes();
        let c = 1usize << k;
        (0..q.n_items())
            .map(|j| {
                let req = q.required_mask(j);
                (0..c)
                    .map(|class| {
                        let mastered = alpha_mask_of_class(class, k) & req == req;
                        let success = if mastered { 1.0 - slip } else { guess };
                        vec![1.0 - success, success]
                    })
                    .collect()
            })
            .collect()
    }

    fn lone_attribute_model() -> (QMatrix, CoreParams, PatternSpace) {
        let q = QMatrix::new(vec![vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        let params = CoreParams {
            eta: vec![0.25; 4],
            theta: dina_theta(&q, 0.2, 0.2),
        };
        let spec = ModelSpec::for_attributes(vec![2; 3], 2, 0, 0).unwrap();
        let space = enumerate_patterns(&spec).unwrap();
        (q, params, space)
    }

    #[test]
    fn unit_scaling_is_the_identity() {
        let (q, params, _) = lone_attribute_model();
        let pair = construct_prop2_pair(&params, &q, 1.0).unwrap();
        assert_eq!(pair.original.eta, pair.perturbed.eta);
        assert_eq!(pair.original.theta, pair.perturbed.theta);
    }

    #[test]
    fn lone_attribute_pair_preserves_the_distribution() {
        let (q, params, space) = lone_attribute_model();
        let pair = construct_prop2_pair(&params, &q, 1.1).unwrap();
        assert_eq!(pair.lone_attribute, 0);
        assert_eq!(pair.lone_item, 0);
        assert_eq!(pair.mixed_pairs, vec![(0, 2), (1, 3)]);

        let (equal, deviation) =
            verify_distribution_equality(&pair.original, &pair.perturbed, &space, 1e-12).unwrap();
        assert!(equal, "deviation {deviation}");

        let param_dev = max_param_deviation(&pair.original, &pair.perturbed);
        assert!(param_dev >= 0.005, "parameter deviation {param_dev}");
    }

    #[test]
    fn equal_theta_classes_move_eta_only() {
        // The lone item responds identically with and without the attribute,
        // so the perturbation is a pure membership shuffle — distributions
        // still agree.
        let (q, mut params, space) = lone_attribute_model();
        params.theta[0] = vec![vec![0.4, 0.6]; 4];
        let pair = construct_prop2_pair(&params, &q, 1.1).unwrap();
        let theta_dev: f64 = pair
            .original
            .theta
            .iter()
            .flatten()
            .flatten()
            .zip(pair.perturbed.theta.iter().flatten().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(theta_dev <= 1e-15);
        assert!((pair.original.eta[0] - pair.perturbed.eta[0]).abs() > 0.01);
        let (equal, _) =
            verify_distribution_equality(&pair.original, &pair.perturbed, &space, 1e-12).unwrap();
        assert!(equal);
    }

    #[test]
    fn masking_violation_is_rejected() {
        let (q, mut params, _) = lone_attribute_model();
        // Item 0 requires only attribute 0, yet gets a theta that varies
        // with attribute 1.
        params.theta[0] = vec![
            vec![0.8, 0.2],
            vec![0.7, 0.3],
            vec![0.2, 0.8],
            vec![0.1, 0.9],
        ];
        match construct_prop2_pair(&params, &q, 1.1) {
            Err(Error::NoMixablePair(_)) => {}
            other => panic!("expected mixability failure, got {other:?}"),
        }
    }

    #[test]
    fn extreme_scaling_is_inadmissible_and_auto_shrinks() {
        let (q, params, space) = lone_attribute_model();
        // eta_bar[hi] = E * 0.25 >= 1 at E = 4.
        match construct_prop2_pair(&params, &q, 4.5) {
            Err(Error::InadmissibleScaling(_)) => {}
            other => panic!("expected admissibility failure, got {other:?}"),
        }
        let (pair, used) = construct_prop2_pair_auto(&params, &q, 4.5).unwrap();
        assert!(used < 4.5 && used > 1.0);
        let (equal, _) =
            verify_distribution_equality(&pair.original, &pair.perturbed, &space, 1e-12).unwrap();
        assert!(equal);
    }

    #[test]
    fn independent_perturbations_are_detected() {
        let (_, params, space) = lone_attribute_model();
        let mut other = params.clone();
        other.theta[1][0] = vec![0.75, 0.25];
        let (equal, deviation) =
            verify_distribution_equality(&params, &other, &space, 1e-12).unwrap();
        assert!(!equal);
        assert!(deviation > 1e-6);
    }

    #[test]
    fn scaling_grid_distances_increase_away_from_one() {
        let (q, params, space) = lone_attribute_model();
        let mut previous = 0.0;
        for &e in &[1.05, 1.1] {
            let pair = construct_prop2_pair(&params, &q, e).unwrap();
            let (equal, _) =
                verify_distribution_equality(&pair.original, &pair.perturbed, &space, 1e-12)
                    .unwrap();
            assert!(equal);
            let dev = max_param_deviation(&pair.original, &pair.perturbed);
            assert!(dev > previous);
            previous = dev;
        }
        previous = 0.0;
        for &e in &[0.95, 0.9] {
            let pair = construct_prop2_pair(&params, &q, e).unwrap();
            let dev = max_param_deviation(&pair.original, &pair.perturbed);
            assert!(dev > previous);
            previous = dev;
        }
    }

    #[test]
    fn perturbed_lone_item_still_masks_on_the_lone_attribute() {
        let (q, params, _) = lone_attribute_model();
        let pair = construct_prop2_pair(&params, &q, 1.1).unwrap();
        let k = q.n_attributes();
        assert!(item_depends_only_on(
            &pair.perturbed,
            pair.lone_item,
            pair.lone_attribute,
            k
        ));
    }
}
