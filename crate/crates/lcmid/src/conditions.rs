//! Identifiability condition checks and report assembly.
//!
//! Each check returns a three-valued verdict with structured evidence:
//!
//! * `Holds` / `Fails` — decided, with ranks, arithmetic, or witnesses;
//! * `Inconclusive` — reserved for the search-based sufficient conditions
//!   whose witness search was capped or simply found nothing. A sufficient
//!   condition that finds no witness proves nothing, so it never `Fails`.
//!
//! The summary distinguishes three notions of identifiability:
//!
//! * **local** — decided exactly by the column rank of the Jacobian
//!   (an if-and-only-if criterion), when the Jacobian is computable;
//! * **strict** — certified by a Kruskal-rank witness partition, or for
//!   attribute models by the structural double-identity criterion;
//! * **generic** — certified arithmetically (row-dimension partitions) for
//!   unrestricted models, structurally (Q-matrix block form) for attribute
//!   models, and refuted when some attribute is required by only one item.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::linalg::{has_full_column_rank, kruskal_rank_capped, RankResult};
use crate::matrices::{
    build_jacobian, build_jacobian_zero_covariate, build_phi, build_psi, partition_submatrices,
    Partition, ProbMatrix,
};
use crate::model::{CoreParams, CovariateDesign, ModelSpec, PatternSpace, QMatrix, RegressionParams};

/// Per-coordinate tolerance for deciding that two response-probability
/// vectors are equal.
pub const THETA_EQUALITY_TOL: f64 = 1e-12;

/// Three-valued outcome of one condition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

/// One condition check with its evidence payload.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionVerdict {
    pub name: String,
    pub status: Status,
    pub evidence: Value,
}

impl ConditionVerdict {
    fn new(name: &str, status: Status, evidence: Value) -> Self {
        ConditionVerdict {
            name: name.to_string(),
            status,
            evidence,
        }
    }
}

/// Whether the model's classes are unrestricted or binary attribute profiles
/// constrained by a Q-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    #[serde(rename = "reglcm")]
    RegLcm,
    #[serde(rename = "regcdm")]
    RegCdm,
}

/// Resource caps for the search-based checks. Exceeding a cap degrades the
/// verdict to `Inconclusive`; it never aborts the report.
#[derive(Debug, Clone, Serialize)]
pub struct Caps {
    /// Kruskal-rank checks require at most this many classes.
    pub kruskal_max_classes: usize,
    /// Total subset-independence tests across one witness-partition search.
    pub kruskal_subset_budget: u64,
    /// Exhaustive tripartition search requires at most this many items.
    pub exhaustive_partition_max_items: usize,
    /// Node budget for the double-identity row-assignment backtracking.
    pub assignment_node_budget: u64,
    /// Ceiling on the materialized response-pattern space.
    pub pattern_cap: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            kruskal_max_classes: 10,
            kruskal_subset_budget: 200_000,
            exhaustive_partition_max_items: 12,
            assignment_node_budget: 1_000_000,
            pattern_cap: crate::model::DEFAULT_PATTERN_CAP,
        }
    }
}

// ---------------------------------------------------------------------------
// Counting and finiteness conditions
// ---------------------------------------------------------------------------

/// Parameter-counting necessary condition: the reduced pattern space must
/// have at least as many cells as the model has free parameters,
/// `prod_j M_j - 1 >= C (sum_j M_j - J) + C - 1`.
pub fn check_a1(spec: &ModelSpec) -> ConditionVerdict {
    let rhs = (spec.n_classes as u128)
        * (spec.levels.iter().map(|&m| m as u128).sum::<u128>() - spec.n_items() as u128)
        + spec.n_classes as u128
        - 1;
    match spec.pattern_count() {
        Some(total) => {
            let lhs = total - 1;
            let status = if lhs >= rhs { Status::Holds } else { Status::Fails };
            ConditionVerdict::new(
                "A1",
                status,
                json!({
                    "pattern_cells": lhs.to_string(),
                    "free_parameters": rhs.to_string(),
                }),
            )
        }
        // The pattern count overflows u128, so it dwarfs any parameter count.
        None => ConditionVerdict::new(
            "A1",
            Status::Holds,
            json!({
                "pattern_cells": "> 2^127",
                "free_parameters": rhs.to_string(),
            }),
        ),
    }
}

/// Finiteness of every regression coefficient and covariate value.
pub fn check_a2(reg: &RegressionParams, design: Option<&CovariateDesign>) -> ConditionVerdict {
    let coeffs_finite = reg.check_finite().is_ok();
    let design_finite = design.map_or(true, CovariateDesign::all_finite);
    let status = if coeffs_finite && design_finite {
        Status::Holds
    } else {
        Status::Fails
    };
    ConditionVerdict::new(
        "A2",
        status,
        json!({
            "coefficients_finite": coeffs_finite,
            "covariates_finite": design_finite,
        }),
    )
}

/// Full column rank of the design matrices: the membership design `X` and,
/// for every item, the response design `(1 | Z_j)` with a prepended
/// intercept column.
pub fn check_a3(design: Option<&CovariateDesign>, spec: &ModelSpec) -> ConditionVerdict {
    let design = match design {
        Some(d) => d,
        None => {
            // Covariate-free analysis: both designs reduce to the intercept.
            return ConditionVerdict::new(
                "A3",
                Status::Holds,
                json!({ "note": "no covariate design supplied; intercept-only designs are trivially full rank" }),
            );
        }
    };
    let n = design.n_subjects();
    let needed = (spec.p + 1).max(spec.q + 1);
    if n < needed {
        return ConditionVerdict::new(
            "A3",
            Status::Fails,
            json!({
                "subjects": n,
                "required_subjects": needed,
                "note": "fewer subjects than design columns",
            }),
        );
    }
    let x = nalgebra::DMatrix::from_fn(n, spec.p + 1, |i, d| design.x[i][d]);
    let (x_full, x_rank) = match has_full_column_rank(&x, None) {
        Ok(v) => v,
        Err(e) => {
            return ConditionVerdict::new("A3", Status::Fails, json!({ "error": e.to_string() }))
        }
    };
    let mut z_ranks = Vec::new();
    let mut all_z_full = true;
    for (j, zj) in design.z.iter().enumerate() {
        let m = nalgebra::DMatrix::from_fn(n, spec.q + 1, |i, d| {
            if d == 0 {
                1.0
            } else {
                zj[i][d - 1]
            }
        });
        match has_full_column_rank(&m, None) {
            Ok((full, r)) => {
                all_z_full &= full;
                z_ranks.push(json!({ "item": j, "rank": r.rank, "cols": r.cols }));
            }
            Err(e) => {
                all_z_full = false;
                z_ranks.push(json!({ "item": j, "error": e.to_string() }));
            }
        }
    }
    let status = if x_full && all_z_full {
        Status::Holds
    } else {
        Status::Fails
    };
    ConditionVerdict::new(
        "A3",
        status,
        json!({
            "membership_design": { "rank": x_rank.rank, "cols": x_rank.cols },
            "response_designs": z_ranks,
        }),
    )
}

/// Strict positivity of every membership and response probability.
pub fn check_c2(params: &CoreParams) -> ConditionVerdict {
    let min_eta = params.eta.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_theta = params
        .theta
        .iter()
        .flatten()
        .flatten()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let status = if params.is_strictly_positive() {
        Status::Holds
    } else {
        Status::Fails
    };
    ConditionVerdict::new(
        "C2",
        status,
        json!({ "min_eta": min_eta, "min_theta": min_theta }),
    )
}

// ---------------------------------------------------------------------------
// Rank conditions on the probability matrices and the Jacobian
// ---------------------------------------------------------------------------

fn rank_evidence(r: &RankResult) -> Value {
    json!({
        "rank": r.rank,
        "rows": r.rows,
        "cols": r.cols,
        "tolerance": r.tolerance_used,
        "smallest_retained": r.smallest_retained,
        "largest_discarded": r.largest_discarded,
    })
}

/// Linear independence of the class-conditional pattern-probability columns
/// (built from `theta`). Necessary for local identifiability.
pub fn check_c3(params: &CoreParams, space: &PatternSpace, tol: Option<f64>) -> Result<ConditionVerdict> {
    let psi = build_psi(params, space)?;
    rank_condition("C3", &psi, tol)
}

/// The same independence condition on the matrix built from the logit
/// intercepts (zero-covariate probabilities).
pub fn check_a4(
    gamma: &[Vec<Vec<f64>>],
    space: &PatternSpace,
    tol: Option<f64>,
) -> Result<ConditionVerdict> {
    let phi = build_phi(gamma, space)?;
    rank_condition("A4", &phi, tol)
}

fn rank_condition(name: &str, m: &ProbMatrix, tol: Option<f64>) -> Result<ConditionVerdict> {
    let (full, rank) = has_full_column_rank(&m.values, tol)?;
    let status = if full { Status::Holds } else { Status::Fails };
    Ok(ConditionVerdict::new(name, status, rank_evidence(&rank)))
}

/// Local identifiability of the covariate-free parameters: full column rank
/// of the Jacobian of the reduced pattern distribution. This criterion is
/// exact in both directions, so `Fails` refutes local identifiability.
pub fn check_local(
    params: &CoreParams,
    space: &PatternSpace,
    tol: Option<f64>,
) -> Result<ConditionVerdict> {
    let jac = build_jacobian(params, space)?;
    let (full, rank) = has_full_column_rank(&jac.values, tol)?;
    let status = if full { Status::Holds } else { Status::Fails };
    Ok(ConditionVerdict::new(
        "local_jacobian",
        status,
        rank_evidence(&rank),
    ))
}

/// Local identifiability of the regression parameterization, decided by the
/// Jacobian at the hypothetical zero-covariate subject.
pub fn check_local_covariates(
    reg: &RegressionParams,
    space: &PatternSpace,
    tol: Option<f64>,
) -> Result<ConditionVerdict> {
    let jac = build_jacobian_zero_covariate(reg, space)?;
    let (full, rank) = has_full_column_rank(&jac.values, tol)?;
    let status = if full { Status::Holds } else { Status::Fails };
    Ok(ConditionVerdict::new(
        "local_jacobian",
        status,
        rank_evidence(&rank),
    ))
}

// ---------------------------------------------------------------------------
// Kruskal-rank sufficient condition (strict identifiability)
// ---------------------------------------------------------------------------

/// Sufficient condition for strict identifiability: some tripartition of the
/// items whose block probability matrices have Kruskal ranks summing to at
/// least `2C + 2`. Searches all tripartitions (up to block relabeling) when
/// none is supplied; degrades to `Inconclusive` on any cap.
pub fn check_c4_strict(
    m: &ProbMatrix,
    partition: Option<&Partition>,
    caps: &Caps,
    tol: Option<f64>,
) -> ConditionVerdict {
    let c = m.n_classes();
    let target = 2 * c + 2;
    if c > caps.kruskal_max_classes {
        return ConditionVerdict::new(
            "C4",
            Status::Inconclusive,
            json!({
                "reason": format!(
                    "class count {c} exceeds the Kruskal cap {}",
                    caps.kruskal_max_classes
                ),
            }),
        );
    }
    let n_items = m.items.len();
    let candidates: Vec<Partition> = match partition {
        Some(p) => vec![p.clone()],
        None => {
            if n_items > caps.exhaustive_partition_max_items {
                return ConditionVerdict::new(
                    "C4",
                    Status::Inconclusive,
                    json!({
                        "reason": format!(
                            "{n_items} items exceed the exhaustive partition cap {}; supply a partition",
                            caps.exhaustive_partition_max_items
                        ),
                    }),
                );
            }
            canonical_tripartitions(n_items)
        }
    };

    let mut budget = caps.kruskal_subset_budget;
    let mut best: Option<(Vec<u8>, [usize; 3], usize)> = None;
    let mut searched = 0usize;
    for part in &candidates {
        searched += 1;
        let blocks = match partition_submatrices(m, part) {
            Ok(b) => b,
            Err(e) => {
                return ConditionVerdict::new("C4", Status::Inconclusive, json!({ "reason": e.to_string() }))
            }
        };
        let mut ranks = [0usize; 3];
        let mut capped = false;
        for (t, block) in [&blocks.0, &blocks.1, &blocks.2].iter().enumerate() {
            match kruskal_rank_capped(&block.values, tol, c, budget) {
                Ok(kr) => {
                    budget = budget.saturating_sub(kr.subsets_tested);
                    ranks[t] = kr.k_rank;
                }
                Err(_) => {
                    capped = true;
                    break;
                }
            }
        }
        if capped || budget == 0 {
            return ConditionVerdict::new(
                "C4",
                Status::Inconclusive,
                json!({
                    "reason": "subset-test budget exhausted during the partition search",
                    "partitions_searched": searched,
                    "target": target,
                }),
            );
        }
        let total: usize = ranks.iter().sum();
        if total >= target {
            return ConditionVerdict::new(
                "C4",
                Status::Holds,
                json!({
                    "witness_partition": part.assignment,
                    "kruskal_ranks": ranks,
                    "smallest_dependent_set_sizes": ranks.map(|k| k + 1),
                    "sum": total,
                    "target": target,
                }),
            );
        }
        if best.as_ref().map_or(true, |(_, _, s)| total > *s) {
            best = Some((part.assignment.clone(), ranks, total));
        }
    }
    let best_evidence = best.map(|(assignment, ranks, total)| {
        json!({ "partition": assignment, "kruskal_ranks": ranks, "sum": total })
    });
    ConditionVerdict::new(
        "C4",
        Status::Inconclusive,
        json!({
            "reason": "no witness partition found (the condition is sufficient only)",
            "partitions_searched": searched,
            "best": best_evidence,
            "target": target,
        }),
    )
}

/// All tripartitions of `0..n` into nonempty unlabeled blocks, in a fixed
/// deterministic order: item 0 always in block 1, the first item outside
/// block 1 always in block 2.
fn canonical_tripartitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut assignment = vec![1u8; n];
    fn recurse(assignment: &mut Vec<u8>, pos: usize, seen_two: bool, out: &mut Vec<Partition>) {
        let n = assignment.len();
        if pos == n {
            if assignment.iter().any(|&b| b == 2) && assignment.iter().any(|&b| b == 3) {
                out.push(Partition {
                    assignment: assignment.clone(),
                });
            }
            return;
        }
        let choices: &[u8] = if pos == 0 {
            &[1]
        } else if !seen_two {
            &[1, 2]
        } else {
            &[1, 2, 3]
        };
        for &b in choices {
            assignment[pos] = b;
            recurse(assignment, pos + 1, seen_two || b == 2, out);
        }
    }
    recurse(&mut assignment, 0, false, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Row-dimension generic condition (unrestricted models)
// ---------------------------------------------------------------------------

/// Sufficient condition for generic identifiability of unrestricted models:
/// some tripartition with `min(C, kappa_1) + min(C, kappa_2) + min(C, kappa_3)
/// >= 2C + 2`, where `kappa_t` is the block's pattern-space size. Purely
/// arithmetic — `kappa` depends only on how many items of each level count
/// land in each block — so the search runs over level-multiset profiles.
/// For equal-level models the closed form `J >= 2 ceil(log_M C) + 1` decides
/// directly. Advisory only for attribute models, whose restricted parameters
/// fall in a measure-zero subset of the unrestricted space.
pub fn check_c4prime_generic(spec: &ModelSpec, partition: Option<&Partition>) -> ConditionVerdict {
    let c = spec.n_classes as u128;
    let target = 2 * c + 2;
    let score = |kappas: &[u128; 3]| -> u128 { kappas.iter().map(|&k| k.min(c)).sum() };

    if let Some(part) = partition {
        let kappas = part.kappas(&spec.levels);
        let total = score(&kappas);
        let status = if total >= target { Status::Holds } else { Status::Inconclusive };
        return ConditionVerdict::new(
            "C4prime",
            status,
            json!({
                "partition": part.assignment,
                "kappas": kappas.map(|k| k.to_string()),
                "sum_min_c_kappa": total.to_string(),
                "target": target.to_string(),
            }),
        );
    }

    let j = spec.n_items();
    let m0 = spec.levels[0];
    if spec.levels.iter().all(|&m| m == m0) {
        // Equal levels: each block needs kappa >= C, i.e. ceil(log_M C)
        // items, except one block which gets the remainder (at least one
        // item, contributing min(C, kappa) >= M >= 2).
        let needed = ceil_log(m0 as u128, c);
        let threshold = 2 * needed + 1;
        if j >= threshold {
            let mut assignment = vec![3u8; j];
            for slot in assignment.iter_mut().take(needed) {
                *slot = 1;
            }
            for slot in assignment.iter_mut().skip(needed).take(needed) {
                *slot = 2;
            }
            let part = Partition { assignment };
            let kappas = part.kappas(&spec.levels);
            let total = score(&kappas);
            debug_assert!(total >= target);
            return ConditionVerdict::new(
                "C4prime",
                Status::Holds,
                json!({
                    "closed_form": { "items_needed": threshold, "items": j },
                    "witness_partition": part.assignment,
                    "kappas": kappas.map(|k| k.to_string()),
                    "sum_min_c_kappa": total.to_string(),
                    "target": target.to_string(),
                }),
            );
        }
        return ConditionVerdict::new(
            "C4prime",
            Status::Inconclusive,
            json!({
                "reason": "no partition reaches the target (the condition is sufficient only)",
                "closed_form": { "items_needed": threshold, "items": j },
                "target": target.to_string(),
            }),
        );
    }

    // Mixed levels: enumerate how many items of each level value go to each
    // block. Feasible for J <= 20 since the profile count is polynomial.
    if j > 20 {
        return ConditionVerdict::new(
            "C4prime",
            Status::Inconclusive,
            json!({ "reason": "mixed-level profile search capped at 20 items; supply a partition" }),
        );
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new(); // (level value, item indices)
    for (idx, &m) in spec.levels.iter().enumerate() {
        match groups.iter_mut().find(|(value, _)| *value == m) {
            Some((_, items)) => items.push(idx),
            None => groups.push((m, vec![idx])),
        }
    }
    let mut counts: Vec<[usize; 3]> = vec![[0; 3]; groups.len()];
    let mut best: Option<(u128, Vec<u8>, [u128; 3])> = None;
    search_profiles(spec, &groups, &mut counts, 0, c, target, &mut best);
    match best {
        Some((total, assignment, kappas)) if total >= target => ConditionVerdict::new(
            "C4prime",
            Status::Holds,
            json!({
                "witness_partition": assignment,
                "kappas": kappas.map(|k| k.to_string()),
                "sum_min_c_kappa": total.to_string(),
                "target": target.to_string(),
            }),
        ),
        Some((total, _, _)) => ConditionVerdict::new(
            "C4prime",
            Status::Inconclusive,
            json!({
                "reason": "no partition reaches the target (the condition is sufficient only)",
                "best_sum": total.to_string(),
                "target": target.to_string(),
            }),
        ),
        None => ConditionVerdict::new(
            "C4prime",
            Status::Inconclusive,
            json!({ "reason": "no nonempty tripartition exists (fewer than three items)" }),
        ),
    }
}

/// Smallest `t` with `m^t >= c` (exact integer arithmetic).
fn ceil_log(m: u128, c: u128) -> usize {
    let mut t = 0usize;
    let mut power = 1u128;
    while power < c {
        power = power.saturating_mul(m);
        t += 1;
    }
    t
}

fn search_profiles(
    spec: &ModelSpec,
    groups: &[(usize, Vec<usize>)],
    counts: &mut Vec<[usize; 3]>,
    g: usize,
    c: u128,
    target: u128,
    best: &mut Option<(u128, Vec<u8>, [u128; 3])>,
) {
    if g == groups.len() {
        let mut kappas = [1u128; 3];
        for ((value, _), cnt) in groups.iter().zip(counts.iter()) {
            for t in 0..3 {
                kappas[t] = kappas[t].saturating_mul((*value as u128).saturating_pow(cnt[t] as u32));
            }
        }
        let block_sizes: [usize; 3] = [0, 1, 2].map(|t| counts.iter().map(|cnt| cnt[t]).sum());
        if block_sizes.iter().any(|&s| s == 0) {
            return;
        }
        let total: u128 = kappas.iter().map(|&k| k.min(c)).sum();
        if best.as_ref().map_or(true, |(s, _, _)| total > *s) {
            // Reconstruct a concrete assignment from the counts.
            let mut assignment = vec![1u8; spec.n_items()];
            for ((_, items), cnt) in groups.iter().zip(counts.iter()) {
                let mut it = items.iter();
                for (t, &n_t) in cnt.iter().enumerate() {
                    for _ in 0..n_t {
                        assignment[*it.next().unwrap()] = t as u8 + 1;
                    }
                }
            }
            *best = Some((total, assignment, kappas));
        }
        return;
    }
    let size = groups[g].1.len();
    for n1 in 0..=size {
        for n2 in 0..=(size - n1) {
            counts[g] = [n1, n2, size - n1 - n2];
            search_profiles(spec, groups, counts, g + 1, c, target, best);
            if best.as_ref().map_or(false, |(s, _, _)| *s >= target) {
                return;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Structural Q-matrix conditions (attribute models)
// ---------------------------------------------------------------------------

/// Sufficient condition for strict identifiability of attribute models:
/// (a) the rows of Q can be permuted so two disjoint identity blocks sit on
/// top, and (b) every class pair is distinguished by some item outside the
/// chosen blocks at the supplied response probabilities.
pub fn check_c4star(q: &QMatrix, params: &CoreParams) -> ConditionVerdict {
    let k = q.n_attributes();
    let j_total = q.n_items();
    if j_total < 2 * k {
        return ConditionVerdict::new(
            "C4star",
            Status::Fails,
            json!({ "reason": format!("{j_total} items cannot host two {k}x{k} identity blocks") }),
        );
    }
    // Clause (a): two lowest-index pure rows per attribute, disjoint by
    // construction since a pure row serves exactly one attribute.
    let mut first_block = Vec::with_capacity(k);
    let mut second_block = Vec::with_capacity(k);
    let mut missing = Vec::new();
    for attr in 0..k {
        let pure: Vec<usize> = (0..j_total)
            .filter(|&j| {
                q.entries[j]
                    .iter()
                    .enumerate()
                    .all(|(kk, &e)| (e == 1) == (kk == attr))
            })
            .collect();
        if pure.len() >= 2 {
            first_block.push(pure[0]);
            second_block.push(pure[1]);
        } else {
            missing.push(json!({ "attribute": attr, "pure_rows": pure }));
        }
    }
    if !missing.is_empty() {
        return ConditionVerdict::new(
            "C4star",
            Status::Fails,
            json!({
                "reason": "some attribute lacks two single-attribute items",
                "missing": missing,
            }),
        );
    }
    // Clause (b): every class pair must differ in the response probabilities
    // of some remaining item.
    let chosen: Vec<usize> = first_block.iter().chain(&second_block).cloned().collect();
    let remaining: Vec<usize> = (0..j_total).filter(|j| !chosen.contains(j)).collect();
    let n_classes = params.eta.len();
    let mut certificates = Vec::new();
    for c1 in 0..n_classes {
        for c2 in (c1 + 1)..n_classes {
            let witness = remaining.iter().find(|&&j| {
                params.theta[j][c1]
                    .iter()
                    .zip(&params.theta[j][c2])
                    .any(|(a, b)| (a - b).abs() > THETA_EQUALITY_TOL)
            });
            match witness {
                Some(&j) => certificates.push(json!({ "classes": [c1, c2], "item": j })),
                None => {
                    return ConditionVerdict::new(
                        "C4star",
                        Status::Fails,
                        json!({
                            "reason": "no remaining item distinguishes a class pair",
                            "identity_rows": [first_block, second_block],
                            "undistinguished_classes": [c1, c2],
                        }),
                    )
                }
            }
        }
    }
    ConditionVerdict::new(
        "C4star",
        Status::Holds,
        json!({
            "identity_rows": [first_block, second_block],
            "distinguishing_items": certificates,
        }),
    )
}

/// Sufficient condition for generic identifiability of attribute models:
/// 2K distinct rows assignable two-per-attribute with a 1 at the assigned
/// attribute (two unit-diagonal blocks after permutation), such that the
/// remaining rows still cover every attribute. Solved by backtracking over
/// the two-per-attribute assignment with a node budget.
pub fn check_c4doubleprime(q: &QMatrix, caps: &Caps) -> ConditionVerdict {
    let k = q.n_attributes();
    let j_total = q.n_items();
    if j_total < 2 * k {
        return ConditionVerdict::new(
            "C4doubleprime",
            Status::Fails,
            json!({ "reason": format!("{j_total} items cannot host two {k}x{k} diagonal blocks") }),
        );
    }
    // Counting necessity: an attribute needs two assigned supporters plus at
    // least one unassigned supporter (supporters of other attributes do not
    // help coverage once assigned).
    let sums = q.column_sums();
    if let Some((attr, &s)) = sums.iter().enumerate().find(|(_, &s)| s < 3) {
        return ConditionVerdict::new(
            "C4doubleprime",
            Status::Fails,
            json!({
                "reason": format!(
                    "attribute {attr} is required by only {s} item(s); two diagonal slots \
                     plus leftover coverage need three"
                ),
            }),
        );
    }

    // Candidate rows per attribute, ordered; attributes searched scarcest
    // first to fail fast.
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|attr| (0..j_total).filter(|&j| q.requires(j, attr)).collect())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&attr| candidates[attr].len());

    struct Search<'a> {
        q: &'a QMatrix,
        candidates: &'a [Vec<usize>],
        order: &'a [usize],
        used: Vec<bool>,
        picks: Vec<(usize, usize)>, // per attribute (in `order`): (row1, row2)
        nodes: u64,
        budget: u64,
    }

    enum Outcome {
        Found(Vec<(usize, usize)>),
        Exhausted,
        Capped,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) -> Outcome {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Outcome::Capped;
            }
            if depth == self.order.len() {
                // Leftover rows must still cover every attribute.
                let k = self.q.n_attributes();
                let mut covered = vec![false; k];
                for j in 0..self.q.n_items() {
                    if !self.used[j] {
                        for (attr, slot) in covered.iter_mut().enumerate() {
                            *slot |= self.q.requires(j, attr);
                        }
                    }
                }
                if covered.iter().all(|&c| c) {
                    return Outcome::Found(self.picks.clone());
                }
                return Outcome::Exhausted;
            }
            let attr = self.order[depth];
            let pool = &self.candidates[attr];
            for (i, &row1) in pool.iter().enumerate() {
                if self.used[row1] {
                    continue;
                }
                for &row2 in &pool[i + 1..] {
                    if self.used[row2] {
                        continue;
                    }
                    self.used[row1] = true;
                    self.used[row2] = true;
                    self.picks.push((row1, row2));
                    match self.run(depth + 1) {
                        Outcome::Exhausted => {}
                        done => return done,
                    }
                    self.picks.pop();
                    self.used[row1] = false;
                    self.used[row2] = false;
                }
            }
            Outcome::Exhausted
        }
    }

    let mut search = Search {
        q,
        candidates: &candidates,
        order: &order,
        used: vec![false; j_total],
        picks: Vec::with_capacity(k),
        nodes: 0,
        budget: caps.assignment_node_budget,
    };
    match search.run(0) {
        Outcome::Found(picks) => {
            // Report the witness in attribute order, not search order.
            let mut block1 = vec![0usize; k];
            let mut block2 = vec![0usize; k];
            for (depth, &attr) in order.iter().enumerate() {
                block1[attr] = picks[depth].0;
                block2[attr] = picks[depth].1;
            }
            ConditionVerdict::new(
                "C4doubleprime",
                Status::Holds,
                json!({
                    "diagonal_rows": [block1, block2],
                    "nodes_visited": search.nodes,
                }),
            )
        }
        Outcome::Exhausted => ConditionVerdict::new(
            "C4doubleprime",
            Status::Fails,
            json!({
                "reason": "no two-per-attribute assignment leaves every attribute covered",
                "nodes_visited": search.nodes,
            }),
        ),
        Outcome::Capped => ConditionVerdict::new(
            "C4doubleprime",
            Status::Inconclusive,
            json!({
                "reason": "assignment search budget exhausted",
                "budget": caps.assignment_node_budget,
            }),
        ),
    }
}

/// Lone-attribute condition: some attribute is required by exactly one item.
/// When it holds, the model is NOT generically identifiable (an explicit
/// distribution-preserving perturbation exists; see the counterexample
/// module).
pub fn check_p1(q: &QMatrix) -> ConditionVerdict {
    let sums = q.column_sums();
    let lone: Vec<usize> = sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == 1)
        .map(|(attr, _)| attr)
        .collect();
    let status = if lone.is_empty() { Status::Fails } else { Status::Holds };
    ConditionVerdict::new(
        "P1",
        status,
        json!({ "lone_attributes": lone, "column_sums": sums }),
    )
}

/// Completeness: for every attribute some row of Q equals that attribute's
/// unit vector (the Q-matrix contains an identity block).
pub fn check_p2_completeness(q: &QMatrix) -> ConditionVerdict {
    let k = q.n_attributes();
    let mut pure_rows = Vec::with_capacity(k);
    let mut missing = Vec::new();
    for attr in 0..k {
        let row = (0..q.n_items()).find(|&j| {
            q.entries[j]
                .iter()
                .enumerate()
                .all(|(kk, &e)| (e == 1) == (kk == attr))
        });
        match row {
            Some(j) => pure_rows.push(json!({ "attribute": attr, "row": j })),
            None => missing.push(attr),
        }
    }
    let status = if missing.is_empty() { Status::Holds } else { Status::Fails };
    ConditionVerdict::new(
        "completeness",
        status,
        json!({ "pure_rows": pure_rows, "missing_attributes": missing }),
    )
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

/// Summary verdict for local identifiability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalSummary {
    Identifiable,
    NotIdentifiable,
    Inconclusive,
}

/// Summary verdict for strict identifiability. The certifying conditions are
/// sufficient only, so their failure never refutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StrictSummary {
    Identifiable,
    Inconclusive,
}

/// Summary verdict for generic identifiability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GenericSummary {
    Identifiable,
    NotGenericallyIdentifiable,
    Inconclusive,
}

/// Options that shape report assembly.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// Treat the structural generic condition as necessary in the one regime
    /// where that is proven (two binary attributes, binary items), letting
    /// its failure refute generic identifiability.
    pub structural_necessity: bool,
    /// Attribute count, when the model is an attribute model.
    pub n_attributes: Option<usize>,
    /// Whether all items are binary.
    pub all_binary: bool,
}

/// The assembled report: verdicts in canonical order plus summary.
#[derive(Debug, Clone)]
pub struct IdentifiabilityReport {
    pub model_kind: ModelKind,
    pub conditions: Vec<ConditionVerdict>,
    pub local: LocalSummary,
    pub strict: StrictSummary,
    pub generic: GenericSummary,
    pub caps: Caps,
    pub rank_tolerance: Option<f64>,
    /// Set when the evidence is mutually contradictory (should never happen;
    /// reported rather than silently reconciled).
    pub internal_error: Option<String>,
}

impl IdentifiabilityReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionVerdict> {
        self.conditions.iter().find(|v| v.name == name)
    }

    /// Canonical JSON rendering with a fixed key order.
    pub fn to_json(&self) -> Value {
        let mut conditions = serde_json::Map::new();
        for v in &self.conditions {
            conditions.insert(
                v.name.clone(),
                json!({ "status": v.status, "evidence": v.evidence }),
            );
        }
        let mut root = serde_json::Map::new();
        root.insert("model".into(), json!(self.model_kind));
        root.insert("conditions".into(), Value::Object(conditions));
        root.insert(
            "summary".into(),
            json!({ "local": self.local, "strict": self.strict, "generic": self.generic }),
        );
        root.insert("caps".into(), serde_json::to_value(&self.caps).unwrap());
        root.insert(
            "tolerances".into(),
            json!({
                "rank": self.rank_tolerance,
                "theta_equality": THETA_EQUALITY_TOL,
            }),
        );
        if let Some(err) = &self.internal_error {
            root.insert("internal_error".into(), json!(err));
        }
        Value::Object(root)
    }
}

const CONDITION_ORDER: &[&str] = &[
    "A1",
    "A2",
    "A3",
    "A4",
    "C2",
    "C3",
    "local_jacobian",
    "C4",
    "C4prime",
    "C4star",
    "C4doubleprime",
    "P1",
    "completeness",
];

fn status_of(verdicts: &[ConditionVerdict], name: &str) -> Option<Status> {
    verdicts.iter().find(|v| v.name == name).map(|v| v.status)
}

/// Fold the individual verdicts into the three summary verdicts.
///
/// * strict = Identifiable iff the regularity conditions hold and either a
///   Kruskal witness partition or (attribute models) the double-identity
///   structure was found;
/// * generic = NotGenericallyIdentifiable when a lone attribute exists
///   (attribute models), Identifiable when regularity plus the applicable
///   generic condition hold, else Inconclusive;
/// * local = the Jacobian verdict verbatim, when one was computed.
pub fn assemble_report(
    verdicts: Vec<ConditionVerdict>,
    model_kind: ModelKind,
    caps: Caps,
    rank_tolerance: Option<f64>,
    options: &ReportOptions,
) -> IdentifiabilityReport {
    let mut conditions = verdicts;
    conditions.sort_by_key(|v| {
        CONDITION_ORDER
            .iter()
            .position(|&n| n == v.name)
            .unwrap_or(CONDITION_ORDER.len())
    });

    let holds = |name: &str| status_of(&conditions, name) == Some(Status::Holds);
    let regularity = holds("A1") && holds("A2") && holds("A3");

    let local = match status_of(&conditions, "local_jacobian") {
        Some(Status::Holds) => LocalSummary::Identifiable,
        Some(Status::Fails) => LocalSummary::NotIdentifiable,
        _ => LocalSummary::Inconclusive,
    };

    let strict_certified = holds("C4") || (model_kind == ModelKind::RegCdm && holds("C4star"));
    let strict = if regularity && strict_certified {
        StrictSummary::Identifiable
    } else {
        StrictSummary::Inconclusive
    };

    let generic = if model_kind == ModelKind::RegCdm && holds("P1") {
        GenericSummary::NotGenericallyIdentifiable
    } else {
        let generic_certified = match model_kind {
            ModelKind::RegLcm => holds("C4prime"),
            ModelKind::RegCdm => holds("C4doubleprime"),
        };
        if regularity && generic_certified {
            GenericSummary::Identifiable
        } else if model_kind == ModelKind::RegCdm
            && options.structural_necessity
            && options.n_attributes == Some(2)
            && options.all_binary
            && status_of(&conditions, "C4doubleprime") == Some(Status::Fails)
        {
            // In the two-binary-attribute binary-item regime the structural
            // condition is necessary as well as sufficient.
            GenericSummary::NotGenericallyIdentifiable
        } else {
            GenericSummary::Inconclusive
        }
    };

    // Cross-checks: certified strict identifiability contradicts a refuted
    // local test and contradicts a lone attribute.
    let mut internal_error = None;
    if strict == StrictSummary::Identifiable && local == LocalSummary::NotIdentifiable {
        internal_error = Some(
            "contradictory evidence: strict identifiability certified while the \
             Jacobian test refutes local identifiability"
                .to_string(),
        );
    }
    if strict == StrictSummary::Identifiable
        && model_kind == ModelKind::RegCdm
        && holds("P1")
    {
        internal_error = Some(
            "contradictory evidence: strict identifiability certified while a lone \
             attribute refutes generic identifiability"
                .to_string(),
        );
    }

    IdentifiabilityReport {
        model_kind,
        conditions,
        local,
        strict,
        generic,
        caps,
        rank_tolerance,
        internal_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_patterns, ModelSpec};

    fn space(levels: Vec<usize>, c: usize) -> PatternSpace {
        enumerate_patterns(&ModelSpec::new(levels, c, 0, 0).unwrap()).unwrap()
    }

    #[test]
    fn a1_arithmetic() {
        // 25 binary items, 128 classes: 2^25 - 1 >= 128*25 + 127.
        let spec = ModelSpec::new(vec![2; 25], 128, 0, 0).unwrap();
        let v = check_a1(&spec);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.evidence["pattern_cells"], "33554431");
        assert_eq!(v.evidence["free_parameters"], "3327");

        // Equality boundary: 3 binary items, 2 classes -> 7 >= 7.
        let spec = ModelSpec::new(vec![2; 3], 2, 0, 0).unwrap();
        assert_eq!(check_a1(&spec).status, Status::Holds);

        // 2 binary items, 2 classes -> 3 < 5.
        let spec = ModelSpec::new(vec![2; 2], 2, 0, 0).unwrap();
        assert_eq!(check_a1(&spec).status, Status::Fails);
    }

    #[test]
    fn a2_detects_non_finite_coefficients() {
        let spec = ModelSpec::new(vec![2], 2, 0, 0).unwrap();
        let mut reg = RegressionParams::zeros(&spec);
        assert_eq!(check_a2(&reg, None).status, Status::Holds);
        reg.beta[0][1] = f64::INFINITY;
        assert_eq!(check_a2(&reg, None).status, Status::Fails);
    }

    #[test]
    fn a3_mixed_binary_column_holds_constant_fails() {
        let spec = ModelSpec::new(vec![2], 2, 1, 1).unwrap();
        let mixed = CovariateDesign {
            x: vec![
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![1.0, 1.0],
                vec![1.0, 0.0],
            ],
            z: vec![vec![vec![0.0], vec![1.0], vec![0.0], vec![1.0]]],
        };
        assert_eq!(check_a3(Some(&mixed), &spec).status, Status::Holds);

        let constant = CovariateDesign {
            x: vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]],
            z: vec![vec![vec![0.0], vec![1.0], vec![0.5]]],
        };
        assert_eq!(check_a3(Some(&constant), &spec).status, Status::Fails);
    }

    #[test]
    fn a3_too_few_subjects_fails() {
        let spec = ModelSpec::new(vec![2], 2, 3, 0).unwrap();
        let design = CovariateDesign {
            x: vec![vec![1.0, 0.1, 0.2, 0.3]],
            z: vec![vec![vec![]]],
        };
        let v = check_a3(Some(&design), &spec);
        assert_eq!(v.status, Status::Fails);
    }

    #[test]
    fn c2_positivity() {
        let uniform = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![vec![vec![0.5, 0.5]; 2]],
        };
        assert_eq!(check_c2(&uniform).status, Status::Holds);

        let tiny = CoreParams {
            eta: vec![1e-300, 1.0 - 1e-300],
            theta: vec![vec![vec![0.5, 0.5]; 2]],
        };
        assert_eq!(check_c2(&tiny).status, Status::Holds);

        let zero = CoreParams {
            eta: vec![0.0, 1.0],
            theta: vec![vec![vec![0.5, 0.5]; 2]],
        };
        assert_eq!(check_c2(&zero).status, Status::Fails);
    }

    #[test]
    fn c3_detects_duplicated_columns() {
        let sp = space(vec![2, 2], 2);
        let theta_col = vec![vec![0.3, 0.7], vec![0.3, 0.7]];
        let params = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![theta_col.clone(), theta_col],
        };
        assert_eq!(check_c3(&params, &sp, None).unwrap().status, Status::Fails);

        let distinct = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![
                vec![vec![0.3, 0.7], vec![0.8, 0.2]],
                vec![vec![0.6, 0.4], vec![0.1, 0.9]],
            ],
        };
        assert_eq!(check_c3(&distinct, &sp, None).unwrap().status, Status::Holds);
    }

    #[test]
    fn local_jacobian_three_binary_items() {
        let sp = space(vec![2, 2, 2], 2);
        let params = CoreParams {
            eta: vec![0.4, 0.6],
            theta: vec![
                vec![vec![0.3, 0.7], vec![0.8, 0.2]],
                vec![vec![0.6, 0.4], vec![0.1, 0.9]],
                vec![vec![0.25, 0.75], vec![0.55, 0.45]],
            ],
        };
        // 7 patterns x 7 free parameters, generically full rank.
        let v = check_local(&params, &sp, None).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.evidence["rank"], 7);

        // Duplicated classes kill the membership column.
        let theta_col = vec![vec![0.3, 0.7], vec![0.3, 0.7]];
        let dup = CoreParams {
            eta: vec![0.4, 0.6],
            theta: vec![theta_col.clone(), theta_col.clone(), theta_col],
        };
        assert_eq!(check_local(&dup, &sp, None).unwrap().status, Status::Fails);
    }

    #[test]
    fn c4_three_binary_items_two_classes() {
        let sp = space(vec![2, 2, 2], 2);
        let params = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![
                vec![vec![0.3, 0.7], vec![0.8, 0.2]],
                vec![vec![0.6, 0.4], vec![0.1, 0.9]],
                vec![vec![0.25, 0.75], vec![0.55, 0.45]],
            ],
        };
        let psi = build_psi(&params, &sp).unwrap();
        let v = check_c4_strict(&psi, None, &Caps::default(), None);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.evidence["kruskal_ranks"], json!([2, 2, 2]));
        assert_eq!(v.evidence["sum"], 6);
    }

    #[test]
    fn c4_duplicated_classes_are_inconclusive() {
        let sp = space(vec![2, 2, 2], 2);
        let theta_col = vec![vec![0.3, 0.7], vec![0.3, 0.7]];
        let params = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![theta_col.clone(), theta_col.clone(), theta_col],
        };
        let psi = build_psi(&params, &sp).unwrap();
        let v = check_c4_strict(&psi, None, &Caps::default(), None);
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn c4_class_cap_degrades_gracefully() {
        let sp = space(vec![2, 2], 2);
        let params = CoreParams {
            eta: vec![0.5, 0.5],
            theta: vec![
                vec![vec![0.3, 0.7], vec![0.8, 0.2]],
                vec![vec![0.6, 0.4], vec![0.1, 0.9]],
            ],
        };
        let psi = build_psi(&params, &sp).unwrap();
        let caps = Caps {
            kruskal_max_classes: 1,
            ..Caps::default()
        };
        let v = check_c4_strict(&psi, None, &caps, None);
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn tripartition_enumeration_counts() {
        // Stirling-number-of-the-second-kind S(n, 3) unlabeled partitions.
        assert_eq!(canonical_tripartitions(3).len(), 1);
        assert_eq!(canonical_tripartitions(4).len(), 6);
        assert_eq!(canonical_tripartitions(5).len(), 25);
    }

    #[test]
    fn c4prime_binary_examples() {
        // 3 binary items, 2 classes: 2+2+2 = 6 >= 6.
        let spec = ModelSpec::new(vec![2; 3], 2, 0, 0).unwrap();
        assert_eq!(check_c4prime_generic(&spec, None).status, Status::Holds);

        // 4 binary items, 4 classes: best 2+2+4 = 8 < 10.
        let spec = ModelSpec::new(vec![2; 4], 4, 0, 0).unwrap();
        assert_eq!(
            check_c4prime_generic(&spec, None).status,
            Status::Inconclusive
        );

        // 5 binary items, 4 classes: 2+4+4 = 10 >= 10 (closed form J >= 5).
        let spec = ModelSpec::new(vec![2; 5], 4, 0, 0).unwrap();
        let v = check_c4prime_generic(&spec, None);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.evidence["closed_form"]["items_needed"], 5);
    }

    #[test]
    fn c4prime_mixed_levels_and_explicit_partition() {
        // Mixed levels go through the profile search.
        let spec = ModelSpec::new(vec![2, 3, 2, 3, 2], 4, 0, 0).unwrap();
        let v = check_c4prime_generic(&spec, None);
        assert_eq!(v.status, Status::Holds);

        // An explicit partition is scored directly.
        let part = Partition::new(vec![1, 1, 2, 2, 3]).unwrap();
        let v = check_c4prime_generic(&spec, Some(&part));
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.evidence["kappas"], json!(["6", "6", "2"]));
    }

    #[test]
    fn ceil_log_exact() {
        assert_eq!(ceil_log(2, 4), 2);
        assert_eq!(ceil_log(2, 5), 3);
        assert_eq!(ceil_log(3, 27), 3);
        assert_eq!(ceil_log(3, 28), 4);
        assert_eq!(ceil_log(2, 1), 0);
    }

    fn dina_theta(q: &QMatrix, guess: f64, slip: f64) -> Vec<Vec<Vec<f64>>> {
        let k = q.n_attributes();
        let c = 1usize << k;
        (0..q.n_items())
            .map(|j| {
                let req = q.required_mask(j);
                (0..c)
                    .map(|class| {
                        let mastered = crate::model::alpha_mask_of_class(class, k) & req == req;
                        let success = if mastered { 1.0 - slip } else { guess };
                        vec![1.0 - success, success]
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn c4star_double_identity_with_distinguishing_item() {
        // Q = (I_2; I_2; (1,1)): both clauses satisfied under conjunctive
        // mastery probabilities.
        let q = QMatrix::new(vec![
            vec![1, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
        ])
        .unwrap();
        let params = CoreParams {
            eta: vec![0.25; 4],
            theta: dina_theta(&q, 0.2, 0.2),
        };
        let v = check_c4star(&q, &params);
        // The all-attributes item distinguishes mastery of everything from
        // the rest, but classes (0,1) and (1,0) respond identically to it,
        // so clause (b) must fail.
        assert_eq!(v.status, Status::Fails);

        // Adding disambiguating single-attribute items outside the identity
        // blocks makes clause (b) pass.
        let q = QMatrix::new(vec![
            vec![1, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 1],
        ])
        .unwrap();
        let params = CoreParams {
            eta: vec![0.25; 4],
            theta: dina_theta(&q, 0.2, 0.2),
        };
        let v = check_c4star(&q, &params);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.evidence["identity_rows"], json!([[0, 1], [2, 3]]));
    }

    #[test]
    fn c4star_requires_two_identity_blocks() {
        let q = QMatrix::new(vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![1, 1]]).unwrap();
        let params = CoreParams {
            eta: vec![0.25; 4],
            theta: dina_theta(&q, 0.2, 0.2),
        };
        let v = check_c4star(&q, &params);
        assert_eq!(v.status, Status::Fails);
    }

    #[test]
    fn c4doubleprime_requires_three_supporters_per_attribute() {
        // Attribute 1 appears in only two rows: both get consumed by the
        // diagonal slots, leaving it uncovered.
        let q = QMatrix::new(vec![
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![1, 0],
            vec![1, 0],
        ])
        .unwrap();
        let v = check_c4doubleprime(&q, &Caps::default());
        assert_eq!(v.status, Status::Fails);
    }

    #[test]
    fn c4doubleprime_finds_diagonal_witness() {
        let q = QMatrix::new(vec![
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![1, 1],
            vec![1, 0],
            vec![0, 1],
        ])
        .unwrap();
        let v = check_c4doubleprime(&q, &Caps::default());
        assert_eq!(v.status, Status::Holds);
        // The witness rows must have a 1 at their assigned attribute and the
        // leftovers must cover both attributes.
        let rows = &v.evidence["diagonal_rows"];
        for (block, _) in rows.as_array().unwrap().iter().zip(0..) {
            for (attr, row) in block.as_array().unwrap().iter().enumerate() {
                assert!(q.requires(row.as_u64().unwrap() as usize, attr));
            }
        }
    }

    #[test]
    fn p1_and_completeness_inspection() {
        let q = QMatrix::new(vec![vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        let p1 = check_p1(&q);
        assert_eq!(p1.status, Status::Holds);
        assert_eq!(p1.evidence["lone_attributes"], json!([0]));
        assert_eq!(check_p2_completeness(&q).status, Status::Holds);

        let q = QMatrix::new(vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(check_p1(&q).status, Status::Fails);
    }

    #[test]
    fn report_assembly_and_determinism() {
        let spec = ModelSpec::new(vec![2; 3], 2, 0, 0).unwrap();
        let sp = space(vec![2, 2, 2], 2);
        let params = CoreParams {
            eta: vec![0.4, 0.6],
            theta: vec![
                vec![vec![0.3, 0.7], vec![0.8, 0.2]],
                vec![vec![0.6, 0.4], vec![0.1, 0.9]],
                vec![vec![0.25, 0.75], vec![0.55, 0.45]],
            ],
        };
        let psi = build_psi(&params, &sp).unwrap();
        let verdicts = vec![
            check_a1(&spec),
            check_a2(&RegressionParams::zeros(&spec), None),
            check_a3(None, &spec),
            check_c2(&params),
            check_c3(&params, &sp, None).unwrap(),
            check_local(&params, &sp, None).unwrap(),
            check_c4_strict(&psi, None, &Caps::default(), None),
            check_c4prime_generic(&spec, None),
        ];
        let report = assemble_report(
            verdicts.clone(),
            ModelKind::RegLcm,
            Caps::default(),
            None,
            &ReportOptions::default(),
        );
        assert_eq!(report.local, LocalSummary::Identifiable);
        assert_eq!(report.strict, StrictSummary::Identifiable);
        assert_eq!(report.generic, GenericSummary::Identifiable);
        assert!(report.internal_error.is_none());

        let again = assemble_report(
            verdicts,
            ModelKind::RegLcm,
            Caps::default(),
            None,
            &ReportOptions::default(),
        );
        assert_eq!(
            serde_json::to_string(&report.to_json()).unwrap(),
            serde_json::to_string(&again.to_json()).unwrap()
        );
    }

    #[test]
    fn lone_attribute_forces_not_generically_identifiable() {
        let q = QMatrix::new(vec![vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        let spec = ModelSpec::for_attributes(vec![2; 3], 2, 0, 0).unwrap();
        let verdicts = vec![
            check_a1(&spec),
            check_a3(None, &spec),
            check_a2(&RegressionParams::zeros(&spec), None),
            check_p1(&q),
            check_p2_completeness(&q),
        ];
        let report = assemble_report(
            verdicts,
            ModelKind::RegCdm,
            Caps::default(),
            None,
            &ReportOptions::default(),
        );
        assert_eq!(report.generic, GenericSummary::NotGenericallyIdentifiable);
        assert_eq!(report.strict, StrictSummary::Inconclusive);
    }
}
