//! Shared oracles and generators for the integration tests.
//!
//! The oracles deliberately avoid the library's own code paths: rank over
//! exact rationals, Kruskal rank by brute-force subset enumeration, and the
//! response Jacobian by central finite differences.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lcmid::model::{response_distribution, CoreParams, PatternSpace};

/// Exact matrix rank via Gaussian elimination over arbitrary-precision
/// rationals. Every finite `f64` is an exact rational, so there is no
/// tolerance anywhere in this computation.
pub fn exact_rank(m: &DMatrix<f64>) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| BigRational::from_float(m[(i, j)]).expect("finite entry"))
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, pivot);
        let pivot_row = a[row].clone();
        let pivot_val = pivot_row[col].clone();
        for (i, target) in a.iter_mut().enumerate() {
            if i == row || target[col].is_zero() {
                continue;
            }
            let factor = &target[col] / &pivot_val;
            for j in col..cols {
                target[j] = &target[j] - &factor * &pivot_row[j];
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Brute-force Kruskal rank: the largest `k` such that every set of `k`
/// columns is linearly independent, decided by exact rational rank.
pub fn brute_force_kruskal(m: &DMatrix<f64>) -> usize {
    let cols = m.ncols();
    for k in 1..=cols {
        for subset in subsets_of_size(cols, k) {
            let sub = m.select_columns(subset.iter());
            if exact_rank(&sub) < k {
                return k - 1;
            }
        }
    }
    cols
}

/// The free parameters of a core model, flattened in the library's Jacobian
/// column order: class weights 1..C-1, then response probabilities by
/// (item, class, level 1..M-1).
pub fn flatten_free_params(params: &CoreParams) -> Vec<f64> {
    let mut v: Vec<f64> = params.eta[1..].to_vec();
    for item in &params.theta {
        for class in item {
            v.extend_from_slice(&class[1..]);
        }
    }
    v
}

/// Perturb one free parameter, compensating through the reference coordinate
/// so the parameters stay on the probability simplex.
pub fn perturb_free_param(params: &CoreParams, index: usize, delta: f64) -> CoreParams {
    let mut p = params.clone();
    let c = p.eta.len();
    if index < c - 1 {
        p.eta[index + 1] += delta;
        p.eta[0] -= delta;
        return p;
    }
    let mut offset = index - (c - 1);
    for item in p.theta.iter_mut() {
        for class in item.iter_mut() {
            let free = class.len() - 1;
            if offset < free {
                class[offset + 1] += delta;
                class[0] -= delta;
                return p;
            }
            offset -= free;
        }
    }
    panic!("free-parameter index {index} out of range");
}

/// Central-finite-difference Jacobian of the reduced response distribution
/// (reference pattern dropped) with respect to the free parameters.
pub fn fd_jacobian(params: &CoreParams, space: &PatternSpace, h: f64) -> DMatrix<f64> {
    let n_free = flatten_free_params(params).len();
    let s_reduced = space.len() - 1;
    let mut jac = DMatrix::zeros(s_reduced, n_free);
    for col in 0..n_free {
        let plus = response_distribution(&perturb_free_param(params, col, h), space).unwrap();
        let minus = response_distribution(&perturb_free_param(params, col, -h), space).unwrap();
        for row in 0..s_reduced {
            jac[(row, col)] = (plus[row + 1] - minus[row + 1]) / (2.0 * h);
        }
    }
    jac
}

/// Random strictly positive probability vector, entries bounded away from 0.
pub fn random_simplex(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Random strictly positive core parameters for the given item levels.
pub fn random_core(rng: &mut ChaCha8Rng, levels: &[usize], n_classes: usize) -> CoreParams {
    CoreParams {
        eta: random_simplex(rng, n_classes),
        theta: levels
            .iter()
            .map(|&m| (0..n_classes).map(|_| random_simplex(rng, m)).collect())
            .collect(),
    }
}
