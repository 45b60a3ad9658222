//! Seeded simulation of covariates, latent classes, and responses.
//!
//! Each subject gets covariates drawn per the configured column generators
//! (the item-response covariates are shared across items, mirroring a
//! demographic covariate like gender), then a latent class from the
//! membership link, then conditionally independent item responses. The draw
//! order is fixed, so a seed reproduces the dataset bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{per_subject_params, CovariateDesign, ModelSpec, RegressionParams};

/// One covariate column generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnGen {
    /// 0/1 with success probability `p`.
    Bernoulli { p: f64 },
    /// Uniform on `[a, b)`.
    Uniform { a: f64, b: f64 },
    /// A fixed value.
    Constant { value: f64 },
}

impl ColumnGen {
    fn validate(&self) -> Result<()> {
        match *self {
            ColumnGen::Bernoulli { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidSpec(format!(
                        "bernoulli probability {p} out of [0, 1]"
                    )));
                }
            }
            ColumnGen::Uniform { a, b } => {
                if !(a < b) || !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "uniform bounds ({a}, {b}) must be finite with a < b"
                    )));
                }
            }
            ColumnGen::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidSpec("constant covariate must be finite".into()));
                }
            }
        }
        Ok(())
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ColumnGen::Bernoulli { p } => {
                if rng.gen::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            ColumnGen::Uniform { a, b } => rng.gen_range(a..b),
            ColumnGen::Constant { value } => value,
        }
    }
}

/// Simulation configuration: size, seed, and covariate generators (one per
/// membership covariate and one per response covariate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_subjects: usize,
    pub seed: u64,
    /// Generators for the `p` membership covariates (the intercept is
    /// implicit).
    #[serde(default)]
    pub x_generators: Vec<ColumnGen>,
    /// Generators for the `q` response covariates, shared across items.
    #[serde(default)]
    pub z_generators: Vec<ColumnGen>,
}

impl SimConfig {
    /// Default generators: a single 0/1 column with probability one half for
    /// each covariate block (a balanced binary demographic).
    pub fn with_default_generators(n_subjects: usize, seed: u64, spec: &ModelSpec) -> Self {
        SimConfig {
            n_subjects,
            seed,
            x_generators: vec![ColumnGen::Bernoulli { p: 0.5 }; spec.p],
            z_generators: vec![ColumnGen::Bernoulli { p: 0.5 }; spec.q],
        }
    }

    pub fn validate(&self, spec: &ModelSpec) -> Result<()> {
        if self.n_subjects == 0 {
            return Err(Error::InvalidSpec("at least one subject is required".into()));
        }
        if self.x_generators.len() != spec.p {
            return Err(Error::DimensionMismatch(format!(
                "{} membership covariate generators for p = {}",
                self.x_generators.len(),
                spec.p
            )));
        }
        if self.z_generators.len() != spec.q {
            return Err(Error::DimensionMismatch(format!(
                "{} response covariate generators for q = {}",
                self.z_generators.len(),
                spec.q
            )));
        }
        for g in self.x_generators.iter().chain(&self.z_generators) {
            g.validate()?;
        }
        Ok(())
    }
}

/// A simulated dataset: responses, the covariate design they were drawn
/// under, and the latent classes (kept for oracle tests).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    /// `responses[i][j]` in `0..M_j`.
    pub responses: Vec<Vec<usize>>,
    pub design: CovariateDesign,
    pub latent: Option<Vec<usize>>,
}

/// Inverse-CDF draw from a probability vector.
fn draw_categorical(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (idx, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return idx;
        }
    }
    probs.len() - 1
}

/// Simulate a dataset under the regression links. Per subject, in order:
/// membership covariates, response covariates, latent class, responses.
pub fn simulate(reg: &RegressionParams, cfg: &SimConfig, spec: &ModelSpec) -> Result<Dataset> {
    cfg.validate(spec)?;
    reg.validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_subjects;
    let j_total = spec.n_items();

    let mut x = Vec::with_capacity(n);
    let mut z_shared = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(spec.p + 1);
        row.push(1.0);
        row.extend(cfg.x_generators.iter().map(|g| g.draw(&mut rng)));
        x.push(row);
        let zrow: Vec<f64> = cfg.z_generators.iter().map(|g| g.draw(&mut rng)).collect();
        z_shared.push(zrow);
    }
    let design = CovariateDesign {
        x,
        z: vec![z_shared; j_total],
    };

    let mut responses = Vec::with_capacity(n);
    let mut latent = Vec::with_capacity(n);
    for i in 0..n {
        let params = per_subject_params(reg, &design, i)?;
        let class = draw_categorical(&params.eta, &mut rng);
        latent.push(class);
        let row: Vec<usize> = (0..j_total)
            .map(|j| draw_categorical(&params.theta[j][class], &mut rng))
            .collect();
        responses.push(row);
    }
    Ok(Dataset {
        responses,
        design,
        latent: Some(latent),
    })
}
