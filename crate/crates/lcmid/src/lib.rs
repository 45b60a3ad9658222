//! Identifiability analysis for latent class models with covariates and
//! their cognitive-diagnosis (Q-matrix restricted) variants.
//!
//! The crate decides — with machine-checkable evidence — whether a model's
//! parameters are locally, strictly, or generically identifiable from the
//! response distribution, and constructs explicit counterexample parameter
//! pairs where identifiability provably fails.
//!
//! * [`model`] — model dimensions, pattern enumeration, logit links, the
//!   attribute-effect decomposition, and the log-odds reparameterization;
//! * [`matrices`] — class-conditional probability matrices, the response
//!   Jacobian, Fisher information, and item-partition blocks;
//! * [`linalg`] — numeric rank with a recorded tolerance and Kruskal rank by
//!   exhaustive subset testing;
//! * [`conditions`] — the individual identifiability conditions and the
//!   three-valued report;
//! * [`counterexample`] — distribution-preserving parameter perturbations
//!   for models with a lone attribute;
//! * [`sim`] — seeded data simulation under the regression links;
//! * [`io`] / [`fixtures`] — file formats and bundled Q-matrices.

pub mod conditions;
pub mod counterexample;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod matrices;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
