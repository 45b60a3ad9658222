//! Bundled Q-matrix fixtures.
//!
//! Two published item-attribute designs for the 25 fourth-grade mathematics
//! items of the TIMSS 2007 assessment: a fine seven-attribute coding and a
//! coarse three-attribute coding. Rows are in the original item order 1..25;
//! the row permutations used when analyzing these matrices are an analytical
//! device, not part of the data.

use crate::error::{Error, Result};
use crate::model::QMatrix;

/// Seven-attribute design, 25 items.
const TIMSS_K7: [[u8; 7]; 25] = [
    [1, 0, 0, 0, 0, 0, 0], // item 1
    [0, 1, 0, 0, 0, 0, 0], // item 2
    [1, 1, 0, 0, 0, 0, 0], // item 3
    [1, 1, 0, 0, 0, 0, 0], // item 4
    [1, 0, 1, 0, 0, 0, 0], // item 5
    [0, 0, 0, 0, 1, 1, 0], // item 6
    [0, 0, 0, 1, 1, 1, 0], // item 7
    [1, 0, 0, 0, 1, 0, 0], // item 8
    [0, 0, 0, 0, 1, 0, 0], // item 9
    [0, 0, 0, 1, 1, 0, 0], // item 10
    [1, 0, 0, 1, 0, 0, 0], // item 11
    [1, 0, 0, 0, 0, 0, 1], // item 12
    [1, 0, 0, 0, 0, 0, 1], // item 13
    [1, 1, 0, 0, 0, 0, 1], // item 14
    [1, 0, 0, 0, 0, 0, 0], // item 15
    [1, 0, 0, 0, 0, 0, 0], // item 16
    [1, 0, 1, 0, 0, 0, 0], // item 17
    [1, 0, 1, 0, 0, 0, 0], // item 18
    [1, 0, 0, 0, 0, 0, 1], // item 19
    [1, 0, 1, 0, 0, 0, 0], // item 20
    [1, 0, 1, 0, 0, 0, 0], // item 21
    [0, 0, 0, 0, 1, 1, 0], // item 22
    [1, 0, 0, 0, 0, 0, 0], // item 23
    [0, 0, 0, 0, 1, 0, 0], // item 24
    [1, 0, 0, 0, 0, 0, 1], // item 25
];

/// Three-attribute design, same 25 items.
const TIMSS_K3: [[u8; 3]; 25] = [
    [1, 0, 0], // item 1
    [1, 0, 0], // item 2
    [1, 0, 0], // item 3
    [1, 0, 0], // item 4
    [1, 0, 0], // item 5
    [0, 1, 0], // item 6
    [0, 1, 0], // item 7
    [1, 1, 0], // item 8
    [0, 1, 0], // item 9
    [0, 1, 0], // item 10
    [1, 1, 0], // item 11
    [1, 0, 1], // item 12
    [1, 0, 1], // item 13
    [1, 0, 1], // item 14
    [1, 0, 0], // item 15
    [1, 0, 0], // item 16
    [1, 0, 0], // item 17
    [1, 0, 0], // item 18
    [1, 0, 1], // item 19
    [1, 0, 1], // item 20
    [1, 0, 0], // item 21
    [0, 1, 0], // item 22
    [1, 0, 0], // item 23
    [0, 1, 0], // item 24
    [1, 0, 1], // item 25
];

/// Names of the available fixtures.
pub const FIXTURE_NAMES: &[&str] = &["timss_k7", "timss_k3"];

/// Look up a bundled Q-matrix by name.
pub fn fixture(name: &str) -> Result<QMatrix> {
    match name {
        "timss_k7" => QMatrix::new(TIMSS_K7.iter().map(|r| r.to_vec()).collect()),
        "timss_k3" => QMatrix::new(TIMSS_K3.iter().map(|r| r.to_vec()).collect()),
        other => Err(Error::InvalidSpec(format!(
            "unknown fixture {other:?}; available: {FIXTURE_NAMES:?}"
        ))),
    }
}
