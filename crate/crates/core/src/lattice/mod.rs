//! Exact integer-lattice geometry.

mod module;
mod set;
mod sublattice;
mod vector;

pub use module::{enumerate_f, minimal_elements, nonzero_generators, translate_generators, ModuleIdeal};
pub use set::LatticeSet;
pub use sublattice::{ResidueSystem, Sublattice};
pub use vector::{IntVec, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("unsupported dimension {0} (expected 1..=3 coordinates, 2..=3 for lattices)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("singular basis")]
    Singular,
    #[error("integer overflow")]
    Overflow,
    #[error("bounding box too small: minimal element {point} lies on its upper boundary")]
    BoxTooSmall { point: IntVec },
    #[error("parse error at offset {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Anything with an exact membership test.
pub trait PointSet {
    fn contains_point(&self, p: &IntVec) -> bool;
}

impl<F: Fn(&IntVec) -> bool> PointSet for F {
    fn contains_point(&self, p: &IntVec) -> bool {
        self(p)
    }
}

/// All points of the box `[lo, hi]` in lexicographic order (empty if `hi < lo` anywhere).
pub fn box_points(lo: &IntVec, hi: &IntVec) -> Vec<IntVec> {
    assert_eq!(lo.dim(), hi.dim(), "box corners must share a dimension");
    if lo.coords().iter().zip(hi.coords()).any(|(a, b)| b < a) {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for k in 0..lo.dim() {
        let mut next = Vec::new();
        for prefix in &out {
            for c in lo.get(k)..=hi.get(k) {
                let mut p: Vec<i64> = prefix.clone();
                p.push(c);
                next.push(p);
            }
        }
        out = next;
    }
    out.iter().map(|c| IntVec::new(c)).collect()
}
