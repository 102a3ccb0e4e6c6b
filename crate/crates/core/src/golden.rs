//! Transcribed data of the explicit xor example: the printed rulesets, the
//! gate placement and the circuit it realizes.

use crate::compiler::Placement;
use crate::engine::Ruleset;
use crate::lattice::IntVec;
use crate::recurrence::{NorCircuit, Role};

/// Wire moves, one per distinct edge difference.
pub const WIRES: [(i64, i64); 7] = [(1, 1), (5, -2), (-1, 4), (3, -2), (-3, 4), (1, 2), (2, 1)];

/// Printed slice-0 line (20 vectors, third coordinate 0).
#[rustfmt::skip]
pub const SLICE0: [(i64, i64); 20] = [
    (-2, 2), (-2, 4), (-1, 2), (-1, 3), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 2),
    (2, 4), (3, -1), (3, 0), (3, 1), (3, 3), (3, 5), (4, 2), (4, 4), (5, 2), (5, 3),
];

/// Printed slice-1 line: each point is shifted by both [`SLICE1_SHIFTS`].
#[rustfmt::skip]
pub const SLICE1_BASE: [(i64, i64); 32] = [
    (-2, 1), (-2, 2), (-2, 3), (-1, 2), (-1, 5), (0, 2), (0, 3), (0, 4), (0, 5), (1, -1), (1, 2),
    (1, 3), (1, 4), (1, 5), (2, 0), (2, 1), (2, 2), (2, 3), (2, 4), (3, 0), (3, 1), (3, 2),
    (3, 3), (4, 0), (4, 1), (4, 2), (4, 3), (5, -1), (5, 0), (5, 1), (5, 2), (5, 5),
];

pub const SLICE1_SHIFTS: [(i64, i64); 2] = [(-6, 0), (0, -6)];

/// Slice-0 moves of the reduced ruleset.
pub const PRIME_SLICE0: [(i64, i64); 11] =
    [(0, 2), (0, 4), (1, 4), (2, 2), (2, 4), (3, 0), (3, 1), (3, 3), (3, 5), (4, 2), (4, 4)];

/// Slice-1 moves of the reduced ruleset.
pub const PRIME_SLICE1: [(i64, i64); 10] =
    [(-2, 1), (-1, -1), (-1, 2), (0, 3), (1, -1), (1, 4), (2, 0), (2, 1), (3, 2), (4, 3)];

/// Gate positions of v0..v6.
pub const POS: [(i64, i64); 7] = [(-6, 0), (0, -6), (-5, 1), (1, -5), (-1, -2), (-2, -1), (0, 0)];

/// Edges of the xor circuit: v0, v1 are the inputs and v6 the output.
pub const XOR_EDGES: [(usize, usize); 8] = [(0, 2), (1, 3), (0, 4), (1, 4), (2, 5), (3, 5), (4, 6), (5, 6)];

pub const M: i64 = 6;

pub const STAIR: [(i64, i64); 4] = [(0, 0), (1, 0), (2, 0), (0, 1)];

/// Normal of the halfspace containing every wire and `(ℕ² − I) ∖ (I − I)`.
pub const NORMAL: (i64, i64) = (3, 4);

pub fn stair() -> Vec<IntVec> {
    STAIR.iter().map(|&p| IntVec::from(p)).collect()
}

pub fn positions() -> Vec<IntVec> {
    POS.iter().map(|&p| IntVec::from(p)).collect()
}

pub fn wire_moves() -> Vec<IntVec> {
    WIRES.iter().map(|&(x, y)| IntVec::xyz(x, y, 0)).collect()
}

pub fn slice0_moves() -> Vec<IntVec> {
    SLICE0.iter().map(|&(x, y)| IntVec::xyz(x, y, 0)).collect()
}

pub fn slice1_moves() -> Vec<IntVec> {
    SLICE1_SHIFTS
        .iter()
        .flat_map(|&(sx, sy)| SLICE1_BASE.iter().map(move |&(x, y)| IntVec::xyz(x + sx, y + sy, 1)))
        .collect()
}

/// The printed 91-entry ruleset (90 distinct vectors).
pub fn printed_gamma() -> Ruleset {
    let moves = wire_moves().into_iter().chain(slice0_moves()).chain(slice1_moves());
    Ruleset::new(3, moves).expect("transcribed moves are nonzero 3-vectors")
}

/// The reduced 28-move ruleset.
pub fn gamma_prime() -> Ruleset {
    let moves = wire_moves()
        .into_iter()
        .chain(PRIME_SLICE0.iter().map(|&(x, y)| IntVec::xyz(x, y, 0)))
        .chain(PRIME_SLICE1.iter().map(|&(x, y)| IntVec::xyz(x, y, 1)));
    Ruleset::new(3, moves).expect("transcribed moves are nonzero 3-vectors")
}

/// The xor circuit without `in′`: v0, v1 read the two arguments, v6 is the output.
pub fn published_xor_circuit() -> NorCircuit {
    let mut roles = vec![Role::Input(0), Role::Input(1)];
    roles.extend([Role::Gate; 4]);
    roles.push(Role::Output(0));
    NorCircuit::new(2, 1, roles, XOR_EDGES).expect("transcribed circuit is valid")
}

pub fn published_placement() -> Placement {
    Placement::new(positions(), M, stair(), IntVec::from(NORMAL)).expect("transcribed placement is valid")
}

/// Looks up a builtin ruleset by name.
pub fn builtin(name: &str) -> Option<Ruleset> {
    match name {
        "paper-gamma" => Some(printed_gamma()),
        "paper-gamma-prime" => Some(gamma_prime()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 2] = ["paper-gamma", "paper-gamma-prime"];
