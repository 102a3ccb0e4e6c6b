use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::lattice::{IntVec, LatticeSet};

/// A finite set of move vectors; a move subtracts one of them from the position.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawRuleset", into = "RawRuleset")]
pub struct Ruleset {
    dim: usize,
    moves: BTreeSet<IntVec>,
}

#[derive(Serialize, Deserialize)]
struct RawRuleset {
    dim: usize,
    moves: Vec<IntVec>,
}

impl TryFrom<RawRuleset> for Ruleset {
    type Error = EngineError;
    fn try_from(r: RawRuleset) -> Result<Self, EngineError> {
        Ruleset::new(r.dim, r.moves)
    }
}

impl From<Ruleset> for RawRuleset {
    fn from(r: Ruleset) -> Self {
        RawRuleset { dim: r.dim, moves: r.moves.into_iter().collect() }
    }
}

impl Ruleset {
    pub fn new(dim: usize, moves: impl IntoIterator<Item = IntVec>) -> Result<Self, EngineError> {
        if !(1..=3).contains(&dim) {
            return Err(EngineError::Invalid(format!("unsupported board dimension {dim}")));
        }
        let mut set = BTreeSet::new();
        for g in moves {
            if g.dim() != dim {
                return Err(EngineError::Invalid(format!("move {g} does not have dimension {dim}")));
            }
            if g.is_zero() {
                return Err(EngineError::Invalid("the zero vector is not a move".into()));
            }
            set.insert(g);
        }
        Ok(Self { dim, moves: set })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Moves in lexicographic order.
    pub fn moves(&self) -> impl ExactSizeIterator<Item = &IntVec> + Clone {
        self.moves.iter()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn contains(&self, g: &IntVec) -> bool {
        self.moves.contains(g)
    }

    pub fn with_move(&self, g: IntVec) -> Result<Self, EngineError> {
        Self::new(self.dim, self.moves.iter().copied().chain([g]))
    }

    pub fn without_move(&self, g: &IntVec) -> Self {
        Self { dim: self.dim, moves: self.moves.iter().filter(|h| *h != g).copied().collect() }
    }
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, g) in self.moves.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// A ruleset together with its defeated positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameSpec {
    ruleset: Ruleset,
    defeated: LatticeSet,
}

impl GameSpec {
    pub fn new(ruleset: Ruleset, defeated: LatticeSet) -> Result<Self, EngineError> {
        if let Some(d) = defeated.dim()? {
            if d != ruleset.dim() {
                return Err(EngineError::Invalid(format!(
                    "defeated set has dimension {d}, ruleset has {}",
                    ruleset.dim()
                )));
            }
        }
        Ok(Self { ruleset, defeated })
    }

    /// Normal play with no defeated positions.
    pub fn normal(ruleset: Ruleset) -> Self {
        Self { ruleset, defeated: LatticeSet::empty() }
    }

    pub fn ruleset(&self) -> &Ruleset {
        &self.ruleset
    }

    pub fn defeated(&self) -> &LatticeSet {
        &self.defeated
    }

    pub fn dim(&self) -> usize {
        self.ruleset.dim()
    }

    /// `p ∈ ℕ^d` and `p` not defeated.
    pub fn is_position(&self, p: &IntVec) -> bool {
        p.dim() == self.dim() && p.is_nonneg() && !self.defeated.holds(p)
    }
}

/// Outcome of a position; `P` reads as boolean true.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    P,
    N,
}

impl Outcome {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::P
        } else {
            Outcome::N
        }
    }

    pub fn is_p(self) -> bool {
        self == Outcome::P
    }

    /// `P` exactly when every input is `N`.
    pub fn nor(inputs: impl IntoIterator<Item = Outcome>) -> Outcome {
        Outcome::from_bool(inputs.into_iter().all(|o| o == Outcome::N))
    }
}

impl std::ops::Not for Outcome {
    type Output = Outcome;
    fn not(self) -> Outcome {
        Outcome::from_bool(!self.is_p())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// A window cell: an outcome, or a defeated point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Cell {
    P,
    N,
    Defeated,
}

impl Cell {
    pub fn outcome(self) -> Option<Outcome> {
        match self {
            Cell::P => Some(Outcome::P),
            Cell::N => Some(Outcome::N),
            Cell::Defeated => None,
        }
    }

    pub fn is_p(self) -> bool {
        self == Cell::P
    }
}

impl From<Outcome> for Cell {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::P => Cell::P,
            Outcome::N => Cell::N,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cell::P => "P",
            Cell::N => "N",
            Cell::Defeated => "defeated",
        })
    }
}
