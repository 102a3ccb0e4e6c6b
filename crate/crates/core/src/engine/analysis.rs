use std::fmt;

use super::{Cell, EngineError, GameSpec, OutcomeGrid, SolveMode, Solver, Window};
use crate::lattice::{IntVec, Sublattice};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Equivalence {
    Equal,
    /// Lexicographically first position whose P-membership differs.
    Differs { at: IntVec, left: Cell, right: Cell },
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equivalence::Equal => write!(f, "equal"),
            Equivalence::Differs { at, left, right } => write!(f, "differ at {at}: {left} vs {right}"),
        }
    }
}

/// Compares the P-positions of two games on a window.
pub fn equivalence_in_window(g1: &GameSpec, g2: &GameSpec, window: &Window) -> Result<Equivalence, EngineError> {
    if g1.dim() != g2.dim() {
        return Err(EngineError::Invalid("games have different dimensions".into()));
    }
    let a = Solver::new(g1)?.solve_window(window, SolveMode::TopDown)?;
    let b = Solver::new(g2)?.solve_window(window, SolveMode::TopDown)?;
    Ok(compare_grids(&a, &b))
}

pub fn compare_grids(a: &OutcomeGrid, b: &OutcomeGrid) -> Equivalence {
    for ((p, x), (_, y)) in a.iter().zip(b.iter()) {
        if x.is_p() != y.is_p() {
            return Equivalence::Differs { at: p, left: x, right: y };
        }
    }
    Equivalence::Equal
}

/// The planar cone spanned by two rays.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cone {
    pub r: IntVec,
    pub s: IntVec,
}

impl Cone {
    pub fn new(r: IntVec, s: IntVec) -> Result<Self, EngineError> {
        if r.dim() != 2 || s.dim() != 2 {
            return Err(EngineError::Invalid("cone rays must be planar".into()));
        }
        if cross(&r, &s) == 0 {
            return Err(EngineError::Invalid(format!("rays {r} and {s} do not span a 2-dimensional cone")));
        }
        if !r.is_nonneg() || !s.is_nonneg() {
            return Err(EngineError::Invalid("cone rays must lie in the closed quadrant".into()));
        }
        Ok(Self { r, s })
    }

    pub fn quadrant() -> Self {
        Self { r: IntVec::xy(1, 0), s: IntVec::xy(0, 1) }
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        // p = a·r + b·s with a = p×s / r×s, b = r×p / r×s.
        let d = cross(&self.r, &self.s);
        let a = cross(p, &self.s);
        let b = cross(&self.r, p);
        if d > 0 {
            a >= 0 && b >= 0
        } else {
            a <= 0 && b <= 0
        }
    }
}

fn cross(a: &IntVec, b: &IntVec) -> i128 {
    a.x() as i128 * b.y() as i128 - a.y() as i128 * b.x() as i128
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Probe {
    Periodic,
    Violation { p: IntVec, at_p: Cell, at_shift: Cell },
}

/// The planar slice of a grid at last coordinate `level`, or the grid itself when 2-D.
fn slice_cell(grid: &OutcomeGrid, level: Option<i64>, p: &IntVec) -> Option<Cell> {
    match level {
        Some(z) => grid.get(&p.extend(z)),
        None => grid.get(p),
    }
}

fn slice_window(grid: &OutcomeGrid, level: Option<i64>) -> Result<Window, EngineError> {
    let w = grid.window();
    match (w.dim(), level) {
        (2, None) => Ok(*w),
        (3, Some(z)) if (w.lo().z()..=w.hi().z()).contains(&z) => Ok(Window::new(w.lo().truncate(), w.hi().truncate())),
        (3, Some(z)) => Err(EngineError::Invalid(format!("slice {z} lies outside the grid"))),
        _ => Err(EngineError::Invalid("slices need a 3-D grid; planar grids take no slice".into())),
    }
}

/// Checks `o(p) = o(p − ℓ)` for all `p` with `p, p − ℓ` in the window slice, in the cone and not defeated.
pub fn periodicity_probe(grid: &OutcomeGrid, level: Option<i64>, cone: &Cone, ell: &IntVec) -> Result<Probe, EngineError> {
    if ell.dim() != 2 {
        return Err(EngineError::Invalid("period must be planar".into()));
    }
    if ell.is_zero() {
        return Err(EngineError::Invalid("the zero period is degenerate".into()));
    }
    let w = slice_window(grid, level)?;
    for p in w.points() {
        if !cone.contains(&p) {
            continue;
        }
        let Some(q) = p.checked_sub(ell) else { continue };
        if !w.contains(&q) || !cone.contains(&q) {
            continue;
        }
        let a = slice_cell(grid, level, &p).unwrap();
        let b = slice_cell(grid, level, &q).unwrap();
        if a == Cell::Defeated || b == Cell::Defeated {
            continue;
        }
        if a != b {
            return Ok(Probe::Violation { p, at_p: a, at_shift: b });
        }
    }
    Ok(Probe::Periodic)
}

/// Result of an exhaustive period search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodSearch {
    /// Lexicographically positive periods with `|ℓ|∞ ≤ R`, sorted.
    pub periods: Vec<IntVec>,
    /// Hermite basis of the lattice they span, when it has rank 2.
    pub basis: Option<[IntVec; 2]>,
    /// Lexicographically positive candidates that failed, with their witnesses.
    pub violations: Vec<(IntVec, IntVec)>,
}

pub fn find_periods(grid: &OutcomeGrid, level: Option<i64>, cone: &Cone, max_period: i64) -> Result<PeriodSearch, EngineError> {
    let mut periods = Vec::new();
    let mut violations = Vec::new();
    for x in 0..=max_period {
        for y in -max_period..=max_period {
            let ell = IntVec::xy(x, y);
            if x == 0 && y <= 0 {
                continue;
            }
            match periodicity_probe(grid, level, cone, &ell)? {
                Probe::Periodic => periods.push(ell),
                Probe::Violation { p, .. } => violations.push((ell, p)),
            }
        }
    }
    let basis = Sublattice::generated_by(&periods).ok().map(|l| l.hermite_basis());
    Ok(PeriodSearch { periods, basis, violations })
}
