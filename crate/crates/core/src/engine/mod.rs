//! Outcome engine for lattice games under normal play.

mod analysis;
mod pointed;
mod render;
mod ruleset;
mod solver;

pub use analysis::{compare_grids, equivalence_in_window, find_periods, periodicity_probe, Cone, Equivalence, PeriodSearch, Probe};
pub use pointed::{check_pointedness, check_tangent_cone, AxisReport, Infeasibility, Pointedness, PointednessWitness, TangentConeReport};
pub use render::{render_grid, ImageFormat, RenderOptions};
pub use ruleset::{Cell, GameSpec, Outcome, Ruleset};
pub use solver::{check_nor_property, solve_window, OutcomeGrid, SolveMode, Solver, Window};

use thiserror::Error;

use crate::lattice::{IntVec, LatticeError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("ruleset is not pointed: {0}")]
    NotPointed(Infeasibility),
    #[error("{0} is not a position (outside ℕ^d or defeated)")]
    NotAPosition(IntVec),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Invalid(String),
}
