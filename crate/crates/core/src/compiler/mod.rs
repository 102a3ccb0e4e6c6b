//! From a recurrence and its nor circuit to a lattice game: placement
//! conditions, placement search, ruleset emission and verification.

mod emit;
mod placement;
mod search;
mod verify;

pub use emit::{emit_defeated, emit_ruleset, emit_ruleset_unchecked, CompiledGame, Line};
pub use placement::{check_conditions, stair_for_normal, ConditionReport, Placement, Status};
pub use search::{search_placement, search_placement_with, SearchOptions, DEFAULT_MAX_ATTEMPTS};
pub use verify::{verify_at, verify_construction, CheckResult, VerifyReport};

use thiserror::Error;

use crate::engine::EngineError;
use crate::lattice::LatticeError;
use crate::recurrence::{
    encoded_truth_table, extend_circuit, synthesize_nor_circuit, validate_encoding, Encoding, NorCircuit, RecurrenceError,
    RecurrenceSpec, Variant,
};

#[derive(Debug, Error)]
pub enum CompilerError {
    #[error("placement violates its conditions:\n{0}")]
    Conditions(Box<ConditionReport>),
    #[error("no placement found after {attempts} attempts{}", last_report(last))]
    SearchExhausted { attempts: usize, last: Option<Box<ConditionReport>> },
    #[error("circuit lacks a required path: {0}")]
    Reachability(String),
    #[error("encoding rejected: clause {0} fails")]
    Encoding(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn last_report(last: &Option<Box<ConditionReport>>) -> String {
    last.as_ref().map_or(String::new(), |r| format!("; last report:\n{r}"))
}

/// Validates the encoding, synthesizes and extends the circuit, searches a
/// placement and emits the full ruleset.
pub fn compile(
    spec: &RecurrenceSpec,
    enc: &Encoding,
    variant: Variant,
    options: &SearchOptions,
) -> Result<CompiledGame, CompilerError> {
    if let Some(clause) = validate_encoding(spec, enc).first_failure() {
        return Err(CompilerError::Encoding(clause));
    }
    let table = encoded_truth_table(spec, enc);
    let core = synthesize_nor_circuit(&table, spec.r())?;
    let circuit = extend_circuit(&core, variant)?;
    let placement = search_placement_with(&circuit, spec, variant, options)?;
    emit_ruleset(&placement, &circuit, spec, enc, variant, false)
}

/// Whether the circuit has the paths the construction relies on: into the
/// first output from an argument whose shift has `β₁ ≤ 0`, and into the last
/// output from one with `β₂ ≤ 0`.
pub fn check_reachability(circuit: &NorCircuit, spec: &RecurrenceSpec) -> Result<(), CompilerError> {
    if circuit.arity() != spec.r() {
        return Err(CompilerError::Invalid(format!("circuit has {} arguments, recurrence {}", circuit.arity(), spec.r())));
    }
    let s = circuit.width();
    let first = (0..spec.r()).filter(|&i| spec.betas()[i].x() <= 0);
    if !circuit.output_reached_from(0, first) {
        return Err(CompilerError::Reachability("no path into out[0] from an argument with β₁ ≤ 0".into()));
    }
    let last = (0..spec.r()).filter(|&i| spec.betas()[i].y() <= 0);
    if !circuit.output_reached_from(s - 1, last) {
        return Err(CompilerError::Reachability(format!("no path into out[{}] from an argument with β₂ ≤ 0", s - 1)));
    }
    Ok(())
}
