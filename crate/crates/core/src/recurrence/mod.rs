//! Lattice recurrences, boolean encodings, nor circuits and the
//! cellular-automaton adapter.

mod ca;
mod circuit;
mod encoding;
mod spec;

pub use ca::{ca_to_recurrence, CaEmbedding, CaHistory, CaRule};
pub use circuit::{eval_circuit, extend_circuit, synthesize_nor_circuit, NorCircuit, Role, TruthTable, DEFAULT_SYNTHESIS_BOUND};
pub use encoding::{encoded_truth_table, validate_encoding, Encoding, EncodingReport};
pub use spec::{binom_parity_oracle, eval_recurrence, xor_spec, RecurrenceEval, RecurrenceSpec, Variant};

use thiserror::Error;

use crate::lattice::{IntVec, LatticeError};

#[derive(Debug, Error)]
pub enum RecurrenceError {
    #[error("invalid recurrence: {0}")]
    InvalidSpec(String),
    #[error("{0} is not in the domain M")]
    OutsideDomain(IntVec),
    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("truth table of {inputs} inputs exceeds the synthesis bound {bound}")]
    TooLarge { inputs: usize, bound: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
