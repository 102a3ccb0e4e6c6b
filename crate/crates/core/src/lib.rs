//! Exact solver for lattice games on `ℕᵈ`, and a compiler from planar
//! recurrences to lattice games through nor-circuits.

pub mod cli;
pub mod compiler;
pub mod engine;
pub mod golden;
pub mod io;
pub mod lattice;
pub mod recurrence;
