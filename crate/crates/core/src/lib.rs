//! Detectability, diagnosability and enforcement for labeled finite-state automata.

pub mod campaign;
pub mod composition;
pub mod diagnosability;
pub mod dot;
pub mod error;
pub mod fsa;
mod graph;
pub mod oracle;
pub mod random;
pub mod synthesis;
pub mod verify;

pub use error::{ModelError, SynthesisError};
pub use fsa::{Event, EventId, Fsa, FsaBuilder, Lasso, Run, StateId, SymbolId, Transition};
