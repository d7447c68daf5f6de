//! Multi-track automata over base-`k` digit columns and deterministic
//! finite automata with output.

mod dfa;
mod dfao;
mod minimize;
pub mod relations;
mod text;

use std::time::Instant;

use thiserror::Error;

pub(crate) use dfa::digits_msd;
pub use dfa::{Dfa, Letter};
pub use dfao::Dfao;
pub use text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u32, u32),
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("{tracks} tracks over base {base} exceed the alphabet cap")]
    TooManyTracks { base: u32, tracks: usize },
    #[error("variable {0:?} appears on two tracks")]
    DuplicateVariable(String),
    #[error("variable {0:?} is not a track of the automaton")]
    UnknownVariable(String),
    #[error("state budget exceeded at {stage}: more than {cap} states")]
    Budget { stage: String, cap: usize },
    #[error("wall-time budget exhausted at {stage}")]
    Timeout { stage: String },
    #[error("possibly-infinite: the automaton accepts infinitely many tuples")]
    Infinite,
    #[error("enumeration limit of {0} tuples exceeded")]
    LimitExceeded(usize),
}

/// Resource caps applied while building automata.
#[derive(Debug, Clone)]
pub struct Limits {
    pub max_states: usize,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 2_000_000,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits {
            max_states: usize::MAX,
            deadline: None,
        }
    }

    pub(crate) fn check(&self, states: usize, stage: &str) -> Result<(), AutomatonError> {
        if states > self.max_states {
            return Err(AutomatonError::Budget {
                stage: stage.to_string(),
                cap: self.max_states,
            });
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(AutomatonError::Timeout {
                    stage: stage.to_string(),
                });
            }
        }
        Ok(())
    }
}
