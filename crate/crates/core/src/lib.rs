//! Decides whether an automatic sequence has rank one, rank two, or rank
//! at least three, i.e. the least number of nonempty words whose infinite
//! concatenations can produce it.

pub mod analysis;
pub mod automaton;
pub mod fixtures;
pub mod logic;
pub mod oracle;
pub mod rank;
pub mod word;
