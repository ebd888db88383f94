//! Weighted NetKAT: a policy language for networks whose behaviour is
//! annotated with values from an ω-continuous semiring, together with a
//! weighted automaton model and decision procedures for weighted safety and
//! reachability queries.

pub mod error;
#[macro_use]
pub mod semiring;
pub mod cli;
pub mod denotational;
pub mod engine;
pub mod guarded;
pub mod netcore;
pub mod verify;
pub mod weighting;
pub mod wnka;

pub use error::{AlgebraError, ParseError, Result, WnkError};
pub use semiring::{Capabilities, Semiring, SemiringHandle, SemiringKind, SemiringValue};
