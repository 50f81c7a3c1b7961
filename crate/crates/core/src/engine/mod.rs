//! Local search for spanning trees with at most two branch vertices.
//!
//! A DFS tree is first cut down to at most six leaves, then improved by
//! catalog exchanges that strictly lower a lexicographic [`Potential`].

pub mod catalog;
pub mod certificate;
pub mod leaves;
pub mod potential;
pub mod solver;

pub use catalog::{catalog_moves, first_improving_move, ExchangeMove, RuleId, ScoredMove};
pub use certificate::{counting_certificate, counting_certificate_sigma6, CountingCertificate, RegionBound};
pub use leaves::reduce_leaves;
pub use potential::{potential, potential_of, Potential};
pub use solver::{default_move_cap, minimize, solve, SolveError, SolveOptions, SolveOutcome, SolveStatus, TraceStep};
