//! Spanning trees with few branch vertices in claw-free graphs.
//!
//! * [`graph`]: simple graphs, claw detection, `sigma_k`.
//! * [`tree`]: spanning trees, tree paths and edge exchange.
//! * [`shape`]: classification of three- and four-branch trees.
//! * [`engine`]: leaf reduction and the exchange local search.
//! * [`oracle`]: exact minima by enumeration or subset dynamic programming.
//! * [`generators`]: seeded claw-free instances and named families.
//! * [`verify`]: theorem checks and campaigns.

pub mod engine;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod shape;
pub mod tree;
pub mod verify;
