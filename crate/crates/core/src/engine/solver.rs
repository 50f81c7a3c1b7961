use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::catalog::{first_improving_move, ExchangeMove, RuleId};
use crate::engine::certificate::{counting_certificate, CountingCertificate};
use crate::engine::leaves::reduce_leaves;
use crate::engine::potential::{potential, Potential};
use crate::graph::{is_connected, Graph};
use crate::oracle::{min_branch_vertices_exact, OracleConfig, OracleError};
use crate::shape::classify_shape;
use crate::tree::{spanning_tree_dfs, SpanningTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    /// At most two branch vertices, reached by exchanges alone.
    Solved,
    /// No catalog move improves the potential.
    Stalled,
    /// The search stalled or ran out of moves and the oracle supplied the tree.
    OracleSolved,
    /// The move budget ran out before the search settled.
    CapReached,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub exchange: ExchangeMove,
    pub before: Potential,
    pub after: Potential,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.exchange, self.before, self.after)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<'g> {
    pub status: SolveStatus,
    pub tree: SpanningTree<'g>,
    pub moves_applied: Vec<RuleId>,
    pub trace: Vec<TraceStep>,
    /// Present whenever the exchange search stopped above two branch vertices.
    pub certificate: Option<CountingCertificate>,
    /// Leaf count after the leaf-reduction phase.
    pub leaf_phase_leaves: usize,
    /// Every applied move strictly lowered the potential, recomputed
    /// independently of the catalog's own filter.
    pub descent_ok: bool,
}

impl SolveOutcome<'_> {
    pub fn branch_count(&self) -> usize {
        self.tree.branch_count()
    }

    /// The trace in text form, one move per line.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|s| format!("{s}\n")).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub oracle_fallback: bool,
    pub oracle: OracleConfig,
    /// Move budget for the exchange phase; `None` means `n^3`.
    pub move_cap: Option<usize>,
    /// Leaf target for the leaf-reduction phase.
    pub leaf_target: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            oracle_fallback: true,
            oracle: OracleConfig::default(),
            move_cap: None,
            leaf_target: 6,
        }
    }
}

pub fn default_move_cap(n: usize) -> usize {
    n.saturating_pow(3).max(1)
}

/// Applies the first improving catalog move until the tree has at most two
/// branch vertices, no move applies, or `move_cap` moves were made.
pub fn minimize<'g>(t0: &SpanningTree<'g>, move_cap: usize) -> SolveOutcome<'g> {
    let mut tree = t0.clone();
    let mut trace = Vec::new();
    let mut descent_ok = true;
    let status = loop {
        if tree.branch_count() <= 2 {
            break SolveStatus::Solved;
        }
        if trace.len() >= move_cap {
            break SolveStatus::CapReached;
        }
        let cfg = classify_shape(&tree);
        let Some(mv) = first_improving_move(&tree, &cfg) else {
            break SolveStatus::Stalled;
        };
        let before = potential(&tree);
        let after = potential(&mv.result);
        debug_assert_eq!(after, mv.potential);
        assert!(after < before, "catalog move {} did not descend", mv.exchange);
        descent_ok &= after < before;
        trace.push(TraceStep {
            exchange: mv.exchange,
            before,
            after,
        });
        tree = mv.result;
    };
    let certificate = (status != SolveStatus::Solved)
        .then(|| counting_certificate(tree.host(), &classify_shape(&tree)));
    SolveOutcome {
        status,
        moves_applied: trace.iter().map(|s| s.exchange.rule).collect(),
        leaf_phase_leaves: t0.leaf_count(),
        tree,
        trace,
        certificate,
        descent_ok,
    }
}

/// DFS tree, leaf reduction, then exchange search; falls back to the oracle
/// when the search does not finish and the graph is within the oracle cap.
pub fn solve<'g>(g: &'g Graph, opts: &SolveOptions) -> Result<SolveOutcome<'g>, SolveError> {
    if g.n() == 0 {
        return Err(SolveError::Empty);
    }
    if !is_connected(g) {
        return Err(SolveError::Disconnected);
    }
    let t0 = spanning_tree_dfs(g, 0).map_err(|_| SolveError::Disconnected)?;
    let t1 = reduce_leaves(&t0, opts.leaf_target);
    let cap = opts.move_cap.unwrap_or_else(|| default_move_cap(g.n()));
    let mut outcome = minimize(&t1, cap);
    if outcome.status != SolveStatus::Solved && opts.oracle_fallback {
        match min_branch_vertices_exact(g, &opts.oracle) {
            Ok(r) => {
                outcome.status = SolveStatus::OracleSolved;
                outcome.tree = r.witness;
            }
            Err(OracleError::CapExceeded { .. } | OracleError::TooLarge { .. }) => {}
            Err(OracleError::Disconnected | OracleError::Empty) => unreachable!("checked above"),
        }
    }
    Ok(outcome)
}
