//! The rule catalog: multi-edge exchanges `T + e_1 + .. - f_1 - ..` built
//! around the named parts of a classified tree.
//!
//! Rules are enumerated as candidate edge sets, then filtered: a candidate
//! is kept only if the result is a spanning tree of the host graph and its
//! potential is strictly below the current one. Every existence condition a
//! rule relies on is therefore checked against the host graph directly, so
//! the catalog is sound on graphs with claws too.

use std::fmt;

use serde::Serialize;

use crate::engine::potential::{potential_of, Potential};
use crate::graph::Graph;
use crate::shape::{classify_shape, ShapeConfig};
use crate::tree::{normalize, Edge, SpanningTree, TreeError};

/// Catalog families, in the order the solver tries them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleId {
    /// A leaf joined to another leaf or to a designated vertex.
    LeafMerge,
    /// A leaf joined to an interior vertex.
    AttachSlide,
    /// A piece hanging off a branch vertex re-hung elsewhere.
    EndpointHop,
    /// Two-edge splices using an edge forced between neighbors of a vertex.
    ClawForced,
    /// Three-edge splices.
    TripleSplice,
    /// Any single exchange; closes the one-edge neighborhood.
    GenericExchange,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::LeafMerge,
        RuleId::AttachSlide,
        RuleId::EndpointHop,
        RuleId::ClawForced,
        RuleId::TripleSplice,
        RuleId::GenericExchange,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::LeafMerge => "R-LEAF-MERGE",
            RuleId::AttachSlide => "R-ATTACH-SLIDE",
            RuleId::EndpointHop => "R-ENDPOINT-HOP",
            RuleId::ClawForced => "R-CLAW-FORCED",
            RuleId::TripleSplice => "R-TRIPLE-SPLICE",
            RuleId::GenericExchange => "R-GENERIC-EXCHANGE",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sequence of exchanges: `adds[k]` is swapped for `removes[k]`, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeMove {
    pub rule: RuleId,
    pub adds: Vec<Edge>,
    pub removes: Vec<Edge>,
    /// Move template this instance was generated from.
    pub template: &'static str,
}

impl ExchangeMove {
    /// Applies the pairwise exchanges in order, validating each one.
    pub fn apply<'g>(&self, tree: &SpanningTree<'g>) -> Result<SpanningTree<'g>, TreeError> {
        let mut cur = tree.clone();
        for (&add, &remove) in self.adds.iter().zip(&self.removes) {
            cur = cur.exchange(add, remove)?;
        }
        Ok(cur)
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .adds
            .iter()
            .chain(&self.removes)
            .flat_map(|&(a, b)| [a, b])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn edge_list(edges: &[Edge]) -> String {
    edges
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for ExchangeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.rule,
            edge_list(&self.adds),
            edge_list(&self.removes)
        )
    }
}

/// A catalog move that passed validation, with the potential it reaches.
#[derive(Debug, Clone)]
pub struct ScoredMove<'g> {
    pub exchange: ExchangeMove,
    pub result: SpanningTree<'g>,
    pub potential: Potential,
}

struct Candidate {
    adds: Vec<Edge>,
    removes: Vec<Edge>,
    template: &'static str,
}

impl Candidate {
    fn new(adds: &[Edge], removes: &[Edge], template: &'static str) -> Self {
        Candidate {
            adds: adds.iter().map(|&e| normalize(e)).collect(),
            removes: removes.iter().map(|&e| normalize(e)).collect(),
            template,
        }
    }

    fn key(&self) -> (Vec<usize>, Vec<Edge>, Vec<Edge>) {
        let mut vertices: Vec<usize> = self
            .adds
            .iter()
            .chain(&self.removes)
            .flat_map(|&(a, b)| [a, b])
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut adds = self.adds.clone();
        adds.sort_unstable();
        let mut removes = self.removes.clone();
        removes.sort_unstable();
        (vertices, adds, removes)
    }
}

struct Context<'a, 'g> {
    g: &'g Graph,
    tree: &'a SpanningTree<'g>,
    current: Potential,
    leaves: Vec<usize>,
    /// Leaves together with the configuration's designated set.
    members: Vec<usize>,
    is_member: Vec<bool>,
    branch_edges: Vec<Edge>,
}

impl<'a, 'g> Context<'a, 'g> {
    fn new(tree: &'a SpanningTree<'g>, cfg: &ShapeConfig) -> Self {
        let g = tree.host();
        let leaves = tree.leaves();
        let mut members = leaves.clone();
        members.extend(cfg.special_set.iter().copied());
        members.sort_unstable();
        members.dedup();
        let mut is_member = vec![false; g.n()];
        for &x in &members {
            is_member[x] = true;
        }
        let branch_edges = tree
            .edges()
            .into_iter()
            .filter(|&(a, b)| tree.degree(a) >= 3 || tree.degree(b) >= 3)
            .collect();
        Context {
            g,
            tree,
            current: potential_of(tree, cfg),
            leaves,
            members,
            is_member,
            branch_edges,
        }
    }

    fn non_tree(&self, a: usize, b: usize) -> bool {
        a != b && self.g.has_edge(a, b) && !self.tree.has_edge(a, b)
    }

    fn cycle_edges(&self, a: usize, b: usize) -> Vec<Edge> {
        self.tree
            .path_vertices(a, b)
            .windows(2)
            .map(|w| normalize((w[0], w[1])))
            .collect()
    }

    fn candidates(&self, rule: RuleId) -> Vec<Candidate> {
        let mut out = Vec::new();
        match rule {
            RuleId::LeafMerge => self.leaf_merge(&mut out),
            RuleId::AttachSlide => self.attach_slide(&mut out),
            RuleId::EndpointHop => self.endpoint_hop(&mut out),
            RuleId::ClawForced => self.claw_forced(&mut out),
            RuleId::TripleSplice => self.triple_splice(&mut out),
            RuleId::GenericExchange => self.generic(&mut out),
        }
        out
    }

    fn leaf_merge(&self, out: &mut Vec<Candidate>) {
        for &u in &self.leaves {
            for &a in self.g.neighbors(u) {
                if !self.is_member[a] || !self.non_tree(u, a) {
                    continue;
                }
                for f in self.cycle_edges(u, a) {
                    out.push(Candidate::new(&[(u, a)], &[f], "T + u_i u_j - v_i v_i^-"));
                }
            }
        }
    }

    fn attach_slide(&self, out: &mut Vec<Candidate>) {
        for &u in &self.leaves {
            for &x in self.g.neighbors(u) {
                if self.is_member[x] || !self.non_tree(u, x) {
                    continue;
                }
                for f in self.cycle_edges(u, x) {
                    out.push(Candidate::new(&[(u, x)], &[f], "T + x u_j - v_j v_j^-"));
                }
            }
        }
    }

    fn endpoint_hop(&self, out: &mut Vec<Candidate>) {
        for b in 0..self.g.n() {
            if self.tree.degree(b) < 3 {
                continue;
            }
            for &a in self.tree.neighbors(b) {
                for &y in self.g.neighbors(a) {
                    if y == b || !self.non_tree(a, y) {
                        continue;
                    }
                    out.push(Candidate::new(&[(a, y)], &[(b, a)], "T + v_i s^- - s v_i"));
                }
            }
        }
    }

    fn claw_forced(&self, out: &mut Vec<Candidate>) {
        let g = self.g;
        let tree = self.tree;
        for b in 0..g.n() {
            if tree.degree(b) < 3 {
                continue;
            }
            let nb = tree.neighbors(b);
            for (i, &a1) in nb.iter().enumerate() {
                for &a2 in &nb[i + 1..] {
                    // Forced chord between two tree neighbors, plus one leaf edge.
                    if g.has_edge(a1, a2) {
                        for &u in &self.leaves {
                            for &x in g.neighbors(u) {
                                if !self.non_tree(u, x) {
                                    continue;
                                }
                                out.push(Candidate::new(
                                    &[(a1, a2), (u, x)],
                                    &[(b, a1), (b, a2)],
                                    "T + x u_i + v_1 v_2 - s v_1 - s v_2",
                                ));
                            }
                        }
                    }
                    // Both neighbors moved to a common neighbor.
                    for &y in g.neighbors(a1) {
                        if y != b && self.non_tree(y, a1) && self.non_tree(y, a2) {
                            out.push(Candidate::new(
                                &[(y, a1), (y, a2)],
                                &[(b, a1), (b, a2)],
                                "T + y v_1 + y v_2 - s v_1 - s v_2",
                            ));
                        }
                    }
                }
            }
        }

        // Split a tree edge x x' and hang both halves on designated vertices.
        for (p, q) in tree.edges() {
            for (x, xm) in [(p, q), (q, p)] {
                for &a in g.neighbors(x) {
                    if !self.is_member[a] || !self.non_tree(a, x) {
                        continue;
                    }
                    for &c in g.neighbors(xm) {
                        if c == a || !self.is_member[c] || !self.non_tree(c, xm) {
                            continue;
                        }
                        for &f in &self.branch_edges {
                            if f == (p, q) {
                                continue;
                            }
                            out.push(Candidate::new(
                                &[(a, x), (c, xm)],
                                &[(x, xm), f],
                                "T + u_j x + u_k x^- - x x^- - s v_i",
                            ));
                        }
                    }
                }
            }
        }

        // A leaf edge u y followed by a chord from the detached neighbor of y.
        for &u in &self.leaves {
            for &y in g.neighbors(u) {
                if !self.non_tree(u, y) {
                    continue;
                }
                for &ym in tree.neighbors(y) {
                    for &q in g.neighbors(ym) {
                        if q == y || q == u || !self.non_tree(ym, q) {
                            continue;
                        }
                        let extra = tree
                            .neighbors(q)
                            .iter()
                            .map(|&r| normalize((q, r)))
                            .filter(|e| !self.branch_edges.contains(e));
                        for f in self.branch_edges.iter().copied().chain(extra) {
                            if f == normalize((y, ym)) {
                                continue;
                            }
                            out.push(Candidate::new(
                                &[(u, y), (ym, q)],
                                &[(y, ym), f],
                                "T + x^- y^- + u_i y - y y^- - w v_5",
                            ));
                        }
                    }
                }
            }
        }
    }

    fn triple_splice(&self, out: &mut Vec<Candidate>) {
        let g = self.g;
        let tree = self.tree;
        for &b in &self.members {
            for (x, xm) in tree.edges() {
                if !self.non_tree(b, x) || !self.non_tree(b, xm) {
                    continue;
                }
                for &a in &self.members {
                    if a == b {
                        continue;
                    }
                    for &y in g.neighbors(a) {
                        if !self.non_tree(a, y) {
                            continue;
                        }
                        for &ym in tree.neighbors(y) {
                            let yy = normalize((y, ym));
                            if yy == (x, xm) {
                                continue;
                            }
                            for &f in &self.branch_edges {
                                if f == yy || f == (x, xm) {
                                    continue;
                                }
                                out.push(Candidate::new(
                                    &[(a, y), (b, xm), (b, x)],
                                    &[(x, xm), yy, f],
                                    "T + u_3 y + u_7 x^- + u_7 x - x x^- - y y^- - w w^+",
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    fn generic(&self, out: &mut Vec<Candidate>) {
        for (a, b) in self.g.edges() {
            if self.tree.has_edge(a, b) {
                continue;
            }
            for f in self.cycle_edges(a, b) {
                out.push(Candidate::new(&[(a, b)], &[f], "T + e - f"));
            }
        }
    }

    /// Validates a candidate and orders its exchanges so each one is legal.
    fn realize(&self, rule: RuleId, cand: &Candidate) -> Option<ScoredMove<'g>> {
        let k = cand.adds.len();
        if k == 0 || k != cand.removes.len() {
            return None;
        }
        for (i, &(a, b)) in cand.adds.iter().enumerate() {
            if !self.non_tree(a, b) || cand.adds[..i].contains(&(a, b)) {
                return None;
            }
        }
        for (i, &(a, b)) in cand.removes.iter().enumerate() {
            if !self.tree.has_edge(a, b) || cand.removes[..i].contains(&(a, b)) {
                return None;
            }
        }
        if !forms_tree(self.tree, &cand.adds, &cand.removes) {
            return None;
        }
        let mut cur = self.tree.clone();
        let mut pending = cand.removes.clone();
        let mut removes = Vec::with_capacity(k);
        for &(a, b) in &cand.adds {
            let path = cur.path_vertices(a, b);
            let idx = pending.iter().position(|&(c, d)| {
                path.windows(2)
                    .any(|w| (w[0] == c && w[1] == d) || (w[0] == d && w[1] == c))
            })?;
            let f = pending.remove(idx);
            cur = cur.exchange_unchecked((a, b), f);
            removes.push(f);
        }
        let cfg = classify_shape(&cur);
        let potential = potential_of(&cur, &cfg);
        (potential < self.current).then(|| ScoredMove {
            exchange: ExchangeMove {
                rule,
                adds: cand.adds.clone(),
                removes,
                template: cand.template,
            },
            result: cur,
            potential,
        })
    }

    /// Valid improving moves of one family, in catalog order. With
    /// `first_only`, stops at the first one.
    fn family(&self, rule: RuleId, first_only: bool) -> Vec<ScoredMove<'g>> {
        let mut cands: Vec<((Vec<usize>, Vec<Edge>, Vec<Edge>), Candidate)> = self
            .candidates(rule)
            .into_iter()
            .map(|c| (c.key(), c))
            .collect();
        cands.sort_by(|a, b| a.0.cmp(&b.0));
        cands.dedup_by(|a, b| a.0 == b.0);
        let mut out = Vec::new();
        for (_, cand) in &cands {
            if let Some(mv) = self.realize(rule, cand) {
                out.push(mv);
                if first_only {
                    break;
                }
            }
        }
        out
    }
}

/// `T - removes + adds` is a spanning tree (given `|adds| = |removes|`).
fn forms_tree(tree: &SpanningTree<'_>, adds: &[Edge], removes: &[Edge]) -> bool {
    let mut dsu = Dsu::new(tree.n());
    for e in tree.edges() {
        if removes.contains(&e) {
            continue;
        }
        dsu.union(e.0, e.1);
    }
    adds.iter().all(|&(a, b)| dsu.union(a, b))
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Every valid, strictly improving catalog move for `tree`, ordered by rule
/// and then by the vertex ids involved.
pub fn catalog_moves(tree: &SpanningTree<'_>, cfg: &ShapeConfig) -> Vec<ExchangeMove> {
    let ctx = Context::new(tree, cfg);
    RuleId::ALL
        .iter()
        .flat_map(|&rule| ctx.family(rule, false))
        .map(|m| m.exchange)
        .collect()
}

/// The first improving move in catalog order, if any.
pub fn first_improving_move<'g>(
    tree: &SpanningTree<'g>,
    cfg: &ShapeConfig,
) -> Option<ScoredMove<'g>> {
    let ctx = Context::new(tree, cfg);
    RuleId::ALL
        .iter()
        .find_map(|&rule| ctx.family(rule, true).into_iter().next())
}
