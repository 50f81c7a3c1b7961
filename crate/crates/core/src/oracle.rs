//! Exact ground truth for small graphs: spanning-tree counts, enumeration,
//! and the minimum number of branch vertices or leaves over all spanning
//! trees.
//!
//! The minimum is found by full enumeration when the matrix-tree count is
//! small, and otherwise by a dynamic program over vertex subsets: `F[v][S]`
//! is the cheapest subtree rooted at `v` spanning exactly `S`, where a
//! vertex's cost depends only on how many children it has. Children are
//! bucketed as 0, 1, 2 or "3 or more", which is all either objective needs.
//! The program runs in `O(n 3^n)` time.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::catalog::Dsu;
use crate::graph::{is_connected, Graph};
use crate::tree::{normalize, Edge, SpanningTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("n = {n} exceeds the oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("n = {n} with {trees} spanning trees is beyond what the oracle can search")]
    TooLarge { n: usize, trees: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    BranchVertices,
    Leaves,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleMethod {
    Enumeration,
    SubsetDp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `n` answered without `force`.
    pub cap: usize,
    /// Answer above `cap` anyway; the result is flagged as not exact.
    pub force: bool,
    /// Enumerate when the graph has at most this many spanning trees.
    pub enumeration_limit: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cap: 12,
            force: false,
            enumeration_limit: 20_000,
        }
    }
}

/// Largest order the subset program accepts.
pub const SUBSET_DP_MAX_N: usize = 18;

#[derive(Debug, Clone)]
pub struct OracleResult<'g> {
    pub optimum: usize,
    pub witness: SpanningTree<'g>,
    /// Trees visited (enumeration) or subset states filled (program).
    pub explored: u64,
    /// True when `n` is within the configured cap.
    pub exact: bool,
    pub method: OracleMethod,
}

/// Number of spanning trees, by a fraction-free (Bareiss) determinant of the
/// reduced Laplacian. Zero for disconnected graphs.
pub fn count_spanning_trees(g: &Graph) -> BigInt {
    let n = g.n();
    if n <= 1 {
        return BigInt::from(u8::from(n == 1));
    }
    let size = n - 1;
    let mut a: Vec<Vec<BigInt>> = (1..n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    if i == j {
                        BigInt::from(g.degree(i))
                    } else if g.has_edge(i, j) {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    (sign * &a[size - 1][size - 1]).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub visited: u64,
    /// More trees exist beyond `limit`.
    pub truncated: bool,
}

/// Visits spanning trees (as sorted edge lists) in a fixed order, at most
/// `limit` of them.
///
/// Edges are decided one at a time, inclusion first. An edge is skipped only
/// if the remaining candidates still connect the graph, so every leaf of the
/// search is a spanning tree and none is reached twice.
pub fn enumerate_spanning_trees<F>(g: &Graph, limit: u64, mut visit: F) -> Enumeration
where
    F: FnMut(&[Edge]),
{
    let n = g.n();
    let edges: Vec<Edge> = g.edges().collect();
    let mut result = Enumeration {
        visited: 0,
        truncated: false,
    };
    if n == 0 || !is_connected(g) || limit == 0 {
        result.truncated = limit == 0 && n > 0 && is_connected(g);
        return result;
    }
    let mut chosen = Vec::with_capacity(n - 1);
    let mut search = Search {
        n,
        edges: &edges,
        limit,
        result: &mut result,
        visit: &mut visit,
    };
    search.go(0, &mut chosen);
    result
}

struct Search<'a, F> {
    n: usize,
    edges: &'a [Edge],
    limit: u64,
    result: &'a mut Enumeration,
    visit: &'a mut F,
}

impl<F: FnMut(&[Edge])> Search<'_, F> {
    /// Returns false once the walk should stop.
    fn go(&mut self, i: usize, chosen: &mut Vec<Edge>) -> bool {
        if chosen.len() == self.n - 1 {
            if self.result.visited == self.limit {
                self.result.truncated = true;
                return false;
            }
            self.result.visited += 1;
            (self.visit)(chosen);
            return true;
        }
        if i == self.edges.len() {
            return true;
        }
        let e = self.edges[i];
        if !self.closes_cycle(chosen, e) {
            chosen.push(e);
            let go_on = self.go(i + 1, chosen);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        if self.still_connected(chosen, i + 1) {
            return self.go(i + 1, chosen);
        }
        true
    }

    fn closes_cycle(&self, chosen: &[Edge], e: Edge) -> bool {
        let mut dsu = Dsu::new(self.n);
        for &(a, b) in chosen {
            dsu.union(a, b);
        }
        dsu.find(e.0) == dsu.find(e.1)
    }

    fn still_connected(&self, chosen: &[Edge], from: usize) -> bool {
        let mut dsu = Dsu::new(self.n);
        let mut parts = self.n;
        for &(a, b) in chosen.iter().chain(&self.edges[from..]) {
            if dsu.union(a, b) {
                parts -= 1;
            }
        }
        parts == 1
    }
}

fn objective_of(n: usize, edges: &[Edge], objective: Objective) -> usize {
    let mut deg = vec![0usize; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    match objective {
        Objective::BranchVertices => deg.iter().filter(|&&d| d >= 3).count(),
        Objective::Leaves => deg.iter().filter(|&&d| d == 1).count(),
    }
}

fn check_input(g: &Graph) -> Result<(), OracleError> {
    if g.n() == 0 {
        return Err(OracleError::Empty);
    }
    if !is_connected(g) {
        return Err(OracleError::Disconnected);
    }
    Ok(())
}

/// Minimum by visiting every spanning tree. Ties keep the first tree found.
pub fn minimize_by_enumeration(g: &Graph, objective: Objective) -> Result<OracleResult<'_>, OracleError> {
    check_input(g)?;
    let n = g.n();
    let mut best: Option<(usize, Vec<Edge>)> = None;
    let run = enumerate_spanning_trees(g, u64::MAX, |edges| {
        let value = objective_of(n, edges, objective);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, edges.to_vec()));
        }
    });
    let (optimum, edges) = best.expect("connected graphs have a spanning tree");
    Ok(OracleResult {
        optimum,
        witness: SpanningTree::from_edges(g, edges).expect("enumerated edge sets are spanning trees"),
        explored: run.visited,
        exact: true,
        method: OracleMethod::Enumeration,
    })
}

const INF: u16 = u16::MAX;

/// Cost of a vertex with `children` (bucketed at 3) in a tree rooted at 0.
fn vertex_cost(objective: Objective, is_root: bool, children: usize, n: usize) -> u16 {
    let degree = children + usize::from(!is_root);
    let hit = match objective {
        Objective::BranchVertices => degree >= 3,
        Objective::Leaves => degree == 1 && n >= 2,
    };
    u16::from(hit)
}

struct SubsetDp {
    n: usize,
    /// `f[v][S]`: cheapest subtree rooted at `v` spanning `S` (`v ∈ S`).
    f: Vec<Vec<u16>>,
    /// `h[v][S]`: cheapest subtree spanning `S` hung from `v` (`v ∉ S`).
    h: Vec<Vec<u16>>,
    /// `part[v][S][j]`: cheapest split of `S` into `j` subtrees hung from `v`
    /// (`j = 3` meaning three or more).
    part: Vec<Vec<[u16; 4]>>,
    objective: Objective,
}

impl SubsetDp {
    fn run(g: &Graph, objective: Objective) -> Self {
        let n = g.n();
        let size = 1usize << n;
        let mut dp = SubsetDp {
            n,
            f: vec![vec![INF; size]; n],
            h: vec![vec![INF; size]; n],
            part: vec![vec![[INF; 4]; size]; n],
            objective,
        };
        let nbr_mask: Vec<usize> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0, |m, &x| m | (1 << x)))
            .collect();
        for v in 0..n {
            dp.part[v][0][0] = 0;
        }
        for mask in 1..size {
            for v in 0..n {
                if mask & (1 << v) == 0 {
                    continue;
                }
                let rest = mask ^ (1 << v);
                let p = dp.part[v][rest];
                let mut best = INF;
                for (j, &c) in p.iter().enumerate() {
                    if c != INF {
                        best = best.min(c + vertex_cost(objective, false, j, n));
                    }
                }
                dp.f[v][mask] = best;
            }
            for v in 0..n {
                if mask & (1 << v) != 0 {
                    continue;
                }
                let mut cands = mask & nbr_mask[v];
                let mut best = INF;
                while cands != 0 {
                    let c = cands.trailing_zeros() as usize;
                    cands &= cands - 1;
                    best = best.min(dp.f[c][mask]);
                }
                dp.h[v][mask] = best;

                let low = mask & mask.wrapping_neg();
                let others = mask ^ low;
                let mut acc = [INF; 4];
                let mut sub = others;
                loop {
                    let piece = sub | low;
                    let cost = dp.h[v][piece];
                    if cost != INF {
                        let rem = dp.part[v][mask ^ piece];
                        for (j, &r) in rem.iter().enumerate() {
                            if r != INF {
                                let k = (j + 1).min(3);
                                acc[k] = acc[k].min(cost + r);
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & others;
                }
                dp.part[v][mask] = acc;
            }
        }
        dp
    }

    fn root_choice(&self) -> (u16, usize) {
        let full = (1usize << self.n) - 1;
        let p = self.part[0][full ^ 1];
        let mut best = (INF, 0);
        for (j, &c) in p.iter().enumerate() {
            if c != INF {
                let total = c + vertex_cost(self.objective, true, j, self.n);
                if total < best.0 {
                    best = (total, j);
                }
            }
        }
        best
    }

    fn children_choice(&self, v: usize, mask: usize) -> usize {
        let p = self.part[v][mask ^ (1 << v)];
        (0..4)
            .find(|&j| p[j] != INF && p[j] + vertex_cost(self.objective, false, j, self.n) == self.f[v][mask])
            .expect("f is attained by some child count")
    }

    /// Recovers tree edges for `v` spanning `mask` with `j` child subtrees.
    fn rebuild(&self, g: &Graph, v: usize, mask: usize, j: usize, out: &mut Vec<Edge>) {
        let mut rest = mask ^ (1 << v);
        let mut j = j;
        while rest != 0 {
            let target = self.part[v][rest][j];
            let low = rest & rest.wrapping_neg();
            let others = rest ^ low;
            let mut sub = others;
            let mut found = None;
            loop {
                let piece = sub | low;
                let cost = self.h[v][piece];
                if cost != INF {
                    let rem = self.part[v][rest ^ piece];
                    let prev = if j == 3 { &[2usize, 3][..] } else { &[j.wrapping_sub(1)][..] };
                    for &jj in prev {
                        if jj < 4 && rem[jj] != INF && cost + rem[jj] == target {
                            found = Some((piece, jj));
                            break;
                        }
                    }
                }
                if found.is_some() || sub == 0 {
                    break;
                }
                sub = (sub - 1) & others;
            }
            let (piece, jj) = found.expect("partition value is attained");
            let child = g
                .neighbors(v)
                .iter()
                .copied()
                .find(|&c| piece & (1 << c) != 0 && self.f[c][piece] == self.h[v][piece])
                .expect("hanging cost is attained by a neighbor");
            out.push(normalize((v, child)));
            let cj = self.children_choice(child, piece);
            self.rebuild(g, child, piece, cj, out);
            rest ^= piece;
            j = jj;
        }
    }
}

/// Minimum by the subset program, for `n <= SUBSET_DP_MAX_N`.
pub fn minimize_by_subset_dp(g: &Graph, objective: Objective) -> Result<OracleResult<'_>, OracleError> {
    check_input(g)?;
    let n = g.n();
    if n > SUBSET_DP_MAX_N {
        return Err(OracleError::TooLarge {
            n,
            trees: count_spanning_trees(g).to_string(),
        });
    }
    if n == 1 {
        return Ok(OracleResult {
            optimum: 0,
            witness: SpanningTree::from_edges(g, []).expect("single vertex"),
            explored: 1,
            exact: true,
            method: OracleMethod::SubsetDp,
        });
    }
    let dp = SubsetDp::run(g, objective);
    let (optimum, j) = dp.root_choice();
    let mut edges = Vec::with_capacity(n - 1);
    dp.rebuild(g, 0, (1 << n) - 1, j, &mut edges);
    Ok(OracleResult {
        optimum: optimum as usize,
        witness: SpanningTree::from_edges(g, edges).expect("rebuilt edges form a spanning tree"),
        explored: (1u64 << n) - 1,
        exact: true,
        method: OracleMethod::SubsetDp,
    })
}

fn minimize<'g>(g: &'g Graph, objective: Objective, cfg: &OracleConfig) -> Result<OracleResult<'g>, OracleError> {
    check_input(g)?;
    let n = g.n();
    if n > cfg.cap && !cfg.force {
        return Err(OracleError::CapExceeded { n, cap: cfg.cap });
    }
    let count = count_spanning_trees(g);
    let small = count.to_u64().is_some_and(|c| c <= cfg.enumeration_limit);
    let mut result = if small {
        minimize_by_enumeration(g, objective)?
    } else if n <= SUBSET_DP_MAX_N {
        minimize_by_subset_dp(g, objective)?
    } else {
        return Err(OracleError::TooLarge {
            n,
            trees: count.to_string(),
        });
    };
    result.exact = n <= cfg.cap;
    Ok(result)
}

/// Fewest branch vertices over all spanning trees of `g`.
pub fn min_branch_vertices_exact<'g>(g: &'g Graph, cfg: &OracleConfig) -> Result<OracleResult<'g>, OracleError> {
    minimize(g, Objective::BranchVertices, cfg)
}

/// Fewest leaves over all spanning trees of `g`.
pub fn min_leaves_exact<'g>(g: &'g Graph, cfg: &OracleConfig) -> Result<OracleResult<'g>, OracleError> {
    minimize(g, Objective::Leaves, cfg)
}
