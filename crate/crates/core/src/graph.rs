//! Simple undirected graphs on dense vertex ids, plus the degree-sum and
//! neighborhood machinery the rest of the crate is phrased in.
//!
//! A [`Graph`] is immutable once built. Vertex sets are passed as slices and
//! returned as sorted `Vec<usize>`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("sigma_k is defined for k >= 1, got {0}")]
    InvalidK(i64),
}

/// A simple undirected graph with vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; a
    /// self-loop or an endpoint `>= n` is an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        line: 0,
                        vertex: x,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: 0, vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adj))
    }

    fn from_raw_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut twice_m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        Graph { adj, m: twice_m / 2 }
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self::from_raw_adjacency(adj)
    }

    /// Cycle `C_n` (n >= 3).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Path `P_n` on `n` vertices.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    /// The net: triangle `{0,1,2}` with pendants 3, 4, 5 on 0, 1, 2.
    pub fn net() -> Self {
        Self::from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)]).expect("valid net")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Sum of `deg_G` over a vertex set.
    pub fn degree_sum(&self, set: &[usize]) -> usize {
        set.iter().map(|&v| self.degree(v)).sum()
    }

    /// Canonical edge-list text: header `p n m`, then sorted edges.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Parses the edge-list format: optional `p <n> <m>` header, one `u v` per
/// line, `#` comments. Without a header, `n` is one more than the largest id.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut declared_n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens[0] == "p" {
            if declared_n.is_some() || !edges.is_empty() {
                return Err(GraphError::Malformed {
                    line,
                    message: "header must come first and appear once".into(),
                });
            }
            if tokens.len() != 3 {
                return Err(GraphError::Malformed {
                    line,
                    message: "expected `p <n> <m>`".into(),
                });
            }
            let n = parse_number(tokens[1], line)?;
            parse_number(tokens[2], line)?;
            declared_n = Some(n);
            continue;
        }
        if tokens.len() != 2 {
            return Err(GraphError::Malformed {
                line,
                message: format!("expected `u v`, got `{trimmed}`"),
            });
        }
        let u = parse_number(tokens[0], line)?;
        let v = parse_number(tokens[1], line)?;
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        if let Some(n) = declared_n {
            if let Some(&bad) = [u, v].iter().find(|&&x| x >= n) {
                return Err(GraphError::VertexOutOfRange {
                    line,
                    vertex: bad,
                    n,
                });
            }
        }
        edges.push((u, v));
    }
    let n = declared_n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, edges)
}

fn parse_number(token: &str, line: usize) -> Result<usize, GraphError> {
    token.parse().map_err(|_| GraphError::Malformed {
        line,
        message: format!("`{token}` is not a nonnegative integer"),
    })
}

/// True iff a traversal from vertex 0 reaches every vertex. The empty graph
/// counts as connected.
pub fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == g.n()
}

/// An induced `K_{1,3}`: `center` adjacent to three pairwise nonadjacent talons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClawWitness {
    pub center: usize,
    pub talons: [usize; 3],
}

/// Returns the claw with the lowest center id and, for that center, the
/// lexicographically smallest talon triple.
pub fn find_claw(g: &Graph) -> Option<ClawWitness> {
    for center in 0..g.n() {
        let nbrs = g.neighbors(center);
        for (i, &a) in nbrs.iter().enumerate() {
            for (j, &b) in nbrs.iter().enumerate().skip(i + 1) {
                if g.has_edge(a, b) {
                    continue;
                }
                for &c in &nbrs[j + 1..] {
                    if !g.has_edge(a, c) && !g.has_edge(b, c) {
                        return Some(ClawWitness {
                            center,
                            talons: [a, b, c],
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn is_claw_free(g: &Graph) -> bool {
    find_claw(g).is_none()
}

/// `N(X)`: every vertex with at least one neighbor in `set`. This may
/// intersect `set` itself.
pub fn neighborhood(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; g.n()];
    for &y in set {
        for &x in g.neighbors(y) {
            mark[x] = true;
        }
    }
    indices_of(&mark)
}

/// `N(X) \ X`, the open neighborhood of the set.
pub fn outer_neighborhood(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    neighborhood(g, set)
        .into_iter()
        .filter(|&x| !inside[x])
        .collect()
}

/// `N_k(X)`: vertices with exactly `k` neighbors inside `set`.
pub fn neighborhood_exact_count(g: &Graph, set: &[usize], k: usize) -> Vec<usize> {
    let counts = neighbor_counts(g, set);
    (0..g.n()).filter(|&x| counts[x] == k).collect()
}

/// `|N(x) ∩ set|` for every vertex `x`.
pub fn neighbor_counts(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    (0..g.n())
        .map(|x| g.neighbors(x).iter().filter(|&&y| inside[y]).count())
        .collect()
}

pub fn is_independent(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| !g.has_edge(a, b)))
}

fn indices_of(mark: &[bool]) -> Vec<usize> {
    mark.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

/// Value of `sigma_k`: a finite minimum, or `Unbounded` when the graph has
/// no independent set of size `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSumBound {
    Finite(u64),
    Unbounded,
}

impl DegreeSumBound {
    /// `self >= threshold`, where `Unbounded` exceeds every finite threshold.
    pub fn at_least(self, threshold: i64) -> bool {
        match self {
            DegreeSumBound::Unbounded => true,
            DegreeSumBound::Finite(x) => x as i64 >= threshold,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            DegreeSumBound::Finite(x) => Some(x),
            DegreeSumBound::Unbounded => None,
        }
    }
}

impl fmt::Display for DegreeSumBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSumBound::Finite(x) => write!(f, "{x}"),
            DegreeSumBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Minimum degree sum over independent `k`-sets, computed exactly.
///
/// Partial independent sets are extended in increasing vertex id; a branch is
/// cut when its degree sum plus `k - |partial|` copies of the smallest
/// remaining degree cannot beat the incumbent, or when too few candidates
/// remain. `k = 1` gives the minimum degree.
pub fn sigma_k(g: &Graph, k: i64) -> Result<DegreeSumBound, GraphError> {
    if k <= 0 {
        return Err(GraphError::InvalidK(k));
    }
    let k = k as usize;
    let n = g.n();
    if k > n {
        return Ok(DegreeSumBound::Unbounded);
    }
    // suffix_min[i] = min degree among vertices >= i
    let mut suffix_min = vec![usize::MAX; n + 1];
    for v in (0..n).rev() {
        suffix_min[v] = suffix_min[v + 1].min(g.degree(v));
    }
    let mut search = SigmaSearch {
        g,
        k,
        suffix_min,
        blocked: vec![0u32; n],
        best: None,
    };
    search.extend(0, 0, 0);
    Ok(match search.best {
        Some(x) => DegreeSumBound::Finite(x as u64),
        None => DegreeSumBound::Unbounded,
    })
}

struct SigmaSearch<'a> {
    g: &'a Graph,
    k: usize,
    suffix_min: Vec<usize>,
    /// Number of chosen vertices adjacent to each vertex.
    blocked: Vec<u32>,
    best: Option<usize>,
}

impl SigmaSearch<'_> {
    fn extend(&mut self, start: usize, chosen: usize, sum: usize) {
        if chosen == self.k {
            if self.best.is_none_or(|b| sum < b) {
                self.best = Some(sum);
            }
            return;
        }
        let n = self.g.n();
        let need = self.k - chosen;
        for v in start..n {
            if let Some(best) = self.best {
                if sum + need * self.suffix_min[v] >= best {
                    return;
                }
            }
            let available = (v..n).filter(|&x| self.blocked[x] == 0).count();
            if available < need {
                return;
            }
            if self.blocked[v] != 0 {
                continue;
            }
            for &w in self.g.neighbors(v) {
                self.blocked[w] += 1;
            }
            self.extend(v + 1, chosen + 1, sum + self.g.degree(v));
            for &w in self.g.neighbors(v) {
                self.blocked[w] -= 1;
            }
        }
    }
}
