//! Spanning trees of a host [`Graph`], with leaf/branch bookkeeping, oriented
//! tree paths and the single-edge exchange `T + e - f`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{is_connected, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("host graph is disconnected")]
    Disconnected,
    #[error("host graph has no vertices")]
    EmptyGraph,
    #[error("root {root} out of range for n = {n}")]
    RootOutOfRange { root: usize, n: usize },
    #[error("{0}-{1} is not an edge of the host graph")]
    NotAGraphEdge(usize, usize),
    #[error("expected {expected} tree edges, got {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("edge set does not span the host graph")]
    NotSpanning,
    #[error("{0}-{1} is already a tree edge")]
    AlreadyInTree(usize, usize),
    #[error("{0}-{1} is not a tree edge")]
    NotInTree(usize, usize),
    #[error("{0}-{1} is not on the cycle closed by the added edge")]
    OffCycle(usize, usize),
    #[error("tree paths need distinct endpoints")]
    EmptyPath,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// An undirected edge, stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub fn normalize(e: Edge) -> Edge {
    if e.0 <= e.1 {
        e
    } else {
        (e.1, e.0)
    }
}

/// A spanning tree of `host`. Internally rooted at vertex 0; the root never
/// shows up in results.
#[derive(Debug, Clone)]
pub struct SpanningTree<'g> {
    host: &'g Graph,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for SpanningTree<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.host, other.host) && self.adj == other.adj
    }
}

impl Eq for SpanningTree<'_> {}

impl<'g> SpanningTree<'g> {
    /// Builds a tree from `n - 1` host edges; fails unless they span `host`.
    pub fn from_edges<I>(host: &'g Graph, edges: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let n = host.n();
        if n == 0 {
            return Err(TreeError::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); n];
        let mut count = 0;
        for (u, v) in edges {
            if !host.has_edge(u, v) {
                return Err(TreeError::NotAGraphEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
            count += 1;
        }
        if count != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                expected: n - 1,
                got: count,
            });
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self::from_adjacency(host, adj).ok_or(TreeError::NotSpanning)
    }

    /// `adj` must hold exactly `n - 1` edges; returns `None` unless connected.
    fn from_adjacency(host: &'g Graph, adj: Vec<Vec<usize>>) -> Option<Self> {
        let n = adj.len();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(v);
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        (reached == n).then_some(SpanningTree {
            host,
            parent,
            depth,
            adj,
        })
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// `deg_T(v)`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted tree neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Tree edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `L(T)`, sorted.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.adj.iter().filter(|a| a.len() == 1).count()
    }

    /// `B(T)`, sorted.
    pub fn branch_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) >= 3).collect()
    }

    pub fn branch_count(&self) -> usize {
        self.adj.iter().filter(|a| a.len() >= 3).count()
    }

    /// `|L(T)| - 2 - Σ_{v ∈ B(T)} (deg_T(v) - 2)`. Zero for every tree on at
    /// least two vertices.
    pub fn leaf_identity_residual(&self) -> i64 {
        let excess: i64 = self
            .branch_vertices()
            .iter()
            .map(|&v| self.degree(v) as i64 - 2)
            .sum();
        self.leaf_count() as i64 - 2 - excess
    }

    /// Number of edges on the tree path between `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        let lca = self.lca(u, v);
        self.depth[u] + self.depth[v] - 2 * self.depth[lca]
    }

    fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].expect("non-root has a parent");
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("non-root has a parent");
        }
        while u != v {
            u = self.parent[u].expect("non-root has a parent");
            v = self.parent[v].expect("non-root has a parent");
        }
        u
    }

    /// Vertex sequence of the tree path from `u` to `v`, both included.
    pub fn path_vertices(&self, u: usize, v: usize) -> Vec<usize> {
        let lca = self.lca(u, v);
        let mut front = Vec::new();
        let mut x = u;
        while x != lca {
            front.push(x);
            x = self.parent[x].expect("non-root has a parent");
        }
        front.push(lca);
        let mut back = Vec::new();
        let mut y = v;
        while y != lca {
            back.push(y);
            y = self.parent[y].expect("non-root has a parent");
        }
        front.extend(back.into_iter().rev());
        front
    }

    /// `P_T[u, v]`, oriented from `u` to `v`.
    pub fn tree_path(&self, u: usize, v: usize) -> Result<OrientedPath, TreeError> {
        if u == v {
            return Err(TreeError::EmptyPath);
        }
        Ok(OrientedPath {
            vertices: self.path_vertices(u, v),
        })
    }

    /// `T + add - remove`. `add` must be a host edge outside the tree and
    /// `remove` a tree edge on the cycle that `add` closes.
    pub fn exchange(&self, add: Edge, remove: Edge) -> Result<SpanningTree<'g>, TreeError> {
        let (a, b) = add;
        let (c, d) = remove;
        if a == b || !self.host.has_edge(a, b) {
            return Err(TreeError::NotAGraphEdge(a, b));
        }
        if self.has_edge(a, b) {
            return Err(TreeError::AlreadyInTree(a, b));
        }
        if c == d || !self.has_edge(c, d) {
            return Err(TreeError::NotInTree(c, d));
        }
        let cycle = self.path_vertices(a, b);
        let on_cycle = cycle
            .windows(2)
            .any(|w| (w[0] == c && w[1] == d) || (w[0] == d && w[1] == c));
        if !on_cycle {
            return Err(TreeError::OffCycle(c, d));
        }
        Ok(self.exchange_unchecked(add, remove))
    }

    /// Exchange without validation; callers must have checked the cycle.
    pub(crate) fn exchange_unchecked(&self, add: Edge, remove: Edge) -> SpanningTree<'g> {
        let mut adj = self.adj.clone();
        let (c, d) = remove;
        adj[c].retain(|&x| x != d);
        adj[d].retain(|&x| x != c);
        let (a, b) = add;
        insert_sorted(&mut adj[a], b);
        insert_sorted(&mut adj[b], a);
        Self::from_adjacency(self.host, adj).expect("exchange on the fundamental cycle keeps a tree")
    }

    /// Parent-array text: `t <n>`, then `v parent(v)` per vertex, root `-1`.
    pub fn to_parent_array(&self) -> String {
        let mut out = format!("t {}\n", self.n());
        for (v, p) in self.parent.iter().enumerate() {
            match p {
                Some(p) => out.push_str(&format!("{v} {p}\n")),
                None => out.push_str(&format!("{v} -1\n")),
            }
        }
        out
    }
}

fn insert_sorted(list: &mut Vec<usize>, x: usize) {
    let pos = list.binary_search(&x).unwrap_or_else(|p| p);
    list.insert(pos, x);
}

/// Depth-first spanning tree from `root`, exploring neighbors in increasing id.
pub fn spanning_tree_dfs(g: &Graph, root: usize) -> Result<SpanningTree<'_>, TreeError> {
    if g.n() == 0 {
        return Err(TreeError::EmptyGraph);
    }
    if root >= g.n() {
        return Err(TreeError::RootOutOfRange { root, n: g.n() });
    }
    if !is_connected(g) {
        return Err(TreeError::Disconnected);
    }
    let mut visited = vec![false; g.n()];
    let mut edges = Vec::with_capacity(g.n() - 1);
    // (vertex, index of the next neighbor to try)
    let mut stack = vec![(root, 0usize)];
    visited[root] = true;
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        let nbrs = g.neighbors(v);
        if next == nbrs.len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let w = nbrs[next];
        if !visited[w] {
            visited[w] = true;
            edges.push((v, w));
            stack.push((w, 0));
        }
    }
    SpanningTree::from_edges(g, edges)
}

/// Reads the parent-array format written by [`SpanningTree::to_parent_array`].
pub fn parse_tree<'g>(g: &'g Graph, text: &str) -> Result<SpanningTree<'g>, TreeError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let malformed = |message: &str| TreeError::Malformed {
            line,
            message: message.to_string(),
        };
        if tokens[0] == "t" {
            let count: usize = tokens
                .get(1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| malformed("expected `t <n>`"))?;
            if count != g.n() {
                return Err(malformed("tree size differs from the host graph"));
            }
            n = Some(count);
            continue;
        }
        if n.is_none() || tokens.len() != 2 {
            return Err(malformed("expected `v parent` after a `t <n>` header"));
        }
        let v: usize = tokens[0].parse().map_err(|_| malformed("bad vertex id"))?;
        let p: i64 = tokens[1].parse().map_err(|_| malformed("bad parent id"))?;
        if p >= 0 {
            edges.push((v, p as usize));
        }
    }
    SpanningTree::from_edges(g, edges)
}

/// A tree path listed from its first to its last vertex; `successor` and
/// `predecessor` follow that orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedPath {
    vertices: Vec<usize>,
}

impl OrientedPath {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.vertices.iter().position(|&y| y == x)
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position(x).is_some()
    }

    /// `x⁺`.
    pub fn successor(&self, x: usize) -> Option<usize> {
        self.position(x).and_then(|i| self.vertices.get(i + 1).copied())
    }

    /// `x⁻`.
    pub fn predecessor(&self, x: usize) -> Option<usize> {
        self.position(x)
            .and_then(|i| i.checked_sub(1))
            .map(|i| self.vertices[i])
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> OrientedPath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        OrientedPath { vertices }
    }
}
