//! Counting certificates for stalled searches.
//!
//! For a classified tree the configuration designates a vertex set `I`
//! (leaves plus some hubs). The vertex set of the graph is cut into regions
//! (pieces `B_i`, path segments, hub singletons) and each region receives the
//! number of edges from `I` it could absorb if the tree were a true minimum
//! on a claw-free graph. Summed, the capacities bound `deg(I)`; when
//! `sigma_|I|` exceeds that bound, some region must be over capacity, and the
//! certificate names it.

use serde::Serialize;

use crate::graph::{is_independent, sigma_k, DegreeSumBound, Graph};
use crate::shape::{Shape, ShapeConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionBound {
    pub label: String,
    pub vertices: Vec<usize>,
    /// `Σ_{u ∈ I} |N(u) ∩ region|`.
    pub count: usize,
    pub capacity: usize,
}

impl RegionBound {
    pub fn violated(&self) -> bool {
        self.count > self.capacity
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingCertificate {
    pub shape: ShapeConfig,
    pub independent_set: Vec<usize>,
    /// Whether `I` is independent in the host graph.
    pub independent: bool,
    pub regions: Vec<RegionBound>,
    /// `deg(I)`, equal to the sum of the region counts.
    pub degree_sum: usize,
    pub capacity_total: usize,
    /// `sigma_|I|` of the host graph.
    pub sigma_bound: DegreeSumBound,
    /// `capacity_total - degree_sum`.
    pub contradiction_margin: i64,
}

impl CountingCertificate {
    pub fn violated_regions(&self) -> Vec<&RegionBound> {
        self.regions.iter().filter(|r| r.violated()).collect()
    }
}

struct Builder<'a> {
    g: &'a Graph,
    set: Vec<usize>,
    regions: Vec<RegionBound>,
}

impl Builder<'_> {
    fn region(&mut self, label: impl Into<String>, vertices: Vec<usize>, capacity: usize) {
        let count = self
            .set
            .iter()
            .map(|&u| vertices.iter().filter(|&&x| self.g.has_edge(u, x)).count())
            .sum();
        self.regions.push(RegionBound {
            label: label.into(),
            vertices,
            count,
            capacity,
        });
    }

    fn piece(&mut self, cfg: &ShapeConfig, i: usize, slack: usize) {
        let b = cfg.branch_sets[i].clone();
        let cap = b.len().saturating_sub(slack);
        self.region(format!("B{}", i + 1), b, cap);
    }

    fn finish(self, cfg: &ShapeConfig) -> CountingCertificate {
        let degree_sum = self.regions.iter().map(|r| r.count).sum();
        let capacity_total = self.regions.iter().map(|r| r.capacity).sum::<usize>();
        let sigma_bound = sigma_k(self.g, self.set.len() as i64).unwrap_or(DegreeSumBound::Unbounded);
        CountingCertificate {
            shape: cfg.clone(),
            independent: is_independent(self.g, &self.set),
            independent_set: self.set,
            regions: self.regions,
            degree_sum,
            capacity_total,
            sigma_bound,
            contradiction_margin: capacity_total as i64 - degree_sum as i64,
        }
    }
}

fn concat(parts: &[&[usize]]) -> Vec<usize> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Certificate for `cfg` against its designated set `I`.
///
/// Capacities total `n - 3` for `S1`, `S2` and `S3`, `n - 5` for collapsed
/// `S3` and `n - 7` for `S4`. Other trees get the trivial partition into the
/// components of `G - B(T)` and `B(T)`, with `I = L(T)`.
pub fn counting_certificate(g: &Graph, cfg: &ShapeConfig) -> CountingCertificate {
    let mut b = Builder {
        g,
        set: cfg.special_set.clone(),
        regions: Vec::new(),
    };
    let (s, t, w) = (cfg.s.unwrap_or(0), cfg.t.unwrap_or(0), cfg.w.unwrap_or(0));
    match cfg.shape {
        Shape::S1 => {
            for i in 0..4 {
                b.piece(cfg, i, 0);
            }
            b.piece(cfg, 4, 1);
            b.region("w", vec![w], 1);
            b.region("P1", cfg.p1.clone(), cfg.p1.len());
            b.region("P2", cfg.p2.clone(), cfg.p2.len());
            b.region("s", vec![s], 0);
            b.region("t", vec![t], 0);
        }
        Shape::S2 => {
            b.piece(cfg, 3, 0);
            b.piece(cfg, 4, 0);
            let bs = &cfg.branch_sets;
            let group = concat(&[&bs[0], &bs[1], &bs[2], &bs[5]]);
            let cap = group.len().saturating_sub(3);
            b.region("B1+B2+B3+B6", group, cap);
            b.region("s", vec![s], 0);
            b.region("w", vec![w], 1);
            b.region("t", vec![t], 0);
            b.region("P1", cfg.p1.clone(), cfg.p1.len());
            b.region("P2", cfg.p2.clone(), cfg.p2.len() + 2);
        }
        Shape::S3 if cfg.collapsed => {
            b.piece(cfg, 2, 0);
            b.piece(cfg, 3, 0);
            for i in [0, 1, 4, 5] {
                b.piece(cfg, i, 1);
            }
            b.region("s,w", vec![s, w], 2);
            let segs = concat(&[&cfg.p1, &cfg.p2]);
            let cap = segs.len();
            b.region("P1+P2", segs, cap);
            b.region("t", vec![t], 0);
        }
        Shape::S3 => {
            let z = cfg.z.unwrap_or(w);
            b.piece(cfg, 2, 0);
            b.piece(cfg, 3, 0);
            for i in [0, 1, 4, 5] {
                b.piece(cfg, i, 1);
            }
            b.region("s,w,z", vec![s, w, z], 4);
            b.region("Q1", cfg.q1.clone(), cfg.q1.len());
            b.region("Q2", cfg.q2.clone(), cfg.q2.len());
            b.region("P2", cfg.p2.clone(), cfg.p2.len() + 1);
            b.region("t", vec![t], 0);
        }
        Shape::S4 => {
            let z = cfg.z.unwrap_or(0);
            for i in 0..cfg.branch_sets.len() {
                b.piece(cfg, i, 1);
            }
            b.region("s,t,w", vec![s, t, w], 3);
            let segs = concat(&[&cfg.p1, &cfg.p2, &cfg.p3]);
            let cap = segs.len();
            b.region("P1+P2+P3", segs, cap);
            b.region("z", vec![z], 0);
        }
        Shape::AtMostTwoBranch | Shape::Other => {
            b.set = cfg.leaves.clone();
            for (i, comp) in branch_free_components(g, cfg).into_iter().enumerate() {
                let cap = comp.len();
                b.region(format!("C{}", i + 1), comp, cap);
            }
            let hubs = cfg.branch_vertices.clone();
            let cap = hubs.len();
            b.region("B(T)", hubs, cap);
        }
    }
    b.finish(cfg)
}

/// The `S1` certificate against `X = {u_1, .., u_5, t}`, a six-vertex set;
/// capacities total `n - 6`. `None` for other shapes.
pub fn counting_certificate_sigma6(g: &Graph, cfg: &ShapeConfig) -> Option<CountingCertificate> {
    if cfg.shape != Shape::S1 {
        return None;
    }
    let (s, t, w) = (cfg.s?, cfg.t?, cfg.w?);
    let mut set = cfg.leaves.clone();
    set.push(t);
    let mut b = Builder {
        g,
        set,
        regions: Vec::new(),
    };
    b.piece(cfg, 2, 0);
    b.piece(cfg, 3, 0);
    for i in [0, 1, 4] {
        b.piece(cfg, i, 1);
    }
    b.region("s,w", vec![s, w], 0);
    b.region("P1", cfg.p1.clone(), cfg.p1.len());
    b.region("P2", cfg.p2.clone(), cfg.p2.len());
    b.region("t", vec![t], 0);
    Some(b.finish(cfg))
}

/// Components of the host graph with the branch vertices deleted.
fn branch_free_components(g: &Graph, cfg: &ShapeConfig) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut blocked = vec![false; n];
    for &h in &cfg.branch_vertices {
        blocked[h] = true;
    }
    let mut seen = blocked.clone();
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &x in g.neighbors(v) {
                if !seen[x] {
                    seen[x] = true;
                    comp.push(x);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::classify_shape;
    use crate::tree::SpanningTree;

    const STEP_ONE: &[(usize, usize)] = &[
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (0, 5),
        (5, 6),
        (0, 7),
        (4, 8),
        (4, 9),
        (9, 10),
        (2, 11),
        (11, 12),
    ];

    fn brute_degree(g: &Graph, set: &[usize]) -> usize {
        set.iter().map(|&u| g.degree(u)).sum()
    }

    #[test]
    fn regions_partition_and_capacity_total() {
        let mut edges = STEP_ONE.to_vec();
        edges.extend([(6, 1), (10, 3), (12, 1)]);
        let g = Graph::from_edges(13, edges).unwrap();
        let t = SpanningTree::from_edges(&g, STEP_ONE.iter().copied()).unwrap();
        let cfg = classify_shape(&t);
        let cert = counting_certificate(&g, &cfg);
        let mut all: Vec<usize> = cert.regions.iter().flat_map(|r| r.vertices.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..13).collect::<Vec<_>>());
        assert_eq!(cert.capacity_total, g.n() - 3);
        assert_eq!(cert.degree_sum, brute_degree(&g, &cfg.special_set));
        assert_eq!(
            cert.contradiction_margin,
            cert.capacity_total as i64 - cert.degree_sum as i64
        );
    }

    #[test]
    fn sigma6_variant_total() {
        let g = Graph::from_edges(13, STEP_ONE.iter().copied()).unwrap();
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        let cert = counting_certificate_sigma6(&g, &cfg).unwrap();
        assert_eq!(cert.capacity_total, g.n() - 6);
        assert_eq!(cert.independent_set.len(), 6);
        assert_eq!(cert.degree_sum, brute_degree(&g, &cert.independent_set));
        // Leaves 7 and 8 hang directly off s and t, whose capacities are zero.
        let labels: Vec<&str> = cert.violated_regions().iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["s,w", "t"]);
    }
}
