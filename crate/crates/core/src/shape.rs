//! Classification of spanning trees with three or four branch vertices into
//! the four configurations the exchange engine works on.
//!
//! With at most six leaves and at least three branch vertices a tree is one
//! of:
//!
//! * `S1`: five leaves, three degree-3 branch vertices `t, w, s` on one path.
//! * `S2`: six leaves, branch degrees 4, 3, 3 with the degree-4 vertex `s` at
//!   an end of the path `t .. w .. s`.
//! * `S3`: six leaves, four degree-3 branch vertices on one path in the order
//!   `t, z, w, s`; or the collapsed form `z = w` where the middle vertex of a
//!   three-branch tree has degree 4.
//! * `S4`: six leaves, four degree-3 branch vertices where `z` is the median
//!   of `s`, `t` and `w`.
//!
//! Every other tree with three or more branch vertices has at least seven
//! leaves and is reported as [`Shape::Other`].
//!
//! Each component of `T` minus the branch vertices that contains a leaf is a
//! path `v_i .. u_i` hanging off one branch vertex; these are the
//! `branch_sets`, listed in the fixed order the configuration prescribes
//! (pieces at `s`, then `t`, then `w`, then `z`; ties by attachment id).

use serde::Serialize;

use crate::tree::SpanningTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Shape {
    AtMostTwoBranch,
    S1,
    S2,
    S3,
    S4,
    Other,
}

impl Shape {
    /// Position in the potential ordering; 0 for trees that are already done.
    pub fn rank(self) -> u8 {
        match self {
            Shape::AtMostTwoBranch => 0,
            Shape::S1 => 1,
            Shape::S2 => 2,
            Shape::S3 => 3,
            Shape::S4 => 4,
            Shape::Other => 5,
        }
    }

    pub fn is_configured(self) -> bool {
        matches!(self, Shape::S1 | Shape::S2 | Shape::S3 | Shape::S4)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeConfig {
    pub shape: Shape,
    /// `S3` with `z = w`.
    pub collapsed: bool,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub w: Option<usize>,
    pub z: Option<usize>,
    /// `B(T)`, sorted.
    pub branch_vertices: Vec<usize>,
    /// `u_1, u_2, ...` for configured shapes; `L(T)` sorted otherwise.
    pub leaves: Vec<usize>,
    /// `v_i`: the vertex of `B_i` adjacent to a branch vertex.
    pub attachments: Vec<usize>,
    /// The branch vertex `B_i` hangs from.
    pub hubs: Vec<usize>,
    /// `B_i`, listed from `v_i` to `u_i`.
    pub branch_sets: Vec<Vec<usize>>,
    /// `P_T[t, s]` for `S1`..`S3`.
    pub spine: Vec<usize>,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub p3: Vec<usize>,
    pub q1: Vec<usize>,
    pub q2: Vec<usize>,
    pub r1: Option<usize>,
    pub r2: Option<usize>,
    pub r3: Option<usize>,
    /// The designated independent candidate `I`.
    pub special_set: Vec<usize>,
}

impl ShapeConfig {
    fn bare(shape: Shape, tree: &SpanningTree<'_>) -> Self {
        ShapeConfig {
            shape,
            collapsed: false,
            s: None,
            t: None,
            w: None,
            z: None,
            branch_vertices: tree.branch_vertices(),
            leaves: tree.leaves(),
            attachments: Vec::new(),
            hubs: Vec::new(),
            branch_sets: Vec::new(),
            spine: Vec::new(),
            p1: Vec::new(),
            p2: Vec::new(),
            p3: Vec::new(),
            q1: Vec::new(),
            q2: Vec::new(),
            r1: None,
            r2: None,
            r3: None,
            special_set: Vec::new(),
        }
    }

    /// Named branch vertices present in this configuration (`s, w, z, t`).
    pub fn named_hubs(&self) -> Vec<usize> {
        let mut out: Vec<usize> = [self.s, self.w, self.z, self.t].into_iter().flatten().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Index `i` with `x ∈ B_i`.
    pub fn piece_of(&self, x: usize) -> Option<usize> {
        self.branch_sets.iter().position(|b| b.contains(&x))
    }
}

/// A maximal path leaving a branch vertex through degree-2 vertices.
#[derive(Debug, Clone)]
struct Arm {
    /// Tree neighbor of the hub the arm starts with.
    start: usize,
    /// Interior vertices in order away from the hub.
    vertices: Vec<usize>,
    /// Branch vertex at the far end, or `None` when the arm ends in a leaf.
    far_hub: Option<usize>,
}

fn arms_of(tree: &SpanningTree<'_>, hub: usize) -> Vec<Arm> {
    tree.neighbors(hub)
        .iter()
        .map(|&start| {
            let mut vertices = Vec::new();
            let mut prev = hub;
            let mut cur = start;
            loop {
                let deg = tree.degree(cur);
                if deg >= 3 {
                    return Arm {
                        start,
                        vertices,
                        far_hub: Some(cur),
                    };
                }
                vertices.push(cur);
                if deg == 1 {
                    return Arm {
                        start,
                        vertices,
                        far_hub: None,
                    };
                }
                let next = tree
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&x| x != prev)
                    .expect("degree-2 vertex has a second neighbor");
                prev = cur;
                cur = next;
            }
        })
        .collect()
}

struct Roles {
    shape: Shape,
    collapsed: bool,
    s: usize,
    t: usize,
    w: usize,
    z: Option<usize>,
}

/// Classifies `tree` (a spanning tree of `g`) and names its parts.
pub fn classify_shape(tree: &SpanningTree<'_>) -> ShapeConfig {
    let branch = tree.branch_vertices();
    if branch.len() <= 2 {
        return ShapeConfig::bare(Shape::AtMostTwoBranch, tree);
    }
    let leaf_count = tree.leaf_count();
    if leaf_count > 6 {
        return ShapeConfig::bare(Shape::Other, tree);
    }
    let arms: Vec<(usize, Vec<Arm>)> = branch.iter().map(|&h| (h, arms_of(tree, h))).collect();
    let skeleton_degree = |h: usize| {
        arms.iter()
            .find(|(x, _)| *x == h)
            .map(|(_, a)| a.iter().filter(|arm| arm.far_hub.is_some()).count())
            .unwrap_or(0)
    };
    let dist = |a: usize, b: usize| tree.distance(a, b);

    let roles = match (branch.len(), leaf_count) {
        (3, 5) | (3, 6) => {
            let middle = *branch
                .iter()
                .find(|&&h| skeleton_degree(h) == 2)
                .expect("three branch vertices of a tree are collinear");
            let ends: Vec<usize> = branch.iter().copied().filter(|&h| h != middle).collect();
            if leaf_count == 5 {
                let (s, t) = best_endpoints(&ends, |s, t| (dist(s, t), dist(s, middle), 0));
                Some(Roles {
                    shape: Shape::S1,
                    collapsed: false,
                    s,
                    t,
                    w: middle,
                    z: None,
                })
            } else if tree.degree(middle) == 4 {
                let (s, t) = best_endpoints(&ends, |s, t| {
                    (dist(s, t), dist(s, middle), dist(s, middle))
                });
                Some(Roles {
                    shape: Shape::S3,
                    collapsed: true,
                    s,
                    t,
                    w: middle,
                    z: Some(middle),
                })
            } else {
                let s = *ends.iter().find(|&&h| tree.degree(h) == 4).expect("one degree-4 end");
                let t = *ends.iter().find(|&&h| h != s).expect("two ends");
                Some(Roles {
                    shape: Shape::S2,
                    collapsed: false,
                    s,
                    t,
                    w: middle,
                    z: None,
                })
            }
        }
        (4, 6) => {
            if let Some(&center) = branch.iter().find(|&&h| skeleton_degree(h) == 3) {
                let outer: Vec<usize> = branch.iter().copied().filter(|&h| h != center).collect();
                let mut best: Option<((usize, usize, usize, usize), (usize, usize, usize))> = None;
                for &s in &outer {
                    for &t in &outer {
                        for &w in &outer {
                            if s == t || t == w || s == w {
                                continue;
                            }
                            let key = (dist(s, t), dist(s, w), s, t);
                            if best.is_none_or(|(k, _)| key < k) {
                                best = Some((key, (s, t, w)));
                            }
                        }
                    }
                }
                let (_, (s, t, w)) = best.expect("three outer branch vertices");
                Some(Roles {
                    shape: Shape::S4,
                    collapsed: false,
                    s,
                    t,
                    w,
                    z: Some(center),
                })
            } else {
                let ends: Vec<usize> = branch
                    .iter()
                    .copied()
                    .filter(|&h| skeleton_degree(h) == 1)
                    .collect();
                let inner: Vec<usize> = branch
                    .iter()
                    .copied()
                    .filter(|&h| skeleton_degree(h) == 2)
                    .collect();
                let near = |s: usize| {
                    if dist(s, inner[0]) <= dist(s, inner[1]) {
                        (inner[0], inner[1])
                    } else {
                        (inner[1], inner[0])
                    }
                };
                let (s, t) = best_endpoints(&ends, |s, t| {
                    let (w, z) = near(s);
                    (dist(s, t), dist(s, w), dist(s, z))
                });
                let (w, z) = near(s);
                Some(Roles {
                    shape: Shape::S3,
                    collapsed: false,
                    s,
                    t,
                    w,
                    z: Some(z),
                })
            }
        }
        _ => None,
    };

    let Some(roles) = roles else {
        return ShapeConfig::bare(Shape::Other, tree);
    };
    build_config(tree, &arms, roles)
}

/// Picks `(s, t)` from two endpoints minimizing `key(s, t)`, then `s`.
fn best_endpoints<K: Ord>(ends: &[usize], key: impl Fn(usize, usize) -> K) -> (usize, usize) {
    let (a, b) = (ends[0], ends[1]);
    let ka = (key(a, b), a);
    let kb = (key(b, a), b);
    if ka <= kb {
        (a, b)
    } else {
        (b, a)
    }
}

fn interior(tree: &SpanningTree<'_>, from: usize, to: usize) -> Vec<usize> {
    let path = tree.path_vertices(from, to);
    path[1..path.len() - 1].to_vec()
}

fn build_config(tree: &SpanningTree<'_>, arms: &[(usize, Vec<Arm>)], roles: Roles) -> ShapeConfig {
    let mut cfg = ShapeConfig::bare(roles.shape, tree);
    let Roles {
        shape,
        collapsed,
        s,
        t,
        w,
        z,
    } = roles;
    cfg.collapsed = collapsed;
    cfg.s = Some(s);
    cfg.t = Some(t);
    cfg.w = Some(w);
    cfg.z = z;

    let mut hub_order = vec![s, t, w];
    if let Some(z) = z {
        if z != w {
            hub_order.push(z);
        }
    }
    cfg.leaves.clear();
    for hub in hub_order {
        let mut pieces: Vec<&Arm> = arms
            .iter()
            .find(|(h, _)| *h == hub)
            .map(|(_, a)| a.iter().filter(|arm| arm.far_hub.is_none()).collect())
            .unwrap_or_default();
        pieces.sort_by_key(|arm| arm.start);
        for arm in pieces {
            cfg.attachments.push(arm.start);
            cfg.hubs.push(hub);
            cfg.leaves.push(*arm.vertices.last().expect("arm reaches a leaf"));
            cfg.branch_sets.push(arm.vertices.clone());
        }
    }

    let dist = |a: usize, b: usize| tree.distance(a, b);
    match shape {
        Shape::S1 | Shape::S2 => {
            cfg.spine = tree.path_vertices(t, s);
            cfg.p1 = interior(tree, w, s);
            cfg.p2 = interior(tree, t, w);
            cfg.r1 = Some(dist(s, t));
            cfg.r2 = Some(dist(s, w));
        }
        Shape::S3 => {
            let z = z.expect("S3 names z");
            cfg.spine = tree.path_vertices(t, s);
            cfg.q1 = interior(tree, w, s);
            cfg.q2 = if z == w { Vec::new() } else { interior(tree, z, w) };
            cfg.p1 = cfg.q2.iter().chain(cfg.q1.iter()).copied().collect();
            cfg.p2 = interior(tree, t, z);
            cfg.r1 = Some(dist(s, t));
            cfg.r2 = Some(dist(s, w));
            cfg.r3 = Some(dist(s, z));
        }
        Shape::S4 => {
            let z = z.expect("S4 names z");
            cfg.p1 = interior(tree, z, s);
            cfg.p2 = interior(tree, z, t);
            cfg.p3 = interior(tree, z, w);
            cfg.r1 = Some(dist(s, t));
            cfg.r2 = Some(dist(s, w));
            cfg.r3 = Some(dist(s, z));
        }
        Shape::AtMostTwoBranch | Shape::Other => unreachable!("only configured shapes are built"),
    }

    cfg.special_set = cfg.leaves.clone();
    match shape {
        Shape::S1 => cfg.special_set.extend([t, s]),
        Shape::S2 | Shape::S3 => cfg.special_set.push(t),
        Shape::S4 => cfg.special_set.push(z.expect("S4 names z")),
        _ => {}
    }
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::tree::SpanningTree;

    fn tree_graph(edges: &[(usize, usize)]) -> Graph {
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap();
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    /// Spine 0-1-2-3-4 with branch vertices 0, 2, 4.
    pub(crate) const FIGURE_ONE: &[(usize, usize)] = &[
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

    #[test]
    fn path_is_done() {
        let g = Graph::path(5);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        assert_eq!(classify_shape(&t).shape, Shape::AtMostTwoBranch);
    }

    #[test]
    fn step_one_tree() {
        let g = tree_graph(FIGURE_ONE);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        assert_eq!(cfg.shape, Shape::S1);
        assert_eq!(cfg.leaves.len(), 5);
        assert_eq!(cfg.branch_vertices, vec![0, 2, 4]);
        // d(0,2) = d(4,2): tie broken towards the smaller id for s.
        assert_eq!((cfg.s, cfg.w, cfg.t), (Some(0), Some(2), Some(4)));
        assert_eq!((cfg.r1, cfg.r2), (Some(4), Some(2)));
        assert_eq!(cfg.attachments, vec![5, 7, 8, 9, 11]);
        assert_eq!(cfg.leaves, vec![6, 7, 8, 10, 12]);
        assert_eq!(cfg.branch_sets[0], vec![5, 6]);
        assert_eq!(cfg.spine, vec![4, 3, 2, 1, 0]);
        assert_eq!(cfg.p1, vec![1]);
        assert_eq!(cfg.p2, vec![3]);
        assert_eq!(cfg.special_set, vec![6, 7, 8, 10, 12, 4, 0]);
        let path = t.tree_path(4, 0).unwrap();
        let pos_w = path.position(2).unwrap();
        assert!(pos_w > 0 && pos_w < path.len());
    }

    #[test]
    fn s1_prefers_short_second_distance() {
        // Spine 0-1-2-3-4-5 with w = 4 closer to 5.
        let g = tree_graph(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (0, 6),
            (0, 7),
            (5, 8),
            (5, 9),
            (4, 10),
        ]);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        assert_eq!(cfg.shape, Shape::S1);
        assert_eq!((cfg.s, cfg.w, cfg.t), (Some(5), Some(4), Some(0)));
        assert_eq!((cfg.r1, cfg.r2), (Some(5), Some(1)));
        assert!(cfg.p1.is_empty());
        assert_eq!(cfg.p2, vec![1, 2, 3]);
    }

    #[test]
    fn step_two_and_collapsed_three() {
        // Degree-4 end: S2.
        let g = tree_graph(&[
            (0, 1),
            (1, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 6),
            (2, 7),
            (2, 8),
        ]);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        assert_eq!(cfg.shape, Shape::S2);
        assert_eq!((cfg.s, cfg.w, cfg.t), (Some(0), Some(1), Some(2)));
        assert_eq!(cfg.special_set.len(), 7);
        assert_eq!(cfg.hubs, vec![0, 0, 0, 2, 2, 1]);

        // Degree-4 middle: S3 with z = w.
        let g = tree_graph(&[
            (0, 1),
            (1, 2),
            (0, 3),
            (0, 4),
            (1, 5),
            (1, 6),
            (2, 7),
            (2, 8),
        ]);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        assert_eq!(cfg.shape, Shape::S3);
        assert!(cfg.collapsed);
        assert_eq!(cfg.w, cfg.z);
        assert_eq!(cfg.leaves.len(), 6);
    }

    #[test]
    fn step_three_and_four() {
        // Collinear 0-1-2-3: S3.
        let g = tree_graph(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (0, 4),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (3, 9),
        ]);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        assert_eq!(cfg.shape, Shape::S3);
        assert!(!cfg.collapsed);
        assert_eq!((cfg.s, cfg.w, cfg.z, cfg.t), (Some(0), Some(1), Some(2), Some(3)));
        assert_eq!((cfg.r1, cfg.r2, cfg.r3), (Some(3), Some(1), Some(2)));

        // Median 0 with arms to 1, 2, 3 (arm to 3 subdivided by 10).
        let g = tree_graph(&[
            (0, 1),
            (0, 2),
            (0, 10),
            (10, 3),
            (1, 4),
            (1, 5),
            (2, 6),
            (2, 7),
            (3, 8),
            (3, 9),
        ]);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        let cfg = classify_shape(&t);
        assert_eq!(cfg.shape, Shape::S4);
        assert_eq!(cfg.z, Some(0));
        assert_eq!((cfg.s, cfg.t, cfg.w), (Some(1), Some(2), Some(3)));
        assert_eq!(cfg.p3, vec![10]);
        assert_eq!(*cfg.special_set.last().unwrap(), 0);
    }

    #[test]
    fn many_leaves_is_other() {
        let g = Graph::star(7);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        // One branch vertex: already done.
        assert_eq!(classify_shape(&t).shape, Shape::AtMostTwoBranch);
        // Three degree-4 branch vertices: seven leaves.
        let g = tree_graph(&[
            (0, 1),
            (1, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 6),
            (1, 7),
            (2, 8),
            (2, 9),
            (2, 10),
        ]);
        let t = SpanningTree::from_edges(&g, g.edges()).unwrap();
        assert_eq!(classify_shape(&t).shape, Shape::Other);
    }
}
