use crate::tree::{normalize, SpanningTree};

/// Cuts leaves with single exchanges until at most `target` remain or no
/// exchange through a leaf lowers the count.
///
/// Each accepted exchange adds an edge at a leaf and strictly lowers
/// `|L(T)|`, so the leaf count never rises and the loop terminates. A tree
/// this returns above `target` has pairwise nonadjacent leaves.
pub fn reduce_leaves<'g>(tree: &SpanningTree<'g>, target: usize) -> SpanningTree<'g> {
    let mut cur = tree.clone();
    while cur.leaf_count() > target {
        match improving_leaf_exchange(&cur) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

fn improving_leaf_exchange<'g>(tree: &SpanningTree<'g>) -> Option<SpanningTree<'g>> {
    let g = tree.host();
    let before = tree.leaf_count();
    for u in tree.leaves() {
        for &x in g.neighbors(u) {
            if tree.has_edge(u, x) {
                continue;
            }
            let path = tree.path_vertices(u, x);
            for w in path.windows(2) {
                let next = tree.exchange_unchecked((u, x), normalize((w[0], w[1])));
                if next.leaf_count() < before {
                    return Some(next);
                }
            }
        }
    }
    None
}
