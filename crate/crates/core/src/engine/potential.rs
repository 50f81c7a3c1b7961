use std::fmt;

use serde::Serialize;

use crate::shape::{classify_shape, Shape, ShapeConfig};
use crate::tree::SpanningTree;

/// Lexicographic measure the local search drives down.
///
/// Field order is comparison order: trees with at most two branch vertices
/// come first, then fewer leaves, then the configuration rank, then the
/// configuration's own distance measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Potential {
    pub branch_flag: u8,
    pub leaf_count: usize,
    pub shape_rank: u8,
    pub measure: [usize; 3],
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{})",
            self.branch_flag,
            self.leaf_count,
            self.shape_rank,
            self.measure[0],
            self.measure[1],
            self.measure[2]
        )
    }
}

pub fn potential(tree: &SpanningTree<'_>) -> Potential {
    potential_of(tree, &classify_shape(tree))
}

/// Potential from an already computed classification of `tree`.
pub fn potential_of(tree: &SpanningTree<'_>, cfg: &ShapeConfig) -> Potential {
    let leaf_count = tree.leaf_count();
    let measure = match cfg.shape {
        Shape::AtMostTwoBranch => [0, 0, 0],
        Shape::S1 | Shape::S2 => [cfg.r1.unwrap_or(0), cfg.r2.unwrap_or(0), 0],
        Shape::S3 => [
            cfg.r1.unwrap_or(0),
            cfg.r2.unwrap_or(0),
            cfg.r3.unwrap_or(0),
        ],
        Shape::S4 => [cfg.p1.len() + cfg.p2.len() + cfg.p3.len(), 0, 0],
        Shape::Other => {
            let b = &cfg.branch_vertices;
            let mut total = 0;
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    total += tree.distance(x, y);
                }
            }
            [total, 0, 0]
        }
    };
    Potential {
        branch_flag: u8::from(cfg.shape != Shape::AtMostTwoBranch),
        leaf_count,
        shape_rank: cfg.shape.rank(),
        measure,
    }
}
