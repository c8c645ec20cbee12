use std::collections::BTreeMap;

use serde::Serialize;

use super::Point;
use crate::algebra::{IndexSet, MinorSymbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GraphVariant {
    /// `G_n`: Catalan paths, nodes with `x >= y >= 0`, `x + y <= 2n - 2` even.
    G,
    /// `G'_n`: Schröder paths, nodes with `0 <= y <= x`, `x + y <= 2n - 4` even.
    GPrime,
}

/// Label of `G_n` node `(x, y)` with `y >= 1`: `a_{ij|I}` for `i < j`.
pub fn g_node_minor(pt: Point) -> MinorSymbol {
    debug_assert!(pt.y >= 1 && (pt.x + pt.y) % 2 == 0);
    let i = ((pt.x - pt.y + 2) / 2) as usize;
    let j = ((pt.x + pt.y + 2) / 2) as usize;
    MinorSymbol::connected_a(i, j)
}

/// Label `p_I` of the region directly below `G_n` node `pt`; `None` when `I` is empty.
pub fn g_region_below(pt: Point) -> Option<MinorSymbol> {
    let i = ((pt.x - pt.y + 2) / 2) as usize;
    let j = ((pt.x + pt.y + 2) / 2) as usize;
    MinorSymbol::principal(IndexSet::between(i, j))
}

/// Label of `G'_n` node `(x, y)`: `a_{ij|I}` for `i > j`.
pub fn gp_node_minor(pt: Point) -> MinorSymbol {
    debug_assert!(pt.y >= 0 && (pt.x + pt.y) % 2 == 0);
    let i = ((pt.x + pt.y + 4) / 2) as usize;
    let j = ((pt.x - pt.y + 2) / 2) as usize;
    MinorSymbol::connected_a(i, j)
}

/// Label `p_I` of the upward triangle directly below `G'_n` node `pt`.
pub fn gp_triangle_below(pt: Point) -> Option<MinorSymbol> {
    let i = ((pt.x + pt.y + 4) / 2) as usize;
    let j = ((pt.x - pt.y + 2) / 2) as usize;
    MinorSymbol::principal(IndexSet::between(i, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeLabel {
    /// Set for the nodes `(2k-2, 0)`.
    pub index: Option<usize>,
    pub minor: Option<MinorSymbol>,
}

/// Complete labeling of `G_n` or `G'_n`.
///
/// Regions are keyed by the node sitting directly above them; a `None`
/// region label is the trivial `p_∅ = 1`.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub n: usize,
    pub variant: GraphVariant,
    pub nodes: BTreeMap<Point, NodeLabel>,
    pub regions: BTreeMap<Point, Option<MinorSymbol>>,
}

impl LabeledGraph {
    pub fn node(&self, pt: Point) -> Option<&NodeLabel> {
        self.nodes.get(&pt)
    }

    pub fn region_below(&self, apex: Point) -> Option<&Option<MinorSymbol>> {
        self.regions.get(&apex)
    }
}

pub fn graph_labels(n: usize, variant: GraphVariant) -> LabeledGraph {
    assert!(n >= 2, "graphs need n >= 2");
    let n_i = n as i64;
    let bound = match variant {
        GraphVariant::G => 2 * n_i - 2,
        GraphVariant::GPrime => 2 * n_i - 4,
    };
    let mut nodes = BTreeMap::new();
    let mut regions = BTreeMap::new();
    for x in 0..=bound {
        for y in 0..=x {
            if x + y > bound || (x + y) % 2 != 0 {
                continue;
            }
            let pt = Point::new(x, y);
            let index = (y == 0).then_some((x / 2 + 1) as usize);
            let label = match variant {
                GraphVariant::G => {
                    if y >= 1 {
                        regions.insert(pt, g_region_below(pt));
                        NodeLabel { index, minor: Some(g_node_minor(pt)) }
                    } else {
                        NodeLabel { index, minor: None }
                    }
                }
                GraphVariant::GPrime => {
                    if y >= 1 {
                        regions.insert(pt, gp_triangle_below(pt));
                    }
                    NodeLabel { index, minor: Some(gp_node_minor(pt)) }
                }
            };
            nodes.insert(pt, label);
        }
    }
    LabeledGraph { n, variant, nodes, regions }
}
