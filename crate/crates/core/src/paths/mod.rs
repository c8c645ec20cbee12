//! Lattice paths on the labeled graphs `G_n` (Catalan) and `G'_n` (Schröder).
//!
//! Coordinates are the usual ones: a node `k` sits at `(2k-2, 0)`, steps are
//! NE `(1,1)`, SE `(1,-1)` and, for Schröder paths only, H `(2,0)`.

mod catalan;
mod graph;
mod schroder;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalan::{catalan_weight, enumerate_catalan, for_each_catalan, CatalanPath};
pub use graph::{
    g_node_minor, g_region_below, gp_node_minor, gp_triangle_below, graph_labels, GraphVariant, LabeledGraph,
    NodeLabel,
};
pub use schroder::{enumerate_schroder, for_each_schroder, schroder_weight, SchroderPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("invalid node range {from}..{to} for n = {n}")]
    InvalidNode { n: usize, from: usize, to: usize },
    #[error("the empty path has no weight")]
    EmptyPath,
    #[error("step {0} is not allowed here")]
    IllegalStep(Step),
    #[error("path leaves the graph at ({0}, {1})")]
    OutOfGraph(i64, i64),
    #[error("path does not end on a node of the x-axis")]
    BadEndpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "NE")]
    Ne,
    #[serde(rename = "SE")]
    Se,
    #[serde(rename = "H")]
    H,
}

impl Step {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Step::Ne => (1, 1),
            Step::Se => (1, -1),
            Step::H => (2, 0),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::Ne => "NE",
            Step::Se => "SE",
            Step::H => "H",
        })
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NE" => Ok(Step::Ne),
            "SE" => Ok(Step::Se),
            "H" => Ok(Step::H),
            other => Err(format!("unknown step {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn node(k: usize) -> Self {
        Point::new(2 * k as i64 - 2, 0)
    }

    pub fn step(self, s: Step) -> Self {
        let (dx, dy) = s.delta();
        Point::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Wire form shared by both path kinds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub n: usize,
    pub start: usize,
    pub steps: Vec<Step>,
}

pub(crate) fn walk(start: Point, steps: &[Step]) -> Vec<Point> {
    let mut pts = Vec::with_capacity(steps.len() + 1);
    let mut cur = start;
    pts.push(cur);
    for &s in steps {
        cur = cur.step(s);
        pts.push(cur);
    }
    pts
}
