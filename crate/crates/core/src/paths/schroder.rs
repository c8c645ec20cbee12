use serde::{Deserialize, Serialize};

use super::{gp_node_minor, gp_triangle_below, walk, PathError, PathRecord, Point, Step};
use crate::algebra::LaurentMonomial;

/// A NE/SE/H path in `G'_n` between two nodes on the x-axis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PathRecord", into = "PathRecord")]
pub struct SchroderPath {
    n: usize,
    start: usize,
    steps: Vec<Step>,
}

impl SchroderPath {
    pub fn new(n: usize, start: usize, steps: Vec<Step>) -> Result<Self, PathError> {
        if n < 2 || start < 1 || start > n - 1 {
            return Err(PathError::InvalidNode { n, from: start, to: start });
        }
        let bound = 2 * n as i64 - 4;
        let mut cur = Point::node(start);
        for &s in &steps {
            cur = cur.step(s);
            if cur.y < 0 || cur.y > cur.x || cur.x + cur.y > bound {
                return Err(PathError::OutOfGraph(cur.x, cur.y));
            }
        }
        if cur.y != 0 {
            return Err(PathError::BadEndpoint);
        }
        Ok(SchroderPath { n, start, steps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end_node(&self) -> usize {
        let width: i64 = self.steps.iter().map(|s| s.delta().0).sum();
        self.start + (width / 2) as usize
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn points(&self) -> Vec<Point> {
        walk(Point::node(self.start), &self.steps)
    }

    pub fn horizontal_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::H).count()
    }

    /// Per-vertex shape used by the weight.
    pub fn vertex_kinds(&self) -> Vec<VertexKind> {
        let pts = self.points();
        let m = self.steps.len();
        (0..=m)
            .map(|k| {
                let here = pts[k].y;
                let neighbors: Vec<i64> = [k.checked_sub(1), (k < m).then_some(k + 1)]
                    .into_iter()
                    .flatten()
                    .map(|q| pts[q].y)
                    .collect();
                let interior = neighbors.len() == 2;
                VertexKind {
                    weak_max: neighbors.iter().all(|&y| y <= here),
                    weak_min: neighbors.iter().all(|&y| y >= here),
                    strict_max: interior && neighbors.iter().all(|&y| y < here),
                    strict_min: interior && neighbors.iter().all(|&y| y > here),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexKind {
    pub weak_max: bool,
    pub weak_min: bool,
    pub strict_max: bool,
    pub strict_min: bool,
}

impl TryFrom<PathRecord> for SchroderPath {
    type Error = PathError;

    fn try_from(r: PathRecord) -> Result<Self, Self::Error> {
        SchroderPath::new(r.n, r.start, r.steps)
    }
}

impl From<SchroderPath> for PathRecord {
    fn from(p: SchroderPath) -> Self {
        PathRecord { n: p.n, start: p.start, steps: p.steps }
    }
}

/// Visits every Schröder path from node `a` to node `b` in `G'_n`, ordered NE < SE < H.
pub fn for_each_schroder<F: FnMut(SchroderPath)>(n: usize, a: usize, b: usize, mut visit: F) -> Result<(), PathError> {
    if n < 2 || a < 1 || b > n - 1 || a > b {
        return Err(PathError::InvalidNode { n, from: a, to: b });
    }
    let width = 2 * (b - a);
    let mut steps = Vec::new();
    fn rec<F: FnMut(SchroderPath)>(
        n: usize,
        a: usize,
        remaining: usize,
        height: usize,
        steps: &mut Vec<Step>,
        visit: &mut F,
    ) {
        if remaining == 0 {
            visit(SchroderPath { n, start: a, steps: steps.clone() });
            return;
        }
        if height < remaining - 1 {
            steps.push(Step::Ne);
            rec(n, a, remaining - 1, height + 1, steps, visit);
            steps.pop();
        }
        if height > 0 {
            steps.push(Step::Se);
            rec(n, a, remaining - 1, height - 1, steps, visit);
            steps.pop();
        }
        if remaining >= 2 + height {
            steps.push(Step::H);
            rec(n, a, remaining - 2, height, steps, visit);
            steps.pop();
        }
    }
    rec(n, a, width, 0, &mut steps, &mut visit);
    Ok(())
}

pub fn enumerate_schroder(n: usize, a: usize, b: usize) -> Result<Vec<SchroderPath>, PathError> {
    let mut out = Vec::new();
    for_each_schroder(n, a, b, |p| out.push(p))?;
    Ok(out)
}

/// Schröder weight `αβ / (γδεζ)`.
///
/// * α: node labels of weak local maxima (endpoints included, so the
///   one-vertex path weighs `a_{k+1,k}`);
/// * β: triangle below each weak local minimum above the axis;
/// * γ: triangle above each horizontal edge;
/// * δ: node directly below each horizontal edge above the axis;
/// * ε: triangle below each strict local maximum;
/// * ζ: node label of each interior strict local minimum.
pub fn schroder_weight(path: &SchroderPath) -> LaurentMonomial {
    let pts = path.points();
    let mut w = LaurentMonomial::one();
    for (pt, kind) in pts.iter().zip(path.vertex_kinds()) {
        if kind.weak_max {
            w.mul_symbol(gp_node_minor(*pt), 1);
        }
        if kind.weak_min && pt.y > 0 {
            w.mul_opt(gp_triangle_below(*pt), 1);
        }
        if kind.strict_max {
            w.mul_opt(gp_triangle_below(*pt), -1);
        }
        if kind.strict_min {
            w.mul_symbol(gp_node_minor(*pt), -1);
        }
    }
    for (k, &s) in path.steps.iter().enumerate() {
        if s != Step::H {
            continue;
        }
        let from = pts[k];
        w.mul_opt(gp_triangle_below(Point::new(from.x + 1, from.y + 1)), -1);
        if from.y >= 1 {
            w.mul_symbol(gp_node_minor(Point::new(from.x + 1, from.y - 1)), -1);
        }
    }
    w
}
