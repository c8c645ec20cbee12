use serde::{Deserialize, Serialize};

use super::{g_node_minor, g_region_below, walk, PathError, PathRecord, Point, Step};
use crate::algebra::LaurentMonomial;

/// A NE/SE path in `G_n` between two nodes on the x-axis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PathRecord", into = "PathRecord")]
pub struct CatalanPath {
    n: usize,
    start: usize,
    steps: Vec<Step>,
}

impl CatalanPath {
    pub fn new(n: usize, start: usize, steps: Vec<Step>) -> Result<Self, PathError> {
        if n < 1 || start < 1 || start > n {
            return Err(PathError::InvalidNode { n, from: start, to: start });
        }
        let bound = 2 * n as i64 - 2;
        let mut cur = Point::node(start);
        for &s in &steps {
            if s == Step::H {
                return Err(PathError::IllegalStep(s));
            }
            cur = cur.step(s);
            if cur.y < 0 || cur.y > cur.x || cur.x + cur.y > bound {
                return Err(PathError::OutOfGraph(cur.x, cur.y));
            }
        }
        if cur.y != 0 {
            return Err(PathError::BadEndpoint);
        }
        Ok(CatalanPath { n, start, steps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end_node(&self) -> usize {
        self.start + self.steps.len() / 2
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn points(&self) -> Vec<Point> {
        walk(Point::node(self.start), &self.steps)
    }

    /// Interior vertices where a SE step is followed by a NE step.
    pub fn strict_minima(&self) -> Vec<Point> {
        let pts = self.points();
        (1..self.steps.len())
            .filter(|&k| self.steps[k - 1] == Step::Se && self.steps[k] == Step::Ne)
            .map(|k| pts[k])
            .collect()
    }

    pub fn strict_maxima(&self) -> Vec<Point> {
        let pts = self.points();
        (1..self.steps.len())
            .filter(|&k| self.steps[k - 1] == Step::Ne && self.steps[k] == Step::Se)
            .map(|k| pts[k])
            .collect()
    }
}

impl TryFrom<PathRecord> for CatalanPath {
    type Error = PathError;

    fn try_from(r: PathRecord) -> Result<Self, Self::Error> {
        CatalanPath::new(r.n, r.start, r.steps)
    }
}

impl From<CatalanPath> for PathRecord {
    fn from(p: CatalanPath) -> Self {
        PathRecord { n: p.n, start: p.start, steps: p.steps }
    }
}

/// Visits every Catalan path from node `i` to node `j` in `G_n`, NE before SE.
pub fn for_each_catalan<F: FnMut(CatalanPath)>(n: usize, i: usize, j: usize, mut visit: F) -> Result<(), PathError> {
    if i < 1 || j > n || i > j {
        return Err(PathError::InvalidNode { n, from: i, to: j });
    }
    let len = 2 * (j - i);
    let mut steps = Vec::with_capacity(len);
    fn rec<F: FnMut(CatalanPath)>(n: usize, i: usize, len: usize, height: usize, steps: &mut Vec<Step>, visit: &mut F) {
        let remaining = len - steps.len();
        if remaining == 0 {
            visit(CatalanPath { n, start: i, steps: steps.clone() });
            return;
        }
        if height < remaining {
            steps.push(Step::Ne);
            rec(n, i, len, height + 1, steps, visit);
            steps.pop();
        }
        if height > 0 {
            steps.push(Step::Se);
            rec(n, i, len, height - 1, steps, visit);
            steps.pop();
        }
    }
    rec(n, i, len, 0, &mut steps, &mut visit);
    Ok(())
}

pub fn enumerate_catalan(n: usize, i: usize, j: usize) -> Result<Vec<CatalanPath>, PathError> {
    let mut out = Vec::new();
    for_each_catalan(n, i, j, |p| out.push(p))?;
    Ok(out)
}

/// Weight of a Catalan path: `a`-labels of interior extrema over the `p`-labels
/// of the regions below maxima and above minima. Minima on the x-axis carry a
/// node index, so only their region contributes.
pub fn catalan_weight(path: &CatalanPath) -> Result<LaurentMonomial, PathError> {
    if path.steps.is_empty() {
        return Err(PathError::EmptyPath);
    }
    let mut w = LaurentMonomial::one();
    for pt in path.strict_maxima() {
        w.mul_symbol(g_node_minor(pt), 1);
        w.mul_opt(g_region_below(pt), -1);
    }
    for pt in path.strict_minima() {
        if pt.y >= 1 {
            w.mul_symbol(g_node_minor(pt), 1);
        }
        w.mul_opt(g_region_below(Point::new(pt.x, pt.y + 2)), -1);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Step::{Ne, Se};

    /// Independent enumeration: all 2^L NE/SE words, filtered.
    fn brute_force(n: usize, i: usize, j: usize) -> Vec<Vec<Step>> {
        let len = 2 * (j - i);
        let mut out = Vec::new();
        for mask in 0u32..(1 << len) {
            // bit set = SE; iterate masks so that lexicographic NE < SE matches
            let steps: Vec<Step> = (0..len).map(|k| if mask >> (len - 1 - k) & 1 == 1 { Se } else { Ne }).collect();
            if CatalanPath::new(n, i, steps.clone()).map(|p| p.end_node() == j).unwrap_or(false) {
                out.push(steps);
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 2..=7 {
            for i in 1..=n {
                for j in i..=n {
                    let fast: Vec<Vec<Step>> =
                        enumerate_catalan(n, i, j).unwrap().into_iter().map(|p| p.steps).collect();
                    assert_eq!(fast, brute_force(n, i, j), "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(enumerate_catalan(4, 1, 4).unwrap().len(), 5);
        let one = enumerate_catalan(5, 2, 3).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].steps(), &[Ne, Se]);
        let empty = enumerate_catalan(5, 3, 3).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].steps().is_empty());
        assert_eq!(catalan_weight(&empty[0]), Err(PathError::EmptyPath));
    }

    #[test]
    fn invalid_nodes() {
        assert!(enumerate_catalan(4, 0, 2).is_err());
        assert!(enumerate_catalan(4, 3, 2).is_err());
        assert!(enumerate_catalan(4, 1, 5).is_err());
    }

    #[test]
    fn figure_one_weight() {
        let c = CatalanPath::new(4, 1, vec![Ne, Ne, Se, Ne, Se, Se]).unwrap();
        assert_eq!(c.end_node(), 4);
        assert_eq!(
            catalan_weight(&c).unwrap().to_string(),
            "a[1,3|2]^1 * a[2,3]^1 * a[2,4|3]^1 * p[2]^-1 * p[2,3]^-1 * p[3]^-1"
        );
    }

    #[test]
    fn two_step_and_peak_weights() {
        for i in 1..6 {
            let c = CatalanPath::new(6, i, vec![Ne, Se]).unwrap();
            assert_eq!(catalan_weight(&c).unwrap(), LaurentMonomial::var(crate::algebra::MinorSymbol::a(i, i + 1, &[])));
        }
        let peak = CatalanPath::new(4, 1, vec![Ne, Ne, Ne, Se, Se, Se]).unwrap();
        assert_eq!(catalan_weight(&peak).unwrap().to_string(), "a[1,4|2,3]^1 * p[2,3]^-1");
    }

    #[test]
    fn rejects_bad_paths() {
        assert!(CatalanPath::new(4, 1, vec![Se, Ne]).is_err());
        assert!(CatalanPath::new(4, 1, vec![Ne]).is_err());
        assert!(CatalanPath::new(4, 1, vec![Step::H]).is_err());
        assert!(CatalanPath::new(3, 2, vec![Ne, Ne, Se, Se]).is_err());
    }

    #[test]
    fn weights_have_degree_at_most_one() {
        for n in 2..=8 {
            for_each_catalan(n, 1, n, |c| {
                assert!(catalan_weight(&c).unwrap().degree() <= 1);
                assert_eq!(c.strict_maxima().len(), c.strict_minima().len() + 1);
            })
            .unwrap();
        }
    }

    #[test]
    fn json_encoding() {
        let c = CatalanPath::new(4, 1, vec![Ne, Ne, Se, Ne, Se, Se]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"n":4,"start":1,"steps":["NE","NE","SE","NE","SE","SE"]}"#);
        assert_eq!(serde_json::from_str::<CatalanPath>(&text).unwrap(), c);
        assert!(serde_json::from_str::<CatalanPath>(r#"{"n":4,"start":1,"steps":["SE"]}"#).is_err());
    }
}
