//! The maps between tilings, Schröder paths and Catalan paths.
//!
//! `phi` walks a tiling of `HD_n(2j, 2i-1)` into a Schröder path of
//! `𝒮_n(j, i-1)`; `pi` projects Schröder paths onto Catalan paths by turning
//! every horizontal step into a valley. The local move toggles one valley
//! against one horizontal step and rescales the weight by a ratio of four
//! principal minors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{LaurentMonomial, LaurentPolynomial, MinorSymbol};
use crate::paths::{
    gp_node_minor, gp_triangle_below, schroder_weight, CatalanPath, PathError, Point, SchroderPath, Step,
};
use crate::tilings::{Domino, DominoTiling, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("no tiling rule applies at {0}")]
    MalformedTiling(Point),
    #[error("position {0} is neither a valley nor a horizontal step that can be lowered")]
    InvalidSite(usize),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Schröder path read off a tiling of `HD_n(2j, 2i-1)`.
///
/// Starting at the top-right corner of bottom box `2j`, look at the box to the
/// south-east of the current corner: the lower half of a vertical domino gives
/// NE, the upper half gives SE, the left half of a horizontal domino gives H.
pub fn phi(tiling: &DominoTiling) -> Result<SchroderPath, CorrespondenceError> {
    let d = tiling.diamond();
    let n = d.n() as i64;
    let j = d.a() as i64 / 2;
    let i = (d.b() as i64 + 1) / 2;
    let stop = Point::new(2 * i - 2 - n, 1);
    let mut cur = Point::new(2 * j - n, 1);
    let mut steps = Vec::new();
    while cur != stop {
        if cur.x > stop.x {
            return Err(CorrespondenceError::MalformedTiling(cur));
        }
        let cell = (cur.x, cur.y - 1);
        let step = match tiling.covering(cell) {
            Some(Domino { x, y, orient: Orientation::V }) if (x, y) == cell => Step::Ne,
            Some(Domino { x, y, orient: Orientation::V }) if (x, y + 1) == cell => Step::Se,
            Some(Domino { x, y, orient: Orientation::H }) if (x, y) == cell => Step::H,
            _ => return Err(CorrespondenceError::MalformedTiling(cur)),
        };
        steps.push(step);
        cur = cur.step(step);
    }
    Ok(SchroderPath::new(d.n(), j as usize, steps)?)
}

/// Catalan path from node `a` to node `b + 1`: a leading NE, each H replaced by SE,NE, a trailing SE.
pub fn pi(path: &SchroderPath) -> CatalanPath {
    let mut steps = vec![Step::Ne];
    for &s in path.steps() {
        match s {
            Step::H => steps.extend([Step::Se, Step::Ne]),
            other => steps.push(other),
        }
    }
    steps.push(Step::Se);
    CatalanPath::new(path.n(), path.start(), steps).expect("projection stays inside G_n")
}

/// Valleys of `c` as step indices `k` with `steps[k-1] = SE`, `steps[k] = NE`,
/// split by whether the valley touches the axis.
fn valleys(c: &CatalanPath) -> Vec<(usize, bool)> {
    let pts = c.points();
    let steps = c.steps();
    (1..steps.len())
        .filter(|&k| steps[k - 1] == Step::Se && steps[k] == Step::Ne)
        .map(|k| (k, pts[k].y == 0))
        .collect()
}

/// Number of valleys of `c` strictly above the axis; `pi_preimage(c)` has `2^m` elements.
pub fn free_minima(c: &CatalanPath) -> usize {
    valleys(c).iter().filter(|(_, ground)| !ground).count()
}

/// All Schröder paths projecting to `c`, ordered by the binary word
/// `d_1 … d_m` over the valleys above the axis (`d_k = 1` turns valley `k` into H).
/// Valleys on the axis are always horizontal steps.
pub fn pi_preimage(c: &CatalanPath) -> Vec<SchroderPath> {
    let steps = c.steps();
    if steps.is_empty() {
        return Vec::new();
    }
    let vs = valleys(c);
    let free: Vec<usize> = vs.iter().filter(|(_, g)| !g).map(|(k, _)| *k).collect();
    let forced: Vec<usize> = vs.iter().filter(|(_, g)| *g).map(|(k, _)| *k).collect();
    let m = free.len();
    let inner = &steps[1..steps.len() - 1];
    (0u64..1 << m)
        .map(|word| {
            let toggled = |k: usize| {
                forced.contains(&k)
                    || free.iter().position(|&f| f == k).is_some_and(|pos| word >> (m - 1 - pos) & 1 == 1)
            };
            let mut out = Vec::with_capacity(inner.len());
            let mut t = 0;
            while t < inner.len() {
                // inner[t] is steps[t + 1]; a valley at k spans steps k-1 and k
                if inner[t] == Step::Se && t + 1 < inner.len() && toggled(t + 2) {
                    out.push(Step::H);
                    t += 2;
                } else {
                    out.push(inner[t]);
                    t += 1;
                }
            }
            SchroderPath::new(c.n(), c.start(), out).expect("preimage is a valid Schröder path")
        })
        .collect()
}

/// A valley or a horizontal step of a Schröder path, addressed by step index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMoveSite {
    pub path: SchroderPath,
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SiteKind {
    Valley,
    Horizontal,
}

impl LocalMoveSite {
    pub fn new(path: SchroderPath, position: usize) -> Result<Self, CorrespondenceError> {
        let site = LocalMoveSite { path, position };
        site.kind()?;
        Ok(site)
    }

    fn kind(&self) -> Result<SiteKind, CorrespondenceError> {
        let steps = self.path.steps();
        let k = self.position;
        match (steps.get(k), steps.get(k + 1)) {
            (Some(Step::Se), Some(Step::Ne)) => Ok(SiteKind::Valley),
            (Some(Step::H), _) if self.path.points()[k].y >= 1 => Ok(SiteKind::Horizontal),
            _ => Err(CorrespondenceError::InvalidSite(k)),
        }
    }

    /// The `G'_n` node at the bottom of the valley form of this site.
    pub fn valley_point(&self) -> Point {
        // both the SE step of a valley and an H step start one level above it
        let from = self.path.points()[self.position];
        Point::new(from.x + 1, from.y - 1)
    }

    pub fn is_valley(&self) -> bool {
        self.kind() == Ok(SiteKind::Valley)
    }
}

/// Every valley and every raised horizontal step of `path`.
pub fn move_sites(path: &SchroderPath) -> Vec<LocalMoveSite> {
    (0..path.steps().len())
        .filter_map(|k| LocalMoveSite::new(path.clone(), k).ok())
        .collect()
}

/// Replaces a valley `SE,NE` by `H`, or an `H` above the axis by `SE,NE`.
pub fn local_move(site: &LocalMoveSite) -> Result<SchroderPath, CorrespondenceError> {
    let k = site.position;
    let mut steps = site.path.steps().to_vec();
    match site.kind()? {
        SiteKind::Valley => {
            steps.splice(k..k + 2, [Step::H]);
        }
        SiteKind::Horizontal => {
            steps.splice(k..k + 1, [Step::Se, Step::Ne]);
        }
    }
    Ok(SchroderPath::new(site.path.n(), site.path.start(), steps)?)
}

/// The four principal minors around the valley node `e`:
/// `b` below `e`, `h` two levels above it, `d` and `f` at its upper-left and upper-right.
pub fn move_labels(e: Point) -> [Option<MinorSymbol>; 4] {
    let b = gp_triangle_below(e);
    let h = gp_triangle_below(Point::new(e.x, e.y + 2));
    let d = gp_triangle_below(Point::new(e.x - 1, e.y + 1));
    let f = gp_triangle_below(Point::new(e.x + 1, e.y + 1));
    [b, h, d, f]
}

/// `W(S with H) / W(S with valley) = d f / (b h)`.
pub fn move_factor(e: Point) -> LaurentMonomial {
    let [b, h, d, f] = move_labels(e);
    let mut w = LaurentMonomial::one();
    w.mul_opt(d, 1);
    w.mul_opt(f, 1);
    w.mul_opt(b, -1);
    w.mul_opt(h, -1);
    w
}

/// Rewrites every `a_{ij|I}` with `i > j` as `a_{ji|I}`, the identification valid for symmetric matrices.
pub fn symmetrize(mono: &LaurentMonomial) -> LaurentMonomial {
    mono.iter()
        .map(|(s, e)| match s {
            MinorSymbol::AlmostPrincipal { i, j, cond } if i > j => {
                (MinorSymbol::AlmostPrincipal { i: *j, j: *i, cond: cond.clone() }, e)
            }
            other => (other.clone(), e),
        })
        .collect()
}

/// Sum of Schröder weights over the π-fiber of `c`.
pub fn fiber_weight_sum(c: &CatalanPath) -> LaurentPolynomial {
    pi_preimage(c).iter().map(schroder_weight).collect()
}

/// The fiber sum after substituting `bh + df = e²` at every free valley:
/// `W(S_0) ∏ e² / (b h)` where `S_0` keeps all free valleys. Symmetrized.
pub fn reduced_fiber_weight(c: &CatalanPath) -> Option<LaurentMonomial> {
    let s0 = pi_preimage(c).into_iter().next()?;
    let mut w = schroder_weight(&s0);
    for site in move_sites(&s0).into_iter().filter(|s| s.is_valley()) {
        let e = site.valley_point();
        let [b, h, _, _] = move_labels(e);
        w.mul_symbol(gp_node_minor(e), 2);
        w.mul_opt(b, -1);
        w.mul_opt(h, -1);
    }
    Some(symmetrize(&w))
}
