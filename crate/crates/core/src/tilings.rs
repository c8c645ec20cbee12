//! Colored half Aztec diamonds `HD_n(a, b)` and their domino tilings.
//!
//! Boxes are addressed by their lower-left corner. Bottom-row box `k`
//! (1-based, left to right) occupies `x ∈ [k-n-1, k-n]`, `y ∈ [0, 1]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{LaurentMonomial, MinorSymbol};
use crate::paths::{gp_node_minor, gp_triangle_below, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("HD_{n}({a}, {b}) needs 1 < a < b < 2n with a even and b odd")]
    InvalidParameters { n: usize, a: usize, b: usize },
    #[error("no flippable pair of dominoes at {0}")]
    NotFlippable(Point),
    #[error("dominoes do not tile the white region: {0}")]
    BadTiling(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellColor {
    Black,
    Grey,
    White,
}

pub type Cell = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfAztecDiamond {
    n: usize,
    a: usize,
    b: usize,
    cells: BTreeMap<Cell, CellColor>,
}

impl HalfAztecDiamond {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn color(&self, cell: Cell) -> Option<CellColor> {
        self.cells.get(&cell).copied()
    }

    pub fn is_white(&self, cell: Cell) -> bool {
        self.color(cell) == Some(CellColor::White)
    }

    pub fn cells(&self) -> impl Iterator<Item = (Cell, CellColor)> + '_ {
        self.cells.iter().map(|(c, k)| (*c, *k))
    }

    /// White boxes ordered lowest row first, then left to right.
    pub fn white_cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self.cells.iter().filter(|(_, k)| **k == CellColor::White).map(|(c, _)| *c).collect();
        cells.sort_by_key(|&(x, y)| (y, x));
        cells
    }

    /// Offset of `L_a` (slope 1): points left of it have `x - y < la`.
    fn la(&self) -> i64 {
        self.a as i64 - self.n as i64 - 2
    }

    /// Offset of `L_b` (slope -1): points right of it have `x + y > lb`.
    fn lb(&self) -> i64 {
        self.b as i64 - self.n as i64 + 1
    }

    /// Strictly between the two diagonal lines.
    pub fn is_interior(&self, pt: Point) -> bool {
        pt.x - pt.y > self.la() && pt.x + pt.y < self.lb()
    }

    /// The minor attached to lattice point `pt` by embedding `G'_n` into `HD_n`.
    pub fn label(&self, pt: Point) -> Option<MinorSymbol> {
        hd_label(self.n, pt)
    }

    /// Labeled interior points; these are the only points that enter a tiling weight.
    pub fn weighted_points(&self) -> Vec<(Point, MinorSymbol)> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for y in 1..=n {
            for x in -n..=n {
                let pt = Point::new(x, y);
                if self.is_interior(pt) {
                    if let Some(label) = self.label(pt) {
                        out.push((pt, label));
                    }
                }
            }
        }
        out
    }

    /// Whether the unit segment from `p` to `p + (dx, dy)` is a side of some box of `HD_n`.
    fn has_box_side(&self, p: Point, dx: i64, dy: i64) -> bool {
        let (x, y) = (p.x.min(p.x + dx), p.y.min(p.y + dy));
        if dy == 0 {
            self.cells.contains_key(&(x, y - 1)) || self.cells.contains_key(&(x, y))
        } else {
            self.cells.contains_key(&(x - 1, y)) || self.cells.contains_key(&(x, y))
        }
    }
}

/// Label of `HD_n` lattice point `pt` under `G'_n (x, y) ↦ (x + 2 - n, y + 1)`,
/// with the `p`-label of a triangle one unit below its apex.
pub fn hd_label(n: usize, pt: Point) -> Option<MinorSymbol> {
    let n = n as i64;
    if pt.y < 1 {
        return None;
    }
    let in_gp = |q: Point| q.y >= 0 && q.y <= q.x && q.x + q.y <= 2 * n - 4;
    if (pt.x + pt.y - n - 1).rem_euclid(2) == 0 {
        let node = Point::new(pt.x - 2 + n, pt.y - 1);
        in_gp(node).then(|| gp_node_minor(node))
    } else {
        let apex = Point::new(pt.x - 2 + n, pt.y);
        if in_gp(apex) {
            gp_triangle_below(apex)
        } else {
            None
        }
    }
}

pub fn build_diamond(n: usize, a: usize, b: usize) -> Result<HalfAztecDiamond, TilingError> {
    if !(1 < a && a < b && b < 2 * n && a.is_multiple_of(2) && b % 2 == 1) {
        return Err(TilingError::InvalidParameters { n, a, b });
    }
    let mut diamond = HalfAztecDiamond { n, a, b, cells: BTreeMap::new() };
    let (la, lb) = (diamond.la(), diamond.lb());
    let n_i = n as i64;
    for y in 0..n_i {
        for x in -(n_i - y)..(n_i - y) {
            // a box reaches left of L_a when its upper-left corner does, right of L_b via its upper-right
            let color = if y == 0 && (x == a as i64 - n_i - 1 || x == b as i64 - n_i - 1) {
                CellColor::Black
            } else if x - (y + 1) < la || (x + 1) + (y + 1) > lb {
                CellColor::Grey
            } else {
                CellColor::White
            };
            diamond.cells.insert((x, y), color);
        }
    }
    Ok(diamond)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

/// A domino anchored at its lower-left box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Domino {
    pub x: i64,
    pub y: i64,
    pub orient: Orientation,
}

impl Domino {
    pub fn cells(&self) -> [Cell; 2] {
        match self.orient {
            Orientation::H => [(self.x, self.y), (self.x + 1, self.y)],
            Orientation::V => [(self.x, self.y), (self.x, self.y + 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominoTiling {
    diamond: Arc<HalfAztecDiamond>,
    dominoes: Vec<Domino>,
}

impl DominoTiling {
    /// Validates that `dominoes` cover each white box exactly once and nothing else.
    pub fn new(diamond: Arc<HalfAztecDiamond>, mut dominoes: Vec<Domino>) -> Result<Self, TilingError> {
        dominoes.sort();
        let mut covered = BTreeSet::new();
        for d in &dominoes {
            for c in d.cells() {
                if !diamond.is_white(c) {
                    return Err(TilingError::BadTiling(format!("box {c:?} is not white")));
                }
                if !covered.insert(c) {
                    return Err(TilingError::BadTiling(format!("box {c:?} covered twice")));
                }
            }
        }
        let white = diamond.white_cells().len();
        if covered.len() != white {
            return Err(TilingError::BadTiling(format!("{} of {white} white boxes covered", covered.len())));
        }
        Ok(DominoTiling { diamond, dominoes })
    }

    pub fn diamond(&self) -> &HalfAztecDiamond {
        &self.diamond
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn has(&self, d: Domino) -> bool {
        self.dominoes.binary_search(&d).is_ok()
    }

    /// The domino covering `cell`, if any.
    pub fn covering(&self, cell: Cell) -> Option<Domino> {
        let (x, y) = cell;
        [
            Domino { x, y, orient: Orientation::H },
            Domino { x: x - 1, y, orient: Orientation::H },
            Domino { x, y, orient: Orientation::V },
            Domino { x, y: y - 1, orient: Orientation::V },
        ]
        .into_iter()
        .find(|d| self.has(*d))
    }

    /// Degree of lattice point `pt` in the graph of tile sides plus sides of untiled boxes.
    pub fn degree(&self, pt: Point) -> usize {
        let d = &self.diamond;
        let mut deg = 0;
        // right / left: horizontal segments, removed when they bisect a vertical domino
        for x0 in [pt.x, pt.x - 1] {
            let seg = Point::new(x0, pt.y);
            if d.has_box_side(seg, 1, 0) && !self.has(Domino { x: x0, y: pt.y - 1, orient: Orientation::V }) {
                deg += 1;
            }
        }
        for y0 in [pt.y, pt.y - 1] {
            let seg = Point::new(pt.x, y0);
            if d.has_box_side(seg, 0, 1) && !self.has(Domino { x: pt.x - 1, y: y0, orient: Orientation::H }) {
                deg += 1;
            }
        }
        deg
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.dominoes).expect("dominoes serialize")
    }

    /// ASCII picture, top row first: `#` black, `.` grey, `<>` horizontal and `^`/`v` vertical dominoes.
    pub fn render(&self) -> String {
        let n = self.diamond.n as i64;
        let mut out = String::new();
        for y in (0..n).rev() {
            for x in -n..n {
                let ch = match self.diamond.color((x, y)) {
                    None => ' ',
                    Some(CellColor::Black) => '#',
                    Some(CellColor::Grey) => '.',
                    Some(CellColor::White) => match self.covering((x, y)) {
                        Some(Domino { x: dx, orient: Orientation::H, .. }) if dx == x => '<',
                        Some(Domino { orient: Orientation::H, .. }) => '>',
                        Some(Domino { y: dy, orient: Orientation::V, .. }) if dy == y => 'v',
                        Some(Domino { orient: Orientation::V, .. }) => '^',
                        None => '?',
                    },
                };
                out.push(ch);
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for DominoTiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// All tilings of `HD_n(a, b)`: depth first on the lowest, then leftmost,
/// uncovered white box, trying a horizontal domino before a vertical one.
pub fn enumerate_tilings(n: usize, a: usize, b: usize) -> Result<Vec<DominoTiling>, TilingError> {
    let diamond = Arc::new(build_diamond(n, a, b)?);
    Ok(tilings_of(&diamond))
}

pub fn tilings_of(diamond: &Arc<HalfAztecDiamond>) -> Vec<DominoTiling> {
    let white = diamond.white_cells();
    let mut covered: BTreeSet<Cell> = BTreeSet::new();
    let mut placed = Vec::new();
    let mut out = Vec::new();

    fn rec(
        diamond: &Arc<HalfAztecDiamond>,
        white: &[Cell],
        covered: &mut BTreeSet<Cell>,
        placed: &mut Vec<Domino>,
        out: &mut Vec<DominoTiling>,
    ) {
        let Some(&(x, y)) = white.iter().find(|c| !covered.contains(c)) else {
            let mut dominoes = placed.clone();
            dominoes.sort();
            out.push(DominoTiling { diamond: Arc::clone(diamond), dominoes });
            return;
        };
        for d in [Domino { x, y, orient: Orientation::H }, Domino { x, y, orient: Orientation::V }] {
            let [_, other] = d.cells();
            if diamond.is_white(other) && !covered.contains(&other) {
                covered.insert((x, y));
                covered.insert(other);
                placed.push(d);
                rec(diamond, white, covered, placed, out);
                placed.pop();
                covered.remove(&other);
                covered.remove(&(x, y));
            }
        }
    }

    rec(diamond, &white, &mut covered, &mut placed, &mut out);
    out
}

/// `∏ v_ℓ^{d(ℓ) - 3}` over the labeled interior lattice points `ℓ`.
pub fn tiling_weight(tiling: &DominoTiling) -> LaurentMonomial {
    let mut w = LaurentMonomial::one();
    for (pt, label) in tiling.diamond.weighted_points() {
        w.mul_symbol(label, tiling.degree(pt) as i32 - 3);
    }
    w
}

/// Exchanges the two parallel dominoes filling the 2x2 block whose lower-left box is `anchor`.
pub fn flip(tiling: &DominoTiling, anchor: Point) -> Result<DominoTiling, TilingError> {
    let (x, y) = (anchor.x, anchor.y);
    let horizontal = [Domino { x, y, orient: Orientation::H }, Domino { x, y: y + 1, orient: Orientation::H }];
    let vertical = [Domino { x, y, orient: Orientation::V }, Domino { x: x + 1, y, orient: Orientation::V }];
    let (from, to) = if horizontal.iter().all(|d| tiling.has(*d)) {
        (horizontal, vertical)
    } else if vertical.iter().all(|d| tiling.has(*d)) {
        (vertical, horizontal)
    } else {
        return Err(TilingError::NotFlippable(anchor));
    };
    let mut dominoes: Vec<Domino> = tiling.dominoes.iter().copied().filter(|d| !from.contains(d)).collect();
    dominoes.extend(to);
    dominoes.sort();
    Ok(DominoTiling { diamond: Arc::clone(&tiling.diamond), dominoes })
}

/// Anchors of every 2x2 block of `tiling` that admits a flip.
pub fn flippable_anchors(tiling: &DominoTiling) -> Vec<Point> {
    let mut out = Vec::new();
    for d in tiling.dominoes() {
        let (x, y) = (d.x, d.y);
        let partner = match d.orient {
            Orientation::H => Domino { x, y: y + 1, orient: Orientation::H },
            Orientation::V => Domino { x: x + 1, y, orient: Orientation::V },
        };
        if tiling.has(partner) {
            out.push(Point::new(x, y));
        }
    }
    out
}

/// Weight ratio `W(flip(T)) / W(T)` predicted for a horizontal-to-vertical flip
/// at `anchor`: `b h / (d f)` with `b, h` below/above and `d, f` left/right of the block center.
pub fn flip_factor(diamond: &HalfAztecDiamond, anchor: Point) -> LaurentMonomial {
    let center = Point::new(anchor.x + 1, anchor.y + 1);
    let mut w = LaurentMonomial::one();
    let around = [
        (Point::new(center.x, center.y - 1), 1),
        (Point::new(center.x, center.y + 1), 1),
        (Point::new(center.x - 1, center.y), -1),
        (Point::new(center.x + 1, center.y), -1),
    ];
    for (pt, exp) in around {
        if diamond.is_interior(pt) {
            w.mul_opt(diamond.label(pt), exp);
        }
    }
    w
}
