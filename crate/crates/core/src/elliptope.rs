//! The D-vine parametrization of the open elliptope.
//!
//! A vector of connected partial correlations `ρ_{ij|i+1..j-1}` in the open
//! cube is sent to a correlation matrix by substituting
//!
//! * `p_{r..s} = (-1)^{⌊(s-r+1)/2⌋} P[r..s]`, `P[r..s] = ∏_{r≤i<j≤s} (1 - ρ_{ij|I}²)`,
//! * `a_{ij|I} = (-1)^{⌈|I|/2⌉} ρ_{ij|I} √(P[i..j-1] P[i+1..j])`
//!
//! into the Catalan entry formulas. The inverse reads partial correlations off
//! exact minors of the matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{exact_sqrt, IndexSet, MinorSymbol};
use crate::minors::{is_positive_definite, partial_correlation_unchecked, MinorError, SquareMatrix};
use crate::random::Seeded;
use crate::reconstruct::{catalan_formulas, EntryFormula};

/// Smallest accepted Cholesky pivot, relative to the largest diagonal entry.
pub const PD_TOLERANCE: f64 = 1e-12;

/// Allowed deviation from unit diagonal and symmetry when reading a matrix.
pub const SHAPE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElliptopeError {
    #[error("rho[{i},{j}] = {value} is not in (-1, 1)")]
    OutOfRange { i: usize, j: usize, value: f64 },
    #[error("expected {expected} partial correlations for n = {n}, found {found}")]
    WrongCount { n: usize, expected: usize, found: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl From<MinorError> for ElliptopeError {
    fn from(e: MinorError) -> Self {
        match e {
            MinorError::NotPositiveDefinite(_) => ElliptopeError::NotPositiveDefinite,
            other => ElliptopeError::Malformed(other.to_string()),
        }
    }
}

/// `ρ_{ij|I}` for every `i < j`, conditioning on the interval between them.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialCorrelationVector {
    n: usize,
    rho: BTreeMap<(usize, usize), f64>,
}

impl PartialCorrelationVector {
    pub fn new(n: usize, rho: BTreeMap<(usize, usize), f64>) -> Result<Self, ElliptopeError> {
        let expected = n * n.saturating_sub(1) / 2;
        let valid_keys = rho.keys().all(|&(i, j)| 1 <= i && i < j && j <= n);
        if rho.len() != expected || !valid_keys {
            return Err(ElliptopeError::WrongCount { n, expected, found: rho.len() });
        }
        for (&(i, j), &value) in &rho {
            if value.is_nan() || value.abs() >= 1.0 {
                return Err(ElliptopeError::OutOfRange { i, j, value });
            }
        }
        Ok(PartialCorrelationVector { n, rho })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, ElliptopeError> {
        let mut rho = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                rho.insert((i, j), f(i, j));
            }
        }
        Self::new(n, rho)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| 0.0).expect("zero vector is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rho[&(i.min(j), i.max(j))]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.rho.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.rho.iter().map(|(k, v)| (v - other.rho[k]).abs()).fold(0.0, f64::max)
    }

    /// JSON object keyed by `"i,j"`.
    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, f64> = self.rho.iter().map(|(&(i, j), &v)| (format!("{i},{j}"), v)).collect();
        serde_json::to_string(&map).expect("float map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ElliptopeError> {
        let raw: BTreeMap<String, f64> =
            serde_json::from_str(text).map_err(|e| ElliptopeError::Malformed(e.to_string()))?;
        let mut rho = BTreeMap::new();
        for (key, v) in raw {
            let bad = || ElliptopeError::Malformed(format!("bad key {key:?}"));
            let (i, j) = key.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            rho.insert((i, j), v);
        }
        let n = rho.keys().map(|&(_, j)| j).max().unwrap_or(1);
        Self::new(n, rho)
    }
}

/// A unit-diagonal symmetric positive definite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    y: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, ElliptopeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ElliptopeError::Malformed("matrix is not square".into()));
        }
        let y: Vec<f64> = rows.into_iter().flatten().collect();
        let m = CorrelationMatrix { n, y };
        for i in 1..=n {
            if (m.get(i, i) - 1.0).abs() > SHAPE_TOLERANCE {
                return Err(ElliptopeError::Malformed(format!("diagonal entry {i} is {}", m.get(i, i))));
            }
            for j in i + 1..=n {
                if (m.get(i, j) - m.get(j, i)).abs() > SHAPE_TOLERANCE {
                    return Err(ElliptopeError::Malformed(format!("not symmetric at ({i}, {j})")));
                }
                if m.get(i, j).is_nan() || m.get(i, j).abs() >= 1.0 {
                    return Err(ElliptopeError::NotPositiveDefinite);
                }
            }
        }
        if cholesky(&m.rows()).is_none() {
            return Err(ElliptopeError::NotPositiveDefinite);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.y[(i - 1) * self.n + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.y.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        CorrelationMatrix::new(rows).expect("identity is a correlation matrix")
    }

    pub fn determinant(&self) -> f64 {
        determinant(&self.rows())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.y.iter().zip(&other.y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Exact rational copy of the stored binary64 entries.
    pub fn to_exact(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.n, |i, j| {
            BigRational::from_float(self.get(i, j)).expect("finite entries")
        })
    }

    /// Row-major array of floats.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows()).expect("float rows serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ElliptopeError> {
        let rows: Vec<Vec<f64>> = serde_json::from_str(text).map_err(|e| ElliptopeError::Malformed(e.to_string()))?;
        Self::new(rows)
    }
}

impl fmt::Display for CorrelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>10.6}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Lower Cholesky factor, or `None` when a pivot falls below `PD_TOLERANCE` times the largest diagonal.
pub fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let scale = (0..n).map(|i| a[i][i]).fold(0.0, f64::max);
    if n > 0 && (scale.is_nan() || scale <= 0.0) {
        return None;
    }
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let pivot = a[i][i] - s;
                if pivot.is_nan() || pivot <= PD_TOLERANCE * scale {
                    return None;
                }
                l[i][i] = pivot.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// LU determinant with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for p in 0..n {
        let pivot = (p..n).max_by(|&r, &s| m[r][p].abs().total_cmp(&m[s][p].abs())).expect("non-empty");
        if m[pivot][p] == 0.0 {
            return 0.0;
        }
        if pivot != p {
            m.swap(pivot, p);
            det = -det;
        }
        det *= m[p][p];
        let (top, rest) = m.split_at_mut(p + 1);
        let pivot_row = &top[p];
        for row in rest {
            let factor = row[p] / pivot_row[p];
            for (x, y) in row[p..].iter_mut().zip(&pivot_row[p..]) {
                *x -= factor * y;
            }
        }
    }
    det
}

/// `P[r..s]` for all `1 ≤ r ≤ s ≤ n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMinorCache {
    n: usize,
    p: BTreeMap<(usize, usize), f64>,
}

impl BlockMinorCache {
    /// `P[r..s]`, the unsigned product.
    pub fn get(&self, r: usize, s: usize) -> f64 {
        self.p[&(r, s)]
    }

    /// The signed principal minor `p_{r..s}`.
    pub fn signed(&self, r: usize, s: usize) -> f64 {
        let sign = if (s - r).div_ceil(2) % 2 == 1 { -1.0 } else { 1.0 };
        sign * self.get(r, s)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn block_products(v: &PartialCorrelationVector) -> BlockMinorCache {
    let n = v.n;
    let mut p = BTreeMap::new();
    for r in 1..=n {
        p.insert((r, r), 1.0);
        for s in r + 1..=n {
            // extend [r..s-1] by the pairs (i, s)
            let mut acc = p[&(r, s - 1)];
            for i in r..s {
                let rho = v.get(i, s);
                acc *= 1.0 - rho * rho;
            }
            p.insert((r, s), acc);
        }
    }
    BlockMinorCache { n, p }
}

/// Value of a connected symbol under the substitution, for `i < j` almost-principal labels or either order.
fn substituted(v: &PartialCorrelationVector, cache: &BlockMinorCache, sym: &MinorSymbol) -> Option<f64> {
    match sym {
        MinorSymbol::Principal(set) => {
            let s = set.as_slice();
            if !set.is_contiguous() {
                return None;
            }
            Some(if s.len() == 1 { 1.0 } else { cache.signed(s[0], s[s.len() - 1]) })
        }
        MinorSymbol::AlmostPrincipal { i, j, cond } => {
            let (lo, hi) = ((*i).min(*j), (*i).max(*j));
            if *cond != IndexSet::between(lo, hi) {
                return None;
            }
            let sign = if cond.len().div_ceil(2) % 2 == 1 { -1.0 } else { 1.0 };
            Some(sign * v.get(lo, hi) * (cache.get(lo, hi - 1) * cache.get(lo + 1, hi)).sqrt())
        }
    }
}

/// Ψ for a fixed `n`, holding the Catalan formulas.
#[derive(Clone, Debug)]
pub struct Psi {
    n: usize,
    formulas: Vec<EntryFormula>,
}

impl Psi {
    pub fn new(n: usize) -> Self {
        Psi { n, formulas: catalan_formulas(n) }
    }

    pub fn apply(&self, v: &PartialCorrelationVector) -> Result<CorrelationMatrix, ElliptopeError> {
        if v.n != self.n {
            return Err(ElliptopeError::Malformed(format!("vector has n = {}, map has n = {}", v.n, self.n)));
        }
        let cache = block_products(v);
        let mut rows = vec![vec![0.0; self.n]; self.n];
        for f in &self.formulas {
            let y: f64 = f
                .poly
                .evaluate(|s| substituted(v, &cache, s))
                .map_err(|e| ElliptopeError::Malformed(e.to_string()))?;
            rows[f.i - 1][f.j - 1] = y;
            rows[f.j - 1][f.i - 1] = y;
        }
        CorrelationMatrix::new(rows)
    }
}

pub fn psi(v: &PartialCorrelationVector) -> Result<CorrelationMatrix, ElliptopeError> {
    Psi::new(v.n).apply(v)
}

/// Ψ in exact arithmetic; `None` unless every `1 - ρ²` is the square of a rational.
pub fn psi_exact(n: usize, rho: &BTreeMap<(usize, usize), BigRational>) -> Option<SquareMatrix> {
    let one = BigRational::one();
    let mut roots = BTreeMap::new();
    for (&k, r) in rho {
        if r * r >= one {
            return None;
        }
        roots.insert(k, exact_sqrt(&(&one - r * r))?);
    }
    // Q[r..s] = √P[r..s]
    let q = |r: usize, s: usize| -> BigRational {
        let mut acc = BigRational::one();
        for i in r..=s {
            for j in i + 1..=s {
                acc *= &roots[&(i, j)];
            }
        }
        acc
    };
    let lookup = |sym: &MinorSymbol| -> Option<BigRational> {
        match sym {
            MinorSymbol::Principal(set) => {
                let s = set.as_slice();
                if s.len() == 1 {
                    return Some(BigRational::one());
                }
                let root = q(s[0], s[s.len() - 1]);
                let v = &root * &root;
                Some(if (s.len() / 2) % 2 == 1 { -v } else { v })
            }
            MinorSymbol::AlmostPrincipal { i, j, cond } => {
                let (lo, hi) = ((*i).min(*j), (*i).max(*j));
                let v = &rho[&(lo, hi)] * q(lo, hi - 1) * q(lo + 1, hi);
                Some(if cond.len().div_ceil(2) % 2 == 1 { -v } else { v })
            }
        }
    };
    let mut m = SquareMatrix::identity(n);
    for f in catalan_formulas(n) {
        let y = f.poly.evaluate(lookup).ok()?;
        m.set(f.i, f.j, y.clone());
        m.set(f.j, f.i, y);
    }
    Some(m)
}

/// Ψ⁻¹: connected partial correlations from exact minors of the stored entries.
pub fn psi_inverse(y: &CorrelationMatrix) -> Result<PartialCorrelationVector, ElliptopeError> {
    let exact = y.to_exact();
    is_positive_definite(&exact)?;
    let mut rho = BTreeMap::new();
    for i in 1..=y.n {
        for j in i + 1..=y.n {
            rho.insert((i, j), partial_correlation_unchecked(&exact, i, j, &IndexSet::between(i, j))?);
        }
    }
    PartialCorrelationVector::new(y.n, rho)
}

/// `|det Ψ(v) - ∏ (1 - ρ²)|`.
pub fn det_identity_check(v: &PartialCorrelationVector) -> Result<f64, ElliptopeError> {
    let y = psi(v)?;
    Ok((y.determinant() - block_products(v).get(1, v.n.max(1))).abs())
}

/// Per-coordinate law of the partial correlations fed to Ψ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marginal {
    Uniform { low: f64, high: f64 },
    Point(f64),
}

impl Default for Marginal {
    fn default() -> Self {
        Marginal::Uniform { low: -1.0, high: 1.0 }
    }
}

impl Marginal {
    fn draw(&self, rng: &mut Seeded) -> f64 {
        match *self {
            Marginal::Point(c) => c,
            Marginal::Uniform { low, high } => loop {
                let x = rng.rng().gen_range(low..high);
                if x.abs() < 1.0 {
                    break x;
                }
            },
        }
    }
}

/// The vector drawn for stream `stream` of `seed`, coordinates in `(i, j)` order.
pub fn sample_vector(n: usize, seed: u64, stream: u64, marginal: Marginal) -> Result<PartialCorrelationVector, ElliptopeError> {
    if let Marginal::Uniform { low, high } = marginal {
        if !(low < high && low < 1.0 && high > -1.0) {
            return Err(ElliptopeError::Malformed(format!("empty uniform range ({low}, {high})")));
        }
    }
    let mut rng = Seeded::with_stream(seed, stream);
    PartialCorrelationVector::from_fn(n, |_, _| marginal.draw(&mut rng))
}

/// Ψ of [`sample_vector`].
pub fn sample(n: usize, seed: u64, stream: u64, marginal: Marginal) -> Result<CorrelationMatrix, ElliptopeError> {
    psi(&sample_vector(n, seed, stream, marginal)?)
}

/// A correlation matrix obtained by normalizing `A Aᵀ` for a random `n x (n+2)` matrix `A`.
pub fn random_correlation_matrix(n: usize, rng: &mut Seeded) -> CorrelationMatrix {
    loop {
        let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n + 2).map(|_| rng.uniform(-1.0, 1.0)).collect()).collect();
        let g: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| a[i].iter().zip(&a[j]).map(|(x, y)| x * y).sum()).collect()).collect();
        let d: Vec<f64> = (0..n).map(|i| g[i][i].sqrt()).collect();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { g[i][j] / (d[i] * d[j]) }).collect())
            .collect();
        if let Ok(y) = CorrelationMatrix::new(rows) {
            return y;
        }
    }
}

/// Exact positive-definiteness of a rational matrix, through its leading minors.
pub fn is_exactly_pd(m: &SquareMatrix) -> bool {
    is_positive_definite(m).is_ok()
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
