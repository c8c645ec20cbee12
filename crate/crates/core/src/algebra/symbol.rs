use std::fmt;
use std::str::FromStr;

use super::AlgebraError;

/// A strictly increasing set of 1-based matrix indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// Builds a set from arbitrary indices; sorts and rejects duplicates or zero.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, AlgebraError> {
        indices.sort_unstable();
        if indices.first() == Some(&0) {
            return Err(AlgebraError::InvalidIndexSet(indices));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(AlgebraError::InvalidIndexSet(indices));
        }
        Ok(IndexSet(indices))
    }

    /// `{lo, lo+1, ..., hi}`; empty when `hi < lo`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        IndexSet((lo..=hi).collect())
    }

    /// The open interval strictly between `i` and `j` (in either order).
    pub fn between(i: usize, j: usize) -> Self {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        IndexSet((lo + 1..hi).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    pub fn is_contiguous(&self) -> bool {
        self.0.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Union with extra indices, kept sorted.
    pub fn with(&self, extra: &[usize]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A formal variable standing for a signed minor `p_I` or `a_{ij|I}`.
///
/// The derived ordering puts every principal symbol before every
/// almost-principal one, then compares index tuples lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinorSymbol {
    Principal(IndexSet),
    AlmostPrincipal { i: usize, j: usize, cond: IndexSet },
}

impl MinorSymbol {
    /// `p_I`. Returns `None` for the empty set, whose value is the constant 1.
    pub fn principal(set: IndexSet) -> Option<Self> {
        if set.is_empty() {
            None
        } else {
            Some(MinorSymbol::Principal(set))
        }
    }

    pub fn p(indices: &[usize]) -> Self {
        MinorSymbol::Principal(IndexSet::new(indices.to_vec()).expect("valid index set"))
    }

    pub fn almost_principal(i: usize, j: usize, cond: IndexSet) -> Result<Self, AlgebraError> {
        if i == j || i == 0 || j == 0 || cond.contains(i) || cond.contains(j) {
            return Err(AlgebraError::InvalidSymbol(format!("a[{i},{j}|{cond}]")));
        }
        Ok(MinorSymbol::AlmostPrincipal { i, j, cond })
    }

    /// The connected almost-principal symbol `a_{ij|I}` with `I` the open interval between them.
    pub fn connected_a(i: usize, j: usize) -> Self {
        MinorSymbol::AlmostPrincipal { i, j, cond: IndexSet::between(i, j) }
    }

    pub fn a(i: usize, j: usize, cond: &[usize]) -> Self {
        let cond = IndexSet::new(cond.to_vec()).expect("valid index set");
        Self::almost_principal(i, j, cond).expect("valid almost-principal symbol")
    }

    pub fn is_principal(&self) -> bool {
        matches!(self, MinorSymbol::Principal(_))
    }

    /// Whether the symbol is one of the connected minors of an `n x n` matrix.
    pub fn is_connected(&self, n: usize) -> bool {
        match self {
            MinorSymbol::Principal(set) => {
                let s = set.as_slice();
                match s.len() {
                    0 => false,
                    1 => (1..=n).contains(&s[0]),
                    _ => set.is_contiguous() && s[0] >= 2 && s[s.len() - 1] < n,
                }
            }
            MinorSymbol::AlmostPrincipal { i, j, cond } => {
                *i >= 1 && *j >= 1 && *i <= n && *j <= n && i != j && *cond == IndexSet::between(*i, *j)
            }
        }
    }
}

impl fmt::Display for MinorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorSymbol::Principal(set) => write!(f, "p[{set}]"),
            MinorSymbol::AlmostPrincipal { i, j, cond } if cond.is_empty() => write!(f, "a[{i},{j}]"),
            MinorSymbol::AlmostPrincipal { i, j, cond } => write!(f, "a[{i},{j}|{cond}]"),
        }
    }
}

fn parse_indices(s: &str) -> Result<Vec<usize>, AlgebraError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| AlgebraError::Parse(s.to_string())))
        .collect()
}

impl FromStr for MinorSymbol {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AlgebraError::Parse(s.to_string());
        let (head, rest) = s.split_at(s.find('[').ok_or_else(bad)?);
        let body = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        match head {
            "p" => {
                let set = IndexSet::new(parse_indices(body)?)?;
                MinorSymbol::principal(set).ok_or_else(bad)
            }
            "a" => {
                let (pair, cond) = match body.split_once('|') {
                    Some((pair, cond)) => (pair, parse_indices(cond)?),
                    None => (body, Vec::new()),
                };
                let pair = parse_indices(pair)?;
                if pair.len() != 2 {
                    return Err(bad());
                }
                MinorSymbol::almost_principal(pair[0], pair[1], IndexSet::new(cond)?)
            }
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for MinorSymbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for MinorSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
