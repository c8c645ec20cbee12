//! Exact signed minors of rational matrices and tables of the connected ones.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_rational, rational_to_string, IndexSet, MinorSymbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("row set has {rows} indices but column set has {cols}")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} is both an endpoint and in the conditioning set")]
    IndexClash(usize),
    #[error("matrix is not positive definite (leading minor of order {0} is not positive)")]
    NotPositiveDefinite(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

/// A dense `n x n` matrix of exact rationals, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, MinorError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MinorError::Malformed("rows must all have length n".into()));
        }
        Ok(SquareMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.entries[(i - 1) * self.n + (j - 1)] = value;
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> =
            self.rows().iter().map(|r| r.iter().map(rational_to_string).collect()).collect();
        serde_json::to_string(&rows).expect("string rows serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, MinorError> {
        let rows: Vec<Vec<String>> = serde_json::from_str(text).map_err(|e| MinorError::Malformed(e.to_string()))?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| MinorError::Malformed(e.to_string()))?;
        Self::from_rows(rows)
    }

    fn check_index(&self, k: usize) -> Result<(), MinorError> {
        if k == 0 || k > self.n {
            Err(MinorError::IndexOutOfRange { index: k, n: self.n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(rational_to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A [`SquareMatrix`] known to equal its transpose.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricMatrix(SquareMatrix);

impl SymmetricMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self, MinorError> {
        for i in 1..=m.n {
            for j in i + 1..=m.n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(MinorError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymmetricMatrix(m))
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_inner(self) -> SquareMatrix {
        self.0
    }
}

impl std::ops::Deref for SymmetricMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.0
    }
}

/// Determinant by fraction-free Bareiss elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators; all
/// intermediate divisions are exact in `BigInt`.
pub fn determinant(rows: &[Vec<BigRational>]) -> BigRational {
    let k = rows.len();
    if k == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for p in 0..k {
        if m[p][p].is_zero() {
            match (p + 1..k).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    negate = !negate;
                }
                None => return BigRational::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = &m[i][j] * &m[p][p] - &m[i][p] * &m[p][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[p][p].clone();
    }
    let det = if negate { -prev } else { prev };
    BigRational::new(det, scale)
}

/// Unsigned minor with the given row and column indices.
pub fn minor(x: &SquareMatrix, rows: &IndexSet, cols: &IndexSet) -> Result<BigRational, MinorError> {
    if rows.len() != cols.len() {
        return Err(MinorError::ShapeMismatch { rows: rows.len(), cols: cols.len() });
    }
    for &k in rows.as_slice().iter().chain(cols.as_slice()) {
        x.check_index(k)?;
    }
    let sub: Vec<Vec<BigRational>> = rows
        .as_slice()
        .iter()
        .map(|&r| cols.as_slice().iter().map(|&c| x.get(r, c).clone()).collect())
        .collect();
    Ok(determinant(&sub))
}

fn sign(negative: bool) -> BigRational {
    if negative {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// `p_I = (-1)^{⌊|I|/2⌋} det X_I^I`; `p_∅ = 1`.
pub fn principal(x: &SquareMatrix, set: &IndexSet) -> Result<BigRational, MinorError> {
    Ok(sign((set.len() / 2) % 2 == 1) * minor(x, set, set)?)
}

/// `a_{ij|I} = (-1)^{⌈|I|/2⌉} det X_{iI}^{jI}`.
pub fn almost_principal(x: &SquareMatrix, i: usize, j: usize, cond: &IndexSet) -> Result<BigRational, MinorError> {
    for k in [i, j] {
        if cond.contains(k) {
            return Err(MinorError::IndexClash(k));
        }
    }
    if i == j {
        return Err(MinorError::IndexClash(i));
    }
    let rows = cond.with(&[i]);
    let cols = cond.with(&[j]);
    Ok(sign(cond.len().div_ceil(2) % 2 == 1) * minor(x, &rows, &cols)?)
}

/// Value of an arbitrary symbol on `x`.
pub fn symbol_value(x: &SquareMatrix, sym: &MinorSymbol) -> Result<BigRational, MinorError> {
    match sym {
        MinorSymbol::Principal(set) => principal(x, set),
        MinorSymbol::AlmostPrincipal { i, j, cond } => almost_principal(x, *i, *j, cond),
    }
}

/// The connected symbols of an `n x n` matrix in canonical order.
///
/// With `symmetric` set only `a_{ij|I}` with `i < j` are listed.
pub fn connected_symbols(n: usize, symmetric: bool) -> Vec<MinorSymbol> {
    let mut out: Vec<MinorSymbol> = (1..=n).map(|k| MinorSymbol::p(&[k])).collect();
    for lo in 2..n {
        for hi in lo + 1..n {
            out.push(MinorSymbol::Principal(IndexSet::interval(lo, hi)));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j && (i < j || !symmetric) {
                out.push(MinorSymbol::connected_a(i, j));
            }
        }
    }
    out.sort();
    out
}

/// Values of the connected minors of one matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorTable {
    n: usize,
    symmetric: bool,
    #[serde(with = "rational_map")]
    values: BTreeMap<MinorSymbol, BigRational>,
}

mod rational_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<MinorSymbol, BigRational>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(map.iter().map(|(k, v)| (k, rational_to_string(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<MinorSymbol, BigRational>, D::Error> {
        let raw: BTreeMap<MinorSymbol, String> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| parse_rational(&v).map(|q| (k, q)).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl MinorTable {
    pub fn from_values(n: usize, symmetric: bool, values: BTreeMap<MinorSymbol, BigRational>) -> Self {
        MinorTable { n, symmetric, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &BTreeMap<MinorSymbol, BigRational> {
        &self.values
    }

    /// Value of `sym`; a symmetric table answers `a_{ji|I}` with `a_{ij|I}`.
    pub fn lookup(&self, sym: &MinorSymbol) -> Option<BigRational> {
        if let Some(v) = self.values.get(sym) {
            return Some(v.clone());
        }
        match sym {
            MinorSymbol::AlmostPrincipal { i, j, cond } if self.symmetric => self
                .values
                .get(&MinorSymbol::AlmostPrincipal { i: *j, j: *i, cond: cond.clone() })
                .cloned(),
            _ => None,
        }
    }

    pub fn insert(&mut self, sym: MinorSymbol, value: BigRational) {
        self.values.insert(sym, value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("minor table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MinorError> {
        serde_json::from_str(text).map_err(|e| MinorError::Malformed(e.to_string()))
    }
}

/// Table of all connected minors; symmetric inputs store one `a` per unordered pair.
pub fn connected_table(x: &SquareMatrix) -> MinorTable {
    let symmetric = x.is_symmetric();
    let values = connected_symbols(x.n, symmetric)
        .into_iter()
        .map(|s| {
            let v = symbol_value(x, &s).expect("connected symbols are in range");
            (s, v)
        })
        .collect();
    MinorTable { n: x.n, symmetric, values }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationResidual {
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "ser_rational")]
    pub residual: BigRational,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&rational_to_string(q))
}

/// Residuals of `a_{ij|I}^2 - p_I p_{I∪{i,j}} - p_{I∪{i}} p_{I∪{j}}` for `2 <= i < j <= n-1`.
pub fn verify_relation(x: &SymmetricMatrix) -> Vec<RelationResidual> {
    let n = x.n();
    let mut out = Vec::new();
    for i in 2..n {
        for j in i + 1..n {
            let cond = IndexSet::between(i, j);
            let p = |s: &IndexSet| principal(x, s).expect("indices in range");
            let a = almost_principal(x, i, j, &cond).expect("indices in range");
            let residual = &a * &a - p(&cond) * p(&cond.with(&[i, j])) - p(&cond.with(&[i])) * p(&cond.with(&[j]));
            out.push(RelationResidual { i, j, residual });
        }
    }
    out
}

/// Exact positive-definiteness test through the leading principal minors.
pub fn is_positive_definite(x: &SquareMatrix) -> Result<(), MinorError> {
    for k in 1..=x.n() {
        let lead = IndexSet::interval(1, k);
        if !minor(x, &lead, &lead)?.is_positive() {
            return Err(MinorError::NotPositiveDefinite(k));
        }
    }
    Ok(())
}

/// `ρ_{ij|I} = (-1)^{⌈|I|/2⌉} a_{ij|I} / sqrt(p_{iI} p_{jI})`, evaluated from exact minors.
pub fn partial_correlation(x: &SquareMatrix, i: usize, j: usize, cond: &IndexSet) -> Result<f64, MinorError> {
    is_positive_definite(x)?;
    partial_correlation_unchecked(x, i, j, cond)
}

/// As [`partial_correlation`] but trusts the caller on positive definiteness.
pub(crate) fn partial_correlation_unchecked(
    x: &SquareMatrix,
    i: usize,
    j: usize,
    cond: &IndexSet,
) -> Result<f64, MinorError> {
    let a = almost_principal(x, i, j, cond)?;
    let numer = sign(cond.len().div_ceil(2) % 2 == 1) * a;
    let pi = principal(x, &cond.with(&[i]))?;
    let pj = principal(x, &cond.with(&[j]))?;
    let squared = &numer * &numer / (pi * pj);
    let magnitude = squared.to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(if numer.is_negative() { -magnitude } else { magnitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::from_int;
    use crate::random::{rational_matrix, symmetric_rational_matrix, Seeded};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Cofactor expansion along the first row; independent of the elimination path.
    fn laplace(rows: &[Vec<BigRational>]) -> BigRational {
        let k = rows.len();
        if k == 0 {
            return BigRational::one();
        }
        let mut total = BigRational::zero();
        for c in 0..k {
            let sub: Vec<Vec<BigRational>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(cc, _)| *cc != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &rows[0][c] * laplace(&sub);
            total = if c % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    fn subsets(n: usize, k: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push(IndexSet::new((1..=n).filter(|&t| mask >> (t - 1) & 1 == 1).collect()).unwrap());
            }
        }
        out
    }

    #[test]
    fn empty_and_identity_minors() {
        let id = SquareMatrix::identity(5);
        assert_eq!(minor(&id, &IndexSet::empty(), &IndexSet::empty()).unwrap(), from_int(1));
        for k in 0..=5 {
            for s in subsets(5, k) {
                assert_eq!(minor(&id, &s, &s).unwrap(), from_int(1));
            }
        }
        assert_eq!(principal(&SquareMatrix::identity(4), &IndexSet::interval(2, 3)).unwrap(), from_int(-1));
        assert_eq!(almost_principal(&id, 1, 2, &IndexSet::empty()).unwrap(), from_int(0));
    }

    #[test]
    fn shape_and_index_errors() {
        let id = SquareMatrix::identity(3);
        assert_eq!(
            minor(&id, &IndexSet::interval(1, 2), &IndexSet::interval(1, 1)),
            Err(MinorError::ShapeMismatch { rows: 2, cols: 1 })
        );
        assert_eq!(
            almost_principal(&id, 1, 3, &IndexSet::interval(1, 2)),
            Err(MinorError::IndexClash(1))
        );
        assert!(matches!(minor(&id, &IndexSet::interval(3, 4), &IndexSet::interval(1, 2)), Err(MinorError::IndexOutOfRange { .. })));
    }

    #[test]
    fn bareiss_matches_laplace() {
        let mut rng = Seeded::new(11);
        for n in 1..=6 {
            for _ in 0..4 {
                let x = rational_matrix(&mut rng, n);
                assert_eq!(determinant(&x.rows()), laplace(&x.rows()), "n={n}");
                for k in 1..n {
                    for rows in subsets(n, k).iter().take(6) {
                        for cols in subsets(n, k).iter().rev().take(6) {
                            let sub: Vec<Vec<BigRational>> = rows
                                .as_slice()
                                .iter()
                                .map(|&r| cols.as_slice().iter().map(|&c| x.get(r, c).clone()).collect())
                                .collect();
                            assert_eq!(minor(&x, rows, cols).unwrap(), laplace(&sub));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let x = SquareMatrix::from_rows(vec![
            vec![q(1, 2), q(1, 3), q(1, 1)],
            vec![q(1, 1), q(2, 3), q(2, 1)],
            vec![q(0, 1), q(5, 1), q(7, 1)],
        ])
        .unwrap();
        assert_eq!(determinant(&x.rows()), from_int(0));
    }

    #[test]
    fn signed_minor_conventions() {
        let x = rational_matrix(&mut Seeded::new(3), 4);
        for k in 1..=4 {
            assert_eq!(&principal(&x, &IndexSet::interval(k, k)).unwrap(), x.get(k, k));
        }
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    assert_eq!(&almost_principal(&x, i, j, &IndexSet::empty()).unwrap(), x.get(i, j));
                }
            }
        }
        let rho = q(3, 7);
        let corr = SquareMatrix::from_rows(vec![vec![from_int(1), rho.clone()], vec![rho.clone(), from_int(1)]]).unwrap();
        assert_eq!(principal(&corr, &IndexSet::interval(1, 2)).unwrap(), -(from_int(1) - &rho * &rho));
    }

    #[test]
    fn symmetric_almost_principal_minors_agree() {
        let mut rng = Seeded::new(5);
        for n in 2..=6 {
            let x = symmetric_rational_matrix(&mut rng, n);
            for i in 1..=n {
                for j in i + 1..=n {
                    let cond = IndexSet::between(i, j);
                    assert_eq!(almost_principal(&x, i, j, &cond).unwrap(), almost_principal(&x, j, i, &cond).unwrap());
                }
            }
        }
    }

    #[test]
    fn connected_table_domains() {
        let x = symmetric_rational_matrix(&mut Seeded::new(1), 4);
        let t = connected_table(&x);
        let names: Vec<String> = t.values().keys().map(|s| s.to_string()).collect();
        assert_eq!(
            names,
            ["p[1]", "p[2]", "p[2,3]", "p[3]", "p[4]", "a[1,2]", "a[1,3|2]", "a[1,4|2,3]", "a[2,3]", "a[2,4|3]", "a[3,4]"]
        );
        let general = connected_table(&rational_matrix(&mut Seeded::new(2), 4));
        assert_eq!(general.values().keys().filter(|s| !s.is_principal()).count(), 12);
        let n6 = connected_symbols(6, false);
        assert_eq!(n6.iter().filter(|s| s.is_principal()).count(), 6 + 6);
        assert!(n6.iter().all(|s| s.is_connected(6)));
        assert_eq!(MinorTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn relation_on_small_cases() {
        let id = SymmetricMatrix::new(SquareMatrix::identity(6)).unwrap();
        assert!(verify_relation(&id).iter().all(|r| r.residual.is_zero()));
        let x = SymmetricMatrix::new(symmetric_rational_matrix(&mut Seeded::new(9), 4)).unwrap();
        let res = verify_relation(&x);
        assert_eq!(res.len(), 1);
        assert_eq!((res[0].i, res[0].j), (2, 3));
        assert!(res[0].residual.is_zero());
        let x7 = SymmetricMatrix::new(symmetric_rational_matrix(&mut Seeded::new(10), 7)).unwrap();
        let res = verify_relation(&x7);
        assert_eq!(res.len(), 10);
        assert!(res.iter().all(|r| r.residual.is_zero()));
    }

    #[test]
    fn partial_correlations() {
        let id = SquareMatrix::identity(4);
        assert_eq!(partial_correlation(&id, 1, 4, &IndexSet::interval(2, 3)).unwrap(), 0.0);
        // y12 = y23 = 0; with sorted row and column selection the signed
        // convention yields -y13 for a singleton conditioning set
        let y13 = q(-2, 5);
        let corr = SquareMatrix::from_rows(vec![
            vec![from_int(1), from_int(0), y13.clone()],
            vec![from_int(0), from_int(1), from_int(0)],
            vec![y13, from_int(0), from_int(1)],
        ])
        .unwrap();
        assert!((partial_correlation(&corr, 1, 3, &IndexSet::interval(2, 2)).unwrap() - 0.4).abs() < 1e-15);
        let not_pd = SquareMatrix::from_rows(vec![vec![from_int(1), from_int(2)], vec![from_int(2), from_int(1)]]).unwrap();
        assert_eq!(partial_correlation(&not_pd, 1, 2, &IndexSet::empty()), Err(MinorError::NotPositiveDefinite(2)));
    }

    #[test]
    fn partial_correlations_of_pd_matrices_are_bounded() {
        let mut rng = Seeded::new(21);
        for n in 2..=6 {
            let x = crate::random::pd_rational_matrix(&mut rng, n);
            for i in 1..=n {
                for j in i + 1..=n {
                    let r = partial_correlation(&x, i, j, &IndexSet::between(i, j)).unwrap();
                    assert!(r.abs() < 1.0);
                }
            }
        }
    }

    #[test]
    fn matrix_json() {
        let x = rational_matrix(&mut Seeded::new(4), 3);
        assert_eq!(SquareMatrix::from_json(&x.to_json()).unwrap(), x);
        assert!(SquareMatrix::from_json(r#"[["1","2"],["3"]]"#).is_err());
    }
}
