//! Matrix entries as Laurent polynomials in connected minors, and exact
//! reconstruction of a matrix from its table of connected minors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{rational_to_string, AlgebraError, LaurentPolynomial, MinorSymbol};
use crate::minors::{connected_table, MinorTable, SquareMatrix, SymmetricMatrix};
use crate::paths::{catalan_weight, for_each_catalan, for_each_schroder, schroder_weight};
use crate::tilings::{enumerate_tilings, tiling_weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("{method} formula for x[{i},{j}] is not provided (needs i > j)")]
    UnsupportedEntry { i: usize, j: usize, method: Method },
    #[error("entry ({i}, {j}) is outside a {n}x{n} matrix")]
    OutOfRange { n: usize, i: usize, j: usize },
    #[error("connected minor {0} vanishes but appears in a denominator")]
    ZeroDenominator(MinorSymbol),
    #[error("minor table has no value for {0}")]
    MissingSymbol(MinorSymbol),
}

impl From<AlgebraError> for ReconstructError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::ZeroDenominator(s) => ReconstructError::ZeroDenominator(s),
            AlgebraError::MissingSymbol(s) => ReconstructError::MissingSymbol(s),
            other => panic!("unexpected evaluation error: {other}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Catalan,
    Schroder,
    Tiling,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Catalan => "catalan",
            Method::Schroder => "schroder",
            Method::Tiling => "tiling",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "catalan" => Ok(Method::Catalan),
            "schroder" | "schröder" => Ok(Method::Schroder),
            "tiling" | "tilings" => Ok(Method::Tiling),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFormula {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub method: Method,
    pub poly: LaurentPolynomial,
}

impl EntryFormula {
    pub fn evaluate(&self, table: &MinorTable) -> Result<BigRational, ReconstructError> {
        Ok(self.poly.evaluate(|s| table.lookup(s))?)
    }

    /// Symbols occurring with a negative exponent in some term.
    pub fn denominator_symbols(&self) -> BTreeSet<MinorSymbol> {
        self.poly
            .terms()
            .flat_map(|(m, _)| m.iter().filter(|(_, e)| *e < 0).map(|(s, _)| s.clone()).collect::<Vec<_>>())
            .collect()
    }
}

/// `x_ij` as a sum of path or tiling weights.
///
/// Catalan formulas cover every entry of a symmetric matrix (`x_ii = p_i`);
/// Schröder and tiling formulas cover the entries below the diagonal of an arbitrary matrix.
pub fn entry_formula(n: usize, i: usize, j: usize, method: Method) -> Result<EntryFormula, ReconstructError> {
    if i < 1 || j < 1 || i > n || j > n {
        return Err(ReconstructError::OutOfRange { n, i, j });
    }
    let mut poly = LaurentPolynomial::zero();
    match method {
        Method::Catalan if i == j => {
            poly = LaurentPolynomial::from(crate::algebra::LaurentMonomial::var(MinorSymbol::p(&[i])));
        }
        Method::Catalan => {
            for_each_catalan(n, i.min(j), i.max(j), |c| {
                poly.add_term(catalan_weight(&c).expect("non-empty path"), 1);
            })
            .expect("valid nodes");
        }
        _ if i <= j => return Err(ReconstructError::UnsupportedEntry { i, j, method }),
        Method::Schroder => {
            for_each_schroder(n, j, i - 1, |s| poly.add_term(schroder_weight(&s), 1)).expect("valid nodes");
        }
        Method::Tiling => {
            for t in enumerate_tilings(n, 2 * j, 2 * i - 1).expect("valid diamond") {
                poly.add_term(tiling_weight(&t), 1);
            }
        }
    }
    Ok(EntryFormula { n, i, j, method, poly })
}

/// All Catalan formulas for `i <= j`, in row-major order.
pub fn catalan_formulas(n: usize) -> Vec<EntryFormula> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            out.push(entry_formula(n, i, j, Method::Catalan).expect("in range"));
        }
    }
    out
}

/// All formulas below the diagonal, in row-major order.
pub fn lower_formulas(n: usize, method: Method) -> Result<Vec<EntryFormula>, ReconstructError> {
    let mut out = Vec::new();
    for i in 2..=n {
        for j in 1..i {
            out.push(entry_formula(n, i, j, method)?);
        }
    }
    Ok(out)
}

pub fn reconstruct_symmetric(table: &MinorTable, n: usize) -> Result<SymmetricMatrix, ReconstructError> {
    reconstruct_symmetric_with(&catalan_formulas(n), table, n)
}

/// As [`reconstruct_symmetric`] with formulas from [`catalan_formulas`] built once by the caller.
pub fn reconstruct_symmetric_with(
    formulas: &[EntryFormula],
    table: &MinorTable,
    n: usize,
) -> Result<SymmetricMatrix, ReconstructError> {
    let mut m = SquareMatrix::identity(n);
    for f in formulas {
        let v = f.evaluate(table)?;
        m.set(f.i, f.j, v.clone());
        m.set(f.j, f.i, v);
    }
    Ok(SymmetricMatrix::new(m).expect("filled symmetrically"))
}

pub fn reconstruct_lower(
    table: &MinorTable,
    n: usize,
    method: Method,
) -> Result<BTreeMap<(usize, usize), BigRational>, ReconstructError> {
    reconstruct_lower_with(&lower_formulas(n, method)?, table)
}

pub fn reconstruct_lower_with(
    formulas: &[EntryFormula],
    table: &MinorTable,
) -> Result<BTreeMap<(usize, usize), BigRational>, ReconstructError> {
    formulas.iter().map(|f| Ok(((f.i, f.j), f.evaluate(table)?))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryDiff {
    pub i: usize,
    pub j: usize,
    pub expected: String,
    pub got: String,
}

/// Outcome of minors → formulas → matrix on one input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub n: usize,
    pub symmetric: bool,
    /// Vanishing connected minors that appear in a denominator; reconstruction is skipped when non-empty.
    pub obstructions: Vec<MinorSymbol>,
    pub diffs: Vec<EntryDiff>,
    pub checked: usize,
}

impl RoundTripReport {
    pub fn is_exact(&self) -> bool {
        self.obstructions.is_empty() && self.diffs.is_empty()
    }
}

/// Reconstructs `x` from its connected minors and compares exactly.
///
/// Symmetric inputs use the Catalan formulas on every entry; other inputs use
/// the Schröder formulas below the diagonal.
pub fn roundtrip_report(x: &SquareMatrix) -> RoundTripReport {
    let n = x.n();
    let symmetric = x.is_symmetric();
    let formulas = if symmetric {
        catalan_formulas(n)
    } else {
        lower_formulas(n, Method::Schroder).expect("lower entries")
    };
    roundtrip_with(x, &formulas)
}

/// [`roundtrip_report`] with precomputed formulas (Catalan for symmetric inputs, lower otherwise).
pub fn roundtrip_with(x: &SquareMatrix, formulas: &[EntryFormula]) -> RoundTripReport {
    let n = x.n();
    let symmetric = x.is_symmetric();
    let table = connected_table(x);
    let denominators: BTreeSet<MinorSymbol> = formulas.iter().flat_map(|f| f.denominator_symbols()).collect();
    let obstructions: Vec<MinorSymbol> =
        denominators.into_iter().filter(|s| table.lookup(s).is_none_or(|v| v.is_zero())).collect();
    let mut report = RoundTripReport { n, symmetric, obstructions, diffs: Vec::new(), checked: 0 };
    if !report.obstructions.is_empty() {
        return report;
    }
    for f in formulas {
        let got = f.evaluate(&table).expect("denominators checked");
        let expected = x.get(f.i, f.j);
        report.checked += 1;
        if &got != expected {
            report.diffs.push(EntryDiff {
                i: f.i,
                j: f.j,
                expected: rational_to_string(expected),
                got: rational_to_string(&got),
            });
        }
    }
    report
}

/// Whether every connected minor used in a denominator by `formulas` is nonzero on `table`.
pub fn is_generic(table: &MinorTable, formulas: &[EntryFormula]) -> bool {
    formulas
        .iter()
        .flat_map(|f| f.denominator_symbols())
        .all(|s| table.lookup(&s).is_some_and(|v| !v.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::from_int;
    use crate::random::{pd_rational_matrix, rational_matrix, symmetric_rational_matrix, Seeded};

    #[test]
    fn diagonal_and_first_subdiagonal() {
        assert_eq!(entry_formula(4, 3, 3, Method::Catalan).unwrap().poly.to_string(), "p[3]^1");
        for n in 2..=6 {
            let f = entry_formula(n, 2, 1, Method::Schroder).unwrap();
            assert_eq!(f.poly.to_string(), "a[2,1]^1");
            assert_eq!(entry_formula(n, 2, 1, Method::Tiling).unwrap().poly, f.poly);
        }
        assert_eq!(
            entry_formula(4, 1, 4, Method::Schroder),
            Err(ReconstructError::UnsupportedEntry { i: 1, j: 4, method: Method::Schroder })
        );
        assert!(entry_formula(4, 5, 1, Method::Catalan).is_err());
    }

    #[test]
    fn catalan_formula_is_symmetric_in_i_j() {
        assert_eq!(
            entry_formula(5, 1, 4, Method::Catalan).unwrap().poly,
            entry_formula(5, 4, 1, Method::Catalan).unwrap().poly
        );
    }

    #[test]
    fn schroder_and_tiling_formulas_agree() {
        for n in 2..=5 {
            for i in 2..=n {
                for j in 1..i {
                    assert_eq!(
                        entry_formula(n, i, j, Method::Schroder).unwrap().poly,
                        entry_formula(n, i, j, Method::Tiling).unwrap().poly,
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_round_trip() {
        for n in 1..=6 {
            let id = SquareMatrix::identity(n);
            let t = connected_table(&id);
            assert_eq!(reconstruct_symmetric(&t, n).unwrap().into_inner(), id);
            assert!(roundtrip_report(&id).is_exact());
        }
    }

    #[test]
    fn pd_round_trip() {
        let x = pd_rational_matrix(&mut Seeded::new(6), 6);
        let t = connected_table(&x);
        assert_eq!(reconstruct_symmetric(&t, 6).unwrap().into_inner(), x);
    }

    #[test]
    fn general_lower_round_trip() {
        let mut rng = Seeded::new(8);
        let x = loop {
            let x = rational_matrix(&mut rng, 5);
            if is_generic(&connected_table(&x), &lower_formulas(5, Method::Schroder).unwrap()) {
                break x;
            }
        };
        let t = connected_table(&x);
        for method in [Method::Schroder, Method::Tiling] {
            let lower = reconstruct_lower(&t, 5, method).unwrap();
            assert_eq!(lower.len(), 10);
            for ((i, j), v) in lower {
                assert_eq!(&v, x.get(i, j));
            }
        }
    }

    #[test]
    fn symmetric_schroder_matches_catalan() {
        for n in 2..=7 {
            let x = symmetric_rational_matrix(&mut Seeded::new(40 + n as u64), n);
            let t = connected_table(&x);
            for i in 2..=n {
                for j in 1..i {
                    let s = entry_formula(n, i, j, Method::Schroder).unwrap().evaluate(&t);
                    let c = entry_formula(n, i, j, Method::Catalan).unwrap().evaluate(&t);
                    if let (Ok(s), Ok(c)) = (s, c) {
                        assert_eq!(s, c);
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_p2_is_reported() {
        let mut x = symmetric_rational_matrix(&mut Seeded::new(12), 4);
        x.set(2, 2, from_int(0));
        let report = roundtrip_report(&x);
        assert_eq!(report.obstructions, vec![MinorSymbol::p(&[2])]);
        assert!(!report.is_exact());
        let t = connected_table(&x);
        assert_eq!(reconstruct_symmetric(&t, 4), Err(ReconstructError::ZeroDenominator(MinorSymbol::p(&[2]))));
    }

    #[test]
    fn method_text() {
        for m in [Method::Catalan, Method::Schroder, Method::Tiling] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("motzkin".parse::<Method>().is_err());
        assert_eq!(serde_json::to_string(&Method::Schroder).unwrap(), "\"schroder\"");
    }
}
