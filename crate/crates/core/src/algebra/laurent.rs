use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg};
use std::str::FromStr;

use num_traits::{FromPrimitive, One, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, MinorSymbol};

/// A product of minor symbols raised to nonzero integer powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentMonomial {
    exponents: BTreeMap<MinorSymbol, i32>,
}

impl LaurentMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(sym: MinorSymbol) -> Self {
        Self::power(sym, 1)
    }

    pub fn power(sym: MinorSymbol, exp: i32) -> Self {
        let mut m = Self::default();
        m.mul_symbol(sym, exp);
        m
    }

    /// Multiplies in `sym^exp` in place.
    pub fn mul_symbol(&mut self, sym: MinorSymbol, exp: i32) {
        if exp == 0 {
            return;
        }
        let entry = self.exponents.entry(sym).or_insert(0);
        *entry += exp;
        if *entry == 0 {
            self.exponents.retain(|_, e| *e != 0);
        }
    }

    /// Multiplies in `sym^exp` when `sym` is present; `None` is the constant 1.
    pub fn mul_opt(&mut self, sym: Option<MinorSymbol>, exp: i32) {
        if let Some(sym) = sym {
            self.mul_symbol(sym, exp);
        }
    }

    pub fn exponent(&self, sym: &MinorSymbol) -> i32 {
        self.exponents.get(sym).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i32 {
        self.exponents.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MinorSymbol, i32)> {
        self.exponents.iter().map(|(s, e)| (s, *e))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &MinorSymbol> {
        self.exponents.keys()
    }

    pub fn inverse(&self) -> Self {
        LaurentMonomial { exponents: self.exponents.iter().map(|(s, e)| (s.clone(), -e)).collect() }
    }

    /// Evaluates the monomial; `lookup` supplies symbol values.
    pub fn evaluate<T, F>(&self, lookup: F) -> Result<T, AlgebraError>
    where
        T: Clone + One + Zero + Mul<Output = T> + Div<Output = T>,
        F: Fn(&MinorSymbol) -> Option<T>,
    {
        let mut num = T::one();
        let mut den = T::one();
        for (sym, exp) in self.iter() {
            let value = lookup(sym).ok_or_else(|| AlgebraError::MissingSymbol(sym.clone()))?;
            if exp < 0 && value.is_zero() {
                return Err(AlgebraError::ZeroDenominator(sym.clone()));
            }
            let target = if exp > 0 { &mut num } else { &mut den };
            for _ in 0..exp.unsigned_abs() {
                *target = target.clone() * value.clone();
            }
        }
        Ok(num / den)
    }
}

impl Mul for &LaurentMonomial {
    type Output = LaurentMonomial;

    fn mul(self, rhs: &LaurentMonomial) -> LaurentMonomial {
        let mut out = self.clone();
        for (sym, exp) in rhs.iter() {
            out.mul_symbol(sym.clone(), exp);
        }
        out
    }
}

impl Mul for LaurentMonomial {
    type Output = LaurentMonomial;

    fn mul(self, rhs: LaurentMonomial) -> LaurentMonomial {
        &self * &rhs
    }
}

impl FromIterator<(MinorSymbol, i32)> for LaurentMonomial {
    fn from_iter<I: IntoIterator<Item = (MinorSymbol, i32)>>(iter: I) -> Self {
        let mut m = LaurentMonomial::one();
        for (sym, exp) in iter {
            m.mul_symbol(sym, exp);
        }
        m
    }
}

/// Renders as `a[1,3|2]^1 * p[2]^-1`: numerator factors first, each group in symbol order.
impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let positive = self.iter().filter(|(_, e)| *e > 0);
        let negative = self.iter().filter(|(_, e)| *e < 0);
        let parts: Vec<String> = positive.chain(negative).map(|(s, e)| format!("{s}^{e}")).collect();
        f.write_str(&parts.join(" * "))
    }
}

impl FromStr for LaurentMonomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(LaurentMonomial::one());
        }
        let mut m = LaurentMonomial::one();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (sym, exp) = match factor.rsplit_once('^') {
                Some((sym, exp)) => {
                    (sym, exp.trim().parse::<i32>().map_err(|_| AlgebraError::Parse(factor.to_string()))?)
                }
                None => (factor, 1),
            };
            m.mul_symbol(sym.parse()?, exp);
        }
        Ok(m)
    }
}

/// An integer combination of Laurent monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<LaurentMonomial, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::term(LaurentMonomial::one(), c)
    }

    pub fn term(mono: LaurentMonomial, coeff: i64) -> Self {
        let mut p = Self::default();
        p.add_term(mono, coeff);
        p
    }

    pub fn add_term(&mut self, mono: LaurentMonomial, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(mono.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &LaurentMonomial) -> i64 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&LaurentMonomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn evaluate<T, F>(&self, lookup: F) -> Result<T, AlgebraError>
    where
        T: Clone + One + Zero + FromPrimitive + Mul<Output = T> + Div<Output = T> + Add<Output = T>,
        F: Fn(&MinorSymbol) -> Option<T>,
    {
        let mut total = T::zero();
        for (mono, coeff) in self.terms() {
            let value: T = mono.evaluate(&lookup)?;
            let c = T::from_i64(coeff).expect("coefficient representable");
            total = total + c * value;
        }
        Ok(total)
    }

    pub fn evaluate_map<T>(&self, assignment: &BTreeMap<MinorSymbol, T>) -> Result<T, AlgebraError>
    where
        T: Clone + One + Zero + FromPrimitive + Mul<Output = T> + Div<Output = T> + Add<Output = T>,
    {
        self.evaluate(|s| assignment.get(s).cloned())
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(m, c)| TermRecord { coefficient: c, monomial: m.to_string() })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Self, AlgebraError> {
        let mut p = LaurentPolynomial::zero();
        for r in records {
            p.add_term(r.monomial.parse()?, r.coefficient);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("term records serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let records: Vec<TermRecord> =
            serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        Self::from_records(&records)
    }
}

/// One term of a polynomial in its JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coefficient: i64,
    pub monomial: String,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_records().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        Self::from_records(&records).map_err(serde::de::Error::custom)
    }
}

impl From<LaurentMonomial> for LaurentPolynomial {
    fn from(m: LaurentMonomial) -> Self {
        LaurentPolynomial::term(m, 1)
    }
}

impl FromIterator<LaurentMonomial> for LaurentPolynomial {
    fn from_iter<I: IntoIterator<Item = LaurentMonomial>>(iter: I) -> Self {
        let mut p = LaurentPolynomial::zero();
        for m in iter {
            p.add_term(m, 1);
        }
        p
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma * mb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| match (c, m.is_one()) {
                (c, true) => c.to_string(),
                (1, false) => m.to_string(),
                (c, false) => format!("{c} * {m}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for LaurentPolynomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut p = LaurentPolynomial::zero();
        if s == "0" {
            return Ok(p);
        }
        for term in s.split(" + ") {
            let term = term.trim();
            let (coeff, mono) = match term.split_once(" * ") {
                Some((head, tail)) if head.parse::<i64>().is_ok() => (head.parse::<i64>().unwrap(), tail),
                _ => match term.parse::<i64>() {
                    Ok(c) => (c, "1"),
                    Err(_) => (1, term),
                },
            };
            p.add_term(mono.parse()?, coeff);
        }
        Ok(p)
    }
}
