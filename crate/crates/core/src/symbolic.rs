//! Integer Laurent polynomials in formal Plücker symbols `[I]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::combinatorics::KSubset;
use crate::error::{Error, Result};
use crate::exact::{GrassPoint, Rational};

/// Exponent vector of a monomial; zero exponents are never stored.
pub type Exponents = BTreeMap<KSubset, i64>;

fn add_exponents(a: &mut Exponents, b: &Exponents, sign: i64) {
    for (s, e) in b {
        let slot = a.entry(s.clone()).or_insert(0);
        *slot += sign * e;
        if *slot == 0 {
            a.remove(s);
        }
    }
}

/// `coefficient · ∏ [I]^{e_I}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    coeff: BigInt,
    exps: Exponents,
}

impl Monomial {
    pub fn one() -> Self {
        Self {
            coeff: BigInt::one(),
            exps: Exponents::new(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self {
            coeff: c.into(),
            exps: Exponents::new(),
        }
    }

    pub fn symbol(s: KSubset) -> Self {
        Self::symbol_pow(s, 1)
    }

    pub fn symbol_pow(s: KSubset, e: i64) -> Self {
        let mut exps = Exponents::new();
        if e != 0 {
            exps.insert(s, e);
        }
        Self {
            coeff: BigInt::one(),
            exps,
        }
    }

    pub fn from_parts(coeff: BigInt, exps: impl IntoIterator<Item = (KSubset, i64)>) -> Self {
        let mut m = Self {
            coeff,
            exps: Exponents::new(),
        };
        for (s, e) in exps {
            add_exponents(&mut m.exps, &BTreeMap::from([(s, e)]), 1);
        }
        m
    }

    /// Product of symbols, one factor per entry (repeats raise the power).
    pub fn product<'a>(symbols: impl IntoIterator<Item = &'a KSubset>) -> Self {
        Self::from_parts(BigInt::one(), symbols.into_iter().map(|s| (s.clone(), 1)))
    }

    pub fn coefficient(&self) -> &BigInt {
        &self.coeff
    }

    pub fn exponents(&self) -> &Exponents {
        &self.exps
    }

    pub fn exponent(&self, s: &KSubset) -> i64 {
        self.exps.get(s).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// True when every symbol occurs with exponent exactly one.
    pub fn is_multiplicity_free(&self) -> bool {
        self.exps.values().all(|&e| e == 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        add_exponents(&mut exps, &other.exps, 1);
        Self {
            coeff: &self.coeff * &other.coeff,
            exps,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let exps = self
            .exps
            .iter()
            .map(|(s, x)| (s.clone(), x * e as i64))
            .collect();
        Self {
            coeff: num_traits::pow(self.coeff.clone(), e as usize),
            exps,
        }
    }

    /// Exponentwise subtraction; the coefficient must divide exactly.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.coeff.is_zero() {
            return Err(Error::Dimension("division by the zero monomial".into()));
        }
        let (q, r) = self.coeff.div_rem(&other.coeff);
        if !r.is_zero() {
            return Err(Error::Dimension(format!(
                "coefficient {} not divisible by {}",
                self.coeff, other.coeff
            )));
        }
        let mut exps = self.exps.clone();
        add_exponents(&mut exps, &other.exps, -1);
        Ok(Self { coeff: q, exps })
    }

    /// Substitutes `[I] ↦ value(I)`.
    pub fn evaluate_with(
        &self,
        value: &mut impl FnMut(&KSubset) -> Result<Rational>,
    ) -> Result<Rational> {
        let mut acc = Rational::from_integer(self.coeff.clone());
        for (s, &e) in &self.exps {
            let v = value(s)?;
            if e < 0 && v.is_zero() {
                return Err(Error::ZeroMinor(s.to_string()));
            }
            let base = if e < 0 { v.recip() } else { v };
            acc *= num_traits::pow(base, e.unsigned_abs() as usize);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, pt: &GrassPoint) -> Result<Rational> {
        let mut cache = HashMap::new();
        self.evaluate_with(&mut |s| cached_plucker(pt, s, &mut cache))
    }

    pub fn to_json(&self) -> Value {
        json!({ "coeff": self.coeff.to_string(), "factors": exps_json(&self.exps) })
    }
}

fn exps_json(exps: &Exponents) -> Value {
    Value::Array(exps.iter().map(|(s, e)| json!([s, e])).collect())
}

fn write_factors(f: &mut fmt::Formatter<'_>, exps: &Exponents) -> fmt::Result {
    for (s, e) in exps {
        write!(f, "{s}")?;
        if *e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff == -BigInt::one() {
            write!(f, "-")?;
        } else if !self.coeff.is_one() {
            write!(f, "{}", self.coeff)?;
        }
        write_factors(f, &self.exps)
    }
}

fn cached_plucker(
    pt: &GrassPoint,
    s: &KSubset,
    cache: &mut HashMap<KSubset, Rational>,
) -> Result<Rational> {
    if let Some(v) = cache.get(s) {
        return Ok(v.clone());
    }
    let v = pt.plucker(s)?;
    cache.insert(s.clone(), v.clone());
    Ok(v)
}

/// A finite sum of monomials with distinct exponent vectors.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Monomial::one().into()
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

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial {
            coeff: c.clone(),
            exps: e.clone(),
        })
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn add_monomial(&mut self, m: &Monomial) {
        if m.coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(m.exps.clone())
            .or_insert_with(BigInt::zero);
        *slot += &m.coeff;
        if slot.is_zero() {
            self.terms.remove(&m.exps);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for m in other.terms() {
            out.add_monomial(&m);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in self.terms() {
            for b in other.terms() {
                out.add_monomial(&a.mul(&b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero();
        for a in self.terms() {
            out.add_monomial(&a.mul(m));
        }
        out
    }

    /// Divides every term by `m`; exact for Laurent exponents, and the
    /// coefficient of `m` must divide every coefficient.
    pub fn divide_by_monomial(&self, m: &Monomial) -> Result<Self> {
        let mut out = Self::zero();
        for a in self.terms() {
            out.add_monomial(&a.div(m)?);
        }
        Ok(out)
    }

    /// Largest absolute value among the exponents.
    pub fn max_abs_exponent(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|e| e.values())
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms
            .keys()
            .flat_map(|e| e.values())
            .any(|x| x.is_negative())
    }

    pub fn evaluate_with(
        &self,
        value: &mut impl FnMut(&KSubset) -> Result<Rational>,
    ) -> Result<Rational> {
        let mut acc = Rational::zero();
        for m in self.terms() {
            acc += m.evaluate_with(value)?;
        }
        Ok(acc)
    }

    /// Exact value at a point, substituting `[I] ↦` the `I`-minor.
    pub fn evaluate(&self, pt: &GrassPoint) -> Result<Rational> {
        let mut cache = HashMap::new();
        self.evaluate_with(&mut |s| cached_plucker(pt, s, &mut cache))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms().map(|m| m.to_json()).collect())
    }

    /// Inverse of [`Self::to_json`]; symbols are read as subsets of `{1..n}`.
    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("polynomial json: {why}"));
        let mut out = Self::zero();
        for t in v.as_array().ok_or_else(|| bad("expected array"))? {
            let coeff: BigInt = t["coeff"]
                .as_str()
                .ok_or_else(|| bad("coeff"))?
                .parse()
                .map_err(|_| bad("coeff"))?;
            let mut exps = Vec::new();
            for f in t["factors"].as_array().ok_or_else(|| bad("factors"))? {
                let elems: Vec<usize> =
                    serde_json::from_value(f[0].clone()).map_err(|_| bad("symbol"))?;
                let e = f[1].as_i64().ok_or_else(|| bad("exponent"))?;
                exps.push((KSubset::new(n, elems)?, e));
            }
            out.add_monomial(&Monomial::from_parts(coeff, exps));
        }
        Ok(out)
    }
}

impl From<Monomial> for LaurentPolynomial {
    fn from(m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_monomial(&m);
        p
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, m) in self.terms().enumerate() {
            let negative = m.coeff.is_negative();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(
                f,
                "{}",
                Monomial {
                    coeff: m.coeff.abs(),
                    exps: m.exps.clone()
                }
            )?;
        }
        Ok(())
    }
}
