//! Exact Laurent polynomials in one variable `t`, over the integers and over
//! prime fields.

mod dense;
mod factor;
mod fp;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use fp::is_prime;

use dense::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("the zero polynomial has no such structure")]
    ZeroPolynomial,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not symmetric under t -> 1/t")]
    NotSymmetric,
    #[error("every polynomial in the list is zero")]
    AllZero,
    #[error("cannot evaluate a polynomial with negative powers at 0")]
    EvaluateAtZero,
    #[error("cannot parse polynomial `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// Degree span of a Laurent polynomial; the zero polynomial has infinite span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Span {
    Finite(u64),
    Infinite,
}

impl Span {
    pub fn finite(self) -> Option<u64> {
        match self {
            Span::Finite(d) => Some(d),
            Span::Infinite => None,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Span::Finite(d) => write!(f, "{d}"),
            Span::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Span {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Span::Finite(d) => s.serialize_u64(*d),
            Span::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// An element of `Z[t, 1/t]`. Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(BigInt::one(), 0)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        LaurentPoly::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: impl Into<BigInt>, exponent: i64) -> Self {
        LaurentPoly::from_terms([(exponent, c.into())])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// Sums `(exponent, coefficient)` terms; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }

    /// Ordinary polynomial from coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        let n = coeffs.len() as i64;
        LaurentPoly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (n - 1 - i as i64, BigInt::from(c))))
    }

    /// Ordinary polynomial from coefficients listed from the constant term up.
    pub fn from_ascending(coeffs: &[i64]) -> Self {
        LaurentPoly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (i as i64, BigInt::from(c))))
    }

    /// Parses the coefficient-list form `"2,-5,2"` (highest degree first).
    pub fn parse_coefficient_list(text: &str) -> Result<Self, LaurentError> {
        let err = |reason: &str| LaurentError::Parse { text: text.to_string(), reason: reason.to_string() };
        let values: Vec<BigInt> = text
            .split(',')
            .map(|s| s.trim().parse::<BigInt>())
            .collect::<Result<_, _>>()
            .map_err(|_| err("expected comma-separated integers"))?;
        if values.is_empty() {
            return Err(err("empty coefficient list"));
        }
        let n = values.len() as i64;
        Ok(LaurentPoly::from_terms(values.into_iter().enumerate().map(|(i, c)| (n - 1 - i as i64, c))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    pub fn trailing_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// `f(1/t)`.
    pub fn reciprocal(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(e, c)| (*e, c * k)))
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// True for `±t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().all(|c| c.abs().is_one())
    }

    /// Canonical representative of the orbit under multiplication by `±t^k`:
    /// trailing exponent 0 and positive leading coefficient.
    pub fn normalize(&self) -> LaurentPoly {
        let Some(lo) = self.min_exponent() else {
            return LaurentPoly::zero();
        };
        let shifted = self.shift(-lo);
        if shifted.leading_coeff().is_some_and(Signed::is_negative) {
            -&shifted
        } else {
            shifted
        }
    }

    pub fn degree_span(&self) -> Span {
        match (self.min_exponent(), self.max_exponent()) {
            (Some(lo), Some(hi)) => Span::Finite((hi - lo) as u64),
            _ => Span::Infinite,
        }
    }

    /// Leading and trailing coefficients both `±1`.
    pub fn is_monic_both_ends(&self) -> Result<bool, LaurentError> {
        match (self.leading_coeff(), self.trailing_coeff()) {
            (Some(a), Some(b)) => Ok(a.abs().is_one() && b.abs().is_one()),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational, LaurentError> {
        if x.is_zero() && self.min_exponent().is_some_and(|e| e < 0) {
            return Err(LaurentError::EvaluateAtZero);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            let power = if *e >= 0 { x.pow(*e as i32) } else { x.recip().pow((-e) as i32) };
            acc += BigRational::from_integer(c.clone()) * power;
        }
        Ok(acc)
    }

    /// Value at `t = 1`.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn reduce_mod(&self, p: u64) -> Result<ModPoly, LaurentError> {
        if !is_prime(p) {
            return Err(LaurentError::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (*e, c.mod_floor(&pb).to_u64().expect("residue fits in u64")))
            .filter(|(_, c)| *c != 0)
            .collect();
        Ok(ModPoly { p, coeffs })
    }

    /// Coefficients `(c_0, c_1, ..., c_n)` with
    /// `f ~ c_n (t^n + t^-n) + ... + c_1 (t + 1/t) + c_0`, after normalizing.
    pub fn symmetric_form(&self) -> Result<Vec<BigInt>, LaurentError> {
        let f = self.normalize();
        let Span::Finite(span) = f.degree_span() else {
            return Err(LaurentError::ZeroPolynomial);
        };
        if span % 2 == 1 {
            return Err(LaurentError::NotSymmetric);
        }
        let half = (span / 2) as i64;
        let centered = f.shift(-half);
        if centered.reciprocal() != centered {
            return Err(LaurentError::NotSymmetric);
        }
        Ok((0..=half).map(|i| centered.coeff(i)).collect())
    }

    /// Exact quotient, or `None` when `d` does not divide `self` in `Z[t, 1/t]`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let dlo = d.min_exponent()?;
        let Some(lo) = self.min_exponent() else {
            return Some(LaurentPoly::zero());
        };
        let q = self.to_dense().div_exact(&d.to_dense())?;
        Some(LaurentPoly::from_dense(&q, lo - dlo))
    }

    fn to_dense(&self) -> ZPoly {
        let Some(lo) = self.min_exponent() else {
            return ZPoly::default();
        };
        let hi = self.max_exponent().unwrap();
        ZPoly::new((lo..=hi).map(|e| self.coeff(e)).collect())
    }

    fn from_dense(f: &ZPoly, shift: i64) -> LaurentPoly {
        LaurentPoly::from_terms(f.coeffs().iter().enumerate().map(|(i, c)| (i as i64 + shift, c.clone())))
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        (0..n).fold(LaurentPoly::one(), |acc, _| &acc * self)
    }

    /// Canonical ordering used for factor lists: by degree span, then by
    /// coefficients from the top down.
    pub fn canonical_cmp(&self, other: &LaurentPoly) -> Ordering {
        self.degree_span().cmp(&other.degree_span()).then_with(|| {
            let a: Vec<BigInt> = self.to_dense().coeffs().iter().rev().cloned().collect();
            let b: Vec<BigInt> = other.to_dense().coeffs().iter().rev().cloned().collect();
            a.cmp(&b)
        })
    }
}

/// Primitive canonical gcd of a list; zeros are ignored.
pub fn gcd_many(fs: &[LaurentPoly]) -> Result<LaurentPoly, LaurentError> {
    let g = fs
        .iter()
        .filter(|f| !f.is_zero())
        .fold(None::<ZPoly>, |acc, f| {
            let d = f.to_dense();
            Some(match acc {
                None => d.primitive_part(),
                Some(a) => a.gcd(&d),
            })
        })
        .ok_or(LaurentError::AllZero)?;
    Ok(LaurentPoly::from_dense(&g, 0).normalize())
}

/// `sign * t^shift * content * prod(factor^multiplicity)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub sign: i8,
    pub shift: i64,
    #[serde(serialize_with = "serialize_bigint")]
    pub content: BigInt,
    pub factors: Vec<(LaurentPoly, u32)>,
}

fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

impl Factorization {
    pub fn expand(&self) -> LaurentPoly {
        let unit = LaurentPoly::monomial(&self.content * BigInt::from(self.sign), self.shift);
        self.factors.iter().fold(unit, |acc, (f, m)| &acc * &f.pow(*m))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1 && self.content.is_one()
    }

    /// Factors repeated by multiplicity, in canonical order.
    pub fn flat(&self) -> Vec<LaurentPoly> {
        self.factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.clone(), *m as usize))
            .collect()
    }
}

/// Complete factorization over the integers.
pub fn factor_over_z(f: &LaurentPoly) -> Result<Factorization, LaurentError> {
    let shift = f.min_exponent().ok_or(LaurentError::ZeroPolynomial)?;
    let dense = f.to_dense();
    let sign: i8 = if dense.lc().is_negative() { -1 } else { 1 };
    let content = dense.content();
    let prim = dense.primitive_part();
    let mut factors: Vec<(LaurentPoly, u32)> = Vec::new();
    if prim.degree() > 0 {
        let repeated = prim.gcd(&prim.derivative());
        let squarefree = prim.div_exact(&repeated).expect("gcd divides").primitive_part();
        for q in factor::factor_squarefree(&squarefree) {
            let mut rest = prim.clone();
            let mut m = 0;
            while let Some(next) = rest.div_exact(&q) {
                rest = next;
                m += 1;
            }
            factors.push((LaurentPoly::from_dense(&q, 0), m));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization { sign, shift, content, factors })
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms()).map(|(e, c)| (e, c.clone())))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, c.clone())).chain(rhs.terms().map(|(e, c)| (e, -c))))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms().flat_map(|(e1, c1)| rhs.terms().map(move |(e2, c2)| (e1 + e2, c1 * c2))),
        )
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn write_terms<I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (i64, BigInt)>,
{
    let mut first = true;
    for (e, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { "-" } else { "+" })?;
        }
        first = false;
        let show_coeff = !mag.is_one() || e == 0;
        if show_coeff {
            write!(f, "{mag}")?;
        }
        match e {
            0 => {}
            1 => write!(f, "t")?,
            _ => write!(f, "t^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().rev().map(|(e, c)| (*e, c.clone())))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts `2t^2 - 5t + 2`, `t^-1 + 1 + t`, `3*t^(-2)` and the
    /// coefficient-list form `2,-5,2`.
    fn from_str(text: &str) -> Result<Self, LaurentError> {
        if text.contains(',') {
            return LaurentPoly::parse_coefficient_list(text);
        }
        let err = |reason: String| LaurentError::Parse { text: text.to_string(), reason };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input".into()));
        }
        let bytes: Vec<char> = s.chars().collect();
        let mut terms = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(err(format!("expected `+` or `-` at offset {i}")));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff = if i > start {
                bytes[start..i].iter().collect::<String>().parse::<BigInt>().unwrap()
            } else {
                BigInt::one()
            };
            if i < bytes.len() && bytes[i] == '*' {
                i += 1;
            }
            let mut exponent = 0i64;
            if i < bytes.len() && bytes[i] == 't' {
                i += 1;
                exponent = 1;
                if i < bytes.len() && bytes[i] == '^' {
                    i += 1;
                    let paren = i < bytes.len() && bytes[i] == '(';
                    if paren {
                        i += 1;
                    }
                    let es = i;
                    if i < bytes.len() && (bytes[i] == '-' || bytes[i] == '+') {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exponent = bytes[es..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err(format!("bad exponent at offset {es}")))?;
                    if paren {
                        if i < bytes.len() && bytes[i] == ')' {
                            i += 1;
                        } else {
                            return Err(err("missing `)`".into()));
                        }
                    }
                }
            } else if i == start {
                return Err(err(format!("expected a term at offset {start}")));
            }
            terms.push((exponent, sign * coeff));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

/// A Laurent polynomial with coefficients in `Z/p`, residues in `[1, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    coeffs: BTreeMap<i64, u64>,
}

impl ModPoly {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> u64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn degree_span(&self) -> Span {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(lo), Some(hi)) => Span::Finite((hi - lo) as u64),
            _ => Span::Infinite,
        }
    }

    /// A nonzero monomial, i.e. a unit of `F_p[t, 1/t]`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        assert_eq!(self.p, other.p, "moduli differ");
        let p = self.p as u128;
        let mut out: BTreeMap<i64, u64> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let slot = out.entry(e1 + e2).or_default();
                *slot = ((*slot as u128 + *c1 as u128 * *c2 as u128) % p) as u64;
            }
        }
        out.retain(|_, c| *c != 0);
        ModPoly { p: self.p, coeffs: out }
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().rev().map(|(e, c)| (*e, BigInt::from(*c))))
    }
}

impl Serialize for ModPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests;
