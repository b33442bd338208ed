//! Integer solutions of linear recurrences `a_d x_{n+d} + .. + a_0 x_n = 0`
//! that extend in both directions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::criteria::monic_factor;
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("auxiliary polynomial needs degree at least 1 and nonzero leading and constant coefficients")]
    InvalidPolynomial,
    #[error("no factor is monic at both ends, so no integer solution extends both ways")]
    NoWitness,
    #[error("window of length {len} is too short: need {need}")]
    WindowTooShort { len: usize, need: usize },
    #[error("empty index range {lo}..={hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("seed has length {got}, expected {expected}")]
    SeedLength { got: usize, expected: usize },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `a_d t^d + .. + a_0` with `a_d > 0` and `a_0 != 0`, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPolynomial {
    coeffs: Vec<BigInt>,
}

impl AuxPolynomial {
    /// Coefficients from `a_d` down to `a_0`. The overall sign is fixed so
    /// that `a_d > 0`.
    pub fn from_descending(coeffs: &[BigInt]) -> Result<AuxPolynomial, RecurrenceError> {
        let mut c: Vec<BigInt> = coeffs.iter().rev().cloned().collect();
        if c.len() < 2 || c[0].is_zero() || c.last().is_none_or(Zero::is_zero) {
            return Err(RecurrenceError::InvalidPolynomial);
        }
        if c.last().is_some_and(Signed::is_negative) {
            c.iter_mut().for_each(|x| *x = -x.clone());
        }
        Ok(AuxPolynomial { coeffs: c })
    }

    pub fn from_i64(descending: &[i64]) -> Result<AuxPolynomial, RecurrenceError> {
        AuxPolynomial::from_descending(&descending.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn from_laurent(f: &LaurentPoly) -> Result<AuxPolynomial, RecurrenceError> {
        let n = f.normalize();
        let Some(top) = n.max_exponent() else { return Err(RecurrenceError::InvalidPolynomial) };
        AuxPolynomial::from_descending(&(0..=top).rev().map(|k| n.coeff(k)).collect::<Vec<_>>())
    }

    /// Parses `"a_d,...,a_0"`.
    pub fn parse(text: &str) -> Result<AuxPolynomial, RecurrenceError> {
        let coeffs = text
            .split(',')
            .map(|s| {
                s.trim().parse::<BigInt>().map_err(|_| {
                    RecurrenceError::Laurent(LaurentError::Parse { text: text.to_string(), reason: format!("{s:?} is not an integer") })
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        AuxPolynomial::from_descending(&coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_k`.
    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c.clone())))
    }

    pub fn primitive(&self) -> AuxPolynomial {
        let g = self.to_laurent().content();
        AuxPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// `t^d f(1/t)`, which governs the sequence read backwards.
    pub fn reciprocal(&self) -> AuxPolynomial {
        let rev: Vec<BigInt> = self.coeffs.to_vec();
        AuxPolynomial::from_descending(&rev).expect("both end coefficients are nonzero")
    }
}

impl fmt::Display for AuxPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

impl Serialize for AuxPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Values `x_base, x_{base+1}, ..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub base: i64,
    pub values: Vec<BigRational>,
}

impl SequenceWindow {
    pub fn from_integers(base: i64, values: &[BigInt]) -> SequenceWindow {
        SequenceWindow { base, values: values.iter().map(|v| BigRational::from_integer(v.clone())).collect() }
    }

    pub fn from_i64(base: i64, values: &[i64]) -> SequenceWindow {
        SequenceWindow::from_integers(base, &values.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last_index(&self) -> i64 {
        self.base + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&BigRational> {
        usize::try_from(n - self.base).ok().and_then(|i| self.values.get(i))
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(BigRational::is_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.values.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
    }

    pub fn slice(&self, lo: i64, hi: i64) -> SequenceWindow {
        let a = (lo - self.base) as usize;
        let b = (hi - self.base) as usize;
        SequenceWindow { base: lo, values: self.values[a..=b].to_vec() }
    }
}

fn serialize_rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    match v.is_integer().then(|| v.to_integer().to_i64()).flatten() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

impl Serialize for SequenceWindow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Values<'a>(&'a [BigRational]);
        impl Serialize for Values<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                use serde::ser::SerializeSeq;
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for v in self.0 {
                    seq.serialize_element(&Rational(v))?;
                }
                seq.end()
            }
        }
        struct Rational<'a>(&'a BigRational);
        impl Serialize for Rational<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_rational(self.0, s)
            }
        }
        let mut st = s.serialize_struct("SequenceWindow", 2)?;
        st.serialize_field("base", &self.base)?;
        st.serialize_field("values", &Values(&self.values))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiinfiniteVerdict {
    pub answer: bool,
    pub witness_factor: Option<LaurentPoly>,
}

pub fn has_integer_biinfinite(f: &AuxPolynomial) -> BiinfiniteVerdict {
    let witness_factor = monic_factor(&f.to_laurent());
    BiinfiniteVerdict { answer: witness_factor.is_some(), witness_factor }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Propagation {
    /// Seed followed by the new values, in index order.
    pub window: SequenceWindow,
    /// New values in the order they were produced.
    #[serde(skip)]
    pub produced: Vec<BigRational>,
    pub integral: Vec<bool>,
    /// 1-based step of the first non-integer value.
    pub first_non_integral: Option<usize>,
}

/// Exact rational continuation of `seed` by the recurrence of `f`: forward
/// solves for the top term, backward for the bottom one.
pub fn propagate(
    f: &AuxPolynomial,
    seed: &SequenceWindow,
    direction: Direction,
    steps: usize,
) -> Result<Propagation, RecurrenceError> {
    let d = f.degree();
    if seed.len() != d {
        return Err(RecurrenceError::SeedLength { got: seed.len(), expected: d });
    }
    let a: Vec<BigRational> = f.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut vals: Vec<BigRational> = seed.values.clone();
    let mut produced = Vec::with_capacity(steps);
    match direction {
        Direction::Forward => {
            for _ in 0..steps {
                let n = vals.len() - d;
                let s: BigRational = (0..d).map(|k| &a[k] * &vals[n + k]).sum();
                let x = -s / &a[d];
                produced.push(x.clone());
                vals.push(x);
            }
        }
        Direction::Backward => {
            // built reversed, so index 0 is the newest
            vals.reverse();
            for _ in 0..steps {
                let n = vals.len();
                let s: BigRational = (1..=d).map(|k| &a[k] * &vals[n - k]).sum();
                let x = -s / &a[0];
                produced.push(x.clone());
                vals.push(x);
            }
            vals.reverse();
        }
    }
    let integral: Vec<bool> = produced.iter().map(BigRational::is_integer).collect();
    let first_non_integral = integral.iter().position(|ok| !ok).map(|i| i + 1);
    let base = match direction {
        Direction::Forward => seed.base,
        Direction::Backward => seed.base - steps as i64,
    };
    Ok(Propagation { window: SequenceWindow { base, values: vals }, produced, integral, first_non_integral })
}

/// `y_n = sum_k g_k x_{n+k}`; the window shrinks by the span of `g`.
pub fn apply_shift_factor(g: &LaurentPoly, w: &SequenceWindow) -> Result<SequenceWindow, RecurrenceError> {
    let (lo, hi) = (g.min_exponent().unwrap_or(0), g.max_exponent().unwrap_or(0));
    let span = (hi - lo) as usize;
    if w.len() <= span {
        return Err(RecurrenceError::WindowTooShort { len: w.len(), need: span + 1 });
    }
    let len = w.len() - span;
    let values = (0..len)
        .map(|i| g.terms().map(|(k, c)| BigRational::from_integer(c.clone()) * &w.values[i + (k - lo) as usize]).sum())
        .collect();
    Ok(SequenceWindow { base: w.base - lo, values })
}

/// A nonzero integer solution on `[lo, hi]`: the recurrence of the witness
/// factor seeded with `(1, 0, .., 0)` at indices `0..e`, run both ways.
pub fn witness_sequence(f: &AuxPolynomial, lo: i64, hi: i64) -> Result<SequenceWindow, RecurrenceError> {
    if lo > hi {
        return Err(RecurrenceError::EmptyRange { lo, hi });
    }
    let g = has_integer_biinfinite(f).witness_factor.ok_or(RecurrenceError::NoWitness)?;
    let g = AuxPolynomial::from_laurent(&g)?;
    let e = g.degree() as i64;
    let mut seed = vec![BigInt::zero(); e as usize];
    seed[0] = BigInt::one();
    let seed = SequenceWindow::from_integers(0, &seed);
    let forward = (hi - (e - 1)).max(0) as usize;
    let backward = (-lo).max(0) as usize;
    let fwd = propagate(&g, &seed, Direction::Forward, forward)?;
    let both = propagate(&g, &fwd.window.slice(0, e - 1), Direction::Backward, backward)?;
    let mut values = both.window.values;
    values.extend(fwd.window.values.into_iter().skip(e as usize));
    let full = SequenceWindow { base: -(backward as i64), values };
    let out = full.slice(lo, hi);
    debug_assert!(out.is_integral() && !out.is_zero());
    if out.len() > f.degree() {
        debug_assert!(apply_shift_factor(&f.to_laurent(), &out)?.is_zero());
    }
    Ok(out)
}

/// The lowest-degree primitive recurrence satisfied by the window, found
/// from the kernel of its Hankel system. `None` when nothing of degree at
/// most `dmax` fits, or the window is identically zero.
pub fn minimal_recurrence(w: &SequenceWindow, dmax: usize) -> Result<Option<AuxPolynomial>, RecurrenceError> {
    if w.len() < 2 * dmax + 1 {
        return Err(RecurrenceError::WindowTooShort { len: w.len(), need: 2 * dmax + 1 });
    }
    if w.is_zero() {
        return Ok(None);
    }
    for d in 1..=dmax {
        let rows: Vec<Vec<BigRational>> = (0..w.len() - d).map(|n| w.values[n..=n + d].to_vec()).collect();
        let kernel = rational_kernel(&rows, d + 1);
        if kernel.len() != 1 {
            continue;
        }
        let v = &kernel[0];
        if v[0].is_zero() || v[d].is_zero() {
            continue;
        }
        let denom = v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect();
        let f = AuxPolynomial::from_descending(&ints.into_iter().rev().collect::<Vec<_>>())?;
        return Ok(Some(f.primitive()));
    }
    Ok(None)
}

/// Basis of the null space of a rational matrix with `cols` columns.
fn rational_kernel(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests;
