//! Reidemeister–Schreier rewriting of the kernel of a weighting over the
//! transversal `{t^i}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::words::{FreeWord, Presentation, Weighting, WordsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RsError {
    #[error("weighting must give one generator weight 1 and all others weight 0")]
    UnsupportedWeighting,
    #[error("no generator has weight +1 or -1")]
    NoUnitWeightGenerator,
    #[error(transparent)]
    Words(#[from] WordsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexedSyllable {
    pub symbol: String,
    pub offset: i64,
    pub exponent: i64,
}

/// A relator of the kernel, standing for the whole family of its shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    syllables: Vec<IndexedSyllable>,
}

impl Template {
    /// Freely reduces and shifts so that the smallest offset is 0.
    pub fn new(raw: Vec<IndexedSyllable>) -> Template {
        let mut out: Vec<IndexedSyllable> = Vec::new();
        for s in raw.into_iter().filter(|s| s.exponent != 0) {
            match out.last_mut() {
                Some(last) if last.symbol == s.symbol && last.offset == s.offset => {
                    last.exponent += s.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(s),
            }
        }
        if let Some(min) = out.iter().map(|s| s.offset).min() {
            for s in &mut out {
                s.offset -= min;
            }
        }
        Template { syllables: out }
    }

    pub fn syllables(&self) -> &[IndexedSyllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_offset(&self) -> i64 {
        self.syllables.iter().map(|s| s.offset).max().unwrap_or(0)
    }

    pub fn shifted(&self, k: i64) -> Template {
        Template {
            syllables: self
                .syllables
                .iter()
                .map(|s| IndexedSyllable { symbol: s.symbol.clone(), offset: s.offset + k, exponent: s.exponent })
                .collect(),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match s.offset {
                0 => write!(f, "{}[i]", s.symbol)?,
                k if k > 0 => write!(f, "{}[i+{}]", s.symbol, k)?,
                k => write!(f, "{}[i-{}]", s.symbol, -k)?,
            }
            if s.exponent != 1 {
                write!(f, "^{}", s.exponent)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Template {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftPresentation {
    pub stable: String,
    pub symbols: Vec<String>,
    pub templates: Vec<Template>,
}

impl ShiftPresentation {
    pub fn width(&self) -> i64 {
        self.templates.iter().map(Template::max_offset).max().unwrap_or(0)
    }

    pub fn is_single_symbol(&self) -> bool {
        self.symbols.len() == 1
    }
}

/// Scans each relator keeping track of the `t`-height; a letter `g^e` read
/// at height `h` becomes `g[h]^e`.
pub fn reidemeister_schreier(p: &Presentation, chi: &Weighting) -> Result<ShiftPresentation, RsError> {
    let mut stable = None;
    for g in p.generators() {
        match chi.get(g) {
            0 => {}
            1 if stable.is_none() => stable = Some(g.clone()),
            _ => return Err(RsError::UnsupportedWeighting),
        }
    }
    let stable = stable.ok_or(RsError::UnsupportedWeighting)?;
    let symbols: Vec<String> = p.generators().iter().filter(|g| **g != stable).cloned().collect();
    let templates = p
        .relators()
        .iter()
        .map(|r| {
            let mut height = 0i64;
            let mut raw = Vec::new();
            for s in r.syllables() {
                if s.generator == stable {
                    height += s.exponent;
                } else {
                    raw.push(IndexedSyllable { symbol: s.generator.clone(), offset: height, exponent: s.exponent });
                }
            }
            Template::new(raw)
        })
        .filter(|t| !t.is_empty())
        .collect();
    Ok(ShiftPresentation { stable, symbols, templates })
}

/// Exponent sums of one symbol at each offset of one template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceRow {
    pub template: usize,
    pub symbol: String,
    pub coefficients: BTreeMap<i64, i64>,
}

impl RecurrenceRow {
    /// `sum_k c_k t^k`.
    pub fn polynomial(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coefficients.iter().map(|(&k, &c)| (k, BigInt::from(c))))
    }
}

pub fn abelianized_recurrence(sp: &ShiftPresentation) -> Vec<RecurrenceRow> {
    let mut rows = Vec::new();
    for (i, t) in sp.templates.iter().enumerate() {
        for symbol in &sp.symbols {
            let mut coefficients = BTreeMap::new();
            for s in t.syllables().iter().filter(|s| &s.symbol == symbol) {
                *coefficients.entry(s.offset).or_insert(0) += s.exponent;
            }
            coefficients.retain(|_, c| *c != 0);
            if !coefficients.is_empty() {
                rows.push(RecurrenceRow { template: i, symbol: symbol.clone(), coefficients });
            }
        }
    }
    rows
}

/// Tietze moves making the weighting `1` on a single generator `t` and `0`
/// elsewhere: `t` is the first generator of weight `±1` and every other
/// generator `g` of weight `k` is replaced by `t^k g'` for a fresh `g'`.
pub fn stabilize(p: &Presentation, chi: &Weighting) -> Result<(Presentation, Weighting), RsError> {
    let t = p
        .generators()
        .iter()
        .find(|g| chi.get(g).abs() == 1)
        .ok_or(RsError::NoUnitWeightGenerator)?
        .clone();
    let chi = if chi.get(&t) == -1 { chi.negate() } else { chi.clone() };
    let mut current = p.clone();
    for g in p.generators() {
        let k = chi.get(g);
        if *g == t || k == 0 {
            continue;
        }
        let fresh = current.fresh_generator();
        let replacement = FreeWord::power(t.clone(), k).multiply(&FreeWord::generator(fresh));
        current = current.tietze_substitute(g, &replacement)?;
    }
    let values = current.generators().iter().map(|g| (g.clone(), i64::from(*g == t))).collect();
    let weighting = Weighting::new(&current, values)?;
    Ok((current, weighting))
}
