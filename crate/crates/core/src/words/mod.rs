//! Free-group words and finite presentations.
//!
//! Words are kept in syllable form: a run `a^5` is one syllable, never five
//! letters. Every constructor returns a freely reduced word.

mod abelian;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub use abelian::{abelianization_invariants, canonical_weighting, exponent_sum_matrix, smith_diagonal};
pub use parse::{parse_presentation, parse_word, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("substitution for `{0}` refers to `{0}` itself")]
    SelfReference(String),
    #[error("abelianization is not infinite cyclic (free rank {free_rank}, torsion {torsion:?})")]
    NotKnotLike { free_rank: usize, torsion: Vec<String> },
    #[error("weighting does not vanish on relator {0}")]
    WeightingNotHomomorphism(String),
    #[error("weighting is not surjective onto the integers")]
    WeightingNotSurjective,
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric()),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub generator: String,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: impl Into<String>, exponent: i64) -> Self {
        Syllable { generator: generator.into(), exponent }
    }
}

/// A freely reduced word: adjacent syllables never share a generator and no
/// exponent is zero. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    syllables: Vec<Syllable>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        FreeWord { syllables: vec![Syllable::new(name, 1)] }
    }

    pub fn power(name: impl Into<String>, exponent: i64) -> Self {
        FreeWord::from_syllables([(name.into(), exponent)])
    }

    /// Builds a word from raw `(generator, exponent)` pairs, reducing freely.
    pub fn from_syllables<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut word = FreeWord::identity();
        for (g, e) in pairs {
            word.push(Syllable::new(g, e));
        }
        word
    }

    fn push(&mut self, s: Syllable) {
        if s.exponent == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.generator == s.generator => {
                last.exponent += s.exponent;
                if last.exponent == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(s),
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, counting `a^5` as five.
    pub fn letter_length(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    /// Letter-by-letter expansion as `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (&str, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = s.exponent.signum();
            std::iter::repeat_n((s.generator.as_str(), sign), s.exponent.unsigned_abs() as usize)
        })
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        for s in &other.syllables {
            out.push(s.clone());
        }
        out
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.generator.clone(), -s.exponent))
                .collect(),
        }
    }

    /// Strips a conjugating prefix/suffix pair, so the result is reduced as a
    /// cyclic word. Conjugate to `self`.
    pub fn cyclic_reduce(&self) -> FreeWord {
        let mut syl = self.syllables.clone();
        loop {
            if syl.len() < 2 {
                break;
            }
            let n = syl.len();
            if syl[0].generator != syl[n - 1].generator {
                break;
            }
            let merged = syl[0].exponent + syl[n - 1].exponent;
            let g = syl[0].generator.clone();
            syl.pop();
            syl.remove(0);
            if merged != 0 {
                // Moving the tail to the front keeps this a conjugate.
                syl.insert(0, Syllable::new(g, merged));
                break;
            }
        }
        FreeWord { syllables: syl }
    }

    pub fn exponent_sum(&self, generator: &str) -> i64 {
        self.syllables
            .iter()
            .filter(|s| s.generator == generator)
            .map(|s| s.exponent)
            .sum()
    }

    pub fn generators(&self) -> BTreeSet<&str> {
        self.syllables.iter().map(|s| s.generator.as_str()).collect()
    }

    pub fn uses(&self, generator: &str) -> bool {
        self.syllables.iter().any(|s| s.generator == generator)
    }

    /// Replaces every occurrence of `generator` by `replacement`.
    pub fn substitute(&self, generator: &str, replacement: &FreeWord) -> FreeWord {
        let inverse = replacement.invert();
        let mut out = FreeWord::identity();
        for s in &self.syllables {
            if s.generator == generator {
                let piece = if s.exponent > 0 { replacement } else { &inverse };
                for _ in 0..s.exponent.unsigned_abs() {
                    for p in &piece.syllables {
                        out.push(p.clone());
                    }
                }
            } else {
                out.push(s.clone());
            }
        }
        out
    }

    /// All cyclic rotations of the cyclically reduced word, each itself
    /// cyclically reduced.
    fn rotations(&self) -> Vec<FreeWord> {
        let letters: Vec<(String, i64)> = self
            .cyclic_reduce()
            .letters()
            .map(|(g, e)| (g.to_string(), e))
            .collect();
        let n = letters.len();
        if n == 0 {
            return vec![FreeWord::identity()];
        }
        (0..n)
            .map(|i| {
                FreeWord::from_syllables(letters[i..].iter().chain(&letters[..i]).cloned())
                    .cyclic_reduce()
            })
            .collect()
    }

    /// Equality as cyclic words.
    pub fn cyclically_equal(&self, other: &FreeWord) -> bool {
        let target = other.cyclic_reduce();
        self.rotations().contains(&target)
    }

    /// Equality up to cyclic permutation and inversion, i.e. the two words
    /// define the same relator.
    pub fn same_relator(&self, other: &FreeWord) -> bool {
        self.cyclically_equal(other) || self.invert().cyclically_equal(other)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if s.exponent == 1 {
                write!(f, "{}", s.generator)?;
            } else {
                write!(f, "{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.syllables.len()))?;
        for s in &self.syllables {
            seq.serialize_element(&(&s.generator, s.exponent))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<(String, i64)> = Vec::deserialize(deserializer)?;
        Ok(FreeWord::from_syllables(pairs))
    }
}

/// A finite presentation. Relators are stored cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<FreeWord>) -> Result<Self, WordsError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !is_valid_name(g) {
                return Err(WordsError::InvalidName(g.clone()));
            }
            if !seen.insert(g.as_str()) {
                return Err(WordsError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relators {
            if let Some(g) = r.generators().into_iter().find(|g| !seen.contains(g)) {
                return Err(WordsError::UnknownGenerator(g.to_string()));
            }
        }
        let relators = relators.iter().map(FreeWord::cyclic_reduce).collect();
        Ok(Presentation { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.generators.iter().any(|g| g == name)
    }

    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    /// Eliminates `generator` by substituting `replacement` everywhere.
    /// Generators that occur only in `replacement` are appended.
    pub fn tietze_substitute(&self, generator: &str, replacement: &FreeWord) -> Result<Presentation, WordsError> {
        if !self.has_generator(generator) {
            return Err(WordsError::UnknownGenerator(generator.to_string()));
        }
        if replacement.uses(generator) {
            return Err(WordsError::SelfReference(generator.to_string()));
        }
        let mut generators: Vec<String> = self.generators.iter().filter(|g| *g != generator).cloned().collect();
        for g in replacement.syllables() {
            if !generators.contains(&g.generator) {
                generators.push(g.generator.clone());
            }
        }
        let relators = self.relators.iter().map(|r| r.substitute(generator, replacement)).collect();
        Presentation::new(generators, relators)
    }

    /// The first name from `a`, `b`, ..., `z`, `a1`, `b1`, ... not already a generator.
    pub fn fresh_generator(&self) -> String {
        (0..)
            .flat_map(|round| {
                (b'a'..=b'z').map(move |c| {
                    if round == 0 {
                        (c as char).to_string()
                    } else {
                        format!("{}{}", c as char, round)
                    }
                })
            })
            .find(|name| !self.has_generator(name))
            .expect("infinitely many candidate names")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generators.join(", "))?;
        for (i, r) in self.relators.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, r)?;
        }
        write!(f, ">")
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Presentation", 2)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("relators", &self.relators)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            generators: Vec<String>,
            relators: Vec<FreeWord>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Presentation::new(raw.generators, raw.relators).map_err(serde::de::Error::custom)
    }
}

/// A homomorphism to the integers, given by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weighting {
    values: BTreeMap<String, i64>,
}

impl Weighting {
    /// Checks that the values vanish on every relator and generate the integers.
    pub fn new(p: &Presentation, values: BTreeMap<String, i64>) -> Result<Self, WordsError> {
        if let Some(name) = values.keys().find(|g| !p.has_generator(g)) {
            return Err(WordsError::UnknownGenerator(name.clone()));
        }
        let mut full = BTreeMap::new();
        for g in p.generators() {
            full.insert(g.clone(), values.get(g).copied().unwrap_or(0));
        }
        let w = Weighting { values: full };
        for r in p.relators() {
            if w.of_word(r) != 0 {
                return Err(WordsError::WeightingNotHomomorphism(r.to_string()));
            }
        }
        let g = w.values.values().fold(0i64, |acc, &v| num_integer::Integer::gcd(&acc, &v));
        if g != 1 {
            return Err(WordsError::WeightingNotSurjective);
        }
        Ok(w)
    }

    pub fn get(&self, generator: &str) -> i64 {
        self.values.get(generator).copied().unwrap_or(0)
    }

    pub fn values(&self) -> &BTreeMap<String, i64> {
        &self.values
    }

    pub fn of_word(&self, w: &FreeWord) -> i64 {
        w.syllables().iter().map(|s| self.get(&s.generator) * s.exponent).sum()
    }

    pub fn negate(&self) -> Weighting {
        Weighting { values: self.values.iter().map(|(g, v)| (g.clone(), -v)).collect() }
    }
}
