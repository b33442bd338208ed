//! Decision procedures read off the Alexander polynomial and the
//! presentation: prime-index subgroup counts of the kernel, index two,
//! surjection onto the integers, largeness, finite generation and the
//! knot-group conditions.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::alexander::{alexander_polynomial_with_primes, AlexanderError};
use crate::laurent::{factor_over_z, is_prime, LaurentError, LaurentPoly, Span};
use crate::words::{abelianization_invariants, Presentation, Weighting};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("not a knot polynomial: value at 1 is {0}, expected +1 or -1")]
    NotAKnotPolynomial(String),
    #[error("presentation has {0} relators; exactly one is required")]
    NotOneRelator(usize),
}

/// A count that may be infinite. Serialized as a number when it fits in 64
/// bits, as a decimal string otherwise, and as `"infinite"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Count {
    Finite(BigUint),
    Infinite,
}

impl Count {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => match n.to_u64() {
                Some(v) => s.serialize_u64(v),
                None => s.serialize_str(&n.to_string()),
            },
            Count::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// `r_p` homomorphisms to `Z/p` and `n_p` normal subgroups of index `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCount {
    pub r_p: Count,
    pub n_p: Count,
}

pub fn count_prime_index(delta: &LaurentPoly, p: u64) -> Result<PrimeCount, CriteriaError> {
    let d = delta.reduce_mod(p)?.degree_span();
    Ok(match d {
        Span::Infinite => PrimeCount { r_p: Count::Infinite, n_p: Count::Infinite },
        Span::Finite(d) => {
            let r = BigUint::from(p).pow(d as u32);
            let n = (&r - BigUint::one()) / BigUint::from(p - 1);
            PrimeCount { r_p: Count::Finite(r), n_p: Count::Finite(n) }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeClass {
    None,
    Finite(Count),
    Infinite,
}

pub fn classify_prime(delta: &LaurentPoly, p: u64) -> Result<PrimeClass, CriteriaError> {
    let count = count_prime_index(delta, p)?;
    Ok(match count.n_p {
        Count::Infinite => PrimeClass::Infinite,
        Count::Finite(n) if n.is_zero() => PrimeClass::None,
        n => PrimeClass::Finite(n),
    })
}

fn check_knot_polynomial(delta: &LaurentPoly) -> Result<(), CriteriaError> {
    let v = delta.value_at_one();
    if v.magnitude().is_one() {
        Ok(())
    } else {
        Err(CriteriaError::NotAKnotPolynomial(v.to_string()))
    }
}

/// Whether index-two subgroups exist: false exactly when every coefficient
/// of the symmetric form other than the middle one is even.
pub fn index2_criterion(delta: &LaurentPoly) -> Result<bool, CriteriaError> {
    let c = delta.symmetric_form().map_err(|e| match e {
        LaurentError::NotSymmetric => CriteriaError::NotSymmetric,
        other => CriteriaError::Laurent(other),
    })?;
    check_knot_polynomial(delta)?;
    Ok(c.iter().skip(1).any(|x| x.is_odd()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurjectionWitness {
    Factor(LaurentPoly),
    /// Δ = 0: the kernel has a free summand rationally.
    FreeRank,
}

impl Serialize for SurjectionWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SurjectionWitness::Factor(f) => f.serialize(s),
            SurjectionWitness::FreeRank => s.serialize_str("free_rank"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectionVerdict {
    pub answer: bool,
    pub witness: Option<SurjectionWitness>,
}

/// Smallest non-constant irreducible factor monic at both ends, if any.
pub fn monic_factor(f: &LaurentPoly) -> Option<LaurentPoly> {
    let fac = factor_over_z(f).ok()?;
    fac.flat().into_iter().find(|g| g.is_monic_both_ends().unwrap_or(false))
}

#[allow(non_snake_case)]
pub fn surjects_to_Z(delta: &LaurentPoly) -> SurjectionVerdict {
    if delta.is_zero() {
        return SurjectionVerdict { answer: true, witness: Some(SurjectionWitness::FreeRank) };
    }
    match monic_factor(delta) {
        Some(g) => SurjectionVerdict { answer: true, witness: Some(SurjectionWitness::Factor(g)) },
        None => SurjectionVerdict { answer: false, witness: None },
    }
}

/// A flag, not a proof: Δ vanishes, or vanishes modulo the given prime.
pub fn largeness_flag(delta: &LaurentPoly, p: Option<u64>) -> Result<bool, CriteriaError> {
    if delta.is_zero() {
        return Ok(true);
    }
    match p {
        Some(p) => Ok(delta.reduce_mod(p)?.is_zero()),
        None => Ok(false),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FgVerdict {
    FG,
    NotFG,
    OneSided,
    Inapplicable,
}

/// Heights of the closed path traced by `r` at each of its cyclic vertices.
pub fn height_profile(r: &crate::words::FreeWord, chi: &Weighting) -> Vec<i64> {
    let mut h = 0;
    let mut out = Vec::new();
    for (g, e) in r.letters() {
        out.push(h);
        h += e * chi.get(g);
    }
    out
}

pub fn brown_finite_generation(p: &Presentation, chi: &Weighting) -> Result<FgVerdict, CriteriaError> {
    if p.relators().len() != 1 {
        return Err(CriteriaError::NotOneRelator(p.relators().len()));
    }
    let r = &p.relators()[0];
    if p.generators().len() != 2 || r.is_identity() {
        return Ok(FgVerdict::Inapplicable);
    }
    let heights = height_profile(r, chi);
    let max = *heights.iter().max().expect("nonempty relator");
    let min = *heights.iter().min().expect("nonempty relator");
    let unique_max = heights.iter().filter(|&&h| h == max).count() == 1;
    let unique_min = heights.iter().filter(|&&h| h == min).count() == 1;
    Ok(match (unique_max, unique_min) {
        (true, true) => FgVerdict::FG,
        (false, false) => FgVerdict::NotFG,
        _ => FgVerdict::OneSided,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct KervaireReport {
    pub h1_is_Z: bool,
    pub deficiency_one: bool,
    /// `None` means unknown, not false.
    pub weight_one_witness: Option<String>,
    pub h2_zero_inferred: bool,
}

impl KervaireReport {
    pub fn all_hold(&self) -> bool {
        self.h1_is_Z && self.deficiency_one && self.weight_one_witness.is_some() && self.h2_zero_inferred
    }
}

/// For two generators and one relator, a generator whose killing leaves the
/// relator with exponent sum `±1` in the other one normally generates.
#[allow(non_snake_case)]
pub fn kervaire_check(p: &Presentation) -> KervaireReport {
    let (rank, torsion) = abelianization_invariants(p);
    let h1_is_Z = rank == 1 && torsion.is_empty();
    let deficiency_one = p.deficiency() == 1;
    let weight_one_witness = if p.generators().len() == 2 && p.relators().len() == 1 {
        let r = &p.relators()[0];
        let gens = p.generators();
        (0..2).find(|&i| r.exponent_sum(&gens[1 - i]).abs() == 1).map(|i| gens[i].clone())
    } else {
        None
    };
    KervaireReport { h1_is_Z, deficiency_one, weight_one_witness, h2_zero_inferred: h1_is_Z && deficiency_one }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeRecord {
    pub p: u64,
    pub d: Span,
    pub r_p: Count,
    pub n_p: Count,
    pub classification: PrimeClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct CoverReport {
    pub delta: LaurentPoly,
    pub beta1_Q: Span,
    pub primes: Vec<PrimeRecord>,
    pub index2: bool,
    pub surjects_to_Z: SurjectionVerdict,
    pub large_flag: bool,
    pub kernel_fg: FgVerdict,
    pub kervaire: KervaireReport,
}

pub fn prime_record(delta: &LaurentPoly, p: u64) -> Result<PrimeRecord, CriteriaError> {
    if !is_prime(p) {
        return Err(LaurentError::NotPrime(p).into());
    }
    let count = count_prime_index(delta, p)?;
    Ok(PrimeRecord {
        p,
        d: delta.reduce_mod(p)?.degree_span(),
        classification: classify_prime(delta, p)?,
        r_p: count.r_p,
        n_p: count.n_p,
    })
}

pub fn analyze(p: &Presentation, chi: &Weighting, primes: &[u64]) -> Result<CoverReport, CriteriaError> {
    let delta = alexander_polynomial_with_primes(p, chi, primes)?.delta;
    let records = primes.iter().map(|&q| prime_record(&delta, q)).collect::<Result<Vec<_>, _>>()?;
    let index2 = count_prime_index(&delta, 2)?.n_p.finite().is_none_or(|n| !n.is_zero());
    let mut large_flag = largeness_flag(&delta, None)?;
    for &q in primes {
        large_flag |= largeness_flag(&delta, Some(q))?;
    }
    let kernel_fg = match brown_finite_generation(p, chi) {
        Ok(v) => v,
        Err(CriteriaError::NotOneRelator(_)) => FgVerdict::Inapplicable,
        Err(e) => return Err(e),
    };
    Ok(CoverReport {
        beta1_Q: delta.degree_span(),
        surjects_to_Z: surjects_to_Z(&delta),
        primes: records,
        index2,
        large_flag,
        kernel_fg,
        kervaire: kervaire_check(p),
        delta,
    })
}
