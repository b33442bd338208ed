//! Presentations of two-bridge knot groups.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::words::{FreeWord, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoBridgeError {
    #[error("invalid two-bridge parameters ({p}, {q}): need p odd, 0 < q < p, gcd(p, q) = 1")]
    InvalidParams { p: i64, q: i64 },
    #[error("family index must be at least 1")]
    InvalidFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoBridgeParams {
    p: u64,
    q: u64,
}

impl TwoBridgeParams {
    pub fn new(p: i64, q: i64) -> Result<Self, TwoBridgeError> {
        if p <= 0 || p % 2 == 0 || q <= 0 || q >= p || p.gcd(&q) != 1 {
            return Err(TwoBridgeError::InvalidParams { p, q });
        }
        Ok(TwoBridgeParams { p: p as u64, q: q as u64 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Every valid pair with `p <= max_p`.
    pub fn all_up_to(max_p: u64) -> Vec<TwoBridgeParams> {
        (3..=max_p as i64)
            .step_by(2)
            .flat_map(|p| (1..p).filter_map(move |q| TwoBridgeParams::new(p, q).ok()))
            .collect()
    }
}

/// `e_i = (-1)^floor(iq/p)` for `i = 1..p-1`.
pub fn epsilon_sequence(params: TwoBridgeParams) -> Vec<i64> {
    (1..params.p)
        .map(|i| if (i * params.q / params.p).is_multiple_of(2) { 1 } else { -1 })
        .collect()
}

/// `<u, v | u w v^-1 w^-1>` where `w = v^e1 u^e2 v^e3 ...`. For even `q`
/// the signs are those of the odd parameter `p - q`, which amounts to
/// flipping every even-indexed sign.
pub fn presentation(params: TwoBridgeParams) -> Presentation {
    let flip = params.q.is_multiple_of(2);
    let w = FreeWord::from_syllables(epsilon_sequence(params).into_iter().enumerate().map(|(i, e)| {
        let e = if flip && i % 2 == 1 { -e } else { e };
        (if i % 2 == 0 { "v" } else { "u" }, e)
    }));
    let relator = FreeWord::generator("u")
        .multiply(&w)
        .multiply(&FreeWord::power("v", -1))
        .multiply(&w.invert());
    Presentation::new(vec!["u".into(), "v".into()], vec![relator]).expect("well-formed presentation")
}

/// `<u, a | u a^n u a^-n u^-1 a^(n-1) u^-1 a^-n>`.
pub fn family_presentation(n: i64) -> Result<Presentation, TwoBridgeError> {
    if n < 1 {
        return Err(TwoBridgeError::InvalidFamily);
    }
    let relator = FreeWord::from_syllables([
        ("u", 1),
        ("a", n),
        ("u", 1),
        ("a", -n),
        ("u", -1),
        ("a", n - 1),
        ("u", -1),
        ("a", -n),
    ]);
    Ok(Presentation::new(vec!["u".into(), "a".into()], vec![relator]).expect("well-formed presentation"))
}
