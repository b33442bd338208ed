//! Dense polynomials over the integers, coefficients in ascending order.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZPoly(Vec<BigInt>);

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0 as well, check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        ZPoly(self.0.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(self.0.iter().map(|x| x * k).collect())
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(Signed::abs).max().unwrap_or_default()
    }

    pub fn shift_up(&self, k: usize) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        ZPoly(v)
    }

    /// Exact quotient in `Z[x]`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::default());
        }
        if self.degree() < d.degree() {
            return None;
        }
        // Cheap rejection on the constant terms.
        if !d.coeff(0).is_zero() && !self.coeff(0).is_multiple_of(&d.coeff(0)) {
            return None;
        }
        let mut rem = self.0.clone();
        let dl = d.lc();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(ZPoly::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: `lc(d)^k * self = q d + r` with `deg r < deg d`.
    pub fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let mut r = self.clone();
        let dl = d.lc();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let top = r.lc();
            r = r.scale(&dl) - d.scale(&top).shift_up(shift);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients reduced into `(-m/2, m/2]`.
    pub fn symmetric_mod(&self, m: &BigInt) -> ZPoly {
        let half = m / 2;
        ZPoly::new(
            self.0
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    pub fn one() -> ZPoly {
        ZPoly(vec![BigInt::one()])
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.0.len().max(rhs.0.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.0.len().max(rhs.0.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: ZPoly) -> ZPoly {
        &self - &rhs
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }
}
