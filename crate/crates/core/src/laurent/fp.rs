//! Dense polynomials over a prime field `Z/p`, and their factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dense::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1, "{a} is not invertible mod {p}");
    e.x.rem_euclid(p as i128) as u64
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_zpoly(f: &ZPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        FpPoly::new(
            p,
            f.coeffs().iter().map(|x| x.mod_floor(&pb).to_u64().expect("residue fits")).collect(),
        )
    }

    /// Lift to integer coefficients in `[0, p)`.
    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::new(self.c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(p, out)
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&x| mul_mod(x, k, self.p)).collect())
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lc(), self.p))
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.lc(), p);
        let mut r = self.c.clone();
        let dd = d.degree();
        let mut q = vec![0u64; self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let top = r[i + dd];
            if top == 0 {
                continue;
            }
            let c = mul_mod(top, inv, p);
            q[i] = c;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mul_mod(c, dc, p)) % p;
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::new(p, vec![1]), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::new(p, vec![1]));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let k = inv_mod(r0.lc(), p);
        (r0.scale(k), s0.scale(k), t0.scale(k))
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.c.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect(),
        )
    }

    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut result = FpPoly::new(self.p, vec![1]).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Monic irreducible factors of a squarefree polynomial of positive
    /// degree, in no particular order. Requires an odd prime.
    pub fn factor_squarefree(&self, seed: u64) -> Vec<FpPoly> {
        assert!(self.p % 2 == 1, "equal-degree splitting needs an odd prime");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (g, d) in self.monic().distinct_degree() {
            g.equal_degree(d, &mut rng, &mut out);
        }
        out
    }

    fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut f = self.clone();
        let mut out = Vec::new();
        let mut h = FpPoly::x(p);
        let pe = BigUint::from(p);
        let mut d = 1;
        while !f.is_zero() && f.degree() >= 2 * d {
            h = h.pow_mod(&pe, &f);
            let g = h.sub(&FpPoly::x(p)).gcd(&f);
            if g.degree() > 0 {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree() > 0 {
            let deg = f.degree();
            out.push((f.monic(), deg));
        }
        out
    }

    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let n = self.degree();
        if n == d {
            out.push(self.monic());
            return;
        }
        let p = self.p;
        let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
        loop {
            let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree() == 0 {
                continue;
            }
            let g = a.gcd(self);
            let split = if g.degree() > 0 {
                g
            } else {
                a.pow_mod(&e, self).sub(&FpPoly::new(p, vec![1])).gcd(self)
            };
            if split.degree() > 0 && split.degree() < n {
                let rest = self.divrem(&split).0;
                split.equal_degree(d, rng, out);
                rest.equal_degree(d, rng, out);
                return;
            }
        }
    }
}
