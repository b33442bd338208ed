//! Factorization over the integers: modular factorization at a good prime,
//! linear Hensel lifting, and subset recombination with trial division.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dense::ZPoly;
use super::fp::{is_prime, FpPoly};

/// Irreducible factors of a primitive squarefree polynomial with positive
/// leading coefficient and nonzero constant term.
pub fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    if f.degree() <= 1 {
        return vec![f.clone()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let bound = coefficient_bound(f);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift_all(f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

/// Bound on the coefficients of `lc(f) * g` for any factor `g` of `f`, doubled
/// so that symmetric residues determine them.
fn coefficient_bound(f: &ZPoly) -> BigInt {
    let n = f.degree();
    let two_n = BigInt::one() << n;
    BigInt::from(2) * f.lc().abs() * two_n * BigInt::from(n + 1) * f.max_abs()
}

/// Picks an odd prime not dividing the leading or trailing coefficient at
/// which `f` stays squarefree. Among the first few such primes, the one
/// giving the fewest modular factors wins.
fn choose_prime(f: &ZPoly) -> (u64, Vec<FpPoly>) {
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 5 {
        if is_prime(p) {
            let fp = FpPoly::from_zpoly(f, p);
            let tail = FpPoly::from_zpoly(&ZPoly::constant(f.coeff(0)), p);
            if fp.degree() == f.degree() && !tail.is_zero() && fp.is_squarefree() {
                let factors = fp.factor_squarefree(p);
                tried += 1;
                if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
                    best = Some((p, factors));
                }
                if best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
                    break;
                }
            }
        }
        p += 2;
    }
    let (p, mut factors) = best.expect("a squarefree integer polynomial has good primes");
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    (p, factors)
}

/// Lifts `f = g h (mod p)` with `g` monic to a factorization modulo `p^k`.
fn hensel_lift(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (d, s, t) = g.ext_gcd(h);
    debug_assert_eq!(d.degree(), 0);
    let pb = BigInt::from(p);
    let mut gz = g.to_zpoly();
    let mut hz = h.to_zpoly();
    let mut m = pb.clone();
    for _ in 1..k {
        let err = f - &(&gz * &hz);
        let e = ZPoly::new(err.coeffs().iter().map(|c| c / &m).collect());
        let ep = FpPoly::from_zpoly(&e, p);
        let (q, dg) = t.mul(&ep).divrem(g);
        let dh = s.mul(&ep).add(&q.mul(h));
        gz = &gz + &dg.to_zpoly().scale(&m);
        hz = &hz + &dh.to_zpoly().scale(&m);
        m *= &pb;
    }
    (gz, hz)
}

/// Monic lifts of every modular factor, modulo `p^k`.
fn hensel_lift_all(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    let lc_mod = FpPoly::from_zpoly(&ZPoly::constant(f.lc()), p);
    let mut target = f.clone();
    let mut out = Vec::with_capacity(factors.len());
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            // The leftover cofactor, made monic modulo p^k.
            let lc = target.lc();
            let inv = mod_inverse(&lc, &modulus);
            out.push(target.scale(&inv).symmetric_mod(&modulus));
            break;
        }
        let h = factors[i + 1..].iter().fold(lc_mod.clone(), |acc, x| acc.mul(x));
        let (gz, hz) = hensel_lift(&target, g, &h, p, k);
        out.push(gz.symmetric_mod(&modulus));
        target = hz.symmetric_mod(&modulus);
    }
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    use num_integer::Integer;
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        match find_factor(&rest, &lifted, size, modulus) {
            Some((subset, factor)) => {
                rest = rest.div_exact(&factor).expect("trial division succeeded");
                found.push(factor);
                for i in subset.into_iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.degree() > 0 {
        found.push(rest.primitive_part());
    }
    found
}

fn find_factor(rest: &ZPoly, lifted: &[ZPoly], size: usize, modulus: &BigInt) -> Option<(Vec<usize>, ZPoly)> {
    let lc = ZPoly::constant(rest.lc());
    let target_tail = &rest.lc() * rest.coeff(0);
    let mut subset: Vec<usize> = (0..size).collect();
    loop {
        // Constant-term test before building the full candidate.
        let tail = subset
            .iter()
            .fold(rest.lc(), |acc, &i| (acc * lifted[i].coeff(0)) % modulus);
        let tail = ZPoly::constant(tail).symmetric_mod(modulus).coeff(0);
        if !tail.is_zero() && (&target_tail % &tail).is_zero() {
            let candidate = subset
                .iter()
                .fold(lc.clone(), |acc, &i| (&acc * &lifted[i]).symmetric_mod(modulus))
                .primitive_part();
            if candidate.degree() > 0
                && rest.div_exact(&candidate).is_some() {
                    return Some((subset, candidate));
                }
        }
        if !next_combination(&mut subset, lifted.len()) {
            return None;
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
