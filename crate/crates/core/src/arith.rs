//! Elementary integer arithmetic: factorization, valuations, residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Trial-division factorization of `|n|`; primes ascending with exponents.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2u32) {
        return false;
    }
    let f = factorize(n);
    f.len() == 1 && f[0].1 == 1
}

pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Squarefree integer `m` and rational `s > 0` with `r = s^2 * m`.
pub fn squarefree_decomposition(r: &Rational) -> (BigInt, Rational) {
    assert!(!r.is_zero(), "squarefree part of zero");
    // r = p/q ~ p*q / q^2
    let n: BigInt = r.numer() * r.denom();
    let mut m = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut root = BigInt::one();
    for (p, e) in factorize(&n) {
        if e % 2 == 1 {
            m *= &p;
        }
        root *= p.pow(e / 2);
    }
    let s = Rational::new(root, r.denom().clone());
    (m, s)
}

pub fn is_rational_square(r: &Rational) -> bool {
    if r.is_negative() {
        return false;
    }
    if r.is_zero() {
        return true;
    }
    let n = r.numer();
    let d = r.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    &(&rn * &rn) == n && &(&rd * &rd) == d
}

/// `v_p(n)` for nonzero `n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

pub fn valuation_q(r: &Rational, p: &BigInt) -> i64 {
    valuation(r.numer(), p) as i64 - valuation(r.denom(), p) as i64
}

/// Splits a nonzero rational as `p^v * u` and returns `(v, u mod p^k)` with
/// the residue of the unit part in `[0, p^k)`.
pub fn unit_residue(r: &Rational, p: &BigInt, k: u32) -> (i64, BigInt) {
    let vn = valuation(r.numer(), p);
    let vd = valuation(r.denom(), p);
    let modulus = p.pow(k);
    let un = r.numer() / p.pow(vn);
    let ud = r.denom() / p.pow(vd);
    let inv = mod_inverse(&ud, &modulus).expect("unit denominator");
    (vn as i64 - vd as i64, (un * inv).mod_floor(&modulus))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> i8 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let two = BigInt::from(2u32);
    let mut q = p - &one;
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = two.clone();
    while legendre(&z, p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) / &two), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let b = c.modpow(&two.pow(m - i - 1), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    Some(r)
}

/// Square root of `a` in `Z_p` modulo `p^k`, for `a` a `p`-adic unit square.
/// For `p = 2` this requires `a ≡ 1 (mod 8)` and the root is determined mod `2^(k-1)`.
pub fn sqrt_mod_prime_power(a: &BigInt, p: &BigInt, k: u32) -> Option<BigInt> {
    let two = BigInt::from(2u32);
    if *p == two {
        let modulus = two.pow(k.max(3));
        if a.mod_floor(&BigInt::from(8u32)) != BigInt::one() {
            return None;
        }
        let mut t = BigInt::one();
        for j in 3..k.max(3) {
            let next = two.pow(j + 1);
            if (&t * &t - a).mod_floor(&next) != BigInt::zero() {
                t += two.pow(j - 1);
            }
        }
        return Some(t.mod_floor(&modulus));
    }
    let mut t = sqrt_mod_prime(a, p)?;
    if t.is_zero() {
        return None;
    }
    let mut modulus = p.clone();
    for _ in 1..k {
        modulus *= p;
        let inv = mod_inverse(&(&t * &two), &modulus)?;
        let delta = ((&t * &t - a) * inv).mod_floor(&modulus);
        t = (t - delta).mod_floor(&modulus);
    }
    Some(t)
}
