//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the symbol or structure-constant code under test:
//! Hilbert symbols come from exhaustive isotropy searches and Clifford
//! products from word reduction.

#![allow(dead_code)]

use k3rm_core::rational::{rat, Rational};
use k3rm_core::{FieldElement, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn q2() -> NumberField {
    NumberField::parse("x^2-2").unwrap()
}

pub fn q5() -> NumberField {
    NumberField::parse("x^2-5").unwrap()
}

/// 2-adic valuation of a nonzero rational.
fn v2(r: &Rational) -> i64 {
    let mut v = 0;
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let two = BigInt::from(2);
    while n.is_even() {
        n /= &two;
        v += 1;
    }
    while d.is_even() {
        d /= &two;
        v -= 1;
    }
    v
}

fn vp(r: &Rational, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut v = 0;
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    v
}

/// `r mod m` for `r` in `Z_(p)`, `m` a power of `p`.
fn reduce(r: &Rational, m: i64) -> i64 {
    let m_big = BigInt::from(m);
    let n = r.numer().mod_floor(&m_big);
    let d = r.denom().mod_floor(&m_big);
    let inv = d.extended_gcd(&m_big).x.mod_floor(&m_big);
    ((n * inv).mod_floor(&m_big)).to_i64().unwrap()
}

fn pow_rat(base: i64, e: i64) -> Rational {
    let mut r = rat(1);
    for _ in 0..e.abs() {
        r *= rat(base);
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// Isotropy of `a x^2 + b y^2 = z^2` over `Q_p` (or `R` when `p = 0`) by
/// exhaustive search modulo `p^(2e+3)`, `e = v_p(2)`.
///
/// After scaling `a`, `b` by squares to valuation 0 or 1, every primitive
/// solution has a coordinate whose partial derivative has valuation at most
/// `e + 1`, so a solution modulo `p^(2e+3)` lifts by Hensel. Scaling a
/// primitive triple by a unit makes one coordinate equal to 1.
pub fn hilbert_oracle_q(a: &Rational, b: &Rational, p: u64) -> i8 {
    if p == 0 {
        return if a.is_negative() && b.is_negative() { -1 } else { 1 };
    }
    let e = if p == 2 { 1 } else { 0 };
    let m = (p as i64).pow(2 * e + 3);
    let norm = |r: &Rational| {
        let v = vp(r, p);
        reduce(&(r * pow_rat(p as i64, -2 * Integer::div_floor(&v, &2))), m)
    };
    let (a, b) = (norm(a), norm(b));
    let f = |x: i64, y: i64, z: i64| (a * x % m * x + b * y % m * y - z * z).rem_euclid(m) == 0;
    let pi = p as usize;
    for x in 0..m {
        for y in 0..m {
            if f(x, y, 1) {
                return 1;
            }
        }
    }
    for y in 0..m {
        for z in (0..m).step_by(pi) {
            if f(1, y, z) {
                return 1;
            }
        }
    }
    for x in (0..m).step_by(pi) {
        for z in (0..m).step_by(pi) {
            if f(x, 1, z) {
                return 1;
            }
        }
    }
    -1
}

/// A quadratic extension of `Z_2` truncated at `pi^n`: elements `c + d t`.
#[derive(Clone, Copy)]
pub struct TwoAdicRing {
    /// `t^2 = t_lin * t + t_const`.
    t_lin: i64,
    t_const: i64,
    c_mod: i64,
    d_mod: i64,
    /// `v(2)`.
    e: u32,
}

impl TwoAdicRing {
    /// `Z_2[sqrt 2]` modulo `pi^7`, `pi = sqrt 2`.
    pub const RAMIFIED_SQRT2: TwoAdicRing = TwoAdicRing { t_lin: 0, t_const: 2, c_mod: 16, d_mod: 8, e: 2 };
    /// `Z_2[w]`, `w^2 = w + 1`, modulo `2^5`.
    pub const INERT_GOLDEN: TwoAdicRing = TwoAdicRing { t_lin: 1, t_const: 1, c_mod: 32, d_mod: 32, e: 1 };

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let dd = x.1 * y.1;
        let c = x.0 * y.0 + dd * self.t_const;
        let d = x.0 * y.1 + x.1 * y.0 + dd * self.t_lin;
        (c.rem_euclid(self.c_mod), d.rem_euclid(self.d_mod))
    }

    fn add(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        ((x.0 + y.0).rem_euclid(self.c_mod), (x.1 + y.1).rem_euclid(self.d_mod))
    }

    fn in_maximal_ideal(&self, x: (i64, i64)) -> bool {
        if self.e == 2 {
            x.0 % 2 == 0
        } else {
            x.0 % 2 == 0 && x.1 % 2 == 0
        }
    }

    fn elements(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for c in 0..self.c_mod {
            for d in 0..self.d_mod {
                out.push((c, d));
            }
        }
        out
    }

    /// `alpha x^2 + beta y^2 = z^2` has a nontrivial solution; `alpha`, `beta`
    /// already scaled to valuation 0 or 1.
    fn isotropic(&self, alpha: (i64, i64), beta: (i64, i64)) -> bool {
        let all = self.elements();
        let ideal: Vec<_> = all.iter().copied().filter(|&x| self.in_maximal_ideal(x)).collect();
        let one = (1, 0);
        let f = |x, y, z| {
            let s = self.add(self.mul(alpha, self.mul(x, x)), self.mul(beta, self.mul(y, y)));
            let zz = self.mul(z, z);
            s == zz
        };
        all.iter().any(|&x| all.iter().any(|&y| f(x, y, one)))
            || all.iter().any(|&y| ideal.iter().any(|&z| f(one, y, z)))
            || ideal.iter().any(|&x| ideal.iter().any(|&z| f(x, one, z)))
    }
}

/// Hilbert symbol at the unique place above 2 of `Q(sqrt 2)` (ramified) or
/// `Q(sqrt 5)` (inert), for fields given by `x^2 - 2` or `x^2 - 5`.
pub fn hilbert_oracle_above_two(f: &NumberField, alpha: &FieldElement, beta: &FieldElement) -> i8 {
    let m = -f.minpoly().coeff(0);
    let (ring, to_local): (TwoAdicRing, Box<dyn Fn(&FieldElement) -> (Rational, Rational, i64)>) =
        if m == rat(2) {
            (
                TwoAdicRing::RAMIFIED_SQRT2,
                Box::new(|x: &FieldElement| {
                    let (c, d) = (x.coords()[0].clone(), x.coords()[1].clone());
                    let v = [(c.clone(), 0), (d.clone(), 1)]
                        .iter()
                        .filter(|(r, _)| !r.is_zero())
                        .map(|(r, o)| 2 * v2(r) + o)
                        .min()
                        .unwrap();
                    (c, d, v)
                }),
            )
        } else if m == rat(5) {
            (
                TwoAdicRing::INERT_GOLDEN,
                Box::new(|x: &FieldElement| {
                    // p + q sqrt5 = (p - q) + 2q w
                    let (p, q) = (x.coords()[0].clone(), x.coords()[1].clone());
                    let (c, d) = (&p - &q, &q * rat(2));
                    let v = [&c, &d].iter().filter(|r| !r.is_zero()).map(|r| v2(r)).min().unwrap();
                    (c, d, v)
                }),
            )
        } else {
            panic!("oracle covers Q(sqrt 2) and Q(sqrt 5) only");
        };
    // 2 = pi^2 in the ramified ring, so dividing by 2 lowers v by 2; in the
    // inert ring v is the 2-adic valuation and we divide by 4 instead.
    let step = if ring.e == 2 { 1 } else { 2 };
    let local = |x: &FieldElement| {
        let (c, d, v) = to_local(x);
        let s = pow_rat(2, -step * Integer::div_floor(&v, &2));
        (reduce(&(c * &s), ring.c_mod), reduce(&(d * &s), ring.d_mod))
    };
    if ring.isotropic(local(alpha), local(beta)) {
        1
    } else {
        -1
    }
}

/// Product of basis monomials `e_S e_T` by explicit word reduction:
/// concatenate, bubble-sort with a sign per transposition, contract `e_i e_i = d_i`.
pub fn word_product(diag: &[Rational], s: usize, t: usize) -> (Rational, usize) {
    let n = diag.len();
    let mut word: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
    word.extend((0..n).filter(|i| t >> i & 1 == 1));
    let mut coeff = rat(1);
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < word.len() {
            if word[i] > word[i + 1] {
                word.swap(i, i + 1);
                coeff = -coeff;
                changed = true;
            } else if word[i] == word[i + 1] {
                coeff *= &diag[word[i]];
                word.drain(i..i + 2);
                changed = true;
                continue;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    (coeff, word.iter().fold(0, |acc, i| acc | 1 << i))
}

/// Weyl dimension of `W_k` for `SL2^d`.
pub fn weyl_dim(k: &[u32]) -> u64 {
    k.iter().map(|&x| x as u64 + 1).product()
}

pub fn is_square_rational(r: &Rational) -> bool {
    if r.is_negative() {
        return false;
    }
    let isq = |n: &BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    isq(r.numer()) && isq(r.denom())
}
