//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first and kept normalized (no
//! trailing zeros), so the zero polynomial has an empty coefficient vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{common_denominator, format_rational, from_int, rat, sign, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        QPoly::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(Rational::one() / lc))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((QPoly::zero(), QPoly::zero()));
        };
        if sd < dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::constant(rat(1)), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::constant(rat(1)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Rational::one() / r0.leading();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Interval Horner evaluation on `[lo, hi]`; returns an enclosure of the range.
    pub fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut acc = (Rational::zero(), Rational::zero());
        for c in self.coeffs.iter().rev() {
            let products = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mn = products.iter().min().cloned().unwrap();
            let mx = products.iter().max().cloned().unwrap();
            acc = (mn + c, mx + c);
        }
        acc
    }

    /// Sturm sequence `f, f', -rem(f, f'), ...`.
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero divisor").neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Number of distinct real roots in `(lo, hi]`; `None` bounds mean infinity.
    pub fn count_real_roots(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_variations(&seq, lo, false);
        let vb = sign_variations(&seq, hi, true);
        va.saturating_sub(vb)
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading();
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| (c / &lc).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        m + rat(1)
    }

    /// Resultant through the Sylvester determinant.
    pub fn resultant(&self, other: &Self) -> Rational {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Rational::zero();
        };
        if m == 0 && n == 0 {
            return Rational::one();
        }
        let size = m + n;
        let mut syl = QMatrix::zeros(size, size);
        for row in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                syl[(row, row + k)] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                syl[(n + row, row + k)] = c.clone();
            }
        }
        syl.det()
    }

    /// Primitive integer polynomial with the same roots (positive leading coefficient).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(self.coeffs.iter());
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * from_int(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() {
            for c in ints.iter_mut() {
                *c = &*c / &g;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
        }
        ints
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Parses `x^2-2`, `x^3 - 3x - 1`, `2*x^2+x`: integer coefficients,
    /// a single variable `x`, caret powers.
    pub fn parse(src: &str) -> Result<Self> {
        parse_poly(src)
    }
}

fn sign_at_infinity(p: &QPoly, positive: bool) -> i8 {
    let s = sign(&p.leading());
    let deg = p.degree().unwrap_or(0);
    if positive || deg % 2 == 0 {
        s
    } else {
        -s
    }
}

fn sign_variations(seq: &[QPoly], at: Option<&Rational>, upper: bool) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| match at {
            Some(x) => sign(&p.eval(x)),
            None => sign_at_infinity(p, upper),
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                let s = format_rational(&abs);
                if s.contains('/') && i > 0 {
                    write!(f, "({s})")?;
                } else {
                    write!(f, "{s}")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn parse_poly(src: &str) -> Result<QPoly> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut coeffs: Vec<Rational> = Vec::new();
    let err = |msg: &str| Error::Parse(format!("{msg} in polynomial {src:?}"));
    while pos < bytes.len() {
        let mut negative = false;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            negative = bytes[pos] == b'-';
            pos += 1;
        } else if pos != 0 {
            return Err(err("expected '+' or '-'"));
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: Option<BigInt> = if pos > start {
            Some(s[start..pos].parse().map_err(|_| err("bad coefficient"))?)
        } else {
            None
        };
        if pos < bytes.len() && bytes[pos] == b'*' {
            if coeff.is_none() {
                return Err(err("dangling '*'"));
            }
            pos += 1;
        }
        let mut exp = 0usize;
        if pos < bytes.len() && bytes[pos] == b'x' {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let es = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if es == pos {
                    return Err(err("missing exponent"));
                }
                exp = s[es..pos].parse().map_err(|_| err("bad exponent"))?;
                if exp > 64 {
                    return Err(err("exponent too large"));
                }
            }
        } else if coeff.is_none() {
            return Err(err("expected a term"));
        }
        let mut c = from_int(coeff.unwrap_or_else(BigInt::one));
        if negative {
            c = -c;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rational::zero());
        }
        coeffs[exp] += c;
    }
    Ok(QPoly::new(coeffs))
}
