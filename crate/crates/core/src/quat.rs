//! Quaternion algebras `(alpha, beta)` over the rationals and over real
//! quadratic fields: local Hilbert symbols, ramification, corestriction.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{
    is_prime, legendre, mod_inverse, prime_divisors, sqrt_mod_prime_power,
    squarefree_decomposition, unit_residue, valuation, valuation_q,
};
use crate::error::{Error, Result};
use crate::kquad::KQuadraticForm;
use crate::numfield::{FieldElement, NumberField};
use crate::rational::{format_rational, from_int, rat, Rational};

/// Environment variable overriding the ceiling of [`quaternion_from_class`].
pub const SEARCH_BOUND_ENV: &str = "K3RM_SEARCH_BOUND";
pub const DEFAULT_SEARCH_BOUND: u64 = 10_000;
/// Largest p-adic precision tried before giving up on a split place.
const MAX_PRECISION: u32 = 1 << 12;

fn serialize_int<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

/// A place of the rationals. Primes sort before infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceQ {
    Prime(BigInt),
    Infinity,
}

impl PlaceQ {
    pub fn prime(p: i64) -> Self {
        PlaceQ::Prime(BigInt::from(p))
    }
}

impl fmt::Display for PlaceQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceQ::Prime(p) => write!(f, "{p}"),
            PlaceQ::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for PlaceQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "oo" | "∞") {
            return Ok(PlaceQ::Infinity);
        }
        let p: BigInt = t
            .parse()
            .map_err(|_| Error::InvalidPlace(format!("cannot parse place {s:?}")))?;
        if !is_prime(&p) {
            return Err(Error::InvalidPlace(format!("{p} is not prime")));
        }
        Ok(PlaceQ::Prime(p))
    }
}

impl Serialize for PlaceQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PlaceQ::Prime(p) => serialize_int(p, s),
            PlaceQ::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PlaceQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(v) => v.to_string(),
            Raw::Text(t) => t,
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// How a rational prime behaves in a real quadratic field `Q(sqrt m)`.
/// The two split places are told apart by the image of `sqrt m` in `Z_p`:
/// `Split1` takes the root whose residue lies in `[1, (p-1)/2]` (for `p = 2`:
/// the root `≡ 1 mod 4`), `Split2` its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Split1,
    Split2,
    Inert,
    Ramified,
}

impl fmt::Display for SplitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SplitTag::Split1 => "split1",
            SplitTag::Split2 => "split2",
            SplitTag::Inert => "inert",
            SplitTag::Ramified => "ramified",
        };
        f.write_str(s)
    }
}

/// A place of a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceK {
    Finite {
        #[serde(serialize_with = "serialize_int")]
        p: BigInt,
        tag: SplitTag,
    },
    Real(usize),
}

impl PlaceK {
    pub fn finite(p: i64, tag: SplitTag) -> Self {
        PlaceK::Finite {
            p: BigInt::from(p),
            tag,
        }
    }

    pub fn below(&self) -> PlaceQ {
        match self {
            PlaceK::Finite { p, .. } => PlaceQ::Prime(p.clone()),
            PlaceK::Real(_) => PlaceQ::Infinity,
        }
    }
}

impl fmt::Display for PlaceK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceK::Finite { p, tag } => write!(f, "{p}:{tag}"),
            PlaceK::Real(i) => write!(f, "real:{i}"),
        }
    }
}

impl FromStr for PlaceK {
    type Err = Error;

    /// Accepts `real:i` and `p:tag`, e.g. `real:0`, `7:split1`, `2:ramified`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPlace(format!("cannot parse place {s:?}"));
        let (head, tail) = s.trim().split_once(':').ok_or_else(bad)?;
        if head == "real" || head == "inf" {
            return Ok(PlaceK::Real(tail.parse().map_err(|_| bad())?));
        }
        let p: BigInt = head.parse().map_err(|_| bad())?;
        let tag = match tail {
            "split1" => SplitTag::Split1,
            "split2" => SplitTag::Split2,
            "inert" => SplitTag::Inert,
            "ramified" => SplitTag::Ramified,
            _ => return Err(bad()),
        };
        Ok(PlaceK::Finite { p, tag })
    }
}

/// Class in `Br(Q)[2]`, recorded by its finite set of ramified places.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BrauerClass {
    ramified: BTreeSet<PlaceQ>,
}

impl BrauerClass {
    pub fn new<I: IntoIterator<Item = PlaceQ>>(places: I) -> Result<Self> {
        let ramified: BTreeSet<PlaceQ> = places.into_iter().collect();
        if ramified.len() % 2 == 1 {
            return Err(Error::OddRamification(ramified.len()));
        }
        Ok(BrauerClass { ramified })
    }

    pub fn trivial() -> Self {
        BrauerClass::default()
    }

    pub fn places(&self) -> &BTreeSet<PlaceQ> {
        &self.ramified
    }

    pub fn contains(&self, v: &PlaceQ) -> bool {
        self.ramified.contains(v)
    }

    pub fn is_trivial(&self) -> bool {
        self.ramified.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ramified.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ramified.is_empty()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.ramified.iter().map(|p| p.to_string()).collect()
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

/// The quaternion algebra with `i^2 = alpha`, `j^2 = beta`, `ij = -ji`.
/// Algebras over the rationals use the degree-one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub field: NumberField,
    pub alpha: FieldElement,
    pub beta: FieldElement,
}

impl QuaternionAlgebra {
    pub fn new(field: NumberField, alpha: FieldElement, beta: FieldElement) -> Result<Self> {
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(QuaternionAlgebra { field, alpha, beta })
    }

    pub fn over_q(a: Rational, b: Rational) -> Result<Self> {
        let q = NumberField::rationals();
        let (alpha, beta) = (q.from_rational(a), q.from_rational(b));
        QuaternionAlgebra::new(q, alpha, beta)
    }

    /// `(a, b) ⊗ K` for rational `a, b`.
    pub fn base_change(&self, f: &NumberField) -> Result<Self> {
        let (a, b) = self
            .rational_pair()
            .ok_or_else(|| Error::InvalidInput("base change needs a rational algebra".into()))?;
        QuaternionAlgebra::new(f.clone(), f.from_rational(a), f.from_rational(b))
    }

    pub fn rational_pair(&self) -> Option<(Rational, Rational)> {
        Some((self.alpha.as_rational()?, self.beta.as_rational()?))
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

// ---- local symbols over Q_p from valuations and unit residues ----

fn parity(v: i64) -> bool {
    v.rem_euclid(2) == 1
}

/// Hilbert symbol over `Q_p` of `p^va * ua` and `p^vb * ub`; units are given
/// by residues mod `p` (odd `p`) or mod 8 (`p = 2`).
fn local_symbol(p: &BigInt, va: i64, ua: &BigInt, vb: i64, ub: &BigInt) -> i8 {
    if *p == BigInt::from(2) {
        let eps = |u: &BigInt| {
            let r = u.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0);
            (r % 4) == 3
        };
        let omega = |u: &BigInt| {
            let r = u.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0);
            r == 3 || r == 5
        };
        let odd = (eps(ua) && eps(ub)) ^ (parity(va) && omega(ub)) ^ (parity(vb) && omega(ua));
        return if odd { -1 } else { 1 };
    }
    let mut s: i8 = 1;
    let eps_odd = ((p - 1u32) / 2u32).is_odd();
    if parity(va) && parity(vb) && eps_odd {
        s = -s;
    }
    if parity(vb) {
        s *= legendre(ua, p);
    }
    if parity(va) {
        s *= legendre(ub, p);
    }
    s
}

/// Hilbert symbol `(a, b)_v` over the rationals.
pub fn hilbert_q(a: &Rational, b: &Rational, v: &PlaceQ) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    match v {
        PlaceQ::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        PlaceQ::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::InvalidPlace(format!("{p} is not prime")));
            }
            let k = if *p == BigInt::from(2) { 3 } else { 1 };
            let (va, ua) = unit_residue(a, p, k);
            let (vb, ub) = unit_residue(b, p, k);
            Ok(local_symbol(p, va, &ua, vb, &ub))
        }
    }
}

fn rational_primes(r: &Rational) -> Vec<BigInt> {
    let mut v = prime_divisors(r.numer());
    v.extend(prime_divisors(r.denom()));
    v
}

/// Places where `(a, b)` ramifies.
pub fn ramification_q(a: &Rational, b: &Rational) -> Result<BrauerClass> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut candidates: BTreeSet<PlaceQ> = BTreeSet::new();
    candidates.insert(PlaceQ::Infinity);
    candidates.insert(PlaceQ::prime(2));
    for p in rational_primes(a).into_iter().chain(rational_primes(b)) {
        candidates.insert(PlaceQ::Prime(p));
    }
    let mut ramified = Vec::new();
    for v in candidates {
        if hilbert_q(a, b, &v)? == -1 {
            ramified.push(v);
        }
    }
    BrauerClass::new(ramified).map_err(|e| Error::Internal(format!("product formula failed: {e}")))
}

// ---- real quadratic fields ----

/// `K = Q(sqrt m)` with `a = (-c1 + s sqrt m) / 2` for the generator `a`.
struct QuadraticData {
    m: BigInt,
    s: Rational,
    c1: Rational,
}

impl QuadraticData {
    fn new(f: &NumberField) -> Result<Self> {
        if f.degree() != 2 {
            return Err(Error::NotQuadraticField(f.degree()));
        }
        let (m, s) = squarefree_decomposition(&f.power_basis_discriminant());
        Ok(QuadraticData {
            m,
            s,
            c1: f.minpoly().coeff(1),
        })
    }

    /// Coordinates `(x, y)` with `alpha = x + y sqrt m`.
    fn split_coords(&self, alpha: &FieldElement) -> (Rational, Rational) {
        let c = alpha.coords();
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        (&c[0] - &c[1] * &self.c1 * &half, &c[1] * &self.s * &half)
    }

    fn tag(&self, p: &BigInt) -> SplitTag {
        if *p == BigInt::from(2) {
            return match self.m.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0) {
                1 => SplitTag::Split1,
                5 => SplitTag::Inert,
                _ => SplitTag::Ramified,
            };
        }
        if self.m.is_multiple_of(p) {
            SplitTag::Ramified
        } else if legendre(&self.m, p) == 1 {
            SplitTag::Split1
        } else {
            SplitTag::Inert
        }
    }

    fn places_above(&self, p: &BigInt) -> Vec<PlaceK> {
        match self.tag(p) {
            SplitTag::Split1 | SplitTag::Split2 => vec![
                PlaceK::Finite {
                    p: p.clone(),
                    tag: SplitTag::Split1,
                },
                PlaceK::Finite {
                    p: p.clone(),
                    tag: SplitTag::Split2,
                },
            ],
            tag => vec![PlaceK::Finite { p: p.clone(), tag }],
        }
    }

    /// The root of `x^2 = m` in `Z_p` attached to the given split place, mod `p^n`.
    fn sqrt_m(&self, p: &BigInt, n: u32, tag: SplitTag) -> Result<BigInt> {
        let two = BigInt::from(2);
        let modulus = p.pow(n);
        let t = sqrt_mod_prime_power(&self.m, p, if *p == two { n + 1 } else { n })
            .ok_or_else(|| Error::Internal(format!("no square root of {} mod {p}", self.m)))?
            .mod_floor(&modulus);
        let first = if *p == two {
            t.mod_floor(&BigInt::from(4)).is_one()
        } else {
            t.mod_floor(p) <= (p - 1u32) / 2u32
        };
        let t = if first == (tag == SplitTag::Split1) {
            t
        } else {
            (&modulus - t).mod_floor(&modulus)
        };
        Ok(t)
    }
}

fn vp_opt(r: &Rational, p: &BigInt) -> Option<i64> {
    (!r.is_zero()).then(|| valuation_q(r, p))
}

/// Residue mod `p` of a `p`-integral rational.
fn residue(r: &Rational, p: &BigInt) -> BigInt {
    if r.is_zero() || valuation_q(r, p) > 0 {
        return BigInt::zero();
    }
    unit_residue(r, p, 1).1
}

/// `p^(-k) r` as a rational.
fn shift(r: &Rational, p: &BigInt, k: i64) -> Rational {
    let pk = from_int(p.pow(k.unsigned_abs() as u32));
    if k >= 0 {
        r / pk
    } else {
        r * pk
    }
}

/// Image of `x + y t` in `Q_p` as `(valuation, unit residue mod p^(n - v))`,
/// or `None` when `n` digits do not determine three digits of the unit.
fn padic_value(x: &Rational, y: &Rational, p: &BigInt, t: &BigInt, n: u32) -> Option<(i64, BigInt)> {
    let den = x.denom().lcm(y.denom());
    let big_x = (x * from_int(den.clone())).to_integer();
    let big_y = (y * from_int(den.clone())).to_integer();
    let e = valuation(&den, p) as i64;
    let modulus = p.pow(n);
    let v_mod = (big_x + big_y * t).mod_floor(&modulus);
    if v_mod.is_zero() {
        return None;
    }
    let v = valuation(&v_mod, p);
    if n - v < 3 {
        return None;
    }
    let m2 = p.pow(n - v);
    let unit_den = &den / p.pow(e as u32);
    let inv = mod_inverse(&unit_den, &m2)?;
    Some((v as i64 - e, ((v_mod / p.pow(v)) * inv).mod_floor(&m2)))
}

/// Element of `F_p[sqrt m]` for `m` a non-residue.
#[derive(Clone, Debug, PartialEq)]
struct Fp2 {
    x: BigInt,
    y: BigInt,
}

struct Fp2Ctx<'a> {
    p: &'a BigInt,
    m: BigInt,
}

impl Fp2Ctx<'_> {
    fn mul(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        Fp2 {
            x: (&a.x * &b.x + &a.y * &b.y * &self.m).mod_floor(self.p),
            y: (&a.x * &b.y + &a.y * &b.x).mod_floor(self.p),
        }
    }

    fn inv(&self, a: &Fp2) -> Fp2 {
        let norm = (&a.x * &a.x - &a.y * &a.y * &self.m).mod_floor(self.p);
        let ni = mod_inverse(&norm, self.p).expect("nonzero element of a field");
        Fp2 {
            x: (&a.x * &ni).mod_floor(self.p),
            y: (-&a.y * &ni).mod_floor(self.p),
        }
    }

    fn pow(&self, a: &Fp2, e: &BigInt) -> Fp2 {
        let mut base = if e.is_negative() { self.inv(a) } else { a.clone() };
        let mut e = e.abs();
        let mut acc = Fp2 {
            x: BigInt::one(),
            y: BigInt::zero(),
        };
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Hilbert symbol of `(alpha, beta)` at a place of a real quadratic field.
pub fn hilbert_k(f: &NumberField, alpha: &FieldElement, beta: &FieldElement, w: &PlaceK) -> Result<i8> {
    let qd = QuadraticData::new(f)?;
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ZeroInput);
    }
    match w {
        PlaceK::Real(i) => {
            if *i >= 2 {
                return Err(Error::InvalidPlace(format!("real:{i}")));
            }
            let both = f.sign_at(alpha, *i)? < 0 && f.sign_at(beta, *i)? < 0;
            Ok(if both { -1 } else { 1 })
        }
        PlaceK::Finite { p, tag } => {
            if !is_prime(p) {
                return Err(Error::InvalidPlace(format!("{p} is not prime")));
            }
            let actual = qd.tag(p);
            let valid = match tag {
                SplitTag::Split1 | SplitTag::Split2 => actual == SplitTag::Split1,
                t => *t == actual,
            };
            if !valid {
                return Err(Error::InvalidPlace(format!(
                    "{p} is {} in this field, not {tag}",
                    if actual == SplitTag::Split1 { "split" } else if actual == SplitTag::Inert { "inert" } else { "ramified" }
                )));
            }
            finite_symbol(f, &qd, alpha, beta, p, *tag)
        }
    }
}

fn finite_symbol(
    f: &NumberField,
    qd: &QuadraticData,
    alpha: &FieldElement,
    beta: &FieldElement,
    p: &BigInt,
    tag: SplitTag,
) -> Result<i8> {
    let two = BigInt::from(2);
    let (xa, ya) = qd.split_coords(alpha);
    let (xb, yb) = qd.split_coords(beta);
    match tag {
        SplitTag::Split1 | SplitTag::Split2 => {
            let vals = [&xa, &ya, &xb, &yb]
                .iter()
                .filter_map(|r| vp_opt(r, p))
                .map(|v| v.unsigned_abs())
                .chain(std::iter::once(u64::from(valuation(&qd.m, p))))
                .max()
                .unwrap_or(0) as u32;
            let mut n = 2 * vals + 3;
            while n <= MAX_PRECISION {
                let t = qd.sqrt_m(p, n, tag)?;
                if let (Some((va, ua)), Some((vb, ub))) =
                    (padic_value(&xa, &ya, p, &t, n), padic_value(&xb, &yb, p, &t, n))
                {
                    return Ok(local_symbol(p, va, &ua, vb, &ub));
                }
                n *= 2;
            }
            Err(Error::Internal(format!("p-adic precision exhausted at {p}")))
        }
        _ if *p == two => symbol_by_product_formula(f, qd, alpha, beta),
        SplitTag::Inert => {
            let unit = |x: &Rational, y: &Rational| -> (i64, Fp2) {
                let w = [vp_opt(x, p), vp_opt(y, p)].into_iter().flatten().min().unwrap_or(0);
                let u = Fp2 {
                    x: residue(&shift(x, p, w), p),
                    y: residue(&shift(y, p, w), p),
                };
                (w, u)
            };
            let (a, ua) = unit(&xa, &ya);
            let (b, ub) = unit(&xb, &yb);
            let ctx = Fp2Ctx {
                p,
                m: qd.m.mod_floor(p),
            };
            let mut c = ctx.mul(&ctx.pow(&ua, &BigInt::from(b)), &ctx.pow(&ub, &BigInt::from(-a)));
            if parity(a) && parity(b) {
                c = Fp2 {
                    x: (-c.x).mod_floor(p),
                    y: (-c.y).mod_floor(p),
                };
            }
            let e = (p * p - 1u32) / 2u32;
            let r = ctx.pow(&c, &e);
            if r.y.is_zero() && r.x.is_one() {
                Ok(1)
            } else if r.y.is_zero() && r.x == p - 1u32 {
                Ok(-1)
            } else {
                Err(Error::Internal(format!("tame symbol at {p} is not a sign")))
            }
        }
        SplitTag::Ramified => {
            let m_rest = from_int(&qd.m / p);
            let unit = |x: &Rational, y: &Rational| -> (i64, BigInt) {
                let wx = vp_opt(x, p).map(|v| 2 * v);
                let wy = vp_opt(y, p).map(|v| 2 * v + 1);
                let (w, lead) = match (wx, wy) {
                    (Some(a), Some(b)) if a < b => (a, x),
                    (Some(a), None) => (a, x),
                    (_, Some(b)) => (b, y),
                    (None, None) => unreachable!("nonzero element"),
                };
                let k = w.div_euclid(2);
                let mut mk = rat(1);
                for _ in 0..k.unsigned_abs() {
                    mk *= &m_rest;
                }
                if k < 0 {
                    mk = mk.recip();
                }
                (w, residue(&(shift(lead, p, k) / mk), p))
            };
            let (a, ua) = unit(&xa, &ya);
            let (b, ub) = unit(&xb, &yb);
            let mut s = 1;
            if parity(a) && parity(b) && ((p - 1u32) / 2u32).is_odd() {
                s = -s;
            }
            if parity(b) {
                s *= legendre(&ua, p);
            }
            if parity(a) {
                s *= legendre(&ub, p);
            }
            Ok(s)
        }
    }
}

/// Rational primes at which `(alpha, beta)` may fail to be unramified, plus 2.
fn relevant_primes(f: &NumberField, qd: &QuadraticData, alpha: &FieldElement, beta: &FieldElement) -> BTreeSet<BigInt> {
    let mut out = BTreeSet::new();
    out.insert(BigInt::from(2));
    out.extend(prime_divisors(&qd.m));
    for x in [alpha, beta] {
        out.extend(rational_primes(&f.norm(x)));
        let (u, v) = qd.split_coords(x);
        out.extend(prime_divisors(u.denom()));
        out.extend(prime_divisors(v.denom()));
    }
    out
}

/// The place above 2 when 2 does not split: the product of every other local symbol.
fn symbol_by_product_formula(
    f: &NumberField,
    qd: &QuadraticData,
    alpha: &FieldElement,
    beta: &FieldElement,
) -> Result<i8> {
    let mut s = 1;
    for i in 0..2 {
        s *= hilbert_k(f, alpha, beta, &PlaceK::Real(i))?;
    }
    for p in relevant_primes(f, qd, alpha, beta) {
        if p == BigInt::from(2) {
            continue;
        }
        for w in qd.places_above(&p) {
            if let PlaceK::Finite { tag, .. } = w {
                s *= finite_symbol(f, qd, alpha, beta, &p, tag)?;
            }
        }
    }
    Ok(s)
}

/// All places of `K` above the rational place `v`.
pub fn places_above(f: &NumberField, v: &PlaceQ) -> Result<Vec<PlaceK>> {
    let qd = QuadraticData::new(f)?;
    Ok(match v {
        PlaceQ::Infinity => vec![PlaceK::Real(0), PlaceK::Real(1)],
        PlaceQ::Prime(p) => qd.places_above(p),
    })
}

/// One local invariant of `B` at a place of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSymbol {
    pub place: PlaceK,
    pub symbol: i8,
    /// True for the place above a non-split 2, fixed by the product formula.
    pub from_product_formula: bool,
}

/// Local symbols at every place where `B` can ramify (all others are `+1`).
pub fn local_symbols(b: &QuaternionAlgebra) -> Result<Vec<LocalSymbol>> {
    let f = &b.field;
    let qd = QuadraticData::new(f)?;
    let mut out = Vec::new();
    for p in relevant_primes(f, &qd, &b.alpha, &b.beta) {
        for w in qd.places_above(&p) {
            let from_product_formula =
                p == BigInt::from(2) && !matches!(qd.tag(&p), SplitTag::Split1 | SplitTag::Split2);
            out.push(LocalSymbol {
                symbol: hilbert_k(f, &b.alpha, &b.beta, &w)?,
                place: w,
                from_product_formula,
            });
        }
    }
    for i in 0..2 {
        let w = PlaceK::Real(i);
        out.push(LocalSymbol {
            symbol: hilbert_k(f, &b.alpha, &b.beta, &w)?,
            place: w,
            from_product_formula: false,
        });
    }
    Ok(out)
}

/// Class of `Cor_{K/Q}(B)`: at each rational place, the sum of the local
/// invariants of `B` above it. Degree one is the identity.
pub fn corestriction_class(b: &QuaternionAlgebra) -> Result<BrauerClass> {
    match b.degree() {
        1 => {
            let (a, c) = b.rational_pair().expect("degree one");
            ramification_q(&a, &c)
        }
        2 => {
            let mut per_place: std::collections::BTreeMap<PlaceQ, i8> = Default::default();
            for ls in local_symbols(b)? {
                *per_place.entry(ls.place.below()).or_insert(1) *= ls.symbol;
            }
            let ramified = per_place.into_iter().filter(|&(_, s)| s == -1).map(|(v, _)| v);
            BrauerClass::new(ramified)
                .map_err(|e| Error::Internal(format!("corestriction class: {e}")))
        }
        d => Err(Error::NotQuadraticField(d)),
    }
}

/// Ceiling for [`quaternion_from_class`]: `K3RM_SEARCH_BOUND` if set, else the default.
pub fn search_bound() -> u64 {
    std::env::var(SEARCH_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_SEARCH_BOUND)
}

fn is_squarefree(n: u64) -> bool {
    n != 0 && crate::arith::factorize_u64(n).iter().all(|&(_, e)| e == 1)
}

/// Sort key of the search: absolute value first, positive before negative.
fn search_key(x: i64) -> (u64, bool) {
    (x.unsigned_abs(), x < 0)
}

/// First pair of squarefree integers `(a, b)` with ramification exactly `c`,
/// in order of `max(|a|, |b|)` and then lexicographically by `(|x|, sign)`.
pub fn quaternion_from_class(c: &BrauerClass, bound: u64) -> Result<(i64, i64)> {
    if c.len() % 2 == 1 {
        return Err(Error::OddRamification(c.len()));
    }
    let bound = bound.min(i64::MAX as u64 / 4);
    let odd: Vec<i64> = c
        .places()
        .iter()
        .filter_map(|v| match v {
            PlaceQ::Prime(p) if *p != BigInt::from(2) => Some(p.to_i64().unwrap_or(i64::MAX)),
            _ => None,
        })
        .collect();
    let wants_inf = c.contains(&PlaceQ::Infinity);
    let mut squarefree: Vec<i64> = Vec::new();
    for big_m in 1..=bound {
        if is_squarefree(big_m) {
            squarefree.push(big_m as i64);
            squarefree.push(-(big_m as i64));
        }
        let m = big_m as i64;
        let edge: Vec<i64> = if is_squarefree(big_m) { vec![m, -m] } else { vec![] };
        // all squarefree with |x| <= m, in key order
        let mut all = squarefree.clone();
        all.sort_by_key(|&x| search_key(x));
        for &a in &all {
            let need: i64 = odd.iter().filter(|&&p| a % p != 0).product();
            let bs: Vec<i64> = if a.abs() == m {
                all.iter().copied().filter(|b| b % need == 0).collect()
            } else {
                edge.iter().copied().filter(|b| b % need == 0).collect()
            };
            for b in bs {
                if wants_inf != (a < 0 && b < 0) {
                    continue;
                }
                if ramification_q(&rat(a), &rat(b))? == *c {
                    return Ok((a, b));
                }
            }
        }
    }
    Err(Error::SearchExhausted { bound })
}

/// `<-alpha, -beta, alpha beta>`, the reduced norm on trace-zero quaternions.
pub fn trace_zero_form(b: &QuaternionAlgebra) -> Result<KQuadraticForm> {
    let f = &b.field;
    KQuadraticForm::diagonal(
        f.clone(),
        &[f.neg(&b.alpha), f.neg(&b.beta), f.mul(&b.alpha, &b.beta)],
    )
}

/// Number of real embeddings at which `B` is ramified (both arguments negative).
pub fn real_ramification_count(b: &QuaternionAlgebra) -> Result<usize> {
    let f = &b.field;
    let mut count = 0;
    for i in 0..f.degree() {
        if f.sign_at(&b.alpha, i)? < 0 && f.sign_at(&b.beta, i)? < 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// `B ⊗ R ≅ H^(d-1) ⊕ M_2(R)`.
pub fn ram_infinity_condition(b: &QuaternionAlgebra) -> Result<bool> {
    Ok(real_ramification_count(b)? + 1 == b.degree())
}

/// Summary of the Kuga-Satake variety attached to `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KsDescriptor {
    pub degree: usize,
    pub ks_dim: u64,
    pub cor_class: BrauerClass,
    /// True when the corestriction class is ramified at infinity.
    pub definite: bool,
    pub endo_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_cor: Option<(i64, i64)>,
}

/// `ks_dim = 2^d`; the endomorphism algebra is `M_2(Q)` for a trivial class,
/// otherwise the rational quaternion algebra with the corestriction class.
/// For `d >= 3` the class must be supplied by the caller.
pub fn ks_descriptor(b: &QuaternionAlgebra, supplied: Option<BrauerClass>, bound: u64) -> Result<KsDescriptor> {
    let d = b.degree();
    let ramified = real_ramification_count(b)?;
    if ramified + 1 != d {
        return Err(Error::RamConditionViolated { ramified, degree: d });
    }
    let cor_class = if d <= 2 {
        let computed = corestriction_class(b)?;
        if let Some(s) = supplied {
            if s != computed {
                return Err(Error::InvalidInput(format!(
                    "supplied class {s} differs from the computed class {computed}"
                )));
            }
        }
        computed
    } else {
        supplied.ok_or_else(|| {
            Error::InvalidInput(format!("degree {d}: the corestriction class must be supplied"))
        })?
    };
    let definite = cor_class.contains(&PlaceQ::Infinity);
    if definite != (d % 2 == 0) {
        return Err(Error::ParityViolated { degree: d });
    }
    let (endo_label, b_cor) = if cor_class.is_trivial() {
        ("split_M2".to_string(), None)
    } else {
        let (x, y) = quaternion_from_class(&cor_class, bound)?;
        (format!("({x},{y})"), Some((x, y)))
    };
    Ok(KsDescriptor {
        degree: d,
        ks_dim: 1u64 << d,
        cor_class,
        definite,
        endo_label,
        b_cor,
    })
}

/// `(alpha, beta)` as coordinate strings, for reports.
pub fn algebra_strings(b: &QuaternionAlgebra) -> (Vec<String>, Vec<String>) {
    (b.alpha.to_strings(), b.beta.to_strings())
}

pub fn format_pair(a: &Rational, b: &Rational) -> String {
    format!("({}, {})", format_rational(a), format_rational(b))
}
