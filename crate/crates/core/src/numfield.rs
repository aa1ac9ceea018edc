//! Totally real number fields `Q(a)` of degree 1 to 6.
//!
//! A field is given by the monic minimal polynomial of `a`; elements are
//! coordinate vectors in the power basis `1, a, ..., a^(d-1)`. Real embeddings
//! are indexed by the isolated real roots of the minimal polynomial in
//! ascending order, so embedding `i` sends `a` to the `i`-th smallest root.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, squarefree_decomposition};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::QPoly;
use crate::rational::{format_rational, from_int, rat, sign, Rational, RationalRepr};

/// Bisections allowed while separating an element's embedding from zero.
pub const REFINEMENT_BUDGET: usize = 256;

pub const MAX_DEGREE: usize = 6;

/// Minimal polynomials of the built-in fields, as human-readable strings.
pub const CATALOG: [&str; 7] = [
    "x^2 - 2",
    "x^2 - 5",
    "x^3 - 3x - 1",
    "x^3 - x^2 - 2x + 1",
    "x^4 - x^3 - 4x^2 + 4x + 1",
    "x^5 + x^4 - 4x^3 - 3x^2 + 3x + 1",
    "x^6 + x^5 - 5x^4 - 4x^3 + 6x^2 + 3x - 1",
];

/// Closed isolating interval `[lo, hi]` for one real root; `lo == hi` only
/// for an exactly known rational root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The element as a polynomial in `a`.
    pub fn to_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    /// `Some(r)` when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_poly().to_string().replace('x', "a");
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    minpoly: QPoly,
    roots: Vec<RootInterval>,
    /// Power sums of the roots, `p_0 .. p_(d-1)`.
    power_sums: Vec<Rational>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Validates a monic minimal polynomial: degree 1..=6, irreducible over the
    /// rationals (Kronecker factor search), and totally real (Sturm count).
    pub fn new(minpoly: QPoly) -> Result<Self> {
        let d = minpoly.degree().unwrap_or(0);
        if !(1..=MAX_DEGREE).contains(&d) {
            return Err(Error::BadDegree(d));
        }
        if !minpoly.is_monic() {
            return Err(Error::NotMonic);
        }
        if let Some(factor) = kronecker_factor(&minpoly.primitive_integer()) {
            let p = QPoly::new(factor.into_iter().map(from_int).collect());
            return Err(Error::Reducible {
                factor: p.to_string(),
            });
        }
        let real_roots = minpoly.count_real_roots(None, None);
        if real_roots < d {
            return Err(Error::NotTotallyReal {
                real_roots,
                degree: d,
            });
        }
        let roots = isolate_roots(&minpoly);
        if roots.len() != d {
            return Err(Error::Internal(format!(
                "isolated {} roots for degree {d}",
                roots.len()
            )));
        }
        let power_sums = newton_power_sums(&minpoly, d);
        Ok(NumberField {
            minpoly,
            roots,
            power_sums,
        })
    }

    pub fn from_coeffs(coeffs: &[Rational]) -> Result<Self> {
        NumberField::new(QPoly::new(coeffs.to_vec()))
    }

    pub fn parse(src: &str) -> Result<Self> {
        NumberField::new(QPoly::parse(src)?)
    }

    /// The rationals, presented as `Q(a)` with `a` a root of `x`.
    pub fn rationals() -> Self {
        NumberField::new(QPoly::x()).expect("x is a valid minimal polynomial")
    }

    /// Built-in fields, each re-validated on load.
    pub fn catalog() -> Vec<NumberField> {
        CATALOG
            .iter()
            .map(|s| NumberField::parse(s).expect("catalog field validates"))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn root_intervals(&self) -> &[RootInterval] {
        &self.roots
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    // ---- element construction ----

    pub fn element(&self, coords: Vec<Rational>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                self.degree()
            )));
        }
        Ok(FieldElement { coords })
    }

    /// Element from integer coordinates; shorter inputs are zero-padded.
    pub fn elem(&self, coords: &[i64]) -> FieldElement {
        assert!(coords.len() <= self.degree(), "too many coordinates");
        let mut c: Vec<Rational> = coords.iter().map(|&v| rat(v)).collect();
        c.resize(self.degree(), Rational::zero());
        FieldElement { coords: c }
    }

    pub fn from_rational(&self, r: Rational) -> FieldElement {
        let mut c = vec![Rational::zero(); self.degree()];
        c[0] = r;
        FieldElement { coords: c }
    }

    /// Parses `"p/q"` or a polynomial in the generator, written with `a` or `x`.
    pub fn parse_element(&self, src: &str) -> Result<FieldElement> {
        if src.contains('/') {
            return Ok(self.from_rational(crate::rational::parse_rational(src)?));
        }
        let text: String = src.chars().map(|c| if c == 'a' { 'x' } else { c }).collect();
        Ok(self.from_poly(&QPoly::parse(&text)?))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rational::one())
    }

    /// The primitive element `a`.
    pub fn generator(&self) -> FieldElement {
        self.from_poly(&QPoly::x())
    }

    pub fn from_poly(&self, p: &QPoly) -> FieldElement {
        let r = p.rem(&self.minpoly).expect("minpoly is nonzero");
        let mut c = r.coeffs().to_vec();
        c.resize(self.degree(), Rational::zero());
        FieldElement { coords: c }
    }

    // ---- arithmetic ----

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, x: &FieldElement, c: &Rational) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.from_poly(&x.to_poly().mul(&y.to_poly()))
    }

    pub fn pow(&self, x: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse through the extended gcd of the coordinate polynomial with the
    /// minimal polynomial.
    pub fn invert(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = x.to_poly().ext_gcd(&self.minpoly);
        if g.degree() != Some(0) {
            return Err(Error::Internal("non-unit gcd with an irreducible minpoly".into()));
        }
        Ok(self.from_poly(&s))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.invert(y)?))
    }

    /// Matrix of multiplication by `x` on the power basis; column `j` holds
    /// the coordinates of `x * a^j`.
    pub fn multiplication_matrix(&self, x: &FieldElement) -> QMatrix {
        let d = self.degree();
        let mut m = QMatrix::zeros(d, d);
        let mut col = x.clone();
        let a = self.generator();
        for j in 0..d {
            for (i, c) in col.coords.iter().enumerate() {
                m[(i, j)] = c.clone();
            }
            col = self.mul(&col, &a);
        }
        m
    }

    /// Trace from the regular representation.
    pub fn trace(&self, x: &FieldElement) -> Rational {
        self.multiplication_matrix(x).trace()
    }

    /// Trace from Newton power sums of the minimal polynomial.
    pub fn trace_newton(&self, x: &FieldElement) -> Rational {
        x.coords
            .iter()
            .zip(&self.power_sums)
            .fold(Rational::zero(), |acc, (c, p)| acc + c * p)
    }

    pub fn norm(&self, x: &FieldElement) -> Rational {
        self.multiplication_matrix(x).det()
    }

    /// Discriminant of the power basis `1, a, ..., a^(d-1)`:
    /// `(-1)^(d(d-1)/2) * Res(f, f')`.
    pub fn power_basis_discriminant(&self) -> Rational {
        let d = self.degree();
        if d == 1 {
            return Rational::one();
        }
        let res = self.minpoly.resultant(&self.minpoly.derivative());
        if (d * (d - 1) / 2) % 2 == 1 {
            -res
        } else {
            res
        }
    }

    /// Discriminant of the order `Z[a]`; requires an integral minimal polynomial.
    pub fn disc_order(&self) -> Result<BigInt> {
        if !self.minpoly.is_integral() {
            return Err(Error::NonIntegralMinpoly);
        }
        Ok(self.power_basis_discriminant().to_integer())
    }

    /// Discriminant of the maximal order, quadratic fields only.
    pub fn disc_maximal(&self) -> Result<BigInt> {
        let m = self.quadratic_radicand()?;
        if m.mod_floor(&BigInt::from(4)) == BigInt::one() {
            Ok(m)
        } else {
            Ok(m * 4)
        }
    }

    /// For a quadratic field: squarefree `m` with `K = Q(sqrt m)`.
    pub fn quadratic_radicand(&self) -> Result<BigInt> {
        if self.degree() != 2 {
            return Err(Error::NotQuadratic(self.degree()));
        }
        Ok(squarefree_decomposition(&self.power_basis_discriminant()).0)
    }

    /// For a quadratic field with minpoly `x^2 + c1 x + c0`: the image of
    /// `x` under the nontrivial automorphism `a -> -a - c1`.
    pub fn conjugate(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.degree() != 2 {
            return Err(Error::NotQuadratic(self.degree()));
        }
        let c1 = self.minpoly.coeff(1);
        let x0 = &x.coords[0];
        let x1 = &x.coords[1];
        Ok(FieldElement {
            coords: vec![x0 - x1 * &c1, -x1],
        })
    }

    // ---- real embeddings ----

    /// Bisects a root interval once, keeping the half that contains the root.
    pub fn refine(&self, iv: &RootInterval) -> RootInterval {
        if iv.lo == iv.hi {
            return iv.clone();
        }
        let mid = iv.midpoint();
        let fm = sign(&self.minpoly.eval(&mid));
        if fm == 0 {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        let flo = sign(&self.minpoly.eval(&iv.lo));
        if flo != fm {
            RootInterval {
                lo: iv.lo.clone(),
                hi: mid,
            }
        } else {
            RootInterval {
                lo: mid,
                hi: iv.hi.clone(),
            }
        }
    }

    /// Root interval of embedding `i` (0-based) refined to width below `tol`.
    pub fn refined_root(&self, i: usize, tol: &Rational) -> RootInterval {
        let mut iv = self.roots[i].clone();
        while &iv.width() > tol {
            iv = self.refine(&iv);
        }
        iv
    }

    /// Interval enclosure of `sigma_i(x)` after `steps` bisections of the root interval.
    pub fn embedding_enclosure(&self, x: &FieldElement, i: usize, steps: usize) -> (Rational, Rational) {
        let mut iv = self.roots[i].clone();
        for _ in 0..steps {
            iv = self.refine(&iv);
        }
        x.to_poly().eval_interval(&iv.lo, &iv.hi)
    }

    /// Sign of `sigma_i(x)`, `i` 0-based. Zero only for the zero element.
    pub fn sign_at(&self, x: &FieldElement, i: usize) -> Result<i8> {
        if i >= self.degree() {
            return Err(Error::InvalidInput(format!(
                "embedding index {i} out of range for degree {}",
                self.degree()
            )));
        }
        if x.is_zero() {
            return Ok(0);
        }
        let g = x.to_poly();
        let mut iv = self.roots[i].clone();
        for _ in 0..=REFINEMENT_BUDGET {
            if iv.lo == iv.hi {
                return Ok(sign(&g.eval(&iv.lo)));
            }
            let (lo, hi) = g.eval_interval(&iv.lo, &iv.hi);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            iv = self.refine(&iv);
        }
        Err(Error::Internal(format!(
            "sign of {x} at embedding {i} not separated after {REFINEMENT_BUDGET} bisections"
        )))
    }

    pub fn signs(&self, x: &FieldElement) -> Result<Vec<i8>> {
        (0..self.degree()).map(|i| self.sign_at(x, i)).collect()
    }

    pub fn is_totally_positive(&self, x: &FieldElement) -> Result<bool> {
        Ok(self.signs(x)?.iter().all(|&s| s > 0))
    }

    /// Floating-point value of `sigma_i(x)`, for display.
    pub fn approx_embedding(&self, x: &FieldElement, i: usize) -> f64 {
        let iv = self.refined_root(i, &Rational::new(BigInt::one(), BigInt::one() << 64));
        crate::rational::to_f64(&x.to_poly().eval(&iv.midpoint()))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            minpoly: MinpolyRepr::Coeffs(
                self.minpoly.coeffs().iter().map(RationalRepr::from).collect(),
            ),
        }
    }
}

fn newton_power_sums(f: &QPoly, d: usize) -> Vec<Rational> {
    // f = x^d + e_1 x^(d-1) + ... ; coefficient of x^(d-k) is c(d-k)
    let c = |k: usize| f.coeff(d - k);
    let mut p = vec![rat(d as i64)];
    for k in 1..d {
        let mut s = c(k) * rat(k as i64);
        for i in 1..k {
            s += c(i) * &p[k - i];
        }
        p.push(-s);
    }
    p
}

fn isolate_roots(f: &QPoly) -> Vec<RootInterval> {
    if f.degree() == Some(1) {
        let r = -f.coeff(0) / f.coeff(1);
        return vec![RootInterval { lo: r.clone(), hi: r }];
    }
    let b = f.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let seq = f.sturm_sequence();
    let count = |lo: &Rational, hi: &Rational| -> usize {
        let v = |x: &Rational| {
            let s: Vec<i8> = seq.iter().map(|p| sign(&p.eval(x))).filter(|&s| s != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        v(lo).saturating_sub(v(hi))
    };
    while let Some((lo, hi)) = stack.pop() {
        match count(&lo, &hi) {
            0 => {}
            1 => out.push(RootInterval { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Kronecker's method: returns a nontrivial integer factor of `f`
/// (coefficients lowest degree first), or `None` if `f` is irreducible.
pub fn kronecker_factor(f: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = f.len().checked_sub(1)?;
    if n <= 1 {
        return None;
    }
    let eval = |x: i64| -> BigInt {
        let x = BigInt::from(x);
        f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    };
    // sample points 0, 1, -1, 2, -2, ...
    let mut samples: Vec<(i64, BigInt)> = Vec::new();
    for k in 0..(2 * n as i64 + 8) {
        let x = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
        let v = eval(x);
        if v.is_zero() {
            return Some(vec![BigInt::from(-x), BigInt::one()]);
        }
        samples.push((x, v));
    }
    let divisors_of = |v: &BigInt| -> Vec<BigInt> {
        let mut ds = vec![BigInt::one()];
        for (p, e) in factorize(v) {
            let mut next = Vec::new();
            for d in &ds {
                let mut pk = BigInt::one();
                for _ in 0..=e {
                    next.push(d * &pk);
                    pk *= &p;
                }
            }
            ds = next;
        }
        ds
    };
    let mut ranked: Vec<(usize, i64, BigInt)> = samples
        .iter()
        .map(|(x, v)| (divisors_of(v).len(), *x, v.clone()))
        .collect();
    ranked.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.abs().cmp(&b.1.abs())));
    let fpoly = QPoly::new(f.iter().cloned().map(from_int).collect());
    let lead = f[n].clone();

    for k in 1..=n / 2 {
        let pts: Vec<(i64, BigInt)> = ranked[..=k].iter().map(|(_, x, v)| (*x, v.clone())).collect();
        let filters: Vec<(i64, BigInt)> = ranked[k + 1..].iter().map(|(_, x, v)| (*x, v.clone())).collect();
        // inverse Vandermonde on the chosen points
        let vander = QMatrix::from_rows(
            pts.iter()
                .map(|(x, _)| (0..=k).map(|j| rat(x.pow(j as u32))).collect())
                .collect(),
        )
        .expect("square");
        let vinv = vander.inverse().expect("distinct nodes");
        let choices: Vec<Vec<BigInt>> = pts
            .iter()
            .enumerate()
            .map(|(idx, (_, v))| {
                let ds = divisors_of(v);
                if idx == 0 {
                    ds
                } else {
                    ds.iter().flat_map(|d| [d.clone(), -d]).collect()
                }
            })
            .collect();
        let mut index = vec![0usize; k + 1];
        loop {
            let values: Vec<Rational> = index
                .iter()
                .zip(&choices)
                .map(|(&i, c)| from_int(c[i].clone()))
                .collect();
            let coeffs = vinv.mul_vec(&values);
            if coeffs.iter().all(|c| c.is_integer()) && !coeffs[k].is_zero() {
                let g: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
                let divides_lead = lead.is_multiple_of(&g[k]);
                let passes = divides_lead
                    && filters.iter().all(|(x, v)| {
                        let gx = QPoly::new(coeffs.clone()).eval(&rat(*x)).to_integer();
                        !gx.is_zero() && v.is_multiple_of(&gx)
                    });
                if passes {
                    let gp = QPoly::new(coeffs.clone());
                    if fpoly.rem(&gp).expect("nonzero").is_zero() {
                        return Some(g);
                    }
                }
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos > k {
                    break;
                }
                index[pos] += 1;
                if index[pos] < choices[pos].len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
            if pos > k {
                break;
            }
        }
    }
    None
}

/// JSON field descriptor: `{"minpoly": ["-2","0","1"]}` (ascending degree)
/// or `{"minpoly": "x^2-2"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub minpoly: MinpolyRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MinpolyRepr {
    Coeffs(Vec<RationalRepr>),
    Text(String),
}

impl FieldDescriptor {
    pub fn to_field(&self) -> Result<NumberField> {
        match &self.minpoly {
            MinpolyRepr::Coeffs(cs) => NumberField::from_coeffs(
                &cs.iter().map(|c| c.to_rational()).collect::<Result<Vec<_>>>()?,
            ),
            MinpolyRepr::Text(s) => NumberField::parse(s),
        }
    }
}

/// Summary used by the `field` report.
#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub minpoly: String,
    pub minpoly_coeffs: Vec<String>,
    pub degree: usize,
    pub root_intervals: Vec<[String; 2]>,
    pub roots_approx: Vec<f64>,
    pub disc_order: String,
    pub disc_maximal: Option<String>,
}

impl NumberField {
    pub fn summary(&self) -> FieldSummary {
        let a = self.generator();
        FieldSummary {
            minpoly: self.minpoly.to_string(),
            minpoly_coeffs: self.minpoly.coeffs().iter().map(format_rational).collect(),
            degree: self.degree(),
            root_intervals: self
                .roots
                .iter()
                .map(|r| [format_rational(&r.lo), format_rational(&r.hi)])
                .collect(),
            roots_approx: (0..self.degree())
                .map(|i| self.approx_embedding(&a, i))
                .collect(),
            disc_order: format_rational(&self.power_basis_discriminant()),
            disc_maximal: self.disc_maximal().ok().map(|m| m.to_string()),
        }
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", self.minpoly)
    }
}

/// Convenience: rounds to `f64` for messages only.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn q2() -> NumberField {
        NumberField::parse("x^2-2").unwrap()
    }

    #[test]
    fn make_field_examples() {
        let f = q2();
        let r = f.root_intervals();
        assert_eq!(r.len(), 2);
        // -sqrt2 in the first interval, +sqrt2 in the second
        assert!(r[0].hi <= rat(0) && r[1].lo >= rat(0));
        let pos = &r[1];
        assert!(pos.lo.clone() * pos.lo.clone() < rat(2) && pos.hi.clone() * pos.hi.clone() > rat(2));
        let neg = &r[0];
        assert!(neg.hi.clone() * neg.hi.clone() < rat(2) && neg.lo.clone() * neg.lo.clone() > rat(2));
        assert_eq!(
            NumberField::parse("x^2+1").unwrap_err(),
            Error::NotTotallyReal {
                real_roots: 0,
                degree: 2
            }
        );
        assert!(matches!(NumberField::parse("x^2-4"), Err(Error::Reducible { .. })));
        assert_eq!(NumberField::parse("x^7-2").unwrap_err(), Error::BadDegree(7));
        assert_eq!(NumberField::parse("2x^2-1").unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn reducible_without_rational_roots() {
        // (x^2-2)(x^2-3)
        assert!(matches!(
            NumberField::parse("x^4 - 5x^2 + 6"),
            Err(Error::Reducible { .. })
        ));
        // (x^3-3x-1)(x^3-x^2-2x+1)
        let p = QPoly::parse("x^3-3x-1")
            .unwrap()
            .mul(&QPoly::parse("x^3-x^2-2x+1").unwrap());
        assert!(matches!(NumberField::new(p), Err(Error::Reducible { .. })));
        // x^4 - 10x^2 + 1 is irreducible but reducible mod every prime
        assert_eq!(NumberField::parse("x^4-10x^2+1").unwrap().degree(), 4);
    }

    #[test]
    fn trace_examples() {
        let f = q2();
        assert_eq!(f.trace(&f.generator()), rat(0));
        assert_eq!(f.trace(&f.one()), rat(2));
        let c = NumberField::parse("x^3-3x-1").unwrap();
        assert_eq!(c.trace(&c.generator()), rat(0));
        assert_eq!(c.trace_newton(&c.generator()), rat(0));
        // Tr(a^2) = p_2 = e1^2 - 2 e2 = 6
        assert_eq!(c.trace(&c.pow(&c.generator(), 2)), rat(6));
        assert_eq!(c.trace_newton(&c.pow(&c.generator(), 2)), rat(6));
    }

    #[test]
    fn norm_examples() {
        let f = q2();
        assert_eq!(f.norm(&f.generator()), rat(-2));
        assert_eq!(f.norm(&f.one()), rat(1));
        assert_eq!(f.norm(&f.elem(&[-1, 1])), rat(-1));
    }

    #[test]
    fn invert_examples() {
        let f = q2();
        assert_eq!(f.invert(&f.one()).unwrap(), f.one());
        assert_eq!(
            f.invert(&f.generator()).unwrap(),
            f.element(vec![rat(0), frac(1, 2)]).unwrap()
        );
        assert_eq!(f.invert(&f.elem(&[-1, 1])).unwrap(), f.elem(&[1, 1]));
        assert_eq!(f.invert(&f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn discriminants() {
        let f = q2();
        assert_eq!(f.disc_order().unwrap(), BigInt::from(8));
        assert_eq!(f.disc_maximal().unwrap(), BigInt::from(8));
        let g = NumberField::parse("x^2-5").unwrap();
        assert_eq!(g.disc_order().unwrap(), BigInt::from(20));
        assert_eq!(g.disc_maximal().unwrap(), BigInt::from(5));
        let c = NumberField::parse("x^3-3x-1").unwrap();
        assert_eq!(c.disc_order().unwrap(), BigInt::from(81));
        assert_eq!(c.disc_maximal(), Err(Error::NotQuadratic(3)));
    }

    #[test]
    fn sign_examples() {
        let f = q2();
        let a = f.generator();
        assert_eq!(f.sign_at(&a, 0).unwrap(), -1);
        let a2 = f.mul(&a, &a);
        assert_eq!(f.signs(&a2).unwrap(), vec![1, 1]);
        assert_eq!(f.sign_at(&f.elem(&[-1, 1]), 1).unwrap(), 1);
        assert_eq!(f.sign_at(&f.elem(&[-1, 1]), 0).unwrap(), -1);
        assert_eq!(f.sign_at(&f.zero(), 0).unwrap(), 0);
        assert!(f.sign_at(&a, 2).is_err());
        // a close call: 1393/985 approximates sqrt 2 from below
        let close = f.element(vec![frac(-1393, 985), rat(1)]).unwrap();
        assert_eq!(f.sign_at(&close, 1).unwrap(), 1);
        assert_eq!(f.sign_at(&close, 0).unwrap(), -1);
    }

    #[test]
    fn catalog_loads() {
        let cat = NumberField::catalog();
        let degrees: Vec<usize> = cat.iter().map(|f| f.degree()).collect();
        assert_eq!(degrees, vec![2, 2, 3, 3, 4, 5, 6]);
        for f in &cat {
            assert_eq!(f.minpoly().count_real_roots(None, None), f.degree());
        }
    }

    #[test]
    fn conjugation_is_galois() {
        let f = NumberField::parse("x^2 - x - 1").unwrap();
        let a = f.generator();
        let abar = f.conjugate(&a).unwrap();
        assert_eq!(f.add(&a, &abar), f.one());
        assert_eq!(f.mul(&a, &abar), f.from_rational(rat(-1)));
    }

    #[test]
    fn rationals_degree_one() {
        let q = NumberField::rationals();
        let x = q.from_rational(frac(-3, 7));
        assert_eq!(q.sign_at(&x, 0).unwrap(), -1);
        assert_eq!(q.trace(&x), frac(-3, 7));
        assert_eq!(q.norm(&x), frac(-3, 7));
        assert_eq!(q.disc_order().unwrap(), BigInt::from(1));
    }
}
