//! Clifford algebras of diagonal forms by structure constants, and the
//! quaternion algebras hidden in their even parts.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{is_rational_square, squarefree_decomposition};
use crate::error::{Error, Result};
use crate::kquad::{KQuadraticForm, SignatureVector};
use crate::numfield::{FieldElement, NumberField};
use crate::quat::{trace_zero_form, QuaternionAlgebra};
use crate::rational::{from_int, rat, Rational};

/// Largest form rank for which a full table is built.
pub const MAX_CLIFFORD_RANK: usize = 6;

/// `C(<d_1..d_n>)` on the basis `e_S`, `S` a bitmask over `{0..n-1}`, with
/// `e_i e_j = -e_j e_i` and `e_i^2 = d_i`.
#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    field: NumberField,
    diag: Vec<FieldElement>,
    /// `table[S][T] = (c, U)` with `e_S e_T = c e_U`.
    table: Vec<Vec<(FieldElement, usize)>>,
}

/// Sign of reordering `e_S e_T` into increasing index order.
fn reorder_sign(s: usize, t: usize) -> i64 {
    let mut swaps = 0;
    for j in 0..usize::BITS as usize {
        if t >> j & 1 == 1 {
            // elements of S greater than j must pass e_j
            swaps += (s >> (j + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

impl CliffordAlgebra {
    pub fn new(field: NumberField, diag: Vec<FieldElement>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || n > MAX_CLIFFORD_RANK {
            return Err(Error::InvalidInput(format!("rank {n} outside 1..={MAX_CLIFFORD_RANK}")));
        }
        if diag.iter().any(|d| d.is_zero()) {
            return Err(Error::Degenerate);
        }
        let dim = 1usize << n;
        let mut table = Vec::with_capacity(dim);
        for s in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for t in 0..dim {
                let mut c = field.from_rational(rat(reorder_sign(s, t)));
                for (i, d) in diag.iter().enumerate() {
                    if (s & t) >> i & 1 == 1 {
                        c = field.mul(&c, d);
                    }
                }
                row.push((c, s ^ t));
            }
            table.push(row);
        }
        Ok(CliffordAlgebra { field, diag, table })
    }

    pub fn from_form(q: &KQuadraticForm) -> Result<Self> {
        let entries = q.diagonalize()?.entries;
        CliffordAlgebra::new(q.field().clone(), entries)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn dimension(&self) -> usize {
        1 << self.rank()
    }

    pub fn even_dimension(&self) -> usize {
        self.dimension() / 2
    }

    pub fn basis_product(&self, s: usize, t: usize) -> &(FieldElement, usize) {
        &self.table[s][t]
    }

    pub fn basis(&self, s: usize) -> Vec<FieldElement> {
        let mut v = vec![self.field.zero(); self.dimension()];
        v[s] = self.field.one();
        v
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dimension()];
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                if yt.is_zero() {
                    continue;
                }
                let (c, u) = &self.table[s][t];
                let term = f.mul(&f.mul(xs, yt), c);
                out[*u] = f.add(&out[*u], &term);
            }
        }
        out
    }

    pub fn scalar(&self, c: &FieldElement) -> Vec<FieldElement> {
        let mut v = vec![self.field.zero(); self.dimension()];
        v[0] = c.clone();
        v
    }

    /// `(e_S e_T) e_U = e_S (e_T e_U)` on `samples` seeded random basis triples.
    pub fn check_associativity(&self, samples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.dimension();
        (0..samples).all(|_| {
            let (s, t, u) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
            let (es, et, eu) = (self.basis(s), self.basis(t), self.basis(u));
            self.mul(&self.mul(&es, &et), &eu) == self.mul(&es, &self.mul(&et, &eu))
        })
    }

    /// Products of even basis elements stay even.
    pub fn even_part_closed(&self) -> bool {
        let dim = self.dimension();
        (0..dim)
            .filter(|s| s.count_ones() % 2 == 0)
            .all(|s| {
                (0..dim)
                    .filter(|t| t.count_ones() % 2 == 0)
                    .all(|t| self.table[s][t].1.count_ones() % 2 == 0)
            })
    }

    /// Nonzero structure constants as `(S, T, coefficient, U)`.
    pub fn sparse_table(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for (s, row) in self.table.iter().enumerate() {
            for (t, (c, u)) in row.iter().enumerate() {
                out.push(TableEntry {
                    s,
                    t,
                    coefficient: c.to_strings(),
                    u: *u,
                });
            }
        }
        out
    }

    /// Checks `x^2 = a`, `y^2 = b`, `xy = -yx` in the table.
    fn verify_quaternion_pair(&self, x: usize, y: usize, a: &FieldElement, b: &FieldElement) -> Result<()> {
        let (ex, ey) = (self.basis(x), self.basis(y));
        let xy = self.mul(&ex, &ey);
        let yx = self.mul(&ey, &ex);
        let f = &self.field;
        let ok = self.mul(&ex, &ex) == self.scalar(a)
            && self.mul(&ey, &ey) == self.scalar(b)
            && xy.iter().zip(&yx).all(|(p, q)| f.add(p, q).is_zero());
        if ok {
            Ok(())
        } else {
            Err(Error::Internal("quaternion generators fail the structure-constant check".into()))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub s: usize,
    pub t: usize,
    pub coefficient: Vec<String>,
    pub u: usize,
}

/// `C^0(<a, b, c>) ≅ (-bc, -ac)` with `i = e_2 e_3`, `j = e_1 e_3`.
pub fn even_clifford_ternary(q: &KQuadraticForm) -> Result<QuaternionAlgebra> {
    if q.rank() != 3 {
        return Err(Error::DimensionMismatch(format!("ternary form expected, rank {}", q.rank())));
    }
    let cl = CliffordAlgebra::from_form(q)?;
    let f = cl.field().clone();
    let (a, b, c) = (&cl.diag[0], &cl.diag[1], &cl.diag[2]);
    let alpha = f.neg(&f.mul(b, c));
    let beta = f.neg(&f.mul(a, c));
    cl.verify_quaternion_pair(0b110, 0b101, &alpha, &beta)?;
    QuaternionAlgebra::new(f, alpha, beta)
}

#[derive(Clone, Debug)]
pub struct QuaternaryClifford {
    /// Squarefree `m` with center `Q(sqrt m)`.
    pub radicand: BigInt,
    pub diagonal: Vec<Rational>,
    pub algebra: QuaternionAlgebra,
}

/// Center `Q(z)`, `z = e_1e_2e_3e_4`, `z^2 = d_1d_2d_3d_4`, and
/// `C^0 ≅ (-d_1d_2, -d_1d_3)` over it (generators `e_1e_2`, `e_1e_3`).
pub fn even_clifford_quaternary(d: &[Rational]) -> Result<QuaternaryClifford> {
    if d.len() != 4 {
        return Err(Error::DimensionMismatch(format!("quaternary form expected, rank {}", d.len())));
    }
    if d.iter().any(|x| x == &rat(0)) {
        return Err(Error::Degenerate);
    }
    let z2: Rational = d.iter().product();
    if is_rational_square(&z2) {
        return Err(Error::SplitCenter);
    }
    if z2.is_negative() {
        return Err(Error::NotRealQuadratic(crate::rational::format_rational(&z2)));
    }
    let q = NumberField::rationals();
    let cl = CliffordAlgebra::new(q.clone(), d.iter().map(|x| q.from_rational(x.clone())).collect())?;
    let zq = q.from_rational(z2.clone());
    let (e12, e13, z) = (cl.basis(0b0011), cl.basis(0b0101), cl.basis(0b1111));
    let alpha = -(&d[0] * &d[1]);
    let beta = -(&d[0] * &d[2]);
    cl.verify_quaternion_pair(0b0011, 0b0101, &q.from_rational(alpha.clone()), &q.from_rational(beta.clone()))?;
    let central = cl.mul(&z, &z) == cl.scalar(&zq)
        && cl.mul(&z, &e12) == cl.mul(&e12, &z)
        && cl.mul(&z, &e13) == cl.mul(&e13, &z);
    if !central {
        return Err(Error::Internal("center generator fails the structure-constant check".into()));
    }
    let (m, _) = squarefree_decomposition(&z2);
    let k = NumberField::from_coeffs(&[-from_int(m.clone()), rat(0), rat(1)])?;
    let algebra = QuaternionAlgebra::new(k.clone(), k.from_rational(alpha), k.from_rational(beta))?;
    Ok(QuaternaryClifford {
        radicand: m,
        diagonal: d.to_vec(),
        algebra,
    })
}

/// A ternary form over a real quadratic field with its real-point data.
#[derive(Clone, Debug)]
pub struct ConicData {
    pub form: KQuadraticForm,
    pub signatures: SignatureVector,
    /// Isotropic over the reals at each embedding.
    pub real_points: Vec<bool>,
}

impl ConicData {
    pub fn new(form: KQuadraticForm) -> Result<Self> {
        let signatures = form.signatures()?;
        let real_points = signatures.pairs.iter().map(|&(p, q)| p > 0 && q > 0).collect();
        Ok(ConicData {
            form,
            signatures,
            real_points,
        })
    }

    /// Some multiple `lambda C` is of K3 type iff exactly one embedding is indefinite.
    pub fn k3_type_up_to_scaling(&self) -> bool {
        self.real_points.iter().filter(|&&r| r).count() == 1
    }

    /// A scalar among `±1, ±sqrt m` turning the conic into a K3-type form.
    pub fn k3_scaling(&self) -> Result<Option<FieldElement>> {
        let f = self.form.field();
        let two_a_plus_c1 = f.add(
            &f.scale(&f.generator(), &rat(2)),
            &f.from_rational(f.minpoly().coeff(1)),
        );
        for lambda in [f.one(), f.elem(&[-1]), two_a_plus_c1.clone(), f.neg(&two_a_plus_c1)] {
            if self.form.scale(&lambda)?.form.is_k3_type()? {
                return Ok(Some(lambda));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub struct QuadricSplitting {
    pub clifford: QuaternaryClifford,
    /// Rows: new basis vectors in the old coordinates used to diagonalize `D`.
    pub congruence: Vec<Vec<Rational>>,
    pub conic: ConicData,
    pub conjugate: ConicData,
    pub k3_type: bool,
}

/// The two conjugate conics `C`, `C̄` attached to a rational quaternary form.
pub fn split_quadric(d: &KQuadraticForm) -> Result<QuadricSplitting> {
    if !d.field().is_rationals() {
        return Err(Error::InvalidInput("quaternary form must be defined over Q".into()));
    }
    if d.rank() != 4 {
        return Err(Error::DimensionMismatch(format!("quaternary form expected, rank {}", d.rank())));
    }
    let diag = d.diagonalize()?;
    let entries: Vec<Rational> = diag.entries.iter().map(|e| e.coords()[0].clone()).collect();
    let congruence = diag
        .basis
        .iter()
        .map(|row| row.iter().map(|e| e.coords()[0].clone()).collect())
        .collect();
    let clifford = even_clifford_quaternary(&entries)?;
    let c = trace_zero_form(&clifford.algebra)?;
    let conic = ConicData::new(c.clone())?;
    let conjugate = ConicData::new(c.conjugate()?)?;
    let k3_type = conic.k3_type_up_to_scaling() || conjugate.k3_type_up_to_scaling();
    Ok(QuadricSplitting {
        clifford,
        congruence,
        conic,
        conjugate,
        k3_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::ramification_q;

    fn rats(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn qform(v: &[i64]) -> KQuadraticForm {
        let q = NumberField::rationals();
        let e: Vec<FieldElement> = v.iter().map(|&x| q.elem(&[x])).collect();
        KQuadraticForm::diagonal(q, &e).unwrap()
    }

    #[test]
    fn reorder_signs() {
        assert_eq!(reorder_sign(0b01, 0b10), 1);
        assert_eq!(reorder_sign(0b10, 0b01), -1);
        // e_2e_3 e_1e_3: e_1 passes e_3 and e_2
        assert_eq!(reorder_sign(0b110, 0b101), 1);
    }

    #[test]
    fn table_basics() {
        let cl = CliffordAlgebra::new(NumberField::rationals(), vec![]).err();
        assert!(cl.is_some());
        let q = NumberField::rationals();
        let cl = CliffordAlgebra::new(q.clone(), vec![q.elem(&[2]), q.elem(&[3]), q.elem(&[-5])]).unwrap();
        assert_eq!(cl.dimension(), 8);
        assert!(cl.check_associativity(200, 7));
        assert!(cl.even_part_closed());
        let e1 = cl.basis(0b001);
        assert_eq!(cl.mul(&e1, &e1), cl.scalar(&q.elem(&[2])));
    }

    #[test]
    fn ternary_examples() {
        let h = even_clifford_ternary(&qform(&[1, 1, 1])).unwrap();
        assert_eq!(h.rational_pair(), Some((rat(-1), rat(-1))));
        let s = even_clifford_ternary(&qform(&[1, 1, -1])).unwrap();
        let (a, b) = s.rational_pair().unwrap();
        assert_eq!((a.clone(), b.clone()), (rat(1), rat(1)));
        assert!(ramification_q(&a, &b).unwrap().is_trivial());

        let f = NumberField::parse("x^2-2").unwrap();
        let u = f.elem(&[-1, 1]);
        let q = KQuadraticForm::diagonal(f.clone(), &[u.clone(), u.clone(), f.elem(&[-1])]).unwrap();
        let b = even_clifford_ternary(&q).unwrap();
        assert_eq!((b.alpha, b.beta), (u.clone(), u));
    }

    #[test]
    fn quaternary_examples() {
        let c = even_clifford_quaternary(&rats(&[1, 1, 1, 2])).unwrap();
        assert_eq!(c.radicand, BigInt::from(2));
        assert_eq!(c.algebra.rational_pair(), Some((rat(-1), rat(-1))));
        assert_eq!(even_clifford_quaternary(&rats(&[1, 1, 1, 1])).err(), Some(Error::SplitCenter));
        let c = even_clifford_quaternary(&rats(&[1, 1, -1, -2])).unwrap();
        assert_eq!(c.radicand, BigInt::from(2));
        assert_eq!(c.algebra.rational_pair(), Some((rat(-1), rat(1))));
        assert!(matches!(
            even_clifford_quaternary(&rats(&[1, 1, 1, -1])),
            Err(Error::NotRealQuadratic(_))
        ));
    }

    #[test]
    fn split_quadric_examples() {
        let r = split_quadric(&qform(&[1, 1, 1, 2])).unwrap();
        let k = &r.clifford.algebra.field;
        assert_eq!(k.minpoly().to_string(), "x^2 - 2");
        assert_eq!(r.conic.form.diagonalize().unwrap().entries, vec![k.one(); 3]);
        assert_eq!(r.conic.real_points, vec![false, false]);
        assert_eq!(r.conjugate.real_points, vec![false, false]);
        assert!(!r.k3_type);

        let r = split_quadric(&qform(&[1, 1, -1, -2])).unwrap();
        assert_eq!(r.conic.real_points, vec![true, true]);
        assert!(!r.k3_type);

        assert!(matches!(split_quadric(&qform(&[1, 1, 1, -1])), Err(Error::NotRealQuadratic(_))));
        assert_eq!(split_quadric(&qform(&[1, 1, 1, 1])).err(), Some(Error::SplitCenter));
    }

    #[test]
    fn k3_scaling_of_a_conic() {
        let f = NumberField::parse("x^2-2").unwrap();
        let u = f.elem(&[-1, 1]);
        let b = QuaternionAlgebra::new(f.clone(), u.clone(), u).unwrap();
        let conic = ConicData::new(trace_zero_form(&b).unwrap()).unwrap();
        assert!(conic.k3_type_up_to_scaling());
        assert_eq!(conic.k3_scaling().unwrap(), Some(f.elem(&[-1])));
    }
}
