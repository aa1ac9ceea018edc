//! Randomized invariants of field arithmetic, K-forms and trace lattices.

mod common;

use std::sync::OnceLock;

use k3rm_core::coreslat::{corestrict, disc_check, discriminant_group, flatten, multiplication_operator};
use k3rm_core::kquad::KQuadraticForm;
use k3rm_core::rational::{rat, Rational};
use k3rm_core::{FieldElement, NumberField};
use num_traits::Signed;
use proptest::collection::vec;
use proptest::prelude::*;

fn catalog() -> &'static [NumberField] {
    static C: OnceLock<Vec<NumberField>> = OnceLock::new();
    C.get_or_init(NumberField::catalog)
}

fn field_index() -> impl Strategy<Value = usize> {
    0..7usize
}

fn elem(f: &NumberField, c: &[i64]) -> FieldElement {
    f.elem(&c[..f.degree()])
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    vec(-6i64..=6, 6)
}

fn nonzero_coords() -> impl Strategy<Value = Vec<i64>> {
    coords().prop_filter("nonzero", |c| c[..2].iter().any(|&x| x != 0))
}

fn diag_form(f: &NumberField, entries: &[Vec<i64>]) -> KQuadraticForm {
    let d: Vec<FieldElement> = entries.iter().map(|c| elem(f, c)).collect();
    KQuadraticForm::diagonal(f.clone(), &d).unwrap()
}

/// A symmetric form with random entries; `None` when degenerate.
fn random_form(f: &NumberField, n: usize, raw: &[Vec<i64>]) -> Option<KQuadraticForm> {
    let mut gram = vec![vec![f.zero(); n]; n];
    let mut it = raw.iter();
    for i in 0..n {
        for j in i..n {
            let x = elem(f, it.next().unwrap());
            gram[i][j] = x.clone();
            gram[j][i] = x;
        }
    }
    let q = KQuadraticForm::new(f.clone(), gram).unwrap();
    if q.disc_form().is_zero() {
        None
    } else {
        Some(q)
    }
}

fn is_square(r: &Rational) -> bool {
    common::is_square_rational(r)
}

#[test]
fn catalog_is_certified() {
    for f in catalog() {
        assert_eq!(f.minpoly().count_real_roots(None, None), f.degree());
        assert_eq!(f.root_intervals().len(), f.degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn trace_paths_agree(i in field_index(), c in coords()) {
        let f = &catalog()[i];
        let x = elem(f, &c);
        prop_assert_eq!(f.trace(&x), f.trace_newton(&x));
    }

    #[test]
    fn trace_additive_norm_multiplicative(i in field_index(), a in coords(), b in coords()) {
        let f = &catalog()[i];
        let (x, y) = (elem(f, &a), elem(f, &b));
        prop_assert_eq!(f.trace(&f.add(&x, &y)), f.trace(&x) + f.trace(&y));
        prop_assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
    }

    #[test]
    fn inverse_multiplies_to_one(i in field_index(), c in nonzero_coords()) {
        let f = &catalog()[i];
        let x = elem(f, &c);
        prop_assert_eq!(f.mul(&x, &f.invert(&x).unwrap()), f.one());
    }

    #[test]
    fn trace_lies_in_sum_of_enclosures(i in field_index(), c in coords()) {
        let f = &catalog()[i];
        let x = elem(f, &c);
        let (mut lo, mut hi) = (rat(0), rat(0));
        for k in 0..f.degree() {
            let (l, h) = f.embedding_enclosure(&x, k, 12);
            lo += l;
            hi += h;
        }
        let t = f.trace(&x);
        prop_assert!(lo <= t && t <= hi);
    }

    #[test]
    fn sign_matches_enclosure(i in field_index(), c in nonzero_coords()) {
        let f = &catalog()[i];
        let x = elem(f, &c);
        for k in 0..f.degree() {
            let s = f.sign_at(&x, k).unwrap();
            let (l, h) = f.embedding_enclosure(&x, k, 40);
            prop_assert!(s != 0);
            prop_assert!(!(s > 0 && h.is_negative()) && !(s < 0 && l.is_positive()));
        }
    }

    #[test]
    fn diagonalization_preserves_det_up_to_squares(i in 0..4usize, n in 1..=3usize, raw in vec(coords(), 6)) {
        let f = &catalog()[i];
        let Some(q) = random_form(f, n, &raw) else { return Ok(()) };
        let dg = q.diagonalize().unwrap();
        for r in 0..n {
            for s in 0..n {
                let v = q.eval(&dg.basis[r], &dg.basis[s]);
                let want = if r == s { dg.entries[r].clone() } else { f.zero() };
                prop_assert_eq!(v, want);
            }
        }
        let prod = dg.entries.iter().fold(f.one(), |acc, e| f.mul(&acc, e));
        let ratio = f.div(&q.disc_form(), &prod).unwrap();
        prop_assert!(is_square(&f.norm(&ratio).abs()) && f.norm(&ratio).is_positive());
    }

    #[test]
    fn embedding_signatures_sum_to_trace_form(i in field_index(), n in 1..=3usize, raw in vec(coords(), 6)) {
        let f = &catalog()[i];
        let Some(q) = random_form(f, n, &raw) else { return Ok(()) };
        let sig = q.signatures().unwrap();
        for &(p, m) in &sig.pairs {
            prop_assert_eq!(p + m, n);
        }
        prop_assert_eq!(corestrict(f, &q).unwrap().matrix.signature().unwrap(), sig.total());
    }

    #[test]
    fn k3_type_stable_under_positive_scaling_and_congruence(
        i in 0..2usize, seed in any::<u64>(), lam in coords(), p in vec(coords(), 9)
    ) {
        let f = &catalog()[i];
        let mut s = k3rm_core::sample::Sampler::new(seed);
        let q = s.k3_ternary(f, 4).unwrap();
        let l = elem(f, &lam);
        let lambda = f.add(&f.mul(&l, &l), &f.one());
        let scaled = q.scale(&lambda).unwrap();
        prop_assert!(scaled.signature_preserved);
        prop_assert!(scaled.form.is_k3_type().unwrap());
        let pm: Vec<Vec<FieldElement>> = p.chunks(3).map(|r| r.iter().map(|c| elem(f, c)).collect()).collect();
        if let Ok(qc) = q.congruent(&pm) {
            prop_assert!(qc.is_k3_type().unwrap());
            prop_assert_eq!(qc.signatures().unwrap(), q.signatures().unwrap());
        }
    }

    #[test]
    fn multiplication_is_self_adjoint(i in field_index(), raw in vec(coords(), 3), k in coords(), v in vec(coords(), 2), w in vec(coords(), 2)) {
        let f = &catalog()[i];
        let Some(q) = random_form(f, 2, &raw) else { return Ok(()) };
        let g = corestrict(f, &q).unwrap();
        let k = elem(f, &k);
        let v: Vec<_> = v.iter().map(|c| elem(f, c)).collect();
        let w: Vec<_> = w.iter().map(|c| elem(f, c)).collect();
        let mk = multiplication_operator(f, 2, &k);
        let (fv, fw) = (flatten(&v), flatten(&w));
        let lhs = g.matrix.bilinear(&mk.mul_vec(&fv), &fw);
        prop_assert_eq!(&lhs, &f.trace(&f.mul(&k, &q.eval(&v, &w))));
        prop_assert_eq!(&lhs, &g.matrix.bilinear(&fv, &mk.mul_vec(&fw)));
    }

    #[test]
    fn corestriction_of_sum_is_sum(i in 0..4usize, a in vec(nonzero_coords(), 2), b in vec(nonzero_coords(), 1)) {
        let f = &catalog()[i];
        let (q1, q2) = (diag_form(f, &a), diag_form(f, &b));
        let sum = corestrict(f, &q1.orthogonal_sum(&q2).unwrap()).unwrap();
        let parts = corestrict(f, &q1).unwrap().matrix.direct_sum(&corestrict(f, &q2).unwrap().matrix);
        prop_assert_eq!(sum.matrix, parts);
    }

    #[test]
    fn discriminant_lemma_exact(i in 0..4usize, entries in vec(nonzero_coords(), 1..=3)) {
        let f = &catalog()[i];
        let q = diag_form(f, &entries);
        let g = corestrict(f, &q).unwrap();
        prop_assert!(disc_check(f, &q, &g).unwrap().match_lemma);
        let want = Rational::from_integer(f.disc_order().unwrap().pow(entries.len() as u32))
            * f.norm(&q.disc_form()).abs();
        prop_assert_eq!(g.det().abs(), want);
    }

    #[test]
    fn elementary_divisors_multiply_to_det(i in 0..4usize, entries in vec(nonzero_coords(), 1..=3)) {
        let f = &catalog()[i];
        let g = corestrict(f, &diag_form(f, &entries)).unwrap();
        let a = discriminant_group(&g).unwrap();
        prop_assert_eq!(Rational::from_integer(a.order()), g.det().abs());
    }
}
