//! Built-in identity suites, seeded for reproducibility.

use clap::ValueEnum;
use k3rm_core::clifford::even_clifford_ternary;
use k3rm_core::coreslat::{
    corestrict, disc_check, flatten, k3_embeddability, multiplication_operator,
};
use k3rm_core::dictionary::k3_to_fourfold;
use k3rm_core::kquad::KQuadraticForm;
use k3rm_core::linalg::QMatrix;
use k3rm_core::quat::{
    corestriction_class, hilbert_q, quaternion_from_class, ramification_q, BrauerClass, PlaceQ,
    QuaternionAlgebra, DEFAULT_SEARCH_BOUND,
};
use k3rm_core::rational::rat;
use k3rm_core::repwt::{hodge_numbers, irr_char, ks_representation_report};
use k3rm_core::sample::Sampler;
use k3rm_core::{NumberField, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    /// Fixed examples plus seeded random instances of each identity.
    PaperIdentities,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::PaperIdentities => "paper-identities",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

fn record(name: &'static str, outcome: Result<bool>) -> Check {
    match outcome {
        Ok(passed) => Check { name, passed, detail: None },
        Err(e) => Check {
            name,
            passed: false,
            detail: Some(e.to_string()),
        },
    }
}

fn q2() -> NumberField {
    NumberField::parse("x^2-2").expect("catalog field")
}

fn trace_matrix() -> Result<bool> {
    let f = q2();
    let q = KQuadraticForm::diagonal(f.clone(), &[f.one()])?;
    Ok(corestrict(&f, &q)?.matrix == QMatrix::from_i64(&[&[2, 0], &[0, 4]]))
}

fn discriminant_lemma(s: &mut Sampler) -> Result<bool> {
    for f in NumberField::catalog().into_iter().filter(|f| (2..=3).contains(&f.degree())) {
        for n in 1..=3 {
            for _ in 0..4 {
                let q = s.diagonal_form(&f, n, 3)?;
                if !disc_check(&f, &q, &corestrict(&f, &q)?)?.match_lemma {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn trace_identity(s: &mut Sampler) -> Result<bool> {
    for f in NumberField::catalog() {
        let q = s.diagonal_form(&f, 2, 3)?;
        let g = corestrict(&f, &q)?;
        for _ in 0..10 {
            let k = s.element(&f, 4);
            let (v, w) = (s.vector(&f, 2, 4), s.vector(&f, 2, 4));
            let kv = multiplication_operator(&f, 2, &k).mul_vec(&flatten(&v));
            if g.matrix.bilinear(&kv, &flatten(&w)) != f.trace(&f.mul(&k, &q.eval(&v, &w))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn worked_example() -> Result<(NumberField, KQuadraticForm)> {
    let f = q2();
    let u = f.elem(&[-1, 1]);
    let q = KQuadraticForm::diagonal(f.clone(), &[u.clone(), u, f.elem(&[-1])])?;
    Ok((f, q))
}

fn signature_lemma() -> Result<bool> {
    let (f, q) = worked_example()?;
    let sig = q.signatures()?;
    let g = corestrict(&f, &q)?;
    Ok(sig.is_k3_type() && g.matrix.signature()? == sig.total() && sig.total() == (2, 4))
}

fn product_formula(s: &mut Sampler) -> Result<bool> {
    for _ in 0..50 {
        let b = s.rational_algebra(30)?;
        let (x, y) = b.rational_pair().expect("rational algebra");
        if ramification_q(&x, &y)?.len() % 2 != 0 {
            return Ok(false);
        }
        let mut places = vec![PlaceQ::Infinity];
        for v in [&x, &y] {
            for n in [v.numer(), v.denom()] {
                places.extend(k3rm_core::arith::prime_divisors(n).into_iter().map(PlaceQ::Prime));
            }
        }
        places.push(PlaceQ::prime(2));
        places.sort();
        places.dedup();
        let product: i8 = places.iter().map(|p| hilbert_q(&x, &y, p)).collect::<Result<Vec<_>>>()?.iter().product();
        if product != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn corestriction_example() -> Result<bool> {
    let f = q2();
    let u = f.elem(&[-1, 1]);
    let b = QuaternionAlgebra::new(f, u.clone(), u)?;
    let class = corestriction_class(&b)?;
    let expected = BrauerClass::new([PlaceQ::prime(2), PlaceQ::Infinity])?;
    Ok(class == expected && quaternion_from_class(&class, DEFAULT_SEARCH_BOUND)? == (-1, -1))
}

fn restriction_corestriction(s: &mut Sampler) -> Result<bool> {
    let f = q2();
    for _ in 0..10 {
        let b = s.rational_algebra(20)?.base_change(&f)?;
        if !corestriction_class(&b)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn parity_rule(s: &mut Sampler) -> Result<bool> {
    for m in ["x^2-2", "x^2-5"] {
        let f = NumberField::parse(m)?;
        for _ in 0..5 {
            let b = s.algebra_with_real_condition(&f, 4)?;
            if !corestriction_class(&b)?.contains(&PlaceQ::Infinity) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn hamilton_clifford() -> Result<bool> {
    let q = NumberField::rationals();
    let form = KQuadraticForm::diagonal(q.clone(), &[q.one(), q.one(), q.one()])?;
    let b = even_clifford_ternary(&form)?;
    let (x, y) = b.rational_pair().expect("rational algebra");
    let expected = BrauerClass::new([PlaceQ::prime(2), PlaceQ::Infinity])?;
    Ok((x, y) == (rat(-1), rat(-1)) && ramification_q(&rat(-1), &rat(-1))? == expected)
}

fn representation_identities() -> Result<bool> {
    let wedge = irr_char(&[1, 1]).wedge2()?;
    let w22 = irr_char(&[2, 2]);
    let small = hodge_numbers(&wedge, 2)?.0 == vec![1, 4, 1] && hodge_numbers(&w22, 2)?.0 == vec![3, 3, 3];
    for d in 2..=6 {
        let r = ks_representation_report(d)?;
        if !(r.parity_rule_holds && r.wedge2_identity_holds && r.transcendental_dim == 3 * d as u64) {
            return Ok(false);
        }
    }
    Ok(small)
}

fn dictionary_example() -> Result<bool> {
    let (f, q) = worked_example()?;
    let r = k3_to_fourfold(&f, &q, DEFAULT_SEARCH_BOUND)?;
    let g = corestrict(&f, &q)?;
    Ok(r.ks_dim == 4
        && r.b_cor == Some((-1, -1))
        && r.transcendental.rank == 6
        && r.transcendental.signature == (2, 4)
        && k3_embeddability(&g)?.verdict() == "Embeds")
}

pub fn run(suite: Suite, seed: u64) -> Report {
    let mut s = Sampler::new(seed);
    let checks = match suite {
        Suite::PaperIdentities => vec![
            record("trace_matrix", trace_matrix()),
            record("discriminant_lemma", discriminant_lemma(&mut s)),
            record("trace_identity", trace_identity(&mut s)),
            record("signature_lemma", signature_lemma()),
            record("product_formula", product_formula(&mut s)),
            record("corestriction_example", corestriction_example()),
            record("restriction_corestriction", restriction_corestriction(&mut s)),
            record("parity_rule", parity_rule(&mut s)),
            record("hamilton_clifford", hamilton_clifford()),
            record("representation_identities", representation_identities()),
            record("dictionary_example", dictionary_example()),
        ],
    };
    let passed = checks.iter().filter(|c| c.passed).count();
    Report {
        suite: suite.name(),
        seed,
        failed: checks.len() - passed,
        passed,
        checks,
    }
}
