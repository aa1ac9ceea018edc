//! Corestriction of quadratic spaces from a totally real field down to the rationals.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kquad::KQuadraticForm;
use crate::linalg::QMatrix;
use crate::numfield::{FieldElement, NumberField};
use crate::rational::{format_rational, from_int, rem_euclid, rat, Rational};
use crate::snf::smith_normal_form;

/// Rank of the K3 lattice.
pub const K3_RANK: usize = 22;
/// Largest rank for which the embedding rule answers `Embeds`.
pub const EMBED_RANK_BOUND: usize = 11;

/// Rational Gram matrix of a corestricted form. Basis vector `i*d + j` is `a^j e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub matrix: QMatrix,
    pub rank_over_field: usize,
    pub degree: usize,
}

impl GramMatrix {
    pub fn from_matrix(matrix: QMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = matrix.nrows();
        Ok(GramMatrix {
            matrix,
            rank_over_field: n,
            degree: 1,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// `(i, j)` for the basis vector `a^j e_i`.
    pub fn label(&self, index: usize) -> (usize, usize) {
        (index / self.degree, index % self.degree)
    }

    pub fn det(&self) -> Rational {
        self.matrix.det()
    }
}

/// The Gram matrix of `Cor_{K/Q}(Q)`: entry `Tr(a^(j+j') Q(e_i, e_i'))`.
pub fn corestrict(f: &NumberField, q: &KQuadraticForm) -> Result<GramMatrix> {
    if q.field() != f {
        return Err(Error::InvalidInput("form is not defined over the given field".into()));
    }
    let d = f.degree();
    let n = q.rank();
    let powers: Vec<FieldElement> = (0..2 * d).map(|k| f.pow(&f.generator(), k as u32)).collect();
    let mut rows = vec![vec![rat(0); n * d]; n * d];
    for i in 0..n {
        for ip in 0..n {
            let qv = q.entry(i, ip);
            if qv.is_zero() {
                continue;
            }
            for j in 0..d {
                for jp in 0..d {
                    rows[i * d + j][ip * d + jp] = f.trace(&f.mul(&powers[j + jp], qv));
                }
            }
        }
    }
    Ok(GramMatrix {
        matrix: QMatrix::from_rows(rows)?,
        rank_over_field: n,
        degree: d,
    })
}

/// Rational coordinates of `v in K^n` in the basis `a^j e_i`.
pub fn flatten(v: &[FieldElement]) -> Vec<Rational> {
    v.iter().flat_map(|x| x.coords().iter().cloned()).collect()
}

/// Matrix of multiplication by `k` on `K^n` in the basis `a^j e_i`.
pub fn multiplication_operator(f: &NumberField, n: usize, k: &FieldElement) -> QMatrix {
    let block = f.multiplication_matrix(k);
    let mut out = QMatrix::zeros(0, 0);
    for _ in 0..n {
        out = out.direct_sum(&block);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscCheck {
    #[serde(serialize_with = "ser_bigint")]
    pub det: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub predicted_lemma: BigInt,
    #[serde(serialize_with = "ser_opt_bigint", skip_serializing_if = "Option::is_none")]
    pub predicted_thm_main: Option<BigInt>,
    pub match_lemma: bool,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_bigint<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Compares `|det G|` with `|disc(Z[a])|^n |N(disc Q)|`; for `n = 3, d = 2` also
/// reports the variant with exponent 2 in place of `n`.
pub fn disc_check(f: &NumberField, q: &KQuadraticForm, g: &GramMatrix) -> Result<DiscCheck> {
    let det = g.det().abs();
    if !det.is_integer() {
        return Err(Error::NotIntegral);
    }
    let det = det.to_integer();
    let dk = f.disc_order()?.abs();
    let norm = f.norm(&q.disc_form()).abs();
    let n = q.rank();
    let predict = |e: usize| -> Option<BigInt> {
        let v = from_int(dk.pow(e as u32)) * &norm;
        v.is_integer().then(|| v.to_integer())
    };
    let predicted_lemma = predict(n).unwrap_or_else(BigInt::zero);
    let predicted_thm_main = if n == 3 && f.degree() == 2 { predict(2) } else { None };
    Ok(DiscCheck {
        match_lemma: predicted_lemma == det,
        det,
        predicted_lemma,
        predicted_thm_main,
    })
}

pub fn is_even(g: &GramMatrix) -> bool {
    let m = &g.matrix;
    m.is_integral() && (0..m.nrows()).all(|i| m[(i, i)].to_integer() % 2 == BigInt::zero())
}

/// Finite quadratic module `G^* / G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub elementary_divisors: Vec<BigInt>,
    /// Generators as vectors in `G^* ⊂ Q^r`, one per divisor.
    pub generators: Vec<Vec<Rational>>,
    /// `q(g_i) = G(g_i, g_i)`, mod 2 if `G` is even, otherwise mod 1.
    pub q_values: Vec<Rational>,
    /// `b(g_i, g_j)` mod 1.
    pub pairings: Vec<Vec<Rational>>,
    pub even: bool,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.elementary_divisors.iter().product()
    }

    pub fn length(&self) -> usize {
        self.elementary_divisors.len()
    }
}

pub fn discriminant_group(g: &GramMatrix) -> Result<DiscriminantGroup> {
    let ints = g.matrix.to_integer_rows()?;
    let r = g.rank();
    let snf = smith_normal_form(&ints);
    if snf.diagonal.len() < r {
        return Err(Error::Degenerate);
    }
    // G (R e_i / s_i) = L^{-1} e_i is integral, so these columns generate G^*/G
    let even = is_even(g);
    let modulus = if even { rat(2) } else { rat(1) };
    let mut divisors = Vec::new();
    let mut generators = Vec::new();
    for (i, s) in snf.diagonal.iter().enumerate() {
        if s.is_one() {
            continue;
        }
        let s_q = from_int(s.clone());
        let v: Vec<Rational> = (0..r).map(|k| from_int(snf.right[k][i].clone()) / &s_q).collect();
        divisors.push(s.clone());
        generators.push(v);
    }
    let q_values = generators
        .iter()
        .map(|v| rem_euclid(&g.matrix.bilinear(v, v), &modulus))
        .collect();
    let pairings = generators
        .iter()
        .map(|v| {
            generators
                .iter()
                .map(|w| rem_euclid(&g.matrix.bilinear(v, w), &rat(1)))
                .collect()
        })
        .collect();
    Ok(DiscriminantGroup {
        elementary_divisors: divisors,
        generators,
        q_values,
        pairings,
        even,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum Embeddability {
    Embeds(String),
    CannotEmbed(String),
    Unknown(String),
}

impl Embeddability {
    pub fn verdict(&self) -> &'static str {
        match self {
            Embeddability::Embeds(_) => "Embeds",
            Embeddability::CannotEmbed(_) => "CannotEmbed",
            Embeddability::Unknown(_) => "Unknown",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            Embeddability::Embeds(r) | Embeddability::CannotEmbed(r) | Embeddability::Unknown(r) => r,
        }
    }
}

/// Primitive embedding into the K3 lattice as a transcendental-type lattice
/// of signature `(2, r-2)`. Only necessary conditions plus the sufficient
/// bound `r <= 11` are used; everything in between is `Unknown`.
pub fn k3_embeddability(g: &GramMatrix) -> Result<Embeddability> {
    if !is_even(g) {
        return Err(Error::NotEven);
    }
    let r = g.rank();
    let (p, q) = g.matrix.signature()?;
    if (p, q) != (2, r.saturating_sub(2)) || r < 2 {
        return Ok(Embeddability::CannotEmbed(format!(
            "signature ({p},{q}) is not (2, rank - 2)"
        )));
    }
    if r >= K3_RANK {
        return Ok(Embeddability::CannotEmbed(format!("rank {r} exceeds 21")));
    }
    let ell = discriminant_group(g)?.length();
    if r + ell > K3_RANK {
        return Ok(Embeddability::CannotEmbed(format!(
            "rank {r} plus discriminant length {ell} exceeds 22"
        )));
    }
    if r <= EMBED_RANK_BOUND {
        return Ok(Embeddability::Embeds(format!(
            "even of signature (2,{q}) and rank {r} <= {EMBED_RANK_BOUND}"
        )));
    }
    Ok(Embeddability::Unknown(format!(
        "rank {r} with discriminant length {ell} is beyond the implemented criteria"
    )))
}

fn e8_negative() -> QMatrix {
    // Cartan matrix of E8 (Bourbaki labelling), negated
    let mut rows = vec![vec![0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = -2;
    }
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    for (a, b) in edges {
        rows[a][b] = 1;
        rows[b][a] = 1;
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    QMatrix::from_i64(&refs)
}

pub fn hyperbolic_plane() -> QMatrix {
    QMatrix::from_i64(&[&[0, 1], &[1, 0]])
}

/// Gram matrix of `E8(-1)^2 + U^3`, validated on first use.
pub fn k3_lattice() -> &'static QMatrix {
    static K3: OnceLock<QMatrix> = OnceLock::new();
    K3.get_or_init(|| {
        let e8 = e8_negative();
        let u = hyperbolic_plane();
        let m = e8.direct_sum(&e8).direct_sum(&u).direct_sum(&u).direct_sum(&u);
        let g = GramMatrix::from_matrix(m.clone()).expect("symmetric");
        assert!(is_even(&g));
        assert_eq!(m.det().abs(), rat(1));
        assert_eq!(m.signature().expect("nondegenerate"), (3, 19));
        m
    })
}

/// JSON-friendly view of a discriminant group.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantSummary {
    pub elementary_divisors: Vec<String>,
    pub q_values: Vec<String>,
    pub pairings: Vec<Vec<String>>,
    pub even: bool,
}

impl From<&DiscriminantGroup> for DiscriminantSummary {
    fn from(a: &DiscriminantGroup) -> Self {
        DiscriminantSummary {
            elementary_divisors: a.elementary_divisors.iter().map(|d| d.to_string()).collect(),
            q_values: a.q_values.iter().map(format_rational).collect(),
            pairings: a
                .pairings
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
            even: a.even,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn q2() -> NumberField {
        NumberField::parse("x^2-2").unwrap()
    }

    fn rank_one(f: &NumberField, e: FieldElement) -> KQuadraticForm {
        KQuadraticForm::diagonal(f.clone(), &[e]).unwrap()
    }

    fn worked_example() -> (NumberField, KQuadraticForm) {
        let f = q2();
        let u = f.elem(&[-1, 1]);
        let q = KQuadraticForm::diagonal(f.clone(), &[u.clone(), u, f.elem(&[-1])]).unwrap();
        (f, q)
    }

    #[test]
    fn corestrict_examples() {
        let f = q2();
        let g = corestrict(&f, &rank_one(&f, f.one())).unwrap();
        assert_eq!(g.matrix, QMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        let g = corestrict(&f, &rank_one(&f, f.generator())).unwrap();
        assert_eq!(g.matrix, QMatrix::from_i64(&[&[0, 4], &[4, 0]]));

        let q = NumberField::rationals();
        let form = KQuadraticForm::new(
            q.clone(),
            vec![vec![q.elem(&[2]), q.elem(&[1])], vec![q.elem(&[1]), q.elem(&[-4])]],
        )
        .unwrap();
        let g = corestrict(&q, &form).unwrap();
        assert_eq!(g.matrix, QMatrix::from_i64(&[&[2, 1], &[1, -4]]));
    }

    #[test]
    fn multiplication_operator_examples() {
        let f = q2();
        assert_eq!(
            multiplication_operator(&f, 1, &f.generator()),
            QMatrix::from_i64(&[&[0, 2], &[1, 0]])
        );
        assert_eq!(multiplication_operator(&f, 3, &f.one()), QMatrix::identity(6));
        let a2 = f.pow(&f.generator(), 2);
        assert_eq!(multiplication_operator(&f, 1, &a2), QMatrix::identity(2).scale(&rat(2)));
    }

    #[test]
    fn disc_check_examples() {
        let f = q2();
        let one = rank_one(&f, f.one());
        let c = disc_check(&f, &one, &corestrict(&f, &one).unwrap()).unwrap();
        assert_eq!((c.det, c.predicted_lemma, c.match_lemma), (8.into(), 8.into(), true));

        let sq = rank_one(&f, f.generator());
        let c = disc_check(&f, &sq, &corestrict(&f, &sq).unwrap()).unwrap();
        assert_eq!((c.det, c.match_lemma), (16.into(), true));

        let (f, q) = worked_example();
        let g = corestrict(&f, &q).unwrap();
        let c = disc_check(&f, &q, &g).unwrap();
        assert_eq!(c.det, 512.into());
        assert!(c.match_lemma);
        assert_eq!(c.predicted_thm_main, Some(64.into()));
    }

    #[test]
    fn evenness() {
        let even = |rows: &[&[i64]]| is_even(&GramMatrix::from_matrix(QMatrix::from_i64(rows)).unwrap());
        assert!(even(&[&[2, 0], &[0, 4]]));
        assert!(!even(&[&[1, 0], &[0, 2]]));
        assert!(even(&[&[0, 4], &[4, 0]]));
        let half = GramMatrix::from_matrix(QMatrix::diagonal(&[frac(1, 2), rat(2)])).unwrap();
        assert!(!is_even(&half));
    }

    #[test]
    fn discriminant_group_examples() {
        let g = GramMatrix::from_matrix(QMatrix::from_i64(&[&[2, 0], &[0, 4]])).unwrap();
        let a = discriminant_group(&g).unwrap();
        assert_eq!(a.elementary_divisors, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(a.q_values, vec![frac(1, 2), frac(1, 4)]);
        assert_eq!(a.pairings[0][1], rat(0));

        for m in [QMatrix::identity(2), hyperbolic_plane()] {
            let a = discriminant_group(&GramMatrix::from_matrix(m).unwrap()).unwrap();
            assert!(a.elementary_divisors.is_empty());
            assert_eq!(a.order(), BigInt::one());
        }

        let half = GramMatrix::from_matrix(QMatrix::diagonal(&[frac(1, 2), rat(2)])).unwrap();
        assert_eq!(discriminant_group(&half), Err(Error::NotIntegral));
    }

    #[test]
    fn worked_example_lattice() {
        let (f, q) = worked_example();
        let g = corestrict(&f, &q).unwrap();
        let blocks = QMatrix::from_i64(&[&[-2, 4], &[4, -4]]);
        let last = QMatrix::from_i64(&[&[-2, 0], &[0, -4]]);
        assert_eq!(g.matrix, blocks.direct_sum(&blocks).direct_sum(&last));
        assert!(is_even(&g));
        assert_eq!(g.matrix.signature().unwrap(), (2, 4));
        let a = discriminant_group(&g).unwrap();
        assert_eq!(a.order(), BigInt::from(512));
        assert_eq!(a.length(), 6);
        assert_eq!(k3_embeddability(&g).unwrap().verdict(), "Embeds");
    }

    #[test]
    fn embeddability_rules() {
        let k3 = GramMatrix::from_matrix(k3_lattice().clone()).unwrap();
        assert_eq!(k3_embeddability(&k3).unwrap().verdict(), "CannotEmbed");

        let mut entries = vec![rat(2)];
        entries.extend(std::iter::repeat_n(rat(-2), 9));
        let m = QMatrix::diagonal(&entries).direct_sum(&hyperbolic_plane());
        let g = GramMatrix::from_matrix(m).unwrap();
        assert_eq!(g.matrix.signature().unwrap(), (2, 10));
        assert_eq!(discriminant_group(&g).unwrap().length(), 10);
        assert_eq!(k3_embeddability(&g).unwrap().verdict(), "Unknown");

        let odd = GramMatrix::from_matrix(QMatrix::identity(2)).unwrap();
        assert_eq!(k3_embeddability(&odd), Err(Error::NotEven));

        let wrong = GramMatrix::from_matrix(QMatrix::diagonal(&[rat(2), rat(2), rat(2)])).unwrap();
        assert_eq!(k3_embeddability(&wrong).unwrap().verdict(), "CannotEmbed");
    }
}
