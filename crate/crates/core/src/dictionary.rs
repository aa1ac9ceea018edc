//! The correspondence between K3 surfaces with real multiplication by a real
//! quadratic field and abelian fourfolds, assembled from the other modules.

use serde::Serialize;

use crate::clifford::{even_clifford_ternary, split_quadric, ConicData};
use crate::coreslat::{
    corestrict, disc_check, discriminant_group, is_even, k3_embeddability, DiscCheck,
    DiscriminantSummary, Embeddability, GramMatrix,
};
use crate::error::{Error, Result};
use crate::kquad::KQuadraticForm;
use crate::numfield::NumberField;
use crate::quat::{
    corestriction_class, hilbert_k, ks_descriptor, quaternion_from_class, ram_infinity_condition,
    BrauerClass, PlaceK,
};
use crate::rational::format_rational;

/// Invariants of a corestricted lattice.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub gram: Vec<Vec<String>>,
    pub rank: usize,
    pub det: String,
    pub signature: (usize, usize),
    pub even: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<DiscriminantSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embeddability: Option<Embeddability>,
    pub lemma_check: DiscCheck,
}

impl LatticeReport {
    pub fn build(f: &NumberField, q: &KQuadraticForm) -> Result<Self> {
        let g = corestrict(f, q)?;
        Self::from_gram(f, q, &g)
    }

    fn from_gram(f: &NumberField, q: &KQuadraticForm, g: &GramMatrix) -> Result<Self> {
        let even = is_even(g);
        let integral = g.matrix.is_integral();
        Ok(LatticeReport {
            gram: g.matrix.to_strings(),
            rank: g.rank(),
            det: format_rational(&g.det()),
            signature: g.matrix.signature()?,
            even,
            discriminant: if integral {
                Some(DiscriminantSummary::from(&discriminant_group(g)?))
            } else {
                None
            },
            embeddability: if even { Some(k3_embeddability(g)?) } else { None },
            lemma_check: disc_check(f, q, g)?,
        })
    }

    pub fn verdict(&self) -> Option<&'static str> {
        self.embeddability.as_ref().map(|e| e.verdict())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct K3Report {
    pub minpoly: String,
    pub form_gram: Vec<Vec<Vec<String>>>,
    pub signatures: Vec<(usize, usize)>,
    /// Embedding where the form has signature `(2, 1)`.
    pub positive_embedding: usize,
    pub quaternion: (Vec<String>, Vec<String>),
    pub ram_infinity: bool,
    /// Archimedean symbols of `B`, indexed by embedding.
    pub archimedean_symbols: Vec<i8>,
    pub cor_class: BrauerClass,
    pub endo_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_cor: Option<(i64, i64)>,
    pub ks_dim: u64,
    pub transcendental: LatticeReport,
    /// Present only when `Cor(Q)` is not even: the lattice of `Cor(2Q)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled: Option<LatticeReport>,
}

/// From a K3-type ternary form over a real quadratic field to the
/// quaternion algebra, Brauer class and Kuga-Satake data, together with
/// the transcendental lattice `Cor(Q)`.
pub fn k3_to_fourfold(f: &NumberField, q: &KQuadraticForm, search_bound: u64) -> Result<K3Report> {
    if f.degree() != 2 {
        return Err(Error::NotQuadraticField(f.degree()));
    }
    if q.rank() != 3 {
        return Err(Error::DimensionMismatch(format!("ternary form expected, rank {}", q.rank())));
    }
    if q.field() != f {
        return Err(Error::InvalidInput("form is not defined over the given field".into()));
    }
    let sig = q.signatures()?;
    let positive_embedding = sig
        .positive_embedding()
        .ok_or_else(|| Error::NotK3Type(sig.to_string()))?;
    let b = even_clifford_ternary(q)?;
    if !ram_infinity_condition(&b)? {
        return Err(Error::Internal("K3-type form gave an algebra violating the real ramification condition".into()));
    }
    let archimedean_symbols = (0..2)
        .map(|i| hilbert_k(f, &b.alpha, &b.beta, &PlaceK::Real(i)))
        .collect::<Result<Vec<_>>>()?;
    if archimedean_symbols.iter().position(|&s| s == 1) != Some(positive_embedding) {
        return Err(Error::Internal("algebra is not split exactly at the (2,1) embedding".into()));
    }
    let ks = ks_descriptor(&b, None, search_bound)?;
    let transcendental = LatticeReport::build(f, q)?;
    let doubled = if transcendental.even {
        None
    } else {
        let two = f.elem(&[2]);
        Some(LatticeReport::build(f, &q.scale(&two)?.form)?)
    };
    Ok(K3Report {
        minpoly: f.minpoly().to_string(),
        form_gram: q.gram().iter().map(|r| r.iter().map(|e| e.to_strings()).collect()).collect(),
        signatures: sig.pairs.clone(),
        positive_embedding,
        quaternion: (b.alpha.to_strings(), b.beta.to_strings()),
        ram_infinity: true,
        archimedean_symbols,
        cor_class: ks.cor_class,
        endo_label: ks.endo_label,
        b_cor: ks.b_cor,
        ks_dim: ks.ks_dim,
        transcendental,
        doubled,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConicReport {
    pub diagonal: Vec<Vec<String>>,
    pub signatures: Vec<(usize, usize)>,
    pub real_points: Vec<bool>,
}

impl From<&ConicData> for ConicReport {
    fn from(c: &ConicData) -> Self {
        ConicReport {
            diagonal: (0..3).map(|i| c.form.entry(i, i).to_strings()).collect(),
            signatures: c.signatures.pairs.clone(),
            real_points: c.real_points.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FourfoldReport {
    pub input_diagonal: Vec<String>,
    pub congruence: Vec<Vec<String>>,
    pub center_radicand: String,
    pub minpoly: String,
    pub quaternion: (Vec<String>, Vec<String>),
    pub conic: ConicReport,
    pub conic_conjugate: ConicReport,
    pub k3_type: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cor_class: Option<BrauerClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_cor: Option<(i64, i64)>,
    /// When some multiple of a conic is of K3 type: that multiple and its corestriction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k3_scaling: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcendental: Option<LatticeReport>,
}

/// Analyzes a rational quaternary form through the even Clifford algebra
/// and its pair of conjugate conics. Reports, never asserts, K3 type.
pub fn fourfold_to_k3(d: &KQuadraticForm, search_bound: u64) -> Result<FourfoldReport> {
    let split = split_quadric(d)?;
    let b = &split.clifford.algebra;
    let k = &b.field;
    let cor_class = corestriction_class(b)?;
    let b_cor = if cor_class.is_trivial() {
        None
    } else {
        quaternion_from_class(&cor_class, search_bound).ok()
    };
    let mut k3_scaling = None;
    let mut transcendental = None;
    if split.k3_type {
        let chosen = [&split.conic, &split.conjugate]
            .into_iter()
            .find(|c| c.k3_type_up_to_scaling())
            .expect("k3_type implies one conic qualifies");
        if let Some(lambda) = chosen.k3_scaling()? {
            let form = chosen.form.scale(&lambda)?.form;
            transcendental = Some(LatticeReport::build(k, &form)?);
            k3_scaling = Some(lambda.to_strings());
        }
    }
    Ok(FourfoldReport {
        input_diagonal: split.clifford.diagonal.iter().map(format_rational).collect(),
        congruence: split
            .congruence
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect(),
        center_radicand: split.clifford.radicand.to_string(),
        minpoly: k.minpoly().to_string(),
        quaternion: (b.alpha.to_strings(), b.beta.to_strings()),
        conic: ConicReport::from(&split.conic),
        conic_conjugate: ConicReport::from(&split.conjugate),
        k3_type: split.k3_type,
        cor_class: Some(cor_class),
        b_cor,
        k3_scaling,
        transcendental,
    })
}
