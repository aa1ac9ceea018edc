//! Formal characters of `SL2^d`: weight multisets in `Z^d`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Weight = Vec<i64>;

/// Finite weight multiset with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Character {
    d: usize,
    weights: BTreeMap<Weight, u64>,
}

/// Highest weights `(k_1..k_d)`, `k_i >= 0`, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IrrDecomposition {
    pub d: usize,
    pub parts: BTreeMap<Vec<u32>, u64>,
}

pub fn weight_label<T: fmt::Display>(w: &[T]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl Character {
    pub fn zero(d: usize) -> Self {
        Character {
            d,
            weights: BTreeMap::new(),
        }
    }

    pub fn from_weights<I: IntoIterator<Item = (Weight, u64)>>(d: usize, it: I) -> Result<Self> {
        let mut c = Character::zero(d);
        for (w, m) in it {
            if w.len() != d {
                return Err(Error::DimensionMismatch(format!("weight {w:?} is not in Z^{d}")));
            }
            c.insert(w, m);
        }
        Ok(c)
    }

    fn insert(&mut self, w: Weight, m: u64) {
        if m > 0 {
            *self.weights.entry(w).or_insert(0) += m;
        }
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn weights(&self) -> &BTreeMap<Weight, u64> {
        &self.weights
    }

    pub fn multiplicity(&self, w: &[i64]) -> u64 {
        self.weights.get(w).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn add(&self, other: &Character) -> Character {
        let mut out = self.clone();
        for (w, m) in &other.weights {
            out.insert(w.clone(), *m);
        }
        out
    }

    pub fn times(&self, n: u64) -> Character {
        Character {
            d: self.d,
            weights: self
                .weights
                .iter()
                .filter(|_| n > 0)
                .map(|(w, m)| (w.clone(), m * n))
                .collect(),
        }
    }

    pub fn tensor(&self, other: &Character) -> Character {
        let mut out = Character::zero(self.d);
        for (w, m) in &self.weights {
            for (v, n) in &other.weights {
                out.insert(add_weights(w, v), m * n);
            }
        }
        out
    }

    /// Invariant under negating any single coordinate.
    pub fn is_weyl_symmetric(&self) -> bool {
        self.weights.iter().all(|(w, m)| {
            (0..self.d).all(|i| {
                let mut r = w.clone();
                r[i] = -r[i];
                self.multiplicity(&r) == *m
            })
        })
    }

    fn require_symmetric(&self) -> Result<()> {
        if self.is_weyl_symmetric() {
            Ok(())
        } else {
            Err(Error::NotWeylSymmetric)
        }
    }

    fn pair_sums(&self, with_repetition: bool) -> Result<Character> {
        self.require_symmetric()?;
        let mut out = Character::zero(self.d);
        let entries: Vec<(&Weight, u64)> = self.weights.iter().map(|(w, m)| (w, *m)).collect();
        for (i, &(w, m)) in entries.iter().enumerate() {
            let same = if with_repetition { m * (m + 1) / 2 } else { m * (m - 1) / 2 };
            out.insert(add_weights(w, w), same);
            for &(v, n) in &entries[i + 1..] {
                out.insert(add_weights(w, v), m * n);
            }
        }
        Ok(out)
    }

    pub fn sym2(&self) -> Result<Character> {
        self.pair_sums(true)
    }

    pub fn wedge2(&self) -> Result<Character> {
        self.pair_sums(false)
    }

    /// Weight multiset as `"(w1,..,wd)" -> multiplicity`.
    pub fn labelled(&self) -> BTreeMap<String, u64> {
        self.weights.iter().map(|(w, m)| (weight_label(w), *m)).collect()
    }
}

fn add_weights(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Character of `W_{k_1..k_d}`: coordinate `i` runs over `k_i, k_i - 2, .., -k_i`.
pub fn irr_char(k: &[u32]) -> Character {
    let mut weights: Vec<Weight> = vec![vec![]];
    for &ki in k {
        let ki = ki as i64;
        let mut next = Vec::new();
        for w in &weights {
            for j in 0..=ki {
                let mut v = w.clone();
                v.push(ki - 2 * j);
                next.push(v);
            }
        }
        weights = next;
    }
    let mut c = Character::zero(k.len());
    for w in weights {
        c.insert(w, 1);
    }
    c
}

/// `W_{1,..,1}`, the box product of `d` standard representations.
pub fn standard(d: usize) -> Character {
    irr_char(&vec![1; d])
}

impl IrrDecomposition {
    pub fn reconstruct(&self) -> Character {
        let mut c = Character::zero(self.d);
        for (k, m) in &self.parts {
            c = c.add(&irr_char(k).times(*m));
        }
        c
    }

    pub fn multiplicity(&self, k: &[u32]) -> u64 {
        self.parts.get(k).copied().unwrap_or(0)
    }

    pub fn labelled(&self) -> BTreeMap<String, u64> {
        self.parts.iter().map(|(k, m)| (weight_label(k), *m)).collect()
    }
}

impl fmt::Display for IrrDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(k, m)| {
                let w = format!("W{}", weight_label(k));
                if *m == 1 { w } else { format!("{m} {w}") }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Repeatedly strips the irreducible whose highest weight is the
/// lexicographically largest remaining weight. For a Weyl-symmetric input
/// that weight is dominant and its multiplicity is that of the irreducible.
pub fn decompose(chi: &Character) -> Result<IrrDecomposition> {
    chi.require_symmetric()?;
    let mut rest: BTreeMap<Weight, i128> = chi.weights.iter().map(|(w, m)| (w.clone(), *m as i128)).collect();
    let mut parts = BTreeMap::new();
    while let Some((top, &m)) = rest.iter().next_back() {
        if m < 0 || top.iter().any(|&x| x < 0) {
            return Err(Error::NotDecomposable);
        }
        let k: Vec<u32> = top.iter().map(|&x| x as u32).collect();
        for w in irr_char(&k).weights.keys() {
            let e = rest.entry(w.clone()).or_insert(0);
            *e -= m;
            if *e < 0 {
                return Err(Error::NotDecomposable);
            }
            if *e == 0 {
                rest.remove(w);
            }
        }
        parts.insert(k, m as u64);
    }
    let out = IrrDecomposition { d: chi.d, parts };
    if out.reconstruct() != *chi {
        return Err(Error::Internal("decomposition does not reconstruct its input".into()));
    }
    Ok(out)
}

pub fn trivial_multiplicity(chi: &Character) -> Result<u64> {
    Ok(decompose(chi)?.multiplicity(&vec![0; chi.d]))
}

/// `(h^{1,0}, h^{0,1})` or `(h^{2,0}, h^{1,1}, h^{0,2})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeNumbers(pub Vec<u64>);

impl HodgeNumbers {
    pub fn is_conjugate_symmetric(&self) -> bool {
        let v = &self.0;
        v.iter().eq(v.iter().rev())
    }
}

impl fmt::Display for HodgeNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Bigrading read off the last coordinate: weight `w` in cohomological
/// weight `m` lands in `h^{(m+w)/2, (m-w)/2}`.
pub fn hodge_numbers(chi: &Character, m: u32) -> Result<HodgeNumbers> {
    if !(1..=2).contains(&m) || chi.d == 0 {
        return Err(Error::InvalidInput(format!("cohomological weight {m} not in 1..=2")));
    }
    let mi = m as i64;
    let mut h = vec![0u64; m as usize + 1];
    for (w, mult) in &chi.weights {
        let last = *w.last().expect("d >= 1");
        if last.abs() > mi || (last - mi).rem_euclid(2) != 0 {
            return Err(Error::WeightOutOfRange { weight: last, m });
        }
        h[((mi - last) / 2) as usize] += mult;
    }
    Ok(HodgeNumbers(h))
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandHodge {
    pub highest_weight: String,
    pub dim: u64,
    pub multiplicity: u64,
    pub hodge: HodgeNumbers,
}

/// Hodge numbers of each irreducible constituent.
pub fn hodge_by_summand(dec: &IrrDecomposition, m: u32) -> Result<Vec<SummandHodge>> {
    dec.parts
        .iter()
        .map(|(k, mult)| {
            let c = irr_char(k);
            Ok(SummandHodge {
                highest_weight: weight_label(k),
                dim: c.dim(),
                multiplicity: *mult,
                hodge: hodge_numbers(&c, m)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct KsRepresentationReport {
    pub d: usize,
    pub dim_h1: u64,
    pub bigrading_slot: String,
    pub sym2_w: BTreeMap<String, u64>,
    pub wedge2_w: BTreeMap<String, u64>,
    pub sym2_two_w: BTreeMap<String, u64>,
    pub wedge2_two_w: BTreeMap<String, u64>,
    pub trivial_in_sym2_w: u64,
    pub trivial_in_wedge2_w: u64,
    pub trivial_in_sym2_two_w: u64,
    pub trivial_in_wedge2_two_w: u64,
    /// `Sym^2 W` has a trivial summand iff `d` even, `wedge^2 W` iff `d` odd.
    pub parity_rule_holds: bool,
    /// `wedge^2(W + W) = 3 wedge^2 W + Sym^2 W`.
    pub wedge2_identity_holds: bool,
    pub transcendental_summands: Vec<String>,
    pub transcendental_dim: u64,
    pub transcendental_hodge: HodgeNumbers,
}

/// Character bookkeeping for the Kuga-Satake variety over a degree-`d` field:
/// `H^1 = W ⊕ W` with `W = W_{1..1}`, and `T(S)_C = ⊕ W_{2 e_i}`.
pub fn ks_representation_report(d: usize) -> Result<KsRepresentationReport> {
    if !(2..=6).contains(&d) {
        return Err(Error::InvalidInput(format!("d = {d} outside 2..=6")));
    }
    let w = standard(d);
    let two_w = w.times(2);
    let (s, a) = (w.sym2()?, w.wedge2()?);
    let (s2, a2) = (two_w.sym2()?, two_w.wedge2()?);
    let (ds, da, ds2, da2) = (decompose(&s)?, decompose(&a)?, decompose(&s2)?, decompose(&a2)?);
    let zero = vec![0u32; d];
    let (ts, ta) = (ds.multiplicity(&zero), da.multiplicity(&zero));
    let even = d % 2 == 0;
    let mut transcendental = Character::zero(d);
    let mut summands = Vec::new();
    for i in 0..d {
        let mut k = vec![0u32; d];
        k[i] = 2;
        summands.push(format!("W{}", weight_label(&k)));
        transcendental = transcendental.add(&irr_char(&k));
    }
    Ok(KsRepresentationReport {
        d,
        dim_h1: two_w.dim(),
        bigrading_slot: format!("last factor (coordinate {d})"),
        sym2_w: ds.labelled(),
        wedge2_w: da.labelled(),
        sym2_two_w: ds2.labelled(),
        wedge2_two_w: da2.labelled(),
        trivial_in_sym2_w: ts,
        trivial_in_wedge2_w: ta,
        trivial_in_sym2_two_w: ds2.multiplicity(&zero),
        trivial_in_wedge2_two_w: da2.multiplicity(&zero),
        parity_rule_holds: (ts >= 1) == even && (ta >= 1) != even,
        wedge2_identity_holds: a2 == a.times(3).add(&s),
        transcendental_summands: summands,
        transcendental_dim: transcendental.dim(),
        transcendental_hodge: hodge_numbers(&transcendental, 2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(parts: &[(&[u32], u64)]) -> BTreeMap<Vec<u32>, u64> {
        parts.iter().map(|(k, m)| (k.to_vec(), *m)).collect()
    }

    #[test]
    fn irreducible_characters() {
        let t = irr_char(&[0, 0]);
        assert_eq!(t.dim(), 1);
        assert_eq!(t.multiplicity(&[0, 0]), 1);
        let w = irr_char(&[1, 1]);
        assert_eq!(w.dim(), 4);
        for w0 in [-1, 1] {
            for w1 in [-1, 1] {
                assert_eq!(w.multiplicity(&[w0, w1]), 1);
            }
        }
        assert_eq!(irr_char(&[2, 2]).dim(), 9);
    }

    #[test]
    fn sym2_wedge2_examples() {
        let w = irr_char(&[1]);
        assert_eq!(w.sym2().unwrap(), irr_char(&[2]));
        assert_eq!(w.wedge2().unwrap(), irr_char(&[0]));

        let w = irr_char(&[1, 1]);
        let two = w.times(2);
        let lhs = two.wedge2().unwrap();
        assert_eq!(lhs.dim(), 28);
        assert_eq!(lhs, w.wedge2().unwrap().times(3).add(&w.sym2().unwrap()));

        let skew = Character::from_weights(1, [(vec![1], 1)]).unwrap();
        assert_eq!(skew.sym2(), Err(Error::NotWeylSymmetric));
    }

    #[test]
    fn decompose_examples() {
        let w = irr_char(&[1, 1]);
        assert_eq!(decompose(&w.sym2().unwrap()).unwrap().parts, dec(&[(&[2, 2], 1), (&[0, 0], 1)]));
        assert_eq!(decompose(&w.wedge2().unwrap()).unwrap().parts, dec(&[(&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(decompose(&irr_char(&[3, 1])).unwrap().parts, dec(&[(&[3, 1], 1)]));

        // symmetric but not a character: W_2 - W_0
        let bad = Character::from_weights(1, [(vec![2], 1), (vec![-2], 1)]).unwrap();
        assert_eq!(decompose(&bad), Err(Error::NotDecomposable));
    }

    #[test]
    fn trivial_multiplicity_examples() {
        assert_eq!(trivial_multiplicity(&standard(2).sym2().unwrap()).unwrap(), 1);
        assert_eq!(trivial_multiplicity(&standard(3).wedge2().unwrap()).unwrap(), 1);
        assert_eq!(trivial_multiplicity(&standard(2).wedge2().unwrap()).unwrap(), 0);
    }

    #[test]
    fn hodge_examples() {
        let w = irr_char(&[1, 1]);
        assert_eq!(hodge_numbers(&w.wedge2().unwrap(), 2).unwrap().0, vec![1, 4, 1]);
        assert_eq!(hodge_numbers(&irr_char(&[2, 2]), 2).unwrap().0, vec![3, 3, 3]);
        assert_eq!(hodge_numbers(&w.sym2().unwrap(), 2).unwrap().0, vec![3, 4, 3]);
        let t = irr_char(&[2, 0]).add(&irr_char(&[0, 2]));
        let h = hodge_numbers(&t, 2).unwrap();
        assert_eq!((t.dim(), h.0[0]), (6, 1));
        assert_eq!(hodge_numbers(&w, 1).unwrap().0, vec![2, 2]);
        assert_eq!(
            hodge_numbers(&irr_char(&[0, 2]), 1),
            Err(Error::WeightOutOfRange { weight: -2, m: 1 })
        );
    }

    #[test]
    fn ks_reports() {
        let r = ks_representation_report(2).unwrap();
        assert_eq!(r.dim_h1, 8);
        assert!(r.parity_rule_holds);
        assert!(r.wedge2_identity_holds);
        assert_eq!(r.trivial_in_sym2_w, 1);
        let r = ks_representation_report(3).unwrap();
        assert_eq!(r.transcendental_summands, vec!["W(2,0,0)", "W(0,2,0)", "W(0,0,2)"]);
        assert_eq!(r.transcendental_dim, 9);
        assert_eq!(r.transcendental_hodge.0, vec![1, 7, 1]);
        assert!(ks_representation_report(1).is_err());
    }
}
