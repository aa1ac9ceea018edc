//! Quadratic forms over a totally real number field.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::{FieldDescriptor, FieldElement, NumberField};
use crate::rational::{Rational, RationalRepr};

pub const MAX_RANK: usize = 6;

/// Nondegenerate symmetric bilinear form on `K^n`, given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KQuadraticForm {
    field: NumberField,
    gram: Vec<Vec<FieldElement>>,
}

/// Per-embedding signatures `(p_i, q_i)`, in embedding order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignatureVector {
    pub pairs: Vec<(usize, usize)>,
}

impl SignatureVector {
    /// The pairs sorted, for order-free comparison.
    pub fn multiset(&self) -> Vec<(usize, usize)> {
        let mut v = self.pairs.clone();
        v.sort();
        v
    }

    /// Embedding-wise sum, i.e. the signature of the trace form.
    pub fn total(&self) -> (usize, usize) {
        self.pairs
            .iter()
            .fold((0, 0), |(p, q), (a, b)| (p + a, q + b))
    }

    /// Exactly one embedding of signature `(2, n-2)`, all others `(0, n)`.
    pub fn is_k3_type(&self) -> bool {
        let Some(&(p0, q0)) = self.pairs.first() else {
            return false;
        };
        let n = p0 + q0;
        if n < 2 {
            return false;
        }
        let special = self.pairs.iter().filter(|&&pq| pq == (2, n - 2)).count();
        let negative = self.pairs.iter().filter(|&&pq| pq == (0, n)).count();
        special == 1 && special + negative == self.pairs.len()
    }

    /// Index of the embedding with signature `(2, n-2)` for K3-type vectors.
    pub fn positive_embedding(&self) -> Option<usize> {
        if !self.is_k3_type() {
            return None;
        }
        self.pairs.iter().position(|&(p, _)| p == 2)
    }
}

impl fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(p, q)| format!("({p},{q})")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Diagonal entries together with the change of basis: row `i` of `basis`
/// holds the old coordinates of the `i`-th new basis vector, so
/// `basis * gram * basis^T = diag(entries)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub entries: Vec<FieldElement>,
    pub basis: Vec<Vec<FieldElement>>,
}

#[derive(Clone, Debug)]
pub struct ScaledForm {
    pub form: KQuadraticForm,
    pub signature_preserved: bool,
}

impl KQuadraticForm {
    pub fn new(field: NumberField, gram: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = gram.len();
        if !(1..=MAX_RANK).contains(&n) {
            return Err(Error::InvalidInput(format!("rank {n} outside 1..={MAX_RANK}")));
        }
        let d = field.degree();
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch("gram matrix is not square".into()));
            }
            if row.iter().any(|e| e.coords().len() != d) {
                return Err(Error::DimensionMismatch(
                    "gram entry has the wrong number of coordinates".into(),
                ));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(KQuadraticForm { field, gram })
    }

    pub fn diagonal(field: NumberField, entries: &[FieldElement]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { field.zero() })
                    .collect()
            })
            .collect();
        KQuadraticForm::new(field, gram)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<FieldElement>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.gram[i][j]
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| i == j || self.gram[i][j].is_zero()))
    }

    /// `Q(v, w)` for coordinate vectors over `K`.
    pub fn eval(&self, v: &[FieldElement], w: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                let t = f.mul(&f.mul(vi, &self.gram[i][j]), wj);
                acc = f.add(&acc, &t);
            }
        }
        acc
    }

    /// Determinant of the Gram matrix.
    pub fn disc_form(&self) -> FieldElement {
        let f = &self.field;
        let n = self.rank();
        let mut a = self.gram.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return f.zero();
            };
            if p != col {
                a.swap(p, col);
                det = f.neg(&det);
            }
            let pivot = a[col][col].clone();
            det = f.mul(&det, &pivot);
            let inv = f.invert(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = f.mul(&a[r][col], &inv);
                for c in col..n {
                    let t = f.mul(&factor, &a[col][c]);
                    a[r][c] = f.sub(&a[r][c], &t);
                }
            }
        }
        det
    }

    /// Symmetric Gaussian elimination over `K`. A zero pivot at step `k` is
    /// repaired with `v_k <- v_k + v_j` (or `v_k - v_j` if that also gives a
    /// zero pivot), `j` the first nonzero off-diagonal entry of row `k`.
    pub fn diagonalize(&self) -> Result<Diagonalization> {
        let f = &self.field;
        let n = self.rank();
        if self.disc_form().is_zero() {
            return Err(Error::Degenerate);
        }
        let mut a = self.gram.clone();
        let mut basis: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        let mut entries = Vec::with_capacity(n);
        for k in 0..n {
            if a[k][k].is_zero() {
                let j = (k + 1..n)
                    .find(|&j| !a[k][j].is_zero())
                    .ok_or(Error::Degenerate)?;
                let two_akj = f.add(&a[k][j], &a[k][j]);
                let plus = f.add(&two_akj, &a[j][j]);
                let s = if plus.is_zero() { f.neg(&f.one()) } else { f.one() };
                for c in 0..n {
                    let t = f.mul(&s, &a[j][c]);
                    a[k][c] = f.add(&a[k][c], &t);
                    let t = f.mul(&s, &basis[j][c]);
                    basis[k][c] = f.add(&basis[k][c], &t);
                }
                for r in 0..n {
                    let t = f.mul(&s, &a[r][j]);
                    a[r][k] = f.add(&a[r][k], &t);
                }
            }
            let pivot = a[k][k].clone();
            let inv = f.invert(&pivot)?;
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let factor = f.mul(&a[r][k], &inv);
                for c in 0..n {
                    let t = f.mul(&factor, &a[k][c]);
                    a[r][c] = f.sub(&a[r][c], &t);
                    let t = f.mul(&factor, &basis[k][c]);
                    basis[r][c] = f.sub(&basis[r][c], &t);
                }
                for c in 0..n {
                    // keep the working matrix symmetric: column op mirrors the row op
                    let t = f.mul(&factor, &a[c][k]);
                    a[c][r] = f.sub(&a[c][r], &t);
                }
            }
            entries.push(pivot);
        }
        Ok(Diagonalization { entries, basis })
    }

    pub fn signatures(&self) -> Result<SignatureVector> {
        let diag = self.diagonalize()?;
        let d = self.field.degree();
        let n = self.rank();
        let mut pairs = Vec::with_capacity(d);
        for i in 0..d {
            let mut p = 0;
            for e in &diag.entries {
                if self.field.sign_at(e, i)? > 0 {
                    p += 1;
                }
            }
            pairs.push((p, n - p));
        }
        Ok(SignatureVector { pairs })
    }

    pub fn is_k3_type(&self) -> Result<bool> {
        Ok(self.signatures()?.is_k3_type())
    }

    /// `lambda * Q`; the signature vector is preserved when `lambda` is totally positive.
    pub fn scale(&self, lambda: &FieldElement) -> Result<ScaledForm> {
        if lambda.is_zero() {
            return Err(Error::InvalidInput("scaling by zero".into()));
        }
        let f = &self.field;
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|e| f.mul(lambda, e)).collect())
            .collect();
        Ok(ScaledForm {
            form: KQuadraticForm {
                field: f.clone(),
                gram,
            },
            signature_preserved: f.is_totally_positive(lambda)?,
        })
    }

    /// The congruent form `P Q P^T` for an invertible `P` over `K`.
    pub fn congruent(&self, p: &[Vec<FieldElement>]) -> Result<Self> {
        let f = &self.field;
        let n = self.rank();
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("congruence matrix".into()));
        }
        let gram = (0..n)
            .map(|i| (0..n).map(|j| self.eval(&p[i], &p[j])).collect())
            .collect();
        let out = KQuadraticForm {
            field: f.clone(),
            gram,
        };
        if out.disc_form().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(out)
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::InvalidInput("forms over different fields".into()));
        }
        let f = &self.field;
        let (n, m) = (self.rank(), other.rank());
        let gram = (0..n + m)
            .map(|i| {
                (0..n + m)
                    .map(|j| match (i < n, j < n) {
                        (true, true) => self.gram[i][j].clone(),
                        (false, false) => other.gram[i - n][j - n].clone(),
                        _ => f.zero(),
                    })
                    .collect()
            })
            .collect();
        KQuadraticForm::new(f.clone(), gram)
    }

    /// Galois conjugate entrywise (quadratic fields only).
    pub fn conjugate(&self) -> Result<Self> {
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|e| self.field.conjugate(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(KQuadraticForm {
            field: self.field.clone(),
            gram,
        })
    }

    pub fn descriptor(&self) -> FormDescriptor {
        FormDescriptor {
            field: Some(self.field.descriptor()),
            gram: Some(
                self.gram
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| EntryRepr::Coords(e.coords().iter().map(RationalRepr::from).collect()))
                            .collect()
                    })
                    .collect(),
            ),
            diagonal: None,
        }
    }
}

/// JSON form descriptor. Either `gram` (full matrix) or `diagonal` must be
/// given; entries are coordinate vectors `["c0","c1",...]` or plain
/// rationals. A missing `field` means the rationals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<EntryRepr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<EntryRepr>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryRepr {
    Coords(Vec<RationalRepr>),
    Scalar(RationalRepr),
}

impl EntryRepr {
    pub fn to_element(&self, field: &NumberField) -> Result<FieldElement> {
        match self {
            EntryRepr::Scalar(r) => Ok(field.from_rational(r.to_rational()?)),
            EntryRepr::Coords(cs) => {
                let mut coords: Vec<Rational> =
                    cs.iter().map(|c| c.to_rational()).collect::<Result<_>>()?;
                if coords.len() > field.degree() {
                    return Err(Error::DimensionMismatch(format!(
                        "entry has {} coordinates, field degree is {}",
                        coords.len(),
                        field.degree()
                    )));
                }
                coords.resize(field.degree(), Rational::from_integer(0.into()));
                field.element(coords)
            }
        }
    }
}

impl FormDescriptor {
    pub fn field(&self) -> Result<NumberField> {
        match &self.field {
            Some(fd) => fd.to_field(),
            None => Ok(NumberField::rationals()),
        }
    }

    /// Builds the form over the given field (the descriptor's own field is ignored).
    pub fn to_form_over(&self, field: &NumberField) -> Result<KQuadraticForm> {
        match (&self.gram, &self.diagonal) {
            (Some(g), None) => {
                let gram = g
                    .iter()
                    .map(|row| row.iter().map(|e| e.to_element(field)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                KQuadraticForm::new(field.clone(), gram)
            }
            (None, Some(d)) => {
                let entries = d.iter().map(|e| e.to_element(field)).collect::<Result<Vec<_>>>()?;
                KQuadraticForm::diagonal(field.clone(), &entries)
            }
            _ => Err(Error::InvalidInput(
                "form descriptor needs exactly one of \"gram\" or \"diagonal\"".into(),
            )),
        }
    }

    pub fn to_form(&self) -> Result<KQuadraticForm> {
        self.to_form_over(&self.field()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn q2() -> NumberField {
        NumberField::parse("x^2-2").unwrap()
    }

    fn worked_example() -> KQuadraticForm {
        let f = q2();
        let u = f.elem(&[-1, 1]);
        KQuadraticForm::diagonal(f.clone(), &[u.clone(), u, f.elem(&[-1])]).unwrap()
    }

    #[test]
    fn diagonalize_examples() {
        let q = NumberField::rationals();
        let id = KQuadraticForm::diagonal(q.clone(), &[q.one(), q.one(), q.one()]).unwrap();
        assert_eq!(id.diagonalize().unwrap().entries, vec![q.one(); 3]);

        let u = KQuadraticForm::new(
            q.clone(),
            vec![vec![q.zero(), q.one()], vec![q.one(), q.zero()]],
        )
        .unwrap();
        let d = u.diagonalize().unwrap();
        assert_eq!(
            d.entries,
            vec![q.from_rational(rat(2)), q.from_rational(frac(-1, 2))]
        );
        // basis * gram * basis^T is the diagonal
        let check = u.congruent(&d.basis).unwrap();
        assert!(check.is_diagonal());
        assert_eq!(check.entry(0, 0), &d.entries[0]);

        let w = worked_example();
        assert_eq!(w.diagonalize().unwrap().entries, vec![
            w.entry(0, 0).clone(),
            w.entry(1, 1).clone(),
            w.entry(2, 2).clone()
        ]);
    }

    #[test]
    fn degenerate_is_rejected() {
        let q = NumberField::rationals();
        let g = KQuadraticForm::new(
            q.clone(),
            vec![vec![q.one(), q.one()], vec![q.one(), q.one()]],
        )
        .unwrap();
        assert_eq!(g.diagonalize(), Err(Error::Degenerate));
        assert_eq!(g.signatures(), Err(Error::Degenerate));
    }

    #[test]
    fn disc_form_examples() {
        let q = NumberField::rationals();
        let id = KQuadraticForm::diagonal(q.clone(), &[q.one(), q.one(), q.one()]).unwrap();
        assert_eq!(id.disc_form(), q.one());
        let w = worked_example();
        assert_eq!(w.disc_form(), w.field().elem(&[-3, 2]));
        let u = KQuadraticForm::new(
            q.clone(),
            vec![vec![q.zero(), q.one()], vec![q.one(), q.zero()]],
        )
        .unwrap();
        assert_eq!(u.disc_form(), q.from_rational(rat(-1)));
    }

    #[test]
    fn signature_examples() {
        let f = q2();
        let id = KQuadraticForm::diagonal(f.clone(), &[f.one(), f.one(), f.one()]).unwrap();
        assert_eq!(id.signatures().unwrap().pairs, vec![(3, 0), (3, 0)]);
        assert!(!id.is_k3_type().unwrap());

        let w = worked_example();
        let s = w.signatures().unwrap();
        assert_eq!(s.multiset(), vec![(0, 3), (2, 1)]);
        // embedding 0 sends a to -sqrt2, where sqrt2-1 is negative
        assert_eq!(s.pairs, vec![(0, 3), (2, 1)]);
        assert!(w.is_k3_type().unwrap());
        assert_eq!(s.positive_embedding(), Some(1));

        let h = KQuadraticForm::diagonal(f.clone(), &[f.one(), f.one(), f.elem(&[-1])]).unwrap();
        assert_eq!(h.signatures().unwrap().pairs, vec![(2, 1), (2, 1)]);
        assert!(!h.is_k3_type().unwrap());
    }

    #[test]
    fn scale_examples() {
        let f = q2();
        let w = worked_example();
        let same = w.scale(&f.one()).unwrap();
        assert_eq!(same.form, w);
        assert!(same.signature_preserved);
        let two = w.scale(&f.elem(&[2])).unwrap();
        assert!(two.signature_preserved);
        assert_eq!(two.form.signatures().unwrap(), w.signatures().unwrap());

        let one = KQuadraticForm::diagonal(f.clone(), &[f.one()]).unwrap();
        let flipped = one.scale(&f.elem(&[-1, 1])).unwrap();
        assert!(!flipped.signature_preserved);
        assert_eq!(flipped.form.signatures().unwrap().pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn descriptor_round_trip() {
        let w = worked_example();
        let json = serde_json::to_string(&w.descriptor()).unwrap();
        let back: FormDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_form().unwrap(), w);
        let diag: FormDescriptor =
            serde_json::from_str(r#"{"diagonal": ["1", 1, ["-1"]]}"#).unwrap();
        let form = diag.to_form().unwrap();
        assert_eq!(form.signatures().unwrap().pairs, vec![(2, 1)]);
    }
}
