//! Dense exact matrices over the rationals.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational, RationalRepr};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rational::rat(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = QMatrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Bilinear pairing `x^T M y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let my = self.mul_vec(y);
        x.iter()
            .zip(&my)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Reorders rows and columns: entry `(i, j)` of the result is `self[(perm[i], perm[j])]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> QMatrix {
        let n = perm.len();
        let mut out = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(perm[i], perm[j])].clone();
            }
        }
        out
    }

    /// Determinant by Gaussian elimination with exact pivoting.
    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &pivot;
                for c in col..n {
                    let v = &f * &a[(col, c)];
                    a[(r, c)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::Degenerate)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pivot = Rational::one() / &a[(col, col)];
            for c in 0..n {
                a[(col, c)] *= &pivot;
                inv[(col, c)] *= &pivot;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let va = &f * &a[(col, c)];
                    a[(r, c)] -= va;
                    let vi = &f * &inv[(col, c)];
                    inv[(r, c)] -= vi;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Diagonal of a congruent diagonal form (symmetric elimination over the
    /// rationals, zero pivots repaired by adding or subtracting a later basis
    /// vector). Errors on degenerate input.
    pub fn congruent_diagonal(&self) -> Result<Vec<Rational>> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let j = (k + 1..n)
                    .find(|&j| !a[(k, j)].is_zero())
                    .ok_or(Error::Degenerate)?;
                let plus = &a[(k, k)] + &a[(k, j)] * crate::rational::rat(2) + &a[(j, j)];
                let s = if plus.is_zero() { -Rational::one() } else { Rational::one() };
                // v_k <- v_k + s v_j
                for c in 0..n {
                    let v = &a[(j, c)] * &s;
                    a[(k, c)] += v;
                }
                for r in 0..n {
                    let v = &a[(r, j)] * &s;
                    a[(r, k)] += v;
                }
            }
            let pivot = a[(k, k)].clone();
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let f = &a[(r, k)] / &pivot;
                for c in k..n {
                    let v = &f * &a[(k, c)];
                    a[(r, c)] -= v;
                }
            }
            for c in k + 1..n {
                a[(k, c)] = Rational::zero();
            }
            diag.push(pivot);
        }
        Ok(diag)
    }

    /// Signature `(positive, negative)` of a nondegenerate symmetric matrix.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let diag = self.congruent_diagonal()?;
        let pos = diag.iter().filter(|d| d.is_positive()).count();
        Ok((pos, diag.len() - pos))
    }

    pub fn to_integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_integer()).collect())
            .collect())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// JSON shape: `[["2","0"],["0","4"]]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRepr(pub Vec<Vec<RationalRepr>>);

impl MatrixRepr {
    pub fn to_matrix(&self) -> Result<QMatrix> {
        QMatrix::from_rows(
            self.0
                .iter()
                .map(|r| r.iter().map(|v| v.to_rational()).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl From<&QMatrix> for MatrixRepr {
    fn from(m: &QMatrix) -> Self {
        MatrixRepr(
            (0..m.nrows())
                .map(|i| m.row(i).iter().map(RationalRepr::from).collect())
                .collect(),
        )
    }
}
