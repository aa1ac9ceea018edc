//! Smith normal form of integer matrices with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

type ZMat = Vec<Vec<BigInt>>;

/// `left * input * right = diag(divisors, 0, ...)`, each divisor dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: ZMat,
    pub right: ZMat,
}

fn identity(n: usize) -> ZMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Quotient rounded to the nearest integer, so the remainder is at most half the divisor.
fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = x.div_mod_floor(p);
    if (&r + &r).abs() > p.abs() {
        q += 1;
    }
    q
}

pub fn smith_normal_form(input: &[Vec<BigInt>]) -> SmithForm {
    let rows = input.len();
    let cols = input.first().map_or(0, |r| r.len());
    let mut a: ZMat = input.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);

    let row_op = |m: &mut ZMat, dst: usize, src: usize, f: &BigInt| {
        let src_row = m[src].clone();
        for (d, s) in m[dst].iter_mut().zip(src_row) {
            *d -= f * s;
        }
    };
    let col_op = |m: &mut ZMat, dst: usize, src: usize, f: &BigInt| {
        for row in m.iter_mut() {
            let s = row[src].clone();
            row[dst] -= f * s;
        }
    };
    let swap_cols = |m: &mut ZMat, x: usize, y: usize| {
        for row in m.iter_mut() {
            row.swap(x, y);
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            // re-pivot on the smallest nonzero magnitude of the trailing block
            // every pass; this keeps entries from growing
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut right, t, pj);
            let pivot = a[t][t].clone();

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[i][t], &pivot);
                row_op(&mut a, i, t, &q);
                row_op(&mut left, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[t][j], &pivot);
                col_op(&mut a, j, t, &q);
                col_op(&mut right, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    row_op(&mut a, t, i, &minus_one);
                    row_op(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -&*v;
            }
            for v in left[t].iter_mut() {
                *v = -&*v;
            }
        }
    }
    let diagonal = (0..rows.min(cols))
        .map(|i| a[i][i].clone())
        .filter(|v| !v.is_zero())
        .collect();
    SmithForm {
        diagonal,
        left,
        right,
    }
}
