//! Smith normal form over the integers with unimodular transforms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal, non-negative,
/// with `d₁ | d₂ | …` and zeros trailing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// Basis of the integer right kernel `{x : m·x = 0}`, one vector per row.
    /// The basis is saturated since it is made of columns of the unimodular `v`.
    pub fn kernel_basis(&self) -> IntMatrix {
        let rank = self.rank();
        let n = self.v.nrows();
        let rows = (rank..n)
            .map(|j| (0..n).map(|i| self.v[(i, j)].clone()).collect())
            .collect();
        IntMatrix::from_rows_with_cols(rows, n).expect("kernel rows have uniform length")
    }
}

/// Pivot choice: smallest nonzero absolute value in the trailing block, ties
/// broken by lowest row and then lowest column.
fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.nrows() {
        for j in t..d.ncols() {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = find_pivot(&d, t) else {
                break 'outer;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = &d[(i, t)] / &d[(t, t)];
                let neg = -q;
                d.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &d[(t, j)] / &d[(t, t)];
                let neg = -q;
                d.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Enforce the divisibility chain: pull an offending row into row t.
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, v, d }
}
