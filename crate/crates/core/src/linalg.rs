//! Exact elimination over Q. Rows are cleared to primitive integer vectors,
//! eliminated fraction-free with the first nonzero column as pivot, and only
//! normalized to rationals at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

fn primitive(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    remove_content(ints)
}

fn remove_content(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut row {
            *x /= &g;
        }
    }
    row
}

/// Reduced row-echelon form and pivot columns; zero rows are dropped.
pub(crate) fn rref(rows: &[Vec<Scalar>], ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| primitive(r))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(found) = (top..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(top, found);
        if m[top][col].is_negative() {
            for x in &mut m[top] {
                *x = -&*x;
            }
        }
        let pivot_row = m[top].clone();
        let a = pivot_row[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == top || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            let updated: Vec<BigInt> = row
                .iter()
                .zip(&pivot_row)
                .map(|(x, p)| &a * x - &c * p)
                .collect();
            *row = remove_content(updated);
        }
        pivots.push(col);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    let reduced = m
        .into_iter()
        .zip(&pivots)
        .map(|(row, &col)| {
            let lead = row[col].clone();
            row.into_iter()
                .map(|x| Scalar::from_ratio(BigRational::new(x, lead.clone())))
                .collect()
        })
        .collect();
    (reduced, pivots)
}

/// A basis of `{x : A x = 0}`, one vector per free column, in column order.
pub(crate) fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(rows, ncols);
    let free = (0..ncols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = Scalar::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        v
    })
    .collect()
}
