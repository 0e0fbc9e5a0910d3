//! Exact linear algebra: division-free determinant expansion over any
//! commutative ring, and Bareiss fraction-free elimination for rank and
//! determinant of rational matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::Rational;

/// Determinant by Laplace expansion with memoization on the set of used
/// columns. Needs no division, so it works over polynomial rings; sparse rows
/// keep the number of live column subsets small.
pub fn det_expand<R: crate::exactalg::RingElem>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n <= 63, "det_expand supports at most 63 rows");
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut layer: HashMap<u64, R> = HashMap::from([(0u64, R::one())]);
    for row in m {
        let mut next: HashMap<u64, R> = HashMap::new();
        for (&mask, acc) in &layer {
            for (c, entry) in row.iter().enumerate() {
                if entry.is_zero() || mask & (1 << c) != 0 {
                    continue;
                }
                // inversions added by placing column c after the columns already used
                let above = (mask >> (c + 1)).count_ones();
                let mut term = acc.mul(entry);
                if above % 2 == 1 {
                    term = term.neg();
                }
                let slot = next.entry(mask | (1 << c)).or_insert_with(R::zero);
                *slot = slot.add(&term);
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.is_empty() {
            return R::zero();
        }
        layer = next;
    }
    layer.into_values().next().unwrap_or_else(R::zero)
}

/// Clears denominators row by row; returns the integer matrix and the product
/// of the row multipliers.
fn to_integer_rows(m: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            scale *= &l;
            row.iter()
                .map(|r| r.numer() * (&l / r.denom()))
                .collect()
        })
        .collect();
    (rows, scale)
}

/// Bareiss elimination with full pivoting. Returns `(rank, det_sign_and_value)`
/// where the second entry is the last nonzero leading pivot (the determinant
/// for full-rank square input, up to the recorded sign).
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        let pivot = (step..rows)
            .flat_map(|i| (step..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else {
            break;
        };
        if pi != step {
            a.swap(pi, step);
            sign = -sign;
        }
        if pj != step {
            for row in a.iter_mut() {
                row.swap(pj, step);
            }
            sign = -sign;
        }
        rank += 1;
        for i in step + 1..rows {
            for j in step + 1..cols {
                let v = &a[step][step] * &a[i][j] - &a[i][step] * &a[step][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][step] = BigInt::zero();
        }
        prev = a[step][step].clone();
    }
    let last = if rank == rows && rank == cols { prev * sign } else { BigInt::zero() };
    (rank, last)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    bareiss(to_integer_rows(m).0).0
}

pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return Rational::one();
    }
    let (rows, scale) = to_integer_rows(m);
    let (_, d) = bareiss(rows);
    Rational::new(d, scale)
}

/// Whether every entry is zero.
pub fn is_zero_matrix(m: &[Vec<Rational>]) -> bool {
    m.iter().flatten().all(|r| r.is_zero())
}

/// Largest absolute entry, for diagnostics.
pub fn max_abs(m: &[Vec<Rational>]) -> Rational {
    m.iter()
        .flatten()
        .map(|r| r.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}
