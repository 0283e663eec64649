//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

type Matrix = Vec<Vec<BigInt>>;

fn min_nonzero(a: &Matrix, rows: impl Iterator<Item = usize>, cols: impl Iterator<Item = usize> + Clone) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut Matrix, x: usize, y: usize) {
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the
/// next. Their count is the rank.
pub fn invariant_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t..rows, t..cols) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut remainder = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                remainder |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let d = &q * &a[i][t];
                    a[i][j] -= d;
                }
                remainder |= !a[t][j].is_zero();
            }
            if remainder {
                // A smaller entry now sits in row or column t.
                let in_col = min_nonzero(&a, t..rows, t..t + 1);
                let in_row = min_nonzero(&a, t..t + 1, t..cols);
                let (pi, pj) = match (in_col, in_row) {
                    (Some(c), Some(r)) if a[r.0][r.1].abs() < a[c.0][c.1].abs() => r,
                    (Some(c), _) => c,
                    (None, Some(r)) => r,
                    (None, None) => unreachable!("the pivot is nonzero"),
                };
                a.swap(t, pi);
                swap_cols(&mut a, t, pj);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

pub fn rank(m: &[Vec<BigInt>]) -> usize {
    invariant_factors(m).len()
}
