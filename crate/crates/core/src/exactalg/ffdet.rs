//! Fraction-free (Bareiss) determinants of polynomial matrices.

use super::mpoly::MPoly;
use rayon::prelude::*;

/// Determinant of a square matrix of polynomials.
///
/// Bareiss elimination: every intermediate entry is a minor of the input, so
/// each division is exact and expression swell stays polynomial. Row updates
/// run in parallel; the arithmetic is exact, so the result does not depend on
/// scheduling.
pub fn ffdet(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    assert!(n >= 1, "determinant of an empty matrix");
    assert!(m.iter().all(|r| r.len() == n), "matrix is not square");
    let mut a: Vec<Vec<MPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        // sparsest nonzero pivot, first row on ties
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| (a[i][k].len(), i));
        let Some(p) = pivot else {
            return MPoly::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let prev_ref = &prev;
        tail.par_iter_mut().for_each(|row| {
            for j in k + 1..n {
                let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                row[j] = num
                    .exact_div(prev_ref)
                    .expect("nonzero pivot")
                    .expect("Bareiss division is exact");
            }
            row[k] = MPoly::zero();
        });
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
