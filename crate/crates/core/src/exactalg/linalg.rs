//! Exact Gaussian elimination over the rationals.

use super::Rat;
use num_traits::{Signed, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
///
/// The pivot in each column is the candidate with the smallest absolute
/// numerator (first such row on ties), which keeps results deterministic.
pub fn rref(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].numer().abs().cmp(&m[b][col].numer().abs()))
        else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>], ncols: usize) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, ncols).len()
}

/// Basis of `{v : m v = 0}`, one vector per free column, each with a 1 in
/// its free position.
pub fn nullspace(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); ncols];
            v[free] = Rat::from_integer(1.into());
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free].clone();
            }
            v
        })
        .collect()
}

/// Outcome of solving `m x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solve {
    pub rank: usize,
    pub augmented_rank: usize,
    /// A particular solution (free variables zero) when consistent.
    pub solution: Option<Vec<Rat>>,
}

pub fn solve(m: &[Vec<Rat>], ncols: usize, b: &[Rat]) -> Solve {
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a, ncols + 1);
    let rank = pivots.iter().filter(|&&c| c < ncols).count();
    let augmented_rank = pivots.len();
    let solution = (rank == augmented_rank).then(|| {
        let mut x = vec![Rat::zero(); ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = a[r][ncols].clone();
        }
        x
    });
    Solve {
        rank,
        augmented_rank,
        solution,
    }
}
