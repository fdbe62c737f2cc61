//! Dense elimination over the Gaussian rationals.

use num::Zero;

use super::scalar::Gaussian;

/// Row echelon form in place; returns the pivot columns.
fn echelon(rows: &mut [Vec<Gaussian>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in &mut rows[r][c..] {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(mut rows: Vec<Vec<Gaussian>>) -> usize {
    echelon(&mut rows).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows of length `cols`.
pub fn nullspace(mut rows: Vec<Vec<Gaussian>>, cols: usize) -> Vec<Vec<Gaussian>> {
    let pivots = echelon(&mut rows);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Gaussian::zero(); cols];
            x[f] = num::One::one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = -rows[r][f].clone();
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatmodel::scalar::{i_pow, real};

    #[test]
    fn rank_over_gaussian_rationals() {
        // rows (1, i) and (i, -1) are dependent: second = i * first
        let m = vec![vec![real(1), i_pow(1)], vec![i_pow(1), real(-1)]];
        assert_eq!(rank(m.clone()), 1);
        let k = nullspace(m.clone(), 2);
        assert_eq!(k.len(), 1);
        for row in &m {
            let s: Gaussian = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        assert_eq!(
            rank(vec![vec![real(1), real(0)], vec![real(0), i_pow(1)]]),
            2
        );
    }
}
