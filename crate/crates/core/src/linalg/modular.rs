//! Dense elimination modulo a word-sized prime.

use super::SparseMatrix;
use crate::par::{self, Execution};

/// Primes stay below 2^28 so that 255 products can be accumulated in a `u64`
/// before a reduction is needed.
pub(crate) const PRIME_LIMIT: u64 = 1 << 28;
const LAZY_LIMIT: usize = 255;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // deterministic for n < 3.4e14
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below [`PRIME_LIMIT`] in decreasing order.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    (2..PRIME_LIMIT).rev().filter(|&n| is_prime(n))
}

/// LU factors of the nonsingular block `A[R, C]` selected by the rank
/// profile of `A mod p`.
pub(crate) struct ModularLu {
    pub p: u64,
    /// Original row indices, in pivot order.
    pub pivot_rows: Vec<usize>,
    /// Column indices, in pivot order (increasing).
    pub pivot_cols: Vec<usize>,
    /// `r × r` row-major: unit-lower multipliers below the diagonal, `U` on and above.
    lu: Vec<u32>,
    inv_diag: Vec<u64>,
}

impl ModularLu {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn factor(a: &SparseMatrix, p: u64, exec: Execution) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let mut data = vec![0u64; rows * cols];
        for i in 0..rows {
            for &(j, v) in a.row(i) {
                data[i * cols + j] = v.rem_euclid(p as i64) as u64;
            }
        }
        let mut perm: Vec<usize> = (0..rows).collect();
        let mut pivot_cols = Vec::new();
        let mut k = 0;
        let mut lazy = 0;
        let mut pivot_row = vec![0u32; cols];
        for c in 0..cols {
            if k == rows {
                break;
            }
            let Some(pos) = (k..rows).find(|&i| data[i * cols + c] % p != 0) else {
                continue;
            };
            if pos != k {
                for j in 0..cols {
                    data.swap(pos * cols + j, k * cols + j);
                }
                perm.swap(pos, k);
            }
            for x in &mut data[k * cols + c..(k + 1) * cols] {
                *x %= p;
            }
            let inv = inv_mod(data[k * cols + c], p);
            for j in c + 1..cols {
                pivot_row[j] = data[k * cols + j] as u32;
            }
            let pr = &pivot_row[c + 1..];
            let tail = &mut data[(k + 1) * cols..];
            par::for_each_chunk_mut(exec, tail, cols, |_, row| {
                let a = row[c] % p;
                if a == 0 {
                    row[c] = 0;
                    return;
                }
                let m = mul_mod(a, inv, p);
                row[c] = m;
                let f = p - m;
                for (x, &y) in row[c + 1..].iter_mut().zip(pr) {
                    *x += f * y as u64;
                }
            });
            pivot_cols.push(c);
            k += 1;
            lazy += 1;
            if lazy == LAZY_LIMIT {
                let tail = &mut data[k * cols..];
                par::for_each_chunk_mut(exec, tail, cols, |_, row| {
                    for x in &mut row[c + 1..] {
                        *x %= p;
                    }
                });
                lazy = 0;
            }
        }
        let r = k;
        let mut lu = vec![0u32; r * r];
        for i in 0..r {
            for (j, &cj) in pivot_cols.iter().enumerate() {
                lu[i * r + j] = (data[i * cols + cj] % p) as u32;
            }
        }
        let inv_diag = (0..r).map(|i| inv_mod(lu[i * r + i] as u64, p)).collect();
        ModularLu {
            p,
            pivot_rows: perm[..r].to_vec(),
            pivot_cols,
            lu,
            inv_diag,
        }
    }

    /// Solves `A[R, C] X = B (mod p)` for `m` right-hand sides; `B` and `X` are
    /// row-major `rank × m`, rows indexed by pivot order.
    pub fn solve_block(&self, b: &[u64], m: usize) -> Vec<u64> {
        let r = self.rank();
        let p = self.p;
        debug_assert_eq!(b.len(), r * m);
        let mut z = vec![0u64; r * m];
        let mut acc = vec![0u64; m];
        for i in 0..r {
            block_dot(&self.lu[i * r..i * r + i], &z, 0, m, p, &mut acc);
            for c in 0..m {
                z[i * m + c] = (b[i * m + c] % p + p - acc[c]) % p;
            }
        }
        let mut x = vec![0u64; r * m];
        for i in (0..r).rev() {
            block_dot(
                &self.lu[i * r + i + 1..(i + 1) * r],
                &x,
                i + 1,
                m,
                p,
                &mut acc,
            );
            for c in 0..m {
                x[i * m + c] = mul_mod((z[i * m + c] + p - acc[c]) % p, self.inv_diag[i], p);
            }
        }
        x
    }
}

/// `out[c] = Σ_t row[t] · v[(offset + t) m + c] (mod p)`.
fn block_dot(row: &[u32], v: &[u64], offset: usize, m: usize, p: u64, out: &mut [u64]) {
    if m == 1 {
        out[0] = dot(row, &v[offset..offset + row.len()], p);
        return;
    }
    out.fill(0);
    let mut s = vec![0u64; m];
    for (k, chunk) in row.chunks(LAZY_LIMIT).enumerate() {
        s.fill(0);
        let base = offset + k * LAZY_LIMIT;
        for (t, &l) in chunk.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let l = l as u64;
            let vr = &v[(base + t) * m..(base + t + 1) * m];
            for (acc, &y) in s.iter_mut().zip(vr) {
                *acc += l * y;
            }
        }
        for (o, &x) in out.iter_mut().zip(&s) {
            *o = (*o + x % p) % p;
        }
    }
}

fn dot(a: &[u32], b: &[u64], p: u64) -> u64 {
    let mut total = 0u64;
    for (ca, cb) in a.chunks(LAZY_LIMIT).zip(b.chunks(LAZY_LIMIT)) {
        let s: u64 = ca.iter().zip(cb).map(|(&x, &y)| x as u64 * y).sum();
        total = (total + s % p) % p;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_search() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.iter().all(|&p| p < PRIME_LIMIT && is_prime(p)));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime(268435455));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn factor_and_solve_small() {
        // rank 2: third row = first + second
        let a = SparseMatrix::from_rows(
            3,
            3,
            vec![
                vec![(0, 2), (1, 1)],
                vec![(1, 3), (2, -1)],
                vec![(0, 2), (1, 4), (2, -1)],
            ],
            1,
        )
        .unwrap();
        let p = primes().next().unwrap();
        let lu = ModularLu::factor(&a, p, Execution::Sequential);
        assert_eq!(lu.rank(), 2);
        assert_eq!(lu.pivot_cols, vec![0, 1]);
        let b = vec![5u64, 7];
        let x = lu.solve_block(&b, 1);
        // check A[R, C] x = b mod p
        for (i, &row) in lu.pivot_rows.iter().enumerate() {
            let mut s = 0i128;
            for &(j, v) in a.row(row) {
                if let Some(k) = lu.pivot_cols.iter().position(|&c| c == j) {
                    s += v as i128 * x[k] as i128;
                }
            }
            assert_eq!(s.rem_euclid(p as i128), b[i] as i128);
        }
    }

    #[test]
    fn lazy_reduction_survives_many_pivots() {
        // lower-triangular all-ones matrix: every pivot updates every later row
        let n = 600;
        let rows = (0..n).map(|i| (0..=i).map(|j| (j, 1)).collect()).collect();
        let a = SparseMatrix::from_rows(n, n, rows, 1).unwrap();
        let p = primes().next().unwrap();
        let lu = ModularLu::factor(&a, p, Execution::Sequential);
        assert_eq!(lu.rank(), n);
        let x = lu.solve_block(&vec![1; n], 1);
        assert_eq!(x[0], 1);
        assert!(x[1..].iter().all(|&v| v == 0));
    }
}
