//! Certified exact rank, kernel and solves for sparse systems over Q.
//!
//! The matrix is factored modulo a large prime; its rank profile selects a
//! block `A[R, C]` that is nonsingular over Q. Solutions of that block are
//! lifted p-adically and recovered by rational reconstruction, then checked
//! exactly against every row. Exhibiting `n - rank_p` exact kernel vectors
//! certifies that the rank over Q equals the modular rank; when one of them
//! fails to verify the prime was unlucky and the next one is tried.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::modular::{primes, ModularLu};
use super::{QVector, SparseMatrix};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

const MAX_PRIMES: usize = 8;
/// Right-hand sides lifted together against one pass over the factor.
const BLOCK: usize = 8;
/// Residuals switch from `BigInt` to `i128` once every entry fits in this many bits.
const SMALL_RESIDUAL_BITS: u64 = 100;

pub struct ExactSolver {
    matrix: SparseMatrix,
    lu: ModularLu,
    /// Rows `R` restricted to columns `C`, columns renumbered by pivot order.
    block: Vec<Vec<(usize, i64)>>,
    det_bits: f64,
    kernel: Vec<QVector>,
    exec: Execution,
}

impl ExactSolver {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        Self::with_execution(a, Execution::default())
    }

    pub fn with_execution(a: &SparseMatrix, exec: Execution) -> Result<Self> {
        for p in primes().take(MAX_PRIMES) {
            let lu = ModularLu::factor(a, p, exec);
            let mut col_pos = vec![usize::MAX; a.cols()];
            for (k, &c) in lu.pivot_cols.iter().enumerate() {
                col_pos[c] = k;
            }
            let block: Vec<Vec<(usize, i64)>> = lu
                .pivot_rows
                .iter()
                .map(|&i| {
                    a.row(i)
                        .iter()
                        .filter(|&&(j, _)| col_pos[j] != usize::MAX)
                        .map(|&(j, v)| (col_pos[j], v))
                        .collect()
                })
                .collect();
            let det_bits = block.iter().map(|row| norm_bits(row, None)).sum();
            let mut solver = ExactSolver {
                matrix: a.clone(),
                lu,
                block,
                det_bits,
                kernel: Vec::new(),
                exec,
            };
            let free: Vec<usize> = (0..a.cols())
                .filter(|&j| col_pos[j] == usize::MAX)
                .collect();
            if let Some(kernel) = solver
                .kernel_vectors(&free)?
                .into_iter()
                .collect::<Option<Vec<_>>>()
            {
                solver.kernel = kernel;
                return Ok(solver);
            }
        }
        Err(Error::Solver("no prime certified the rank".into()))
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.lu.rank()
    }

    pub fn nullity(&self) -> usize {
        self.cols() - self.rank()
    }

    /// Kernel basis with one vector per non-pivot column; each has a 1 in its
    /// own free column and 0 in the others.
    pub fn kernel(&self) -> &[QVector] {
        &self.kernel
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.lu.pivot_cols
    }

    pub fn prime(&self) -> u64 {
        self.lu.p
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    /// The returned solution vanishes on every non-pivot column.
    pub fn solve(&self, b: &QVector) -> Result<Option<QVector>> {
        Ok(self
            .solve_many(std::slice::from_ref(b))?
            .pop()
            .expect("one solution"))
    }

    pub fn solve_many(&self, bs: &[QVector]) -> Result<Vec<Option<QVector>>> {
        if let Some(b) = bs.iter().find(|b| b.len() != self.rows()) {
            return Err(Error::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows()
            )));
        }
        // A = E / den, b = num / db:  E x' = den * num,  x = x' / db
        let den = BigInt::from(self.matrix.denominator());
        let targets: Vec<Vec<BigInt>> = bs
            .iter()
            .map(|b| b.numerators().iter().map(|x| x * &den).collect())
            .collect();
        let rhs = targets
            .iter()
            .map(|t| self.lu.pivot_rows.iter().map(|&i| t[i].clone()).collect())
            .collect();
        let lifted = self.lift_many(rhs)?;
        let out = lifted
            .into_iter()
            .zip(&targets)
            .zip(bs)
            .map(|(((y, d), target), b)| {
                let x = self.scatter(y);
                let ex = self.matrix.mul_integer(&x);
                let consistent = ex.iter().zip(target).all(|(l, t)| *l == t * &d);
                consistent.then(|| QVector::from_parts(x, d * b.denominator()))
            });
        Ok(out.collect())
    }

    fn scatter(&self, y: Vec<BigInt>) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.cols()];
        for (k, v) in self.lu.pivot_cols.iter().zip(y) {
            x[*k] = v;
        }
        x
    }

    fn kernel_vectors(&self, free: &[usize]) -> Result<Vec<Option<QVector>>> {
        let column = |i: usize, f: usize| {
            let row = self.matrix.row(i);
            row.binary_search_by_key(&f, |&(c, _)| c)
                .map_or(0, |k| row[k].1)
        };
        let rhs = free
            .iter()
            .map(|&f| {
                self.lu
                    .pivot_rows
                    .iter()
                    .map(|&i| BigInt::from(-column(i, f)))
                    .collect()
            })
            .collect();
        let lifted = self.lift_many(rhs)?;
        let out = lifted.into_iter().zip(free).map(|((y, d), &f)| {
            let mut x = self.scatter(y);
            x[f] = d.clone();
            let ok = self.matrix.mul_integer(&x).iter().all(Zero::is_zero);
            ok.then(|| QVector::from_parts(x, d))
        });
        Ok(out.collect())
    }

    /// Unique solutions `y / d` of `A[R, C] y = rhs`, lifted in blocks.
    fn lift_many(&self, rhs: Vec<Vec<BigInt>>) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
        if rhs.is_empty() {
            return Ok(Vec::new());
        }
        let per_thread = rhs.len().div_ceil(par::threads(self.exec));
        let width = per_thread.clamp(1, BLOCK);
        let groups: Vec<&[Vec<BigInt>]> = rhs.chunks(width).collect();
        let solved = par::map_slice(self.exec, &groups, |g| self.lift_block(g));
        let mut out = Vec::with_capacity(rhs.len());
        for s in solved {
            out.extend(s?);
        }
        Ok(out)
    }

    fn lift_block(&self, rhs: &[Vec<BigInt>]) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
        let r = self.rank();
        if r == 0 {
            return Ok(vec![(Vec::new(), BigInt::one()); rhs.len()]);
        }
        let p = self.lu.p;
        let log_p = (p as f64).log2();
        let mut lanes: Vec<Lane> = rhs
            .iter()
            .map(|b| {
                let num_bits: f64 = self
                    .block
                    .iter()
                    .zip(b)
                    .map(|(row, x)| norm_bits(row, Some(x)))
                    .sum();
                Lane {
                    rhs: b,
                    residual: Residual::new(b.clone()),
                    digits: Vec::new(),
                    max_iter: ((num_bits + self.det_bits + 2.0) / log_p).ceil() as usize + 1,
                    next_check: 2,
                    result: None,
                }
            })
            .collect();
        loop {
            let active: Vec<usize> = (0..lanes.len())
                .filter(|&a| lanes[a].result.is_none())
                .collect();
            if active.is_empty() {
                break;
            }
            let m = active.len();
            let mut b = vec![0u64; r * m];
            for (c, &a) in active.iter().enumerate() {
                for (i, v) in lanes[a].residual.modulo(p).into_iter().enumerate() {
                    b[i * m + c] = v;
                }
            }
            let y = self.lu.solve_block(&b, m);
            for (c, &a) in active.iter().enumerate() {
                let lane = &mut lanes[a];
                let ya: Vec<u64> = (0..r).map(|i| y[i * m + c]).collect();
                lane.residual.step(&self.block, &ya, p);
                lane.digits.push(ya);
                let n = lane.digits.len();
                if lane.residual.is_zero() {
                    let x = (0..r)
                        .map(|j| combine_digits(&column(&lane.digits, j), p))
                        .collect();
                    lane.result = Some((x, BigInt::one()));
                } else if n >= lane.next_check || n >= lane.max_iter {
                    lane.next_check = n + (n / 8).max(2);
                    lane.result = self.reconstruct(&lane.digits, lane.rhs);
                    if lane.result.is_none() && n >= lane.max_iter {
                        return Err(Error::Solver("p-adic lifting exceeded its bound".into()));
                    }
                }
            }
        }
        Ok(lanes
            .into_iter()
            .map(|l| l.result.expect("finished"))
            .collect())
    }

    /// Rational reconstruction with a running common denominator; gives up at
    /// the first entry that does not reconstruct.
    fn reconstruct(&self, digits: &[Vec<u64>], rhs: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
        let r = self.rank();
        let p = self.lu.p;
        let modulus = BigInt::from(p).pow(digits.len() as u32);
        let half = &modulus >> 1u32;
        let bound = (&modulus >> 1u32).sqrt();
        let mut den = BigInt::one();
        let mut num: Vec<BigInt> = Vec::with_capacity(r);
        for j in 0..r {
            let x = combine_digits(&column(digits, j), p);
            let mut u = (x * &den).mod_floor(&modulus);
            if u > half {
                u -= &modulus;
            }
            if u.abs() <= bound {
                num.push(u);
                continue;
            }
            let (a, b) = rational_reconstruction(&u.mod_floor(&modulus), &modulus, &bound)?;
            for v in &mut num {
                *v *= &b;
            }
            den *= &b;
            num.push(a);
            if den > bound {
                return None;
            }
        }
        let ok = self.block.iter().zip(rhs).all(|(row, b)| {
            let s: BigInt = row.iter().map(|&(j, v)| &num[j] * v).sum();
            s == b * &den
        });
        ok.then_some((num, den))
    }
}

fn column(digits: &[Vec<u64>], j: usize) -> Vec<u64> {
    digits.iter().map(|d| d[j]).collect()
}

struct Lane<'a> {
    rhs: &'a [BigInt],
    residual: Residual,
    digits: Vec<Vec<u64>>,
    max_iter: usize,
    next_check: usize,
    result: Option<(Vec<BigInt>, BigInt)>,
}

enum Residual {
    Big(Vec<BigInt>),
    Small(Vec<i128>),
}

impl Residual {
    fn new(v: Vec<BigInt>) -> Self {
        let mut r = Residual::Big(v);
        r.shrink();
        r
    }

    fn shrink(&mut self) {
        if let Residual::Big(v) = self {
            if v.iter().all(|x| x.bits() < SMALL_RESIDUAL_BITS) {
                *self = Residual::Small(v.iter().map(|x| x.to_i128().expect("fits")).collect());
            }
        }
    }

    fn modulo(&self, p: u64) -> Vec<u64> {
        match self {
            Residual::Big(v) => {
                let pb = BigInt::from(p);
                v.iter()
                    .map(|x| x.mod_floor(&pb).to_u64().expect("reduced"))
                    .collect()
            }
            Residual::Small(v) => v.iter().map(|x| x.rem_euclid(p as i128) as u64).collect(),
        }
    }

    /// `residual <- (residual - block · y) / p`, exact by construction.
    fn step(&mut self, block: &[Vec<(usize, i64)>], y: &[u64], p: u64) {
        let products = block.iter().map(|row| {
            row.iter()
                .map(|&(j, v)| v as i128 * y[j] as i128)
                .sum::<i128>()
        });
        match self {
            Residual::Big(v) => {
                let pb = BigInt::from(p);
                for (x, s) in v.iter_mut().zip(products) {
                    *x -= s;
                    debug_assert!((&*x % &pb).is_zero());
                    *x /= &pb;
                }
            }
            Residual::Small(v) => {
                for (x, s) in v.iter_mut().zip(products) {
                    *x -= s;
                    debug_assert_eq!(*x % p as i128, 0);
                    *x /= p as i128;
                }
            }
        }
        self.shrink();
    }

    fn is_zero(&self) -> bool {
        match self {
            Residual::Big(v) => v.iter().all(Zero::is_zero),
            Residual::Small(v) => v.iter().all(|&x| x == 0),
        }
    }
}

/// `log2` of the Euclidean norm of a row, optionally extended by one more entry.
fn norm_bits(row: &[(usize, i64)], extra: Option<&BigInt>) -> f64 {
    let s: f64 = row.iter().map(|&(_, v)| (v as f64) * (v as f64)).sum();
    let row_bits = if s > 0.0 { 0.5 * s.log2() } else { 0.0 };
    match extra {
        Some(b) if !b.is_zero() => row_bits.max(b.bits() as f64) + 0.5,
        _ => row_bits,
    }
}

/// `Σ digits[i] p^i`, split recursively so the big multiplications stay balanced.
fn combine_digits(digits: &[u64], p: u64) -> BigInt {
    fn go(d: &[u64], pows: &[BigInt], p: u64) -> BigInt {
        if d.len() <= 16 {
            let pb = BigInt::from(p);
            return d.iter().rev().fold(BigInt::zero(), |acc, &x| acc * &pb + x);
        }
        let k = (usize::BITS - 1 - (d.len() - 1).leading_zeros()) as usize;
        let half = 1usize << k;
        go(&d[..half], pows, p) + &pows[k] * go(&d[half..], pows, p)
    }
    let mut pows = vec![BigInt::from(p)];
    while (1usize << pows.len()) < digits.len() {
        let last = pows.last().unwrap();
        pows.push(last * last);
    }
    go(digits, &pows, p)
}

/// `a / b ≡ u (mod m)` with `|a|, b ≤ bound`.
fn rational_reconstruction(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1.abs() > *bound {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat, RationalMatrix};
    use proptest::prelude::*;

    fn matrix(rows: usize, cols: usize, entries: &[i64]) -> SparseMatrix {
        let data = (0..rows)
            .map(|i| (0..cols).map(|j| (j, entries[i * cols + j])).collect())
            .collect();
        SparseMatrix::from_rows(rows, cols, data, 1).unwrap()
    }

    #[test]
    fn digits_combine() {
        let p = 1_000_003u64;
        let d: Vec<u64> = (1..=40).collect();
        let expected = d.iter().rev().fold(BigInt::zero(), |acc, &x| acc * p + x);
        assert_eq!(combine_digits(&d, p), expected);
    }

    #[test]
    fn reconstructs_fractions() {
        let m = BigInt::from(1_000_000_007u64);
        let bound = (&m >> 1u32).sqrt();
        // -3/7 mod m
        let inv7 = BigInt::from(7).modpow(&(&m - 2), &m);
        let u = (BigInt::from(-3) * inv7).mod_floor(&m);
        assert_eq!(
            rational_reconstruction(&u, &m, &bound),
            Some((BigInt::from(-3), BigInt::from(7)))
        );
    }

    #[test]
    fn solves_with_fractional_answer() {
        let a = matrix(2, 2, &[2, 1, 1, 3]);
        let s = ExactSolver::new(&a).unwrap();
        assert_eq!(s.rank(), 2);
        let x = s.solve(&QVector::from_i64(&[1, 0])).unwrap().unwrap();
        assert_eq!(x.to_rationals(), vec![rat(3, 5), rat(-1, 5)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = matrix(3, 2, &[1, 1, 1, 1, 0, 1]);
        let s = ExactSolver::new(&a).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.solve(&QVector::from_i64(&[1, 2, 0])).unwrap().is_none());
        let x = s.solve(&QVector::from_i64(&[1, 1, 5])).unwrap().unwrap();
        assert_eq!(x.to_rationals(), vec![int(-4), int(5)]);
    }

    #[test]
    fn rank_deficient_kernel() {
        let a = matrix(3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0]);
        let s = ExactSolver::new(&a).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.kernel().len(), 2);
        for v in s.kernel() {
            assert!(a.mul_qvec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn entries_multiple_of_prime_do_not_fool_the_rank() {
        let p = primes().next().unwrap() as i64;
        // singular mod p, nonsingular over Q
        let a = matrix(2, 2, &[p, 0, 0, 1]);
        let s = ExactSolver::new(&a).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.kernel().is_empty());
        let x = s.solve(&QVector::from_i64(&[1, 1])).unwrap().unwrap();
        assert_eq!(x.get(0), rat(1, p));
    }

    #[test]
    fn shared_denominator_is_respected() {
        let a = SparseMatrix::from_rows(1, 1, vec![vec![(0, 1)]], 3).unwrap();
        let s = ExactSolver::new(&a).unwrap();
        let x = s.solve(&QVector::from_i64(&[2])).unwrap().unwrap();
        assert_eq!(x.get(0), int(6));
    }

    #[test]
    fn large_entries_need_many_lifting_steps() {
        // Hilbert-like matrix scaled to integers has huge solution entries
        let n = 8;
        let l = (1..=2 * n as i64).fold(1i64, |acc, k| num::integer::lcm(acc, k));
        let entries: Vec<i64> = (0..n * n)
            .map(|k| l / ((k / n + k % n + 1) as i64))
            .collect();
        let a = matrix(n, n, &entries);
        let s = ExactSolver::new(&a).unwrap();
        assert_eq!(s.rank(), n);
        let b = QVector::from_i64(&vec![1; n]);
        let x = s.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_qvec(&x).unwrap(), b);
    }

    proptest! {
        #[test]
        fn agrees_with_dense_rank_and_solve(
            rows in 1usize..6, cols in 1usize..6,
            entries in proptest::collection::vec(-3i64..4, 36),
            rhs in proptest::collection::vec(-5i64..6, 6),
            sparsify in any::<u64>(),
        ) {
            let entries: Vec<i64> = entries.iter().enumerate()
                .map(|(k, &v)| if sparsify >> (k % 64) & 1 == 1 { 0 } else { v })
                .collect();
            let a = matrix(rows, cols, &entries);
            let dense = a.to_dense();
            let s = ExactSolver::with_execution(&a, Execution::Sequential).unwrap();
            prop_assert_eq!(s.rank(), dense.rank());
            prop_assert_eq!(s.kernel().len(), cols - dense.rank());
            let b = QVector::from_i64(&rhs[..rows]);
            let dense_solution = RationalMatrix::solve(&dense, &b.to_rationals()).unwrap();
            match s.solve(&b).unwrap() {
                Some(x) => {
                    prop_assert!(dense_solution.is_some());
                    prop_assert_eq!(a.mul_qvec(&x).unwrap(), b);
                }
                None => prop_assert!(dense_solution.is_none()),
            }
        }
    }
}
