use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{format_rational, int, QVector, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Sylvester inertia of a symmetric form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn from_diagonal<'a>(diag: impl IntoIterator<Item = &'a Rational>) -> Self {
        let mut inertia = Inertia::default();
        for d in diag {
            if d.is_positive() {
                inertia.positive += 1;
            } else if d.is_negative() {
                inertia.negative += 1;
            } else {
                inertia.zero += 1;
            }
        }
        inertia
    }
}

/// Result of a congruence diagonalization: `transformᵀ · S · transform = diag(diagonal)`.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub transform: RationalMatrix,
    pub diagonal: Vec<Rational>,
}

impl Congruence {
    pub fn inertia(&self) -> Inertia {
        Inertia::from_diagonal(&self.diagonal)
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer rows")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[QVector]) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..len {
                m[(i, j)] = c.get(i);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<QVector> {
        (0..self.cols)
            .map(|j| QVector::from_rationals(&self.column(j)))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("subtraction of mismatched matrices".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &RationalMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("addition of mismatched matrices".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Rank by fraction-free (Bareiss) elimination.
    ///
    /// Rows are first scaled to integers; the pivot in each column is the
    /// remaining entry with the shortest numerator.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pivot = (r..self.rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by_key(|&i| m[i][c].bits());
            let Some(p) = pivot else { continue };
            m.swap(r, p);
            let (head, tail) = m.split_at_mut(r + 1);
            let prow = &head[r];
            for row in tail.iter_mut() {
                for j in c + 1..self.cols {
                    let v = &prow[c] * &row[j] - &row[c] * &prow[j];
                    debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the kernel, one column per free variable of the RREF.
    ///
    /// The basis vector for free column `f` has a 1 in position `f`, zeros in
    /// the other free positions, and is determined on the pivot positions.
    pub fn nullspace_basis(&self) -> RationalMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -r[(i, f)].clone();
            }
        }
        basis
    }

    /// One exact solution of `self · x = b`, or `None` when inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::Shape("right-hand side length".into()));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Exact solution of the normal equations `AᵀA x = Aᵀb`.
    pub fn solve_least_squares(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        let at = self.transpose();
        let normal = at.mul(self)?;
        let rhs = at.mul_vec(b)?;
        normal
            .solve(&rhs)?
            .ok_or_else(|| Error::Solver("normal equations reported inconsistent".into()))
    }

    pub fn inverse(&self) -> Result<Option<RationalMatrix>> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
            return Ok(None);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(Some(inv))
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    /// Symmetric Gaussian elimination: finds invertible `C` with `CᵀSC` diagonal.
    ///
    /// At step `k` the pivot is the first nonzero diagonal entry of the
    /// trailing block; if the trailing diagonal vanishes, the first nonzero
    /// off-diagonal entry `(i, j)` is moved to `(k, j')` and row/column `j'`
    /// is added to row/column `k`, which makes the new diagonal entry
    /// `2·S[k][j']`.
    pub fn congruence_diagonalize(&self) -> Result<Congruence> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut s = self.clone();
        let mut c = Self::identity(n);
        for k in 0..n {
            if s[(k, k)].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !s[(i, i)].is_zero()) {
                    s.swap_rows(i, k);
                    s.swap_cols(i, k);
                    c.swap_cols(i, k);
                } else {
                    let off = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !s[(i, j)].is_zero());
                    let Some((i, mut j)) = off else { break };
                    if i != k {
                        s.swap_rows(i, k);
                        s.swap_cols(i, k);
                        c.swap_cols(i, k);
                        if j == k {
                            j = i;
                        }
                    }
                    s.add_row(j, k, &Rational::one());
                    s.add_col(j, k, &Rational::one());
                    c.add_col(j, k, &Rational::one());
                }
            }
            let pivot = s[(k, k)].clone();
            for i in k + 1..n {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let f = -(&s[(i, k)] / &pivot);
                s.add_row(k, i, &f);
                s.add_col(k, i, &f);
                c.add_col(k, i, &f);
            }
        }
        debug_assert!(s.is_diagonal());
        let diagonal = (0..n).map(|i| s[(i, i)].clone()).collect();
        Ok(Congruence {
            transform: c,
            diagonal,
        })
    }

    /// Inertia of a symmetric matrix via congruence diagonalization.
    pub fn inertia(&self) -> Result<Inertia> {
        Ok(self.congruence_diagonalize()?.inertia())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f · row[src]
    fn add_row(&mut self, src: usize, dst: usize, f: &Rational) {
        for j in 0..self.cols {
            if self[(src, j)].is_zero() {
                continue;
            }
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += f · col[src]
    fn add_col(&mut self, src: usize, dst: usize, f: &Rational) {
        for i in 0..self.rows {
            if self[(i, src)].is_zero() {
                continue;
            }
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
