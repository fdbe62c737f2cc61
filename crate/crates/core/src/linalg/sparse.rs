use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};

use super::{QVector, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Row-compressed sparse matrix `entries / den` with machine-integer entries.
///
/// Coboundaries have entries ±1 and metric-weighted operators only pick up
/// small denominators, so `i64` entries with a single shared denominator are
/// enough; every operation is overflow-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
    den: i64,
}

fn checked(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
            den: 1,
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, 1)]).collect(),
            den: 1,
        }
    }

    /// Builds from per-row `(column, value)` lists; duplicate columns are summed.
    pub fn from_rows(
        rows: usize,
        cols: usize,
        data: Vec<Vec<(usize, i64)>>,
        den: i64,
    ) -> Result<Self> {
        if data.len() != rows || den <= 0 {
            return Err(Error::Shape("sparse rows/denominator".into()));
        }
        let mut data = data;
        for row in &mut data {
            if row.iter().any(|&(c, _)| c >= cols) {
                return Err(Error::Shape("sparse column index out of range".into()));
            }
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = lv.checked_add(v).ok_or(Error::Overflow)?,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0);
            *row = merged;
        }
        let mut m = SparseMatrix {
            rows,
            cols,
            data,
            den,
        };
        m.reduce_denominator();
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let v = self.data[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0, |k| self.data[i][k].1);
        BigRational::new(BigInt::from(v), BigInt::from(self.den))
    }

    fn reduce_denominator(&mut self) {
        if self.den == 1 {
            return;
        }
        let mut g = self.den;
        for row in &self.data {
            for &(_, v) in row {
                g = gcd_i64(g, v);
                if g == 1 {
                    return;
                }
            }
        }
        if g > 1 {
            for row in &mut self.data {
                for (_, v) in row.iter_mut() {
                    *v /= g;
                }
            }
            self.den /= g;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                data[j].push((i, v));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
            den: self.den,
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = vec![0i128; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for &(k, a) in row {
                for &(j, b) in &other.data[k] {
                    if acc[j] == 0 {
                        touched.push(j);
                    }
                    acc[j] += a as i128 * b as i128;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if acc[j] != 0 {
                    out.push((j, checked(acc[j])?));
                }
                acc[j] = 0;
            }
            touched.clear();
            data.push(out);
        }
        let den = self.den.checked_mul(other.den).ok_or(Error::Overflow)?;
        let mut m = SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
            den,
        };
        m.reduce_denominator();
        Ok(m)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(
                "addition of mismatched sparse matrices".into(),
            ));
        }
        let l = self.den.lcm(&other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row: Vec<(usize, i64)> = Vec::with_capacity(a.len() + b.len());
                for &(c, v) in a {
                    row.push((c, checked(v as i128 * fa as i128)?));
                }
                for &(c, v) in b {
                    row.push((c, checked(v as i128 * fb as i128)?));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_rows(self.rows, self.cols, data, l)
    }

    /// `diag(weights) · self`.
    pub fn scale_rows(&self, weights: &[Rational]) -> Result<Self> {
        self.scale_by(weights, true)
    }

    /// `self · diag(weights)`.
    pub fn scale_cols(&self, weights: &[Rational]) -> Result<Self> {
        self.scale_by(weights, false)
    }

    fn scale_by(&self, weights: &[Rational], rows: bool) -> Result<Self> {
        let expected = if rows { self.rows } else { self.cols };
        if weights.len() != expected {
            return Err(Error::Shape("diagonal scaling length".into()));
        }
        let l = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let factors: Vec<i64> = weights
            .iter()
            .map(|w| {
                (w.numer() * (&l / w.denom()))
                    .to_i64()
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<_>>()?;
        let l = l.to_i64().ok_or(Error::Overflow)?;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|&(j, v)| {
                        let f = if rows { factors[i] } else { factors[j] };
                        Ok((j, checked(v as i128 * f as i128)?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let den = self.den.checked_mul(l).ok_or(Error::Overflow)?;
        SparseMatrix::from_rows(self.rows, self.cols, data, den)
    }

    pub fn mul_qvec(&self, x: &QVector) -> Result<QVector> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        let num = x.numerators();
        let out: Vec<BigInt> = self
            .data
            .iter()
            .map(|row| {
                let mut s = BigInt::zero();
                for &(j, v) in row {
                    if !num[j].is_zero() {
                        s += &num[j] * v;
                    }
                }
                s
            })
            .collect();
        Ok(QVector::from_parts(out, x.denominator() * self.den))
    }

    /// Integer product `entries · x` ignoring the shared denominator.
    pub(crate) fn mul_integer(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.data
            .iter()
            .map(|row| {
                let mut s = BigInt::zero();
                for &(j, v) in row {
                    if !x[j].is_zero() {
                        s += &x[j] * v;
                    }
                }
                s
            })
            .collect()
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        let den = BigInt::from(self.den);
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = BigRational::new(BigInt::from(v), den.clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn sample() -> SparseMatrix {
        SparseMatrix::from_rows(
            3,
            2,
            vec![vec![(0, 1), (1, -2)], vec![], vec![(1, 3), (1, 1)]],
            2,
        )
        .unwrap()
    }

    #[test]
    fn builds_and_merges() {
        let m = sample();
        assert_eq!(m.get(2, 1), int(2));
        assert_eq!(m.get(0, 1), int(-1));
        assert_eq!(m.get(0, 0), rat(1, 2));
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn products_match_dense() {
        let a = sample();
        let b = a.transpose();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.to_dense(), a.to_dense().mul(&b.to_dense()).unwrap());
        let s = p.add(&SparseMatrix::identity(3)).unwrap();
        assert_eq!(
            s.to_dense(),
            p.to_dense().add(&RationalMatrix::identity(3)).unwrap()
        );
    }

    #[test]
    fn scaling_matches_dense() {
        let a = sample();
        let w = [rat(1, 3), int(2), rat(5, 4)];
        let scaled = a.scale_rows(&w).unwrap();
        let dense = RationalMatrix::diagonal(&w).mul(&a.to_dense()).unwrap();
        assert_eq!(scaled.to_dense(), dense);
        let wc = [rat(2, 7), int(-1)];
        let scaled = a.scale_cols(&wc).unwrap();
        assert_eq!(
            scaled.to_dense(),
            a.to_dense().mul(&RationalMatrix::diagonal(&wc)).unwrap()
        );
    }

    #[test]
    fn mat_vec_matches_dense() {
        let a = sample();
        let x = QVector::from_rationals(&[rat(1, 3), rat(-2, 5)]);
        let y = a.mul_qvec(&x).unwrap();
        assert_eq!(
            y.to_rationals(),
            a.to_dense().mul_vec(&x.to_rationals()).unwrap()
        );
    }

    #[test]
    fn overflow_is_reported() {
        let big = SparseMatrix::from_rows(1, 1, vec![vec![(0, i64::MAX / 2)]], 1).unwrap();
        assert!(matches!(big.mul(&big), Err(Error::Overflow)));
    }
}
