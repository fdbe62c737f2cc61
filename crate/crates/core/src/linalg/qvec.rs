use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::Rational;

/// A rational vector stored as integer numerators over one positive common
/// denominator.
///
/// Long vectors with large denominators (harmonic cochains, Poisson solutions)
/// are far cheaper in this form than as independently reduced fractions.
#[derive(Clone)]
pub struct QVector {
    num: Vec<BigInt>,
    den: BigInt,
}

impl QVector {
    pub fn zeros(len: usize) -> Self {
        QVector {
            num: vec![BigInt::zero(); len],
            den: BigInt::one(),
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.num[i] = BigInt::one();
        v
    }

    pub fn from_integers(num: Vec<BigInt>) -> Self {
        QVector {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::from_integers(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Builds `num / den`; the denominator must be nonzero.
    pub fn from_parts(num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut v = if den.is_negative() {
            QVector {
                num: num.into_iter().map(|x| -x).collect(),
                den: -den,
            }
        } else {
            QVector { num, den }
        };
        v.normalize();
        v
    }

    pub fn from_rationals(values: &[Rational]) -> Self {
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let num = values
            .iter()
            .map(|r| r.numer() * (&den / r.denom()))
            .collect();
        let mut v = QVector { num, den };
        v.normalize();
        v
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn into_parts(self) -> (Vec<BigInt>, BigInt) {
        (self.num, self.den)
    }

    pub fn get(&self, i: usize) -> Rational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn set(&mut self, i: usize, value: &Rational) {
        let l = self.den.lcm(value.denom());
        if l != self.den {
            let f = &l / &self.den;
            for x in &mut self.num {
                *x *= &f;
            }
            self.den = l;
        }
        self.num[i] = value.numer() * (&self.den / value.denom());
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Indices with nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
    }

    /// Divides numerators and denominator by their common gcd.
    pub fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                return;
            }
            if !x.is_zero() {
                g = g.gcd(&x.mod_floor(&g));
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for x in &mut self.num {
                *x /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn scale(&self, c: &Rational) -> QVector {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        QVector::from_parts(num, &self.den * c.denom())
    }

    /// Entrywise product with `weights`.
    pub fn scale_entries(&self, weights: &[Rational]) -> QVector {
        assert_eq!(self.len(), weights.len(), "length mismatch");
        let w = QVector::from_rationals(weights);
        let num = self.num.iter().zip(&w.num).map(|(x, y)| x * y).collect();
        QVector::from_parts(num, &self.den * &w.den)
    }

    /// `a * self + b * other` with integer-free bookkeeping of denominators.
    pub fn combine(&self, a: &Rational, other: &QVector, b: &Rational) -> QVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        let da = &self.den * a.denom();
        let db = &other.den * b.denom();
        let l = da.lcm(&db);
        let fa = a.numer() * (&l / &da);
        let fb = b.numer() * (&l / &db);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| x * &fa + y * &fb)
            .collect();
        QVector::from_parts(num, l)
    }

    pub fn add(&self, other: &QVector) -> QVector {
        let one = Rational::one();
        self.combine(&one, other, &one)
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        let one = Rational::one();
        self.combine(&one, other, &-one.clone())
    }

    pub fn neg(&self) -> QVector {
        QVector {
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }

    /// `Σ wᵢ selfᵢ otherᵢ`; `weights = None` means all ones.
    pub fn weighted_dot(&self, other: &QVector, weights: Option<&[Rational]>) -> Rational {
        assert_eq!(self.len(), other.len(), "length mismatch");
        let den = &self.den * &other.den;
        match weights {
            None => {
                let s: BigInt = self.num.iter().zip(&other.num).map(|(x, y)| x * y).sum();
                BigRational::new(s, den)
            }
            Some(w) => {
                let wv = QVector::from_rationals(w);
                let s: BigInt = self
                    .num
                    .iter()
                    .zip(&other.num)
                    .zip(&wv.num)
                    .filter(|((x, y), _)| !x.is_zero() && !y.is_zero())
                    .map(|((x, y), w)| x * y * w)
                    .sum();
                BigRational::new(s, den * &wv.den)
            }
        }
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        self.weighted_dot(other, None)
    }

    /// Concatenates the entries selected by `indices`.
    pub fn select(&self, indices: &[usize]) -> QVector {
        QVector::from_parts(
            indices.iter().map(|&i| self.num[i].clone()).collect(),
            self.den.clone(),
        )
    }
}

impl PartialEq for QVector {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .num
                .iter()
                .zip(&other.num)
                .all(|(x, y)| x * &other.den == y * &self.den)
    }
}

impl Eq for QVector {}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.to_rationals().iter().map(super::format_rational))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn from_rationals_uses_common_denominator() {
        let v = QVector::from_rationals(&[rat(1, 2), rat(1, 3), int(2)]);
        assert_eq!(v.denominator(), &BigInt::from(6));
        assert_eq!(v.to_rationals(), vec![rat(1, 2), rat(1, 3), int(2)]);
    }

    #[test]
    fn combine_and_compare() {
        let a = QVector::from_rationals(&[rat(1, 2), rat(-1, 4)]);
        let b = QVector::from_rationals(&[rat(1, 3), int(1)]);
        let c = a.combine(&int(2), &b, &rat(-3, 1));
        assert_eq!(c.to_rationals(), vec![int(0), rat(-7, 2)]);
        assert_eq!(a.sub(&a), QVector::zeros(2));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn weighted_dot_matches_entrywise_sum() {
        let a = QVector::from_rationals(&[rat(1, 2), rat(2, 3)]);
        let b = QVector::from_rationals(&[rat(3, 5), int(-1)]);
        let w = [rat(5, 7), int(3)];
        let expected = rat(1, 2) * rat(3, 5) * rat(5, 7) + rat(2, 3) * int(-1) * int(3);
        assert_eq!(a.weighted_dot(&b, Some(&w)), expected);
        assert_eq!(a.dot(&b), rat(3, 10) - rat(2, 3));
    }

    #[test]
    fn set_rescales() {
        let mut v = QVector::from_i64(&[1, 2]);
        v.set(0, &rat(1, 3));
        assert_eq!(v.to_rationals(), vec![rat(1, 3), int(2)]);
    }
}
