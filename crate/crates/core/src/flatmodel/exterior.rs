use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use rand::Rng;

use super::scalar::{format_gaussian, i_pow, random_gaussian, real, Gaussian};
use crate::error::{Error, Result};

/// Largest ambient dimension; multi-indices are bitmasks.
pub const MAX_DIMENSION: usize = 16;

/// Subset of `{1..n}` as a bitmask, bit `j - 1` standing for `e_j`.
pub type MultiIndex = u16;

pub fn degree_of(i: MultiIndex) -> usize {
    i.count_ones() as usize
}

/// Sign of the shuffle sorting the concatenation `(I, J)` of disjoint index
/// sets into increasing order.
pub fn shuffle_sign(i: MultiIndex, j: MultiIndex) -> i64 {
    debug_assert_eq!(i & j, 0);
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (i >> b).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Element of the complexified exterior algebra `Λ(ℂⁿ)` in the standard
/// orthonormal basis `e_I`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedForm {
    n: usize,
    components: BTreeMap<MultiIndex, Gaussian>,
}

impl GradedForm {
    pub fn zero(n: usize) -> Self {
        assert!(
            n <= MAX_DIMENSION,
            "ambient dimension {n} exceeds {MAX_DIMENSION}"
        );
        GradedForm {
            n,
            components: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_mask(n, 0, real(1))
    }

    /// `e_1 ∧ … ∧ e_n`.
    pub fn volume(n: usize) -> Self {
        Self::from_mask(n, full(n), real(1))
    }

    pub fn from_mask(n: usize, i: MultiIndex, c: Gaussian) -> Self {
        let mut f = Self::zero(n);
        assert!(i & !full(n) == 0, "index outside 1..={n}");
        if !c.is_zero() {
            f.components.insert(i, c);
        }
        f
    }

    /// `e_{i₁ … i_p}` from strictly increasing 1-based indices.
    pub fn basis(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i == 0 || i > n) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape(format!(
                "{indices:?} is not an increasing subset of 1..={n}"
            )));
        }
        Ok(Self::from_mask(
            n,
            indices.iter().fold(0, |m, &i| m | 1 << (i - 1)),
            real(1),
        ))
    }

    /// All `2ⁿ` basis elements, by bitmask.
    pub fn basis_elements(n: usize) -> impl Iterator<Item = GradedForm> {
        (0..=full(n)).map(move |i| Self::from_mask(n, i, real(1)))
    }

    /// Random element with every coefficient drawn independently.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut f = Self::zero(n);
        for i in 0..=full(n) {
            f.insert(i, random_gaussian(rng));
        }
        f
    }

    /// Random homogeneous `p`-form.
    pub fn random_homogeneous<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Self {
        Self::random(n, rng).part(p)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> impl Iterator<Item = (MultiIndex, &Gaussian)> {
        self.components.iter().map(|(&i, c)| (i, c))
    }

    pub fn coefficient(&self, i: MultiIndex) -> Gaussian {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(Gaussian::zero)
    }

    /// Coefficients of all `2ⁿ` basis elements, by bitmask.
    pub fn to_vector(&self) -> Vec<Gaussian> {
        (0..=full(self.n)).map(|i| self.coefficient(i)).collect()
    }

    pub fn from_vector(n: usize, v: &[Gaussian]) -> Self {
        let mut f = Self::zero(n);
        for (i, c) in v.iter().enumerate() {
            f.insert(i as MultiIndex, c.clone());
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `Some(p)` when every component has degree `p`; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.components.keys().map(|&i| degree_of(i));
        let p = degrees.next()?;
        degrees.all(|q| q == p).then_some(p)
    }

    /// Degree-`p` component.
    pub fn part(&self, p: usize) -> Self {
        let components = self
            .components
            .iter()
            .filter(|(&i, _)| degree_of(i) == p)
            .map(|(&i, c)| (i, c.clone()))
            .collect();
        GradedForm {
            n: self.n,
            components,
        }
    }

    fn insert(&mut self, i: MultiIndex, c: Gaussian) {
        if c.is_zero() {
            return;
        }
        let slot = self.components.entry(i).or_insert_with(Gaussian::zero);
        *slot += c;
        if slot.is_zero() {
            self.components.remove(&i);
        }
    }

    fn same_dimension(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "forms on ℝ^{} and ℝ^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dimension(other)?;
        let mut out = self.clone();
        for (&i, c) in &other.components {
            out.insert(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&real(-1))
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        let mut out = Self::zero(self.n);
        for (&i, x) in &self.components {
            out.insert(i, x * c);
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let components = self
            .components
            .iter()
            .map(|(&i, c)| (i, c.conj()))
            .collect();
        GradedForm {
            n: self.n,
            components,
        }
    }

    /// `e_I ∧ e_J = ±e_{I∪J}`, zero when the index sets meet.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_dimension(other)?;
        let mut out = Self::zero(self.n);
        for (&i, a) in &self.components {
            for (&j, b) in &other.components {
                if i & j == 0 {
                    out.insert(i | j, a * b * real(shuffle_sign(i, j)));
                }
            }
        }
        Ok(out)
    }

    /// `*e_I = sign(I, Iᶜ) e_{Iᶜ}`.
    pub fn star(&self) -> Self {
        let all = full(self.n);
        let mut out = Self::zero(self.n);
        for (&i, c) in &self.components {
            out.insert(all ^ i, c * real(shuffle_sign(i, all ^ i)));
        }
        out
    }

    /// `J = i^{n/2 + p(p-1)} *` on `p`-forms; only defined for even `n`.
    pub fn chirality(&self) -> Result<Self> {
        if self.n % 2 == 1 {
            return Err(Error::OddDimension(self.n));
        }
        let all = full(self.n);
        let mut out = Self::zero(self.n);
        for (&i, c) in &self.components {
            let p = degree_of(i);
            let phase = i_pow(self.n / 2 + p * (p.saturating_sub(1)));
            out.insert(all ^ i, c * phase * real(shuffle_sign(i, all ^ i)));
        }
        Ok(out)
    }

    /// Left exterior multiplication by the vector `Σ v_j e_j`.
    pub fn exterior(&self, v: &[Gaussian]) -> Self {
        let mut out = Self::zero(self.n);
        for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let bit = 1 << j;
            for (&i, c) in &self.components {
                if i & bit == 0 {
                    out.insert(i | bit, vj * c * real(shuffle_sign(bit, i)));
                }
            }
        }
        out
    }

    /// Interior multiplication `Σ v_j ι_{e_j}`, the adjoint of
    /// [`exterior`](Self::exterior) by the conjugate vector.
    pub fn interior(&self, v: &[Gaussian]) -> Self {
        let mut out = Self::zero(self.n);
        for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let bit = 1 << j;
            for (&i, c) in &self.components {
                if i & bit != 0 {
                    out.insert(i ^ bit, vj * c * real(shuffle_sign(bit, i ^ bit)));
                }
            }
        }
        out
    }

    /// Hermitian inner product `Σ a_I conj(b_I)` of the orthonormal basis.
    pub fn inner(&self, other: &Self) -> Gaussian {
        self.components
            .iter()
            .filter_map(|(i, a)| other.components.get(i).map(|b| a * b.conj()))
            .fold(Gaussian::zero(), |s, x| s + x)
    }

    /// Coefficient of the volume form in `self ∧ *conj(other)`.
    pub fn volume_pairing(&self, other: &Self) -> Result<Gaussian> {
        Ok(self.wedge(&other.conj().star())?.coefficient(full(self.n)))
    }
}

pub(crate) fn full(n: usize) -> MultiIndex {
    if n == 0 {
        0
    } else {
        (u16::MAX) >> (16 - n)
    }
}

impl fmt::Debug for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&i, c)) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let label: String = (0..self.n)
                .filter(|b| i >> b & 1 == 1)
                .map(|b| (b + 1).to_string())
                .collect();
            if label.is_empty() {
                write!(f, "({})", format_gaussian(c))?;
            } else {
                write!(f, "({})e{label}", format_gaussian(c))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, idx: &[usize]) -> GradedForm {
        GradedForm::basis(n, idx).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(e(3, &[1]).wedge(&e(3, &[2])).unwrap(), e(3, &[1, 2]));
        assert_eq!(e(3, &[2]).wedge(&e(3, &[1])).unwrap(), e(3, &[1, 2]).neg());
        assert!(e(3, &[1]).wedge(&e(3, &[1])).unwrap().is_zero());
        assert_eq!(
            e(4, &[1, 3]).wedge(&e(4, &[2, 4])).unwrap(),
            e(4, &[1, 2, 3, 4]).neg()
        );
    }

    #[test]
    fn star_examples() {
        assert_eq!(e(4, &[1, 2]).star(), e(4, &[3, 4]));
        assert_eq!(e(4, &[1, 2]).star().star(), e(4, &[1, 2]));
        assert_eq!(e(2, &[1]).star().star(), e(2, &[1]).neg());
        assert_eq!(GradedForm::one(5).star(), GradedForm::volume(5));
        assert_eq!(e(4, &[1, 3]).star(), e(4, &[2, 4]).neg());
    }

    #[test]
    fn chirality_on_middle_degree() {
        let j = e(4, &[1, 2]).chirality().unwrap();
        assert_eq!(j, e(4, &[3, 4]));
        assert_eq!(j.chirality().unwrap(), e(4, &[1, 2]));
        assert!(matches!(
            e(3, &[1]).chirality(),
            Err(Error::OddDimension(3))
        ));
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(GradedForm::basis(3, &[2, 1]).is_err());
        assert!(GradedForm::basis(3, &[4]).is_err());
        assert!(GradedForm::basis(3, &[1, 1]).is_err());
        assert!(e(3, &[1]).wedge(&e(4, &[1])).is_err());
    }

    #[test]
    fn interior_undoes_exterior_on_a_unit_vector() {
        let v = vec![real(1), real(0), real(0)];
        let w = e(3, &[2, 3]);
        assert_eq!(w.exterior(&v).interior(&v), w);
        assert_eq!(
            e(3, &[1, 2]).interior(&[real(0), real(1), real(0)]),
            e(3, &[1]).neg()
        );
    }

    #[test]
    fn display() {
        let f = e(4, &[1, 2]).add(&e(4, &[3, 4]).scale(&i_pow(1))).unwrap();
        assert_eq!(f.to_string(), "(1)e12 + (1i)e34");
        assert_eq!(GradedForm::zero(2).to_string(), "0");
    }
}
