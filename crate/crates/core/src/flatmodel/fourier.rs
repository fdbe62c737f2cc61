use std::collections::BTreeMap;

use num::{BigRational, Complex, Zero};
use rand::Rng;

use super::exterior::GradedForm;
use super::scalar::{real, Gaussian};
use crate::error::{Error, Result};

/// Integer frequency vector `ξ ∈ ℤⁿ`.
pub type Frequency = Vec<i64>;

/// All frequencies with `|ξ_j| ≤ cutoff`, in lexicographic order.
pub fn frequencies(n: usize, cutoff: u32) -> Vec<Frequency> {
    let c = cutoff as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Frequency| {
                (-c..=c).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// `i ξ` as a vector, the symbol of `d` on the mode `e^{i ξ·x}`.
fn symbol(xi: &[i64]) -> Vec<Gaussian> {
    xi.iter()
        .map(|&x| Complex::new(BigRational::zero(), BigRational::from_integer(x.into())))
        .collect()
}

/// `d` on the single mode with frequency `ξ`: exterior multiplication by `iξ`.
pub fn d_at(form: &GradedForm, xi: &[i64]) -> GradedForm {
    form.exterior(&symbol(xi))
}

/// Adjoint of [`d_at`]: interior multiplication by `conj(iξ) = −iξ`.
pub fn delta_at(form: &GradedForm, xi: &[i64]) -> GradedForm {
    let v: Vec<Gaussian> = symbol(xi).iter().map(|z| z.conj()).collect();
    form.interior(&v)
}

/// `D = d + δ` on one mode.
pub fn dirac_at(form: &GradedForm, xi: &[i64]) -> GradedForm {
    d_at(form, xi)
        .add(&delta_at(form, xi))
        .expect("same dimension")
}

/// `|ξ|²`.
pub fn norm_squared(xi: &[i64]) -> i64 {
    xi.iter().map(|x| x * x).sum()
}

/// Trigonometric polynomial form `Σ_ξ ω_ξ e^{i ξ·x}` on the flat torus
/// `ℝⁿ / 2πℤⁿ`, with every frequency inside the cutoff box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierForm {
    n: usize,
    cutoff: u32,
    terms: BTreeMap<Frequency, GradedForm>,
}

impl FourierForm {
    pub fn zero(n: usize, cutoff: u32) -> Self {
        FourierForm {
            n,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(form: GradedForm, cutoff: u32) -> Self {
        let n = form.dimension();
        Self::mode(vec![0; n], form, cutoff).expect("zero frequency is inside every cutoff")
    }

    /// `form · e^{i ξ·x}`.
    pub fn mode(xi: Frequency, form: GradedForm, cutoff: u32) -> Result<Self> {
        let n = form.dimension();
        if xi.len() != n {
            return Err(Error::Shape(format!(
                "frequency of length {} on a {n}-torus",
                xi.len()
            )));
        }
        if xi.iter().any(|x| x.unsigned_abs() > cutoff as u64) {
            return Err(Error::Shape(format!(
                "frequency {xi:?} beyond cutoff {cutoff}"
            )));
        }
        let mut f = Self::zero(n, cutoff);
        f.insert(xi, form);
        Ok(f)
    }

    /// Random form with one random coefficient vector on each of `modes` random frequencies.
    pub fn random<R: Rng + ?Sized>(n: usize, cutoff: u32, modes: usize, rng: &mut R) -> Self {
        let c = cutoff as i64;
        let mut f = Self::zero(n, cutoff);
        for _ in 0..modes {
            let xi: Frequency = (0..n).map(|_| rng.gen_range(-c..=c)).collect();
            f.insert(xi, GradedForm::random(n, rng));
        }
        f
    }

    /// Every `e_I e^{i ξ·x}` inside the cutoff; a basis of the truncated space.
    pub fn basis(n: usize, cutoff: u32) -> Vec<FourierForm> {
        let mut out = Vec::new();
        for xi in frequencies(n, cutoff) {
            for b in GradedForm::basis_elements(n) {
                out.push(Self::mode(xi.clone(), b, cutoff).expect("inside cutoff"));
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Frequency, &GradedForm)> {
        self.terms.iter()
    }

    pub fn term(&self, xi: &[i64]) -> GradedForm {
        self.terms
            .get(xi)
            .cloned()
            .unwrap_or_else(|| GradedForm::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, xi: Frequency, form: GradedForm) {
        if form.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&xi) {
            Some(old) => old.add(&form).expect("same dimension"),
            None => form,
        };
        if !merged.is_zero() {
            self.terms.insert(xi, merged);
        }
    }

    /// Applies a per-frequency operator.
    pub fn map_modes<F: Fn(&GradedForm, &[i64]) -> GradedForm>(&self, f: F) -> Self {
        let mut out = Self::zero(self.n, self.cutoff);
        for (xi, w) in &self.terms {
            out.insert(xi.clone(), f(w, xi));
        }
        out
    }

    fn try_map_modes<F: Fn(&GradedForm) -> Result<GradedForm>>(&self, f: F) -> Result<Self> {
        let mut out = Self::zero(self.n, self.cutoff);
        for (xi, w) in &self.terms {
            out.insert(xi.clone(), f(w)?);
        }
        Ok(out)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.cutoff != other.cutoff {
            return Err(Error::Shape(
                "Fourier forms on different truncations".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (xi, w) in &other.terms {
            out.insert(xi.clone(), w.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&real(-1)))
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        self.map_modes(|w, _| w.scale(c))
    }

    pub fn part(&self, p: usize) -> Self {
        self.map_modes(|w, _| w.part(p))
    }

    pub fn d(&self) -> Self {
        self.map_modes(d_at)
    }

    /// The formal adjoint of `d` for the `L²` product; the normative codifferential.
    pub fn delta(&self) -> Self {
        self.map_modes(delta_at)
    }

    /// `−*d*`, applied as written.
    pub fn star_d_star(&self) -> Self {
        self.star().d().star().scale(&real(-1))
    }

    pub fn dirac(&self) -> Self {
        self.map_modes(dirac_at)
    }

    /// `Δ = D²`.
    pub fn laplacian(&self) -> Self {
        self.dirac().dirac()
    }

    /// Pointwise Hodge star; constant coefficients, so it acts mode by mode.
    pub fn star(&self) -> Self {
        self.map_modes(|w, _| w.star())
    }

    pub fn chirality(&self) -> Result<Self> {
        self.try_map_modes(GradedForm::chirality)
    }

    /// `L²` product normalised so that the modes `e_I e^{i ξ·x}` are orthonormal.
    pub fn inner(&self, other: &Self) -> Result<Gaussian> {
        self.compatible(other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(xi, a)| other.terms.get(xi).map(|b| a.inner(b)))
            .fold(Gaussian::zero(), |s, x| s + x))
    }
}
