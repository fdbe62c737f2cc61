//! Operator identities of the flat model, each verified exactly on a basis of
//! the relevant truncated space.

use serde::{Deserialize, Serialize};

use super::exterior::{degree_of, full, GradedForm};
use super::fourier::{d_at, delta_at, dirac_at, frequencies, norm_squared, FourierForm};
use super::linear::{nullspace, rank};
use super::scalar::real;
use crate::error::{Error, Result};
use crate::par::{self, Execution};

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn require_even(n: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    Ok(())
}

/// `** = (−1)^{p(n−p)}` on every basis element of `Λ(ℝⁿ)`.
pub fn star_square_holds(n: usize) -> bool {
    GradedForm::basis_elements(n).all(|b| {
        let p = b.degree().unwrap_or(0);
        b.star().star() == b.scale(&real(sign(p * (n - p))))
    })
}

/// `J² = 1` on every basis element.
pub fn chirality_squares_to_identity(n: usize) -> Result<bool> {
    require_even(n)?;
    for b in GradedForm::basis_elements(n) {
        if b.chirality()?.chirality()? != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimensions of the `±1` eigenspaces of `J` on `Λ(ℂⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiralitySplit {
    pub plus: usize,
    pub minus: usize,
    /// `(J − 1)(J + 1) = 0`, so `J` is diagonalisable with eigenvalues in `{±1}`.
    pub involution: bool,
}

impl ChiralitySplit {
    /// Both eigenvalues occur and the eigenspaces fill the whole algebra.
    pub fn is_complete(&self, n: usize) -> bool {
        self.involution && self.plus > 0 && self.minus > 0 && self.plus + self.minus == 1 << n
    }
}

/// Splits `Λ(ℂⁿ)` by the spanning sets `b ± Jb`.
pub fn chirality_split(n: usize) -> Result<ChiralitySplit> {
    require_even(n)?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut involution = true;
    for b in GradedForm::basis_elements(n) {
        let j = b.chirality()?;
        let p = b.add(&j)?;
        let m = b.sub(&j)?;
        // (J − 1)(J + 1) b = J(b + Jb) − (b + Jb)
        involution &= p.chirality()? == p;
        involution &= m.chirality()? == m.neg();
        plus.push(p.to_vector());
        minus.push(m.to_vector());
    }
    Ok(ChiralitySplit {
        plus: rank(plus),
        minus: rank(minus),
        involution,
    })
}

/// `⟨e_I, e_J⟩` equals the volume coefficient of `e_I ∧ *e_J` for all `I`, `J` of equal degree.
pub fn volume_pairing_matches_inner(n: usize) -> Result<bool> {
    let basis: Vec<GradedForm> = GradedForm::basis_elements(n).collect();
    for a in &basis {
        for b in basis.iter().filter(|b| b.degree() == a.degree()) {
            if a.volume_pairing(b)? != a.inner(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs `f` on every basis mode `e_I e^{iξ·x}` with `deg I` in `degrees`, one frequency block per task.
fn all_modes<F>(n: usize, cutoff: u32, degrees: impl Fn(usize) -> bool + Sync, f: F) -> Result<bool>
where
    F: Fn(&FourierForm) -> Result<bool> + Sync + Send,
{
    let freqs = frequencies(n, cutoff);
    let results = par::map_slice(Execution::default(), &freqs, |xi| -> Result<bool> {
        for b in GradedForm::basis_elements(n).filter(|b| degrees(b.degree().unwrap_or(0))) {
            let w = FourierForm::mode(xi.clone(), b, cutoff)?;
            if !f(&w)? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `−*d*` agrees with the adjoint of `d` on `p`-forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodifferentialConvention {
    pub degree: usize,
    pub star_formula_agrees: bool,
}

/// Compares `−*d*` with the adjoint codifferential degree by degree.
pub fn codifferential_conventions(n: usize, cutoff: u32) -> Result<Vec<CodifferentialConvention>> {
    (1..=n)
        .map(|p| {
            let agrees = all_modes(n, cutoff, |q| q == p, |w| Ok(w.star_d_star() == w.delta()))?;
            Ok(CodifferentialConvention {
                degree: p,
                star_formula_agrees: agrees,
            })
        })
        .collect()
}

/// `⟨dα, β⟩ = ⟨α, δβ⟩` for all pairs of basis modes sharing a frequency.
pub fn adjointness_holds(n: usize, cutoff: u32) -> bool {
    let freqs = frequencies(n, cutoff);
    let basis: Vec<GradedForm> = GradedForm::basis_elements(n).collect();
    par::map_slice(Execution::default(), &freqs, |xi| {
        basis.iter().all(|a| {
            let da = d_at(a, xi);
            basis
                .iter()
                .all(|b| da.inner(b) == a.inner(&delta_at(b, xi)))
        })
    })
    .into_iter()
    .all(|x| x)
}

/// Both commutation identities on `p`-forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationCheck {
    pub degree: usize,
    /// `*δ = (−1)^{(n−p+1)(p−1)+1} d*`.
    pub star_delta: bool,
    /// `*d = (−1)^{p(n−p)+1} δ*`.
    pub star_d: bool,
}

impl CommutationCheck {
    pub fn holds(&self) -> bool {
        self.star_delta && self.star_d
    }
}

pub fn commutation_check(p: usize, n: usize, cutoff: u32) -> Result<CommutationCheck> {
    if p == 0 || p > n {
        return Err(Error::DegreeOutOfRange {
            degree: p,
            dimension: n,
        });
    }
    let s1 = real(sign((n - p + 1) * (p - 1) + 1));
    let s2 = real(sign(p * (n - p) + 1));
    let star_delta = all_modes(
        n,
        cutoff,
        |q| q == p,
        |w| Ok(w.delta().star() == w.star().d().scale(&s1)),
    )?;
    let star_d = all_modes(
        n,
        cutoff,
        |q| q == p,
        |w| Ok(w.d().star() == w.star().delta().scale(&s2)),
    )?;
    Ok(CommutationCheck {
        degree: p,
        star_delta,
        star_d,
    })
}

/// `JD + DJ = 0` on the whole truncated space.
pub fn anticommutation_check(n: usize, cutoff: u32) -> Result<bool> {
    require_even(n)?;
    all_modes(
        n,
        cutoff,
        |_| true,
        |w| {
            Ok(w.dirac()
                .chirality()?
                .add(&w.chirality()?.dirac())?
                .is_zero())
        },
    )
}

/// `D` maps the `+1` eigenspace of `J` into the `−1` eigenspace and back,
/// tested on `b ± Jb` for every basis mode `b`.
pub fn eigenspace_interchange_check(n: usize, cutoff: u32) -> Result<bool> {
    require_even(n)?;
    all_modes(
        n,
        cutoff,
        |_| true,
        |b| {
            let jb = b.chirality()?;
            for (w, s) in [(b.add(&jb)?, 1), (b.sub(&jb)?, -1)] {
                let dw = w.dirac();
                if w.chirality()? != w.scale(&real(s)) || dw.chirality()? != dw.scale(&real(-s)) {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    )
}

/// Structural identities of `d`, `δ`, `Δ` on the truncated space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaplacianChecks {
    pub d_squared_zero: bool,
    pub delta_squared_zero: bool,
    /// `Δ = dδ + δd`.
    pub dirac_square: bool,
    pub commutes_with_star: bool,
    /// `None` in odd dimension, where `J` is undefined.
    pub commutes_with_chirality: Option<bool>,
    /// `Δ = |ξ|²` on each mode, so `Δ` is positive-definite off `ξ = 0`.
    pub scalar_on_modes: bool,
}

impl LaplacianChecks {
    pub fn all(&self) -> bool {
        self.d_squared_zero
            && self.delta_squared_zero
            && self.dirac_square
            && self.commutes_with_star
            && self.commutes_with_chirality.unwrap_or(true)
            && self.scalar_on_modes
    }
}

pub fn laplacian_checks(n: usize, cutoff: u32) -> Result<LaplacianChecks> {
    let every = |_: usize| true;
    let d_squared_zero = all_modes(n, cutoff, every, |w| Ok(w.d().d().is_zero()))?;
    let delta_squared_zero = all_modes(n, cutoff, every, |w| Ok(w.delta().delta().is_zero()))?;
    let dirac_square = all_modes(n, cutoff, every, |w| {
        Ok(w.laplacian() == w.delta().d().add(&w.d().delta())?)
    })?;
    let commutes_with_star = all_modes(n, cutoff, every, |w| {
        Ok(w.laplacian().star() == w.star().laplacian())
    })?;
    let commutes_with_chirality = if n % 2 == 0 {
        Some(all_modes(n, cutoff, every, |w| {
            Ok(w.laplacian().chirality()? == w.chirality()?.laplacian())
        })?)
    } else {
        None
    };
    let scalar_on_modes = all_modes(n, cutoff, every, |w| {
        let (xi, _) = w.terms().next().expect("basis mode");
        Ok(w.laplacian() == w.scale(&real(norm_squared(xi))))
    })?;
    Ok(LaplacianChecks {
        d_squared_zero,
        delta_squared_zero,
        dirac_square,
        commutes_with_star,
        commutes_with_chirality,
        scalar_on_modes,
    })
}

/// Index of `D₊ : E₊ → E₋` on a Fourier truncation, where `E±` are the `±1`
/// eigenspaces of `J`, together with the `*`-split of middle harmonic forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub n: usize,
    pub cutoff: u32,
    pub kernel_plus: usize,
    pub kernel_minus: usize,
    /// `dim Ker D₊ − dim Ker D₊*`; `D` is self-adjoint, so `D₊* = D₋`.
    pub index: i64,
    /// Dimensions of the `±1` eigenspaces of `*` on middle-degree harmonic forms.
    pub harmonic_plus: usize,
    pub harmonic_minus: usize,
    /// Every harmonic form in the truncation has frequency 0.
    pub harmonic_only_constant: bool,
}

impl IndexReport {
    pub fn matches_harmonic_split(&self) -> bool {
        self.index == self.harmonic_plus as i64 - self.harmonic_minus as i64
    }
}

struct Block {
    kernel_plus: usize,
    kernel_minus: usize,
    harmonic: Vec<GradedForm>,
}

fn index_block(n: usize, xi: &[i64]) -> Result<Block> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut d_plus = Vec::new();
    let mut d_minus = Vec::new();
    for b in GradedForm::basis_elements(n) {
        let jb = b.chirality()?;
        let p = b.add(&jb)?;
        let m = b.sub(&jb)?;
        d_plus.push(dirac_at(&p, xi).to_vector());
        d_minus.push(dirac_at(&m, xi).to_vector());
        plus.push(p.to_vector());
        minus.push(m.to_vector());
    }
    let kernel_plus = rank(plus) - rank(d_plus);
    let kernel_minus = rank(minus) - rank(d_minus);
    // Δ on middle-degree forms: columns Δb for the middle basis
    let middle: Vec<GradedForm> = GradedForm::basis_elements(n)
        .filter(|b| b.degree() == Some(n / 2))
        .collect();
    let columns: Vec<Vec<_>> = middle
        .iter()
        .map(|b| dirac_at(&dirac_at(b, xi), xi).part(n / 2).to_vector())
        .collect();
    let rows: Vec<Vec<_>> = (0..=full(n) as usize)
        .filter(|&i| degree_of(i as u16) == n / 2)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let harmonic = nullspace(rows, middle.len())
        .into_iter()
        .map(|x| {
            middle
                .iter()
                .zip(&x)
                .fold(GradedForm::zero(n), |acc, (b, c)| {
                    acc.add(&b.scale(c)).expect("same n")
                })
        })
        .collect();
    Ok(Block {
        kernel_plus,
        kernel_minus,
        harmonic,
    })
}

pub fn signature_operator_index(n: usize, cutoff: u32) -> Result<IndexReport> {
    signature_operator_index_with(n, cutoff, Execution::default())
}

pub fn signature_operator_index_with(
    n: usize,
    cutoff: u32,
    exec: Execution,
) -> Result<IndexReport> {
    if n % 4 != 0 {
        return Err(Error::NotMultipleOfFour(n));
    }
    let freqs = frequencies(n, cutoff);
    let blocks = par::map_slice(exec, &freqs, |xi| index_block(n, xi));
    let (mut kernel_plus, mut kernel_minus) = (0, 0);
    let mut harmonic = Vec::new();
    let mut harmonic_only_constant = true;
    for (xi, b) in freqs.iter().zip(blocks) {
        let b = b?;
        kernel_plus += b.kernel_plus;
        kernel_minus += b.kernel_minus;
        if xi.iter().any(|&x| x != 0) && !b.harmonic.is_empty() {
            harmonic_only_constant = false;
        }
        harmonic.extend(b.harmonic);
    }
    let split = |s: i64| -> Result<usize> {
        let v = harmonic
            .iter()
            .map(|h| Ok(h.add(&h.star().scale(&real(s)))?.to_vector()))
            .collect::<Result<Vec<_>>>()?;
        Ok(rank(v))
    };
    let (harmonic_plus, harmonic_minus) = (split(1)?, split(-1)?);
    Ok(IndexReport {
        n,
        cutoff,
        kernel_plus,
        kernel_minus,
        index: kernel_plus as i64 - kernel_minus as i64,
        harmonic_plus,
        harmonic_minus,
        harmonic_only_constant,
    })
}

/// Constant 2-forms on ℝ⁴: `(self-dual, anti-self-dual)` triples.
pub fn self_dual_bases() -> (Vec<GradedForm>, Vec<GradedForm>) {
    let e = |i: &[usize]| GradedForm::basis(4, i).expect("valid index");
    let pairs = [
        (e(&[1, 2]), e(&[3, 4]), 1),
        (e(&[1, 3]), e(&[2, 4]), -1),
        (e(&[1, 4]), e(&[2, 3]), 1),
    ];
    let plus = pairs
        .iter()
        .map(|(a, b, s)| a.add(&b.scale(&real(*s))).expect("n = 4"))
        .collect();
    let minus = pairs
        .iter()
        .map(|(a, b, s)| a.sub(&b.scale(&real(*s))).expect("n = 4"))
        .collect();
    (plus, minus)
}

/// The explicit triples are `*`-eigenvectors with eigenvalues `±1`, harmonic,
/// and each spans a 3-dimensional space.
pub fn self_dual_bases_check() -> bool {
    let (plus, minus) = self_dual_bases();
    let eigen = |v: &[GradedForm], s: i64| v.iter().all(|w| w.star() == w.scale(&real(s)));
    let harmonic = plus
        .iter()
        .chain(&minus)
        .all(|w| FourierForm::constant(w.clone(), 1).laplacian().is_zero());
    let span = |v: &[GradedForm]| rank(v.iter().map(GradedForm::to_vector).collect());
    eigen(&plus, 1) && eigen(&minus, -1) && harmonic && span(&plus) == 3 && span(&minus) == 3
}

/// Harmonic forms on the truncated torus are exactly the constants, and wedge
/// products and stars of constant forms stay harmonic.
pub fn harmonic_algebra_check(n: usize, cutoff: u32) -> Result<bool> {
    require_even(n)?;
    let harmonic_is_constant = all_modes(
        n,
        cutoff,
        |_| true,
        |w| {
            let (xi, _) = w.terms().next().expect("basis mode");
            Ok(w.laplacian().is_zero() == xi.iter().all(|&x| x == 0))
        },
    )?;
    let constants: Vec<FourierForm> = GradedForm::basis_elements(n)
        .map(|b| FourierForm::constant(b, cutoff))
        .collect();
    let mut closed = true;
    for a in &constants {
        closed &= a.star().laplacian().is_zero();
        let ga = a.term(&vec![0; n]);
        for b in &constants {
            let w = FourierForm::constant(ga.wedge(&b.term(&vec![0; n]))?, cutoff);
            closed &= w.laplacian().is_zero();
        }
    }
    Ok(harmonic_is_constant && closed)
}
