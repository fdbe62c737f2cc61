//! Metric-dependent combinatorial Hodge theory on cochains.
//!
//! Metrics are diagonal in the simplex basis, so `δ_k = M_{k-1}^{-1} d_{k-1}^T M_k`
//! stays sparse with a small shared denominator. Laplacian kernels and
//! Poisson solves go through the certified [`ExactSolver`].

use std::str::FromStr;
use std::sync::OnceLock;

use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{CoboundarySet, Cochain};
use crate::cohomology::pairing_matrix;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{ExactSolver, Inertia, QVector, Rational, RationalMatrix, SparseMatrix};
use crate::par::Execution;

/// How a [`CochainMetric`] is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricSpec {
    #[default]
    Identity,
    /// Seeded random positive rational diagonal.
    Diagonal(u64),
}

impl FromStr for MetricSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(MetricSpec::Identity);
        }
        if let Some(seed) = s.strip_prefix("diag:") {
            return seed
                .parse()
                .map(MetricSpec::Diagonal)
                .map_err(|_| Error::Malformed(format!("bad metric seed {seed:?}")));
        }
        Err(Error::Malformed(format!(
            "unknown metric {s:?}; expected identity or diag:<seed>"
        )))
    }
}

impl std::fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricSpec::Identity => write!(f, "identity"),
            MetricSpec::Diagonal(seed) => write!(f, "diag:{seed}"),
        }
    }
}

/// Positive diagonal inner products on every cochain degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMetric {
    weights: Vec<Vec<Rational>>,
    identity: bool,
}

impl CochainMetric {
    pub fn identity(k: &SimplicialComplex) -> Self {
        let weights = k
            .f_vector()
            .iter()
            .map(|&f| vec![Rational::from_integer(1.into()); f])
            .collect();
        CochainMetric {
            weights,
            identity: true,
        }
    }

    /// Weights drawn from `{a/b : 1 ≤ a ≤ 4, 1 ≤ b ≤ 3}`, which keeps the
    /// shared denominators of the Laplacians small.
    pub fn random_diagonal(k: &SimplicialComplex, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = k
            .f_vector()
            .iter()
            .map(|&f| {
                (0..f)
                    .map(|_| {
                        Rational::new(
                            BigInt::from(rng.gen_range(1..=4)),
                            BigInt::from(rng.gen_range(1..=3)),
                        )
                    })
                    .collect()
            })
            .collect();
        CochainMetric {
            weights,
            identity: false,
        }
    }

    pub fn from_spec(k: &SimplicialComplex, spec: MetricSpec) -> Self {
        match spec {
            MetricSpec::Identity => Self::identity(k),
            MetricSpec::Diagonal(seed) => Self::random_diagonal(k, seed),
        }
    }

    pub fn diagonal(k: &SimplicialComplex, weights: Vec<Vec<Rational>>) -> Result<Self> {
        if weights.len() != k.dimension() + 1 {
            return Err(Error::Shape("one weight vector per degree".into()));
        }
        for (deg, w) in weights.iter().enumerate() {
            if w.len() != k.num_faces(deg) {
                return Err(Error::Shape(format!("{} weights in degree {deg}", w.len())));
            }
            if w.iter().any(|x| *x <= Rational::zero()) {
                return Err(Error::NotPositiveDefinite(deg));
            }
        }
        Ok(CochainMetric {
            weights,
            identity: false,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn weights(&self, k: usize) -> &[Rational] {
        &self.weights[k]
    }

    /// `M[k]` as a dense matrix.
    pub fn matrix(&self, k: usize) -> RationalMatrix {
        RationalMatrix::diagonal(&self.weights[k])
    }

    /// Positive definiteness of every `M[k]`, checked through its inertia.
    pub fn is_positive_definite(&self) -> bool {
        self.weights
            .iter()
            .all(|w| w.iter().all(|x| *x > Rational::zero()))
    }

    pub fn inner(&self, a: &Cochain, b: &Cochain) -> Rational {
        assert_eq!(a.degree(), b.degree(), "inner product of different degrees");
        if self.identity {
            a.values().dot(b.values())
        } else {
            a.values()
                .weighted_dot(b.values(), Some(&self.weights[a.degree()]))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDecomposition {
    pub exact: Cochain,
    pub coexact: Cochain,
    pub harmonic: Cochain,
    pub potential: Potential,
}

/// The cochain one non-harmonic part was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Potential {
    /// `exact = dα`.
    Exact(Cochain),
    /// `coexact = δβ`.
    Coexact(Cochain),
    /// `ψ` with `Δψ = ω − Pω`; both parts are read off it.
    Laplacian(Cochain),
    /// Bottom or top degree, where one of the two parts vanishes identically.
    None,
}

impl HodgeDecomposition {
    pub fn sum(&self) -> Result<Cochain> {
        self.exact.add(&self.coexact)?.add(&self.harmonic)
    }
}

/// Inertia of the intersection form evaluated on harmonic representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicSignature {
    pub inertia: Inertia,
    pub signature: i64,
}

/// Codifferentials, Laplacians and harmonic spaces of one complex under one metric.
pub struct Hodge<'a> {
    complex: &'a SimplicialComplex,
    cob: &'a CoboundarySet,
    metric: CochainMetric,
    exec: Execution,
    /// `codiff[k] = δ_k` for `1 ≤ k ≤ n`; index 0 is unused.
    codiff: Vec<SparseMatrix>,
    laplacians: Vec<OnceLock<SparseMatrix>>,
    solvers: Vec<OnceLock<ExactSolver>>,
    /// Normal equations for the projection onto `Im d_{k-1}` or `Im δ_{k+1}`.
    image_solvers: Vec<OnceLock<(Side, SparseMatrix, ExactSolver)>>,
    harmonic: Vec<OnceLock<Vec<Cochain>>>,
    gram_inverse: Vec<OnceLock<RationalMatrix>>,
}

impl<'a> Hodge<'a> {
    pub fn new(
        complex: &'a SimplicialComplex,
        cob: &'a CoboundarySet,
        metric: CochainMetric,
    ) -> Result<Self> {
        Self::with_execution(complex, cob, metric, Execution::default())
    }

    pub fn with_execution(
        complex: &'a SimplicialComplex,
        cob: &'a CoboundarySet,
        metric: CochainMetric,
        exec: Execution,
    ) -> Result<Self> {
        let n = complex.dimension();
        if !metric.is_positive_definite() {
            let bad = (0..=n)
                .find(|&k| metric.weights(k).iter().any(|x| *x <= Rational::zero()))
                .unwrap_or(0);
            return Err(Error::NotPositiveDefinite(bad));
        }
        let mut codiff = vec![SparseMatrix::zeros(0, complex.num_faces(0))];
        for k in 1..=n {
            let dt = cob.d(k - 1)?.transpose();
            let delta = if metric.is_identity() {
                dt
            } else {
                let inv: Vec<Rational> = metric.weights(k - 1).iter().map(|w| w.recip()).collect();
                dt.scale_cols(metric.weights(k))?.scale_rows(&inv)?
            };
            codiff.push(delta);
        }
        Ok(Hodge {
            complex,
            cob,
            metric,
            exec,
            codiff,
            laplacians: cells(n),
            solvers: cells(n),
            image_solvers: cells(n),
            harmonic: cells(n),
            gram_inverse: cells(n),
        })
    }

    pub fn metric(&self) -> &CochainMetric {
        &self.metric
    }

    pub fn dimension(&self) -> usize {
        self.complex.dimension()
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.dimension() {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                dimension: self.dimension(),
            });
        }
        Ok(())
    }

    /// `δ_k : C^k → C^{k-1}`; there is none in degree 0.
    pub fn codifferential(&self, k: usize) -> Result<&SparseMatrix> {
        self.check_degree(k)?;
        if k == 0 {
            return Err(Error::DegreeOutOfRange {
                degree: 0,
                dimension: self.dimension(),
            });
        }
        Ok(&self.codiff[k])
    }

    pub fn apply_d(&self, c: &Cochain) -> Result<Cochain> {
        self.cob.apply_d(c)
    }

    /// `δ c`; zero (and of length 0) on 0-cochains.
    pub fn apply_delta(&self, c: &Cochain) -> Result<Cochain> {
        let k = c.degree();
        self.check_degree(k)?;
        if k == 0 {
            return Ok(Cochain::new(0, QVector::zeros(0)));
        }
        Ok(Cochain::new(k - 1, self.codiff[k].mul_qvec(c.values())?))
    }

    /// `Δ_k = δ_{k+1} d_k + d_{k-1} δ_k`.
    pub fn laplacian(&self, k: usize) -> Result<&SparseMatrix> {
        self.check_degree(k)?;
        if let Some(l) = self.laplacians[k].get() {
            return Ok(l);
        }
        let n = self.dimension();
        let f = self.complex.num_faces(k);
        let mut l = SparseMatrix::zeros(f, f);
        if k < n {
            l = l.add(&self.codiff[k + 1].mul(self.cob.d(k)?)?)?;
        }
        if k > 0 {
            l = l.add(&self.cob.d(k - 1)?.mul(&self.codiff[k])?)?;
        }
        Ok(self.laplacians[k].get_or_init(|| l))
    }

    pub fn apply_laplacian(&self, c: &Cochain) -> Result<Cochain> {
        Ok(Cochain::new(
            c.degree(),
            self.laplacian(c.degree())?.mul_qvec(c.values())?,
        ))
    }

    fn solver(&self, k: usize) -> Result<&ExactSolver> {
        if let Some(s) = self.solvers[k].get() {
            return Ok(s);
        }
        let s = ExactSolver::with_execution(self.laplacian(k)?, self.exec)?;
        Ok(self.solvers[k].get_or_init(|| s))
    }

    /// Certified basis of `Ker Δ_k`.
    pub fn harmonic_basis(&self, k: usize) -> Result<&[Cochain]> {
        self.check_degree(k)?;
        if let Some(h) = self.harmonic[k].get() {
            return Ok(h);
        }
        let h: Vec<Cochain> = self
            .solver(k)?
            .kernel()
            .iter()
            .map(|v| Cochain::new(k, v.clone()))
            .collect();
        Ok(self.harmonic[k].get_or_init(|| h))
    }

    fn gram_inverse(&self, k: usize) -> Result<&RationalMatrix> {
        if let Some(g) = self.gram_inverse[k].get() {
            return Ok(g);
        }
        let h = self.harmonic_basis(k)?;
        let mut g = RationalMatrix::zeros(h.len(), h.len());
        for i in 0..h.len() {
            for j in i..h.len() {
                let v = self.metric.inner(&h[i], &h[j]);
                g[(j, i)] = v.clone();
                g[(i, j)] = v;
            }
        }
        let inv = g
            .inverse()?
            .ok_or_else(|| Error::Internal("harmonic Gram matrix is singular".into()))?;
        Ok(self.gram_inverse[k].get_or_init(|| inv))
    }

    /// M-orthogonal projection onto the harmonic space: `P ω = H G^{-1} H^T M ω`.
    pub fn project(&self, w: &Cochain) -> Result<Cochain> {
        w.check(self.complex)?;
        let k = w.degree();
        let h = self.harmonic_basis(k)?;
        let ginv = self.gram_inverse(k)?;
        let inner: Vec<Rational> = h.iter().map(|x| self.metric.inner(x, w)).collect();
        let coeffs = ginv.mul_vec(&inner)?;
        let mut out = Cochain::zero(self.complex, k);
        for (c, x) in coeffs.iter().zip(h) {
            if !c.is_zero() {
                out = out.add(&x.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Some `ψ` with `Δψ = ω`, or `None` when no solution exists.
    pub fn solve_poisson(&self, w: &Cochain) -> Result<Option<Cochain>> {
        w.check(self.complex)?;
        let k = w.degree();
        Ok(self
            .solver(k)?
            .solve(w.values())?
            .map(|v| Cochain::new(k, v)))
    }

    pub fn solve_poisson_many(&self, ws: &[Cochain]) -> Result<Vec<Option<Cochain>>> {
        let Some(first) = ws.first() else {
            return Ok(Vec::new());
        };
        let k = first.degree();
        if ws.iter().any(|w| w.degree() != k) {
            return Err(Error::Shape(
                "mixed degrees in a batched Poisson solve".into(),
            ));
        }
        let values: Vec<QVector> = ws.iter().map(|w| w.values().clone()).collect();
        Ok(self
            .solver(k)?
            .solve_many(&values)?
            .into_iter()
            .map(|v| v.map(|v| Cochain::new(k, v)))
            .collect())
    }

    /// Degree in which the non-harmonic part of a `k`-cochain is split by
    /// solving on the smaller neighbouring cochain space.
    fn side(&self, k: usize) -> Option<Side> {
        let n = self.dimension();
        if k == 0 || k == n {
            return None;
        }
        let f = |j| self.complex.num_faces(j);
        Some(if f(k - 1) <= f(k + 1) {
            Side::Exact
        } else {
            Side::Coexact
        })
    }

    /// For [`Side::Exact`]: `A = M_{k-1} δ_k` and the solver of `A d_{k-1}`.
    /// For [`Side::Coexact`]: `A = d_k M_k^{-1}` and the solver of `A d_kᵀ`,
    /// whose right-hand side is `d_k ω`.
    fn image_solver(&self, k: usize, side: Side) -> Result<&(Side, SparseMatrix, ExactSolver)> {
        if let Some(s) = self.image_solvers[k].get() {
            return Ok(s);
        }
        let (a, gram) = match side {
            Side::Exact => {
                let d = self.cob.d(k - 1)?;
                let a = d.transpose().scale_cols(self.metric.weights(k))?;
                let g = a.mul(d)?;
                (a, g)
            }
            Side::Coexact => {
                let d = self.cob.d(k)?;
                let inv: Vec<Rational> = self.metric.weights(k).iter().map(|w| w.recip()).collect();
                let a = d.scale_cols(&inv)?;
                let g = a.mul(&d.transpose())?;
                (a, g)
            }
        };
        let solver = ExactSolver::with_execution(&gram, self.exec)?;
        Ok(self.image_solvers[k].get_or_init(|| (side, a, solver)))
    }

    /// `ω = exact + coexact + Pω`. One of the first two parts comes from the
    /// normal equations of the orthogonal projection onto `Im d` or `Im δ`;
    /// the other is the remainder, which is certified to lie in its image.
    pub fn decompose(&self, w: &Cochain) -> Result<HodgeDecomposition> {
        Ok(self
            .decompose_many(std::slice::from_ref(w))?
            .pop()
            .expect("one decomposition"))
    }

    /// Batched [`decompose`](Self::decompose); all inputs must share a degree.
    pub fn decompose_many(&self, ws: &[Cochain]) -> Result<Vec<HodgeDecomposition>> {
        let Some(first) = ws.first() else {
            return Ok(Vec::new());
        };
        let k = first.degree();
        if ws.iter().any(|w| w.degree() != k) {
            return Err(Error::Shape(
                "mixed degrees in a batched decomposition".into(),
            ));
        }
        let harmonic = ws
            .iter()
            .map(|w| self.project(w))
            .collect::<Result<Vec<_>>>()?;
        let rests = ws
            .iter()
            .zip(&harmonic)
            .map(|(w, h)| w.sub(h))
            .collect::<Result<Vec<_>>>()?;
        let zero = Cochain::zero(self.complex, k);
        let Some(side) = self.side(k) else {
            let top = k == self.dimension();
            return rests
                .into_iter()
                .zip(harmonic)
                .map(|(r, h)| {
                    let (exact, coexact) = if top {
                        (r, zero.clone())
                    } else {
                        (zero.clone(), r)
                    };
                    let d = HodgeDecomposition {
                        exact,
                        coexact,
                        harmonic: h,
                        potential: Potential::None,
                    };
                    self.certify(d)
                })
                .collect();
        };
        let (_, a, solver) = self.image_solver(k, side)?;
        let rhs_map = match side {
            Side::Exact => a,
            Side::Coexact => self.cob.d(k)?,
        };
        let rhs = rests
            .iter()
            .map(|r| rhs_map.mul_qvec(r.values()))
            .collect::<Result<Vec<_>>>()?;
        let solutions = solver.solve_many(&rhs)?;
        let mut out = Vec::with_capacity(ws.len());
        for ((r, h), x) in rests.into_iter().zip(harmonic).zip(solutions) {
            let x = x.ok_or_else(|| Error::Internal("normal equations are inconsistent".into()))?;
            let d = match side {
                Side::Exact => {
                    let alpha = Cochain::new(k - 1, x);
                    let exact = self.apply_d(&alpha)?;
                    let coexact = r.sub(&exact)?;
                    HodgeDecomposition {
                        exact,
                        coexact,
                        harmonic: h,
                        potential: Potential::Exact(alpha),
                    }
                }
                Side::Coexact => {
                    // x = M_{k+1} β
                    let inv: Vec<Rational> = self
                        .metric
                        .weights(k + 1)
                        .iter()
                        .map(|w| w.recip())
                        .collect();
                    let beta = Cochain::new(k + 1, x.scale_entries(&inv));
                    let coexact = self.apply_delta(&beta)?;
                    let exact = r.sub(&coexact)?;
                    HodgeDecomposition {
                        exact,
                        coexact,
                        harmonic: h,
                        potential: Potential::Coexact(beta),
                    }
                }
            };
            out.push(self.certify(d)?);
        }
        Ok(out)
    }

    /// Exact part closed, coexact part coclosed, harmonic part harmonic, and
    /// the first two orthogonal to the harmonic space. Since `Ker d = Im d ⊕ H`
    /// and `Ker δ = Im δ ⊕ H`, this places every part in its own summand.
    fn certify(&self, d: HodgeDecomposition) -> Result<HodgeDecomposition> {
        let k = d.harmonic.degree();
        let h = self.harmonic_basis(k)?;
        let orthogonal = |c: &Cochain| h.iter().all(|x| self.metric.inner(x, c).is_zero());
        let closed = k == self.dimension() || self.apply_d(&d.exact)?.is_zero();
        let coclosed = k == 0 || self.apply_delta(&d.coexact)?.is_zero();
        let harmonic = self.apply_laplacian(&d.harmonic)?.is_zero();
        if closed && coclosed && harmonic && orthogonal(&d.exact) && orthogonal(&d.coexact) {
            Ok(d)
        } else {
            Err(Error::Internal(
                "Hodge decomposition failed its certificate".into(),
            ))
        }
    }

    /// The same decomposition read off `ψ = Δ^{-1}(ω − Pω)`:
    /// `ω = dδψ + δdψ + Pω`.
    pub fn decompose_via_poisson(&self, w: &Cochain) -> Result<HodgeDecomposition> {
        let harmonic = self.project(w)?;
        let rest = w.sub(&harmonic)?;
        let psi = self
            .solve_poisson(&rest)?
            .ok_or_else(|| Error::Internal("ω − Pω is not in the image of Δ".into()))?;
        let k = w.degree();
        let n = self.dimension();
        let exact = if k > 0 {
            self.apply_d(&self.apply_delta(&psi)?)?
        } else {
            Cochain::zero(self.complex, 0)
        };
        let coexact = if k < n {
            self.apply_delta(&self.apply_d(&psi)?)?
        } else {
            Cochain::zero(self.complex, n)
        };
        Ok(HodgeDecomposition {
            exact,
            coexact,
            harmonic,
            potential: Potential::Laplacian(psi),
        })
    }

    /// Decomposes `ω` and checks that the parts sum to it and are pairwise orthogonal.
    pub fn verify_decomposition(&self, d: &HodgeDecomposition, w: &Cochain) -> Result<bool> {
        let m = &self.metric;
        Ok(d.sum()? == *w
            && m.inner(&d.exact, &d.coexact).is_zero()
            && m.inner(&d.exact, &d.harmonic).is_zero()
            && m.inner(&d.coexact, &d.harmonic).is_zero())
    }

    /// `P(ω + dφ) = P(ω)` for a cocycle `ω`.
    pub fn class_projection_welldefined(&self, w: &Cochain, phi: &Cochain) -> Result<bool> {
        if !self.cob.is_cocycle(w)? {
            return Err(Error::NotCocycle);
        }
        let moved = w.add(&self.apply_d(phi)?)?;
        Ok(self.project(&moved)? == self.project(w)?)
    }

    /// For cocycles: `Pω = Pη` exactly when `ω − η` is a coboundary.
    pub fn projection_detects_classes(&self, w: &Cochain, eta: &Cochain) -> Result<bool> {
        let same_projection = self.project(w)? == self.project(eta)?;
        let cohomologous = self.cob.is_coboundary(&w.sub(eta)?)?;
        Ok(same_projection == cohomologous)
    }

    /// Inertia of the cup-product pairing on middle harmonic cochains.
    pub fn harmonic_signature(&self) -> Result<HarmonicSignature> {
        let n = self.dimension();
        if n % 4 != 0 {
            return Err(Error::NotMultipleOfFour(n));
        }
        let h = self.harmonic_basis(n / 2)?;
        let q = pairing_matrix(self.complex, h, h)?;
        let inertia = q.inertia()?;
        Ok(HarmonicSignature {
            signature: inertia.signature(),
            inertia,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Exact,
    Coexact,
}

fn cells<T>(n: usize) -> Vec<OnceLock<T>> {
    (0..=n).map(|_| OnceLock::new()).collect()
}
