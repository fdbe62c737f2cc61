//! Exterior algebra and trigonometric forms on flat tori.
//!
//! Here the Hodge star is exact, so the sign identities relating `*`, `d`,
//! `δ`, the chirality operator `J` and the Dirac operator `D = d + δ` can be
//! checked as operator identities rather than consequences. Scalars are
//! Gaussian rationals because `J` involves powers of `i`.
//!
//! A form on `ℝⁿ / 2πℤⁿ` is a finite sum `Σ_ξ ω_ξ e^{i ξ·x}`; `d` acts on the
//! mode `ξ` as exterior multiplication by `iξ` and the codifferential is its
//! `L²` adjoint. Truncating to `|ξ_j| ≤ cutoff` gives a finite-dimensional
//! space invariant under `d`, `δ`, `*` and `J`.

mod checks;
mod exterior;
mod fourier;
mod linear;
mod scalar;

pub use checks::{
    adjointness_holds, anticommutation_check, chirality_split, chirality_squares_to_identity,
    codifferential_conventions, commutation_check, eigenspace_interchange_check,
    harmonic_algebra_check, laplacian_checks, self_dual_bases, self_dual_bases_check,
    signature_operator_index, signature_operator_index_with, star_square_holds,
    volume_pairing_matches_inner, ChiralitySplit, CodifferentialConvention, CommutationCheck,
    IndexReport, LaplacianChecks,
};
pub use exterior::{degree_of, shuffle_sign, GradedForm, MultiIndex, MAX_DIMENSION};
pub use fourier::{d_at, delta_at, dirac_at, frequencies, FourierForm, Frequency};
pub use linear::{nullspace, rank};
pub use scalar::{format_gaussian, gaussian, i_pow, random_gaussian, real, Gaussian};
