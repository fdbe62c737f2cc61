use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use siglab::chain::{CoboundarySet, Cochain};
use siglab::cohomology::{
    intersection_form_with, representative_independence_check, signature_with, SignatureReport,
};
use siglab::complex::SimplicialComplex;
use siglab::flatmodel::{self, MAX_DIMENSION};
use siglab::hodge::{CochainMetric, Hodge, MetricSpec};
use siglab::linalg::{int, RationalMatrix};
use siglab::maps::{cup_homomorphism_check, induced_maps, PrismComplex, SimplicialMap};
use siglab::{io, library, Error, Result};

use crate::report::{
    ComplexSummary, FlatSummary, HodgeSummary, MapsSummary, Report, SignatureSummary,
    VALIDATION_LABEL,
};

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NON_ORIENTABLE: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NonOrientable(_) => EXIT_NON_ORIENTABLE,
        Error::NotMultipleOfFour(_) => EXIT_DIMENSION,
        _ => EXIT_INVALID,
    }
}

/// Runs `body`, then turns its error (if any) and the check results into an exit code.
fn finish(mut report: Report, body: impl FnOnce(&mut Report) -> Result<()>) -> Report {
    report.exit_code = match body(&mut report) {
        Ok(()) if report.all_pass() => 0,
        Ok(()) => EXIT_CHECK_FAILED,
        Err(e) => {
            report.error = Some(e.to_string());
            exit_code_for(&e)
        }
    };
    report
}

/// Seed for every randomized check, from `SIGLAB_SEED` (default 0).
pub fn seed() -> Result<u64> {
    match std::env::var("SIGLAB_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("SIGLAB_SEED={s:?} is not an integer"))),
        Err(_) => Ok(0),
    }
}

fn rng() -> Result<ChaCha8Rng> {
    Ok(ChaCha8Rng::seed_from_u64(seed()?))
}

fn id_of(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn summarize(
    id: &str,
    k: &SimplicialComplex,
    cob: &CoboundarySet,
    validate: bool,
) -> Result<ComplexSummary> {
    let mut s = ComplexSummary {
        id: id.into(),
        dimension: k.dimension(),
        f_vector: k.f_vector(),
        betti: cob.betti_numbers(),
        euler_characteristic: cob.euler_characteristic()?,
        face_euler_characteristic: k.face_euler_characteristic(),
        ..Default::default()
    };
    if validate {
        let d = k.validate_closed();
        s.closed = Some(d.is_closed());
        s.bad_faces = d.bad_faces.len();
        s.connected = Some(d.connected);
    }
    Ok(s)
}

/// Validated closed complex with an orientation: the file's if present,
/// otherwise the propagated one.
fn oriented(
    report: &mut Report,
    k: &SimplicialComplex,
    reverse: bool,
) -> Result<(SimplicialComplex, String)> {
    let closed = k.validate_closed().is_closed();
    report.check(VALIDATION_LABEL, closed);
    if !closed {
        return Err(Error::NotClosed);
    }
    let (mut k, mut tag) = match k.orientation() {
        Some(_) => (k.clone(), "from file".to_string()),
        None => (k.orient()?, "first top simplex +1".to_string()),
    };
    report.check(
        "orientation coherent on every shared face",
        k.is_coherent(k.orientation().unwrap()),
    );
    if reverse {
        k = k.reversed();
        tag.push_str(", reversed");
    }
    Ok((k, tag))
}

fn signature_checks(
    report: &mut Report,
    k: &SimplicialComplex,
    cob: &CoboundarySet,
    tag: &str,
) -> Result<SignatureReport> {
    let sig = signature_with(k, cob)?;
    report.signature = Some(SignatureSummary {
        signature: sig.signature,
        orientation: tag.into(),
        first_simplex_sign: sig.first_simplex_sign,
        inertia: sig.inertia,
        trace_of_sign: sig.trace_of_sign,
        determinant: sig.determinant.clone(),
    });
    let independent = representative_independence_check(k, cob, 2, &mut rng()?)?;
    report.check("Q does not depend on the representatives", independent);
    report.check("Q symmetric iff n=4k", sig.symmetric);
    report.check_with(
        "Q is not degenerate",
        sig.parity.nondegenerate,
        format!("det Q = {}", sig.determinant),
    );
    report.check("χ(M) = b_2k mod 2", sig.parity.euler_matches_middle_betti);
    report.check(
        "b_2k = σ(M) mod 2",
        sig.parity.middle_betti_matches_signature,
    );
    report.check("σ(M) = Trace(sign(Q))", sig.trace_of_sign == sig.signature);
    Ok(sig)
}

/// Middle pairing for `n ≡ 2 (mod 4)`: antisymmetric and nondegenerate.
fn antisymmetric_checks(
    report: &mut Report,
    k: &SimplicialComplex,
    cob: &CoboundarySet,
) -> Result<()> {
    let form = intersection_form_with(k, cob)?;
    report.check(
        "Q does not depend on the representatives",
        representative_independence_check(k, cob, 2, &mut rng()?)?,
    );
    let symmetric = form.is_symmetric() && form.rank() > 0;
    report.check_with(
        "Q symmetric iff n=4k",
        form.is_antisymmetric() && !symmetric,
        "middle pairing is antisymmetric",
    );
    report.check(
        "Q is not degenerate",
        form.rank() == 0 || form.determinant() != int(0),
    );
    Ok(())
}

fn hodge_checks(
    report: &mut Report,
    k: &SimplicialComplex,
    cob: &CoboundarySet,
    metric: MetricSpec,
    samples: usize,
    signature: Option<i64>,
) -> Result<()> {
    let n = k.dimension();
    let h = Hodge::new(k, cob, CochainMetric::from_spec(k, metric))?;
    let mut rng = rng()?;
    let mut dims = Vec::new();
    for d in 0..=n {
        dims.push(h.harmonic_basis(d)?.len());
    }
    report.check("dim Ker Δ_k = b_k", dims == cob.betti_numbers());

    let mut checked = 0;
    let mut residuals_zero = true;
    for d in 0..=n {
        let ws: Vec<Cochain> = (0..samples)
            .map(|_| Cochain::random(k, d, &mut rng))
            .collect();
        for (w, dec) in ws.iter().zip(h.decompose_many(&ws)?) {
            residuals_zero &= h.verify_decomposition(&dec, w)?;
            checked += 1;
        }
    }
    report.check(
        "ω = exact + coexact + harmonic, mutually orthogonal",
        residuals_zero,
    );

    let mut poisson = true;
    for d in 0..=n {
        // a harmonic right-hand side has no solution; one with zero projection does
        if let Some(z) = h.harmonic_basis(d)?.first() {
            poisson &= !h.project(z)?.is_zero() && h.solve_poisson(z)?.is_none();
        }
        let r = Cochain::random(k, d, &mut rng);
        let w = r.sub(&h.project(&r)?)?;
        poisson &= match h.solve_poisson(&w)? {
            Some(psi) => h.apply_laplacian(&psi)? == w,
            None => false,
        };
    }
    report.check(
        "Δψ = ω is solvable iff the harmonic projection of ω vanishes",
        poisson,
    );

    let mut harmonic_signature = None;
    if let Some(s) = signature {
        let hs = h.harmonic_signature()?;
        report.check_with(
            "σ from harmonic representatives equals σ(M)",
            hs.signature == s,
            format!("harmonic σ = {}", hs.signature),
        );
        harmonic_signature = Some(hs.signature);
    }
    report.hodge = Some(HodgeSummary {
        metric: metric.to_string(),
        harmonic_dimensions: dims,
        decompositions_checked: checked,
        residuals_zero,
        harmonic_signature,
    });
    Ok(())
}

pub fn report(path: &Path, metric: MetricSpec, reverse: bool, samples: usize) -> Report {
    finish(Report::new("report"), |report| {
        let k = io::load_complex(path)?;
        let cob = CoboundarySet::new(&k)?;
        report.complex = Some(summarize(&id_of(path), &k, &cob, true)?);
        let (k, tag) = oriented(report, &k, reverse)?;
        let c = report.complex.as_ref().unwrap();
        report.check(
            "Σ(−1)^k b_k = Σ(−1)^k f_k",
            c.euler_characteristic == c.face_euler_characteristic,
        );
        let n = k.dimension();
        let mut signature = None;
        if n % 4 == 0 {
            signature = Some(signature_checks(report, &k, &cob, &tag)?.signature);
        } else if n % 2 == 0 {
            antisymmetric_checks(report, &k, &cob)?;
        } else {
            report.notice(format!("dimension {n} is odd: no middle-degree pairing"));
        }
        hodge_checks(report, &k, &cob, metric, samples, signature)?;
        if n % 4 != 0 {
            return Err(Error::NotMultipleOfFour(n));
        }
        Ok(())
    })
}

pub fn betti(path: &Path) -> Report {
    finish(Report::new("betti"), |report| {
        let k = io::load_complex(path)?;
        let cob = CoboundarySet::new(&k)?;
        let s = summarize(&id_of(path), &k, &cob, true)?;
        report.check(
            "Σ(−1)^k b_k = Σ(−1)^k f_k",
            s.euler_characteristic == s.face_euler_characteristic,
        );
        report.complex = Some(s);
        Ok(())
    })
}

pub fn signature(path: &Path, reverse: bool) -> Report {
    finish(Report::new("signature"), |report| {
        let k = io::load_complex(path)?;
        let cob = CoboundarySet::new(&k)?;
        report.complex = Some(summarize(&id_of(path), &k, &cob, true)?);
        let (k, tag) = oriented(report, &k, reverse)?;
        let n = k.dimension();
        if n % 4 != 0 {
            return Err(Error::NotMultipleOfFour(n));
        }
        signature_checks(report, &k, &cob, &tag)?;
        Ok(())
    })
}

pub fn hodge_check(path: &Path, metric: MetricSpec, samples: usize) -> Report {
    finish(Report::new("hodge-check"), |report| {
        let k = io::load_complex(path)?;
        let cob = CoboundarySet::new(&k)?;
        report.complex = Some(summarize(&id_of(path), &k, &cob, false)?);
        let mut signature = None;
        let mut oriented_k = k.clone();
        if k.dimension() % 4 == 0 {
            match k
                .orientation()
                .map_or_else(|| k.orient(), |_| Ok(k.clone()))
            {
                Ok(o) => {
                    signature = Some(signature_with(&o, &cob)?.signature);
                    oriented_k = o;
                }
                Err(e) => report.notice(format!("no signature comparison: {e}")),
            }
        }
        hodge_checks(report, &oriented_k, &cob, metric, samples, signature)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatScope {
    All,
    /// Exterior-algebra identities only.
    Star,
    Index,
}

pub fn flat(n: usize, cutoff: u32, scope: FlatScope) -> Report {
    let command = match scope {
        FlatScope::All => "flatmodel",
        FlatScope::Star => "star-check",
        FlatScope::Index => "index",
    };
    finish(Report::new(command), |report| {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::InvalidArgument(format!(
                "n = {n} outside 1..={MAX_DIMENSION}"
            )));
        }
        let even = n % 2 == 0;
        let mut summary = FlatSummary {
            n,
            cutoff,
            ..Default::default()
        };
        if !even {
            report.notice(format!(
                "n odd ({n}): chirality J is not defined, J checks skipped"
            ));
        }
        if scope != FlatScope::Index {
            report.check("** = (−1)^{p(n−p)}", flatmodel::star_square_holds(n));
            report.check(
                "⟨α, β⟩ vol = α ∧ *β",
                flatmodel::volume_pairing_matches_inner(n)?,
            );
            if even {
                report.check("J² = 1", flatmodel::chirality_squares_to_identity(n)?);
                let split = flatmodel::chirality_split(n)?;
                report.check_with(
                    "J has eigenvalues ±1 splitting Λ",
                    split.is_complete(n),
                    format!("+1: {}, −1: {}", split.plus, split.minus),
                );
                summary.chirality_split = Some(split);
            } else {
                report.skip("J² = 1", "n odd");
                report.skip("J has eigenvalues ±1 splitting Λ", "n odd");
            }
            if n == 4 {
                report.check(
                    "explicit self-dual and anti-self-dual bases of Harm²±",
                    flatmodel::self_dual_bases_check(),
                );
            }
        }
        if scope == FlatScope::All {
            report.check(
                "δ is the L² adjoint of d",
                flatmodel::adjointness_holds(n, cutoff),
            );
            let conv = flatmodel::codifferential_conventions(n, cutoff)?;
            summary.star_codifferential_degrees = conv
                .iter()
                .filter(|c| c.star_formula_agrees)
                .map(|c| c.degree)
                .collect();
            let agrees = conv.iter().all(|c| c.star_formula_agrees);
            if even {
                report.check("δ = −*d*", agrees);
            } else {
                report.skip(
                    "δ = −*d*",
                    format!(
                        "n odd: agrees in degrees {:?}",
                        summary.star_codifferential_degrees
                    ),
                );
            }
            let lap = flatmodel::laplacian_checks(n, cutoff)?;
            report.check(
                "d² = 0 and δ² = 0",
                lap.d_squared_zero && lap.delta_squared_zero,
            );
            report.check(
                "Δ = dδ + δd = D², scalar |ξ|² on each mode",
                lap.dirac_square && lap.scalar_on_modes,
            );
            report.check("Δ commutes with *", lap.commutes_with_star);
            for p in 1..=n {
                let c = flatmodel::commutation_check(p, n, cutoff)?;
                let (a, b) = (
                    format!("*δ = (−1)^{{(n−p+1)(p−1)+1}} d* on {p}-forms"),
                    format!("*d = (−1)^{{p(n−p)+1}} δ* on {p}-forms"),
                );
                if even {
                    report.check(a, c.star_delta);
                    report.check(b, c.star_d);
                } else {
                    report.skip(a, format!("n odd; holds: {}", c.star_delta));
                    report.skip(b, format!("n odd; holds: {}", c.star_d));
                }
            }
            if even {
                report.check(
                    "Δ commutes with J",
                    lap.commutes_with_chirality == Some(true),
                );
                report.check("JD + DJ = 0", flatmodel::anticommutation_check(n, cutoff)?);
                report.check(
                    "D interchanges the ±1 eigenspaces of J",
                    flatmodel::eigenspace_interchange_check(n, cutoff)?,
                );
                report.check(
                    "harmonic forms are the constants, closed under ∧ and *",
                    flatmodel::harmonic_algebra_check(n, cutoff)?,
                );
            } else {
                report.skip("Δ commutes with J", "n odd");
                report.skip("JD + DJ = 0", "n odd");
                report.skip("D interchanges the ±1 eigenspaces of J", "n odd");
            }
        }
        if scope != FlatScope::Star {
            if n % 4 == 0 {
                let idx = flatmodel::signature_operator_index(n, cutoff)?;
                report.check_with(
                    "Ind(D₊) = dim Harm₊ − dim Harm₋ = σ",
                    idx.matches_harmonic_split() && idx.index == 0,
                    format!("index {}; σ of the flat torus is 0", idx.index),
                );
                summary.index = Some(idx);
            } else if scope == FlatScope::Index {
                return Err(Error::NotMultipleOfFour(n));
            } else {
                report.skip(
                    "Ind(D₊) = dim Harm₊ − dim Harm₋ = σ",
                    format!("n = {n} is not a multiple of 4"),
                );
            }
        }
        report.flatmodel = Some(summary);
        Ok(())
    })
}

fn induced_shapes(ms: &[RationalMatrix]) -> Vec<(usize, usize, usize)> {
    ms.iter().map(|m| (m.rows(), m.cols(), m.rank())).collect()
}

fn orient_if_possible(k: &SimplicialComplex) -> Option<SimplicialComplex> {
    match k.orientation() {
        Some(_) => Some(k.clone()),
        None => k.orient().ok(),
    }
}

fn map_checks(report: &mut Report, path: &Path, samples: usize) -> Result<()> {
    let doc: io::MapDocument = serde_json::from_str(&fs::read_to_string(path)?)?;
    let f = io::load_map(path)?;
    report.check("vertex map is simplicial", true);
    let (src, tgt) = (f.source(), f.target());
    let (cs, ct) = (CoboundarySet::new(src)?, CoboundarySet::new(tgt)?);
    let induced = induced_maps(&f, &cs, &ct)?;
    let mut rng = rng()?;
    let top = src.dimension().min(tgt.dimension());
    let mut commutes = true;
    let mut checked = 0;
    for d in 0..top {
        for _ in 0..samples {
            let beta = Cochain::random(tgt, d, &mut rng);
            commutes &= f.pullback(&ct.apply_d(&beta)?)? == cs.apply_d(&f.pullback(&beta)?)?;
            checked += 1;
        }
    }
    report.check("f*(dβ) = d(f*β)", commutes);
    report.check(
        "F*(a ⌣ b) = F*(a) ⌣ F*(b) on classes",
        cup_homomorphism_check(&f, &cs, &ct)?,
    );
    let mut degree = None;
    if f.is_isomorphism() {
        let inverse = induced_maps(&f.inverse()?, &ct, &cs)?;
        let mut inverts = true;
        for (a, b) in induced.iter().zip(&inverse) {
            inverts &= a.mul(b)? == RationalMatrix::identity(a.rows())
                && b.mul(a)? == RationalMatrix::identity(b.rows());
        }
        report.check("(f⁻¹)* = (f*)⁻¹", inverts);
        if let (Some(s), Some(t)) = (orient_if_possible(src), orient_if_possible(tgt)) {
            let g = SimplicialMap::from_vertex_list(s.clone(), t.clone(), &f.vertex_list())?;
            let d = g.degree()?;
            degree = Some(d);
            if s.dimension() % 4 == 0 {
                let (a, b) = (
                    signature_with(&s, &cs)?.signature,
                    signature_with(&t, &ct)?.signature,
                );
                report.check_with(
                    "isomorphisms preserve σ up to the orientation sign",
                    a == d * b,
                    format!("σ(source) = {a}, σ(target) = {b}, degree {d}"),
                );
            }
        }
    } else {
        report.notice("not an isomorphism: invertibility and σ checks skipped");
    }
    report.maps = Some(MapsSummary {
        kind: "vertex map".into(),
        source: summarize(&id_of(Path::new(&doc.source)), src, &cs, false)?,
        target: summarize(&id_of(Path::new(&doc.target)), tgt, &ct, false)?,
        induced: induced_shapes(&induced),
        degree,
        cochains_checked: checked,
    });
    Ok(())
}

fn prism_checks(report: &mut Report, path: &Path, samples: usize) -> Result<()> {
    let k = io::load_complex(path)?;
    let prism = PrismComplex::new(&k)?;
    let kxi = prism.complex();
    let (cb, cp) = (CoboundarySet::new(&k)?, CoboundarySet::new(kxi)?);
    report.check(
        "b_k(K × I) = b_k(K)",
        cb.betti_numbers()[..] == cp.betti_numbers()[..=k.dimension()],
    );
    let (i0, i1, pi) = (
        prism.bottom_inclusion()?,
        prism.top_inclusion()?,
        prism.projection()?,
    );
    let id = SimplicialMap::identity(&k);
    report.check(
        "π∘i₀ = π∘i₁ = id",
        pi.compose(&i0)? == id && pi.compose(&i1)? == id,
    );

    let mut rng = rng()?;
    let mut identity = true;
    let mut checked = 0;
    for d in 0..=kxi.dimension() {
        for _ in 0..samples {
            identity &=
                prism.homotopy_identity_holds(&cp, &cb, &Cochain::random(kxi, d, &mut rng))?;
            checked += 1;
        }
    }
    report.check("dP(η) + P(dη) = i₁*η − i₀*η", identity);
    let mut pulled_back = true;
    for d in 0..=k.dimension() {
        let eta = pi.pullback(&Cochain::random(&k, d, &mut rng))?;
        pulled_back &= i1.pullback(&eta)? == i0.pullback(&eta)?;
    }
    report.check("η = π*ω gives i₁*η = i₀*η", pulled_back);

    let a = induced_maps(&i0, &cb, &cp)?;
    let b = induced_maps(&i1, &cb, &cp)?;
    report.check("i₀ and i₁ induce the same maps on cohomology", a == b);
    let p = induced_maps(&pi, &cp, &cb)?;
    let mut iso = true;
    for (x, y) in a.iter().zip(&p) {
        iso &= y.is_square()
            && y.rank() == y.rows()
            && x.mul(y)? == RationalMatrix::identity(x.rows());
    }
    report.check("π induces isomorphisms with inverse induced by i₀", iso);
    report.maps = Some(MapsSummary {
        kind: "prism".into(),
        source: summarize(&id_of(path), &k, &cb, false)?,
        target: summarize(&format!("{} × I", id_of(path)), kxi, &cp, false)?,
        induced: induced_shapes(&a),
        degree: None,
        cochains_checked: checked,
    });
    Ok(())
}

/// A map document runs the map checks; a complex document runs the prism checks over it.
pub fn maps_check(path: &Path, samples: usize) -> Report {
    finish(Report::new("maps-check"), |report| {
        let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        if value.get("vertex_map").is_some() {
            map_checks(report, path, samples)
        } else {
            prism_checks(report, path, samples)
        }
    })
}

pub enum Generated {
    /// Complex JSON for standard output.
    Document(String),
    Report(Report),
}

fn build(what: &str, inputs: &[PathBuf]) -> Result<SimplicialComplex> {
    let need = |count: usize| {
        if inputs.len() != count {
            return Err(Error::InvalidArgument(format!(
                "generate {what} takes {count} complex files, got {}",
                inputs.len()
            )));
        }
        Ok(())
    };
    match what {
        "product" => {
            need(2)?;
            io::load_complex(&inputs[0])?.product(&io::load_complex(&inputs[1])?)
        }
        "prism" => {
            need(1)?;
            Ok(PrismComplex::new(&io::load_complex(&inputs[0])?)?
                .complex()
                .clone())
        }
        name => {
            need(0)?;
            library::by_name(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown complex {name:?}")))
        }
    }
}

/// `all` writes every bundled data file into `dir`; anything else builds one
/// complex and writes it to `out`, or returns it when `out` is absent.
pub fn generate(what: &str, inputs: &[PathBuf], out: Option<&Path>, dir: &Path) -> Generated {
    if what == "all" {
        return Generated::Report(finish(Report::new("generate"), |report| {
            fs::create_dir_all(dir)?;
            for name in library::NAMES {
                let target = dir.join(format!("{name}.json"));
                io::save_complex(&library::by_name(name).expect("bundled name"), &target)?;
                report.notice(format!("wrote {}", target.display()));
            }
            Ok(())
        }));
    }
    let built = build(what, inputs);
    match (built, out) {
        (Ok(k), None) => Generated::Document(io::emit_complex(&k)),
        (built, out) => Generated::Report(finish(Report::new("generate"), |report| {
            let k = built?;
            let Some(target) = out else { return Ok(()) };
            io::save_complex(&k, target)?;
            report.notice(format!(
                "wrote {} (f-vector {:?})",
                target.display(),
                k.f_vector()
            ));
            Ok(())
        })),
    }
}
