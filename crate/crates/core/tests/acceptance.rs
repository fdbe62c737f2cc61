//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

mod common;

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num::Zero;
use siglab::chain::{CoboundarySet, Cochain};
use siglab::cohomology::CohomologyBasis;
use siglab::cohomology::{
    intersection_form_with, representative_independence_check, signature_with,
};
use siglab::complex::SimplicialComplex;
use siglab::flatmodel::*;
use siglab::hodge::{CochainMetric, Hodge, MetricSpec};
use siglab::library;
use siglab::linalg::Inertia;
use siglab::maps::{
    cup_homomorphism_check, homotopy_invariance_check, induced_map, PrismComplex, SimplicialMap,
};

use common::snf::oracle;

struct Fixture {
    name: &'static str,
    complex: SimplicialComplex,
    cob: CoboundarySet,
}

fn fixtures() -> Vec<Fixture> {
    [
        ("S4", library::s4()),
        ("CP2_9", library::cp2_9()),
        ("S2xS2", library::s2xs2()),
        ("T4", library::t4()),
    ]
    .into_iter()
    .map(|(name, complex)| {
        let cob = CoboundarySet::new(&complex).expect("closed complex");
        Fixture { name, complex, cob }
    })
    .collect()
}

#[derive(Default)]
struct Findings(Vec<String>, Vec<String>);

impl Findings {
    fn note(&mut self, line: String) {
        self.1.push(line);
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }
}

fn signatures(fx: &[Fixture]) -> Findings {
    let mut f = Findings::default();
    let sig = |x: &Fixture| signature_with(&x.complex, &x.cob).unwrap();
    let s4 = sig(&fx[0]);
    f.expect(s4.signature == 0, || format!("σ(S4) = {}", s4.signature));

    let cp2 = sig(&fx[1]);
    f.expect(cp2.signature.abs() == 1, || {
        format!("σ(CP2_9) = {}", cp2.signature)
    });
    let reversed = fx[1].complex.reversed();
    let r = signature_with(&reversed, &CoboundarySet::new(&reversed).unwrap()).unwrap();
    f.expect(r.signature == -cp2.signature, || {
        format!("reversed σ = {} against {}", r.signature, cp2.signature)
    });

    let s22 = sig(&fx[2]);
    let hyperbolic = Inertia {
        positive: 1,
        negative: 1,
        zero: 0,
    };
    f.expect(s22.signature == 0 && s22.inertia == hyperbolic, || {
        format!("S2xS2: σ {} inertia {:?}", s22.signature, s22.inertia)
    });

    let t4 = sig(&fx[3]);
    f.expect(t4.signature == 0, || format!("σ(T4) = {}", t4.signature));
    f.note(format!(
        "σ: S4 {} | CP2_9 {} (reversed {}) | S2xS2 {} {:?} | T4 {}",
        s4.signature, cp2.signature, r.signature, s22.signature, s22.inertia, t4.signature
    ));
    f
}

fn betti_ledger(fx: &[Fixture]) -> Findings {
    let mut f = Findings::default();
    let expected: [(&[usize], i64); 4] = [
        (&[1, 0, 0, 0, 1], 2),
        (&[1, 0, 1, 0, 1], 3),
        (&[1, 0, 2, 0, 1], 4),
        (&[1, 4, 6, 4, 1], 0),
    ];
    for (x, (betti, chi)) in fx.iter().zip(expected) {
        let ours = x.cob.betti_numbers();
        let euler = x.cob.euler_characteristic().unwrap();
        let o = oracle(&x.complex);
        f.expect(ours == betti, || format!("{}: betti {ours:?}", x.name));
        f.expect(o.betti == betti, || {
            format!("{}: oracle betti {:?}", x.name, o.betti)
        });
        f.expect(euler == chi && o.euler_characteristic() == chi, || {
            format!("{}: χ {euler}", x.name)
        });
        f.expect(x.complex.face_euler_characteristic() == chi, || {
            format!("{}: face χ", x.name)
        });
        f.expect(o.torsion.iter().all(|t| t.iter().all(|&d| d == 1)), || {
            format!("{}: torsion {:?}", x.name, o.torsion)
        });
        f.note(format!("{}: b = {ours:?}, χ = {euler}", x.name));
    }
    f
}

fn form_theorems(fx: &[Fixture]) -> Findings {
    let mut f = Findings::default();
    let mut rng = common::rng(31);
    for x in fx {
        let r = signature_with(&x.complex, &x.cob).unwrap();
        let form = intersection_form_with(&x.complex, &x.cob).unwrap();
        f.expect(
            representative_independence_check(&x.complex, &x.cob, 2, &mut rng).unwrap(),
            || format!("{}: form depends on representatives", x.name),
        );
        f.expect(r.symmetric && form.is_symmetric(), || {
            format!("{}: Q not symmetric", x.name)
        });
        let nondegenerate = form.matrix.rows() == 0 || !form.determinant().is_zero();
        f.expect(nondegenerate && r.parity.nondegenerate, || {
            format!("{}: det Q = {}", x.name, r.determinant)
        });
        f.expect(r.parity.euler_matches_middle_betti, || {
            format!("{}: χ ≢ b_2k mod 2", x.name)
        });
        f.expect(r.parity.middle_betti_matches_signature, || {
            format!("{}: b_2k ≢ σ mod 2", x.name)
        });
        f.expect(r.trace_of_sign == r.signature, || {
            format!("{}: trace {} ≠ σ {}", x.name, r.trace_of_sign, r.signature)
        });
    }
    let t2 = library::t2();
    let cob = CoboundarySet::new(&t2).unwrap();
    let q = intersection_form_with(&t2, &cob).unwrap();
    f.expect(q.is_antisymmetric() && !q.is_symmetric(), || {
        "T2: middle pairing not antisymmetric".into()
    });
    f.expect(!q.determinant().is_zero(), || {
        "T2: middle pairing degenerate".into()
    });
    f.expect(
        representative_independence_check(&t2, &cob, 2, &mut rng).unwrap(),
        || "T2: representatives".into(),
    );
    f
}

fn hodge_suite(fx: &[Fixture]) -> Findings {
    let mut f = Findings::default();
    let mut rng = common::rng(41);
    let seed = common::seed(7);
    for x in fx {
        let expected = signature_with(&x.complex, &x.cob).unwrap();
        for spec in [MetricSpec::Identity, MetricSpec::Diagonal(seed)] {
            let t = Instant::now();
            let tag = format!("{} {spec}", x.name);
            let h = Hodge::new(
                &x.complex,
                &x.cob,
                CochainMetric::from_spec(&x.complex, spec),
            )
            .unwrap();
            let n = x.complex.dimension();
            let dims: Vec<usize> = (0..=n)
                .map(|d| h.harmonic_basis(d).unwrap().len())
                .collect();
            f.expect(dims == x.cob.betti_numbers(), || {
                format!("{tag}: harmonic dimensions {dims:?}")
            });

            let mut count = 0;
            for d in 0..=n {
                let ws: Vec<Cochain> = (0..4)
                    .map(|_| Cochain::random(&x.complex, d, &mut rng))
                    .collect();
                for (w, dec) in ws.iter().zip(h.decompose_many(&ws).unwrap()) {
                    let m = h.metric();
                    let sum = dec
                        .exact
                        .add(&dec.coexact)
                        .unwrap()
                        .add(&dec.harmonic)
                        .unwrap();
                    let orthogonal = m.inner(&dec.exact, &dec.coexact).is_zero()
                        && m.inner(&dec.exact, &dec.harmonic).is_zero()
                        && m.inner(&dec.coexact, &dec.harmonic).is_zero();
                    f.expect(sum == *w && orthogonal, || {
                        format!("{tag}: decomposition in degree {d}")
                    });
                    f.expect(h.verify_decomposition(&dec, w).unwrap(), || {
                        format!("{tag}: verification in degree {d}")
                    });
                    count += 1;
                }
            }
            f.expect(count >= 20, || format!("{tag}: only {count} cochains"));

            for d in [0, n / 2, n] {
                let r = Cochain::random(&x.complex, d, &mut rng);
                let w = r.sub(&h.project(&r).unwrap()).unwrap();
                match h.solve_poisson(&w).unwrap() {
                    Some(psi) => f.expect(h.apply_laplacian(&psi).unwrap() == w, || {
                        format!("{tag}: Δψ ≠ ω in degree {d}")
                    }),
                    None => f.0.push(format!(
                        "{tag}: zero projection but unsolvable in degree {d}"
                    )),
                }
                if let Some(z) = h.harmonic_basis(d).unwrap().first() {
                    let bad = w.add(z).unwrap();
                    f.expect(!h.project(&bad).unwrap().is_zero(), || {
                        format!("{tag}: witness has zero projection")
                    });
                    f.expect(h.solve_poisson(&bad).unwrap().is_none(), || {
                        format!("{tag}: solvable despite projection in degree {d}")
                    });
                }
            }

            let hs = h.harmonic_signature().unwrap();
            f.expect(
                hs.signature == expected.signature && hs.inertia == expected.inertia,
                || {
                    format!(
                        "{tag}: harmonic σ {} against {}",
                        hs.signature, expected.signature
                    )
                },
            );
            f.note(format!(
                "{tag}: dim ker Δ = {dims:?}, {count} decompositions, σ = {} ({:.1?})",
                hs.signature,
                t.elapsed()
            ));
        }
    }
    f
}

fn flat_suite(fx: &[Fixture]) -> Findings {
    let mut f = Findings::default();
    for n in 0..=8 {
        f.expect(star_square_holds(n), || format!("** sign fails at n = {n}"));
    }
    for n in [2, 4, 6, 8] {
        f.expect(chirality_squares_to_identity(n).unwrap(), || {
            format!("J² ≠ 1 at n = {n}")
        });
        let s = chirality_split(n).unwrap();
        f.expect(s.is_complete(n), || {
            format!("J eigenspaces at n = {n}: {s:?}")
        });
    }
    for n in [2, 4] {
        for cutoff in [1, 2] {
            f.expect(anticommutation_check(n, cutoff).unwrap(), || {
                format!("JD + DJ ≠ 0 at n = {n}, cutoff {cutoff}")
            });
            for p in 1..=n {
                let c = commutation_check(p, n, cutoff).unwrap();
                f.expect(c.holds(), || {
                    format!("commutation at n = {n}, p = {p}, cutoff {cutoff}: {c:?}")
                });
            }
        }
    }
    let t4 = signature_with(&fx[3].complex, &fx[3].cob)
        .unwrap()
        .signature;
    let mut indices = Vec::new();
    for cutoff in [1, 2] {
        let r = signature_operator_index(4, cutoff).unwrap();
        f.expect(r.index == t4, || {
            format!("Ind(D₊) = {} at cutoff {cutoff}, σ(T4) = {t4}", r.index)
        });
        f.expect(r.matches_harmonic_split(), || {
            format!("index against harmonic split at cutoff {cutoff}")
        });
        f.expect((r.harmonic_plus, r.harmonic_minus) == (3, 3), || {
            format!(
                "Harm² split {}/{} at cutoff {cutoff}",
                r.harmonic_plus, r.harmonic_minus
            )
        });
        indices.push(r.index);
    }
    f.expect(indices.windows(2).all(|w| w[0] == w[1]), || {
        format!("index depends on the cutoff: {indices:?}")
    });
    f.expect(self_dual_bases_check(), || {
        "explicit self-dual bases".into()
    });
    f.note(format!(
        "Ind(D₊) on T4 at cutoffs 1, 2: {indices:?}; σ(T4 complex) = {t4}"
    ));
    f.note(
        "note: the flat model has σ = 0; nonzero σ is covered by the simplicial complexes".into(),
    );
    f
}

fn shift(k: usize, by: usize) -> HashMap<usize, usize> {
    (0..k).map(|v| (v, (v * by + 1) % k)).collect()
}

fn maps_suite(_: &[Fixture]) -> Findings {
    let mut f = Findings::default();
    let mut rng = common::rng(53);
    let mut count = 0;
    let bases = [
        ("circle", library::circle(3)),
        ("S2", library::boundary_of_simplex(2)),
        ("S4", library::s4()),
    ];
    for (name, base) in &bases {
        let p = PrismComplex::new(base).unwrap();
        let total = CoboundarySet::new(p.complex()).unwrap();
        let cb = CoboundarySet::new(p.base()).unwrap();
        for i in 0..20 {
            let eta = Cochain::random(p.complex(), i % (p.complex().dimension() + 1), &mut rng);
            f.expect(
                p.homotopy_identity_holds(&total, &cb, &eta).unwrap(),
                || format!("{name}: dP + Pd ≠ i₁* − i₀* in degree {}", eta.degree()),
            );
            count += 1;
        }
        f.expect(homotopy_invariance_check(&p).unwrap(), || {
            format!("{name}: i₀* ≠ i₁*")
        });
    }
    f.expect(count >= 50, || format!("only {count} cochains"));

    let k = library::cp2_9();
    let a = SimplicialMap::relabeling(&k, &shift(9, 4)).unwrap();
    let b = SimplicialMap::relabeling(a.target(), &shift(9, 2)).unwrap();
    let ba = b.compose(&a).unwrap();
    for d in 0..=4 {
        let w = Cochain::random(ba.target(), d, &mut rng);
        let lhs = ba.pullback(&w).unwrap();
        f.expect(lhs == a.pullback(&b.pullback(&w).unwrap()).unwrap(), || {
            format!("(b∘a)* ≠ a*∘b* in degree {d}")
        });
    }
    let cob = |k: &SimplicialComplex| CoboundarySet::new(k).unwrap();
    let (c0, c1, c2) = (cob(a.source()), cob(a.target()), cob(b.target()));
    for d in 0..=4 {
        let (h0, h1, h2) = (
            CohomologyBasis::new(&c0, d).unwrap(),
            CohomologyBasis::new(&c1, d).unwrap(),
            CohomologyBasis::new(&c2, d).unwrap(),
        );
        let composed = induced_map(&ba, &h0, &h2).unwrap();
        let product = induced_map(&a, &h0, &h1)
            .unwrap()
            .mul(&induced_map(&b, &h1, &h2).unwrap())
            .unwrap();
        f.expect(composed == product, || {
            format!("induced maps not functorial in degree {d}")
        });
    }

    let s = signature_with(a.source(), &c0).unwrap().signature;
    let t = signature_with(a.target(), &c1).unwrap().signature;
    f.expect(t == s && a.degree().unwrap() == 1, || {
        format!("relabeled CP2_9: σ {t} against {s}")
    });
    f.expect(cup_homomorphism_check(&a, &c0, &c1).unwrap(), || {
        "relabeling is not a ring map".into()
    });
    f.expect(cup_homomorphism_check(&ba, &c0, &c2).unwrap(), || {
        "composite is not a ring map".into()
    });
    let p = PrismComplex::new(&library::t2()).unwrap();
    let (pt, pb) = (cob(p.complex()), cob(p.base()));
    f.expect(
        cup_homomorphism_check(&p.projection().unwrap(), &pt, &pb).unwrap(),
        || "π is not a ring map".into(),
    );
    f.expect(
        cup_homomorphism_check(&p.bottom_inclusion().unwrap(), &pb, &pt).unwrap(),
        || "i₀ is not a ring map".into(),
    );
    f.note(format!(
        "{count} homotopy identities; relabeled CP2_9 σ = {t}"
    ));
    f
}

type Criterion = (&'static str, fn(&[Fixture]) -> Findings);

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("signature values", signatures),
        ("betti numbers and Euler characteristics", betti_ledger),
        ("intersection form theorems", form_theorems),
        ("Hodge suite", hodge_suite),
        ("flat model suite", flat_suite),
        ("maps suite", maps_suite),
    ];
    let t = Instant::now();
    let fx = fixtures();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(&fx)));
        let (problems, notes) = match outcome {
            Ok(f) => (f.0, f.1),
            Err(e) => (
                vec![e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into())],
                Vec::new(),
            ),
        };
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {} ({name}): {verdict} [{:.1?}]",
            i + 1,
            start.elapsed()
        );
        for n in &notes {
            println!("    {n}");
        }
        for p in &problems {
            println!("    - {p}");
        }
        failed += !problems.is_empty() as usize;
    }
    println!(
        "acceptance: {}/{} criteria pass in {:.1?}",
        criteria.len() - failed,
        criteria.len(),
        t.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
