mod common;

use num::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use siglab::flatmodel::*;
use siglab::par::Execution;
use siglab::Error;

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn star_squares_up_to_eight() {
    for n in 0..=8 {
        assert!(star_square_holds(n), "n = {n}");
        assert!(volume_pairing_matches_inner(n).unwrap(), "n = {n}");
    }
}

#[test]
fn chirality_is_an_involution_in_even_dimension() {
    for n in [2, 4, 6, 8] {
        assert!(chirality_squares_to_identity(n).unwrap(), "n = {n}");
        let s = chirality_split(n).unwrap();
        assert!(s.is_complete(n));
        assert_eq!((s.plus, s.minus), (1 << (n - 1), 1 << (n - 1)));
    }
    for n in [1, 3, 5] {
        assert!(matches!(
            chirality_squares_to_identity(n),
            Err(Error::OddDimension(_))
        ));
        assert!(GradedForm::one(n).chirality().is_err());
    }
}

#[test]
fn chirality_on_the_volume_and_unit() {
    // J1 = i^{n/2} vol
    let one = GradedForm::one(4);
    assert_eq!(
        one.chirality().unwrap(),
        GradedForm::volume(4).scale(&real(-1))
    );
    let two = GradedForm::one(2);
    assert_eq!(
        two.chirality().unwrap(),
        GradedForm::volume(2).scale(&i_pow(1))
    );
}

#[test]
fn codifferential_star_formula_by_parity() {
    for n in [2, 4] {
        assert!(
            codifferential_conventions(n, 1)
                .unwrap()
                .iter()
                .all(|c| c.star_formula_agrees),
            "n = {n}"
        );
    }
    let odd: Vec<bool> = codifferential_conventions(3, 1)
        .unwrap()
        .iter()
        .map(|c| c.star_formula_agrees)
        .collect();
    assert_eq!(odd, vec![true, false, true]);
    for n in 1..=4 {
        assert!(adjointness_holds(n, 1), "n = {n}");
    }
}

#[test]
fn commutation_identities_in_even_dimension() {
    for n in [2, 4] {
        for p in 1..=n {
            let c = commutation_check(p, n, 1).unwrap();
            assert!(c.holds(), "n = {n}, p = {p}: {c:?}");
        }
    }
}

#[test]
fn dirac_structure() {
    for n in [2, 4] {
        assert!(anticommutation_check(n, 1).unwrap());
        assert!(eigenspace_interchange_check(n, 1).unwrap());
        let l = laplacian_checks(n, 1).unwrap();
        assert!(l.all(), "{l:?}");
        assert_eq!(l.commutes_with_chirality, Some(true));
        assert!(harmonic_algebra_check(n, 1).unwrap());
    }
    let odd = laplacian_checks(3, 1).unwrap();
    assert_eq!(odd.commutes_with_chirality, None);
    assert!(odd.all());
}

#[test]
fn index_vanishes_on_the_flat_torus() {
    for cutoff in [0, 1, 2] {
        let r = signature_operator_index(4, cutoff).unwrap();
        assert_eq!(r.index, 0, "cutoff {cutoff}");
        assert_eq!((r.kernel_plus, r.kernel_minus), (8, 8));
        assert_eq!((r.harmonic_plus, r.harmonic_minus), (3, 3));
        assert!(r.harmonic_only_constant);
        assert!(r.matches_harmonic_split());
    }
    let r = signature_operator_index(8, 0).unwrap();
    assert_eq!((r.index, r.harmonic_plus, r.harmonic_minus), (0, 35, 35));
    assert!(matches!(
        signature_operator_index(6, 0),
        Err(Error::NotMultipleOfFour(6))
    ));
}

#[test]
fn index_does_not_depend_on_execution() {
    let p = signature_operator_index_with(4, 1, Execution::Parallel).unwrap();
    let s = signature_operator_index_with(4, 1, Execution::Sequential).unwrap();
    assert_eq!(p, s);
}

#[test]
fn explicit_self_dual_forms() {
    assert!(self_dual_bases_check());
    let (plus, minus) = self_dual_bases();
    for a in &plus {
        for b in &minus {
            assert!(a.inner(b).is_zero());
            // self-dual ∧ anti-self-dual vanishes
            assert!(a.wedge(b).unwrap().is_zero());
        }
        assert!(!a.wedge(a).unwrap().is_zero());
    }
}

fn homogeneous(n: usize) -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 0..=n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_square_on_random_forms((seed, p) in homogeneous(6), n in 0usize..=6) {
        let p = p.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = GradedForm::random_homogeneous(n, p, &mut rng);
        prop_assert_eq!(w.star().star(), w.scale(&real(sign(p * (n - p)))));
    }

    #[test]
    fn wedge_is_graded_commutative((seed, p) in homogeneous(5), q in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = GradedForm::random_homogeneous(5, p, &mut rng);
        let b = GradedForm::random_homogeneous(5, q, &mut rng);
        let c = GradedForm::random(5, &mut rng);
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&real(sign(p * q))));
        prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
    }

    #[test]
    fn inner_product_through_the_volume(seed in any::<u64>(), p in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = GradedForm::random_homogeneous(4, p, &mut rng);
        let b = GradedForm::random_homogeneous(4, p, &mut rng);
        prop_assert_eq!(a.volume_pairing(&b).unwrap(), a.inner(&b));
    }

    #[test]
    fn dirac_is_self_adjoint_and_odd(seed in any::<u64>(), modes in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FourierForm::random(4, 1, modes, &mut rng);
        let b = FourierForm::random(4, 1, modes, &mut rng);
        prop_assert_eq!(a.d().inner(&b).unwrap(), a.inner(&b.delta()).unwrap());
        prop_assert_eq!(a.dirac().inner(&b).unwrap(), a.inner(&b.dirac()).unwrap());
        let jd = a.dirac().chirality().unwrap();
        let dj = a.chirality().unwrap().dirac();
        prop_assert!(jd.add(&dj).unwrap().is_zero());
        prop_assert_eq!(a.laplacian().star(), a.star().laplacian());
    }

    #[test]
    fn chirality_preserves_the_inner_product(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FourierForm::random(2, 2, 4, &mut rng);
        let b = FourierForm::random(2, 2, 4, &mut rng);
        prop_assert_eq!(a.chirality().unwrap().inner(&b.chirality().unwrap()).unwrap(), a.inner(&b).unwrap());
        prop_assert_eq!(a.chirality().unwrap().chirality().unwrap(), a);
    }
}
