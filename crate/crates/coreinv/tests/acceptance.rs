//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p coreinv --test acceptance -- --nocapture` to
//! see the per-criterion lines.
//!
//! All comparisons are exact; no tolerances exist anywhere in the crate.

use std::time::{Duration, Instant};

use coreinv::{
    bordered_assemble, check_annihilator_theorem, check_bordered_core, check_bordered_dual,
    check_bordered_group, check_core_kernel_theorem, check_ring_unit_core, cokernel,
    core_via_annihilator, core_via_composition, core_via_kernel, core_via_projectors,
    default_annihilator, dual_core_via_cokernel, dual_core_via_composition,
    dual_core_via_projectors, gen_random, group_inverse, index_oracle, inner_inverse, kernel,
    lemma13_witnesses, mp_routes, random_dense, verify, Field, GenInvResult, IndexClass,
    InverseKind, Invertibility, Mat, Morphism, Obj, Scalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn pass(criterion: &str) {
    println!("ACCEPTANCE {criterion}: PASS");
}

fn index1_instances(count: usize, dim: usize, field: Field, seed: u64) -> Vec<Morphism> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rank = rng.random_range(0..=dim);
            gen_random(dim, rank, IndexClass::One, rng.random(), field).unwrap()
        })
        .collect()
}

fn index_ge2_instances(count: usize, dim: usize, field: Field, seed: u64) -> Vec<Morphism> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rank = rng.random_range(1..dim);
            gen_random(dim, rank, IndexClass::GeTwo, rng.random(), field).unwrap()
        })
        .collect()
}

/// Two inner inverses that differ whenever the instance is rank
/// deficient: the canonical one and a kernel/cokernel perturbation.
fn two_inner_inverses(phi: &Morphism) -> Vec<Morphism> {
    let psi = inner_inverse(phi);
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let field = phi.field();
    let ones = Mat::from_fn(lambda.cod().0, phi.dom().0, field, |_, _| Scalar::one(field));
    let counter = Mat::from_fn(phi.cod().0, kappa.dom().0, field, |i, j| {
        Scalar::from_i64((2 * i + j + 1) as i64, field)
    });
    let perturbed = &(&psi + &Morphism::from_mat(lambda.mat() * &ones))
        + &Morphism::from_mat(&counter * kappa.mat());
    vec![psi, perturbed]
}

fn found(result: GenInvResult, what: &str) -> Morphism {
    match result {
        GenInvResult::Found { chi, cert, .. } => {
            assert!(cert.all_hold(), "{what}: certificate failed");
            chi
        }
        GenInvResult::NotInvertible { .. } => panic!("{what}: expected Found"),
    }
}

/// Every core route on one instance; exact agreement and certified
/// results (criteria 1 and 4).
fn check_core_routes(phi: &Morphism) -> Morphism {
    let reference = found(core_via_composition(phi), "composition route");
    for n in [3, 4, 5] {
        let chi = found(core_via_kernel(phi, n).unwrap(), "kernel route");
        assert_eq!(chi, reference, "kernel route n={n} disagrees");
    }
    for psi in two_inner_inverses(phi) {
        let chi = found(core_via_projectors(phi, &psi).unwrap(), "projector route");
        assert_eq!(chi, reference, "projector route disagrees");
    }
    let eta = default_annihilator(phi);
    for n in [2, 3] {
        let chi = found(core_via_annihilator(phi, &eta, n).unwrap(), "annihilator route");
        assert_eq!(chi, reference, "annihilator route n={n} disagrees");
    }
    reference
}

/// Every dual core route on one instance (criteria 2 and 4).
fn check_dual_routes(phi: &Morphism) -> Morphism {
    let reference = found(dual_core_via_composition(phi), "dual composition route");
    for n in [3, 4, 5] {
        let chi = found(dual_core_via_cokernel(phi, n).unwrap(), "cokernel route");
        assert_eq!(chi, reference, "cokernel route n={n} disagrees");
    }
    for psi in two_inner_inverses(phi) {
        let chi = found(dual_core_via_projectors(phi, &psi).unwrap(), "dual projector route");
        assert_eq!(chi, reference, "dual projector route disagrees");
    }
    reference
}

fn assert_within(elapsed: Duration, budget_s: u64, what: &str) {
    assert!(
        elapsed < Duration::from_secs(budget_s),
        "{what} took {elapsed:?}, budget {budget_s}s"
    );
}

#[test]
fn acceptance_01_core_route_agreement() {
    let start = Instant::now();
    for phi in index1_instances(300, 4, Field::Q, 100) {
        check_core_routes(&phi);
    }
    assert_within(start.elapsed(), 30, "criterion 1");
    pass("1 (core route agreement, 300 instances)");
}

#[test]
fn acceptance_02_dual_symmetry() {
    let start = Instant::now();
    for phi in index1_instances(300, 4, Field::Q, 200) {
        let dual = check_dual_routes(&phi);
        // Adjoint duality: core of the adjoint is the adjoint of the dual core.
        let core_of_adjoint = found(core_via_composition(&phi.adjoint()), "core of adjoint");
        assert_eq!(core_of_adjoint, dual.adjoint());
    }
    assert_within(start.elapsed(), 30, "criterion 2");
    pass("2 (dual core routes and adjoint duality, 300 instances)");
}

#[test]
fn acceptance_03_existence_boundary() {
    let mut instances = index1_instances(150, 4, Field::Q, 300);
    instances.extend(index_ge2_instances(150, 4, Field::Q, 301));
    for phi in &instances {
        let kl = kernel(phi).then(&cokernel(phi));
        let kl_invertible = matches!(kl.mat().inverse().unwrap(), Invertibility::Invertible(_));
        let rank_stable = index_oracle(phi);
        assert_eq!(kl_invertible, rank_stable);

        let routes = [
            core_via_kernel(phi, 3).unwrap(),
            core_via_composition(phi),
            core_via_projectors(phi, &inner_inverse(phi)).unwrap(),
            core_via_annihilator(phi, &default_annihilator(phi), 2).unwrap(),
        ];
        for r in &routes {
            assert_eq!(r.is_found(), kl_invertible, "route existence disagrees");
            if let GenInvResult::NotInvertible { witness, .. } = r {
                assert!(witness.verify(), "witness must re-verify");
            }
        }
    }
    pass("3 (existence boundary, 150 + 150 instances, zero disagreements)");
}

#[test]
fn acceptance_04_certificates_on_found_results() {
    // Certificates are asserted inside every Found, including those of
    // criteria 1-3; here each kind is re-verified explicitly once more.
    for phi in index1_instances(60, 4, Field::Q, 400) {
        let core = found(core_via_composition(&phi), "core");
        assert!(verify(&phi, &core, InverseKind::Core).unwrap().all_hold());
        let dual = found(dual_core_via_composition(&phi), "dual");
        assert!(verify(&phi, &dual, InverseKind::DualCore).unwrap().all_hold());
        let group = found(group_inverse(&phi), "group");
        assert!(verify(&phi, &group, InverseKind::Group).unwrap().all_hold());
        let routes = mp_routes(&phi);
        assert!(verify(&phi, &routes.kernel_unit, InverseKind::MoorePenrose).unwrap().all_hold());
    }
    pass("4 (defining-equation certificates on every Found result)");
}

#[test]
fn acceptance_05_mp_cross_check() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(500);
    for _ in 0..300 {
        let m = rng.random_range(1..=5);
        let n = rng.random_range(1..=5);
        let rank = rng.random_range(0..=m.min(n));
        let phi = Morphism::from_mat(
            coreinv::random_with_rank(m, n, rank, Field::Q, &mut rng).unwrap(),
        );
        let routes = mp_routes(&phi);
        assert_eq!(routes.kernel_unit, routes.cokernel_unit);
        assert_eq!(routes.kernel_unit, routes.factorization);
        assert!(routes.kappa_identity_holds, "kernel pseudoinverse identity");
        assert!(verify(&phi, &routes.kernel_unit, InverseKind::MoorePenrose).unwrap().all_hold());
    }
    assert_within(start.elapsed(), 30, "criterion 5");
    pass("5 (Moore-Penrose triple route agreement, 300 rectangular instances)");
}

#[test]
fn acceptance_06_bordered_criteria() {
    for phi in index1_instances(300, 4, Field::Q, 600) {
        let report = check_bordered_group(&phi);
        assert!(report.ok(), "bordered group: {:?}", report.discrepancies);
        let report = check_bordered_core(&phi);
        assert!(report.ok(), "bordered core: {:?}", report.discrepancies);
        assert!(report.hypotheses.iter().all(|h| h.holds));
        let report = check_bordered_dual(&phi);
        assert!(report.ok(), "bordered dual: {:?}", report.discrepancies);

        // (core)^2 phi == group, exactly.
        let core = found(core_via_composition(&phi), "core");
        let group = found(group_inverse(&phi), "group");
        assert_eq!(core.pow(2).then(&phi), group);
    }
    for phi in index_ge2_instances(150, 4, Field::Q, 601) {
        let bordered = bordered_assemble(&phi);
        match bordered.g.mat().inverse().unwrap() {
            Invertibility::Singular(w) => assert!(w.verify()),
            Invertibility::Invertible(_) => panic!("bordered matrix must be singular at index >= 2"),
        }
        let report = check_bordered_group(&phi);
        assert!(report.ok(), "bordered group (ge2): {:?}", report.discrepancies);
    }
    pass("6 (bordered criteria: block inverse on index 1, singular on index >= 2)");
}

#[test]
fn acceptance_07_ring_case_roundtrip() {
    for phi in index1_instances(300, 4, Field::Q, 700) {
        let report = check_ring_unit_core(&phi, 3).unwrap();
        assert!(report.ok(), "ring unit: {:?}", report.discrepancies);
        assert!(report.hypotheses.iter().all(|h| h.holds), "all units invertible at index 1");
        let report = check_annihilator_theorem(&phi, 2, None).unwrap();
        assert!(report.ok(), "annihilator: {:?}", report.discrepancies);
        assert!(report.hypotheses.iter().all(|h| h.holds));
    }
    for phi in index_ge2_instances(150, 4, Field::Q, 701) {
        let report = check_ring_unit_core(&phi, 3).unwrap();
        assert!(report.ok(), "ring unit (ge2): {:?}", report.discrepancies);
        assert!(
            !report.hypotheses.iter().find(|h| h.name == "unit_invertible").unwrap().holds,
            "u must be singular at index >= 2"
        );
        assert!(
            !report.hypotheses.iter().find(|h| h.name == "dual_unit_invertible").unwrap().holds,
            "v must be singular at index >= 2"
        );
        let report = check_annihilator_theorem(&phi, 2, None).unwrap();
        assert!(report.ok(), "annihilator (ge2): {:?}", report.discrepancies);
        assert!(
            !report.hypotheses.iter().find(|h| h.name == "mu_invertible").unwrap().holds,
            "mu must be singular at index >= 2"
        );
    }
    pass("7 (ring-case and annihilator theorems in both directions)");
}

#[test]
fn acceptance_08_pinned_regression() {
    let phi = Morphism::from_int_rows(Field::Q, &[&[1, 1], &[0, 0]]);
    let half = |num: i64| Scalar::from_ratio_i64(num, 2, Field::Q);

    let mp = found(coreinv::mp_inverse(&phi), "mp");
    let expected_mp = Morphism::from_mat(Mat::from_fn(2, 2, Field::Q, |_, j| {
        if j == 0 { half(1) } else { Scalar::from_i64(0, Field::Q) }
    }));
    assert_eq!(mp, expected_mp);

    let group = found(group_inverse(&phi), "group");
    assert_eq!(group, phi);

    let core = check_core_routes(&phi);
    assert_eq!(core, Morphism::from_int_rows(Field::Q, &[&[1, 0], &[0, 0]]));

    let dual = check_dual_routes(&phi);
    let expected_dual = Morphism::from_mat(Mat::from_fn(2, 2, Field::Q, |_, _| half(1)));
    assert_eq!(dual, expected_dual);

    let (witnesses, report) = lemma13_witnesses(&phi, 2).unwrap();
    assert!(report.ok());
    assert_eq!(witnesses.epsilon, Morphism::from_int_rows(Field::Q, &[&[1, 0], &[0, 0]]));

    let nil = Morphism::from_int_rows(Field::Q, &[&[0, 1], &[0, 0]]);
    let mp = found(coreinv::mp_inverse(&nil), "mp of the nilpotent block");
    assert_eq!(mp, Morphism::from_int_rows(Field::Q, &[&[0, 0], &[1, 0]]));
    assert!(!group_inverse(&nil).is_found());
    assert!(!core_via_kernel(&nil, 3).unwrap().is_found());
    assert!(!dual_core_via_cokernel(&nil, 3).unwrap().is_found());
    pass("8 (pinned regression on the worked 2x2 examples)");
}

#[test]
fn acceptance_09_gaussian_smoke() {
    let start = Instant::now();
    // Criterion 1 shape at dim 3 over Q(i).
    let instances = index1_instances(100, 3, Field::Qi, 900);
    // Every nonzero draw should exercise conjugation; only the rank-0
    // draws are forced to be real.
    let with_imaginary = instances
        .iter()
        .filter(|phi| {
            let m = phi.mat();
            (0..m.rows()).any(|i| (0..m.cols()).any(|j| &m.at(i, j).conj() != m.at(i, j)))
        })
        .count();
    let nonzero = instances.iter().filter(|phi| !phi.is_zero()).count();
    assert_eq!(with_imaginary, nonzero, "conjugation must be nontrivial on nonzero instances");
    assert!(nonzero >= 60);
    for phi in &instances {
        let core = check_core_routes(phi);
        assert!(verify(phi, &core, InverseKind::Core).unwrap().all_hold());
    }
    // Criterion 5 shape over Q(i).
    let mut rng = ChaCha12Rng::seed_from_u64(901);
    for _ in 0..100 {
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=3);
        let rank = rng.random_range(0..=m.min(n));
        let phi = Morphism::from_mat(
            coreinv::random_with_rank(m, n, rank, Field::Qi, &mut rng).unwrap(),
        );
        let routes = mp_routes(&phi);
        assert_eq!(routes.kernel_unit, routes.cokernel_unit);
        assert_eq!(routes.kernel_unit, routes.factorization);
        assert!(routes.kappa_identity_holds);
        assert!(verify(&phi, &routes.kernel_unit, InverseKind::MoorePenrose).unwrap().all_hold());
    }
    assert_within(start.elapsed(), 30, "criterion 9");
    pass("9 (Gaussian-rational smoke suite, 100 + 100 instances)");
}

#[test]
fn acceptance_10_degenerate_dimensions() {
    let mut rng = ChaCha12Rng::seed_from_u64(1000);
    for field in [Field::Q, Field::Qi] {
        // Invertible phi: K and L are zero objects, kappa lambda is 0x0.
        let inv3 = loop {
            let m = random_dense(3, 3, field, &mut rng);
            if m.rank() == 3 {
                break Morphism::from_mat(m);
            }
        };
        for phi in [inv3, Morphism::identity(Obj(2), field)] {
            assert_eq!(kernel(&phi).dom(), Obj(0));
            assert_eq!(cokernel(&phi).cod(), Obj(0));
            let core = check_core_routes(&phi);
            let dual = check_dual_routes(&phi);
            let plain = phi.inverse().unwrap().into_inverse().unwrap();
            assert_eq!(core, plain);
            assert_eq!(dual, plain);
            assert!(check_core_kernel_theorem(&phi, 3).unwrap().ok());
            assert!(check_ring_unit_core(&phi, 3).unwrap().ok());
            assert!(check_annihilator_theorem(&phi, 2, None).unwrap().ok());
            assert!(check_bordered_group(&phi).ok());
            assert!(check_bordered_core(&phi).ok());
            assert!(check_bordered_dual(&phi).ok());
        }

        // phi == 0: kernel and cokernel bases are the identity.
        for dim in [2usize, 3] {
            let zero = Morphism::zero(Obj(dim), Obj(dim), field);
            assert!(kernel(&zero).is_identity());
            assert!(cokernel(&zero).is_identity());
            let core = check_core_routes(&zero);
            let dual = check_dual_routes(&zero);
            assert!(core.is_zero() && dual.is_zero());
            assert!(check_core_kernel_theorem(&zero, 3).unwrap().ok());
            assert!(check_ring_unit_core(&zero, 3).unwrap().ok());
            assert!(check_annihilator_theorem(&zero, 2, None).unwrap().ok());
            assert!(check_bordered_group(&zero).ok());
            assert!(check_bordered_core(&zero).ok());
            assert!(check_bordered_dual(&zero).ok());
        }

        // The 0x0 endomorphism exercises every empty-matrix convention.
        let empty = Morphism::zero(Obj(0), Obj(0), field);
        let core = check_core_routes(&empty);
        assert_eq!(core, empty);
        assert!(check_bordered_group(&empty).ok());
    }
    pass("10 (degenerate dimensions: invertible, zero and empty endomorphisms)");
}
