use num_bigint::BigInt;
use num_rational::BigRational;
use qudit_algebra::identities::{
    catalogue, find_check, run_all, run_check, run_suite, run_suite_by_name, CheckResult,
    IdentityError, Suite, SuiteReport, Target,
};
use qudit_algebra::lattice::{LatticeConfig, Mode, Mutation};
use qudit_algebra::tensor::ProductLatticeConfig;

fn cfg(d: usize, mode: Mode) -> LatticeConfig {
    LatticeConfig::new(d, mode).unwrap()
}

fn verdicts(reports: &[SuiteReport]) -> Vec<(&'static str, bool)> {
    reports
        .iter()
        .flat_map(|r| r.results.iter().map(|c| (c.name, c.pass)))
        .collect()
}

fn without_timing(results: &[CheckResult]) -> Vec<CheckResult> {
    results
        .iter()
        .cloned()
        .map(|mut r| {
            r.elapsed = Default::default();
            r
        })
        .collect()
}

#[test]
fn exact_and_float_verdicts_agree() {
    for d in 2..=8 {
        let exact = run_all(&cfg(d, Mode::Exact)).unwrap();
        let float = run_all(&cfg(d, Mode::Float)).unwrap();
        assert_eq!(verdicts(&exact), verdicts(&float), "d = {d}");
        assert!(verdicts(&exact).iter().all(|(_, pass)| *pass), "d = {d}");
    }
}

#[test]
fn mutated_clock_fails_identically_in_both_modes() {
    for d in [3, 4, 6] {
        let exact =
            run_all(&cfg(d, Mode::Exact).with_mutation(Some(Mutation::ClockRootSquared))).unwrap();
        let float =
            run_all(&cfg(d, Mode::Float).with_mutation(Some(Mutation::ClockRootSquared))).unwrap();
        assert_eq!(verdicts(&exact), verdicts(&float), "d = {d}");
        let failed: Vec<_> = verdicts(&exact)
            .into_iter()
            .filter(|(_, pass)| !pass)
            .collect();
        assert!(
            failed
                .iter()
                .any(|(name, _)| *name == "schwinger.VU_eq_qUV"),
            "d = {d}"
        );
        for r in exact.iter().flat_map(|r| &r.results).filter(|r| !r.pass) {
            assert!(r.max_residual > 0.0, "{} at d = {d}", r.name);
            assert!(r.indices.is_some(), "{} at d = {d}", r.name);
        }
    }
}

#[test]
fn tensor_suite_passes_for_the_standard_pairs() {
    for (d1, d2) in [(2, 2), (2, 3), (3, 2), (4, 3), (3, 5)] {
        for mode in [Mode::Exact, Mode::Float] {
            let target = Target::Product(ProductLatticeConfig::new(d1, d2, mode).unwrap());
            let report = run_suite(Suite::Tensor, &target).unwrap();
            assert!(
                report.all_passed(),
                "{d1}x{d2} {mode:?}: {:?}",
                report.results
            );
            assert_eq!(report.d, d1 * d2);
            assert_eq!(report.factors, Some((d1, d2)));
        }
    }
}

#[test]
fn matrix_units_at_d4_cover_all_quadruples() {
    let report = run_suite_by_name("matrix_units", &Target::Lattice(cfg(4, Mode::Exact))).unwrap();
    assert!(report.all_passed());
    for name in [
        "matrix_units.shift_product",
        "matrix_units.schwinger_product",
    ] {
        let r = report.results.iter().find(|r| r.name == name).unwrap();
        assert_eq!(r.instances, 256);
    }
}

#[test]
fn sampled_quadruples_pass_for_any_seed() {
    for seed in [1, 2, 99] {
        let target = Target::Lattice(cfg(6, Mode::Exact).with_seed(seed));
        assert!(
            run_suite(Suite::MatrixUnits, &target).unwrap().all_passed(),
            "seed {seed}"
        );
    }
}

#[test]
fn runs_are_deterministic() {
    let c = cfg(5, Mode::Exact);
    let first: Vec<_> = run_all(&c).unwrap();
    let second: Vec<_> = run_all(&c).unwrap();
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(without_timing(&a.results), without_timing(&b.results));
    }
}

#[test]
fn position_commutators_hold_for_other_spacings() {
    let beta = BigRational::new(BigInt::from(3), BigInt::from(2));
    for mode in [Mode::Exact, Mode::Float] {
        let c = cfg(5, mode).with_beta(beta.clone()).unwrap();
        let report = run_suite(Suite::Commutator, &Target::Lattice(c.clone())).unwrap();
        assert!(report.all_passed(), "{mode:?}");
        let spectrum = run_check(
            find_check("proj_PR.position_spectrum").unwrap(),
            &Target::Lattice(c),
        )
        .unwrap();
        assert!(spectrum.pass);
    }
}

#[test]
fn every_relation_family_is_checked() {
    let names: Vec<&str> = catalogue().iter().map(|c| c.name).collect();
    for expected in [
        "schwinger.VU_eq_qUV",
        "schwinger.U_order_d",
        "schwinger.V_order_d",
        "schwinger.U_unitary",
        "schwinger.V_unitary",
        "schwinger.V_power_sum",
        "schwinger.U_power_shift",
        "almost_unitary.a_a_dag",
        "almost_unitary.a_dag_a",
        "almost_unitary.a_dag_nilpotent",
        "almost_unitary.a_nilpotent",
        "proj_PR.P_complement",
        "proj_PR.P_product_max",
        "proj_PR.R_product_max",
        "proj_PR.P_a_dag_intertwine",
        "proj_PR.R_a_dag_intertwine",
        "proj_PR.P_a_pow_vanishes",
        "commutator.X_a_dag",
        "commutator.X_a",
        "proj_script.idempotent",
        "proj_script.orthogonal",
        "proj_script.partition_of_unity",
        "proj_script.U_intertwine",
        "proj_script.periodic",
        "proj_script.root_of_unity_sum",
        "conversions.a_dag_from_UV",
        "conversions.a_dag_power_from_UV",
        "conversions.edge_power_a_dag",
        "conversions.edge_power_a",
        "matrix_units.shift_standard",
        "matrix_units.schwinger_standard",
        "matrix_units.shift_product",
        "tensor.delta_a_dag_arrows",
        "tensor.delta_U_order",
        "tensor.flatten_intertwines_a_dag",
        "tensor.flatten_intertwines_U",
    ] {
        assert!(names.contains(&expected), "{expected} missing");
    }
    assert!(catalogue().iter().all(|c| !c.reference.is_empty()));
}

#[test]
fn unknown_names_are_errors() {
    let target = Target::Lattice(cfg(3, Mode::Exact));
    assert_eq!(
        run_suite_by_name("spectral", &target).unwrap_err(),
        IdentityError::UnknownSuite("spectral".to_string())
    );
    assert!(find_check("schwinger.nope").is_err());
}
