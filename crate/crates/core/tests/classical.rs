use meson_wigner::dynamics::DichotomousValue as V;
use meson_wigner::dynamics::EvolutionKernel;
use meson_wigner::inequalities::{assignment, InequalityAssignment};
use meson_wigner::oracle::{
    classical_lhs_rhs, quantum_tables, seeded_model, verify_marginalization_identities,
    verify_random_models, ClassicalModel, IdentityFamily, MarkovKernel,
};
use meson_wigner::species::{Parameterization, SpeciesRegistry};
use meson_wigner::twobody::TwoMesonState;

#[test]
fn uniform_ontic_random_kernels_hold() {
    let uniform = [[[0.125; 2]; 2]; 2];
    for i in 0..2000 {
        let random = seeded_model(3, i);
        let k = *random.kernel(
            meson_wigner::oracle::Subsystem::I,
            meson_wigner::oracle::Observable::B,
        );
        let model = ClassicalModel::with_kernel(uniform, k).unwrap();
        let (lhs, rhs) = classical_lhs_rhs(&model);
        assert!(lhs <= rhs + 1e-12, "model {i}: {lhs} > {rhs}");
    }
}

#[test]
fn decaying_kernels_hold() {
    // Pure decay without flips keeps the inequality.
    let decay = MarkovKernel {
        first: [[0.7, 0.0], [0.0, 0.4]],
        second: [[0.9, 0.0], [0.0, 0.5]],
    };
    for i in 0..200 {
        let model = ClassicalModel::with_kernel(*seeded_model(5, i).ontic(), decay).unwrap();
        let (lhs, rhs) = classical_lhs_rhs(&model);
        assert!(lhs <= rhs + 1e-12);
    }
}

#[test]
fn random_batch_is_sound_and_seed_dependent() {
    let a = verify_random_models(5000, 42, 1e-12);
    assert!(a.passed, "{a:?}");
    assert_eq!(a.violations, 0);
    assert!(a.max_excess <= 1e-12);
    let b = verify_random_models(5000, 43, 1e-12);
    assert_ne!(a.max_excess, b.max_excess);
}

#[test]
fn quantum_tables_break_ensc() {
    let reg = SpeciesRegistry::builtin();
    let pure = TwoMesonState::werner(1.0).unwrap();

    // a in flavor, c and b in CP: summing a out of the sequential (a, c)
    // table does not give the direct (c, b) table.
    let k = EvolutionKernel::new(reg.get("D0").unwrap(), Parameterization::Zeta).unwrap();
    let custom = InequalityAssignment {
        index: 0,
        a_plus: V::M,
        a_minus: V::MBAR,
        b_plus: V::M1,
        b_minus: V::M2,
        c_plus: V::M1,
        c_minus: V::M2,
    };
    let report = verify_marginalization_identities(&quantum_tables(&k, &pure, &custom).unwrap());
    assert!(
        (report.max_residual(IdentityFamily::Ensc) - 0.25).abs() < 1e-12,
        "{report:?}"
    );
    assert!(
        report.max_residual(IdentityFamily::Nsc) < 1e-12,
        "{report:?}"
    );

    // Non-orthogonal mass states with eps.
    let k = EvolutionKernel::new(reg.get("K0").unwrap(), Parameterization::Epsilon).unwrap();
    let t = quantum_tables(&k, &pure, assignment(6).unwrap()).unwrap();
    let ensc = verify_marginalization_identities(&t).max_residual(IdentityFamily::Ensc);
    assert!(ensc > 1e-4, "{ensc}");

    // With flavor b and a pure phase the flavor marginals are uniform and
    // the sequential table happens to marginalize correctly.
    let k = EvolutionKernel::new(reg.get("D0").unwrap(), Parameterization::Zeta).unwrap();
    let t = quantum_tables(&k, &pure, assignment(6).unwrap()).unwrap();
    assert!(verify_marginalization_identities(&t).max_residual(IdentityFamily::Ensc) < 1e-12);
}

#[test]
fn perturbed_table_fails_by_the_perturbation() {
    let mut t = seeded_model(8, 1).tables();
    t.cb[1][0] += 0.01;
    let report = verify_marginalization_identities(&t);
    assert!((report.max_residual(IdentityFamily::Nsc) - 0.01).abs() < 1e-12);
    assert!(report.failures(1e-12).count() >= 1);
}
