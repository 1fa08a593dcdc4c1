use std::f64::consts::{PI, TAU};

use epr_core::observables::{first_side_expectation, second_side_expectation};
use epr_core::*;
use proptest::prelude::*;

fn ang(x: f64) -> Angle {
    Angle::new(x).unwrap()
}

fn angle() -> impl Strategy<Value = f64> {
    -4.0 * PI..4.0 * PI
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![Just(Outcome::Minus), Just(Outcome::Plus)]
}

/// `Tr((I ⊗ M(b)) ρ)` as an explicit index sum, independent of the Kronecker helper.
fn second_side_brute(b: f64, rho: &Mat4) -> f64 {
    let m = [[b.cos(), b.sin()], [b.sin(), -b.cos()]];
    let mut acc = 0.0;
    for i in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                // (I ⊗ M)[(2i+k), (2i+l)] = M[k][l]; off-diagonal blocks vanish
                acc += m[k][l] * rho[(2 * i + l, 2 * i + k)];
            }
        }
    }
    acc
}

proptest! {
    #[test]
    fn joint_expectation_is_minus_cos(a in angle(), b in angle()) {
        prop_assert!((joint_expectation(ang(a), ang(b)) + (a - b).cos()).abs() < 1e-12);
    }

    #[test]
    fn rotational_invariance(a in angle(), b in angle(), d in angle()) {
        let shifted = joint_expectation(ang(a + d), ang(b + d));
        prop_assert!((shifted - joint_expectation(ang(a), ang(b))).abs() < 1e-12);
    }

    #[test]
    fn two_pi_periodicity(a in angle(), b in angle()) {
        let base = joint_expectation(ang(a), ang(b));
        prop_assert!((joint_expectation(ang(a + TAU), ang(b)) - base).abs() < 1e-12);
        let m0 = make_measurement_operator(ang(a));
        let m1 = make_measurement_operator(ang(a + TAU));
        prop_assert!(m0.matrix().max_abs_diff(m1.matrix()) < 1e-12);
    }

    #[test]
    fn marginals_vanish(a in angle()) {
        let s = singlet_density();
        prop_assert!(first_side_expectation(ang(a), &s).abs() < 1e-12);
        prop_assert!(second_side_expectation(ang(a), &s).abs() < 1e-12);
    }

    #[test]
    fn measurement_operator_is_a_reflection(a in angle()) {
        let m = *make_measurement_operator(ang(a)).matrix();
        prop_assert!((m * m).max_abs_diff(&Mat2::identity()) < 1e-12);
        prop_assert!(m.trace().abs() < 1e-12);
        prop_assert!((m.determinant() + 1.0).abs() < 1e-12);
        prop_assert!(m.is_symmetric(0.0));
        let [lo, hi] = m.symmetric_eigenvalues();
        prop_assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        prop_assert!(MeasurementOperator::try_from_matrix(m).is_ok());
    }

    #[test]
    fn joint_distribution_is_normalized(ab in -1.0f64..=1.0) {
        let d = joint_probabilities(ab).unwrap();
        prop_assert!(d.as_array().iter().all(|&p| p >= 0.0));
        prop_assert!((d.as_array().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert_eq!(d.p_mm, d.p_pp);
        prop_assert_eq!(d.p_mp, d.p_pm);
        let (plus, minus) = binary_probabilities(ab).unwrap();
        prop_assert!((plus + minus - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conditional_expectation_identity(a in angle(), b in angle(), o in outcome()) {
        let rho = luders_project(ang(a), o);
        let expected = -o.as_f64() * (a - b).cos();
        prop_assert!((second_side_expectation(ang(b), &rho) - expected).abs() < 1e-12);
        prop_assert!((second_side_brute(b, rho.matrix()) - expected).abs() < 1e-12);
    }

    #[test]
    fn luders_output_is_a_state(a in angle(), o in outcome()) {
        let rho = luders_project(ang(a), o);
        prop_assert!(DensityMatrix4::new(*rho.matrix()).is_ok());
    }

    #[test]
    fn von_neumann_is_luders_mixture(a in angle()) {
        let mix = (*luders_project(ang(a), Outcome::Minus).matrix()
            + *luders_project(ang(a), Outcome::Plus).matrix())
            .scale(0.5);
        prop_assert!(mix.max_abs_diff(von_neumann_project().matrix()) < 1e-12);
    }

    #[test]
    fn neutral_rules_carry_no_signal(a in angle(), b in angle(), o in outcome()) {
        for rule in [ProjectionRule::VonNeumann, ProjectionRule::Null] {
            prop_assert!(second_side_expectation(ang(b), &apply_rule(rule, ang(a), o)).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenket_is_unit(a in angle(), o in outcome()) {
        let [x, y] = eigenket(ang(a), o).amplitudes();
        prop_assert!((x.hypot(y) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_determinism(seed in any::<u64>(), n in 1u64..300) {
        let cfg = ExperimentConfig::separated(
            ProjectionRule::Luders, MeasurementOrder::RandomPerTrial, ang(0.3), ang(2.0), n, seed,
        );
        prop_assert_eq!(run_experiment(&cfg).unwrap(), run_experiment(&cfg).unwrap());
    }
}

#[test]
fn order_does_not_change_statistics() {
    let b = ang(PI / 3.0);
    for rule in ProjectionRule::ALL {
        let run = |order, seed| {
            run_experiment(&ExperimentConfig::separated(
                rule,
                order,
                Angle::ZERO,
                b,
                10_000,
                seed,
            ))
            .unwrap()
            .correlation
        };
        let a_first = run(MeasurementOrder::AFirst, 1);
        let b_first = run(MeasurementOrder::BFirst, 2);
        let random = run(MeasurementOrder::RandomPerTrial, 3);
        assert!(
            (a_first - b_first).abs() < 0.1,
            "{rule}: {a_first} vs {b_first}"
        );
        assert!(
            (a_first - random).abs() < 0.1,
            "{rule}: {a_first} vs {random}"
        );
    }
}

#[test]
fn marginals_are_fair_in_every_mode() {
    let b = ang(1.0);
    let mut configs = vec![ExperimentConfig::joint(ang(0.4), b, 10_000, 21)];
    for rule in ProjectionRule::ALL {
        for order in MeasurementOrder::ALL {
            configs.push(ExperimentConfig::separated(
                rule,
                order,
                ang(0.4),
                b,
                10_000,
                21,
            ));
        }
    }
    for cfg in configs {
        let run = run_experiment(&cfg).unwrap();
        assert!(
            run.marginal_a.abs() < 0.05,
            "{}: {}",
            cfg.mode,
            run.marginal_a
        );
        assert!(
            run.marginal_b.abs() < 0.05,
            "{}: {}",
            cfg.mode,
            run.marginal_b
        );
    }
}

#[test]
fn separated_luders_tracks_joint_over_a_sweep() {
    let (start, end) = experiment::full_turn();
    let joint = sweep_b(
        &ExperimentConfig::joint(Angle::ZERO, Angle::ZERO, 10_000, 31),
        start,
        end,
        17,
    )
    .unwrap();
    let luders = sweep_b(
        &ExperimentConfig::separated(
            ProjectionRule::Luders,
            MeasurementOrder::AFirst,
            Angle::ZERO,
            Angle::ZERO,
            10_000,
            32,
        ),
        start,
        end,
        17,
    )
    .unwrap();
    assert!(joint.max_abs_deviation() < 0.05);
    assert!(luders.max_abs_deviation() < 0.05);
    for (j, l) in joint.estimates.iter().zip(&luders.estimates) {
        assert!((j - l).abs() < 0.1);
    }
}

#[test]
fn frequency_convergence_of_separated_pairs() {
    // conditional pair probabilities under Lüders: P(o_a, o_b) = (1 − o_a o_b cos(a−b))/4
    let (a, b) = (0.0, 1.2);
    let cfg = ExperimentConfig::separated(
        ProjectionRule::Luders,
        MeasurementOrder::AFirst,
        ang(a),
        ang(b),
        10_000,
        77,
    );
    let run = run_experiment(&cfg).unwrap();
    let n = run.records.len() as f64;
    for oa in [Outcome::Minus, Outcome::Plus] {
        for ob in [Outcome::Minus, Outcome::Plus] {
            let p = (1.0 - oa.as_f64() * ob.as_f64() * (a - b).cos()) / 4.0;
            let freq = run
                .records
                .iter()
                .filter(|r| r.o_a == oa && r.o_b == ob)
                .count() as f64
                / n;
            assert!(
                (freq - p).abs() < 5.0 * (p * (1.0 - p) / n).sqrt(),
                "{oa}{ob}: {freq} vs {p}"
            );
        }
    }
}
