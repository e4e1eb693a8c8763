use glassdual_core::parisi::ParisiNumerics;
use glassdual_core::spherical::{cs_functional, cs_minimize, lambda_functional, spherical_partial, verify_thm10, QHAT_CAP};
use glassdual_core::{StepDistribution, TemperatureVector};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5fe2),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn temperatures() -> impl Strategy<Value = TemperatureVector> {
    prop::collection::vec(0.0f64..2.0, 1..4).prop_map(|v| TemperatureVector::new(v).unwrap())
}

/// A step ending in a level-1 block that starts at the last knot.
fn spherical_step() -> impl Strategy<Value = StepDistribution> {
    (1usize..4).prop_flat_map(|k| {
        (prop::collection::vec(0.01f64..0.95, k), prop::collection::vec(0.0f64..1.0, k)).prop_map(|(mut q, mut a)| {
            q.sort_by(f64::total_cmp);
            a.sort_by(f64::total_cmp);
            a.push(1.0);
            StepDistribution::from_steps(&q, &a, None).unwrap()
        })
    })
}

fn block_start(alpha: &StepDistribution) -> f64 {
    alpha.knots()[alpha.knots().len() - 2]
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn value_does_not_depend_on_qhat_inside_the_last_block(
        beta in temperatures(), alpha in spherical_step(), u in 0.0f64..1.0, v in 0.0f64..1.0
    ) {
        let q0 = block_start(&alpha);
        let a = alpha.clone().with_qhat(q0 + u * (QHAT_CAP - q0)).unwrap();
        let b = alpha.with_qhat(q0 + v * (QHAT_CAP - q0)).unwrap();
        prop_assert!((cs_functional(&beta, &a).unwrap() - cs_functional(&beta, &b).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn functional_is_affine_in_squared_temperatures(
        alpha in spherical_step(), t0 in prop::collection::vec(0.0f64..2.0, 3), dt in prop::collection::vec(-0.5f64..1.0, 3)
    ) {
        let alpha = alpha.clone().with_qhat(block_start(&alpha)).unwrap();
        let at = |s: f64| {
            let b: Vec<f64> = t0.iter().zip(&dt).map(|(t, d)| (t + 0.5 + s * d).sqrt()).collect();
            cs_functional(&TemperatureVector::new(b).unwrap(), &alpha).unwrap()
        };
        let (a, b, c) = (at(0.0), at(0.5), at(1.0));
        prop_assert!((a - 2.0 * b + c).abs() <= 1e-12 * (1.0 + a.abs() + c.abs()));
    }
}

#[test]
fn replica_symmetric_value_is_annealed() {
    for b in [0.3, 0.9, 1.3] {
        let beta = TemperatureVector::new(vec![0.0, b]).unwrap();
        let r = cs_minimize(&beta, 1, &ParisiNumerics::default()).unwrap();
        assert!(r.value <= beta.xi_beta(1.0) / 2.0 + 1e-12);
        if b < 1.0 {
            assert!((r.value - beta.xi_beta(1.0) / 2.0).abs() <= 1e-10, "beta {b}");
        }
    }
}

#[test]
fn partials_match_difference_quotients() {
    let num = ParisiNumerics::default();
    let beta = TemperatureVector::new(vec![0.2, 1.6, 0.5]).unwrap();
    let r = cs_minimize(&beta, 1, &num).unwrap();
    let h = 1e-4;
    for p in 1..=3 {
        let shift = |d: f64| {
            let mut e = beta.entries().to_vec();
            e[p - 1] += d;
            cs_minimize(&TemperatureVector::new(e).unwrap(), 1, &num).unwrap().value
        };
        let fd = (shift(h) - shift(-h)) / (2.0 * h);
        let exact = spherical_partial(&beta, &r.alpha_star, p);
        assert!((exact - fd).abs() < 1e-5, "p = {p}: {exact} vs {fd}");
        assert!((r.partials[p - 1] - exact).abs() < 1e-15);
    }
}

#[test]
fn lambda_examples() {
    let one = StepDistribution::delta_zero().with_qhat(0.3).unwrap();
    assert!(lambda_functional(&one).unwrap().abs() < 1e-15);
    let half = StepDistribution::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Some(0.5)).unwrap();
    assert!((lambda_functional(&half).unwrap() - (1.0 + 0.5f64.ln())).abs() < 1e-15);
}

#[test]
fn duality_closes_with_broken_symmetry() {
    let beta = TemperatureVector::new(vec![0.0, 3.0]).unwrap();
    let report = verify_thm10(&beta, 1, &ParisiNumerics::default()).unwrap();
    assert!(report.max_gap <= 1e-6, "{report:?}");
}
