use glassdual_core::duality::{legendre_sup_v, RemFreeEnergy, SearchBox};
use glassdual_core::rem::{beta_c, rem_free_energy, rem_parisi_minimize, rem_squared_free_energy};
use glassdual_core::EnergyVector;
use proptest::prelude::*;

fn f_grid() -> Vec<f64> {
    (1..=200).map(|i| rem_free_energy((i as f64 * 0.05).sqrt()).unwrap()).collect()
}

#[test]
fn concave_in_squared_temperature() {
    let f = f_grid();
    for w in f.windows(3) {
        assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-9);
    }
}

#[test]
fn convex_and_nondecreasing_in_beta() {
    let f: Vec<f64> = (1..=200).map(|i| rem_free_energy(i as f64 * 10f64.sqrt() / 200.0).unwrap()).collect();
    for w in f.windows(3) {
        assert!(w[1] >= w[0]);
        assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-9);
    }
}

#[test]
fn parisi_examples() {
    let ln2 = std::f64::consts::LN_2;
    let r = rem_parisi_minimize(2.0 * beta_c()).unwrap();
    assert!((r.m_star - 0.5).abs() < 1e-6 && (r.value - 3.0 * ln2).abs() < 1e-12);
    let r = rem_parisi_minimize(0.5 * beta_c()).unwrap();
    assert!((r.m_star - 1.0).abs() < 1e-12 && (r.value - 0.25 * ln2).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sup_transform_is_the_closed_form(m in 0.1f64..=1.0) {
        let search = SearchBox { hi: 16.0, ..SearchBox::default() };
        let r = legendre_sup_v(&RemFreeEnergy, &EnergyVector::scalar(m).unwrap(), &search).unwrap();
        prop_assert!((r.value - rem_squared_free_energy(m).unwrap()).abs() <= 1e-6);
        // β_c/m, and the largest maximizer β_c on the plateau at m = 1
        prop_assert!((r.beta_star[0] - beta_c() / m).abs() <= 1e-6);
    }
}
