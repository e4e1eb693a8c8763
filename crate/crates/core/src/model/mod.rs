//! Shared domain types: covariance mixtures, temperature and energy vectors,
//! step order parameters, and the closed-form integrals over steps that every
//! variational formula reduces to.

mod mixture;
mod step;
mod vectors;

pub use mixture::{MixtureKind, MixtureSpec};
pub use step::StepDistribution;
pub use vectors::{EnergyVector, TemperatureVector};

use crate::error::{Error, Result};
use alloc::vec::Vec;

/// `∫₀¹ α(s) ξ′(s) ds`, summed segment by segment as `Σ a_l (ξ(q_{l+1}) − ξ(q_l))`.
pub fn alpha_integral_xi_prime(spec: &MixtureSpec, alpha: &StepDistribution) -> f64 {
    alpha
        .segments()
        .map(|(lo, hi, a)| a * (spec.xi(hi) - spec.xi(lo)))
        .sum()
}

/// `∫₀¹ α(s) s ξ″(s) ds` through the antiderivative `s ξ′(s) − ξ(s)`.
pub fn alpha_integral_s_xi_second(spec: &MixtureSpec, alpha: &StepDistribution) -> f64 {
    let anti = |s: f64| s * spec.xi_prime(s) - spec.xi(s);
    alpha
        .segments()
        .map(|(lo, hi, a)| a * (anti(hi) - anti(lo)))
        .sum()
}

/// `p ∫₀¹ α(q) q^{p−1} dq = Σ a_l (q_{l+1}^p − q_l^p)`.
pub fn alpha_moment(alpha: &StepDistribution, p: u32) -> f64 {
    alpha
        .segments()
        .map(|(lo, hi, a)| a * (crate::math::powi(hi, p) - crate::math::powi(lo, p)))
        .sum()
}

/// The raw sequence `m_p = (p/2^p) ∫ α q^{p−1} dq` for `p = 1..=truncation`,
/// without the positivity check of [`EnergyVector`].
pub fn spherical_energy_integrals(alpha: &StepDistribution, truncation: usize) -> Vec<f64> {
    (1..=truncation as u32)
        .map(|p| alpha_moment(alpha, p) / crate::math::powi(2.0, p))
        .collect()
}

/// Scaled energies matched to a spherical order parameter.
///
/// Fails with a domain error when some `m_p` vanishes (for instance `α` the
/// indicator of `{1}`), since such a point sits on the boundary of the
/// energy space.
pub fn energy_vector_from_alpha_spherical(
    alpha: &StepDistribution,
    truncation: usize,
) -> Result<EnergyVector> {
    const OP: &str = "energy_vector_from_alpha_spherical";
    if truncation < 1 {
        return Err(Error::usage(OP, "truncation P must be at least 1"));
    }
    let m = spherical_energy_integrals(alpha, truncation);
    if let Some(p) = m.iter().position(|&v| v <= 0.0) {
        return Err(Error::domain(
            OP,
            alloc::format!("m_{} = {} is not strictly positive; alpha maps to the boundary", p + 1, m[p]),
        ));
    }
    EnergyVector::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sk() -> MixtureSpec {
        MixtureSpec::sk()
    }

    fn half_step() -> StepDistribution {
        StepDistribution::new(alloc::vec![0.0, 0.5, 1.0], alloc::vec![0.0, 1.0], None).unwrap()
    }

    #[test]
    fn xi_prime_integral_examples() {
        assert!((alpha_integral_xi_prime(&sk(), &StepDistribution::delta_zero()) - 0.5).abs() < 1e-15);
        assert_eq!(alpha_integral_xi_prime(&sk(), &StepDistribution::delta_one()), 0.0);
        assert!((alpha_integral_xi_prime(&sk(), &half_step()) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn s_xi_second_integral_examples() {
        assert!((alpha_integral_s_xi_second(&sk(), &StepDistribution::delta_zero()) - 0.5).abs() < 1e-15);
        assert_eq!(alpha_integral_s_xi_second(&sk(), &StepDistribution::delta_one()), 0.0);
        assert!((alpha_integral_s_xi_second(&sk(), &half_step()) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn spherical_energy_examples() {
        let m = energy_vector_from_alpha_spherical(&StepDistribution::delta_zero(), 2).unwrap();
        assert_eq!(m.entries(), &[0.5, 0.25]);
        let err = energy_vector_from_alpha_spherical(&StepDistribution::delta_one(), 3).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Domain);
        let err = energy_vector_from_alpha_spherical(&StepDistribution::delta_zero(), 0).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Usage);
    }
}
