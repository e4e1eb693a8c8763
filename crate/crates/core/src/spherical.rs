//! Crisanti-Sommers functional of the spherical mixed p-spin model, its
//! minimization over k-step order parameters, the temperature-free part `Λ`,
//! and the partial derivatives `∂_p F`.

use crate::duality::{legendre_sup_v, FreeEnergy, SearchBox};
use crate::error::{Error, Result};
use crate::math::{log, log1p, powi};
use crate::model::{alpha_moment, spherical_energy_integrals, EnergyVector, StepDistribution, TemperatureVector};
use crate::optimize::multistart;
use crate::parisi::ParisiNumerics;
use crate::report::{Direction, DualityPoint, DualityReport};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest `q̂` the minimizer may use.
pub const QHAT_CAP: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CSResult {
    pub alpha_star: StepDistribution,
    /// `F(β)`.
    pub value: f64,
    /// `∂_p F(β)` for `p = 1..=P`.
    pub partials: Vec<f64>,
    /// `q̂` sits at [`QHAT_CAP`]; the minimizer wanted to go further.
    pub qhat_at_cap: bool,
}

fn require_qhat(op: &'static str, alpha: &StepDistribution) -> Result<f64> {
    alpha
        .qhat()
        .ok_or_else(|| Error::usage(op, "alpha carries no qhat; spherical functionals need alpha(qhat) = 1"))
}

/// `∫₀^q̂ dq / A(q) + log(1 − q̂)` with `A(q) = ∫_q^1 α`.
fn lambda_terms(op: &'static str, alpha: &StepDistribution) -> Result<f64> {
    let qhat = require_qhat(op, alpha)?;
    // A at the left end of each segment, accumulated from the right
    let segs: Vec<(f64, f64, f64)> = alpha.segments().collect();
    let mut a_hi = 0.0;
    let mut a_lo = vec![0.0; segs.len()];
    for (i, &(lo, hi, a)) in segs.iter().enumerate().rev() {
        a_lo[i] = a_hi + a * (hi - lo);
        a_hi = a_lo[i];
    }
    let mut integral = 0.0;
    for (i, &(lo, hi, a)) in segs.iter().enumerate() {
        if lo >= qhat {
            break;
        }
        let end = hi.min(qhat);
        let start = a_lo[i];
        let stop = start - a * (end - lo);
        if !(stop > 0.0) {
            return Err(Error::domain(op, format!("A(q) vanishes on [{lo}, {end}] before qhat")));
        }
        integral += if a > 0.0 { log1p(a * (end - lo) / stop) / a } else { (end - lo) / start };
    }
    Ok(integral + log(1.0 - qhat))
}

/// `Λ(α) = ∫₀^q̂ dq / ∫_q^1 α + log(1 − q̂)`.
pub fn lambda_functional(alpha: &StepDistribution) -> Result<f64> {
    lambda_terms("lambda_functional", alpha)
}

/// `∫ α ξ_β′ = Σ_l a_l (ξ_β(q_{l+1}) − ξ_β(q_l))`.
fn energy_term(beta: &TemperatureVector, alpha: &StepDistribution) -> f64 {
    alpha
        .segments()
        .map(|(lo, hi, a)| a * (beta.xi_beta(hi) - beta.xi_beta(lo)))
        .sum()
}

/// `Q_β(α) = ½ (∫ α ξ_β′ + Λ(α))`.
pub fn cs_functional(beta: &TemperatureVector, alpha: &StepDistribution) -> Result<f64> {
    let l = lambda_terms("cs_functional", alpha)?;
    Ok(0.5 * (energy_term(beta, alpha) + l))
}

/// `∂_p F(β) = β_p 2^{-p} p ∫ α q^{p−1}`.
pub fn spherical_partial(beta: &TemperatureVector, alpha_star: &StepDistribution, p: usize) -> f64 {
    if p == 0 {
        return 0.0;
    }
    beta.get(p) * alpha_moment(alpha_star, p as u32) / powi(2.0, p as u32)
}

// 2k reals: k knot increments (the last knot is q̂) and k level increments
// below the final level 1.
fn decode(theta: &[f64], k: usize) -> Result<StepDistribution> {
    let (q, mut a) = crate::parisi::decode_steps(theta, k, QHAT_CAP);
    a.push(1.0);
    let qhat = q.last().copied().unwrap_or(0.0);
    StepDistribution::from_steps(&q, &a, Some(qhat))
}

fn starts(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; 2 * k]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let mut q: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        q.sort_by(f64::total_cmp);
        let mut a: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        a.sort_by(f64::total_cmp);
        out.push(crate::parisi::encode_steps(&q, &a));
    }
    out
}

/// Minimizes `Q_β` over k-step order parameters whose last knot is `q̂`.
pub fn cs_minimize(beta: &TemperatureVector, k: usize, num: &ParisiNumerics) -> Result<CSResult> {
    const OP: &str = "cs_minimize";
    num.validate()?;
    if k > 8 {
        return Err(Error::usage(OP, format!("k = {k} exceeds the supported RSB level 8")));
    }
    let alpha_star = if k == 0 || beta.entries().iter().all(|&b| b == 0.0) {
        StepDistribution::delta_zero().with_qhat(0.0)?
    } else {
        let f = |theta: &[f64]| -> Result<f64> { cs_functional(beta, &decode(theta, k)?) };
        let best = multistart(&crate::parisi::simplex_for(num), &f, starts(k, num.multistart, num.seed))
            .map_err(|e| match e {
                Error::Numerics { msg, best, .. } => Error::numerics(OP, msg, best),
                other => other,
            })?;
        decode(&best.x, k)?
    };
    let value = cs_functional(beta, &alpha_star)?;
    let partials = (1..=beta.truncation())
        .map(|p| spherical_partial(beta, &alpha_star, p))
        .collect();
    Ok(CSResult {
        qhat_at_cap: alpha_star.qhat().is_some_and(|q| q >= QHAT_CAP),
        alpha_star,
        value,
        partials,
    })
}

/// `β ↦ F(β)` of the spherical model via [`cs_minimize`].
#[derive(Debug, Clone)]
pub struct SphericalFreeEnergy {
    pub truncation: usize,
    pub k: usize,
    pub num: ParisiNumerics,
}

impl FreeEnergy for SphericalFreeEnergy {
    fn name(&self) -> &str {
        "spherical"
    }

    fn dim(&self) -> usize {
        self.truncation
    }

    fn value(&self, beta: &[f64]) -> Result<f64> {
        Ok(cs_minimize(&TemperatureVector::new(beta.to_vec())?, self.k, &self.num)?.value)
    }

    fn scaled_gradient(&self, beta: &[f64]) -> Option<Result<Vec<f64>>> {
        Some(
            TemperatureVector::new(beta.to_vec())
                .and_then(|b| cs_minimize(&b, self.k, &self.num))
                .map(|r| spherical_energy_integrals(&r.alpha_star, self.truncation)),
        )
    }
}

/// Checks `V(m) = ½Λ(α*)` at the energy matched to the minimizer, and that
/// minimizing `½Λ(α′) + ½∫α′ξ_β′` over a family of minimizers recovers `F(β)`.
///
/// The ½ is the one in front of `Q_β`: since `½∫αξ_β′ = ½Σ β_p² m_p`, the
/// transform pairs `F` with `½Λ`.
pub fn verify_thm10(beta: &TemperatureVector, k: usize, num: &ParisiNumerics) -> Result<DualityReport> {
    let own = cs_minimize(beta, k, num)?;
    let lambda = lambda_functional(&own.alpha_star)?;
    let m = EnergyVector::new(spherical_energy_integrals(&own.alpha_star, beta.truncation()))?;
    let handle = SphericalFreeEnergy {
        truncation: beta.truncation(),
        k,
        num: *num,
    };
    let bmax = beta.entries().iter().fold(0.0f64, |a, &b| a.max(b));
    let search = SearchBox {
        hi: (4.0 * bmax).max(1.0),
        ..SearchBox::default()
    };
    let mut report = DualityReport::new("spherical", Direction::FToV);
    let sup = legendre_sup_v(&handle, &m, &search)?;
    report.push(
        DualityPoint::new("V", sup.value, 0.5 * lambda)
            .at_beta(beta.entries())
            .at_energy(m.entries())
            .with_optimizer(&sup.beta_star)
            .flags(sup.boundary, sup.flat),
    );
    let mut best = (f64::INFINITY, 0.0);
    for s in crate::parisi::FAMILY {
        let b = TemperatureVector::new(beta.entries().iter().map(|x| x * s).collect())?;
        let alpha = cs_minimize(&b, k, num)?.alpha_star;
        let v = cs_functional(beta, &alpha)?;
        if v < best.0 {
            best = (v, s);
        }
    }
    report.push(
        DualityPoint::new("family", best.0, own.value)
            .at_beta(beta.entries())
            .with_optimizer(&[best.1]),
    );
    // moving q̂ up inside the final level-1 block leaves Q unchanged
    let qhat = own.alpha_star.qhat().unwrap_or(0.0);
    let moved = own.alpha_star.clone().with_qhat(qhat + (QHAT_CAP - qhat) / 2.0)?;
    let q_moved = cs_functional(beta, &moved)?;
    report.push(DualityPoint::new("qhat", q_moved, own.value).at_beta(beta.entries()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: &[f64]) -> TemperatureVector {
        TemperatureVector::new(v.to_vec()).unwrap()
    }

    fn half() -> StepDistribution {
        StepDistribution::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Some(0.5)).unwrap()
    }

    #[test]
    fn functional_examples() {
        let b = tv(&[0.0, 2.0]);
        let one = StepDistribution::delta_zero().with_qhat(0.0).unwrap();
        assert!((cs_functional(&b, &one).unwrap() - 0.5).abs() < 1e-15);
        let one3 = StepDistribution::delta_zero().with_qhat(0.3).unwrap();
        assert!((cs_functional(&b, &one3).unwrap() - 0.5).abs() < 1e-15);
        let v = cs_functional(&tv(&[0.0]), &half()).unwrap();
        assert!((v - 0.5 * (1.0 + 0.5f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_functional(&StepDistribution::delta_zero().with_qhat(0.0).unwrap()).unwrap(), 0.0);
        let l = lambda_functional(&StepDistribution::delta_zero().with_qhat(0.3).unwrap()).unwrap();
        assert!(l.abs() < 1e-15);
        assert!((lambda_functional(&half()).unwrap() - (1.0 + 0.5f64.ln())).abs() < 1e-15);
        let e = lambda_functional(&StepDistribution::delta_zero()).unwrap_err();
        assert_eq!(e.kind(), crate::ErrorKind::Usage);
    }

    #[test]
    fn partial_examples() {
        let one = StepDistribution::delta_zero();
        assert_eq!(spherical_partial(&tv(&[1.0]), &one, 1), 0.5);
        assert_eq!(spherical_partial(&tv(&[0.0, 2.0]), &one, 2), 0.5);
        assert_eq!(spherical_partial(&tv(&[0.0, 2.0]), &one, 1), 0.0);
    }

    #[test]
    fn high_temperature_minimizer_is_annealed() {
        let b = tv(&[0.0, 0.2]);
        for k in 0..=2 {
            let r = cs_minimize(&b, k, &ParisiNumerics::default()).unwrap();
            assert!((r.value - 0.005).abs() < 1e-12, "k={k} {}", r.value);
        }
        let z = cs_minimize(&tv(&[0.0, 0.0]), 2, &ParisiNumerics::default()).unwrap();
        assert_eq!(z.value, 0.0);
    }
}
