use super::{ParisiNumerics, ParisiSolver};
use crate::error::{Error, Result};
use crate::math::fabs;
use crate::model::{alpha_integral_xi_prime, MixtureSpec, StepDistribution};
use crate::optimize::{multistart, SimplexSearch};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParisiSolution {
    pub alpha_star: StepDistribution,
    /// `F(β)`.
    pub value: f64,
    pub phi00: f64,
    pub correction: f64,
    /// `F′(β)`.
    pub derivative: f64,
}

/// k-step order parameter from `2k + 1` unconstrained reals. Knots and levels
/// are clamped cumulative sums of absolute values, so `0` and `1` are reached
/// exactly and monotonicity holds by construction.
pub(crate) fn decode_steps(theta: &[f64], k: usize, cap: f64) -> (Vec<f64>, Vec<f64>) {
    let mut knots = Vec::with_capacity(k);
    let mut acc = 0.0;
    for t in &theta[..k] {
        acc += fabs(*t);
        knots.push(acc.min(cap));
    }
    let mut levels = Vec::with_capacity(k + 1);
    let mut acc = 0.0;
    for t in &theta[k..] {
        acc += fabs(*t);
        levels.push(acc.min(1.0));
    }
    (knots, levels)
}

/// Inverse of [`decode_steps`] for in-range monotone inputs.
pub(crate) fn encode_steps(knots: &[f64], levels: &[f64]) -> Vec<f64> {
    let mut theta = Vec::with_capacity(knots.len() + levels.len());
    let mut prev = 0.0;
    for &q in knots {
        theta.push(q - prev);
        prev = q;
    }
    prev = 0.0;
    for &a in levels {
        theta.push(a - prev);
        prev = a;
    }
    theta
}

/// Deterministic starting points: `α ≡ 1`, a replica-symmetric guess, then
/// seeded random monotone steps.
pub(crate) fn starting_points(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let even: Vec<f64> = (1..=k).map(|i| i as f64 / (k + 1) as f64).collect();
    let mut starts = Vec::with_capacity(count);
    starts.push(encode_steps(&even, &vec![1.0; k + 1]));
    if count > 1 {
        let mut lv: Vec<f64> = (0..=k).map(|i| if k == 0 { 0.5 } else { i as f64 / k as f64 }).collect();
        lv[0] = if k == 0 { 0.5 } else { 0.0 };
        starts.push(encode_steps(&even, &lv));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < count {
        let mut q: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        q.sort_by(f64::total_cmp);
        let mut a: Vec<f64> = (0..=k).map(|_| rng.random::<f64>()).collect();
        a.sort_by(f64::total_cmp);
        starts.push(encode_steps(&q, &a));
    }
    starts
}

pub(crate) fn simplex_for(num: &ParisiNumerics) -> SimplexSearch {
    SimplexSearch {
        ftol: num.outer_tol,
        max_evals: num.max_evals,
        ..SimplexSearch::default()
    }
}

/// Within this distance of `0` or `1` a knot or level is moved onto the end.
const SNAP: f64 = 1e-6;

/// Moves knots and levels that sit next to `0` or `1` onto them when the
/// objective does not get worse by more than `1e-12`. The optimizer only
/// approaches these ends, and exact values make the degenerate cases
/// (`α ≡ 1`, replica symmetry) recognizable downstream.
pub(crate) fn snap<F>(q: &[f64], a: &[f64], value: f64, eval: F) -> Result<StepDistribution>
where
    F: Fn(&[f64], &[f64]) -> Result<(f64, StepDistribution)>,
{
    let to_end = |x: f64| {
        if x < SNAP {
            0.0
        } else if x > 1.0 - SNAP {
            1.0
        } else {
            x
        }
    };
    let (_, original) = eval(q, a)?;
    let qs: Vec<f64> = q.iter().map(|&x| to_end(x)).collect();
    let as_: Vec<f64> = a.iter().map(|&x| to_end(x)).collect();
    if qs == q && as_ == a {
        return Ok(original);
    }
    match eval(&qs, &as_) {
        Ok((v, alpha)) if v <= value + 1e-12 => Ok(alpha),
        _ => Ok(original),
    }
}

impl ParisiSolver {
    /// Minimizes `P_β` over k-step order parameters.
    pub fn minimize(&self, beta: f64, k: usize) -> Result<ParisiSolution> {
        const OP: &str = "parisi_minimize";
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(OP, format!("beta = {beta} must be >= 0")));
        }
        if k > 8 {
            return Err(Error::usage(OP, format!("k = {k} exceeds the supported RSB level 8")));
        }
        let num = self.numerics();
        let objective = |theta: &[f64]| -> Result<f64> {
            let (q, a) = decode_steps(theta, k, 1.0);
            let alpha = StepDistribution::from_steps(&q, &a, None)?;
            self.functional(beta, &alpha)
        };
        let starts = starting_points(k, num.multistart, num.seed);
        let best = multistart(&simplex_for(num), &objective, starts).map_err(|e| match e {
            Error::Numerics { msg, best, .. } => Error::numerics(OP, msg, best),
            other => other,
        })?;
        let (q, a) = decode_steps(&best.x, k, 1.0);
        let alpha_star = snap(&q, &a, best.value, |q, a| {
            let alpha = StepDistribution::from_steps(q, a, None)?;
            Ok((self.functional(beta, &alpha)?, alpha))
        })?;
        self.solution(beta, alpha_star)
    }

    pub(crate) fn solution(&self, beta: f64, alpha_star: StepDistribution) -> Result<ParisiSolution> {
        let phi00 = self.pde_value(beta, &alpha_star)?;
        let correction = self.correction(beta, &alpha_star);
        Ok(ParisiSolution {
            derivative: ising_derivative(self.spec(), beta, &alpha_star),
            value: phi00 - correction,
            phi00,
            correction,
            alpha_star,
        })
    }
}

pub fn parisi_minimize(spec: &MixtureSpec, beta: f64, k: usize, num: &ParisiNumerics) -> Result<ParisiSolution> {
    ParisiSolver::new(spec, num)?.minimize(beta, k)
}

/// `F′(β) = β ∫ α* ξ′`.
pub fn ising_derivative(spec: &MixtureSpec, beta: f64, alpha_star: &StepDistribution) -> f64 {
    beta * alpha_integral_xi_prime(spec, alpha_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_roundtrip() {
        let th = encode_steps(&[0.2, 0.7], &[0.1, 0.4, 1.0]);
        let (q, a) = decode_steps(&th, 2, 1.0);
        assert!(q.iter().zip([0.2, 0.7]).all(|(x, y)| (x - y).abs() < 1e-15));
        assert!(a.iter().zip([0.1, 0.4, 1.0]).all(|(x, y)| (x - y).abs() < 1e-15));
    }

    #[test]
    fn decode_clamps_and_is_monotone() {
        let (q, a) = decode_steps(&[0.8, -0.9, 0.5, -0.7, 0.1], 2, 1.0);
        assert_eq!(q, vec![0.8, 1.0]);
        assert_eq!(a, vec![0.5, 1.0, 1.0]);
    }

    #[test]
    fn starts_are_deterministic() {
        assert_eq!(starting_points(2, 6, 3), starting_points(2, 6, 3));
        assert_eq!(starting_points(1, 8, 1).len(), 8);
    }
}
