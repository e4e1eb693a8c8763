use super::{ParisiNumerics, ParisiSolver};
use crate::error::{Error, Result};
use crate::model::{alpha_integral_xi_prime, MixtureSpec, StepDistribution};
use crate::optimize::{golden_max, Tie};
use crate::report::{Direction, DualityPoint, DualityReport};
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaResult {
    pub gamma: f64,
    pub beta_star: f64,
    /// The objective is constant on the bracket; `beta_star` is its midpoint.
    pub flat: bool,
    /// The sup is the `β → 0` limit `0` rather than an interior point.
    pub boundary: bool,
}

const PRESCAN: usize = 24;

impl ParisiSolver {
    /// `Γ(α) = sup_β (P_β(α) − (β²/2) ∫ α ξ′)`, searched on `bracket`.
    pub fn gamma(&self, alpha: &StepDistribution, bracket: (f64, f64)) -> Result<GammaResult> {
        const OP: &str = "gamma_transform";
        let (lo, hi) = bracket;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::usage(OP, format!("bracket ({lo}, {hi}) must satisfy 0 < lo < hi")));
        }
        let m = alpha_integral_xi_prime(self.spec(), alpha);
        let g = |b: f64| -> Result<f64> { Ok(self.functional(b, alpha)? - b * b / 2.0 * m) };
        let grid: Vec<f64> = (0..PRESCAN)
            .map(|i| lo + (hi - lo) * i as f64 / (PRESCAN - 1) as f64)
            .collect();
        let vals = crate::par::map(grid.clone(), g)
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        let (mut imax, mut vmax) = (0, f64::NEG_INFINITY);
        let mut vmin = f64::INFINITY;
        for (i, &v) in vals.iter().enumerate() {
            if v >= vmax {
                imax = i;
                vmax = v;
            }
            vmin = vmin.min(v);
        }
        let scale = 1.0 + vmax.abs();
        if vmax - vmin <= 1e-12 * scale {
            return Ok(GammaResult {
                gamma: vmax.max(0.0),
                beta_star: (lo + hi) / 2.0,
                flat: true,
                boundary: false,
            });
        }
        if imax == PRESCAN - 1 && vals[PRESCAN - 1] > vals[PRESCAN - 2] {
            return Err(Error::numerics(
                OP,
                format!("objective still increasing at beta = {hi}; widen the bracket"),
                Some(vmax),
            ));
        }
        let (best, beta_star) = if imax == 0 {
            (vmax, lo)
        } else {
            let a = grid[imax - 1];
            let b = grid[(imax + 1).min(PRESCAN - 1)];
            let r = golden_max(g, a, b, 1e-7, Tie::Right)?;
            (r.value.max(vmax), r.x)
        };
        // P_0(α) = 0, so the sup is at least the β → 0 limit
        if best < 0.0 {
            return Ok(GammaResult {
                gamma: 0.0,
                beta_star: 0.0,
                flat: false,
                boundary: true,
            });
        }
        Ok(GammaResult {
            gamma: best,
            beta_star,
            flat: false,
            boundary: imax == 0,
        })
    }
}

pub fn gamma_transform(
    spec: &MixtureSpec,
    alpha: &StepDistribution,
    num: &ParisiNumerics,
    beta_bracket: (f64, f64),
) -> Result<GammaResult> {
    ParisiSolver::new(spec, num)?.gamma(alpha, beta_bracket)
}

/// Relative spread of the `β′` family used for the second identity.
pub(crate) const FAMILY: [f64; 5] = [0.5, 0.75, 1.0, 1.25, 1.5];

/// An order parameter with its transform `Γ(α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaMember {
    /// The temperature `α` minimizes at, if any.
    pub beta: Option<f64>,
    pub alpha: StepDistribution,
    pub gamma: f64,
}

impl ParisiSolver {
    /// `α*(s β)` and `Γ(α*(s β))` for every scale `s`, plus `α ≡ 1` (with
    /// `Γ = 0`) and the indicator of `{1}` (with `Γ = ∞`).
    pub fn gamma_family(&self, beta: f64, k: usize, scales: &[f64]) -> Result<Vec<GammaMember>> {
        let mut out = scales
            .iter()
            .map(|s| {
                let b = s * beta;
                let alpha = self.minimize(b, k)?.alpha_star;
                let g = self.gamma(&alpha, (b / 8.0, 4.0 * b))?;
                Ok(GammaMember {
                    beta: Some(b),
                    alpha,
                    gamma: g.gamma,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let one = StepDistribution::delta_zero();
        let g = self.gamma(&one, (beta / 8.0, 4.0 * beta))?;
        out.push(GammaMember {
            beta: None,
            alpha: one,
            gamma: g.gamma,
        });
        // P_β(1_{{1}}) = E log cosh(β√ξ′(1) Z) grows linearly in β while the
        // penalty vanishes
        out.push(GammaMember {
            beta: None,
            alpha: StepDistribution::delta_one(),
            gamma: f64::INFINITY,
        });
        Ok(out)
    }
}

/// Checks `Γ(α*) = F(β) − β²m/2` with maximizer `β`, and that
/// `min_{α′} Γ(α′) + (β²/2)∫α′ξ′` over a family of minimizers recovers `F(β)`.
pub fn verify_thm7(spec: &MixtureSpec, beta: f64, k: usize, num: &ParisiNumerics) -> Result<DualityReport> {
    const OP: &str = "verify_thm7";
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(OP, format!("beta = {beta} must be > 0")));
    }
    let solver = ParisiSolver::new(spec, num)?;
    let mut report = DualityReport::new("ising", Direction::Roundtrip);
    let fam = solver.gamma_family(beta, k, &FAMILY)?;
    let own = solver.minimize(beta, k)?;
    let m = alpha_integral_xi_prime(spec, &own.alpha_star);
    let g = solver.gamma(&own.alpha_star, (beta / 8.0, 4.0 * beta))?;
    report.push(
        DualityPoint::new("gamma", g.gamma, own.value - beta * beta / 2.0 * m)
            .at_beta(&[beta])
            .at_energy(&[m])
            .with_optimizer(&[g.beta_star])
            .flags(g.boundary, g.flat),
    );
    if !g.flat {
        report.push(
            DualityPoint::new("argmax", g.beta_star, beta)
                .at_beta(&[beta])
                .flags(g.boundary, false),
        );
    }
    let mut best = (f64::INFINITY, 0.0);
    for mem in &fam {
        let v = mem.gamma + beta * beta / 2.0 * alpha_integral_xi_prime(spec, &mem.alpha);
        if v < best.0 {
            best = (v, mem.beta.unwrap_or(f64::NAN));
        }
    }
    report.push(
        DualityPoint::new("family", best.0, own.value)
            .at_beta(&[beta])
            .with_optimizer(&[best.1]),
    );
    Ok(report)
}
