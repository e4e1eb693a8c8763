use super::ParisiNumerics;
use crate::error::{Error, Result};
use crate::math::{ceil, expm1, log1p, log_cosh, sqrt};
use crate::model::{alpha_integral_s_xi_second, MixtureKind, MixtureSpec, StepDistribution};
use crate::quadrature::GaussHermite;
use crate::spline::EvenSpline;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// `Φ_{l}` during the backward recursion.
enum Field {
    /// `log cosh x + shift`: what every run of levels equal to 1 at the top
    /// of `[0, 1]` leaves behind.
    LogCosh { shift: f64 },
    Grid(EvenSpline),
}

impl Field {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        match self {
            Field::LogCosh { shift } => log_cosh(x) + shift,
            Field::Grid(s) => s.eval(x),
        }
    }
}

/// Widest Gaussian step handed to the quadrature rule.
const MAX_STEP_SIGMA: f64 = 1.25;

/// Evaluates the Parisi functional for a fixed mixture, reusing one
/// quadrature rule across calls.
#[derive(Debug, Clone)]
pub struct ParisiSolver {
    spec: MixtureSpec,
    num: ParisiNumerics,
    gh: GaussHermite,
    // quad_nodes · WIDE[i] nodes, for the final step at x = 0
    wide: Vec<GaussHermite>,
}

const WIDE: [usize; 3] = [2, 4, 8];

impl ParisiSolver {
    pub fn new(spec: &MixtureSpec, num: &ParisiNumerics) -> Result<Self> {
        if spec.kind() != MixtureKind::Ising {
            return Err(Error::usage("parisi_pde_value", "mixture kind must be ising"));
        }
        num.validate()?;
        Ok(ParisiSolver {
            spec: spec.clone(),
            num: *num,
            gh: GaussHermite::new(num.quad_nodes)?,
            wide: WIDE
                .iter()
                .map(|m| GaussHermite::new(m * num.quad_nodes))
                .collect::<Result<_>>()?,
        })
    }

    pub fn spec(&self) -> &MixtureSpec {
        &self.spec
    }

    pub fn numerics(&self) -> &ParisiNumerics {
        &self.num
    }

    /// `(1/a) log E exp(a f(x + σZ))`, or `E f(x + σZ)` when `a = 0`.
    ///
    /// Written around the plain mean so that small `a` loses no precision.
    #[inline]
    fn smooth(gh: &GaussHermite, f: &Field, a: f64, sigma: f64, x: f64, buf: &mut [f64]) -> f64 {
        if sigma == 0.0 {
            return f.eval(x);
        }
        let w = gh.weights();
        let mut mean = 0.0;
        for ((v, &z), &wi) in buf.iter_mut().zip(gh.nodes()).zip(w) {
            *v = f.eval(x + sigma * z);
            mean += wi * *v;
        }
        if a == 0.0 {
            return mean;
        }
        let s: f64 = buf.iter().zip(w).map(|(&v, &wi)| wi * expm1(a * (v - mean))).sum();
        mean + log1p(s) / a
    }

    /// `Φ_{α,β}(0, 0)`.
    pub fn pde_value(&self, beta: f64, alpha: &StepDistribution) -> Result<f64> {
        const OP: &str = "parisi_pde_value";
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(OP, format!("beta = {beta} must be >= 0")));
        }
        let spec = &self.spec;
        let sigma_total = beta * sqrt(spec.xi_prime(1.0));
        let x_max = match self.num.x_max {
            Some(x) => {
                if sigma_total > x / 4.0 {
                    return Err(Error::numerics(
                        OP,
                        format!(
                            "grid half-width x_max = {x} too small for beta = {beta} \
                             (need x_max >= {}); raise x_max or leave it automatic",
                            4.0 * sigma_total
                        ),
                        None,
                    ));
                }
                x
            }
            None => 12.0 + 4.0 * sigma_total,
        };
        let segs: Vec<(f64, f64, f64)> = alpha.segments().collect();
        let variance = |lo: f64, hi: f64| beta * beta * (spec.xi_prime(hi) - spec.xi_prime(lo));

        // trailing levels equal to 1 integrate in closed form
        let mut shift = 0.0;
        let mut top = segs.len();
        while top > 0 && segs[top - 1].2 == 1.0 {
            let (lo, hi, _) = segs[top - 1];
            shift += variance(lo, hi) / 2.0;
            top -= 1;
        }
        // a degree-1 term shifts the origin by a Gaussian field of variance β²ξ′(0)
        let mut steps: Vec<(f64, f64)> = segs[..top]
            .iter()
            .rev()
            .map(|&(lo, hi, a)| (a, variance(lo, hi).max(0.0)))
            .collect();
        steps.push((0.0, beta * beta * spec.xi_prime(0.0)));
        steps.retain(|&(_, v)| v > 0.0);
        // P_{σ²} = (P_{σ²/n})^n for both E f and (1/a) log E e^{af}. Grid
        // steps are split until each is narrow enough for the base rule; the
        // final step, needed only at x = 0, takes a larger rule instead, and
        // whatever that rule cannot cover goes back to the grid.
        let narrow = MAX_STEP_SIGMA * MAX_STEP_SIGMA;
        let last = steps.pop();
        let mut grid_steps: Vec<(f64, f64)> = Vec::new();
        let split = |a: f64, v: f64, out: &mut Vec<(f64, f64)>| {
            let n = ceil(v / narrow).max(1.0) as usize;
            out.extend(core::iter::repeat((a, sqrt(v / n as f64))).take(n));
        };
        for &(a, v) in &steps {
            split(a, v, &mut grid_steps);
        }
        let final_step = last.map(|(a, v)| {
            let need = ceil(v / narrow) as usize;
            if need <= 1 {
                return (a, sqrt(v), &self.gh);
            }
            match WIDE.iter().position(|&m| m >= need) {
                Some(i) => (a, sqrt(v), &self.wide[i]),
                None => {
                    let covered = WIDE[WIDE.len() - 1] as f64 * narrow;
                    split(a, v - covered, &mut grid_steps);
                    (a, sqrt(covered), &self.wide[WIDE.len() - 1])
                }
            }
        });
        let mut field = Field::LogCosh { shift };
        let mut buf = vec![0.0; self.gh.len()];
        let half = self.num.x_points / 2 + 1;
        let h = x_max / (half - 1) as f64;
        for &(a, sigma) in &grid_steps {
            let y: Vec<f64> = (0..half)
                .map(|j| Self::smooth(&self.gh, &field, a, sigma, j as f64 * h, &mut buf))
                .collect();
            field = Field::Grid(EvenSpline::new(h, y, 1.0));
        }
        let value = match final_step {
            None => field.eval(0.0),
            Some((a, sigma, gh)) => {
                let mut buf = vec![0.0; gh.len()];
                Self::smooth(gh, &field, a, sigma, 0.0, &mut buf)
            }
        };
        if !value.is_finite() {
            return Err(Error::numerics(OP, "non-finite PDE value", None));
        }
        Ok(value)
    }

    /// `(β²/2) ∫ α(s) s ξ″(s) ds`.
    pub fn correction(&self, beta: f64, alpha: &StepDistribution) -> f64 {
        beta * beta / 2.0 * alpha_integral_s_xi_second(&self.spec, alpha)
    }

    /// `P_β(α) = Φ_{α,β}(0, 0) − (β²/2) ∫ α s ξ″`.
    pub fn functional(&self, beta: f64, alpha: &StepDistribution) -> Result<f64> {
        Ok(self.pde_value(beta, alpha)? - self.correction(beta, alpha))
    }
}

pub fn parisi_pde_value(
    spec: &MixtureSpec,
    beta: f64,
    alpha: &StepDistribution,
    num: &ParisiNumerics,
) -> Result<f64> {
    ParisiSolver::new(spec, num)?.pde_value(beta, alpha)
}

pub fn parisi_functional(
    spec: &MixtureSpec,
    beta: f64,
    alpha: &StepDistribution,
    num: &ParisiNumerics,
) -> Result<f64> {
    ParisiSolver::new(spec, num)?.functional(beta, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixtureKind;

    fn num() -> ParisiNumerics {
        ParisiNumerics::default()
    }

    #[test]
    fn annealed_closed_form() {
        let sk = MixtureSpec::sk();
        let v = parisi_pde_value(&sk, 0.8, &StepDistribution::delta_zero(), &num()).unwrap();
        assert!((v - 0.32).abs() < 1e-15);
        for beta in [0.3, 1.0, 1.7] {
            let p = parisi_functional(&sk, beta, &StepDistribution::delta_zero(), &num()).unwrap();
            assert!((p - beta * beta / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_temperature_is_boundary_value() {
        let sk = MixtureSpec::sk();
        let a = StepDistribution::new(alloc::vec![0.0, 0.3, 1.0], alloc::vec![0.2, 0.6], None).unwrap();
        assert_eq!(parisi_pde_value(&sk, 0.0, &a, &num()).unwrap(), 0.0);
        assert_eq!(parisi_functional(&sk, 0.0, &a, &num()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_spherical_kind_and_small_grid() {
        let sph = MixtureSpec::pure(MixtureKind::Spherical, 2, 1.0);
        let e = parisi_pde_value(&sph, 1.0, &StepDistribution::delta_zero(), &num()).unwrap_err();
        assert_eq!(e.kind(), crate::ErrorKind::Usage);
        let tight = ParisiNumerics {
            x_max: Some(2.0),
            ..num()
        };
        let e = parisi_pde_value(&MixtureSpec::sk(), 1.0, &StepDistribution::delta_one(), &tight).unwrap_err();
        assert_eq!(e.kind(), crate::ErrorKind::Numerics);
    }

    #[test]
    fn replica_symmetric_closed_form() {
        // α = 1_{[q,1]}: P = E log cosh(β√q Z) + β²(1−q)²/4 for ξ = s²/2
        let sk = MixtureSpec::sk();
        let gh = GaussHermite::new(120).unwrap();
        for (beta, q) in [(1.2, 0.3), (1.5, 0.6)] {
            let a = StepDistribution::new(alloc::vec![0.0, q, 1.0], alloc::vec![0.0, 1.0], None).unwrap();
            let p = parisi_functional(&sk, beta, &a, &num()).unwrap();
            let rs = gh.expect(|z| log_cosh(beta * q.sqrt() * z)) + beta * beta * (1.0 - q) * (1.0 - q) / 4.0;
            assert!((p - rs).abs() < 1e-7, "{p} vs {rs}");
        }
    }
}
