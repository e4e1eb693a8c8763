use crate::error::{Error, Result};
use crate::model::{alpha_integral_xi_prime, MixtureSpec, StepDistribution};
use crate::optimize::multistart;
use crate::parisi::{decode_steps, starting_points, GammaMember, ParisiNumerics, ParisiSolver, FAMILY};
use crate::report::{Direction, DualityPoint, DualityReport};
use alloc::format;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// A bounded function on `[0, 1]` sampled on a uniform grid and read as its
/// piecewise-linear interpolant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    values: Vec<f64>,
    // cumulative integral of the interpolant from 0 to each node
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        const OP: &str = "GridFunction";
        if values.len() < 2 {
            return Err(Error::usage(OP, "grid needs at least two points"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(OP, "values must be finite"));
        }
        let h = 1.0 / (values.len() - 1) as f64;
        let mut cumulative = Vec::with_capacity(values.len());
        cumulative.push(0.0);
        for w in values.windows(2) {
            let c = cumulative.last().unwrap() + h * (w[0] + w[1]) / 2.0;
            cumulative.push(c);
        }
        Ok(GridFunction { values, cumulative })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::usage("GridFunction", "grid needs at least two points"));
        }
        Self::new((0..n).map(|i| f(i as f64 / (n - 1) as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn h(&self) -> f64 {
        1.0 / (self.values.len() - 1) as f64
    }

    fn cell(&self, s: f64) -> (usize, f64) {
        let u = s.clamp(0.0, 1.0) / self.h();
        let j = (u as usize).min(self.values.len() - 2);
        (j, u - j as f64)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let (j, b) = self.cell(s);
        (1.0 - b) * self.values[j] + b * self.values[j + 1]
    }

    /// `∫₀^s f`.
    pub fn primitive(&self, s: f64) -> f64 {
        let (j, b) = self.cell(s);
        let x = b * self.h();
        let slope = (self.values[j + 1] - self.values[j]) / self.h();
        self.cumulative[j] + self.values[j] * x + slope * x * x / 2.0
    }

    /// `∫₀¹ α f`.
    pub fn against(&self, alpha: &StepDistribution) -> f64 {
        alpha
            .segments()
            .map(|(lo, hi, a)| if a == 0.0 { 0.0 } else { a * (self.primitive(hi) - self.primitive(lo)) })
            .sum()
    }
}

/// `L_*(f) = inf_α (∫αf + (β²/2)∫αξ′)`.
///
/// The functional is linear in `α`, so the infimum over nondecreasing
/// `[0,1]`-valued `α` is attained at an indicator `1_{[q,1]}` (with `q = 1`
/// giving the indicator of `{1}` and the value `0`). That one-dimensional
/// problem is solved exactly on the grid; a k-step simplex search from the
/// shared parametrization confirms it and the smaller value is returned.
pub fn l_star(f: &GridFunction, beta: f64, spec: &MixtureSpec, k: usize) -> Result<f64> {
    const OP: &str = "l_star";
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::domain(OP, format!("beta = {beta} must be >= 0")));
    }
    let c = beta * beta / 2.0;
    let xi1 = spec.xi(1.0);
    let f1 = f.primitive(1.0);
    // G(q) = ∫_q^1 (f + c ξ′)
    let g = |q: f64| (f1 - f.primitive(q)) + c * (xi1 - spec.xi(q));
    let h = |q: f64| f.eval(q) + c * spec.xi_prime(q);
    let n = f.len();
    let mut best = 0.0f64;
    for i in 0..n {
        let q = i as f64 / (n - 1) as f64;
        best = best.min(g(q));
        // G′ = −h, so local minima of G sit where h turns from positive to negative
        if i + 1 < n {
            let q1 = (i + 1) as f64 / (n - 1) as f64;
            if h(q) > 0.0 && h(q1) < 0.0 {
                let (mut lo, mut hi) = (q, q1);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if h(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                best = best.min(g(0.5 * (lo + hi)));
            }
        }
    }
    let objective = |theta: &[f64]| -> Result<f64> {
        let (q, a) = decode_steps(theta, k, 1.0);
        let alpha = StepDistribution::from_steps(&q, &a, None)?;
        Ok(f.against(&alpha) + c * alpha_integral_xi_prime(spec, &alpha))
    };
    let search = crate::optimize::SimplexSearch::default();
    let confirm = multistart(&search, &objective, starting_points(k, 4, 0x1)).map(|m| m.value);
    match confirm {
        Ok(v) => Ok(best.min(v)),
        Err(Error::Numerics { best: Some(v), .. }) => Ok(best.min(v)),
        Err(e) => Err(e),
    }
}

/// `Γ^*(f) = sup_α (∫αf − Γ(α))` over a finite family; a lower bound of the
/// sup over all distribution functions.
pub fn gamma_star(f: &GridFunction, family: &[GammaMember]) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::usage("gamma_star", "empty family"));
    }
    Ok(family
        .iter()
        .map(|m| if m.gamma.is_infinite() { f64::NEG_INFINITY } else { f.against(&m.alpha) - m.gamma })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryCheck {
    /// `F(β)`.
    pub free_energy: f64,
    /// `L_*`, `Γ^*` and `L_* − Γ^*` at the witness `f_β = −β²ξ′/2`.
    pub witness: [f64; 3],
    /// The same at `+β²ξ′/2`.
    pub opposite_sign: [f64; 3],
    /// `L_* − Γ^*` for each random candidate.
    pub candidates: Vec<f64>,
    /// `max(0, max candidate − F(β))`.
    pub max_excess: f64,
    pub report: DualityReport,
}

/// Grid size of the witness and candidate functions.
const GRID: usize = 2001;

/// Evaluates `L_*(f) − Γ^*(f)` at the witness `f_β = −β²ξ′/2`, at its
/// opposite sign, and at `n_candidates` random bounded functions, against
/// `F(β)`.
///
/// Report points: `L_star` (witness `L_*` against 0), `gamma_star` (witness
/// `Γ^*` against `−F`), `witness` (`L_* − Γ^*` against `F`) and `excess`
/// (largest candidate overshoot against 0).
pub fn corollary_check(
    spec: &MixtureSpec,
    beta: f64,
    k: usize,
    num: &ParisiNumerics,
    n_candidates: usize,
) -> Result<CorollaryCheck> {
    const OP: &str = "corollary_check";
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(OP, format!("beta = {beta} must be > 0")));
    }
    let solver = ParisiSolver::new(spec, num)?;
    let fe = solver.minimize(beta, k)?.value;
    let family = solver.gamma_family(beta, k, &FAMILY)?;
    let c = beta * beta / 2.0;
    let eval = |f: &GridFunction| -> Result<[f64; 3]> {
        let l = l_star(f, beta, spec, k)?;
        let g = gamma_star(f, &family)?;
        Ok([l, g, l - g])
    };
    let witness = eval(&GridFunction::from_fn(GRID, |s| -c * spec.xi_prime(s))?)?;
    let opposite_sign = eval(&GridFunction::from_fn(GRID, |s| c * spec.xi_prime(s))?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(num.seed ^ 0xc0_1105);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut candidates = Vec::with_capacity(n_candidates);
    for i in 0..n_candidates {
        let coef: Vec<f64> = (0..4).map(|_| draw() * c).collect();
        let around_witness = i % 2 == 0;
        let f = GridFunction::from_fn(GRID, |s| {
            let wave: f64 = coef
                .iter()
                .enumerate()
                .map(|(j, a)| a * libm::cos(j as f64 * core::f64::consts::PI * s))
                .sum();
            if around_witness {
                -c * spec.xi_prime(s) + 0.25 * wave
            } else {
                wave
            }
        })?;
        candidates.push(eval(&f)?[2]);
    }
    let max_excess = candidates.iter().fold(0.0f64, |a, &v| a.max(v - fe));
    let mut report = DualityReport::new("ising", Direction::VToF);
    report.push(DualityPoint::new("L_star", witness[0], 0.0).at_beta(&[beta]));
    report.push(DualityPoint::new("gamma_star", witness[1], -fe).at_beta(&[beta]));
    report.push(DualityPoint::new("witness", witness[2], fe).at_beta(&[beta]));
    report.push(DualityPoint::new("excess", max_excess, 0.0).at_beta(&[beta]));
    Ok(CorollaryCheck {
        free_energy: fe,
        witness,
        opposite_sign,
        candidates,
        max_excess,
        report,
    })
}
