use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// A right-continuous nondecreasing step function `α` on `[0, 1]` with
/// `α(1) = 1`.
///
/// `knots` is `0 = q_0 < q_1 < … < q_{k+1} = 1` and `levels[l]` is the value on
/// `[q_l, q_{l+1})`. The optional `qhat < 1` marks a point with `α(q̂) = 1`,
/// which the spherical functional needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr", into = "StepRepr")]
pub struct StepDistribution {
    knots: Vec<f64>,
    levels: Vec<f64>,
    qhat: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct StepRepr {
    knots: Vec<f64>,
    levels: Vec<f64>,
    #[serde(default)]
    qhat: Option<f64>,
}

impl TryFrom<StepRepr> for StepDistribution {
    type Error = Error;

    fn try_from(r: StepRepr) -> Result<Self> {
        StepDistribution::new(r.knots, r.levels, r.qhat)
    }
}

impl From<StepDistribution> for StepRepr {
    fn from(s: StepDistribution) -> Self {
        StepRepr {
            knots: s.knots,
            levels: s.levels,
            qhat: s.qhat,
        }
    }
}

impl StepDistribution {
    pub fn new(knots: Vec<f64>, levels: Vec<f64>, qhat: Option<f64>) -> Result<Self> {
        const OP: &str = "StepDistribution::new";
        if levels.is_empty() || knots.len() != levels.len() + 1 {
            return Err(Error::usage(
                OP,
                format!("{} knots do not bound {} levels", knots.len(), levels.len()),
            ));
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 {
            return Err(Error::domain(OP, "knots must start at 0 and end at 1"));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain(OP, "knots must be strictly increasing"));
        }
        if levels.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::domain(OP, "levels must lie in [0, 1]"));
        }
        if levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain(OP, "levels must be nondecreasing"));
        }
        let s = StepDistribution { knots, levels, qhat: None };
        match qhat {
            None => Ok(s),
            Some(q) => s.with_qhat(q),
        }
    }

    /// Builds a step function from possibly repeated interior knots,
    /// dropping empty intervals and merging equal neighbouring levels.
    ///
    /// `interior` must be nondecreasing in `[0, 1]` and have one entry fewer
    /// than `levels`.
    pub fn from_steps(interior: &[f64], levels: &[f64], qhat: Option<f64>) -> Result<Self> {
        const OP: &str = "StepDistribution::from_steps";
        if levels.len() != interior.len() + 1 {
            return Err(Error::usage(OP, "need one more level than interior knots"));
        }
        let mut knots = alloc::vec![0.0];
        let mut lv: Vec<f64> = Vec::with_capacity(levels.len());
        for (l, &a) in levels.iter().enumerate() {
            let lo = if l == 0 { 0.0 } else { interior[l - 1] };
            let hi = interior.get(l).copied().unwrap_or(1.0);
            if !(hi > lo) {
                continue;
            }
            match lv.last() {
                Some(&prev) if prev == a => {
                    *knots.last_mut().unwrap() = hi;
                }
                _ => {
                    lv.push(a);
                    knots.push(hi);
                }
            }
        }
        if lv.is_empty() {
            return Err(Error::domain(OP, "interior knots leave no interval of positive length"));
        }
        *knots.last_mut().unwrap() = 1.0;
        Self::new(knots, lv, qhat)
    }

    /// `α ≡ 1`, the distribution function of `δ_0`.
    pub fn delta_zero() -> Self {
        StepDistribution {
            knots: alloc::vec![0.0, 1.0],
            levels: alloc::vec![1.0],
            qhat: None,
        }
    }

    /// `α = 1_{{1}}`, the distribution function of `δ_1`.
    pub fn delta_one() -> Self {
        StepDistribution {
            knots: alloc::vec![0.0, 1.0],
            levels: alloc::vec![0.0],
            qhat: None,
        }
    }

    pub fn constant(level: f64) -> Result<Self> {
        Self::new(alloc::vec![0.0, 1.0], alloc::vec![level], None)
    }

    /// Attaches `q̂`; fails unless `0 ≤ q̂ < 1` and `α(q̂) = 1`.
    pub fn with_qhat(mut self, qhat: f64) -> Result<Self> {
        const OP: &str = "StepDistribution::with_qhat";
        if !(0.0..1.0).contains(&qhat) {
            return Err(Error::domain(OP, format!("qhat = {qhat} must lie in [0, 1)")));
        }
        if self.at(qhat) != 1.0 {
            return Err(Error::domain(OP, format!("alpha(qhat) = {} but must equal 1", self.at(qhat))));
        }
        self.qhat = Some(qhat);
        Ok(self)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn qhat(&self) -> Option<f64> {
        self.qhat
    }

    /// Number of interior knots.
    pub fn k(&self) -> usize {
        self.levels.len() - 1
    }

    /// `(q_l, q_{l+1}, a_l)` for each interval.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.knots
            .windows(2)
            .zip(&self.levels)
            .map(|(w, &a)| (w[0], w[1], a))
    }

    /// `α(s)`, with `α(s) = 1` for `s ≥ 1`.
    pub fn at(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return 1.0;
        }
        let idx = self.knots[1..].partition_point(|&q| q <= s);
        self.levels[idx.min(self.levels.len() - 1)]
    }

    /// `∫₀¹ α(s) ds`.
    pub fn mass(&self) -> f64 {
        self.segments().map(|(lo, hi, a)| a * (hi - lo)).sum()
    }
}
