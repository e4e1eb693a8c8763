use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "F_to_V")]
    FToV,
    #[serde(rename = "V_to_F")]
    VToF,
    #[serde(rename = "roundtrip")]
    Roundtrip,
}

/// One compared quantity: `value` was computed, `reference` is what it should
/// equal, `gap = |value − reference|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityPoint {
    pub label: String,
    pub beta: Vec<f64>,
    pub m: Vec<f64>,
    pub value: f64,
    pub reference: f64,
    pub gap: f64,
    /// Located β* or m*, when the comparison involved an optimization.
    pub optimizer: Vec<f64>,
    pub boundary_attained: bool,
    pub flat_objective: bool,
}

impl DualityPoint {
    pub fn new(label: impl Into<String>, value: f64, reference: f64) -> Self {
        DualityPoint {
            label: label.into(),
            beta: Vec::new(),
            m: Vec::new(),
            value,
            reference,
            gap: (value - reference).abs(),
            optimizer: Vec::new(),
            boundary_attained: false,
            flat_objective: false,
        }
    }

    pub fn at_beta(mut self, beta: &[f64]) -> Self {
        self.beta = beta.to_vec();
        self
    }

    pub fn at_energy(mut self, m: &[f64]) -> Self {
        self.m = m.to_vec();
        self
    }

    pub fn with_optimizer(mut self, opt: &[f64]) -> Self {
        self.optimizer = opt.to_vec();
        self
    }

    pub fn flags(mut self, boundary: bool, flat: bool) -> Self {
        self.boundary_attained = boundary;
        self.flat_objective = flat;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub model: String,
    pub direction: Direction,
    pub max_gap: f64,
    pub points: Vec<DualityPoint>,
}

impl DualityReport {
    pub fn new(model: impl Into<String>, direction: Direction) -> Self {
        DualityReport {
            model: model.into(),
            direction,
            max_gap: 0.0,
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, p: DualityPoint) {
        // NaN gaps must not hide behind a max
        self.max_gap = if p.gap.is_nan() { f64::NAN } else { self.max_gap.max(p.gap) };
        self.points.push(p);
    }

    /// Largest gap among points whose label starts with `prefix`.
    pub fn max_gap_of(&self, prefix: &str) -> Option<f64> {
        self.points
            .iter()
            .filter(|p| p.label.starts_with(prefix))
            .map(|p| p.gap)
            .fold(None, |acc, g| Some(acc.map_or(g, |a: f64| a.max(g))))
    }

    pub fn boundary_attained(&self) -> bool {
        self.points.iter().any(|p| p.boundary_attained)
    }

    pub fn flat_objective(&self) -> bool {
        self.points.iter().any(|p| p.flat_objective)
    }
}
