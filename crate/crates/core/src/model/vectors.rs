use crate::error::{Error, Result};
use crate::math::powi;
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Truncated inverse-temperature sequence `(β_1, …, β_P)`.
///
/// Entries may be zero: such points sit on the boundary of the positive cone
/// and are handled by continuity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TemperatureVector(Vec<f64>);

impl TryFrom<Vec<f64>> for TemperatureVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        TemperatureVector::new(v)
    }
}

impl From<TemperatureVector> for Vec<f64> {
    fn from(t: TemperatureVector) -> Self {
        t.0
    }
}

impl TemperatureVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        const OP: &str = "TemperatureVector::new";
        if entries.is_empty() {
            return Err(Error::usage(OP, "truncation P must be at least 1"));
        }
        if let Some(b) = entries.iter().find(|b| !b.is_finite() || **b < 0.0) {
            return Err(Error::domain(OP, format!("beta entry {b} must be finite and >= 0")));
        }
        Ok(TemperatureVector(entries))
    }

    pub fn scalar(beta: f64) -> Result<Self> {
        Self::new(alloc::vec![beta])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn truncation(&self) -> usize {
        self.0.len()
    }

    /// `β_p` for `p ≥ 1`, zero past the truncation.
    pub fn get(&self, p: usize) -> f64 {
        if p == 0 {
            0.0
        } else {
            self.0.get(p - 1).copied().unwrap_or(0.0)
        }
    }

    /// `ξ_β(q) = Σ 2^{-p} β_p² q^p`.
    pub fn xi_beta(&self, q: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, b)| b * b * powi(q / 2.0, i as u32 + 1))
            .sum()
    }

    pub fn xi_beta_prime(&self, q: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let p = i as u32 + 1;
                b * b * p as f64 * powi(q, p - 1) / powi(2.0, p)
            })
            .sum()
    }

    /// `ξ_β` or `ξ_β′` at `q ∈ [0, 1]`.
    pub fn xi_beta_eval(&self, q: f64, order: u32) -> Result<f64> {
        const OP: &str = "xi_beta_eval";
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(OP, format!("q = {q} outside [0, 1]")));
        }
        match order {
            0 => Ok(self.xi_beta(q)),
            1 => Ok(self.xi_beta_prime(q)),
            _ => Err(Error::usage(OP, format!("derivative order {order} not in {{0, 1}}"))),
        }
    }
}

/// Truncated scaled-energy sequence `(m_1, …, m_P)` with every `m_p > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EnergyVector(Vec<f64>);

impl TryFrom<Vec<f64>> for EnergyVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        EnergyVector::new(v)
    }
}

impl From<EnergyVector> for Vec<f64> {
    fn from(m: EnergyVector) -> Self {
        m.0
    }
}

impl EnergyVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        const OP: &str = "EnergyVector::new";
        if entries.is_empty() {
            return Err(Error::usage(OP, "truncation P must be at least 1"));
        }
        if let Some(m) = entries.iter().find(|m| !m.is_finite() || **m <= 0.0) {
            return Err(Error::domain(OP, format!("energy entry {m} must be finite and > 0")));
        }
        Ok(EnergyVector(entries))
    }

    pub fn scalar(m: f64) -> Result<Self> {
        Self::new(alloc::vec![m])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn truncation(&self) -> usize {
        self.0.len()
    }
}
