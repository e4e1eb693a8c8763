//! Exact finite-`N` oracle: Gaussian disorder, enumeration of `{±1}^N`, the
//! free energies `F_N` and `V_N`, the pointwise duality inequality, disorder
//! averages and sup-norm statistics.

mod sample;
mod stats;

pub use sample::{sample_disorder, sample_disorder_with, DisorderModel, DisorderSample, FiniteNLimits};
pub use stats::{
    disorder_average, disorder_average_with, replica_seed, sup_norm_stats, sup_norm_summary, Average,
    FiniteNFreeEnergy, Job, Operation, SupNormStats, SupNormSummary,
};

use crate::error::{Error, Result};
use crate::math::{LogSumExp, LN_2};
use crate::model::{EnergyVector, TemperatureVector};
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// A temperature given either as one `β` for every degree or per degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Temperature {
    Scalar(f64),
    Vector(TemperatureVector),
}

impl From<f64> for Temperature {
    fn from(b: f64) -> Self {
        Temperature::Scalar(b)
    }
}

impl From<TemperatureVector> for Temperature {
    fn from(b: TemperatureVector) -> Self {
        Temperature::Vector(b)
    }
}

/// A scaled energy given either as one `m` for every degree or per degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Energy {
    Scalar(f64),
    Vector(EnergyVector),
}

impl From<f64> for Energy {
    fn from(m: f64) -> Self {
        Energy::Scalar(m)
    }
}

impl From<EnergyVector> for Energy {
    fn from(m: EnergyVector) -> Self {
        Energy::Vector(m)
    }
}

impl Temperature {
    /// `β` for each component of the sample.
    pub(crate) fn per_component(&self, sample: &DisorderSample) -> Result<Vec<f64>> {
        match self {
            Temperature::Scalar(b) if *b >= 0.0 && b.is_finite() => Ok(alloc::vec![*b; sample.components()]),
            Temperature::Scalar(b) => Err(Error::domain("finite_n", format!("beta = {b} must be >= 0"))),
            Temperature::Vector(v) => Ok(sample.degrees().iter().map(|&p| v.get(p as usize)).collect()),
        }
    }
}

impl Energy {
    pub(crate) fn per_component(&self, sample: &DisorderSample) -> Result<Vec<f64>> {
        match self {
            Energy::Scalar(m) if *m > 0.0 && m.is_finite() => Ok(alloc::vec![*m; sample.components()]),
            Energy::Scalar(m) => Err(Error::domain("finite_n", format!("m = {m} must be > 0"))),
            Energy::Vector(v) => sample
                .degrees()
                .iter()
                .map(|&p| {
                    v.entries().get(p as usize - 1).copied().ok_or_else(|| {
                        Error::usage("finite_n", format!("energy vector has no entry for degree {p}"))
                    })
                })
                .collect(),
        }
    }
}

/// `F_N(β) = (1/N) log ∫ exp(Σ_p β_p H_{N,p}) dν_N` with `ν_N` uniform.
pub fn exact_free_energy(sample: &DisorderSample, beta: impl Into<Temperature>) -> Result<f64> {
    let b = beta.into().per_component(sample)?;
    let n = sample.n() as f64;
    let mut lse = LogSumExp::new();
    sample.visit(|h| lse.push(h.iter().zip(&b).map(|(x, y)| x * y).sum()))?;
    Ok((lse.value() - n * LN_2) / n)
}

/// `V_N(m) = (1/N) log ∫ exp(Σ_p (N/2m_p)(H_{N,p}/N)²) dν_N`.
pub fn exact_squared_free_energy(sample: &DisorderSample, m: impl Into<Energy>) -> Result<f64> {
    let m = m.into().per_component(sample)?;
    let n = sample.n() as f64;
    let mut lse = LogSumExp::new();
    sample.visit(|h| lse.push(h.iter().zip(&m).map(|(x, y)| x * x / (2.0 * n * y)).sum()))?;
    Ok((lse.value() - n * LN_2) / n)
}

/// `V_N(m) − F_N(β) + ½ Σ_p β_p² m_p`, nonnegative for every realization.
pub fn finite_n_inequality_check(
    sample: &DisorderSample,
    beta: impl Into<Temperature>,
    m: impl Into<Energy>,
) -> Result<f64> {
    let beta = beta.into();
    let m = m.into();
    let b = beta.per_component(sample)?;
    let mm = m.per_component(sample)?;
    let v = exact_squared_free_energy(sample, m)?;
    let f = exact_free_energy(sample, beta)?;
    Ok(v - f + 0.5 * b.iter().zip(&mm).map(|(x, y)| x * x * y).sum::<f64>())
}
