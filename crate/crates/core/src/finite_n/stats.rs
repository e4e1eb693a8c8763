use super::{
    exact_free_energy, exact_squared_free_energy, finite_n_inequality_check, sample_disorder_with, DisorderModel,
    DisorderSample, Energy, FiniteNLimits, Temperature,
};
use crate::duality::FreeEnergy;
use crate::error::{Error, Result};
use crate::math::{mix64, powi, sqrt};
use crate::model::MixtureSpec;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operation", rename_all = "snake_case")]
pub enum Operation {
    /// `F_N(β)`. With `centered`, the σ-independent part of the Hamiltonian,
    /// which has mean zero over the disorder, is left out; this keeps the
    /// mean and removes most of the spread at small `N`.
    FreeEnergy { beta: Temperature, centered: bool },
    SquaredFreeEnergy { m: Energy },
    Inequality { beta: Temperature, m: Energy },
    /// Largest `sup_σ |H_{N,p}(σ)| / N` over the degrees.
    SupNorm,
}

/// What to compute on each replica.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub model: DisorderModel,
    pub spec: Option<MixtureSpec>,
    pub n: usize,
    #[serde(flatten)]
    pub operation: Operation,
}

impl Job {
    pub fn evaluate(&self, sample: &DisorderSample) -> Result<f64> {
        match &self.operation {
            Operation::FreeEnergy { beta, centered } => {
                let f = exact_free_energy(sample, beta.clone())?;
                if !centered {
                    return Ok(f);
                }
                let b = beta.per_component(sample)?;
                let shift: f64 = sample.constant_terms().iter().zip(&b).map(|(c, x)| c * x).sum();
                Ok(f - shift / sample.n() as f64)
            }
            Operation::SquaredFreeEnergy { m } => exact_squared_free_energy(sample, m.clone()),
            Operation::Inequality { beta, m } => finite_n_inequality_check(sample, beta.clone(), m.clone()),
            Operation::SupNorm => Ok(sup_norm_stats(sample)?
                .sup_abs
                .iter()
                .fold(0.0f64, |a, &b| a.max(b))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Average {
    pub mean: f64,
    pub stderr: f64,
    /// Per-replica values in replica order.
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
}

/// Seed of replica `r`; independent of `N`, so systems of different sizes
/// built from the same base seed share their couplings.
pub fn replica_seed(base_seed: u64, r: usize) -> u64 {
    mix64(base_seed ^ mix64(r as u64 + 1))
}

/// Mean and standard error of `f` over `replicas` independent samples.
pub fn disorder_average_with<F>(
    model: DisorderModel,
    spec: Option<&MixtureSpec>,
    n: usize,
    replicas: usize,
    base_seed: u64,
    limits: &FiniteNLimits,
    f: F,
) -> Result<Average>
where
    F: Fn(&DisorderSample) -> Result<f64> + Sync + Send,
{
    if replicas < 2 {
        return Err(Error::usage("disorder_average", "need at least two replicas"));
    }
    let seeds: Vec<u64> = (0..replicas).map(|r| replica_seed(base_seed, r)).collect();
    let values = crate::par::map(seeds.clone(), |seed| {
        let s = sample_disorder_with(model, spec, n, seed, limits)?;
        f(&s)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    let stderr = if values.iter().all(|&v| v == values[0]) {
        0.0
    } else {
        sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0) / r)
    };
    Ok(Average {
        mean,
        stderr,
        values,
        seeds,
    })
}

pub fn disorder_average(job: &Job, replicas: usize, base_seed: u64) -> Result<Average> {
    disorder_average_with(
        job.model,
        job.spec.as_ref(),
        job.n,
        replicas,
        base_seed,
        &FiniteNLimits::default(),
        |s| job.evaluate(s),
    )
}

/// Exact extremes of each component over `{±1}^N`, divided by `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupNormStats {
    pub degrees: Vec<u32>,
    pub sup: Vec<f64>,
    pub inf: Vec<f64>,
    pub sup_abs: Vec<f64>,
}

pub fn sup_norm_stats(sample: &DisorderSample) -> Result<SupNormStats> {
    let d = sample.components();
    let mut sup = vec![f64::NEG_INFINITY; d];
    let mut inf = vec![f64::INFINITY; d];
    sample.visit(|h| {
        for i in 0..d {
            sup[i] = sup[i].max(h[i]);
            inf[i] = inf[i].min(h[i]);
        }
    })?;
    let n = sample.n() as f64;
    let sup: Vec<f64> = sup.iter().map(|x| x / n).collect();
    let inf: Vec<f64> = inf.iter().map(|x| x / n).collect();
    Ok(SupNormStats {
        degrees: sample.degrees().to_vec(),
        sup_abs: sup.iter().zip(&inf).map(|(a, b)| a.max(-b)).collect(),
        sup,
        inf,
    })
}

/// Replica summary of [`SupNormStats`]: the symmetry of `H` and `−H`
/// compared through `sup H` and `−inf H`, and the smallest `C₁` with
/// `mean sup |H_p|/N ≤ C₁ 2^{-p/2}` for every degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupNormSummary {
    pub degrees: Vec<u32>,
    pub mean_sup: Vec<f64>,
    pub mean_neg_inf: Vec<f64>,
    /// Standard error of the paired difference `sup H + inf H`.
    pub stderr_diff: Vec<f64>,
    /// `(mean_sup − mean_neg_inf) / stderr_diff`, `0` when both vanish.
    pub z: Vec<f64>,
    pub mean_sup_abs: Vec<f64>,
    pub envelope_c1: f64,
}

pub fn sup_norm_summary(stats: &[SupNormStats]) -> Result<SupNormSummary> {
    if stats.len() < 2 {
        return Err(Error::usage("sup_norm_summary", "need at least two replicas"));
    }
    let degrees = stats[0].degrees.clone();
    let r = stats.len() as f64;
    let mean = |f: &dyn Fn(&SupNormStats) -> f64| stats.iter().map(f).sum::<f64>() / r;
    let mut out = SupNormSummary {
        degrees: degrees.clone(),
        mean_sup: Vec::new(),
        mean_neg_inf: Vec::new(),
        stderr_diff: Vec::new(),
        z: Vec::new(),
        mean_sup_abs: Vec::new(),
        envelope_c1: 0.0,
    };
    for (i, &p) in degrees.iter().enumerate() {
        let ms = mean(&|s| s.sup[i]);
        let mi = mean(&|s| -s.inf[i]);
        let md = ms - mi;
        let var = stats
            .iter()
            .map(|s| {
                let d = s.sup[i] + s.inf[i] - md;
                d * d
            })
            .sum::<f64>()
            / (r - 1.0);
        let se = sqrt(var / r);
        let ma = mean(&|s| s.sup_abs[i]);
        out.mean_sup.push(ms);
        out.mean_neg_inf.push(mi);
        out.stderr_diff.push(se);
        out.z.push(if se > 0.0 { md / se } else { 0.0 });
        out.mean_sup_abs.push(ma);
        out.envelope_c1 = out.envelope_c1.max(ma * sqrt(powi(2.0, p)));
    }
    Ok(out)
}

/// `β ↦ F_N(β)` of one fixed sample, with the same `β` on every degree.
pub struct FiniteNFreeEnergy<'a> {
    pub sample: &'a DisorderSample,
}

impl FreeEnergy for FiniteNFreeEnergy<'_> {
    fn name(&self) -> &str {
        "oracle"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> Result<f64> {
        match beta {
            [b] => exact_free_energy(self.sample, *b),
            _ => Err(Error::usage("oracle", "expected one coordinate")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_job_has_zero_stderr() {
        let a = disorder_average_with(DisorderModel::Rem, None, 3, 5, 1, &FiniteNLimits::default(), |_| Ok(0.1))
            .unwrap();
        assert_eq!(a.stderr, 0.0);
        assert_eq!(a.values.len(), 5);
    }

    #[test]
    fn zero_hook_supnorm_is_zero() {
        let s = sample_disorder_with(
            DisorderModel::IsingMixed,
            Some(&MixtureSpec::sk()),
            4,
            2,
            &FiniteNLimits::default(),
        )
        .unwrap()
        .with_zero_couplings();
        let st = sup_norm_stats(&s).unwrap();
        assert_eq!(st.sup_abs, vec![0.0]);
    }
}
