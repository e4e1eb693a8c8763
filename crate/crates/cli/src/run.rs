//! Dispatch from a resolved [`RunConfig`] to the library, one table per run.

use crate::config::{Check, Command, Model, RunConfig};
use crate::table::{Cell, Table};
use crate::CliError;
use glassdual_core::duality::{
    concavity_check, corollary_check, legendre_sup_v, roundtrip_gap, stationary_energy, FreeEnergy, IsingFreeEnergy,
    RemFreeEnergy, SearchBox, TabulatedFreeEnergy,
};
use glassdual_core::finite_n::{
    disorder_average_with, sample_disorder_with, DisorderModel, FiniteNFreeEnergy, Job, Operation, Energy, Temperature,
};
use glassdual_core::model::spherical_energy_integrals;
use glassdual_core::parisi::{parisi_minimize, verify_thm7, ParisiNumerics};
use glassdual_core::rem::{rem_duality_roundtrip, rem_free_energy, rem_parisi_minimize};
use glassdual_core::spherical::{cs_minimize, verify_thm10};
use glassdual_core::{DualityReport, EnergyVector, Error, MixtureKind, MixtureSpec, TemperatureVector};

pub fn run(config: &RunConfig) -> Result<Table, CliError> {
    config.validate()?;
    match config.command {
        Command::Rem => rem_table(config),
        Command::Ising => ising_table(config),
        Command::Spherical => spherical_table(config),
        Command::Duality => duality_table(config),
        Command::Oracle => oracle_table(config),
        Command::Phase => {
            let model = config.model.unwrap_or(Model::Rem);
            emit_phase_table(model, &config.betas()?, config)
        }
    }
}

fn positive(op: &'static str, beta: f64) -> Result<(), CliError> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            msg: format!("beta = {beta} must be > 0"),
        }
        .into())
    }
}

fn rem_table(config: &RunConfig) -> Result<Table, CliError> {
    let betas = config.betas()?;
    let report = rem_duality_roundtrip(&betas)?;
    let mut t = Table::new(&["beta", "F", "parisi_F", "m_star", "roundtrip_F", "roundtrip_gap"]);
    for (&b, p) in betas.iter().zip(&report.points) {
        let parisi = rem_parisi_minimize(b)?;
        t.push(vec![
            b.into(),
            rem_free_energy(b)?.into(),
            parisi.value.into(),
            parisi.m_star.into(),
            p.value.into(),
            p.gap.into(),
        ]);
    }
    Ok(t)
}

fn ising_spec(config: &RunConfig) -> Result<MixtureSpec, CliError> {
    let spec = config.mixture();
    if spec.kind() != MixtureKind::Ising {
        return Err(CliError::Config("this command needs an ising mixture".into()));
    }
    Ok(spec)
}

fn ising_table(config: &RunConfig) -> Result<Table, CliError> {
    let spec = ising_spec(config)?;
    let mut t = Table::new(&[
        "beta", "F", "derivative", "m_star", "phi00", "correction", "k", "alpha_knots", "alpha_levels",
    ]);
    for b in config.betas()? {
        positive("ising", b)?;
        let s = parisi_minimize(&spec, b, config.k, &config.numerics)?;
        t.push(vec![
            b.into(),
            s.value.into(),
            s.derivative.into(),
            (s.derivative / b).into(),
            s.phi00.into(),
            s.correction.into(),
            config.k.into(),
            s.alpha_star.knots().into(),
            s.alpha_star.levels().into(),
        ]);
    }
    Ok(t)
}

fn spherical_table(config: &RunConfig) -> Result<Table, CliError> {
    let beta = TemperatureVector::new(config.beta.clone())?;
    let r = cs_minimize(&beta, config.k, &config.numerics)?;
    let mut t = Table::new(&[
        "beta", "F", "partials", "qhat", "qhat_at_cap", "alpha_knots", "alpha_levels",
    ]);
    t.push(vec![
        beta.entries().into(),
        r.value.into(),
        r.partials.clone().into(),
        r.alpha_star.qhat().map_or(Cell::Empty, Cell::Num),
        r.qhat_at_cap.into(),
        r.alpha_star.knots().into(),
        r.alpha_star.levels().into(),
    ]);
    Ok(t)
}

/// Spherical free energy along the ray `β ↦ β c`, where `c_p` are the
/// mixture coefficients.
struct SphericalRay {
    c: Vec<f64>,
    k: usize,
    num: ParisiNumerics,
}

impl SphericalRay {
    fn new(spec: &MixtureSpec, k: usize, num: ParisiNumerics) -> Result<Self, CliError> {
        if spec.kind() != MixtureKind::Spherical {
            return Err(CliError::Config("the spherical model needs a spherical mixture".into()));
        }
        let mut c = vec![0.0; spec.max_degree() as usize];
        for &(p, cp) in spec.terms() {
            c[p as usize - 1] = cp;
        }
        Ok(SphericalRay { c, k, num })
    }

    fn at(&self, beta: f64) -> Result<TemperatureVector, Error> {
        TemperatureVector::new(self.c.iter().map(|c| c * beta).collect())
    }
}

impl FreeEnergy for SphericalRay {
    fn name(&self) -> &str {
        "spherical"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> glassdual_core::Result<f64> {
        Ok(cs_minimize(&self.at(beta[0])?, self.k, &self.num)?.value)
    }

    fn scaled_gradient(&self, beta: &[f64]) -> Option<glassdual_core::Result<Vec<f64>>> {
        Some(self.at(beta[0]).and_then(|b| {
            let r = cs_minimize(&b, self.k, &self.num)?;
            let m = spherical_energy_integrals(&r.alpha_star, self.c.len());
            Ok(vec![self.c.iter().zip(&m).map(|(c, m)| c * c * m).sum()])
        }))
    }
}

fn default_spherical() -> MixtureSpec {
    MixtureSpec::pure(MixtureKind::Spherical, 2, 1.0)
}

/// Sorted union of the table grid and the squares of the requested β. Grid
/// points within 1e-9 of a square are dropped so the square stays exact.
fn table_nodes(grid: &crate::config::Grid, betas: &[f64]) -> Vec<f64> {
    let squares: Vec<f64> = betas.iter().map(|b| b * b).collect();
    let mut t: Vec<f64> = grid
        .points()
        .into_iter()
        .filter(|x| squares.iter().all(|s| (x - s).abs() > 1e-9))
        .collect();
    t.extend(squares);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// The one-coordinate free energy of `model`, interpolated in `β²` for the
/// Ising model when a table grid is configured.
fn handle(model: Model, config: &RunConfig, betas: &[f64]) -> Result<Box<dyn FreeEnergy>, CliError> {
    Ok(match model {
        Model::Rem => Box::new(RemFreeEnergy),
        Model::Ising => {
            let direct = IsingFreeEnergy::new(&ising_spec(config)?, &config.numerics, config.k)?;
            match &config.table {
                Some(g) => Box::new(TabulatedFreeEnergy::from_handle(&direct, table_nodes(g, betas))?),
                None => Box::new(direct),
            }
        }
        Model::Spherical => {
            let spec = config.xi.clone().unwrap_or_else(default_spherical);
            Box::new(SphericalRay::new(&spec, config.k, config.numerics)?)
        }
        Model::Oracle => {
            let sample = sample_disorder_with(
                DisorderModel::IsingMixed,
                Some(&ising_spec(config)?),
                config.n,
                config.seed,
                &config.limits,
            )?;
            Box::new(OwnedOracle(sample))
        }
    })
}

struct OwnedOracle(glassdual_core::finite_n::DisorderSample);

impl FreeEnergy for OwnedOracle {
    fn name(&self) -> &str {
        "oracle"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> glassdual_core::Result<f64> {
        FiniteNFreeEnergy { sample: &self.0 }.value(beta)
    }
}

const REPORT_COLUMNS: [&str; 9] = [
    "label", "beta", "m", "value", "reference", "gap", "optimizer", "boundary_attained", "flat_objective",
];

fn push_report(t: &mut Table, report: &DualityReport) {
    for p in &report.points {
        t.push(vec![
            p.label.as_str().into(),
            p.beta.clone().into(),
            p.m.clone().into(),
            p.value.into(),
            p.reference.into(),
            p.gap.into(),
            p.optimizer.clone().into(),
            p.boundary_attained.into(),
            p.flat_objective.into(),
        ]);
    }
}

fn duality_table(config: &RunConfig) -> Result<Table, CliError> {
    let model = config.model.unwrap_or(Model::Rem);
    let betas = config.betas()?;
    let check = config.check.unwrap_or(Check::Roundtrip);
    let mut t = Table::new(&REPORT_COLUMNS);
    match (check, model) {
        (Check::Roundtrip, _) => {
            let f = handle(model, config, &betas)?;
            let bs = betas
                .iter()
                .map(|&b| TemperatureVector::scalar(b))
                .collect::<Result<Vec<_>, _>>()?;
            push_report(&mut t, &roundtrip_gap(f.as_ref(), &bs, &config.search)?);
        }
        (Check::Concavity, _) => {
            let f = handle(model, config, &betas)?;
            // uniform in t between the squared ends of the β list
            let (lo, hi) = (betas[0] * betas[0], betas[betas.len() - 1] * betas[betas.len() - 1]);
            let n = betas.len().max(3);
            let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
            let r = concavity_check(f.as_ref(), &grid)?;
            let mut c = Table::new(&["t", "F", "second_difference"]);
            for (i, &ti) in r.t_grid.iter().enumerate() {
                let d = if i == 0 || i + 1 == r.t_grid.len() {
                    Cell::Empty
                } else {
                    r.second_differences[0][i - 1].into()
                };
                c.push(vec![ti.into(), r.values[0][i].into(), d]);
            }
            return Ok(c);
        }
        (Check::Gamma, Model::Ising) => {
            let spec = ising_spec(config)?;
            for &b in &betas {
                positive("duality", b)?;
                push_report(&mut t, &verify_thm7(&spec, b, config.k, &config.numerics)?);
            }
        }
        (Check::Witness, Model::Ising) => {
            let spec = ising_spec(config)?;
            for &b in &betas {
                positive("duality", b)?;
                let c = corollary_check(&spec, b, config.k, &config.numerics, config.candidates)?;
                push_report(&mut t, &c.report);
                let [l, g, d] = c.opposite_sign;
                for (label, v, r) in [
                    ("opposite_L_star", l, 0.0),
                    ("opposite_gamma_star", g, -c.free_energy),
                    ("opposite_witness", d, c.free_energy),
                ] {
                    t.push(vec![
                        label.into(),
                        vec![b].into(),
                        Cell::Vec(Vec::new()),
                        v.into(),
                        r.into(),
                        (v - r).abs().into(),
                        Cell::Vec(Vec::new()),
                        false.into(),
                        false.into(),
                    ]);
                }
            }
        }
        (Check::Lambda, Model::Spherical) => {
            let spec = config.xi.clone().unwrap_or_else(default_spherical);
            let ray = SphericalRay::new(&spec, config.k, config.numerics)?;
            for &b in &betas {
                push_report(&mut t, &verify_thm10(&ray.at(b)?, config.k, &config.numerics)?);
            }
        }
        (check, model) => {
            return Err(CliError::Config(format!(
                "check {check:?} is not available for model {model:?}"
            )))
        }
    }
    Ok(t)
}

fn oracle_table(config: &RunConfig) -> Result<Table, CliError> {
    let (model, spec) = match config.model.unwrap_or(Model::Ising) {
        Model::Rem => (DisorderModel::Rem, None),
        Model::Ising => (DisorderModel::IsingMixed, Some(ising_spec(config)?)),
        other => return Err(CliError::Config(format!("the oracle has no {other:?} model"))),
    };
    let temperature = || -> Result<Temperature, CliError> {
        Ok(match config.beta.as_slice() {
            [] => return Err(CliError::Config("the check needs --beta".into())),
            [b] => Temperature::Scalar(*b),
            v => Temperature::Vector(TemperatureVector::new(v.to_vec())?),
        })
    };
    let energy = || -> Result<Energy, CliError> {
        Ok(match config.m.as_slice() {
            [] => return Err(CliError::Config("the check needs --m".into())),
            [m] => Energy::Scalar(*m),
            v => Energy::Vector(EnergyVector::new(v.to_vec())?),
        })
    };
    let operation = match config.check.unwrap_or(Check::F) {
        Check::F => Operation::FreeEnergy {
            beta: temperature()?,
            centered: config.centered,
        },
        Check::V => Operation::SquaredFreeEnergy { m: energy()? },
        Check::Inequality => Operation::Inequality {
            beta: temperature()?,
            m: energy()?,
        },
        Check::Supnorm => Operation::SupNorm,
        other => return Err(CliError::Config(format!("the oracle has no {other:?} check"))),
    };
    let job = Job {
        model,
        spec,
        n: config.n,
        operation,
    };
    let avg = disorder_average_with(
        job.model,
        job.spec.as_ref(),
        job.n,
        config.replicas,
        config.seed,
        &config.limits,
        |s| job.evaluate(s),
    )?;
    let mut t = Table::new(&["replica", "seed", "value", "stderr"]);
    for (r, (v, s)) in avg.values.iter().zip(&avg.seeds).enumerate() {
        t.push(vec![r.into(), (*s).into(), (*v).into(), Cell::Empty]);
    }
    t.push(vec!["summary".into(), Cell::Empty, avg.mean.into(), avg.stderr.into()]);
    Ok(t)
}

/// Step in `t = β²` of the local concavity statistic.
const PHASE_DT: f64 = 0.01;

/// One row per `β`: `F`, `F′`, the stationary energy `m* = F′/β`, the gap
/// `|V(m*) + β² m*/2 − F(β)|` and the positive part of the second
/// difference of `t ↦ F(√t)` around `β²`.
pub fn emit_phase_table(model: Model, betas: &[f64], config: &RunConfig) -> Result<Table, CliError> {
    if betas.is_empty() {
        return Err(CliError::Config("empty temperature grid".into()));
    }
    let f = handle(model, config, betas)?;
    let search: SearchBox = config.search;
    let mut t = Table::new(&["beta", "F", "derivative", "m_star", "roundtrip_gap", "concavity_violation"]);
    for &b in betas {
        positive("phase", b)?;
        let value = f.value(&[b])?;
        let m = stationary_energy(f.as_ref(), &TemperatureVector::scalar(b)?, 1e-5)?;
        let ms = m.entries()[0];
        let v = legendre_sup_v(f.as_ref(), &m, &search)?;
        let gap = (v.value + b * b * ms / 2.0 - value).abs();
        let tt = b * b;
        let h = PHASE_DT.min(tt / 2.0);
        let at = |x: f64| f.value(&[x.sqrt()]);
        let second = at(tt - h)? - 2.0 * value + at(tt + h)?;
        t.push(vec![
            b.into(),
            value.into(),
            (b * ms).into(),
            ms.into(),
            gap.into(),
            second.max(0.0).into(),
        ]);
    }
    Ok(t)
}
