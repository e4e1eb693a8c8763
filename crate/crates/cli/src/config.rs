//! The resolved configuration of one run, and how it is assembled from
//! defaults, a config file and command-line flags.

use crate::CliError;
use glassdual_core::duality::SearchBox;
use glassdual_core::finite_n::FiniteNLimits;
use glassdual_core::parisi::ParisiNumerics;
use glassdual_core::MixtureSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Prefix of the comment line that opens every CSV table.
pub const HEADER_PREFIX: &str = "# config: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    #[default]
    Rem,
    Ising,
    Spherical,
    Duality,
    Oracle,
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Rem,
    Ising,
    Spherical,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Check {
    /// Finite-N free energy.
    #[serde(rename = "F")]
    #[value(name = "F")]
    F,
    /// Finite-N free energy of the squared Hamiltonian.
    #[serde(rename = "V")]
    #[value(name = "V")]
    V,
    #[serde(rename = "inequality")]
    Inequality,
    #[serde(rename = "supnorm")]
    Supnorm,
    /// F → V → F through the two transforms.
    #[serde(rename = "roundtrip")]
    Roundtrip,
    /// Legendre transform of the Parisi functional against V (Ising).
    #[serde(rename = "gamma")]
    Gamma,
    /// Crisanti-Sommers minimizer against V (spherical).
    #[serde(rename = "lambda")]
    Lambda,
    /// Variational witness for F (Ising).
    #[serde(rename = "witness")]
    Witness,
    /// Second differences of t ↦ F(√t).
    #[serde(rename = "concavity")]
    Concavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    #[default]
    Csv,
    Json,
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        // snap to 12 decimals so that 0.1 + 3 × 0.05 prints as 0.25
        (0..=n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("grid '{s}' is not start:stop:step"));
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        let grid = Grid { start, stop, step };
        grid.validate()?;
        Ok(grid)
    }
}

impl Grid {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step > 0.0 && self.stop >= self.start) {
            return Err(CliError::Config(format!(
                "grid {}:{}:{} needs finite start <= stop and step > 0",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }
}

/// Everything that determines the emitted table. The output path is not
/// part of it, so a header read back from one file regenerates the same
/// bytes anywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<Model>,
    pub xi: Option<MixtureSpec>,
    pub beta: Vec<f64>,
    pub beta_grid: Option<Grid>,
    pub m: Vec<f64>,
    pub k: usize,
    pub check: Option<Check>,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    /// Drop the disorder-mean-zero constant of the Hamiltonian from F_N.
    pub centered: bool,
    /// Random test functions for the witness check.
    pub candidates: usize,
    /// Nodes in t = β² of the interpolated Ising free energy used by the
    /// nested transforms; `None` evaluates the minimizer directly.
    pub table: Option<Grid>,
    pub numerics: ParisiNumerics,
    pub search: SearchBox,
    pub limits: FiniteNLimits,
    pub emit: Emit,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Rem,
            model: None,
            xi: None,
            beta: Vec::new(),
            beta_grid: None,
            m: Vec::new(),
            k: 1,
            check: None,
            n: 10,
            replicas: 8,
            seed: 1,
            centered: false,
            candidates: 20,
            table: Some(Grid {
                start: 0.0,
                stop: 16.0,
                step: 0.64,
            }),
            numerics: ParisiNumerics::default(),
            search: SearchBox::default(),
            limits: FiniteNLimits::default(),
            emit: Emit::Csv,
            output: None,
        }
    }
}

impl RunConfig {
    /// Reads a configuration from a JSON object, from the header line of an
    /// emitted CSV table, or from the `config` key of an emitted JSON table.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_text(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        if let Some(rest) = text.strip_prefix(HEADER_PREFIX) {
            let line = rest.lines().next().unwrap_or("");
            return Ok(serde_json::from_str(line)?);
        }
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("config") {
            Some(c) if value.get("rows").is_some() => Ok(serde_json::from_value(c.clone())?),
            _ => Ok(serde_json::from_value(value)?),
        }
    }

    /// β values of the run: the grid when given, the explicit list otherwise.
    pub fn betas(&self) -> Result<Vec<f64>, CliError> {
        match (&self.beta_grid, self.beta.is_empty()) {
            (Some(g), _) => {
                g.validate()?;
                Ok(g.points())
            }
            (None, false) => Ok(self.beta.clone()),
            (None, true) => Err(CliError::Config("no temperatures: pass --beta or --beta-grid".into())),
        }
    }

    /// The mixture, `ξ(s) = s²/2` when none was given.
    pub fn mixture(&self) -> MixtureSpec {
        self.xi.clone().unwrap_or_else(MixtureSpec::sk)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.numerics.validate()?;
        if let Some(g) = &self.beta_grid {
            g.validate()?;
        }
        if let Some(g) = &self.table {
            g.validate()?;
        }
        if !(self.search.tol > 0.0) {
            return Err(CliError::Config("search tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// `--xi` takes inline JSON or the path of a JSON file.
pub fn parse_mixture(arg: &str) -> Result<MixtureSpec, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Config(format!("cannot read mixture file {arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}
