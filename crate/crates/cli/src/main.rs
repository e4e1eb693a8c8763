use clap::{Args, Parser, Subcommand};
use glassdual::config::{parse_mixture, Check, Command, Emit, Grid, Model, RunConfig};
use glassdual::{run, CliError};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Free energies of mean-field spin glasses and their squared-Hamiltonian duals.
#[derive(Parser)]
#[command(name = "glassdual", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "GLASSDUAL_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// REM free energy, Parisi minimizer and round trip on a β grid.
    Rem(Flags),
    /// Ising mixed p-spin free energy from the Parisi functional.
    Ising(Flags),
    /// Spherical free energy from the Crisanti-Sommers functional.
    Spherical(Flags),
    /// Duality checks between F and V.
    Duality(Flags),
    /// Exact finite-N enumeration averaged over disorder.
    Oracle(Flags),
    /// F, F′, m*, round-trip gap and concavity on a β grid.
    Phase(Flags),
    /// Rerun the configuration stored in a config file or an emitted table.
    Replay(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// JSON config, or a CSV/JSON table whose header is reused.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Mixture as inline JSON or a JSON file.
    #[arg(long)]
    xi: Option<String>,
    /// Comma-separated; for the spherical model, the vector (β_1, …, β_P).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    beta: Option<Vec<f64>>,
    /// start:stop:step
    #[arg(long)]
    beta_grid: Option<Grid>,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<f64>>,
    /// Steps of the Parisi or Crisanti-Sommers order parameter.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    check: Option<Check>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    centered: bool,
    #[arg(long)]
    candidates: Option<usize>,
    #[arg(long)]
    quad_nodes: Option<usize>,
    #[arg(long)]
    x_points: Option<usize>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    multistart: Option<usize>,
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(long)]
    outer_tol: Option<f64>,
    /// Upper end of the β and m search intervals.
    #[arg(long)]
    search_hi: Option<f64>,
    #[arg(long)]
    search_m_lo: Option<f64>,
    #[arg(long)]
    search_tol: Option<f64>,
    /// Nodes in t = β² of the interpolated Ising free energy, or "none".
    #[arg(long)]
    table_grid: Option<String>,
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl Flags {
    fn resolve(self, command: Option<Command>) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(cmd) = command {
            c.command = cmd;
        }
        if let Some(x) = self.model {
            c.model = Some(x);
        }
        if let Some(x) = &self.xi {
            c.xi = Some(parse_mixture(x)?);
        }
        if let Some(x) = self.beta {
            c.beta = x;
            c.beta_grid = None;
        }
        if let Some(x) = self.beta_grid {
            c.beta_grid = Some(x);
        }
        if let Some(x) = self.m {
            c.m = x;
        }
        if let Some(x) = self.check {
            c.check = Some(x);
        }
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(x) = self.$flag {
                    c.$($field).+ = x;
                })*
            };
        }
        set!(
            k => k, n => n, replicas => replicas, seed => seed, candidates => candidates,
            quad_nodes => numerics.quad_nodes, x_points => numerics.x_points,
            multistart => numerics.multistart, max_evals => numerics.max_evals,
            outer_tol => numerics.outer_tol, search_hi => search.hi,
            search_m_lo => search.m_lo, search_tol => search.tol, emit => emit,
        );
        if let Some(x) = self.x_max {
            c.numerics.x_max = Some(x);
        }
        if self.centered {
            c.centered = true;
        }
        match self.table_grid.as_deref() {
            None => {}
            Some("none") => c.table = None,
            Some(g) => c.table = Some(g.parse()?),
        }
        c.output = self.output;
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let (flags, command) = match cli.command {
        Sub::Rem(f) => (f, Some(Command::Rem)),
        Sub::Ising(f) => (f, Some(Command::Ising)),
        Sub::Spherical(f) => (f, Some(Command::Spherical)),
        Sub::Duality(f) => (f, Some(Command::Duality)),
        Sub::Oracle(f) => (f, Some(Command::Oracle)),
        Sub::Phase(f) => (f, Some(Command::Phase)),
        Sub::Replay(f) => {
            if f.config.is_none() {
                return Err(CliError::Config("replay needs --config".into()));
            }
            (f, None)
        }
    };
    let config = flags.resolve(command)?;
    let bytes = run(&config)?.render(&config)?;
    match &config.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("glassdual: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
