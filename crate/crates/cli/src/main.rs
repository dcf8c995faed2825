//! `pcds`: capacity sweeps and channel reports.

mod analyze;
mod grid;
mod sweep;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pcds::capacity::OptimizerConfig;

use grid::Grid;
use table::Table;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or an unreadable channel document (exit 2).
    Input(String),
    /// Two routes to the same number disagree, or the optimizer failed (exit 3).
    Consistency(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Consistency(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Consistency(m) => write!(f, "consistency failure: {m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pcds",
    version,
    about = "Capacities of partially coherent direct-sum quantum channels",
    after_help = "CSV output has a header row and floats with 9 significant digits; magnitudes below 1e-12 print as 0.\nExit codes: 0 ok, 2 input error, 3 internal consistency failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for the multistart state search.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Q and Q_E of the dephasing family against |κ|².
    ///
    /// Columns: kappa_sq, Q (scalar form), Q_optimizer, QE (scalar form),
    /// QE_optimizer. Exits with 3 if the two routes differ by more than 1e-4.
    DephasingSweep {
        #[arg(long)]
        da: usize,
        #[arg(long)]
        db: usize,
        /// Grid over |κ|², start:stop:count within [0, 1].
        #[arg(long, default_value = "0:1:21")]
        kappa_grid: Grid,
    },
    /// Q and Q_E of the single-decay family against γ.
    ///
    /// Columns: gamma, Q, Q_lower, Q_upper, QE, degradable (verdict of the
    /// PCDS test), method. d_C = 2 is the qubit damping channel.
    MadSweep {
        #[arg(long)]
        dc: usize,
        /// Grid over γ, start:stop:count within [0, 1].
        #[arg(long, default_value = "0:1:21")]
        gamma_grid: Grid,
    },
    /// Q and Q_E of the combined decay and dephasing family over (γ, |κ|).
    ///
    /// Columns: gamma, kappa, Q, Q_lower, Q_upper, gap, QE, method. Rows run
    /// over κ fastest.
    CombinedSurface {
        #[arg(long, default_value_t = 3)]
        dc: usize,
        #[arg(long, default_value = "0:1:11")]
        gamma_grid: Grid,
        /// Grid over |κ|, start:stop:count within [0, 1].
        #[arg(long, default_value = "0:1:11")]
        kappa_grid: Grid,
    },
    /// JSON report for a channel document: CPT residuals, PCDS check,
    /// degradability, and the capacity or its bounds.
    Analyze {
        channel: PathBuf,
        /// Block dimensions, e.g. 2,2; overrides the document's partition.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = OptimizerConfig {
        seed: cli.seed,
        ..OptimizerConfig::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Input(format!("--jobs: {e}")))?;
    let out = cli.out.as_ref();
    match cli.command {
        Command::DephasingSweep { da, db, kappa_grid } => {
            if da == 0 || db == 0 {
                return Err(CliError::Input("--da and --db must be positive".into()));
            }
            let grid = kappa_grid.within("--kappa-grid", 0.0, 1.0).map_err(CliError::Input)?;
            let table = pool.install(|| sweep::dephasing(da, db, &grid.points(), &config))?;
            emit(&render(&table, cli.format), out)
        }
        Command::MadSweep { dc, gamma_grid } => {
            if dc < 2 {
                return Err(CliError::Input(format!("--dc must be at least 2, got {dc}")));
            }
            let grid = gamma_grid.within("--gamma-grid", 0.0, 1.0).map_err(CliError::Input)?;
            let table = pool.install(|| sweep::mad(dc, &grid.points(), &config))?;
            emit(&render(&table, cli.format), out)
        }
        Command::CombinedSurface {
            dc,
            gamma_grid,
            kappa_grid,
        } => {
            if dc < 3 {
                return Err(CliError::Input(format!("--dc must be at least 3, got {dc}")));
            }
            let gammas = gamma_grid.within("--gamma-grid", 0.0, 1.0).map_err(CliError::Input)?;
            let kappas = kappa_grid.within("--kappa-grid", 0.0, 1.0).map_err(CliError::Input)?;
            let table = pool.install(|| sweep::combined(dc, &gammas.points(), &kappas.points(), &config))?;
            emit(&render(&table, cli.format), out)
        }
        Command::Analyze { channel, partition } => {
            let text = fs::read_to_string(&channel)
                .map_err(|e| CliError::Input(format!("{}: {e}", channel.display())))?;
            let report = analyze::analyze(&text, partition, &config)?;
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            emit(&json, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pcds: {e}");
            ExitCode::from(e.code())
        }
    }
}
