//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation error (bad arguments, malformed or
//! inadmissible inputs), 2 I/O error (unreadable or unwritable files).
//! With `--error-json`, errors are additionally printed to stderr as one
//! JSON object `{"error": ..., "kind": ..., "exit_code": ...}`.
//!
//! `PREFRULE_THREADS` (integer >= 1) caps the worker pool for the regret
//! command; the default is the machine parallelism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prefrule::io::{
    self, drpt_csv_rows, drpt_to_csv, parse_design, parse_effects, parse_population,
    parse_regret_config, parse_ssprct_csv, report_to_json, ssprct_csv_rows, ssprct_to_csv,
    DesignDoc, IoError,
};
use prefrule::{
    estimate_beta_drpt, estimate_beta_ssprct, optimal_itr, run_regret_experiment,
    simulate_drpt, simulate_ssprct, str_decide, strategy_proofness, sweep_weights,
    welfare_stated, BetaEstimates, DerivedParams, DesignSpec, DeterminantSigns, TypeMapping,
    VocabMathEffects,
};

#[derive(Parser)]
#[command(
    name = "prefrule",
    about = "Treatment rules under strategically stated preferences",
    version
)]
struct Cli {
    /// Also emit errors as a JSON object on stderr.
    #[arg(long, global = true)]
    error_json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MappingArg {
    /// Vocabulary training is treatment 1 (default).
    #[value(name = "vocab-as-1")]
    VocabAs1,
    /// Mathematics training is treatment 1.
    #[value(name = "math-as-1")]
    MathAs1,
}

impl From<MappingArg> for TypeMapping {
    fn from(m: MappingArg) -> Self {
        match m {
            MappingArg::VocabAs1 => TypeMapping::VocabAsType1,
            MappingArg::MathAs1 => TypeMapping::MathAsType1,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the optimal rule for given determinants.
    OptimalItr {
        /// beta1 = P(T=1) * tau(1).
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        /// beta0 = P(T=0) * tau(0).
        #[arg(long, allow_negative_numbers = true)]
        beta0: f64,
        /// Baseline E[Y(0)]; only shifts the reported welfare.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ey0: f64,
    },
    /// Simulate a trial and write it as CSV.
    Simulate {
        /// Design JSON path.
        #[arg(long)]
        design: PathBuf,
        /// Population JSON path.
        #[arg(long)]
        pop: PathBuf,
        /// Number of records.
        #[arg(short = 'n', long = "sample-size")]
        n: usize,
        /// Root seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Estimate the determinants from a dataset and print the decision.
    Estimate {
        /// Design JSON path.
        #[arg(long)]
        design: PathBuf,
        /// Dataset CSV path.
        #[arg(long)]
        data: PathBuf,
    },
    /// Run a regret experiment from a JSON config.
    Regret {
        /// Config JSON path.
        #[arg(long)]
        config: PathBuf,
        /// Report JSON output path.
        #[arg(short = 'o', long)]
        output: PathBuf,
        /// Optional flat CSV output path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sweep the two-score outcome weight and export the plot table.
    Sweep {
        /// Effects JSON path; defaults to the bundled study estimates.
        #[arg(long)]
        effects: Option<PathBuf>,
        /// Number of grid points.
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        /// Which training counts as treatment 1.
        #[arg(long, value_enum, default_value_t = MappingArg::VocabAs1)]
        mapping: MappingArg,
        /// Output CSV path.
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 1,
            Self::Io(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::Io(m) => m,
        }
    }
}

impl From<prefrule::Error> for CliError {
    fn from(e: prefrule::Error) -> Self {
        Self::Validation(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        Self::Validation(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn print_rule(rule: &prefrule::Itr, params: &DerivedParams) {
    let signs = DeterminantSigns::of(params);
    println!("{} {}", rule, strategy_proofness(rule));
    println!("case: {} (row {})", signs.label(), signs.table_row());
    println!("welfare: {}", welfare_stated(params, rule));
}

fn cmd_optimal_itr(beta1: f64, beta0: f64, ey0: f64) -> Result<(), CliError> {
    let params = DerivedParams::from_betas(beta1, beta0, ey0)?;
    print_rule(&optimal_itr(&params), &params);
    Ok(())
}

fn cmd_simulate(
    design: &Path,
    pop: &Path,
    n: usize,
    seed: u64,
    output: &Path,
) -> Result<(), CliError> {
    let pop = parse_population(&read_file(pop)?)?;
    let doc = parse_design(&read_file(design)?)?;
    // A design document without M inherits the population's bound.
    let resolved = doc.resolve(Some(pop.m()))?;
    let csv = match resolved {
        DesignSpec::SspRct(d) => ssprct_to_csv(&simulate_ssprct(&pop, &d, n, seed)?),
        DesignSpec::Drpt(d) => drpt_to_csv(&simulate_drpt(&pop, &d, n, seed)?),
    };
    write_file(output, &csv)?;
    println!("wrote {n} records to {}", output.display());
    Ok(())
}

fn print_estimates(est: &BetaEstimates) -> Result<(), CliError> {
    println!("beta1_hat: {}", est.beta1_hat);
    println!("beta0_hat: {}", est.beta0_hat);
    let decision = str_decide(est)?;
    let params = DerivedParams::from_betas(est.beta1_hat, est.beta0_hat, 0.0)?;
    let signs = DeterminantSigns::of(&params);
    println!("decision: {} {}", decision, strategy_proofness(&decision));
    println!("case: {} (row {})", signs.label(), signs.table_row());
    Ok(())
}

fn cmd_estimate(design: &Path, data: &Path) -> Result<(), CliError> {
    let doc = parse_design(&read_file(design)?)?;
    let text = read_file(data)?;
    // A design document without M falls back to the largest observed
    // magnitude, which satisfies the bound without affecting estimates.
    let fallback_m = |rows: &[(f64, u8, u8)]| {
        rows.iter()
            .map(|r| r.0.abs())
            .fold(1e-12f64, f64::max)
    };
    let est = match &doc {
        DesignDoc::Ssprct { .. } => {
            let rows = ssprct_csv_rows(&text)?;
            let resolved = doc.resolve(Some(fallback_m(&rows)))?;
            let DesignSpec::SspRct(d) = resolved else {
                unreachable!("ssprct document resolves to a survey design")
            };
            estimate_beta_ssprct(&parse_ssprct_csv(&text, d)?)
        }
        DesignDoc::Drpt { .. } => {
            let rows = drpt_csv_rows(&text)?;
            let resolved = doc.resolve(Some(fallback_m(&rows)))?;
            let DesignSpec::Drpt(d) = resolved else {
                unreachable!("drpt document resolves to a three-arm design")
            };
            estimate_beta_drpt(&io::parse_drpt_csv(&text, d)?)
        }
    };
    print_estimates(&est)
}

fn cmd_regret(config: &Path, output: &Path, csv: Option<&Path>) -> Result<(), CliError> {
    let config = parse_regret_config(&read_file(config)?)?;
    let report = run_regret_experiment(&config)?;
    write_file(output, &report_to_json(&report))?;
    if let Some(csv_path) = csv {
        write_file(csv_path, &report.to_csv())?;
    }
    for s in &report.summaries {
        println!(
            "n={}: max mean regret {} (dgp {}) vs bound {} -> {}",
            s.n,
            s.max_mean_regret,
            s.worst_dgp,
            s.bound,
            if s.pass { "within bound" } else { "EXCEEDS bound" }
        );
    }
    println!("wrote report to {}", output.display());
    Ok(())
}

fn cmd_sweep(
    effects: Option<&Path>,
    grid: usize,
    mapping: TypeMapping,
    output: &Path,
) -> Result<(), CliError> {
    let eff = match effects {
        Some(path) => parse_effects(&read_file(path)?)?,
        None => VocabMathEffects::bundled(),
    };
    let table = sweep_weights(&eff, grid, mapping)?;
    write_file(output, &table.to_csv())?;
    for bp in &table.breakpoints {
        println!("breakpoint {:?} at w = {}", bp.kind, bp.w);
    }
    println!("wrote {} rows to {}", table.rows.len(), output.display());
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    match std::env::var("PREFRULE_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let threads: usize = raw.parse().map_err(|_| {
                CliError::Validation(format!(
                    "PREFRULE_THREADS must be an integer >= 1, got {raw:?}"
                ))
            })?;
            if threads < 1 {
                return Err(CliError::Validation(
                    "PREFRULE_THREADS must be an integer >= 1".into(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    match &cli.command {
        Command::OptimalItr { beta1, beta0, ey0 } => cmd_optimal_itr(*beta1, *beta0, *ey0),
        Command::Simulate {
            design,
            pop,
            n,
            seed,
            output,
        } => cmd_simulate(design, pop, *n, *seed, output),
        Command::Estimate { design, data } => cmd_estimate(design, data),
        Command::Regret {
            config,
            output,
            csv,
        } => cmd_regret(config, output, csv.as_deref()),
        Command::Sweep {
            effects,
            grid,
            mapping,
            output,
        } => cmd_sweep(effects.as_deref(), *grid, (*mapping).into(), output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            if cli.error_json {
                let json = serde_json::json!({
                    "error": e.message(),
                    "kind": e.kind(),
                    "exit_code": e.exit_code(),
                });
                eprintln!("{json}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
