use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polyperiod_core::harness::{self, Invocation, Mode, RunConfig, RunReport, SpaceChoice, SUITES};
use polyperiod_core::stats::{write_histogram_csv, StatsAccumulator};

const CSV_HELP: &str = "\
CSV histogram columns: m_1..m_b are the cycle counts c_1..c_b, with the value \
equal to --clip meaning \"clip or more\"; count is the number of maps in the \
cell; poisson_pmf is the probability of the cell under independent \
Poisson(1/k) laws (tail mass for clipped entries).";

#[derive(Parser)]
#[command(name = "polyperiod", version, about = "Cycle and period statistics of maps over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a census over a map ensemble and report its statistics.
    #[command(after_help = CSV_HELP)]
    Census {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Run a census and compare it with the log-period lower bound.
    #[command(after_help = CSV_HELP)]
    Bounds {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Run a named verification suite at its built-in parameters.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Re-run the invocation recorded in an earlier JSON report.
    Replay {
        report: PathBuf,
        #[command(flatten)]
        exec: ExecArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Poly,
    Rational,
    Mapping,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct RunArgs {
    /// Field characteristic.
    #[arg(long = "p", default_value_t = 5)]
    p: u64,
    /// Extension degree, so that q = p^k.
    #[arg(long = "k", default_value_t = 1)]
    k: u32,
    /// Monic irreducible modulus as comma-separated coefficients, constant
    /// term first. Defaults to the smallest irreducible.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    /// Degree d of the maps.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, value_enum, default_value = "poly")]
    space: SpaceArg,
    /// Domain size for --space mapping.
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Number of draws in sample mode.
    #[arg(long, default_value_t = 100_000)]
    draws: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Histogram truncation: cycle lengths 1..=b are tracked jointly.
    #[arg(long, default_value_t = 5)]
    b: usize,
    /// Histogram entries are clipped at this value.
    #[arg(long, default_value_t = 8)]
    clip: u32,
    /// Largest weight sum k r_k of the tracked factorial moments.
    #[arg(long, default_value_t = 4)]
    moment_weight: usize,
    /// Prime cutoff for the polynomial bound (default d/2).
    #[arg(long)]
    xi: Option<f64>,
    /// Prime cutoff for the rational bound (default d/4).
    #[arg(long)]
    zeta: Option<f64>,
    /// Window, in units of 1/q, around the rational sandwich.
    #[arg(long, default_value_t = polyperiod_core::stats::DEFAULT_KAPPA)]
    kappa: f64,
    /// Largest space an exhaustive census may enumerate.
    #[arg(long, default_value_t = polyperiod_core::space::DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
            space: match self.space {
                SpaceArg::Poly => SpaceChoice::Poly,
                SpaceArg::Rational => SpaceChoice::Rational,
                SpaceArg::Mapping => SpaceChoice::Mapping,
            },
            degree: self.degree,
            n: self.n,
            mode: match self.mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Sample => Mode::Sample,
            },
            draws: self.draws,
            seed: self.seed,
            truncation: self.b,
            clip: self.clip,
            max_moment_weight: self.moment_weight,
            xi: self.xi,
            zeta: self.zeta,
            kappa: self.kappa,
            cap: self.cap,
        }
    }
}

#[derive(Args)]
struct ExecArgs {
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the joint cycle-count histogram as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl ExecArgs {
    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

fn emit(report: &RunReport, acc: Option<&StatsAccumulator>, exec: &ExecArgs) -> Result<()> {
    let json = report.to_json();
    match &exec.out {
        Some(path) => fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{json}"),
    }
    if let Some(path) = &exec.csv {
        let acc = acc.context("--csv needs a census-backed command")?;
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_histogram_csv(acc, file)?;
    }
    for v in report.verdicts.iter().filter(|v| v.failed()) {
        eprintln!("FAIL {}: {}", v.check, v.detail);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let start = Instant::now();
    let (report, acc, exec) = match cli.command {
        Command::Census { run, exec } => {
            let (r, a) = harness::cmd_census(&run.config(), exec.workers())?;
            (r, Some(a), exec)
        }
        Command::Bounds { run, exec } => {
            let (r, a) = harness::cmd_bounds(&run.config(), exec.workers())?;
            (r, Some(a), exec)
        }
        Command::Verify { suite, exec } => {
            if !SUITES.contains(&suite.as_str()) {
                anyhow::bail!("unknown suite {suite:?}; known suites: {}", SUITES.join(", "));
            }
            (harness::cmd_verify(&suite, exec.workers())?, None, exec)
        }
        Command::Replay { report, exec } => {
            let text = fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let invocation: Invocation = harness::invocation_from_report(&text)?;
            let (r, a) = harness::run_invocation(&invocation, exec.workers())?;
            (r, a, exec)
        }
    };
    emit(&report, acc.as_ref(), &exec)?;
    eprintln!("finished in {:.2}s", start.elapsed().as_secs_f64());
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
