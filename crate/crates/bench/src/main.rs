use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subsel_bench::config::{ConfigOverrides, GeneratorKind};
use subsel_bench::runner::{generate, run_experiment, summarize, write_csv, write_summary};
use subsel_bench::verify::{failures, verify, write_report};
use subsel_bench::{parse_algorithms, Algorithm, RunError};
use subsel_core::ssel;

/// Column subset selection by greedy volume maximization.
#[derive(Parser)]
#[command(name = "subsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment sweep and write one CSV row per (algorithm, k, trial).
    Run(SweepArgs),
    /// Check every trial against the theoretical bounds; exit code 2 on failure.
    Verify(SweepArgs),
    /// Write a generated matrix in the SSEL binary format.
    Gen(GenArgs),
    /// Select k columns of an SSEL matrix and print their indices.
    Select(SelectArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// gaussian | graph
    #[arg(long)]
    generator: Option<GeneratorKind>,
    #[arg(long)]
    m: Option<usize>,
    /// Columns (edges for the graph generator).
    #[arg(long)]
    n: Option<usize>,
    /// First (or only) k of the sweep.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    k_step: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    /// Comma-separated algorithm names, e.g. Dominant-split-greedy,CPQR.
    #[arg(long)]
    algos: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "gaussian")]
    generator: GeneratorKind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SelectArgs {
    /// SSEL matrix file.
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value = "Dominant-split-greedy")]
    algo: Algorithm,
}

impl SweepArgs {
    fn overrides(self) -> Result<ConfigOverrides, RunError> {
        let base = match &self.config {
            Some(path) => ConfigOverrides::parse(&std::fs::read_to_string(path)?)?,
            None => ConfigOverrides::default(),
        };
        let flags = ConfigOverrides {
            generator: self.generator,
            m: self.m,
            n: self.n,
            k: self.k,
            k_max: self.k_max,
            k_step: self.k_step,
            k_values: None,
            trials: self.trials,
            c: self.c,
            algorithms: self.algos.as_deref().map(parse_algorithms).transpose()?,
            seed: self.seed,
            out: self.out,
        };
        Ok(base.overlay(flags))
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, RunError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(command: Command) -> Result<ExitCode, RunError> {
    match command {
        Command::Run(args) => {
            let cfg = args.overrides()?.resolve()?;
            let rows = run_experiment(&cfg)?;
            write_csv(&rows, output(&cfg.output_path)?)?;
            let summary = summarize(&rows);
            write_summary(&summary, io::stderr().lock())?;
        }
        Command::Verify(args) => {
            let cfg = args.overrides()?.resolve()?;
            let rows = verify(&cfg)?;
            write_report(&rows, output(&cfg.output_path)?)?;
            let failed = failures(&rows);
            eprintln!("{failed} of {} rows failed", rows.len());
            if failed > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Gen(args) => {
            let x = generate(args.generator, args.m, args.n, args.seed)?;
            ssel::save(&args.out, &x)?;
        }
        Command::Select(args) => {
            let x = ssel::load(&args.input)?;
            let run = args.algo.run(&x, args.k, args.c)?;
            let indices: Vec<String> = run.selection.sorted().iter().map(usize::to_string).collect();
            println!("{}", indices.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("subsel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
