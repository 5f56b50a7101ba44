use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, ValueEnum};
use szego_lab::io::write_norm_reports_csv;
use szego_lab::{run, ExperimentConfig, Format, RayonRunner, Subcommand};

/// Seeded experiments on random holomorphic sections over CP^m.
#[derive(Parser, Debug)]
#[command(name = "szego-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Exact, Monte Carlo and Levy tails of the overlap on S^{2d-1}.
    TailLaw(Common),
    /// Median sup norm against √log N and the tail beyond 3√log N.
    SupnormGrowth(Common),
    /// Medians and moments of the L^p norm.
    LpMedian(Common),
    /// Diagonal, near-diagonal and off-diagonal asymptotics of the Szegő kernel.
    KernelAsymptotics(Common),
    /// Bounds on the L^p → L^q norm of the Szegő projector.
    MappingNorm(Common),
    /// Median sup of the covariant derivative against √(N log N).
    GradientGrowth(Common),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Complex dimension of the projective space.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Degree; repeat for several (subcommand defaults otherwise).
    #[arg(long = "N", value_name = "N")]
    n: Vec<usize>,
    /// Exponent p (`inf` allowed for mapping-norm).
    #[arg(long)]
    p: Option<f64>,
    /// Target exponent q for mapping-norm.
    #[arg(long)]
    q: Option<f64>,
    /// Sphere dimension d for tail-law; repeat for several.
    #[arg(long = "d", value_name = "D")]
    d: Vec<u64>,
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    grid_nodes: usize,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, env = "SZEGO_LAB_WORKERS")]
    workers: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Per-trial norm reports as CSV (supnorm-growth, lp-median, gradient-growth).
    #[arg(long)]
    trial_out: Option<PathBuf>,
}

fn config(command: Command) -> ExperimentConfig {
    let (sub, args) = match command {
        Command::TailLaw(a) => (Subcommand::TailLaw, a),
        Command::SupnormGrowth(a) => (Subcommand::SupnormGrowth, a),
        Command::LpMedian(a) => (Subcommand::LpMedian, a),
        Command::KernelAsymptotics(a) => (Subcommand::KernelAsymptotics, a),
        Command::MappingNorm(a) => (Subcommand::MappingNorm, a),
        Command::GradientGrowth(a) => (Subcommand::GradientGrowth, a),
    };
    let mut c = ExperimentConfig::new(sub);
    c.m = args.m;
    if !args.n.is_empty() {
        c.n_list = args.n;
    }
    if !args.d.is_empty() {
        c.d_list = args.d;
    }
    c.p = args.p;
    c.q = args.q;
    c.trials = args.trials;
    c.seed = args.seed;
    c.grid_nodes = args.grid_nodes;
    c.workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    c.output_path = args.out;
    c.format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    c.trial_output = args.trial_out;
    c
}

fn execute(config: &ExperimentConfig) -> Result<bool> {
    let runner = RayonRunner::new(config.workers)?;
    let result = run(config, &runner)?;
    match &config.output_path {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            result.write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            result.write(&mut w)?;
            w.flush()?;
        }
    }
    if let Some(path) = &config.trial_output {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        write_norm_reports_csv(&result.norm_rows, &mut w)?;
        w.flush()?;
    }
    eprintln!("wall_time_s: {:.3}", result.wall_time);
    let failures = result.failures();
    if !failures.is_empty() {
        eprintln!("{}", serde_json::json!({ "failures": failures }));
    }
    Ok(failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = config(cli.command);
    match execute(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
