use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use momentum_fw::data_io::{read_trace, write_json};
use momentum_fw::experiment::{
    cmd_compare, cmd_run, cmd_selftest, render_comparison, render_selftest, render_summary, CliError, ExperimentConfig,
    FStarSource, RunOptions,
};

#[derive(Parser)]
#[command(name = "momentum-fw", version, about = "Frank-Wolfe and accelerated Frank-Wolfe experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config).
    #[arg(long, global = true, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Random seed (overrides the config).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Print nothing but errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the algorithms of an experiment config and write traces plus summary.json.
    Run {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// Tabulate two or more traces of the same problem.
    Compare {
        /// Trace CSV files; the first one is the baseline for ratios.
        #[arg(required = true, num_args = 2..)]
        traces: Vec<PathBuf>,
        /// Optimal value; defaults to the best value in any trace.
        #[arg(long)]
        fstar: Option<f64>,
        /// Tolerance for iterations-to-tolerance.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Check oracle, gradient, estimate-sequence and hand-trace invariants.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.chain().find_map(|e| e.downcast_ref::<CliError>()).map_or(3, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(config).map_err(CliError::from)?;
            let opts = RunOptions { output: cli.output.clone(), seed: cli.seed, quiet: cli.quiet };
            let summary = cmd_run(&cfg, &opts).with_context(|| format!("running {}", config.display()))?;
            if !cli.quiet {
                print!("{}", render_summary(&summary));
            }
            if !summary.rank_bound_holds() {
                eprintln!("rank(X_k) exceeded k + 1 at a sampled iteration");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Compare { traces, fstar, tol } => {
            let mut loaded = Vec::new();
            for path in traces {
                let t = read_trace(path).map_err(CliError::from).with_context(|| format!("reading {}", path.display()))?;
                let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into());
                loaded.push((label, t));
            }
            let source = fstar.map_or(FStarSource::BestSeen, FStarSource::Value);
            let report = cmd_compare(&loaded, source, *tol)?;
            if let Some(dir) = &cli.output {
                std::fs::create_dir_all(dir).map_err(CliError::from)?;
                write_json(&dir.join("compare.json"), &report).map_err(CliError::from)?;
            }
            if !cli.quiet {
                print!("{}", render_comparison(&report));
            }
            Ok(0)
        }
        Command::Selftest => {
            let report = cmd_selftest(cli.seed.unwrap_or(0), None);
            if !cli.quiet {
                print!("{}", render_selftest(&report));
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}
