use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ffcs::bounds::scenario_report;
use ffcs::figures::{figure_table, FigureGrid, FigureKind};
use ffcs::harness::{estimate_pe, phase_sweep, simulation_table, Execution};
use ffcs::scenario::Scenario;
use ffcs::table::Table;
use ffcs::verify::{lemma2_default_grid, verify_appendix_b, verify_decoder_equivalence, verify_lemma2, AppendixBConfig};
use ffcs::{Error, Result};

/// Bayesian compressed sensing over finite fields.
#[derive(Parser, Debug)]
#[command(name = "ffcs", version)]
struct Cli {
    /// Master seed, overriding the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trial count, overriding the config file. For `verify` this sets the
    /// sample size of the chosen suite.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads; 1 runs serially, 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Threshold report for a scenario.
    Bounds { config: PathBuf },
    /// Monte Carlo estimate of the decoding error probability.
    Simulate { config: PathBuf },
    /// Error probability over the `[phase]` grid of a scenario.
    Phase { config: PathBuf },
    /// Threshold curves.
    Figures {
        #[arg(long)]
        kind: FigureKind,
    },
    /// Oracle suites.
    Verify { suite: Suite },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Lemma2,
    Decoders,
    #[value(name = "appendixB", alias = "appendixb")]
    AppendixB,
}

fn load(path: &Path, cli: &Cli) -> Result<Scenario> {
    let mut s = Scenario::load(path)?;
    if let Some(seed) = cli.seed {
        s.master_seed = seed;
    }
    if let Some(trials) = cli.trials {
        s.trials = trials;
    }
    s.validate()?;
    Ok(s)
}

fn emit(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table.write(path),
        None => {
            print!("{}", table.to_csv());
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let exec = Execution::from_threads(cli.threads);
    let seed = cli.seed.unwrap_or(0);
    let (table, passed) = match &cli.command {
        Command::Bounds { config } => (scenario_report(&load(config, cli)?)?.to_table(), true),
        Command::Simulate { config } => {
            let s = load(config, cli)?;
            let e = estimate_pe(&s, exec)?;
            (simulation_table(&s, &e)?, true)
        }
        Command::Phase { config } => {
            let s = load(config, cli)?;
            let grid = s
                .phase
                .clone()
                .ok_or_else(|| Error::Config(format!("{} has no [phase] table", config.display())))?;
            (phase_sweep(&s, &grid.n_list, &grid.ratio_list, None, exec)?.to_table(), true)
        }
        Command::Figures { kind } => (figure_table(*kind, &FigureGrid::default_for(*kind))?, true),
        Command::Verify { suite } => match suite {
            Suite::Lemma2 => {
                let r = verify_lemma2(&lemma2_default_grid(), cli.trials.unwrap_or(100_000), seed, exec)?;
                eprintln!("lemma2: max |z| = {:.3} over {} points", r.max_abs_z, r.points.len());
                (r.to_table(), r.passed)
            }
            Suite::Decoders => {
                let count = cli.trials.unwrap_or(100) as usize;
                let r = verify_decoder_equivalence(count, seed, 6, exec)?;
                for c in r.cases.iter().filter(|c| !c.mismatches.is_empty()) {
                    eprintln!("decoders: mismatch in case {} (seed {}): {:?}", c.index, c.seed, c.mismatches);
                }
                eprintln!("decoders: {} mismatches in {} scenarios", r.mismatches, r.cases.len());
                (r.to_table(), r.passed)
            }
            Suite::AppendixB => {
                let mut cfg = AppendixBConfig::default();
                if let Some(draws) = cli.trials {
                    cfg.draws = draws;
                }
                let r = verify_appendix_b(&cfg, seed, exec)?;
                eprintln!(
                    "appendixB: epsilon z = {:.3}, entropy error = {:.4}, bound decreasing = {}, rates non-increasing = {}",
                    r.epsilon_z,
                    r.entropy_mc - r.entropy_closed,
                    r.grid_strictly_decreasing,
                    r.rates_non_increasing
                );
                (r.to_table(), r.passed)
            }
        },
    };
    emit(&table, cli.out.as_deref())?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
