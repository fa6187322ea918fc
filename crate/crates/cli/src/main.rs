use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use tradepost_core::experiments::{
    analyze_economy, fixture, fixtures, run_invariants, run_sweep, simulation_report, write_bids_csv, write_grid_csv,
    write_trajectory_csv, ExperimentError, FixtureKind, RunConfig, SweepConfig, HEATMAP_RESOLUTION,
};
use tradepost_core::{simulate, Economy, TradingPostError};

#[derive(Parser)]
#[command(
    name = "tradepost",
    version,
    about = "Trading-post dynamics for additive production economies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an economy and report its cycles and growth class.
    Analyze {
        economy: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run one simulation and write trajectory CSVs and a report.
    Simulate {
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a two-parameter sweep and write the Gini grid as CSV.
    Heatmap {
        config: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        /// Grid CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the number of values per axis.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// List or run the built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
    /// Run the invariant suite on seeded random economies.
    Verify,
}

#[derive(Subcommand)]
enum FixtureAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Run {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Sweep resolution per axis.
        #[arg(long, default_value_t = HEATMAP_RESOLUTION)]
        steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> ExitCode {
    match e.downcast_ref::<ExperimentError>() {
        Some(ExperimentError::TradingPost(TradingPostError::Overflow { .. })) => ExitCode::from(3),
        Some(_) => ExitCode::from(2),
        None => ExitCode::from(1),
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<ExitCode> {
    match cmd {
        Command::Analyze { economy, json } => analyze(&economy, json),
        Command::Simulate { config, out } => {
            let cfg = RunConfig::from_json_path(&config)?;
            let base = parent(&config);
            let out = out.or_else(|| cfg.output_dir.as_ref().map(|d| base.join(d)));
            run(&cfg, &base, out.as_deref())
        }
        Command::Heatmap {
            config,
            threads,
            out,
            steps,
        } => {
            let mut cfg = SweepConfig::from_json_path(&config)?;
            if let Some(k) = steps {
                cfg = cfg.with_resolution(k);
                cfg.check()?;
            }
            heatmap(&cfg, &parent(&config), threads, out.as_deref())
        }
        Command::Fixtures { action } => match action {
            FixtureAction::List { json } => {
                let all = fixtures();
                if json {
                    println!("{}", serde_json::to_string_pretty(&all)?);
                } else {
                    for f in all {
                        println!("{:<8}{}", f.name, f.summary);
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            FixtureAction::Run {
                name,
                out,
                threads,
                steps,
            } => {
                let f = fixture(&name)?;
                match f.kind {
                    FixtureKind::Run { config } => run(&config, Path::new("."), out.as_deref()),
                    FixtureKind::Sweep { config } => {
                        let cfg = config.with_resolution(steps);
                        cfg.check()?;
                        heatmap(&cfg, Path::new("."), threads, out.as_deref())
                    }
                    FixtureKind::Schedule { schedules, rounds } => {
                        let stdout = io::stdout();
                        let mut w = stdout.lock();
                        writeln!(w, "schedule,round,player,amount")?;
                        for (k, s) in schedules.iter().enumerate() {
                            for (t, x) in s.run(rounds)?.iter().enumerate() {
                                for (i, v) in x.iter().enumerate() {
                                    writeln!(w, "{k},{t},{i},{v:.16e}")?;
                                }
                            }
                        }
                        Ok(ExitCode::SUCCESS)
                    }
                }
            }
        },
        Command::Verify => {
            let results = run_invariants();
            let mut ok = true;
            for c in &results {
                ok &= c.passed;
                println!("{} {:<34}{}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn analyze(path: &Path, json: bool) -> anyhow::Result<ExitCode> {
    let econ = Economy::from_json_path(path)
        .and_then(Economy::validate)
        .map_err(ExperimentError::from)?;
    let report = analyze_economy(&econ).map_err(ExperimentError::from)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("valid economy with {} players", econ.n());
        print!("{}", report.to_text());
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cfg: &RunConfig, base: &Path, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let (econ, s0) = cfg.resolve(base)?;
    let traj = simulate(&econ, &s0, cfg.simulate_options()).map_err(ExperimentError::from)?;
    let report = simulation_report(&econ, &traj).map_err(ExperimentError::from)?;
    print!("{}", report.to_text());
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_trajectory_csv(create(&dir.join("trajectory.csv"))?, &traj)?;
        if cfg.record_bids_every.is_some() {
            write_bids_csv(create(&dir.join("bids.csv"))?, &traj)?;
        }
        let mut w = create(&dir.join("report.json"))?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
        let meta = serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config": cfg,
        });
        let mut w = create(&dir.join("run.json"))?;
        serde_json::to_writer_pretty(&mut w, &meta)?;
        writeln!(w)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn heatmap(cfg: &SweepConfig, base: &Path, threads: Option<usize>, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let grid = run_sweep(cfg, base, threads)?;
    for w in &grid.warnings {
        eprintln!("warning: {w}");
    }
    if grid.failures > 0 {
        eprintln!(
            "{} of {} cells failed",
            grid.failures,
            grid.x_values.len() * grid.y_values.len()
        );
    }
    match out {
        Some(path) => write_grid_csv(create(path)?, &grid)?,
        None => write_grid_csv(io::stdout().lock(), &grid)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}
