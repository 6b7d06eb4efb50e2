use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kinetic_voronoi::engine::{Engine, EngineError, EngineOptions};
use kinetic_voronoi::motion::{validate_trajectories, Scenario};
use kinetic_voronoi::rational::{format_rat, parse_rat, Rat};
use kvd::check::{check, describe, CheckError, CheckOptions};
use kvd::eventlog::{render, TimeJson};
use kvd::exit;
use kvd::scenario_file::{load, ScenarioFileError};
use kvd::snapshot::{snapshot, SnapshotError};
use kvd::stats::{monotonicity_warnings, sweep, table, StatsOptions};

#[derive(Parser)]
#[command(name = "kvd", version, about = "Kinetic Voronoi diagrams under convex polygonal distances")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a scenario file and check the polygon and trajectories.
    Validate { path: PathBuf },
    /// Simulate a scenario and write the event log as JSON Lines.
    ///
    /// Events at exactly the end time are processed.
    Run {
        path: PathBuf,
        /// End time (default: end of the scenario span).
        #[arg(long, value_parser = parse_time)]
        t_end: Option<Rat>,
        /// Output file (default: standard output).
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Compare the kinetic diagram with a fresh static computation at
    /// event-free sample times.
    Check {
        path: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Audit the diagram and the certificate set after every event.
        #[arg(long)]
        audit: bool,
        /// Drop the given event without repairing the diagram.
        #[arg(long, hide = true)]
        skip_event: Vec<usize>,
    },
    /// Render the diagram at time `t` as SVG.
    Snapshot {
        path: PathBuf,
        #[arg(value_parser = parse_time, allow_hyphen_values = true)]
        t: Rat,
        #[arg(long)]
        out: PathBuf,
        /// Overlay the Delaunay edges between finite sites.
        #[arg(long)]
        delaunay: bool,
    },
    /// Event counts per kind over seeded random scenarios, as CSV.
    Stats {
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8, 10, 12])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 6, 8])]
        k: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
}

fn parse_time(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn load_scenario(path: &PathBuf) -> Result<Scenario, ExitCode> {
    let f = load(path).map_err(|e| fail(exit::FAILURE, &e.to_string()))?;
    f.to_scenario().map_err(|e| match &e {
        ScenarioFileError::Polygon(p) => fail(exit::FAILURE, &format!("{e} ({p:?})")),
        _ => fail(exit::FAILURE, &e.to_string()),
    })
}

fn fail(code: i32, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code as u8)
}

fn engine_exit(e: &EngineError) -> i32 {
    match e {
        EngineError::DegenerateConfiguration(_) => exit::FAILURE,
        _ => exit::INTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Validate { path } => {
            let s = match load_scenario(&path) {
                Ok(s) => s,
                Err(c) => return c,
            };
            match validate_trajectories(&s) {
                Ok(r) => {
                    for w in &r.warnings {
                        println!("warning: {w}");
                    }
                    println!("ok: {} points, {}-gon, span [{}, {}]", s.n(), s.k(), format_rat(&s.t_start), format_rat(&s.t_end));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(exit::FAILURE, &e.to_string()),
            }
        }
        Cmd::Run { path, t_end, log } => {
            let s = match load_scenario(&path) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let end = t_end.unwrap_or_else(|| s.t_end.clone());
            let mut e = match Engine::with_options(&s, &s.t_start, EngineOptions::default()) {
                Ok(e) => e,
                Err(err) => return fail(engine_exit(&err), &format!("at t = {}: {err}", format_rat(&s.t_start))),
            };
            if let Err(err) = e.run_until(&end) {
                let t = serde_json::to_string(&TimeJson::from_time(e.now())).unwrap();
                return fail(engine_exit(&err), &format!("at t = {t}: {err}"));
            }
            let text = render(e.log(), &format_rat(&end));
            match log {
                Some(p) => {
                    if let Err(err) = std::fs::write(&p, text) {
                        return fail(exit::INTERNAL, &format!("{}: {err}", p.display()));
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Cmd::Check { path, samples, seed, audit, skip_event } => {
            let s = match load_scenario(&path) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let opts = CheckOptions { samples, seed, audit, skip_events: skip_event };
            match check(&s, &opts) {
                Ok(r) => {
                    print!("{}", describe(&r));
                    if r.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(exit::FAILURE as u8)
                    }
                }
                Err(CheckError::Engine(err)) => fail(engine_exit(&err), &err.to_string()),
                Err(err) => fail(exit::INTERNAL, &err.to_string()),
            }
        }
        Cmd::Snapshot { path, t, out, delaunay } => {
            let s = match load_scenario(&path) {
                Ok(s) => s,
                Err(c) => return c,
            };
            match snapshot(&s, &t, delaunay) {
                Ok(svg) => match std::fs::write(&out, svg) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(err) => fail(exit::INTERNAL, &format!("{}: {err}", out.display())),
                },
                Err(err @ (SnapshotError::EventTimeCollision(_) | SnapshotError::OutOfSpan(_))) => {
                    fail(exit::FAILURE, &err.to_string())
                }
                Err(SnapshotError::Engine(err)) => fail(engine_exit(&err), &err.to_string()),
                Err(err) => fail(exit::INTERNAL, &err.to_string()),
            }
        }
        Cmd::Stats { n, k, seeds, degree } => {
            let rows = sweep(&StatsOptions { ns: n, ks: k, seeds, degree });
            print!("{}", table(&rows));
            for w in monotonicity_warnings(&rows) {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
    }
}
