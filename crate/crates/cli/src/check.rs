//! Cross-check of the kinetic diagram against the static oracle.

use std::cmp::Ordering;

use kinetic_voronoi::engine::{Engine, EngineError, EngineOptions};
use kinetic_voronoi::motion::Scenario;
use kinetic_voronoi::rational::{format_rat, Rat};
use kinetic_voronoi::realroots::AlgebraicTime;
use kinetic_voronoi::static_oracle::{build_diagram, OracleError};
use kinetic_voronoi::topology::Topology;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    /// Audit the diagram and the certificate census after every event.
    pub audit: bool,
    /// Drop this many events (counted from the first) without repair.
    pub skip_events: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SampleDiff {
    pub time: Rat,
    pub diff: String,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub events: usize,
    pub samples: Vec<Rat>,
    pub diffs: Vec<SampleDiff>,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("could not find {0} event-free sample times")]
    NoSamples(usize),
}

/// Event times of a full run over the span.
pub fn event_times(s: &Scenario) -> Result<Vec<AlgebraicTime>, EngineError> {
    let mut e = Engine::with_options(s, &s.t_start, EngineOptions { verify_local: false, audit_each_step: false })?;
    let log = e.run_until(&s.t_end)?;
    let mut t: Vec<AlgebraicTime> = log.into_iter().map(|r| r.time).collect();
    t.dedup_by(|a, b| a.compare(b) == Ordering::Equal);
    Ok(t)
}

/// `m` sample times in the open span, one per equal slot, avoiding event
/// times and instants at which the oracle sees a degenerate configuration.
pub fn sample_times(s: &Scenario, m: usize, seed: u64, events: &[AlgebraicTime]) -> Result<Vec<(Rat, Topology)>, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = &s.t_end - &s.t_start;
    let den: i64 = 1 << 20;
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let mut found = None;
        for _ in 0..64 {
            let u = Rat::new((j as i64 * den + rng.gen_range(1..den)).into(), (m as i64 * den).into());
            let t = &s.t_start + &span * &u;
            if events.iter().any(|e| e.cmp_rational(&t) == Ordering::Equal) {
                continue;
            }
            match build_diagram(s, &t) {
                Ok(d) => {
                    found = Some((t, d.topology));
                    break;
                }
                Err(OracleError::DegenerateConfiguration(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        out.push(found.ok_or(CheckError::NoSamples(m))?);
    }
    Ok(out)
}

pub fn check(s: &Scenario, opts: &CheckOptions) -> Result<CheckReport, CheckError> {
    let mut report = CheckReport::default();
    if opts.samples == 0 {
        report.warnings.push("no sample times requested; nothing was compared".into());
        return Ok(report);
    }
    let events = event_times(s)?;
    let samples = sample_times(s, opts.samples, opts.seed, &events)?;
    let mut e = Engine::with_options(s, &s.t_start, EngineOptions { verify_local: false, audit_each_step: opts.audit })?;
    let mut processed = 0usize;
    for (t, reference) in &samples {
        loop {
            if opts.skip_events.contains(&processed) && e.next_event_time().is_some_and(|x| x.cmp_rational(t) != Ordering::Greater) {
                e.skip_next_event();
                processed += 1;
                continue;
            }
            match e.step(t)? {
                Some(r) => processed += r.len().min(1),
                None => break,
            }
        }
        let diff = e.diagram().compare(reference);
        if !diff.is_empty() {
            report.diffs.push(SampleDiff { time: t.clone(), diff: diff.to_string() });
        }
    }
    report.events = e.log().len();
    report.samples = samples.into_iter().map(|(t, _)| t).collect();
    Ok(report)
}

pub fn describe(r: &CheckReport) -> String {
    let mut out = format!("{} events, {} samples, {} with differences\n", r.events, r.samples.len(), r.diffs.len());
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    if let Some(d) = r.diffs.first() {
        out.push_str(&format!("first difference at t = {}:\n{}\n", format_rat(&d.time), d.diff));
    }
    out
}
