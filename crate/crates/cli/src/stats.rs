//! Event-count statistics over seeded random scenarios.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use kinetic_voronoi::engine::{Engine, EngineOptions, EventKind};
use kinetic_voronoi::motion::random_scenario;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsRow {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Per-kind event counts, or the engine error that ended the run.
    pub outcome: Result<BTreeMap<EventKind, usize>, String>,
}

impl StatsRow {
    pub fn total(&self) -> Option<usize> {
        self.outcome.as_ref().ok().map(|m| m.values().sum())
    }
}

#[derive(Debug, Clone)]
pub struct StatsOptions {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub seeds: u64,
    pub degree: usize,
}

pub fn scenario_seed(n: usize, k: usize, seed: u64) -> u64 {
    (n as u64) << 40 ^ (k as u64) << 20 ^ seed
}

pub fn sweep(o: &StatsOptions) -> Vec<StatsRow> {
    let mut rows = Vec::new();
    for &k in &o.ks {
        for &n in &o.ns {
            for seed in 0..o.seeds {
                let mut rng = ChaCha8Rng::seed_from_u64(scenario_seed(n, k, seed));
                let s = random_scenario(&mut rng, n, k, o.degree);
                let opts = EngineOptions { verify_local: false, audit_each_step: false };
                let outcome = Engine::with_options(&s, &s.t_start, opts)
                    .and_then(|mut e| e.run_until(&s.t_end))
                    .map(|log| {
                        let mut m: BTreeMap<EventKind, usize> = EventKind::ALL.iter().map(|&k| (k, 0)).collect();
                        for r in log {
                            *m.get_mut(&r.kind).unwrap() += 1;
                        }
                        m
                    })
                    .map_err(|e| e.to_string());
                rows.push(StatsRow { n, k, seed, outcome });
            }
        }
    }
    rows
}

/// CSV table, one row per run.
pub fn table(rows: &[StatsRow]) -> String {
    let mut out = String::from("n,k,seed");
    for k in EventKind::ALL {
        let _ = write!(out, ",{}", k.name());
    }
    out.push_str(",total,status\n");
    for r in rows {
        let _ = write!(out, "{},{},{}", r.n, r.k, r.seed);
        match &r.outcome {
            Ok(m) => {
                for k in EventKind::ALL {
                    let _ = write!(out, ",{}", m[&k]);
                }
                let _ = writeln!(out, ",{},ok", r.total().unwrap());
            }
            Err(e) => {
                for _ in EventKind::ALL {
                    out.push(',');
                }
                let _ = writeln!(out, ",,\"{}\"", e.replace('"', "'"));
            }
        }
    }
    out
}

/// Mean total events per (k, n) over successful runs.
pub fn means(rows: &[StatsRow]) -> BTreeMap<(usize, usize), f64> {
    let mut acc: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for r in rows {
        if let Some(t) = r.total() {
            let e = acc.entry((r.k, r.n)).or_insert((0, 0));
            e.0 += t;
            e.1 += 1;
        }
    }
    acc.into_iter().filter(|(_, (_, c))| *c > 0).map(|(key, (s, c))| (key, s as f64 / c as f64)).collect()
}

/// Places where the mean total decreases as n grows at fixed k.
pub fn monotonicity_warnings(rows: &[StatsRow]) -> Vec<String> {
    let m = means(rows);
    let mut out = Vec::new();
    let mut prev: Option<((usize, usize), f64)> = None;
    for (&(k, n), &v) in &m {
        if let Some(((pk, pn), pv)) = prev {
            if pk == k && v < pv {
                out.push(format!("k={k}: mean events drop from {pv:.1} at n={pn} to {v:.1} at n={n}"));
            }
        }
        prev = Some(((k, n), v));
    }
    out
}
