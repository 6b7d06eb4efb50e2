//! JSON Lines event log: one record per event, then one summary record.

use std::collections::BTreeMap;

use kinetic_voronoi::engine::{EventKind, EventRecord};
use kinetic_voronoi::rational::format_rat;
use kinetic_voronoi::realroots::AlgebraicTime;
use serde::{Deserialize, Serialize};

/// An exact event time: a root of `poly` (coefficients from the constant
/// term up) isolated in `interval`, plus an advisory decimal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeJson {
    pub poly: Vec<String>,
    pub interval: [String; 2],
    pub approx: f64,
}

impl TimeJson {
    pub fn from_time(t: &AlgebraicTime) -> TimeJson {
        let approx = t.approx();
        let (lo, hi) = t.interval();
        let poly = match t.exact() {
            Some(r) => vec![format_rat(&-r), "1".to_string()],
            None => t.poly().monic().coeffs().iter().map(format_rat).collect(),
        };
        TimeJson { poly, interval: [format_rat(&lo), format_rat(&hi)], approx }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventLine {
    pub time: TimeJson,
    pub kind: String,
    pub sites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<usize>,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<String>,
}

impl EventLine {
    pub fn from_record(r: &EventRecord) -> EventLine {
        EventLine {
            time: TimeJson::from_time(&r.time),
            kind: r.kind.name().to_string(),
            sites: r.sites.iter().map(|s| s.to_string()).collect(),
            sequence: r.sequence,
            rotation: r.rotation,
            detail: r.detail.clone(),
            mutation: r.mutation.as_ref().map(|m| m.summary()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub events: usize,
    pub counts: BTreeMap<String, usize>,
    pub end: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryLine {
    pub summary: Summary,
}

pub fn kind_counts(log: &[EventRecord]) -> BTreeMap<String, usize> {
    let mut m: BTreeMap<String, usize> = EventKind::ALL.iter().map(|k| (k.name().to_string(), 0)).collect();
    for r in log {
        *m.get_mut(r.kind.name()).unwrap() += 1;
    }
    m
}

/// The full log text, one JSON object per line.
pub fn render(log: &[EventRecord], end: &str) -> String {
    let mut out = String::new();
    for r in log {
        out.push_str(&serde_json::to_string(&EventLine::from_record(r)).unwrap());
        out.push('\n');
    }
    let s = SummaryLine { summary: Summary { events: log.len(), counts: kind_counts(log), end: end.to_string() } };
    out.push_str(&serde_json::to_string(&s).unwrap());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kinetic_voronoi::rational::int;
    use kinetic_voronoi::realroots::{isolate_roots, RatPolynomial};

    #[test]
    fn rational_time_is_linear() {
        let j = TimeJson::from_time(&AlgebraicTime::from_int(2));
        assert_eq!(j.poly, vec!["-2", "1"]);
        assert_eq!(j.interval, ["2".to_string(), "2".to_string()]);
        assert_eq!(j.approx, 2.0);
    }

    #[test]
    fn irrational_time_keeps_its_polynomial() {
        let p = RatPolynomial::from_ints(&[-2, 0, 1]);
        let r = &isolate_roots(&p, &int(0), &int(2)).unwrap()[0];
        let j = TimeJson::from_time(&r.time);
        assert_eq!(j.poly, vec!["-2", "0", "1"]);
        assert!((j.approx - 2f64.sqrt()).abs() < 1e-12);
    }
}
