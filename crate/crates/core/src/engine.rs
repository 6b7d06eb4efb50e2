//! The kinetic engine: certificates, the event queue and event repair.
//!
//! Each certificate is identified by a key that fully determines its
//! polynomial. After every event the set of keys the diagram calls for is
//! recomputed and compared with the keys in the queue; only new keys get a
//! fresh polynomial and failure time.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagram::{corner_between, Diagram, MutationError, MutationRecord};
use crate::frame::{pair_key, Frame, GeometryError, Probe, Triangle, TriangleKind, Witness};
use crate::motion::{cross_with, Scenario, Site};
use crate::placements::{certificates, EdgeletLabel};
use crate::rational::{simplest_between, Rat};
use crate::realroots::{isolate_roots, AlgebraicTime, RatPolynomial, RootError, Side};
use crate::static_oracle::{build_diagram, empty_triangle, OracleError};

/// Identity of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertKey {
    /// An internal edgelet between breakpoints on opposite sides.
    GenericBisector { pair: (Site, Site), prev: EdgeletLabel, label: EdgeletLabel, next: EdgeletLabel },
    /// An end edgelet of a Voronoi edge lying on a terminal ray.
    SingularBisector { pair: (Site, Site), label: EdgeletLabel },
    /// A finite site on the interior of its contact edge at a finite vertex.
    Vertex { triangle: Triangle, site: Site },
    /// Existence of a Voronoi edge without breakpoints.
    Edge { pair: (Site, Site), start: Triangle, end: Triangle },
}

impl CertKey {
    pub fn involves(&self, s: Site) -> bool {
        match self {
            CertKey::GenericBisector { pair, .. } | CertKey::SingularBisector { pair, .. } => pair.0 == s || pair.1 == s,
            CertKey::Vertex { triangle, .. } => triangle.contains(s),
            CertKey::Edge { start, end, .. } => start.contains(s) || end.contains(s),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CertKey::GenericBisector { .. } => "GenericBisector",
            CertKey::SingularBisector { .. } => "SingularBisector",
            CertKey::Vertex { .. } => "Vertex",
            CertKey::Edge { .. } => "Edge",
        }
    }
}

impl fmt::Display for CertKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertKey::GenericBisector { pair: (a, b), label, .. } => write!(f, "bisector {a}{b} {label}"),
            CertKey::SingularBisector { pair: (a, b), label } => write!(f, "singular {a}{b} {label}"),
            CertKey::Vertex { triangle, site } => write!(f, "vertex {triangle} {site}"),
            CertKey::Edge { pair: (a, b), .. } => write!(f, "edge {a}{b}"),
        }
    }
}

/// A certificate with its polynomials, their signs while it holds, and its
/// earliest failure time.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub key: CertKey,
    pub polys: Vec<RatPolynomial>,
    pub valid: Vec<i8>,
    pub failure: Option<AlgebraicTime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    GenericBisector,
    GenericCorner,
    GenericFlip,
    SingularBisectorStart,
    SingularInitialCorner,
    SingularIntermediateCorner,
    SingularFlip,
    SingularFinalCorner,
}

impl EventKind {
    pub const ALL: [EventKind; 8] = [
        EventKind::GenericBisector,
        EventKind::GenericCorner,
        EventKind::GenericFlip,
        EventKind::SingularBisectorStart,
        EventKind::SingularInitialCorner,
        EventKind::SingularIntermediateCorner,
        EventKind::SingularFlip,
        EventKind::SingularFinalCorner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::GenericBisector => "GenericBisector",
            EventKind::GenericCorner => "GenericCorner",
            EventKind::GenericFlip => "GenericFlip",
            EventKind::SingularBisectorStart => "SingularBisectorStart",
            EventKind::SingularInitialCorner => "SingularInitialCorner",
            EventKind::SingularIntermediateCorner => "SingularIntermediateCorner",
            EventKind::SingularFlip => "SingularFlip",
            EventKind::SingularFinalCorner => "SingularFinalCorner",
        }
    }

    pub fn is_singular(self) -> bool {
        !matches!(self, EventKind::GenericBisector | EventKind::GenericCorner | EventKind::GenericFlip)
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One processed event or singular sub-event.
#[derive(Debug, Clone)]
pub struct EventRecord {
    pub time: AlgebraicTime,
    pub kind: EventKind,
    pub sites: Vec<Site>,
    /// Position within a singular sequence.
    pub rotation: Option<usize>,
    /// Index of the singular sequence this record belongs to.
    pub sequence: Option<usize>,
    pub mutation: Option<MutationRecord>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("simultaneous unrelated events at t~{time}: {certificates}")]
    SimultaneousEvents { time: String, certificates: String },
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error("singular sweep failed: {0}")]
    SweepInconsistency(String),
    #[error("audit failed after event: {0}")]
    AuditFailed(String),
    #[error("root isolation: {0}")]
    Roots(String),
}

impl From<OracleError> for EngineError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::DegenerateConfiguration(m) => EngineError::DegenerateConfiguration(m),
            other => EngineError::InconsistentCertificate(other.to_string()),
        }
    }
}

impl From<GeometryError> for EngineError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Degenerate(m) => EngineError::DegenerateConfiguration(m),
            GeometryError::Inconsistent(m) => EngineError::InconsistentCertificate(m),
        }
    }
}

impl From<MutationError> for EngineError {
    fn from(e: MutationError) -> Self {
        EngineError::InconsistentCertificate(e.to_string())
    }
}

impl From<RootError> for EngineError {
    fn from(e: RootError) -> Self {
        EngineError::Roots(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Recheck every changed triangle and edge geometrically right after
    /// each event.
    pub verify_local: bool,
    /// Run the structural audit and the queue census after each event.
    pub audit_each_step: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { verify_local: true, audit_each_step: false }
    }
}

/// Whether two labels use adjacent polygon edges.
pub fn is_consecutive(k: usize, l: EdgeletLabel) -> bool {
    (l.p_edge + 1) % k == l.q_edge || (l.q_edge + 1) % k == l.p_edge
}

/// Certificate keys called for by a diagram.
pub fn desired_keys(d: &Diagram) -> BTreeSet<CertKey> {
    let k = d.k();
    let topo = d.topology();
    let mut out = BTreeSet::new();
    for (&(a, b), labels) in topo.edges() {
        if !(a.is_finite() && b.is_finite()) {
            continue;
        }
        let m = labels.len();
        for i in 1..m.saturating_sub(1) {
            let c1 = corner_between(k, labels[i - 1], labels[i]);
            let c2 = corner_between(k, labels[i], labels[i + 1]);
            if let (Some(c1), Some(c2)) = (c1, c2) {
                if c1.side != c2.side {
                    out.insert(CertKey::GenericBisector {
                        pair: (a, b),
                        prev: labels[i - 1],
                        label: labels[i],
                        next: labels[i + 1],
                    });
                }
            }
        }
        for l in [labels[0], labels[m - 1]] {
            if is_consecutive(k, l) {
                out.insert(CertKey::SingularBisector { pair: (a, b), label: l });
            }
        }
        if m == 1 {
            if let Some((t1, t2)) = topo.endpoints(a, b) {
                if t1.kind() == TriangleKind::Bounded && t2.kind() == TriangleKind::Bounded {
                    out.insert(CertKey::Edge { pair: (a, b), start: t1, end: t2 });
                }
            }
        }
    }
    for t in topo.triangles() {
        if t.kind() == TriangleKind::Bounded {
            for s in t.sites {
                out.insert(CertKey::Vertex { triangle: t, site: s });
            }
        }
    }
    out
}

fn rel(s: &Scenario, a: Site, b: Site) -> (RatPolynomial, RatPolynomial) {
    s.relative(a.finite_index().unwrap(), b.finite_index().unwrap())
}

/// Polynomials of a certificate; it holds while none changes sign.
pub fn certificate_polys(s: &Scenario, key: &CertKey) -> Result<Vec<RatPolynomial>, EngineError> {
    let q = &s.polygon;
    let k = q.k();
    let frame = Frame::symbolic(s, Probe::At(s.t_start.clone()));
    let polys = match key {
        CertKey::GenericBisector { pair, prev, label, next } => {
            let c1 = corner_between(k, *prev, *label).unwrap();
            let c2 = corner_between(k, *label, *next).unwrap();
            let w = q.vertex(c1.vertex).sub(q.vertex(c2.vertex));
            let (dx, dy) = rel(s, pair.0, pair.1);
            vec![cross_with(&dx, &dy, &w)]
        }
        CertKey::SingularBisector { pair, label } => {
            let (dx, dy) = rel(s, pair.0, pair.1);
            vec![cross_with(&dx, &dy, &q.edge_dir(label.p_edge)), cross_with(&dx, &dy, &q.edge_dir(label.q_edge))]
        }
        CertKey::Vertex { triangle, site } => {
            let idx = triangle.sites.map(|x| x.finite_index().unwrap());
            let w = frame
                .bounded_with(idx, triangle.delta)
                .ok_or_else(|| EngineError::DegenerateConfiguration(format!("singular contact system at {triangle}")))?;
            let crate::frame::Witness::Bounded { cx, cy, scale, .. } = &w else { unreachable!() };
            let i = site.finite_index().unwrap();
            let p = &s.points[i];
            certificates::vertex(q, (&p.x, &p.y), (cx, cy, scale), triangle.delta_of(*site).unwrap()).to_vec()
        }
        CertKey::Edge { pair, start, end } => {
            let idx = start.sites.map(|x| x.finite_index().unwrap());
            let w = frame
                .bounded_with(idx, start.delta)
                .ok_or_else(|| EngineError::DegenerateConfiguration(format!("singular contact system at {start}")))?;
            let crate::frame::Witness::Bounded { cx, cy, scale, .. } = &w else { unreachable!() };
            let x = end.third(pair.0, pair.1).unwrap();
            let d = end.delta_of(x).unwrap();
            let p = &s.points[x.finite_index().unwrap()];
            vec![certificates::edge(q, (&p.x, &p.y), (cx, cy, scale), d)
                .map_err(|_| EngineError::DegenerateConfiguration(format!("{x} stays cocircular with {start}")))?]
        }
    };
    for p in &polys {
        if p.is_zero() {
            return Err(EngineError::DegenerateConfiguration(format!("certificate {key} is identically zero")));
        }
    }
    Ok(polys)
}

/// First root of `p` strictly after `after` and no later than `until` at
/// which `p` changes sign.
pub fn next_sign_change(p: &RatPolynomial, after: &AlgebraicTime, until: &Rat) -> Result<Option<AlgebraicTime>, EngineError> {
    if p.is_constant() {
        return Ok(None);
    }
    let lo = after.interval().0;
    if &lo > until {
        return Ok(None);
    }
    for r in isolate_roots(p, &lo, until)? {
        if r.time.compare(after) != Ordering::Greater {
            continue;
        }
        if r.time.sign_of(p, Side::JustBefore) != r.time.sign_of(p, Side::JustAfter) {
            return Ok(Some(r.time));
        }
    }
    Ok(None)
}

pub struct Engine {
    scenario: Scenario,
    diagram: Diagram,
    now: AlgebraicTime,
    certs: BTreeMap<CertKey, Certificate>,
    queue: BTreeSet<(AlgebraicTime, CertKey)>,
    log: Vec<EventRecord>,
    options: EngineOptions,
    sequences: usize,
}

impl Engine {
    pub fn initialize(scenario: &Scenario, t0: &Rat) -> Result<Engine, EngineError> {
        Engine::with_options(scenario, t0, EngineOptions::default())
    }

    pub fn with_options(scenario: &Scenario, t0: &Rat, options: EngineOptions) -> Result<Engine, EngineError> {
        let d = build_diagram(scenario, t0)?;
        let diagram = Diagram::from_topology(scenario.n(), scenario.k(), d.topology);
        let mut e = Engine {
            scenario: scenario.clone(),
            diagram,
            now: AlgebraicTime::from_rational(t0.clone()),
            certs: BTreeMap::new(),
            queue: BTreeSet::new(),
            log: Vec::new(),
            options,
            sequences: 0,
        };
        e.refresh(&Probe::At(t0.clone()))?;
        Ok(e)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn now(&self) -> &AlgebraicTime {
        &self.now
    }

    pub fn log(&self) -> &[EventRecord] {
        &self.log
    }

    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.certs.values()
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Time of the earliest pending event.
    pub fn next_event_time(&self) -> Option<&AlgebraicTime> {
        self.queue.first().map(|(t, _)| t)
    }

    /// Every pending failure time.
    pub fn pending_times(&self) -> Vec<AlgebraicTime> {
        self.queue.iter().map(|(t, _)| t.clone()).collect()
    }

    /// Count of queued certificates per kind name.
    pub fn census(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for c in self.certs.keys() {
            *m.entry(c.kind_name()).or_insert(0) += 1;
        }
        m
    }

    /// Problems with the certificate set: keys the diagram calls for but
    /// the engine lacks, stale keys, and queue entries out of sync.
    pub fn census_problems(&self) -> Vec<String> {
        let mut pr = Vec::new();
        let want = desired_keys(&self.diagram);
        for k in want.iter() {
            if !self.certs.contains_key(k) {
                pr.push(format!("missing certificate {k}"));
            }
        }
        for k in self.certs.keys() {
            if !want.contains(k) {
                pr.push(format!("stale certificate {k}"));
            }
        }
        let scheduled = self.certs.values().filter(|c| c.failure.is_some()).count();
        if scheduled != self.queue.len() {
            pr.push(format!("{} scheduled certificates but {} queue entries", scheduled, self.queue.len()));
        }
        for (t, k) in &self.queue {
            match self.certs.get(k).and_then(|c| c.failure.as_ref()) {
                Some(f) if f.compare(t) == Ordering::Equal => {}
                _ => pr.push(format!("queue entry for {k} does not match its certificate")),
            }
            if t.compare(&self.now) != Ordering::Greater {
                pr.push(format!("queue entry for {k} is not in the future"));
            }
        }
        pr
    }

    /// Certificates whose asserted sign pattern is violated at rational `t`.
    pub fn violations_at(&self, t: &Rat) -> Vec<String> {
        let mut v = Vec::new();
        for c in self.certs.values() {
            for (p, &s) in c.polys.iter().zip(&c.valid) {
                if p.sign_at_rational(t) != s {
                    v.push(format!("{} fails at {}", c.key, t));
                }
            }
        }
        v
    }

    fn refresh(&mut self, probe: &Probe) -> Result<(), EngineError> {
        let want = desired_keys(&self.diagram);
        let stale: Vec<CertKey> = self.certs.keys().filter(|k| !want.contains(k)).cloned().collect();
        for k in stale {
            if let Some(c) = self.certs.remove(&k) {
                if let Some(t) = c.failure {
                    self.queue.remove(&(t, k));
                }
            }
        }
        let until = self.scenario.t_end.clone();
        for key in want {
            if self.certs.contains_key(&key) {
                continue;
            }
            let polys = certificate_polys(&self.scenario, &key)?;
            let valid: Vec<i8> = polys.iter().map(|p| probe.sign(p)).collect();
            if valid.contains(&0) {
                return Err(EngineError::DegenerateConfiguration(format!("certificate {key} is tight")));
            }
            if matches!(key, CertKey::Vertex { .. }) && valid != [1, -1] {
                return Err(EngineError::InconsistentCertificate(format!("{key} does not hold")));
            }
            let mut failure: Option<AlgebraicTime> = None;
            for p in &polys {
                if let Some(t) = next_sign_change(p, &self.now, &until)? {
                    if failure.as_ref().map_or(true, |f| t < *f) {
                        failure = Some(t);
                    }
                }
            }
            if let Some(t) = &failure {
                self.queue.insert((t.clone(), key.clone()));
            }
            self.certs.insert(key.clone(), Certificate { key, polys, valid, failure });
        }
        Ok(())
    }

    /// Processes the next event if it occurs no later than `until`.
    pub fn step(&mut self, until: &Rat) -> Result<Option<Vec<EventRecord>>, EngineError> {
        let Some((t0, _)) = self.queue.first().cloned() else { return Ok(None) };
        if t0.cmp_rational(until) == Ordering::Greater {
            return Ok(None);
        }
        let group: Vec<CertKey> = self
            .queue
            .iter()
            .take_while(|(t, _)| t.compare(&t0) == Ordering::Equal)
            .map(|(_, k)| k.clone())
            .collect();
        for k in &group {
            if let Some(c) = self.certs.remove(k) {
                self.queue.remove(&(c.failure.unwrap(), k.clone()));
            }
        }
        self.now = t0.clone();
        let singular: BTreeSet<(Site, Site)> = group
            .iter()
            .filter_map(|k| match k {
                CertKey::SingularBisector { pair, .. } => Some(*pair),
                _ => None,
            })
            .collect();
        let records = if singular.len() == 1 {
            let pair = *singular.iter().next().unwrap();
            if !group.iter().all(|k| k.involves(pair.0) || k.involves(pair.1)) {
                return Err(self.simultaneous(&t0, &group));
            }
            self.handle_singular(&t0, &group, pair)?
        } else if group.len() == 1 {
            vec![self.handle_generic(&t0, &group[0])?]
        } else {
            return Err(self.simultaneous(&t0, &group));
        };
        self.refresh(&Probe::After(t0.clone()))?;
        if self.options.audit_each_step {
            let r = self.diagram.audit();
            if !r.is_clean() {
                return Err(EngineError::AuditFailed(r.to_string()));
            }
            let c = self.census_problems();
            if !c.is_empty() {
                return Err(EngineError::AuditFailed(c.join("\n")));
            }
        }
        self.log.extend(records.iter().cloned());
        Ok(Some(records))
    }

    fn simultaneous(&self, t0: &AlgebraicTime, group: &[CertKey]) -> EngineError {
        EngineError::SimultaneousEvents {
            time: format!("{:.12}", t0.approx()),
            certificates: group.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("; "),
        }
    }

    /// Processes all events up to and including `t_end`.
    pub fn run_until(&mut self, t_end: &Rat) -> Result<Vec<EventRecord>, EngineError> {
        let mut out = Vec::new();
        while let Some(r) = self.step(t_end)? {
            out.extend(r);
        }
        Ok(out)
    }

    /// Drops the next pending event without repairing the diagram.
    #[doc(hidden)]
    pub fn skip_next_event(&mut self) -> Option<CertKey> {
        let (t, k) = self.queue.pop_first()?;
        self.certs.remove(&k);
        self.now = t;
        Some(k)
    }

    fn record(&self, t0: &AlgebraicTime, kind: EventKind, sites: Vec<Site>, m: Option<MutationRecord>, detail: String) -> EventRecord {
        EventRecord { time: t0.clone(), kind, sites, rotation: None, sequence: None, mutation: m, detail }
    }

    fn handle_generic(&mut self, t0: &AlgebraicTime, key: &CertKey) -> Result<EventRecord, EngineError> {
        let k = self.diagram.k();
        let rec = match key {
            CertKey::GenericBisector { pair, prev, label, next } => {
                let new = EdgeletLabel::new(
                    (prev.p_edge + next.p_edge + k - label.p_edge) % k,
                    (prev.q_edge + next.q_edge + k - label.q_edge) % k,
                );
                let m = self.diagram.replace_internal_edgelet(*pair, *label, new)?;
                let detail = format!("{}{}: {} -> {}", pair.0, pair.1, label, new);
                self.record(t0, EventKind::GenericBisector, vec![pair.0, pair.1], Some(m), detail)
            }
            CertKey::Vertex { triangle, site } => {
                let c = self.certs_polys_for(key)?;
                let a = triangle.delta_of(*site).unwrap();
                let new = if t0.sign_of(&c[0], Side::At) == 0 {
                    (a + k - 1) % k
                } else if t0.sign_of(&c[1], Side::At) == 0 {
                    (a + 1) % k
                } else {
                    return Err(EngineError::InconsistentCertificate(format!("{key} fired without a root")));
                };
                if triangle.delta.contains(&new) {
                    return Err(EngineError::InconsistentCertificate(format!(
                        "{site} moves to edge {new}, already used at {triangle}"
                    )));
                }
                let others: Vec<Site> = triangle.sites.iter().copied().filter(|s| s != site).collect();
                let mut from = None;
                for &x in &others {
                    let (a1, b1) = pair_key(*site, x);
                    let labels = self.diagram.labels(a1, b1).ok_or(MutationError::NoSuchEdge(a1, b1))?;
                    if labels.len() < 2 {
                        continue;
                    }
                    let inner = if triangle.has_directed(a1, b1) { labels[1] } else { labels[labels.len() - 2] };
                    let coord = if a1 == *site { inner.p_edge } else { inner.q_edge };
                    if coord == new {
                        from = Some(x);
                    }
                }
                let Some(fx) = from else {
                    return Err(EngineError::InconsistentCertificate(format!("no edge loses an edgelet at {key}")));
                };
                let tx = others.iter().copied().find(|&x| x != fx).unwrap();
                let m = self.diagram.transfer_edgelet((*site, fx), (*site, tx), triangle.sites)?;
                let detail = format!("{site} at {triangle}: edge {a} -> {new}; {site}{fx} loses, {site}{tx} gains");
                let mut sites = vec![*site];
                sites.extend(others);
                self.record(t0, EventKind::GenericCorner, sites, Some(m), detail)
            }
            CertKey::Edge { pair, start, end } => {
                let x = start.third(pair.0, pair.1).unwrap();
                let y = end.third(pair.0, pair.1).unwrap();
                let m = self.diagram.flip_edge(*pair, (x, y))?;
                let detail = format!("{}{} -> {}{}", pair.0, pair.1, x, y);
                self.record(t0, EventKind::GenericFlip, vec![pair.0, pair.1, x, y], Some(m), detail)
            }
            CertKey::SingularBisector { .. } => unreachable!(),
        };
        if self.options.verify_local {
            if let Some(m) = &rec.mutation {
                let tris: Vec<Triangle> = m.after.triangles.clone();
                let mut pairs: Vec<(Site, Site)> = m.after.edges.iter().map(|(p, _)| *p).collect();
                for t in &tris {
                    for i in 0..3 {
                        pairs.push(pair_key(t.sites[i], t.sites[(i + 1) % 3]));
                    }
                }
                self.verify_local(t0, &tris, &pairs)?;
            }
        }
        Ok(rec)
    }

    fn certs_polys_for(&self, key: &CertKey) -> Result<Vec<RatPolynomial>, EngineError> {
        certificate_polys(&self.scenario, key)
    }

    /// Checks triangles and edge labels against a fresh computation just
    /// after `t0`.
    fn verify_local(&self, t0: &AlgebraicTime, tris: &[Triangle], pairs: &[(Site, Site)]) -> Result<(), EngineError> {
        let frame = Frame::symbolic(&self.scenario, Probe::After(t0.clone()));
        for t in tris {
            let got = empty_triangle(&frame, t.sites)?;
            if got.as_ref().map(|(x, _)| x) != Some(t) {
                return Err(EngineError::InconsistentCertificate(format!(
                    "after event at t~{:.9}: triangle {t} is not Delaunay (fresh: {:?})",
                    t0.approx(),
                    got.map(|(x, _)| x.to_string())
                )));
            }
        }
        let topo = self.diagram.topology();
        for &(a, b) in pairs {
            if a.is_infinite() && b.is_infinite() {
                continue;
            }
            let Some((t1, t2)) = topo.endpoints(a, b) else { continue };
            let start = (t1.delta_of(a).unwrap(), t1.delta_of(b).unwrap());
            let end = (t2.delta_of(a).unwrap(), t2.delta_of(b).unwrap());
            let want = frame.edge_labels(a, b, start, end)?;
            if topo.labels(a, b) != Some(want.as_slice()) {
                return Err(EngineError::InconsistentCertificate(format!(
                    "after event at t~{:.9}: labels of {a}{b} disagree",
                    t0.approx()
                )));
            }
        }
        Ok(())
    }

    /// Delaunay triangles just after `t0` covering the region of the
    /// triangles incident to `a` or `b`.
    fn local_triangulation(&self, frame: &Frame<'_>, a: Site, b: Site, region: &[Site]) -> Result<Vec<Triangle>, EngineError> {
        let mut seen: BTreeSet<[Site; 3]> = BTreeSet::new();
        let mut out: BTreeSet<Triangle> = BTreeSet::new();
        for c in [a, b] {
            for (i, &x) in region.iter().enumerate() {
                for &y in &region[i + 1..] {
                    if x == c || y == c {
                        continue;
                    }
                    let mut tr = [c, x, y];
                    tr.sort();
                    if !seen.insert(tr) {
                        continue;
                    }
                    if let Some((t, _)) = empty_triangle(frame, tr)? {
                        out.insert(t);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Local triangulation at a rational time just after `t0`, kept only if
    /// every triangle is confirmed in `frame`.
    fn guess_local_triangulation(
        &self,
        t0: &AlgebraicTime,
        frame: &Frame<'_>,
        a: Site,
        b: Site,
        region: &[Site],
    ) -> Option<Vec<Triangle>> {
        let step = Rat::new(1.into(), (1u64 << 20).into());
        t0.refine_to(&step);
        let (_, hi) = t0.interval();
        let near = simplest_between(&hi, &(&hi + &step));
        let rational = Frame::at(&self.scenario, &near);
        let guess = self.local_triangulation(&rational, a, b, region).ok()?;
        for t in &guess {
            if !confirm_triangle(frame, t) {
                return None;
            }
        }
        Some(guess)
    }

    fn handle_singular(&mut self, t0: &AlgebraicTime, group: &[CertKey], pair: (Site, Site)) -> Result<Vec<EventRecord>, EngineError> {
        let k = self.diagram.k();
        let (a, b) = pair;
        let label = group
            .iter()
            .find_map(|c| match c {
                CertKey::SingularBisector { pair: p, label } if *p == pair => Some(*label),
                _ => None,
            })
            .unwrap();
        let (dx, dy) = rel(&self.scenario, a, b);
        let q = &self.scenario.polygon;
        let edge = if t0.sign_of(&cross_with(&dx, &dy, &q.edge_dir(label.p_edge)), Side::At) == 0 {
            label.p_edge
        } else {
            label.q_edge
        };
        // the site whose contact in the vanishing ray edgelet is not the
        // parallel edge gives up the region swept by the ray
        let (loser, winner) = if label.p_edge != edge { (a, b) } else { (b, a) };
        let old_topo = self.diagram.topology().clone();
        let labels = old_topo.labels(a, b).unwrap().to_vec();
        let (t1, t2) = old_topo
            .endpoints(a, b)
            .ok_or_else(|| EngineError::SweepInconsistency(format!("edge {a}{b} lacks endpoints")))?;
        let eta_minus = if labels[0] == label { t1 } else { t2 };

        let mut old_tris = old_topo.incident(a);
        old_tris.extend(old_topo.incident(b));
        old_tris.sort();
        old_tris.dedup();
        let mut region: Vec<Site> = old_tris.iter().flat_map(|t| t.sites).collect();
        region.sort();
        region.dedup();

        let frame = Frame::symbolic(&self.scenario, Probe::After(t0.clone()));
        let boundary = |ts: &[Triangle]| -> BTreeSet<(Site, Site)> {
            let dir: BTreeSet<(Site, Site)> =
                ts.iter().flat_map(|t| (0..3).map(move |i| (t.sites[i], t.sites[(i + 1) % 3]))).collect();
            dir.iter().filter(|(x, y)| !dir.contains(&(*y, *x))).copied().collect()
        };
        let tiles = |ts: &[Triangle]| ts.len() == old_tris.len() && boundary(ts) == boundary(&old_tris);
        let new_tris = match self.guess_local_triangulation(t0, &frame, a, b, &region) {
            Some(g) if tiles(&g) => g,
            _ => self.local_triangulation(&frame, a, b, &region)?,
        };
        if !tiles(&new_tris) {
            return Err(EngineError::SweepInconsistency(format!(
                "{a}{b} at t~{:.9}: region of {} triangles retriangulated into {}",
                t0.approx(),
                old_tris.len(),
                new_tris.len()
            )));
        }

        let mut scratch = old_topo.clone();
        for t in &old_tris {
            scratch.remove_triangle(&t.sites);
        }
        for t in &new_tris {
            scratch.insert_triangle(*t).map_err(|e| EngineError::SweepInconsistency(e.to_string()))?;
        }
        let mut pairs: BTreeSet<(Site, Site)> = BTreeSet::new();
        for t in old_tris.iter().chain(&new_tris) {
            for i in 0..3 {
                let p = pair_key(t.sites[i], t.sites[(i + 1) % 3]);
                if p.0.is_finite() || p.1.is_finite() {
                    pairs.insert(p);
                }
            }
        }
        let mut edges = Vec::new();
        for &(x, y) in &pairs {
            scratch.relabel(&frame, x, y)?;
            edges.push(((x, y), scratch.labels(x, y).map(|l| l.to_vec())));
        }
        let old_sites: Vec<[Site; 3]> = old_tris.iter().map(|t| t.sites).collect();
        let mutation = self.diagram.replace_local(&old_sites, &new_tris, &edges)?;
        let new_topo = self.diagram.topology().clone();

        // rotational walk around the losing site
        let has = |t: &crate::topology::Topology, x: Site, y: Site| t.labels(x, y).is_some();
        let r0 = eta_minus
            .third(a, b)
            .ok_or_else(|| EngineError::SweepInconsistency("initial vertex lacks a third site".into()))?;
        let mut chain = vec![r0];
        let mut prev = eta_minus;
        let mut r = r0;
        while !has(&new_topo, loser, r) {
            let next = old_tris
                .iter()
                .find(|t| t.contains(loser) && t.contains(r) && **t != prev)
                .copied()
                .ok_or_else(|| EngineError::SweepInconsistency(format!("walk around {loser} stops at {r}")))?;
            let r2 = next.third(loser, r).unwrap();
            if !has(&new_topo, winner, r2) {
                return Err(EngineError::SweepInconsistency(format!(
                    "flip of {loser}{r} does not produce {winner}{r2}"
                )));
            }
            chain.push(r2);
            prev = next;
            r = r2;
            if chain.len() > old_tris.len() + 1 {
                return Err(EngineError::SweepInconsistency("walk does not terminate".into()));
            }
        }
        let eta_plus = new_topo
            .incident(winner)
            .into_iter()
            .find(|t| t.contains(loser) && t.contains(r))
            .ok_or_else(|| EngineError::SweepInconsistency(format!("no final vertex {loser}{winner}{r}")))?;

        let coord = |t: &crate::topology::Topology, x: Site| -> Option<usize> {
            let (p0, p1) = pair_key(loser, x);
            let l = t.labels(p0, p1)?;
            Some(
                l.iter()
                    .filter(|e| (if p0 == loser { e.p_edge } else { e.q_edge }) == edge)
                    .count(),
            )
        };

        let seq = self.sequences;
        self.sequences += 1;
        let mut recs = Vec::new();
        let mut push = |kind: EventKind, sites: Vec<Site>, m: Option<MutationRecord>, detail: String| {
            let idx = recs.len();
            recs.push(EventRecord {
                time: t0.clone(),
                kind,
                sites,
                rotation: Some(idx),
                sequence: Some(seq),
                mutation: m,
                detail,
            });
        };
        push(
            EventKind::SingularBisectorStart,
            vec![loser, winner],
            Some(mutation),
            format!("{loser}{winner} parallel to edge {edge}"),
        );
        let initial_site = group
            .iter()
            .find_map(|c| match c {
                CertKey::Vertex { triangle, site } if *triangle == eta_minus => Some(*site),
                _ => None,
            })
            .unwrap_or(loser);
        push(
            EventKind::SingularInitialCorner,
            eta_minus.sites.to_vec(),
            None,
            format!("{initial_site} at {eta_minus}"),
        );
        let s = chain.len() - 1;
        for (j, &rj) in chain.iter().enumerate() {
            let old_c = coord(&old_topo, rj).unwrap_or(0);
            let keep = if has(&new_topo, loser, rj) { coord(&new_topo, rj).unwrap_or(0) } else { 1 };
            for _ in 0..old_c.saturating_sub(keep) {
                push(
                    EventKind::SingularIntermediateCorner,
                    vec![rj, loser, winner],
                    None,
                    format!("edgelet of {loser}{rj} passes to {winner}{rj}"),
                );
            }
            if j < s {
                let rn = chain[j + 1];
                push(
                    EventKind::SingularFlip,
                    vec![loser, rj, winner, rn],
                    None,
                    format!("{loser}{rj} -> {winner}{rn}"),
                );
            }
        }
        push(
            EventKind::SingularFinalCorner,
            eta_plus.sites.to_vec(),
            None,
            format!("{winner} at {eta_plus}"),
        );
        let _ = k;
        Ok(recs)
    }
}

/// Whether `t` is an empty triangle of `frame` with exactly these contacts.
fn confirm_triangle(frame: &Frame<'_>, t: &Triangle) -> bool {
    if t.kind() != TriangleKind::Bounded {
        return matches!(empty_triangle(frame, t.sites), Ok(Some((x, _))) if x == *t);
    }
    let s = t.sites.map(|x| x.finite_index().unwrap());
    let Some(w) = frame.bounded_with(s, t.delta) else { return false };
    let Witness::Bounded { scale, .. } = &w else { return false };
    frame.sign(scale) > 0
        && (0..3).all(|m| frame.contact_sign(&w, s[m], t.delta[m]) > 0)
        && matches!(frame.empty_of(&w, &s), Ok(true))
}
