//! The kinetic Voronoi diagram: a triangle set with contact maps, a registry
//! of Voronoi edges with their edgelet labels, and a half-edgelet layer
//! derived from them.
//!
//! Positions are never stored. Vertices and breakpoints are located on
//! demand from the contact data and the site trajectories.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::frame::{pair_key, Frame, GeometryError, Triangle, TriangleKind};
use crate::motion::Site;
use crate::placements::{Corner, CornerSide, EdgeletLabel};
use crate::topology::{Topology, TopologyDiff};

/// Where a half-edgelet starts or ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// A Voronoi vertex, named by its triangle.
    Vertex([Site; 3]),
    /// The breakpoint after edgelet `index` of the edge of `pair`.
    Breakpoint { pair: (Site, Site), index: usize },
}

/// One side of one edgelet, oriented with `cell` on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgelet {
    pub cell: Site,
    pub other: Site,
    /// Contact edges of `cell` and `other`, in that order.
    pub label: EdgeletLabel,
    pub twin: usize,
    /// Next half-edgelet counterclockwise around `cell`. Absent where the
    /// boundary of an infinite cell continues along an unregistered edge.
    pub next: Option<usize>,
    pub prev: Option<usize>,
    pub origin: Endpoint,
    pub dest: Endpoint,
}

/// The breakpoint between two consecutive labels of an edge traced with the
/// left site first, if they differ by one legal step.
pub fn corner_between(k: usize, a: EdgeletLabel, b: EdgeletLabel) -> Option<Corner> {
    if b.q_edge == a.q_edge && b.p_edge == (a.p_edge + k - 1) % k {
        Some(Corner { side: CornerSide::P, vertex: a.p_edge })
    } else if b.p_edge == a.p_edge && b.q_edge == (a.q_edge + 1) % k {
        Some(Corner { side: CornerSide::Q, vertex: b.q_edge })
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MutationError {
    #[error("{0} is not an internal edgelet of edge {1}{2}")]
    NotInternal(EdgeletLabel, Site, Site),
    #[error("{0} -> {1} is not a diagonal step")]
    IllegalLabelStep(EdgeletLabel, EdgeletLabel),
    #[error("edge {0}{1} is not incident to the vertex")]
    NotIncident(Site, Site),
    #[error("edge {0}{1} has no external edgelet to give up")]
    NoExternalEdgelet(Site, Site),
    #[error("edge {0}{1} has breakpoints")]
    NotNonCorner(Site, Site),
    #[error("endpoints of edge {0}{1} do not match the new pair")]
    EndpointMismatch(Site, Site),
    #[error("no edge {0}{1}")]
    NoSuchEdge(Site, Site),
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
}

/// Operation applied by a mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    ReplaceInternal,
    Transfer,
    Flip,
    Local,
}

/// Triangles and edges around a mutation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Neighborhood {
    pub triangles: Vec<Triangle>,
    pub edges: Vec<((Site, Site), Vec<EdgeletLabel>)>,
}

/// Before and after states of the diagram elements a mutation touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationRecord {
    pub kind: MutationKind,
    pub before: Neighborhood,
    pub after: Neighborhood,
    /// Edges that went from several edgelets to one.
    pub became_non_corner: Vec<(Site, Site)>,
    /// Edges that went from one edgelet to several.
    pub became_corner: Vec<(Site, Site)>,
}

impl MutationRecord {
    /// Names of the changed triangles and edges.
    pub fn summary(&self) -> String {
        let tri = |n: &Neighborhood| n.triangles.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
        let edg = |n: &Neighborhood| {
            n.edges
                .iter()
                .map(|((a, b), l)| format!("{a}{b}:{}", l.iter().map(|x| x.to_string()).collect::<String>()))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "{} | {} -> {} | {}",
            tri(&self.before),
            edg(&self.before),
            tri(&self.after),
            edg(&self.after)
        )
    }
}

/// Result of [`Diagram::audit`]; empty iff every check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub problems: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.problems.is_empty() {
            write!(f, "audit clean")
        } else {
            write!(f, "{}", self.problems.join("\n"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    n: usize,
    k: usize,
    topo: Topology,
    halves: Vec<HalfEdgelet>,
    /// Index of the first half-edgelet of each edge on its smaller site's side.
    edge_halves: BTreeMap<(Site, Site), usize>,
}

impl Diagram {
    pub fn from_topology(n: usize, k: usize, topo: Topology) -> Self {
        let mut d = Diagram { n, k, topo, halves: Vec::new(), edge_halves: BTreeMap::new() };
        d.rebuild();
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn halves(&self) -> &[HalfEdgelet] {
        &self.halves
    }

    pub fn labels(&self, a: Site, b: Site) -> Option<&[EdgeletLabel]> {
        self.topo.labels(a, b)
    }

    pub fn triangle(&self, sites: &[Site; 3]) -> Option<Triangle> {
        self.topo.triangle(sites)
    }

    pub fn triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        self.topo.triangles()
    }

    /// Difference from a reference topology (the reference comes first).
    pub fn compare(&self, reference: &Topology) -> TopologyDiff {
        reference.diff(&self.topo)
    }

    /// Half-edgelets of the boundary of `cell` in counterclockwise order,
    /// starting anywhere. Infinite cells yield their chain of registered edges.
    pub fn cell_boundary(&self, cell: Site) -> Vec<usize> {
        let Some(start) = self.halves.iter().position(|h| h.cell == cell) else {
            return Vec::new();
        };
        let mut s = start;
        let mut guard = 0;
        while let Some(p) = self.halves[s].prev {
            if p == start || guard > self.halves.len() {
                break;
            }
            s = p;
            guard += 1;
        }
        let mut out = vec![s];
        let mut c = s;
        while let Some(nx) = self.halves[c].next {
            if nx == s || out.len() > self.halves.len() {
                break;
            }
            out.push(nx);
            c = nx;
        }
        out
    }

    fn rebuild(&mut self) {
        self.halves.clear();
        self.edge_halves.clear();
        // runs per directed cell side: (cell, other) -> range of half indices
        let mut runs: BTreeMap<(Site, Site), (usize, usize)> = BTreeMap::new();
        for (&(a, b), labels) in self.topo.edges() {
            let (t1, t2) = match self.topo.endpoints(a, b) {
                Some((x, y)) => (x.sites, y.sites),
                None => continue,
            };
            let m = labels.len();
            let base = self.halves.len();
            for (i, l) in labels.iter().enumerate() {
                let origin = if i == 0 { Endpoint::Vertex(t1) } else { Endpoint::Breakpoint { pair: (a, b), index: i - 1 } };
                let dest = if i + 1 == m { Endpoint::Vertex(t2) } else { Endpoint::Breakpoint { pair: (a, b), index: i } };
                self.halves.push(HalfEdgelet {
                    cell: a,
                    other: b,
                    label: *l,
                    twin: base + 2 * m - 1 - i,
                    next: if i + 1 < m { Some(base + i + 1) } else { None },
                    prev: if i > 0 { Some(base + i - 1) } else { None },
                    origin,
                    dest,
                });
            }
            for i in 0..m {
                let l = labels[m - 1 - i];
                let origin = if i == 0 { Endpoint::Vertex(t2) } else { Endpoint::Breakpoint { pair: (a, b), index: m - 1 - i } };
                let dest = if i + 1 == m { Endpoint::Vertex(t1) } else { Endpoint::Breakpoint { pair: (a, b), index: m - 2 - i } };
                self.halves.push(HalfEdgelet {
                    cell: b,
                    other: a,
                    label: l.reversed(),
                    twin: base + m - 1 - i,
                    next: if i + 1 < m { Some(base + m + i + 1) } else { None },
                    prev: if i > 0 { Some(base + m + i - 1) } else { None },
                    origin,
                    dest,
                });
            }
            self.edge_halves.insert((a, b), base);
            runs.insert((a, b), (base, base + m - 1));
            runs.insert((b, a), (base + m, base + 2 * m - 1));
        }
        // link runs around each vertex: for cell c, the edge to x ends at the
        // triangle (x, c, y) and the edge to y continues from it
        let keys: Vec<(Site, Site)> = runs.keys().copied().collect();
        for (c, x) in keys {
            let Some(t) = self.topo.triangle_with_directed(x, c) else { continue };
            let Some(y) = t.third(x, c) else { continue };
            let (Some(&(_, last)), Some(&(first, _))) = (runs.get(&(c, x)), runs.get(&(c, y))) else {
                continue;
            };
            self.halves[last].next = Some(first);
            self.halves[first].prev = Some(last);
        }
    }

    /// Structural audit of the whole diagram.
    pub fn audit(&self) -> AuditReport {
        let mut pr = Vec::new();
        let k = self.k;
        let name = |i: usize| {
            let h = &self.halves[i];
            format!("half-edgelet #{i} ({}|{} {})", h.cell, h.other, h.label)
        };
        for (i, h) in self.halves.iter().enumerate() {
            let Some(tw) = self.halves.get(h.twin) else {
                pr.push(format!("{}: twin out of range", name(i)));
                continue;
            };
            if tw.twin != i {
                pr.push(format!("{}: twin of twin is #{}", name(i), tw.twin));
            }
            if tw.cell != h.other || tw.other != h.cell {
                pr.push(format!("{}: twin #{} separates {}|{}", name(i), h.twin, tw.cell, tw.other));
            }
            if tw.label != h.label.reversed() {
                pr.push(format!("{}: twin carries {}", name(i), tw.label));
            }
            if tw.origin != h.dest || tw.dest != h.origin {
                pr.push(format!("{}: twin endpoints differ", name(i)));
            }
            if let Some(nx) = h.next {
                if self.halves[nx].prev != Some(i) {
                    pr.push(format!("{}: next.prev is not itself", name(i)));
                }
                if self.halves[nx].cell != h.cell {
                    pr.push(format!("{}: next lies in another cell", name(i)));
                }
                if self.halves[nx].origin != h.dest {
                    pr.push(format!("{}: next does not start where it ends", name(i)));
                }
            } else if h.cell.is_finite() {
                pr.push(format!("{}: no next in a finite cell", name(i)));
            }
            if let Some(pv) = h.prev {
                if self.halves[pv].next != Some(i) {
                    pr.push(format!("{}: prev.next is not itself", name(i)));
                }
            } else if h.cell.is_finite() {
                pr.push(format!("{}: no prev in a finite cell", name(i)));
            }
            if h.cell.is_finite() && h.other.is_finite() && h.label.p_edge == h.label.q_edge {
                pr.push(format!("{}: both sites on one edge", name(i)));
            }
        }
        // finite cells close up and cover all their half-edgelets
        for c in 0..self.n {
            let cell = Site::Finite(c);
            let total = self.halves.iter().filter(|h| h.cell == cell).count();
            if total == 0 {
                pr.push(format!("cell {cell} is empty"));
                continue;
            }
            let start = self.halves.iter().position(|h| h.cell == cell).unwrap();
            let mut cur = start;
            let mut seen = 1;
            loop {
                match self.halves[cur].next {
                    Some(nx) if nx == start => break,
                    Some(nx) if seen <= total => {
                        cur = nx;
                        seen += 1;
                    }
                    _ => {
                        pr.push(format!("cell {cell} boundary does not close"));
                        break;
                    }
                }
            }
            if seen != total {
                pr.push(format!("cell {cell}: cycle of {seen} of {total} half-edgelets"));
            }
        }
        // per edge: one-step labels and end labels matching the contacts
        for (&(a, b), labels) in self.topo.edges() {
            if labels.is_empty() {
                pr.push(format!("edge {a}{b} has no edgelets"));
                continue;
            }
            for w in labels.windows(2) {
                if corner_between(k, w[0], w[1]).is_none() {
                    pr.push(format!("edge {a}{b}: illegal step {} -> {}", w[0], w[1]));
                }
            }
            match self.topo.endpoints(a, b) {
                Some((t1, t2)) => {
                    let end_label = |t: &Triangle| {
                        let da = t.delta_of(a).unwrap();
                        let db = t.delta_of(b).unwrap();
                        EdgeletLabel::new(da, db)
                    };
                    if labels[0] != end_label(&t1) {
                        pr.push(format!("edge {a}{b}: first label {} but vertex {} has {}", labels[0], t1, end_label(&t1)));
                    }
                    let last = labels[labels.len() - 1];
                    if last != end_label(&t2) {
                        pr.push(format!("edge {a}{b}: last label {} but vertex {} has {}", last, t2, end_label(&t2)));
                    }
                }
                None => pr.push(format!("edge {a}{b} lacks an endpoint vertex")),
            }
        }
        // contact maps by triangle kind
        for t in self.topo.triangles() {
            match t.kind() {
                TriangleKind::Bounded => {
                    let d = t.delta;
                    let distinct = d[0] != d[1] && d[1] != d[2] && d[0] != d[2];
                    let rot = (0..3).filter(|&i| d[i] > d[(i + 1) % 3]).count();
                    if !distinct || rot != 1 || d.iter().any(|&x| x >= k) {
                        pr.push(format!("triangle {t}: contacts not clockwise distinct edges"));
                    }
                }
                TriangleKind::Wedge => {
                    let i = t.sites.iter().position(|s| s.is_infinite()).unwrap();
                    let Site::Infinite(m) = t.sites[i] else { unreachable!() };
                    let want = [m, (m + k - 1) % k, m];
                    let got = [t.delta[i], t.delta[(i + 1) % 3], t.delta[(i + 2) % 3]];
                    if got != want {
                        pr.push(format!("wedge {t}: contacts should be {want:?}"));
                    }
                }
                TriangleKind::Halfplane => {
                    let i = t.sites.iter().position(|s| s.is_finite()).unwrap();
                    let (Site::Infinite(x), Site::Infinite(y)) = (t.sites[(i + 1) % 3], t.sites[(i + 2) % 3]) else {
                        pr.push(format!("halfplane {t}: bad site order"));
                        continue;
                    };
                    if y != (x + 1) % k || t.delta[i] != x || t.delta[(i + 1) % 3] != x || t.delta[(i + 2) % 3] != y {
                        pr.push(format!("halfplane {t}: bad contacts"));
                    }
                }
            }
        }
        // dual graph, degree and Euler counts
        let mut pairs: BTreeSet<(Site, Site)> = BTreeSet::new();
        let mut hull = 0usize;
        for t in self.topo.triangles() {
            for i in 0..3 {
                let (a, b) = (t.sites[i], t.sites[(i + 1) % 3]);
                if a.is_infinite() && b.is_infinite() {
                    hull += 1;
                    continue;
                }
                pairs.insert(pair_key(a, b));
                if self.topo.triangle_with_directed(b, a).is_none() {
                    pr.push(format!("triangle {t}: edge {a}{b} has no triangle on the other side"));
                }
            }
        }
        let registered: BTreeSet<(Site, Site)> = self.topo.edges().map(|(p, _)| *p).collect();
        for p in pairs.difference(&registered) {
            pr.push(format!("triangle edge {}{} has no Voronoi edge", p.0, p.1));
        }
        for p in registered.difference(&pairs) {
            pr.push(format!("Voronoi edge {}{} has no triangle", p.0, p.1));
        }
        let v = self.n + k;
        let expected_t = 2 * v - 2 - k;
        if self.topo.triangle_count() != expected_t {
            pr.push(format!("{} triangles, expected {expected_t}", self.topo.triangle_count()));
        }
        if hull != k {
            pr.push(format!("{hull} hull edges between points at infinity, expected {k}"));
        }
        let e = registered.len() + hull;
        if v as i64 - e as i64 + (self.topo.triangle_count() + 1) as i64 != 2 {
            pr.push(format!("Euler relation fails: V={v} E={e} F={}", self.topo.triangle_count() + 1));
        }
        AuditReport { problems: pr }
    }

    /// Audit plus the geometric check that every edge's labels form a
    /// contiguous run of its bisector at the frame's instant.
    pub fn audit_with(&self, frame: &Frame<'_>) -> AuditReport {
        let mut r = self.audit();
        for (&(a, b), labels) in self.topo.edges() {
            if let (Site::Finite(x), Site::Finite(y)) = (a, b) {
                match frame.pair_labels(x, y) {
                    Ok(bs) => {
                        let ok = bs
                            .position(labels[0])
                            .map(|i| bs.labels.get(i..i + labels.len()) == Some(labels.as_slice()))
                            .unwrap_or(false);
                        if !ok {
                            r.problems.push(format!("edge {a}{b}: labels are not a run of the bisector"));
                        }
                    }
                    Err(e) => r.problems.push(format!("edge {a}{b}: {e}")),
                }
            }
        }
        r
    }

    #[doc(hidden)]
    pub fn inject_twin_fault(&mut self, half: usize) {
        let n = self.halves.len();
        self.halves[half].twin = (self.halves[half].twin + 1) % n;
    }

    fn neighborhood(&self, tris: &[[Site; 3]], pairs: &[(Site, Site)]) -> Neighborhood {
        Neighborhood {
            triangles: tris.iter().filter_map(|s| self.topo.triangle(s)).collect(),
            edges: pairs
                .iter()
                .filter_map(|&(a, b)| self.topo.labels(a, b).map(|l| (pair_key(a, b), l.to_vec())))
                .collect(),
        }
    }

    /// Replaces an internal edgelet by its diagonal neighbor label.
    pub fn replace_internal_edgelet(
        &mut self,
        pair: (Site, Site),
        old: EdgeletLabel,
        new: EdgeletLabel,
    ) -> Result<MutationRecord, MutationError> {
        let (a, b) = pair_key(pair.0, pair.1);
        let k = self.k;
        let labels = self.topo.labels(a, b).ok_or(MutationError::NoSuchEdge(a, b))?.to_vec();
        let i = labels.iter().position(|&l| l == old);
        let Some(i) = i.filter(|&i| i > 0 && i + 1 < labels.len()) else {
            return Err(MutationError::NotInternal(old, a, b));
        };
        let up = EdgeletLabel::new((old.p_edge + 1) % k, (old.q_edge + 1) % k);
        let down = EdgeletLabel::new((old.p_edge + k - 1) % k, (old.q_edge + k - 1) % k);
        if new != up && new != down {
            return Err(MutationError::IllegalLabelStep(old, new));
        }
        if corner_between(k, labels[i - 1], new).is_none() || corner_between(k, new, labels[i + 1]).is_none() {
            return Err(MutationError::IllegalLabelStep(old, new));
        }
        let before = self.neighborhood(&[], &[(a, b)]);
        let mut l2 = labels;
        l2[i] = new;
        self.topo.set_labels(a, b, l2);
        self.rebuild();
        Ok(MutationRecord {
            kind: MutationKind::ReplaceInternal,
            before,
            after: self.neighborhood(&[], &[(a, b)]),
            became_non_corner: vec![],
            became_corner: vec![],
        })
    }

    /// Corner event at vertex `vertex`: the external edgelet of `from` at
    /// that vertex disappears, `to` gains one, and the contact of the shared
    /// site moves to the adjacent polygon edge.
    pub fn transfer_edgelet(
        &mut self,
        from: (Site, Site),
        to: (Site, Site),
        vertex: [Site; 3],
    ) -> Result<MutationRecord, MutationError> {
        let from = pair_key(from.0, from.1);
        let to = pair_key(to.0, to.1);
        let tri = self.topo.triangle(&vertex).ok_or(MutationError::NotIncident(from.0, from.1))?;
        for p in [from, to] {
            if !tri.contains(p.0) || !tri.contains(p.1) {
                return Err(MutationError::NotIncident(p.0, p.1));
            }
        }
        let shared = [from.0, from.1].into_iter().find(|s| *s == to.0 || *s == to.1);
        let Some(c) = shared.filter(|_| from != to) else {
            return Err(MutationError::NotIncident(to.0, to.1));
        };
        let fl = self.topo.labels(from.0, from.1).ok_or(MutationError::NoSuchEdge(from.0, from.1))?.to_vec();
        if fl.len() < 2 {
            return Err(MutationError::NoExternalEdgelet(from.0, from.1));
        }
        // the end of `from` at this vertex
        let from_at_start = tri.has_directed(from.0, from.1);
        let inner = if from_at_start { fl[1] } else { fl[fl.len() - 2] };
        let new_delta = if c == from.0 { inner.p_edge } else { inner.q_edge };
        let tl = self.topo.labels(to.0, to.1).ok_or(MutationError::NoSuchEdge(to.0, to.1))?.to_vec();
        let to_at_start = tri.has_directed(to.0, to.1);
        let old_end = if to_at_start { tl[0] } else { tl[tl.len() - 1] };
        let new_end = if c == to.0 {
            EdgeletLabel::new(new_delta, old_end.q_edge)
        } else {
            EdgeletLabel::new(old_end.p_edge, new_delta)
        };
        let legal = if to_at_start {
            corner_between(self.k, new_end, old_end)
        } else {
            corner_between(self.k, old_end, new_end)
        };
        if legal.is_none() {
            return Err(MutationError::IllegalLabelStep(old_end, new_end));
        }
        let before = self.neighborhood(&[vertex], &[from, to]);
        let mut f2 = fl;
        if from_at_start {
            f2.remove(0);
        } else {
            f2.pop();
        }
        let mut t2 = tl.clone();
        if to_at_start {
            t2.insert(0, new_end);
        } else {
            t2.push(new_end);
        }
        let became_non_corner = if f2.len() == 1 { vec![from] } else { vec![] };
        let became_corner = if tl.len() == 1 { vec![to] } else { vec![] };
        self.topo.set_delta(&vertex, c, new_delta);
        self.topo.set_labels(from.0, from.1, f2);
        self.topo.set_labels(to.0, to.1, t2);
        self.rebuild();
        Ok(MutationRecord {
            kind: MutationKind::Transfer,
            before,
            after: self.neighborhood(&[vertex], &[from, to]),
            became_non_corner,
            became_corner,
        })
    }

    /// Flips the non-corner edge `old` to the pair `new`, which must be the
    /// two opposite sites of its endpoint triangles.
    pub fn flip_edge(&mut self, old: (Site, Site), new: (Site, Site)) -> Result<MutationRecord, MutationError> {
        let (p, q) = pair_key(old.0, old.1);
        let labels = self.topo.labels(p, q).ok_or(MutationError::NoSuchEdge(p, q))?.to_vec();
        if labels.len() != 1 {
            return Err(MutationError::NotNonCorner(p, q));
        }
        let (t1, t2) = self.topo.endpoints(p, q).ok_or(MutationError::NoSuchEdge(p, q))?;
        let x = t1.third(p, q).unwrap();
        let y = t2.third(p, q).unwrap();
        if pair_key(x, y) != pair_key(new.0, new.1) {
            return Err(MutationError::EndpointMismatch(p, q));
        }
        let before = self.neighborhood(&[t1.sites, t2.sites], &[(p, q)]);
        let dp = t1.delta_of(p).unwrap();
        let dq = t1.delta_of(q).unwrap();
        let dx = t1.delta_of(x).unwrap();
        let dy = t2.delta_of(y).unwrap();
        // t1 = (p, q, x) and t2 = (q, p, y) clockwise; the quad is p y q x
        let n1 = Triangle::new([p, y, x], [dp, dy, dx]);
        let n2 = Triangle::new([y, q, x], [dy, dq, dx]);
        self.topo.remove_triangle(&t1.sites);
        self.topo.remove_triangle(&t2.sites);
        self.topo.remove_edge(p, q);
        self.topo.insert_triangle(n1)?;
        self.topo.insert_triangle(n2)?;
        let (a, b) = pair_key(x, y);
        let (da, db) = if a == x { (dx, dy) } else { (dy, dx) };
        if a.is_finite() || b.is_finite() {
            self.topo.set_labels(a, b, vec![EdgeletLabel::new(da, db)]);
        }
        self.rebuild();
        Ok(MutationRecord {
            kind: MutationKind::Flip,
            before,
            after: self.neighborhood(&[n1.sites, n2.sites], &[(a, b)]),
            became_non_corner: vec![],
            became_corner: vec![],
        })
    }

    /// Replaces a set of triangles and edge label lists wholesale.
    pub fn replace_local(
        &mut self,
        remove: &[[Site; 3]],
        insert: &[Triangle],
        edges: &[((Site, Site), Option<Vec<EdgeletLabel>>)],
    ) -> Result<MutationRecord, MutationError> {
        let pairs: Vec<(Site, Site)> = edges.iter().map(|(p, _)| pair_key(p.0, p.1)).collect();
        let before = self.neighborhood(remove, &pairs);
        for s in remove {
            self.topo.remove_triangle(s);
        }
        for t in insert {
            self.topo.insert_triangle(*t)?;
        }
        for ((a, b), l) in edges {
            match l {
                Some(l) => self.topo.set_labels(*a, *b, l.clone()),
                None => {
                    self.topo.remove_edge(*a, *b);
                }
            }
        }
        self.rebuild();
        let ins: Vec<[Site; 3]> = insert.iter().map(|t| t.sites).collect();
        Ok(MutationRecord {
            kind: MutationKind::Local,
            before,
            after: self.neighborhood(&ins, &pairs),
            became_non_corner: vec![],
            became_corner: vec![],
        })
    }

    /// Total edgelet count over all edges.
    pub fn edgelet_count(&self) -> usize {
        self.topo.edges().map(|(_, l)| l.len()).sum()
    }

    /// Total breakpoint count over all edges.
    pub fn breakpoint_count(&self) -> usize {
        self.topo.edges().map(|(_, l)| l.len() - 1).sum()
    }
}
