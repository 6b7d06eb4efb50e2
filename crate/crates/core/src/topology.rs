//! Combinatorial content of a diagram: triangles with contact maps and the
//! edgelet labels of every Voronoi edge. Two diagrams are equal exactly when
//! their topologies are.

use std::collections::BTreeMap;
use std::fmt;

use crate::frame::{pair_key, Frame, GeometryError, Triangle};
use crate::motion::Site;
use crate::placements::EdgeletLabel;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Topology {
    triangles: BTreeMap<[Site; 3], [usize; 3]>,
    directed: BTreeMap<(Site, Site), [Site; 3]>,
    edges: BTreeMap<(Site, Site), Vec<EdgeletLabel>>,
}

impl Topology {
    /// Topology from a triangle set, with edge labels read off the bisector
    /// structures of `frame`.
    pub fn from_triangles(
        frame: &Frame<'_>,
        triangles: impl IntoIterator<Item = Triangle>,
    ) -> Result<Self, GeometryError> {
        let mut t = Topology::default();
        for tri in triangles {
            t.insert_triangle(tri)?;
        }
        let pairs: Vec<(Site, Site)> = t.all_pairs();
        for (a, b) in pairs {
            t.relabel(frame, a, b)?;
        }
        Ok(t)
    }

    /// Unordered site pairs with at least one finite site that bound a
    /// triangle.
    fn all_pairs(&self) -> Vec<(Site, Site)> {
        let mut v: Vec<(Site, Site)> = self
            .directed
            .keys()
            .filter(|(a, b)| a.is_finite() || b.is_finite())
            .map(|&(a, b)| pair_key(a, b))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn insert_triangle(&mut self, t: Triangle) -> Result<(), GeometryError> {
        if self.triangles.contains_key(&t.sites) {
            return Err(GeometryError::Inconsistent(format!("duplicate triangle {t}")));
        }
        for i in 0..3 {
            let d = (t.sites[i], t.sites[(i + 1) % 3]);
            if let Some(other) = self.directed.get(&d) {
                return Err(GeometryError::Inconsistent(format!(
                    "directed edge {}{} in two triangles ({:?})",
                    d.0, d.1, other
                )));
            }
        }
        for i in 0..3 {
            self.directed.insert((t.sites[i], t.sites[(i + 1) % 3]), t.sites);
        }
        self.triangles.insert(t.sites, t.delta);
        Ok(())
    }

    pub fn remove_triangle(&mut self, sites: &[Site; 3]) -> Option<Triangle> {
        let delta = self.triangles.remove(sites)?;
        for i in 0..3 {
            self.directed.remove(&(sites[i], sites[(i + 1) % 3]));
        }
        Some(Triangle { sites: *sites, delta })
    }

    /// Changes the contact of `site` in the triangle with sites `sites`.
    pub fn set_delta(&mut self, sites: &[Site; 3], site: Site, edge: usize) -> bool {
        let Some(d) = self.triangles.get_mut(sites) else { return false };
        match sites.iter().position(|&s| s == site) {
            Some(i) => {
                d[i] = edge;
                true
            }
            None => false,
        }
    }

    pub fn triangle(&self, sites: &[Site; 3]) -> Option<Triangle> {
        self.triangles.get(sites).map(|&delta| Triangle { sites: *sites, delta })
    }

    pub fn triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        self.triangles.iter().map(|(s, d)| Triangle { sites: *s, delta: *d })
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// The triangle in which `a` is immediately followed by `b` clockwise.
    pub fn triangle_with_directed(&self, a: Site, b: Site) -> Option<Triangle> {
        self.directed.get(&(a, b)).and_then(|s| self.triangle(s))
    }

    /// Endpoint triangles of the edge of `(a, b)`, `a < b`: first the one in
    /// which `a` precedes `b` clockwise, then the other.
    pub fn endpoints(&self, a: Site, b: Site) -> Option<(Triangle, Triangle)> {
        Some((self.triangle_with_directed(a, b)?, self.triangle_with_directed(b, a)?))
    }

    /// Recomputes the labels of the edge of `(a, b)` from its endpoints;
    /// removes the entry when the pair no longer bounds a triangle.
    pub fn relabel(&mut self, frame: &Frame<'_>, a: Site, b: Site) -> Result<(), GeometryError> {
        let (a, b) = pair_key(a, b);
        if a.is_infinite() && b.is_infinite() {
            return Ok(());
        }
        let t1 = self.triangle_with_directed(a, b);
        let t2 = self.triangle_with_directed(b, a);
        match (t1, t2) {
            (None, None) => {
                self.edges.remove(&(a, b));
                Ok(())
            }
            (Some(t1), Some(t2)) => {
                let start = (t1.delta_of(a).unwrap(), t1.delta_of(b).unwrap());
                let end = (t2.delta_of(a).unwrap(), t2.delta_of(b).unwrap());
                let labels = frame.edge_labels(a, b, start, end)?;
                self.edges.insert((a, b), labels);
                Ok(())
            }
            _ => Err(GeometryError::Inconsistent(format!("edge {a}{b} bounds only one triangle"))),
        }
    }

    pub fn set_labels(&mut self, a: Site, b: Site, labels: Vec<EdgeletLabel>) {
        self.edges.insert(pair_key(a, b), labels);
    }

    pub fn remove_edge(&mut self, a: Site, b: Site) -> Option<Vec<EdgeletLabel>> {
        self.edges.remove(&pair_key(a, b))
    }

    pub fn labels(&self, a: Site, b: Site) -> Option<&[EdgeletLabel]> {
        self.edges.get(&pair_key(a, b)).map(|v| v.as_slice())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(Site, Site), &Vec<EdgeletLabel>)> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sites adjacent to `s` in the triangulation.
    pub fn neighbors(&self, s: Site) -> Vec<Site> {
        let mut v: Vec<Site> = self.directed.range((s, Site::Finite(0))..).take_while(|((a, _), _)| *a == s).map(|((_, b), _)| *b).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Triangles incident to `s`.
    pub fn incident(&self, s: Site) -> Vec<Triangle> {
        let mut v: Vec<Triangle> = self
            .directed
            .range((s, Site::Finite(0))..)
            .take_while(|((a, _), _)| *a == s)
            .filter_map(|(_, t)| self.triangle(t))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Structured difference; `self` is the reference.
    pub fn diff(&self, other: &Topology) -> TopologyDiff {
        let mut items = Vec::new();
        for (s, d) in &self.triangles {
            match other.triangles.get(s) {
                None => items.push(DiffItem::MissingTriangle(Triangle { sites: *s, delta: *d })),
                Some(d2) if d2 != d => {
                    items.push(DiffItem::DeltaMismatch { sites: *s, expected: *d, found: *d2 })
                }
                _ => {}
            }
        }
        for (s, d) in &other.triangles {
            if !self.triangles.contains_key(s) {
                items.push(DiffItem::ExtraTriangle(Triangle { sites: *s, delta: *d }));
            }
        }
        for (p, l) in &self.edges {
            match other.edges.get(p) {
                None => items.push(DiffItem::MissingEdge(*p)),
                Some(l2) if l2 != l => {
                    items.push(DiffItem::LabelMismatch { pair: *p, expected: l.clone(), found: l2.clone() })
                }
                _ => {}
            }
        }
        for p in other.edges.keys() {
            if !self.edges.contains_key(p) {
                items.push(DiffItem::ExtraEdge(*p));
            }
        }
        TopologyDiff { items }
    }
}

/// One discrepancy between a reference topology and another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffItem {
    MissingTriangle(Triangle),
    ExtraTriangle(Triangle),
    DeltaMismatch { sites: [Site; 3], expected: [usize; 3], found: [usize; 3] },
    MissingEdge((Site, Site)),
    ExtraEdge((Site, Site)),
    LabelMismatch { pair: (Site, Site), expected: Vec<EdgeletLabel>, found: Vec<EdgeletLabel> },
}

fn fmt_labels(l: &[EdgeletLabel]) -> String {
    l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for DiffItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffItem::MissingTriangle(t) => write!(f, "missing triangle {t}"),
            DiffItem::ExtraTriangle(t) => write!(f, "extra triangle {t}"),
            DiffItem::DeltaMismatch { sites, expected, found } => write!(
                f,
                "triangle {}{}{}: contacts {:?}, found {:?}",
                sites[0], sites[1], sites[2], expected, found
            ),
            DiffItem::MissingEdge((a, b)) => write!(f, "missing edge {a}{b}"),
            DiffItem::ExtraEdge((a, b)) => write!(f, "extra edge {a}{b}"),
            DiffItem::LabelMismatch { pair: (a, b), expected, found } => write!(
                f,
                "edge {a}{b}: labels [{}], found [{}]",
                fmt_labels(expected),
                fmt_labels(found)
            ),
        }
    }
}

/// Difference report between two topologies; empty iff they are identical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopologyDiff {
    pub items: Vec<DiffItem>,
}

impl TopologyDiff {
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Site pairs whose triangulation edge appears in one side only.
    pub fn changed_edges(&self) -> Vec<(Site, Site)> {
        self.items
            .iter()
            .filter_map(|i| match i {
                DiffItem::MissingEdge(p) | DiffItem::ExtraEdge(p) => Some(*p),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for TopologyDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return write!(f, "no differences");
        }
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}
