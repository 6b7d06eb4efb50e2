//! Geometric predicates over moving sites, evaluated at one instant.
//!
//! A [`Frame`] holds the site trajectories and a [`Probe`]: either a rational
//! time, or the instant just after (or before) an algebraic time. Every test
//! is the sign of a polynomial in `t`, so the same code builds the diagram at
//! a sample time and repairs it right after an event.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::motion::{cross_with, Scenario, Site};
use crate::placements::{bisector_labels_with, certificates, BisectorStructure, ContactSystem, EdgeletLabel};
use crate::polygon::ConvexPolygon;
use crate::rational::{sign, Point, Rat};
use crate::realroots::{AlgebraicTime, RatPolynomial, Side};

/// The instant at which a frame evaluates signs.
#[derive(Debug, Clone)]
pub enum Probe {
    At(Rat),
    After(AlgebraicTime),
    Before(AlgebraicTime),
}

impl Probe {
    pub fn sign(&self, p: &RatPolynomial) -> i8 {
        if p.is_constant() {
            return sign(&p.leading());
        }
        match self {
            Probe::At(t) => p.sign_at_rational(t),
            Probe::After(t) => t.sign_of(p, Side::JustAfter),
            Probe::Before(t) => t.sign_of(p, Side::JustBefore),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        !matches!(self, Probe::At(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("inconsistent structure: {0}")]
    Inconsistent(String),
}

pub type Poly2 = (RatPolynomial, RatPolynomial);

/// The empty placement witnessing a triangle.
#[derive(Debug, Clone)]
pub enum Witness {
    Bounded { sys: ContactSystem, cx: RatPolynomial, cy: RatPolynomial, scale: RatPolynomial },
    Wedge { vertex: usize, apex: Poly2 },
    Halfplane { edge: usize, site: usize },
}

/// Result of [`Frame::bounded_triangle`].
#[derive(Debug, Clone)]
pub struct BoundedCandidate {
    pub sites: [usize; 3],
    pub delta: [usize; 3],
    pub witness: Witness,
    pub degenerate: bool,
}

/// A Delaunay triangle: three sites in clockwise order, rotated so the
/// smallest site comes first, with the edge index each site touches.
///
/// For a point at infinity the stored index is the polygon vertex it is
/// attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle {
    pub sites: [Site; 3],
    pub delta: [usize; 3],
}

/// Number of points at infinity in a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    Bounded,
    Wedge,
    Halfplane,
}

impl Triangle {
    pub fn new(sites: [Site; 3], delta: [usize; 3]) -> Self {
        let r = (0..3).min_by_key(|&i| sites[i]).unwrap();
        Triangle {
            sites: [sites[r], sites[(r + 1) % 3], sites[(r + 2) % 3]],
            delta: [delta[r], delta[(r + 1) % 3], delta[(r + 2) % 3]],
        }
    }

    pub fn kind(&self) -> TriangleKind {
        match self.sites.iter().filter(|s| s.is_infinite()).count() {
            0 => TriangleKind::Bounded,
            1 => TriangleKind::Wedge,
            _ => TriangleKind::Halfplane,
        }
    }

    pub fn position(&self, s: Site) -> Option<usize> {
        self.sites.iter().position(|&x| x == s)
    }

    pub fn contains(&self, s: Site) -> bool {
        self.position(s).is_some()
    }

    pub fn delta_of(&self, s: Site) -> Option<usize> {
        self.position(s).map(|i| self.delta[i])
    }

    /// Rotation starting at `s`.
    pub fn from_site(&self, s: Site) -> Option<([Site; 3], [usize; 3])> {
        let i = self.position(s)?;
        Some((
            [self.sites[i], self.sites[(i + 1) % 3], self.sites[(i + 2) % 3]],
            [self.delta[i], self.delta[(i + 1) % 3], self.delta[(i + 2) % 3]],
        ))
    }

    /// Whether `a` is immediately followed by `b` in clockwise order.
    pub fn has_directed(&self, a: Site, b: Site) -> bool {
        match self.position(a) {
            Some(i) => self.sites[(i + 1) % 3] == b,
            None => false,
        }
    }

    /// The site other than `a` and `b`.
    pub fn third(&self, a: Site, b: Site) -> Option<Site> {
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        self.sites.iter().copied().find(|&s| s != a && s != b)
    }
}

impl std::fmt::Display for Triangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}:{} {}:{} {}:{}]",
            self.sites[0], self.delta[0], self.sites[1], self.delta[1], self.sites[2], self.delta[2]
        )
    }
}

/// Canonical key for an unordered site pair: smaller site first.
pub fn pair_key(a: Site, b: Site) -> (Site, Site) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

type LabelCache = RefCell<HashMap<(usize, usize), Result<Rc<BisectorStructure>, GeometryError>>>;

/// Site trajectories plus an evaluation instant.
pub struct Frame<'a> {
    pub polygon: &'a ConvexPolygon,
    pub traj: Vec<Poly2>,
    pub probe: Probe,
    labels: LabelCache,
    systems: RefCell<HashMap<[usize; 3], Option<ContactSystem>>>,
}

impl<'a> Frame<'a> {
    /// Frame at a rational time, with positions substituted up front.
    pub fn at(s: &'a Scenario, t: &Rat) -> Self {
        let traj = s
            .points
            .iter()
            .map(|p| (RatPolynomial::constant(p.x.eval(t)), RatPolynomial::constant(p.y.eval(t))))
            .collect();
        Frame::with(&s.polygon, traj, Probe::At(t.clone()))
    }

    /// Frame for static positions.
    pub fn points(q: &'a ConvexPolygon, pts: &[Point]) -> Self {
        let traj = pts
            .iter()
            .map(|p| (RatPolynomial::constant(p.x.clone()), RatPolynomial::constant(p.y.clone())))
            .collect();
        Frame::with(q, traj, Probe::At(Rat::from_integer(0.into())))
    }

    /// Frame with full trajectories and a symbolic probe.
    pub fn symbolic(s: &'a Scenario, probe: Probe) -> Self {
        let traj = s.points.iter().map(|p| (p.x.clone(), p.y.clone())).collect();
        Frame::with(&s.polygon, traj, probe)
    }

    pub fn with(polygon: &'a ConvexPolygon, traj: Vec<Poly2>, probe: Probe) -> Self {
        Frame { polygon, traj, probe, labels: RefCell::new(HashMap::new()), systems: RefCell::new(HashMap::new()) }
    }

    pub fn n(&self) -> usize {
        self.traj.len()
    }

    pub fn k(&self) -> usize {
        self.polygon.k()
    }

    pub fn sign(&self, p: &RatPolynomial) -> i8 {
        self.probe.sign(p)
    }

    fn rel(&self, a: usize, b: usize) -> Poly2 {
        (&self.traj[b].0 - &self.traj[a].0, &self.traj[b].1 - &self.traj[a].1)
    }

    /// Bisector structure of finite sites `a`, `b` with `a` on the left.
    pub fn pair_labels(&self, a: usize, b: usize) -> Result<Rc<BisectorStructure>, GeometryError> {
        if let Some(r) = self.labels.borrow().get(&(a, b)) {
            return r.clone();
        }
        let (dx, dy) = self.rel(a, b);
        let r = bisector_labels_with(self.polygon, |w| self.sign(&cross_with(&dx, &dy, w)))
            .map(Rc::new)
            .map_err(|_| GeometryError::Degenerate(format!("p{a}-p{b} is parallel to a chord")));
        self.labels.borrow_mut().insert((a, b), r.clone());
        r
    }

    fn system(&self, edges: [usize; 3]) -> Option<ContactSystem> {
        if let Some(s) = self.systems.borrow().get(&edges) {
            return s.clone();
        }
        let s = ContactSystem::new(self.polygon, edges).ok();
        self.systems.borrow_mut().insert(edges, s.clone());
        s
    }

    /// Bounded witness for sites `s` touching edges `delta`, if the contact
    /// system is regular. Contact positions are not checked.
    pub fn bounded_with(&self, s: [usize; 3], delta: [usize; 3]) -> Option<Witness> {
        let sys = self.system(delta)?;
        let (cx, cy, scale) = sys.solve_poly(
            self.polygon,
            [
                (&self.traj[s[0]].0, &self.traj[s[0]].1),
                (&self.traj[s[1]].0, &self.traj[s[1]].1),
                (&self.traj[s[2]].0, &self.traj[s[2]].1),
            ],
        );
        Some(Witness::Bounded { sys, cx, cy, scale })
    }

    /// Sign pattern of a site along its contact edge: 1 strictly inside the
    /// segment, 0 at an endpoint, -1 outside.
    pub fn contact_sign(&self, w: &Witness, site: usize, edge: usize) -> i8 {
        let Witness::Bounded { cx, cy, scale, .. } = w else {
            return 1;
        };
        let [a, b] = certificates::vertex(
            self.polygon,
            (&self.traj[site].0, &self.traj[site].1),
            (cx, cy, scale),
            edge,
        );
        match (self.sign(&a), self.sign(&b)) {
            (1, -1) => 1,
            (0, _) | (_, 0) => 0,
            _ => -1,
        }
    }

    /// The bounded homothet touching three finite sites, as sites in
    /// clockwise order with their contact edges. Uses bisector labels to
    /// prune candidate edge triples. The result is flagged when a site sits
    /// at a vertex of the homothet or the placement is not unique.
    pub fn bounded_triangle(&self, s: [usize; 3]) -> Option<BoundedCandidate> {
        let k = self.k();
        let lab = |a: usize, b: usize| self.pair_labels(a, b).ok();
        let (lab01, lab02, lab12) = (lab(s[0], s[1]), lab(s[0], s[2]), lab(s[1], s[2]));
        let ok = |l: &Option<Rc<BisectorStructure>>, x: usize, y: usize| match l {
            Some(b) => b.contains(EdgeletLabel::new(x, y)),
            None => x != y,
        };
        let mut found: Option<BoundedCandidate> = None;
        let firsts: Vec<(usize, usize)> = match &lab01 {
            Some(b) => b.labels.iter().map(|l| (l.p_edge, l.q_edge)).collect(),
            None => (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).collect(),
        };
        for (i, j) in firsts {
            for l in 0..k {
                if l == i || l == j || !ok(&lab02, i, l) || !ok(&lab12, j, l) {
                    continue;
                }
                let delta = [i, j, l];
                let Some(w) = self.bounded_with(s, delta) else { continue };
                let Witness::Bounded { scale, .. } = &w else { unreachable!() };
                if self.sign(scale) <= 0 {
                    continue;
                }
                let cs: Vec<i8> = (0..3).map(|m| self.contact_sign(&w, s[m], delta[m])).collect();
                if cs.iter().any(|&c| c < 0) {
                    continue;
                }
                let at_vertex = cs.iter().any(|&c| c == 0);
                if let Some(f) = &mut found {
                    f.degenerate = true;
                    continue;
                }
                // clockwise order = increasing contact edge index, cyclically
                let mut idx = [0usize, 1, 2];
                idx.sort_by_key(|&m| delta[m]);
                found = Some(BoundedCandidate {
                    sites: idx.map(|m| s[m]),
                    delta: idx.map(|m| delta[m]),
                    witness: w,
                    degenerate: at_vertex,
                });
            }
        }
        found
    }

    /// Wedge at vertex `v_m` with `a` on the arm along `e_{m-1}` and `b` on
    /// the arm along `e_m`, if both lie on the open arms.
    pub fn wedge(&self, a: usize, b: usize, m: usize) -> Result<Option<Witness>, GeometryError> {
        let q = self.polygon;
        let d1 = q.edge_dir(q.prev(m));
        let d2 = q.edge_dir(m);
        let den = d1.cross(&d2);
        let (bx, by) = self.rel(a, b);
        // apex = a + s d1 with s = cross(b - a, d2) / den
        let s = cross_with(&bx, &by, &d2).scale(&(Rat::from_integer(1.into()) / &den));
        let apex = (
            &self.traj[a].0 + &s.scale(&d1.x),
            &self.traj[a].1 + &s.scale(&d1.y),
        );
        let along = &(&self.traj[b].0 - &apex.0).scale(&d2.x) + &(&self.traj[b].1 - &apex.1).scale(&d2.y);
        let (s1, s2) = (self.sign(&s), self.sign(&along));
        if s1 == 0 || s2 == 0 {
            if s1 >= 0 && s2 >= 0 {
                return Err(GeometryError::Degenerate(format!("p{a} and p{b} meet at a wedge apex")));
            }
            return Ok(None);
        }
        if s1 > 0 && s2 > 0 {
            Ok(Some(Witness::Wedge { vertex: m % q.k(), apex }))
        } else {
            Ok(None)
        }
    }

    /// 1 if finite site `x` is strictly inside the witness, 0 if on its
    /// boundary, -1 if outside.
    pub fn inside(&self, w: &Witness, x: usize) -> i8 {
        let q = self.polygon;
        let (px, py) = &self.traj[x];
        match w {
            Witness::Bounded { cx, cy, scale, .. } => {
                let mut worst = -1i8;
                for e in 0..q.k() {
                    let n = q.normal(e);
                    let r = &(&(px - cx).scale(&n.x) + &(py - cy).scale(&n.y)) - &scale.scale(q.support(e));
                    let s = self.sign(&r);
                    if s > 0 {
                        return -1;
                    }
                    worst = worst.max(s);
                }
                if worst == 0 {
                    0
                } else {
                    1
                }
            }
            Witness::Wedge { vertex, apex } => {
                let a1 = q.edge_dir(q.prev(*vertex)).neg();
                let a2 = q.edge_dir(*vertex);
                let wx = px - &apex.0;
                let wy = py - &apex.1;
                // cross(a1, w) and cross(w, a2)
                let c1 = self.sign(&(&wy.scale(&a1.x) - &wx.scale(&a1.y)));
                let c2 = self.sign(&(&wx.scale(&a2.y) - &wy.scale(&a2.x)));
                if c1 > 0 && c2 > 0 {
                    1
                } else if (c1 == 0 && c2 >= 0) || (c2 == 0 && c1 >= 0) {
                    0
                } else {
                    -1
                }
            }
            Witness::Halfplane { edge, site } => {
                let n = q.normal(*edge);
                let (sx, sy) = &self.traj[*site];
                let r = &(sx - px).scale(&n.x) + &(sy - py).scale(&n.y);
                self.sign(&r)
            }
        }
    }

    /// Whether no finite site outside `skip` lies strictly inside the
    /// witness. A site on its boundary is a degeneracy.
    pub fn empty_of(&self, w: &Witness, skip: &[usize]) -> Result<bool, GeometryError> {
        for x in 0..self.n() {
            if skip.contains(&x) {
                continue;
            }
            match self.inside(w, x) {
                1 => return Ok(false),
                0 => {
                    return Err(GeometryError::Degenerate(format!(
                        "p{x} lies on the boundary of an empty placement"
                    )))
                }
                _ => {}
            }
        }
        Ok(true)
    }

    /// The finite site with the strictly smallest offset along the normal
    /// of edge `i`.
    pub fn extreme_site(&self, i: usize) -> Result<Option<usize>, GeometryError> {
        let n_i = self.polygon.normal(i);
        let mut best: Option<usize> = None;
        for x in 0..self.n() {
            let Some(b) = best else {
                best = Some(x);
                continue;
            };
            let diff = &(&self.traj[x].0 - &self.traj[b].0).scale(&n_i.x) + &(&self.traj[x].1 - &self.traj[b].1).scale(&n_i.y);
            match self.sign(&diff) {
                -1 => best = Some(x),
                0 => return Err(GeometryError::Degenerate(format!("p{x} and p{b} are parallel to edge {i}"))),
                _ => {}
            }
        }
        Ok(best)
    }

    /// Witness for a triangle with known contacts. For bounded triangles the
    /// contact positions are checked; `None` means the stored contacts no
    /// longer describe a valid placement at this instant.
    pub fn witness(&self, t: &Triangle) -> Option<Witness> {
        match t.kind() {
            TriangleKind::Bounded => {
                let s = t.sites.map(|x| x.finite_index().unwrap());
                let w = self.bounded_with(s, t.delta)?;
                let Witness::Bounded { scale, .. } = &w else { unreachable!() };
                if self.sign(scale) <= 0 {
                    return None;
                }
                if (0..3).any(|m| self.contact_sign(&w, s[m], t.delta[m]) <= 0) {
                    return None;
                }
                Some(w)
            }
            TriangleKind::Wedge => {
                let i = t.sites.iter().position(|s| s.is_infinite()).unwrap();
                let a = t.sites[(i + 1) % 3].finite_index().unwrap();
                let b = t.sites[(i + 2) % 3].finite_index().unwrap();
                let Site::Infinite(m) = t.sites[i] else { unreachable!() };
                self.wedge(a, b, m).ok().flatten()
            }
            TriangleKind::Halfplane => {
                let i = t.sites.iter().position(|s| s.is_finite()).unwrap();
                Some(Witness::Halfplane { edge: t.delta[i], site: t.sites[i].finite_index().unwrap() })
            }
        }
    }

    /// Contacts of the empty placement through a clockwise triple at this
    /// instant, or `None` when no placement passes through them in that order.
    pub fn triangle_for(&self, sites: [Site; 3]) -> Result<Option<Triangle>, GeometryError> {
        let k = self.k();
        let inf: Vec<usize> = (0..3).filter(|&i| sites[i].is_infinite()).collect();
        match inf.len() {
            0 => {
                let s = sites.map(|x| x.finite_index().unwrap());
                let mut sorted = s;
                sorted.sort();
                let Some(c) = self.bounded_triangle(sorted) else {
                    return Ok(None);
                };
                if c.degenerate {
                    return Err(GeometryError::Degenerate(format!(
                        "p{}, p{}, p{} have no unique homothet with interior contacts",
                        s[0], s[1], s[2]
                    )));
                }
                let t = Triangle::new(c.sites.map(Site::Finite), c.delta);
                if t == Triangle::new(sites, t.delta_for(sites)) {
                    Ok(Some(t))
                } else {
                    Ok(None)
                }
            }
            1 => {
                let i = inf[0];
                let Site::Infinite(m) = sites[i] else { unreachable!() };
                let a = sites[(i + 1) % 3].finite_index().unwrap();
                let b = sites[(i + 2) % 3].finite_index().unwrap();
                Ok(self
                    .wedge(a, b, m)?
                    .map(|_| Triangle::new([Site::Finite(a), Site::Finite(b), Site::Infinite(m)], [(m + k - 1) % k, m, m])))
            }
            2 => {
                let f = (0..3).find(|&i| sites[i].is_finite()).unwrap();
                let (Site::Infinite(x), Site::Infinite(y)) = (sites[(f + 1) % 3], sites[(f + 2) % 3]) else {
                    unreachable!()
                };
                if y != (x + 1) % k {
                    return Ok(None);
                }
                Ok(Some(Triangle::new([sites[f], sites[(f + 1) % 3], sites[(f + 2) % 3]], [x, x, y])))
            }
            _ => Ok(None),
        }
    }

    /// Labels of the Voronoi edge of `(a, b)` (`a < b`, traced with `a` on
    /// the left) running from the placement with contacts `start` to the
    /// one with contacts `end`.
    pub fn edge_labels(
        &self,
        a: Site,
        b: Site,
        start: (usize, usize),
        end: (usize, usize),
    ) -> Result<Vec<EdgeletLabel>, GeometryError> {
        match (a, b) {
            (Site::Finite(x), Site::Finite(y)) => {
                let bs = self.pair_labels(x, y)?;
                let s = EdgeletLabel::new(start.0, start.1);
                let e = EdgeletLabel::new(end.0, end.1);
                let (Some(i), Some(j)) = (bs.position(s), bs.position(e)) else {
                    return Err(GeometryError::Inconsistent(format!(
                        "{a}-{b}: end labels {s} / {e} not on the bisector"
                    )));
                };
                if i > j {
                    return Err(GeometryError::Inconsistent(format!("{a}-{b}: end labels {s} / {e} out of order")));
                }
                Ok(bs.labels[i..=j].to_vec())
            }
            (Site::Finite(_), Site::Infinite(m)) => {
                let mut v = vec![EdgeletLabel::new(start.0, m)];
                if end.0 != start.0 {
                    v.push(EdgeletLabel::new(end.0, m));
                }
                Ok(v)
            }
            _ => Err(GeometryError::Inconsistent(format!("{a}-{b} has no finite site"))),
        }
    }
}

impl Triangle {
    /// Contacts of this triangle listed in the order of `sites` (which must
    /// be a rotation or permutation of the stored sites).
    fn delta_for(&self, sites: [Site; 3]) -> [usize; 3] {
        sites.map(|s| self.delta_of(s).unwrap_or(usize::MAX))
    }
}
