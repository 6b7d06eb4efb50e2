//! Homothets of the polygon and the algebra of their contacts.
//!
//! A bounded placement is `c + s Q`. A site `p` touches edge `e_i` of it when
//! `n_i . (p - c) = s h_i`. Three such contacts determine `(c, s)` through a
//! 3x3 system whose matrix depends only on the three edge indices, so moving
//! sites give a center and scale that are polynomials of the same degree as
//! the trajectories.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::motion::cross_with;
use crate::polygon::{strictly_between, ConvexPolygon};
use crate::rational::{sign, Point, Rat};
use crate::realroots::RatPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlacementError {
    #[error("direction is parallel to a chord of the polygon")]
    DegenerateDirection,
    #[error("contact system is singular")]
    SingularContactSystem,
    #[error("placement exists but a contact misses its edge segment")]
    OffSegment,
    #[error("placement scale is not positive")]
    NonPositiveScale,
    #[error("certificate polynomial is identically zero")]
    IdenticallyZero,
}

/// A homothet of the polygon, or one of its two unbounded limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Placement {
    Bounded { center: Point, scale: Rat },
    /// Limit with vertex `v_vertex` pinned at `apex` and the scale unbounded.
    Wedge { apex: Point, vertex: usize },
    /// Limit with edge `e_edge` on the line `n_edge . x = offset`.
    Halfplane { edge: usize, offset: Rat },
}

/// An edgelet label: the edge touching the left site and the edge touching
/// the right site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeletLabel {
    pub p_edge: usize,
    pub q_edge: usize,
}

impl EdgeletLabel {
    pub fn new(p_edge: usize, q_edge: usize) -> Self {
        EdgeletLabel { p_edge, q_edge }
    }

    pub fn reversed(self) -> Self {
        EdgeletLabel { p_edge: self.q_edge, q_edge: self.p_edge }
    }
}

impl std::fmt::Display for EdgeletLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p_edge, self.q_edge)
    }
}

/// Which of the two sites sits at a polygon vertex at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CornerSide {
    P,
    Q,
}

/// A breakpoint between two consecutive edgelets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Corner {
    pub side: CornerSide,
    pub vertex: usize,
}

/// The edgelet sequence of the bisector of an ordered pair `(p, q)`, traced
/// with `p` on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisectorStructure {
    pub labels: Vec<EdgeletLabel>,
    /// `corners[i]` separates `labels[i]` and `labels[i + 1]`.
    pub corners: Vec<Corner>,
    /// Vertex with the largest offset; the first ray runs to infinity in
    /// direction `-v_first`.
    pub first_vertex: usize,
    /// Vertex with the smallest offset; the last ray runs to infinity in
    /// direction `-v_last`.
    pub last_vertex: usize,
    /// Edges touched by `p`, in order (counterclockwise around the polygon).
    pub p_chain: Vec<usize>,
    /// Edges touched by `q`, in order (clockwise around the polygon).
    pub q_chain: Vec<usize>,
}

impl BisectorStructure {
    pub fn position(&self, l: EdgeletLabel) -> Option<usize> {
        self.labels.iter().position(|&x| x == l)
    }

    pub fn contains(&self, l: EdgeletLabel) -> bool {
        self.position(l).is_some()
    }
}

/// Edgelet sequence for the pair `(p, q)` with `q - p` parallel to
/// `direction`.
pub fn bisector_labels(q: &ConvexPolygon, direction: &Point) -> Result<BisectorStructure, PlacementError> {
    bisector_labels_with(q, |w| sign(&direction.cross(w)))
}

/// Edgelet sequence driven by an oracle for `sign(cross(q - p, w))` over
/// chord vectors `w`. The oracle must never return zero.
pub fn bisector_labels_with(
    q: &ConvexPolygon,
    cross_sign: impl Fn(&Point) -> i8,
) -> Result<BisectorStructure, PlacementError> {
    let k = q.k();
    // offset order: a before b when cross(u, v_a - v_b) > 0
    let cmp = |a: usize, b: usize| -> Result<Ordering, PlacementError> {
        match cross_sign(&q.vertex(a).sub(q.vertex(b))) {
            1 => Ok(Ordering::Less),
            -1 => Ok(Ordering::Greater),
            _ => Err(PlacementError::DegenerateDirection),
        }
    };
    let mut order: Vec<usize> = (0..k).collect();
    let mut err = None;
    order.sort_by(|&a, &b| {
        if a == b {
            return Ordering::Equal;
        }
        cmp(a, b).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    for w in order.windows(2) {
        cmp(w[0], w[1])?;
    }
    let first = order[0];
    let last = order[k - 1];
    let mut on_p_chain = vec![false; k];
    let mut p_chain = Vec::new();
    let mut v = first;
    while v != last {
        let e = q.prev(v);
        p_chain.push(e);
        v = e;
        on_p_chain[v] = true;
    }
    let mut q_chain = Vec::new();
    let mut v = first;
    while v != last {
        q_chain.push(v);
        v = q.next(v);
    }
    let mut label = EdgeletLabel::new(q.prev(first), first);
    let mut labels = vec![label];
    let mut corners = Vec::with_capacity(k - 2);
    for &v in &order[1..k - 1] {
        if on_p_chain[v] {
            corners.push(Corner { side: CornerSide::P, vertex: v });
            label.p_edge = q.prev(v);
        } else {
            corners.push(Corner { side: CornerSide::Q, vertex: v });
            label.q_edge = v;
        }
        labels.push(label);
    }
    Ok(BisectorStructure { labels, corners, first_vertex: first, last_vertex: last, p_chain, q_chain })
}

/// Result of a contact solve: the placement plus where each contact falls on
/// its edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactSolution {
    pub center: Point,
    pub scale: Rat,
    pub positions: Vec<ContactPosition>,
}

/// Location of a contact point along the closed edge it is assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactPosition {
    Interior,
    Endpoint,
    Outside,
}

impl ContactSolution {
    pub fn all_interior(&self) -> bool {
        self.positions.iter().all(|&p| p == ContactPosition::Interior)
    }

    pub fn placement(&self) -> Placement {
        Placement::Bounded { center: self.center.clone(), scale: self.scale.clone() }
    }
}

/// Where `x`, assumed on the supporting line of edge `e_i` of `c + s Q`,
/// falls relative to the edge segment.
pub fn contact_position(q: &ConvexPolygon, center: &Point, scale: &Rat, x: &Point, i: usize) -> ContactPosition {
    let d = q.edge_dir(i);
    let rel = x.sub(center);
    let a = d.dot(&rel.sub(&q.vertex(i).scale(scale)));
    let b = d.dot(&rel.sub(&q.vertex(i + 1).scale(scale)));
    match (sign(&a), sign(&b)) {
        (1, -1) => ContactPosition::Interior,
        (0, _) | (_, 0) => ContactPosition::Endpoint,
        _ => ContactPosition::Outside,
    }
}

/// The inverse of the constant contact matrix for three edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactSystem {
    pub edges: [usize; 3],
    inv: [[Rat; 3]; 3],
}

impl ContactSystem {
    pub fn new(q: &ConvexPolygon, edges: [usize; 3]) -> Result<Self, PlacementError> {
        if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
            return Err(PlacementError::SingularContactSystem);
        }
        let m: Vec<[Rat; 3]> = edges
            .iter()
            .map(|&e| {
                let n = q.normal(e);
                [n.x.clone(), n.y.clone(), q.support(e).clone()]
            })
            .collect();
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
        let det = &m[0][0] * cof(1, 2, 1, 2) - &m[0][1] * cof(1, 2, 0, 2) + &m[0][2] * cof(1, 2, 0, 1);
        if det.is_zero() {
            return Err(PlacementError::SingularContactSystem);
        }
        // adjugate: inv[i][j] = C[j][i] / det
        let c = [
            [cof(1, 2, 1, 2), -cof(1, 2, 0, 2), cof(1, 2, 0, 1)],
            [-cof(0, 2, 1, 2), cof(0, 2, 0, 2), -cof(0, 2, 0, 1)],
            [cof(0, 1, 1, 2), -cof(0, 1, 0, 2), cof(0, 1, 0, 1)],
        ];
        let inv = std::array::from_fn(|i| std::array::from_fn(|j| &c[j][i] / &det));
        Ok(ContactSystem { edges, inv })
    }

    /// Center and scale for static contact points.
    pub fn solve(&self, q: &ConvexPolygon, pts: [&Point; 3]) -> (Point, Rat) {
        let rhs: Vec<Rat> = (0..3).map(|i| q.normal(self.edges[i]).dot(pts[i])).collect();
        let row = |r: usize| &self.inv[r][0] * &rhs[0] + &self.inv[r][1] * &rhs[1] + &self.inv[r][2] * &rhs[2];
        (Point::new(row(0), row(1)), row(2))
    }

    /// Center and scale as polynomials in time for moving contact points.
    pub fn solve_poly(
        &self,
        q: &ConvexPolygon,
        pts: [(&RatPolynomial, &RatPolynomial); 3],
    ) -> (RatPolynomial, RatPolynomial, RatPolynomial) {
        let rhs: Vec<RatPolynomial> = (0..3)
            .map(|i| {
                let n = q.normal(self.edges[i]);
                &pts[i].0.scale(&n.x) + &pts[i].1.scale(&n.y)
            })
            .collect();
        let row = |r: usize| {
            let a = rhs[0].scale(&self.inv[r][0]);
            let b = rhs[1].scale(&self.inv[r][1]);
            let c = rhs[2].scale(&self.inv[r][2]);
            &(&a + &b) + &c
        };
        (row(0), row(1), row(2))
    }
}

/// The homothet with each of three points on the supporting line of its
/// assigned edge.
pub fn solve_three_contact(q: &ConvexPolygon, contacts: [(&Point, usize); 3]) -> Result<ContactSolution, PlacementError> {
    let sys = ContactSystem::new(q, [contacts[0].1, contacts[1].1, contacts[2].1])?;
    let (center, scale) = sys.solve(q, [contacts[0].0, contacts[1].0, contacts[2].0]);
    let positions = contacts
        .iter()
        .map(|(x, e)| contact_position(q, &center, &scale, x, *e))
        .collect();
    Ok(ContactSolution { center, scale, positions })
}

/// A wedge limit placement and whether its two contacts lie on the open arms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeSolution {
    pub apex: Point,
    pub vertex: usize,
    /// Both points strictly on their arms (away from the apex).
    pub valid: bool,
}

/// Apex of the wedge at vertex `v_i` with `a` on the arm along `e_{i-1}` and
/// `b` on the arm along `e_i`.
pub fn solve_wedge(q: &ConvexPolygon, a: &Point, b: &Point, i: usize) -> WedgeSolution {
    let d1 = q.edge_dir(q.prev(i));
    let d2 = q.edge_dir(i);
    // apex = a + s d1 with cross(apex - b, d2) = 0
    let den = d1.cross(&d2);
    let s = b.sub(a).cross(&d2) / &den;
    let apex = a.add(&d1.scale(&s));
    // a = apex - s d1 lies on the arm in direction -d1 iff s > 0
    let s2 = b.sub(&apex).dot(&d2);
    let valid = s.is_positive() && s2.is_positive();
    WedgeSolution { apex, vertex: i % q.k(), valid }
}

/// Whether `x` lies strictly inside the wedge at vertex `v_i` with apex
/// `apex`, and whether it lies on its boundary.
pub fn wedge_side(q: &ConvexPolygon, apex: &Point, i: usize, x: &Point) -> i8 {
    let a1 = q.edge_dir(q.prev(i)).neg();
    let a2 = q.edge_dir(i);
    let w = x.sub(apex);
    if w.is_zero() {
        return 0;
    }
    if strictly_between(&a1, &w, &a2) {
        return 1;
    }
    let on1 = a1.cross(&w).is_zero() && a1.dot(&w).is_positive();
    let on2 = a2.cross(&w).is_zero() && a2.dot(&w).is_positive();
    if on1 || on2 {
        0
    } else {
        -1
    }
}

/// The corner placement with vertex `v_i` at `p` and `x` on the supporting
/// line of `e_j`.
pub fn corner_placement_on_ray(
    q: &ConvexPolygon,
    p: &Point,
    i: usize,
    x: &Point,
    j: usize,
) -> Result<ContactSolution, PlacementError> {
    let nj = q.normal(j);
    let den = q.support(j) - nj.dot(q.vertex(i));
    if den.is_zero() {
        return Err(PlacementError::SingularContactSystem);
    }
    let scale = nj.dot(&x.sub(p)) / den;
    if !scale.is_positive() {
        return Err(PlacementError::NonPositiveScale);
    }
    let center = p.sub(&q.vertex(i).scale(&scale));
    let pos = contact_position(q, &center, &scale, x, j);
    Ok(ContactSolution { center, scale, positions: vec![ContactPosition::Endpoint, pos] })
}

/// Largest homothet centered at `u` with no site in its interior.
pub fn largest_empty(q: &ConvexPolygon, u: &Point, sites: &[Point]) -> Placement {
    let scale = sites
        .iter()
        .map(|s| q.distance(u, s))
        .min()
        .expect("at least one site");
    Placement::Bounded { center: u.clone(), scale }
}

/// The certificate families whose failure times drive the simulation.
pub mod certificates {
    use super::*;

    /// `cross(q(t) - p(t), w)` for a chord vector `w`.
    pub fn bisector(dx: &RatPolynomial, dy: &RatPolynomial, w: &Point) -> Result<RatPolynomial, PlacementError> {
        nonzero(cross_with(dx, dy, w))
    }

    /// The two along-edge numerators for a site on edge `e_a` of the moving
    /// homothet `(cx, cy, s)`; the site leaves the edge when either vanishes.
    pub fn vertex(
        q: &ConvexPolygon,
        site: (&RatPolynomial, &RatPolynomial),
        placement: (&RatPolynomial, &RatPolynomial, &RatPolynomial),
        a: usize,
    ) -> [RatPolynomial; 2] {
        let d = q.edge_dir(a);
        let along = |v: &Point| {
            let rx = &(site.0 - placement.0) - &placement.2.scale(&v.x);
            let ry = &(site.1 - placement.1) - &placement.2.scale(&v.y);
            &rx.scale(&d.x) + &ry.scale(&d.y)
        };
        [along(q.vertex(a)), along(q.vertex(a + 1))]
    }

    /// Residual `n_e . (w(t) - c(t)) - s(t) h_e` of a fourth site against
    /// edge `e_e`; zero when the site reaches that edge's supporting line.
    pub fn edge(
        q: &ConvexPolygon,
        site: (&RatPolynomial, &RatPolynomial),
        placement: (&RatPolynomial, &RatPolynomial, &RatPolynomial),
        e: usize,
    ) -> Result<RatPolynomial, PlacementError> {
        let n = q.normal(e);
        let r = &(&(site.0 - placement.0).scale(&n.x) + &(site.1 - placement.1).scale(&n.y))
            - &placement.2.scale(q.support(e));
        nonzero(r)
    }

    fn nonzero(p: RatPolynomial) -> Result<RatPolynomial, PlacementError> {
        if p.is_zero() {
            Err(PlacementError::IdenticallyZero)
        } else {
            Ok(p)
        }
    }
}

/// The bisector of two static points as a polyline with two terminal rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisectorPolyline {
    /// Direction the first ray comes in from (the ray is `points[0] + s dir`).
    pub start_dir: Point,
    pub points: Vec<Point>,
    pub end_dir: Point,
}

/// Breakpoint coordinates of the bisector of static `p`, `x` (with `p` on
/// the left), one per corner of the label sequence.
pub fn bisector_polyline(q: &ConvexPolygon, p: &Point, x: &Point) -> Result<BisectorPolyline, PlacementError> {
    let bs = bisector_labels(q, &x.sub(p))?;
    let mut points = Vec::with_capacity(bs.corners.len());
    for (i, c) in bs.corners.iter().enumerate() {
        let l = bs.labels[i];
        let sol = match c.side {
            CornerSide::P => corner_placement_on_ray(q, p, c.vertex, x, l.q_edge)?,
            CornerSide::Q => corner_placement_on_ray(q, x, c.vertex, p, l.p_edge)?,
        };
        points.push(sol.center);
    }
    Ok(BisectorPolyline {
        start_dir: q.vertex(bs.first_vertex).neg(),
        points,
        end_dir: q.vertex(bs.last_vertex).neg(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{regular_polygon, unit_square};
    use crate::rational::{frac, int};

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn square_has_three_labels() {
        let b = bisector_labels(&unit_square(), &pt(2, 1)).unwrap();
        assert_eq!(b.labels.len(), 3);
        assert_eq!(b.labels[0], EdgeletLabel::new(2, 3));
        assert_eq!(b.labels[2], EdgeletLabel::new(1, 0));
    }

    #[test]
    fn octagon_has_seven_labels() {
        let q = regular_polygon(8);
        let b = bisector_labels(&q, &Point::new(frac(7, 10), frac(3, 10))).unwrap();
        assert_eq!(b.labels.len(), 7);
    }

    #[test]
    fn parallel_direction_is_degenerate() {
        assert_eq!(
            bisector_labels(&unit_square(), &pt(1, 0)),
            Err(PlacementError::DegenerateDirection)
        );
        assert_eq!(
            bisector_labels(&unit_square(), &pt(1, 1)),
            Err(PlacementError::DegenerateDirection)
        );
    }

    #[test]
    fn three_contact_examples() {
        let q = unit_square();
        // left = e2, right = e0, bottom = e1
        let s = solve_three_contact(&q, [(&pt(0, 0), 2), (&pt(4, 1), 0), (&pt(1, -2), 1)]).unwrap();
        assert_eq!(s.center, pt(2, 0));
        assert_eq!(s.scale, int(2));
        assert!(s.all_interior());
        let s = solve_three_contact(&q, [(&pt(-1, 0), 2), (&pt(1, 0), 0), (&pt(0, -1), 1)]).unwrap();
        assert_eq!(s.center, pt(0, 0));
        assert_eq!(s.scale, int(1));
        assert_eq!(
            solve_three_contact(&q, [(&pt(-1, 0), 2), (&pt(1, 0), 2), (&pt(0, -1), 1)]),
            Err(PlacementError::SingularContactSystem)
        );
    }

    #[test]
    fn wedge_examples() {
        let q = unit_square();
        // at v2 = (-1,-1): e1 is the bottom edge and e2 the left edge
        let w = solve_wedge(&q, &pt(3, 0), &pt(0, 5), 2);
        assert_eq!(w.apex, pt(0, 0));
        assert!(w.valid);
        let w2 = solve_wedge(&q, &pt(0, 5), &pt(3, 0), 2);
        assert!(!w2.valid);
        assert_eq!(wedge_side(&q, &w.apex, 2, &pt(1, 1)), 1);
        assert_eq!(wedge_side(&q, &w.apex, 2, &pt(-1, 1)), -1);
        assert_eq!(wedge_side(&q, &w.apex, 2, &pt(0, 1)), 0);
    }

    #[test]
    fn corner_examples() {
        let q = unit_square();
        let s = corner_placement_on_ray(&q, &pt(0, 0), 2, &pt(5, 0), 0).unwrap();
        assert_eq!(s.scale, frac(5, 2));
        assert_eq!(s.center, Point::new(frac(5, 2), frac(5, 2)));
        assert_eq!(
            corner_placement_on_ray(&q, &pt(0, 0), 2, &pt(-5, 0), 0),
            Err(PlacementError::NonPositiveScale)
        );
        assert_eq!(
            corner_placement_on_ray(&q, &pt(0, 0), 2, &pt(5, 0), 1),
            Err(PlacementError::SingularContactSystem)
        );
    }

    #[test]
    fn certificate_examples() {
        let t = RatPolynomial::t();
        let z = RatPolynomial::zero();
        let one = RatPolynomial::constant(int(1));
        let b = certificates::bisector(&one, &t, &pt(1, 0)).unwrap();
        assert_eq!(b, RatPolynomial::from_ints(&[0, -1]));

        let q = unit_square();
        let sys = ContactSystem::new(&q, [2, 0, 1]).unwrap();
        let c = |v: i64| RatPolynomial::constant(int(v));
        let (px, py) = (c(0), c(0));
        let (qx, qy) = (c(4), c(1));
        let (rx, ry) = (c(1), c(-2));
        let (cx, cy, s) = sys.solve_poly(&q, [(&px, &py), (&qx, &qy), (&rx, &ry)]);
        assert_eq!((cx.clone(), cy.clone(), s.clone()), (c(2), z.clone(), c(2)));
        let sx = c(2);
        let r = certificates::edge(&q, (&sx, &t), (&cx, &cy, &s), 3).unwrap();
        assert_eq!(r, RatPolynomial::from_ints(&[-2, 1]));
        let v = certificates::vertex(&q, (&px, &py), (&cx, &cy, &s), 2);
        assert!(v.iter().all(|p| p.is_constant() && !p.is_zero()));
    }

    #[test]
    fn largest_empty_examples() {
        let q = unit_square();
        let e = |sites: &[Point]| match largest_empty(&q, &pt(0, 0), sites) {
            Placement::Bounded { scale, .. } => scale,
            _ => unreachable!(),
        };
        assert_eq!(e(&[pt(3, 1)]), int(3));
        assert_eq!(e(&[pt(0, 0)]), int(0));
        assert_eq!(e(&[pt(3, 1), pt(1, 2)]), int(2));
    }

    #[test]
    fn square_polyline() {
        let q = unit_square();
        let pl = bisector_polyline(&q, &pt(0, 0), &pt(2, 1)).unwrap();
        assert_eq!(pl.points.len(), 2);
        for b in &pl.points {
            assert_eq!(q.distance(b, &pt(0, 0)), q.distance(b, &pt(2, 1)));
        }
    }
}
