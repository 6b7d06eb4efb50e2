//! Brute-force Delaunay triangulation and Voronoi diagram at a fixed time.
//!
//! Every triangle is found by exhaustive search over site triples and tested
//! for emptiness against every other site. The result seeds the kinetic
//! structure and serves as the reference it is checked against.

use crate::frame::{Frame, GeometryError, Triangle, TriangleKind, Witness};
use crate::motion::{cross_with, Scenario, Site};
use crate::placements::EdgeletLabel;
use crate::polygon::ConvexPolygon;
use crate::rational::{Point, Rat};
use crate::realroots::RatPolynomial;
use crate::topology::Topology;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("time outside the scenario span")]
    OutOfSpan,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<GeometryError> for OracleError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Degenerate(m) => OracleError::DegenerateConfiguration(m),
            GeometryError::Inconsistent(m) => OracleError::Internal(m),
        }
    }
}

/// Expected triangle count for `n` finite sites and a `k`-gon.
pub fn expected_triangle_count(n: usize, k: usize) -> usize {
    2 * (n + k) - 2 - k
}

/// Delaunay triangles with their witness placements.
#[derive(Debug, Clone)]
pub struct StaticTriangulation {
    pub triangles: Vec<(Triangle, Witness)>,
}

impl StaticTriangulation {
    pub fn count(&self, kind: TriangleKind) -> usize {
        self.triangles.iter().filter(|(t, _)| t.kind() == kind).count()
    }

    /// Unordered site pairs of the triangulation, smaller site first.
    pub fn edges(&self) -> Vec<(Site, Site)> {
        let mut v: Vec<(Site, Site)> = self
            .triangles
            .iter()
            .flat_map(|(t, _)| (0..3).map(move |i| crate::frame::pair_key(t.sites[i], t.sites[(i + 1) % 3])))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Triangulation and edgelet-resolved diagram at one instant.
#[derive(Debug, Clone)]
pub struct StaticDiagram {
    pub time: Rat,
    pub triangulation: StaticTriangulation,
    pub topology: Topology,
}

/// Coordinates of every site in the cone of the wedge at vertex `m`:
/// `x = apex - mu d1 + nu d2` for the edges `d1`, `d2` meeting there, up to
/// a shared apex.
fn wedge_coordinates(f: &Frame<'_>, m: usize) -> (Vec<RatPolynomial>, Vec<RatPolynomial>) {
    let q = f.polygon;
    let d1 = q.edge_dir(q.prev(m));
    let d2 = q.edge_dir(m);
    let inv = -(Rat::from_integer(1.into()) / d1.cross(&d2));
    let mu = f.traj.iter().map(|(x, y)| cross_with(x, y, &d2).scale(&inv)).collect();
    let nu = f.traj.iter().map(|(x, y)| cross_with(x, y, &d1).scale(&inv)).collect();
    (mu, nu)
}

/// Exhaustive triangulation at the frame's instant.
pub fn triangulate(f: &Frame<'_>) -> Result<Vec<(Triangle, Witness)>, GeometryError> {
    let (n, k) = (f.n(), f.k());
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let Some(cand) = f.bounded_triangle([a, b, c]) else { continue };
                if f.empty_of(&cand.witness, &[a, b, c])? {
                    if cand.degenerate {
                        return Err(GeometryError::Degenerate(format!(
                            "p{a}, p{b}, p{c}: empty placement touches a site at a vertex"
                        )));
                    }
                    out.push((Triangle::new(cand.sites.map(Site::Finite), cand.delta), cand.witness));
                }
            }
        }
    }
    for m in 0..k {
        let (mu, nu) = wedge_coordinates(f, m);
        // sign(c[y] - c[x]) for every ordered pair
        let order = |c: &[RatPolynomial]| -> Vec<Vec<i8>> {
            (0..n).map(|x| (0..n).map(|y| if x == y { 0 } else { f.sign(&(&c[y] - &c[x])) }).collect()).collect()
        };
        let (om, on) = (order(&mu), order(&nu));
        for a in 0..n {
            for b in 0..n {
                if a == b || om[b][a] < 0 || on[a][b] < 0 {
                    continue;
                }
                if (0..n).any(|x| x != a && x != b && om[b][x] > 0 && on[a][x] > 0) {
                    continue;
                }
                let Some(w) = f.wedge(a, b, m)? else { continue };
                if f.empty_of(&w, &[a, b])? {
                    out.push((
                        Triangle::new([Site::Finite(a), Site::Finite(b), Site::Infinite(m)], [(m + k - 1) % k, m, m]),
                        w,
                    ));
                }
            }
        }
    }
    for i in 0..k {
        let best = f.extreme_site(i)?;
        if let Some(p) = best {
            let j = (i + 1) % k;
            out.push((
                Triangle::new([Site::Finite(p), Site::Infinite(i), Site::Infinite(j)], [i, i, j]),
                Witness::Halfplane { edge: i, site: p },
            ));
        }
    }
    let expected = expected_triangle_count(n, k);
    if out.len() != expected {
        return Err(GeometryError::Degenerate(format!("found {} triangles, expected {expected}", out.len())));
    }
    Ok(out)
}

/// The Delaunay triangle through an unordered site triple at the frame's
/// instant, if its witness placement is empty.
pub fn empty_triangle(f: &Frame<'_>, triple: [Site; 3]) -> Result<Option<(Triangle, Witness)>, GeometryError> {
    let k = f.k();
    let mut fin: Vec<usize> = triple.iter().filter_map(|s| s.finite_index()).collect();
    let mut inf: Vec<usize> = triple
        .iter()
        .filter_map(|s| match s {
            Site::Infinite(m) => Some(*m),
            _ => None,
        })
        .collect();
    fin.sort();
    inf.sort();
    match (fin.len(), inf.len()) {
        (3, 0) => {
            let Some(cand) = f.bounded_triangle([fin[0], fin[1], fin[2]]) else { return Ok(None) };
            if !f.empty_of(&cand.witness, &fin)? {
                return Ok(None);
            }
            if cand.degenerate {
                return Err(GeometryError::Degenerate(format!(
                    "p{}, p{}, p{}: empty placement touches a site at a vertex",
                    fin[0], fin[1], fin[2]
                )));
            }
            Ok(Some((Triangle::new(cand.sites.map(Site::Finite), cand.delta), cand.witness)))
        }
        (2, 1) => {
            let m = inf[0];
            for (a, b) in [(fin[0], fin[1]), (fin[1], fin[0])] {
                if let Some(w) = f.wedge(a, b, m)? {
                    if f.empty_of(&w, &fin)? {
                        let t = Triangle::new([Site::Finite(a), Site::Finite(b), Site::Infinite(m)], [(m + k - 1) % k, m, m]);
                        return Ok(Some((t, w)));
                    }
                }
            }
            Ok(None)
        }
        (1, 2) => {
            let (i, j) = if (inf[0] + 1) % k == inf[1] {
                (inf[0], inf[1])
            } else if (inf[1] + 1) % k == inf[0] {
                (inf[1], inf[0])
            } else {
                return Ok(None);
            };
            if f.extreme_site(i)? != Some(fin[0]) {
                return Ok(None);
            }
            let t = Triangle::new([Site::Finite(fin[0]), Site::Infinite(i), Site::Infinite(j)], [i, i, j]);
            Ok(Some((t, Witness::Halfplane { edge: i, site: fin[0] })))
        }
        _ => Ok(None),
    }
}

/// Triangulation and topology at the frame's instant.
pub fn build_topology(f: &Frame<'_>) -> Result<(StaticTriangulation, Topology), GeometryError> {
    let triangles = triangulate(f)?;
    let topology = Topology::from_triangles(f, triangles.iter().map(|(t, _)| *t))?;
    Ok((StaticTriangulation { triangles }, topology))
}

pub fn build_triangulation(s: &Scenario, t: &Rat) -> Result<StaticTriangulation, OracleError> {
    if !s.contains_time(t) {
        return Err(OracleError::OutOfSpan);
    }
    let f = Frame::at(s, t);
    Ok(StaticTriangulation { triangles: triangulate(&f)? })
}

pub fn build_diagram(s: &Scenario, t: &Rat) -> Result<StaticDiagram, OracleError> {
    if !s.contains_time(t) {
        return Err(OracleError::OutOfSpan);
    }
    let f = Frame::at(s, t);
    let (triangulation, topology) = build_topology(&f)?;
    Ok(StaticDiagram { time: t.clone(), triangulation, topology })
}

/// Topology of static points.
pub fn topology_of_points(q: &ConvexPolygon, pts: &[Point]) -> Result<Topology, OracleError> {
    let f = Frame::points(q, pts);
    Ok(build_topology(&f)?.1)
}

/// Voronoi edges of a static diagram seen from one finite site: neighbor
/// and labels oriented with that site on the left.
pub fn cell_edges(d: &StaticDiagram, site: usize) -> Vec<(Site, Vec<EdgeletLabel>)> {
    let me = Site::Finite(site);
    d.topology
        .edges()
        .filter_map(|(&(a, b), l)| {
            if a == me {
                Some((b, l.clone()))
            } else if b == me {
                Some((a, l.iter().rev().map(|x| x.reversed()).collect()))
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{random_polygon, unit_square};
    use crate::rational::{frac, int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    #[test]
    fn three_points_on_square() {
        let q = unit_square();
        let f = Frame::points(&q, &pts(&[(0, 0), (4, 1), (1, -4)]));
        let tris = triangulate(&f).unwrap();
        assert_eq!(tris.len(), 8);
        let bounded = tris.iter().filter(|(t, _)| t.kind() == TriangleKind::Bounded).count();
        assert_eq!(bounded, 1);
    }

    #[test]
    fn single_site_has_halfplanes_only() {
        let q = unit_square();
        let f = Frame::points(&q, &pts(&[(3, 7)]));
        let (st, topo) = build_topology(&f).unwrap();
        assert_eq!(st.count(TriangleKind::Halfplane), 4);
        assert_eq!(st.triangles.len(), 4);
        assert_eq!(topo.edge_count(), 4);
        for (_, l) in topo.edges() {
            assert_eq!(l.len(), 2);
        }
    }

    #[test]
    fn two_sites_share_full_bisector() {
        let q = unit_square();
        let f = Frame::points(&q, &pts(&[(0, 0), (2, 1)]));
        let (_, topo) = build_topology(&f).unwrap();
        let l = topo.labels(Site::Finite(0), Site::Finite(1)).unwrap();
        assert_eq!(l.len(), 3);
    }

    #[test]
    fn three_sites_meet_at_one_vertex() {
        let q = unit_square();
        let p = pts(&[(0, 0), (4, 1), (1, -4)]);
        let f = Frame::points(&q, &p);
        let (st, _) = build_topology(&f).unwrap();
        let (t, w) = st.triangles.iter().find(|(t, _)| t.kind() == TriangleKind::Bounded).unwrap();
        let Witness::Bounded { cx, cy, scale, .. } = w else { panic!() };
        let contacts: Vec<(&Point, usize)> = (0..3).map(|i| (&p[t.sites[i].finite_index().unwrap()], t.delta[i])).collect();
        let sol = crate::placements::solve_three_contact(&q, [contacts[0], contacts[1], contacts[2]]).unwrap();
        assert_eq!(sol.center, Point::new(cx.eval(&int(0)), cy.eval(&int(0))));
        assert_eq!(sol.scale, scale.eval(&int(0)));
        for x in &p {
            assert_eq!(q.distance(&sol.center, x), sol.scale);
        }
    }

    #[test]
    fn witnesses_are_empty_by_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let q = random_polygon(&mut rng, 5);
            let s = crate::motion::random_scenario_with(&mut rng, q, 7, 1);
            let t = frac(1, 3);
            let Ok(st) = build_triangulation(&s, &t) else { continue };
            let p = s.positions(&t);
            for (tri, w) in &st.triangles {
                if let Witness::Bounded { cx, cy, scale, .. } = w {
                    let c = Point::new(cx.eval(&t), cy.eval(&t));
                    let r = scale.eval(&t);
                    for (i, x) in p.iter().enumerate() {
                        let d = s.polygon.distance(&c, x);
                        if tri.contains(Site::Finite(i)) {
                            assert_eq!(d, r);
                        } else {
                            assert!(d > r);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn out_of_span_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = crate::motion::random_scenario(&mut rng, 3, 4, 1);
        assert_eq!(build_diagram(&s, &int(5)).unwrap_err(), OracleError::OutOfSpan);
    }
}
