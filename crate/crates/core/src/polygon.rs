//! The convex polygon that induces the distance function.
//!
//! Vertices are stored clockwise, `v_0 .. v_{k-1}`, and edge `e_i` runs from
//! `v_i` to `v_{i+1}` (indices mod `k`). Each edge carries a primitive integer
//! outward normal `n_i` and support value `h_i = n_i . v_i`, which is positive
//! because the origin lies strictly inside.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::rational::{Point, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("origin is not strictly inside the polygon (edge {0})")]
    OriginNotInterior(usize),
    #[error("duplicate orientation: {0} is parallel to {1}")]
    DuplicateOrientation(String, String),
}

/// A validated convex polygon, immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    normals: Vec<Point>,
    supports: Vec<Rat>,
}

impl fmt::Debug for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vertices.iter()).finish()
    }
}

/// Reduces a nonzero rational vector to the primitive integer vector with the
/// same direction.
pub fn primitive(v: &Point) -> Point {
    let l = v.x.denom().lcm(v.y.denom());
    let x = (&v.x * Rat::from_integer(l.clone())).to_integer();
    let y = (&v.y * Rat::from_integer(l)).to_integer();
    let g = x.gcd(&y);
    if g.is_zero() {
        return Point::origin();
    }
    Point::new(Rat::from_integer(x / &g), Rat::from_integer(y / &g))
}

fn twice_signed_area(vs: &[Point]) -> Rat {
    let k = vs.len();
    let mut a = Rat::zero();
    for i in 0..k {
        a += vs[i].cross(&vs[(i + 1) % k]);
    }
    a
}

/// Validates and normalizes a vertex list into a [`ConvexPolygon`].
///
/// Counterclockwise input is reversed (keeping the first vertex first).
/// Centrally symmetric polygons are exempt from the orientation-distinctness
/// check, since their opposite edges are parallel by construction.
pub fn validate_polygon(vertices: &[Point]) -> Result<ConvexPolygon, PolygonError> {
    let k = vertices.len();
    if k < 3 {
        return Err(PolygonError::TooFewVertices(k));
    }
    let mut vs = vertices.to_vec();
    if twice_signed_area(&vs).is_positive() {
        vs[1..].reverse();
    }
    for i in 0..k {
        let a = &vs[i];
        let b = &vs[(i + 1) % k];
        let e = b.sub(a);
        for (j, w) in vs.iter().enumerate() {
            if j == i || j == (i + 1) % k {
                continue;
            }
            if !e.cross(&w.sub(a)).is_negative() {
                return Err(PolygonError::NotConvex((i + 1) % k));
            }
        }
    }
    let mut normals = Vec::with_capacity(k);
    let mut supports = Vec::with_capacity(k);
    for i in 0..k {
        let e = vs[(i + 1) % k].sub(&vs[i]);
        let n = primitive(&e.perp());
        let h = n.dot(&vs[i]);
        if !h.is_positive() {
            return Err(PolygonError::OriginNotInterior(i));
        }
        normals.push(n);
        supports.push(h);
    }
    let q = ConvexPolygon { vertices: vs, normals, supports };
    if !q.is_centrally_symmetric() {
        q.check_orientations()?;
    }
    Ok(q)
}

impl ConvexPolygon {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.k()]
    }

    /// Outward normal of edge `e_i`.
    pub fn normal(&self, i: usize) -> &Point {
        &self.normals[i % self.k()]
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    /// Support value `h_i = n_i . v_i`.
    pub fn support(&self, i: usize) -> &Rat {
        &self.supports[i % self.k()]
    }

    pub fn supports(&self) -> &[Rat] {
        &self.supports
    }

    /// Direction vector `v_{i+1} - v_i` of edge `e_i`.
    pub fn edge_dir(&self, i: usize) -> Point {
        self.vertex(i + 1).sub(self.vertex(i))
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.k()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.k() - 1) % self.k()
    }

    /// Distance `d(x, y)`: the smallest scale `s` with `y` in `x + s Q`.
    pub fn distance(&self, x: &Point, y: &Point) -> Rat {
        let d = y.sub(x);
        let mut best = Rat::zero();
        for (n, h) in self.normals.iter().zip(&self.supports) {
            let v = n.dot(&d) / h;
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Whether `-v` is a vertex for every vertex `v`.
    pub fn is_centrally_symmetric(&self) -> bool {
        let k = self.k();
        if k % 2 == 1 {
            return false;
        }
        (0..k).all(|i| self.vertices[i].neg() == self.vertices[(i + k / 2) % k])
    }

    fn check_orientations(&self) -> Result<(), PolygonError> {
        let k = self.k();
        let mut dirs: Vec<(String, Point)> = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                dirs.push((format!("chord v{i}v{j}"), self.vertices[j].sub(&self.vertices[i])));
            }
        }
        for i in 0..k {
            dirs.push((format!("ray o v{i}"), self.vertices[i].clone()));
        }
        for a in 0..dirs.len() {
            for b in a + 1..dirs.len() {
                if dirs[a].1.cross(&dirs[b].1).is_zero() {
                    return Err(PolygonError::DuplicateOrientation(dirs[a].0.clone(), dirs[b].0.clone()));
                }
            }
        }
        Ok(())
    }

    /// Directed orientations of all chords (edges and diagonals), both senses,
    /// deduplicated and sorted counterclockwise from the positive x axis.
    pub fn chord_directions(&self) -> Vec<ChordDirection> {
        let k = self.k();
        let mut out: Vec<ChordDirection> = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let d = primitive(&self.vertices[j].sub(&self.vertices[i]));
                match out.iter_mut().find(|c| c.dir == d) {
                    Some(c) => c.chords.push((i, j)),
                    None => out.push(ChordDirection { dir: d, chords: vec![(i, j)] }),
                }
            }
        }
        out.sort_by(|a, b| angle_cmp(&a.dir, &b.dir));
        for c in &mut out {
            c.chords.sort();
        }
        out
    }
}

/// One direction in the set of chord orientations, with the chords `(i, j)`
/// (directed `v_i -> v_j`) that realize it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordDirection {
    pub dir: Point,
    pub chords: Vec<(usize, usize)>,
}

/// An open arc of directions between two consecutive chord directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionInterval {
    pub from: ChordDirection,
    pub to: ChordDirection,
}

impl DirectionInterval {
    /// Whether `d` lies strictly inside the arc swept counterclockwise from
    /// `from` to `to`.
    pub fn contains(&self, d: &Point) -> bool {
        strictly_between(&self.from.dir, d, &self.to.dir)
    }

    /// A direction strictly inside the arc.
    pub fn representative(&self) -> Point {
        let a = &self.from.dir;
        let b = &self.to.dir;
        if a.cross(b).is_positive() {
            a.add(b)
        } else {
            // arc of at least a half turn
            a.perp()
        }
    }
}

fn half(d: &Point) -> u8 {
    if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order of nonzero vectors starting at the positive
/// x axis.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.cross(b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Whether `d` is strictly inside the counterclockwise arc from `a` to `b`.
pub fn strictly_between(a: &Point, d: &Point, b: &Point) -> bool {
    let ab = a.cross(b);
    let ad = a.cross(d);
    let db = d.cross(b);
    if ab.is_positive() {
        ad.is_positive() && db.is_positive()
    } else if ab.is_negative() {
        ad.is_positive() || db.is_positive() || (ad.is_zero() && a.dot(d).is_negative())
    } else if a.dot(b).is_negative() {
        // exact half turn
        ad.is_positive()
    } else {
        // full turn: everything but `a`
        !(ad.is_zero() && a.dot(d).is_positive())
    }
}

/// The circular partition of directions by chord orientations.
pub fn orientation_intervals(q: &ConvexPolygon) -> Vec<DirectionInterval> {
    let dirs = q.chord_directions();
    let m = dirs.len();
    (0..m)
        .map(|i| DirectionInterval { from: dirs[i].clone(), to: dirs[(i + 1) % m].clone() })
        .collect()
}

/// Index of the interval strictly containing `d`, or `None` when `d` is
/// parallel to a chord.
pub fn interval_index(intervals: &[DirectionInterval], d: &Point) -> Option<usize> {
    intervals.iter().position(|iv| iv.contains(d))
}

/// Axis-parallel square with vertices `(+-1, +-1)`.
pub fn unit_square() -> ConvexPolygon {
    validate_polygon(&[
        Point::from_ints(1, 1),
        Point::from_ints(1, -1),
        Point::from_ints(-1, -1),
        Point::from_ints(-1, 1),
    ])
    .expect("unit square is valid")
}

fn dyadic(v: f64, bits: u32) -> Rat {
    let scale = (1u64 << bits) as f64;
    Rat::new(BigInt::from((v * scale).round() as i64), BigInt::from(1u64 << bits))
}

/// Rational approximation of the regular `k`-gon inscribed in the unit
/// circle, with `v_0` on the positive y axis. Coordinates are dyadic with 40
/// fractional bits, so chord families that are parallel in the exact polygon
/// become nearly parallel, except those preserved exactly by the mirror
/// symmetry of the rounding. The result is strictly convex with the origin
/// inside but is not checked for orientation distinctness.
pub fn regular_polygon(k: usize) -> ConvexPolygon {
    let verts: Vec<Point> = (0..k)
        .map(|j| {
            let a = std::f64::consts::FRAC_PI_2 - std::f64::consts::TAU * j as f64 / k as f64;
            Point::new(dyadic(a.cos(), 40), dyadic(a.sin(), 40))
        })
        .collect();
    let mut vs = verts.clone();
    if twice_signed_area(&vs).is_positive() {
        vs[1..].reverse();
    }
    build_unchecked(vs)
}

fn build_unchecked(vs: Vec<Point>) -> ConvexPolygon {
    let k = vs.len();
    let normals: Vec<Point> = (0..k).map(|i| primitive(&vs[(i + 1) % k].sub(&vs[i]).perp())).collect();
    let supports = (0..k).map(|i| normals[i].dot(&vs[i])).collect();
    ConvexPolygon { vertices: vs, normals, supports }
}

/// A random polygon in general position: vertices on a jittered circle with
/// coordinates in multiples of `1/1000`, resampled until it validates without
/// the central-symmetry exemption.
pub fn random_polygon<R: Rng>(rng: &mut R, k: usize) -> ConvexPolygon {
    assert!(k >= 3);
    loop {
        let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let verts: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(0.6..1.0);
                let x = (r * a.cos() * 1000.0).round() as i64;
                let y = (r * a.sin() * 1000.0).round() as i64;
                Point::new(Rat::new(x.into(), 1000.into()), Rat::new(y.into(), 1000.into()))
            })
            .collect();
        if let Ok(q) = validate_polygon(&verts) {
            if !q.is_centrally_symmetric() && q.min_turn_ok() {
                return q;
            }
        }
    }
}

impl ConvexPolygon {
    // Rejects slivers: every vertex must sit at least a little way off the
    // line through its neighbors, relative to the polygon size.
    fn min_turn_ok(&self) -> bool {
        let k = self.k();
        (0..k).all(|i| {
            let a = self.vertex(i + k - 1);
            let b = self.vertex(i);
            let c = self.vertex(i + 1);
            let t = b.sub(a).cross(&c.sub(b));
            t.abs() > Rat::new(BigInt::one(), BigInt::from(200))
        })
    }

    /// A copy scaled by a positive rational.
    pub fn scaled(&self, s: &Rat) -> ConvexPolygon {
        assert!(s.is_positive());
        build_unchecked(self.vertices.iter().map(|v| v.scale(s)).collect())
    }
}

/// Exact angle bucket helper for tests and generators: a random rational
/// direction whose angle is at least `margin` radians from every chord
/// orientation of `q`.
pub fn random_generic_direction<R: Rng>(rng: &mut R, q: &ConvexPolygon, margin: f64) -> Point {
    let chords: Vec<f64> = q
        .chord_directions()
        .iter()
        .map(|c| {
            let (x, y) = c.dir.to_f64();
            y.atan2(x)
        })
        .collect();
    loop {
        let a: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let d = Point::new(dyadic(a.cos(), 48), dyadic(a.sin(), 48));
        let (x, y) = d.to_f64();
        let a = y.atan2(x);
        let far = chords.iter().all(|&c| {
            let mut diff = (a - c).abs() % std::f64::consts::TAU;
            if diff > std::f64::consts::PI {
                diff = std::f64::consts::TAU - diff;
            }
            diff > margin
        });
        if far && !q.chord_directions().iter().any(|c| c.dir.cross(&d).is_zero()) {
            return d;
        }
    }
}
