//! Moving points, scenarios and the synthetic points at infinity.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::polygon::{random_polygon, ConvexPolygon};
use crate::rational::{Point, Rat};
use crate::realroots::{isolate_roots, RatPolynomial};

/// A site of the augmented diagram: one of the moving points, or the point at
/// infinity attached to a polygon vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Finite(usize),
    Infinite(usize),
}

impl Site {
    pub fn is_finite(self) -> bool {
        matches!(self, Site::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Site::Infinite(_))
    }

    pub fn finite_index(self) -> Option<usize> {
        match self {
            Site::Finite(i) => Some(i),
            Site::Infinite(_) => None,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Finite(i) => write!(f, "p{i}"),
            Site::Infinite(i) => write!(f, "q{i}"),
        }
    }
}

/// A point moving along a polynomial trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovingPoint {
    pub id: String,
    pub x: RatPolynomial,
    pub y: RatPolynomial,
}

impl MovingPoint {
    pub fn new(id: impl Into<String>, x: RatPolynomial, y: RatPolynomial) -> Self {
        MovingPoint { id: id.into(), x, y }
    }

    pub fn stationary(id: impl Into<String>, p: Point) -> Self {
        MovingPoint::new(id, RatPolynomial::constant(p.x), RatPolynomial::constant(p.y))
    }

    pub fn at(&self, t: &Rat) -> Point {
        Point::new(self.x.eval(t), self.y.eval(t))
    }

    pub fn degree(&self) -> usize {
        self.x.degree().unwrap_or(0).max(self.y.degree().unwrap_or(0))
    }
}

/// A stationary point at infinity in direction `-v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitePoint {
    pub vertex: usize,
    pub direction: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("a scenario needs at least one point")]
    NoPoints,
    #[error("duplicate point id `{0}`")]
    DuplicateId(String),
    #[error("point `{0}` has degree {1}, above the bound {2}")]
    DegreeTooHigh(String, usize, usize),
    #[error("degree bound must be between 1 and 4, got {0}")]
    BadDegreeBound(usize),
    #[error("empty time span")]
    EmptySpan,
    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),
}

/// Polygon, moving points, time span and degree bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub polygon: ConvexPolygon,
    pub points: Vec<MovingPoint>,
    pub t_start: Rat,
    pub t_end: Rat,
    pub degree: usize,
}

impl Scenario {
    pub fn new(
        polygon: ConvexPolygon,
        points: Vec<MovingPoint>,
        t_start: Rat,
        t_end: Rat,
        degree: usize,
    ) -> Result<Self, ScenarioError> {
        if points.is_empty() {
            return Err(ScenarioError::NoPoints);
        }
        if !(1..=4).contains(&degree) {
            return Err(ScenarioError::BadDegreeBound(degree));
        }
        if t_start > t_end {
            return Err(ScenarioError::EmptySpan);
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p.id.clone()) {
                return Err(ScenarioError::DuplicateId(p.id.clone()));
            }
            if p.degree() > degree {
                return Err(ScenarioError::DegreeTooHigh(p.id.clone(), p.degree(), degree));
            }
        }
        Ok(Scenario { polygon, points, t_start, t_end, degree })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.polygon.k()
    }

    /// All finite sites followed by all infinite sites.
    pub fn sites(&self) -> Vec<Site> {
        (0..self.n())
            .map(Site::Finite)
            .chain((0..self.k()).map(Site::Infinite))
            .collect()
    }

    pub fn position(&self, i: usize, t: &Rat) -> Point {
        self.points[i].at(t)
    }

    pub fn positions(&self, t: &Rat) -> Vec<Point> {
        self.points.iter().map(|p| p.at(t)).collect()
    }

    /// Trajectory difference `q(t) - p(t)` as a pair of polynomials.
    pub fn relative(&self, p: usize, q: usize) -> (RatPolynomial, RatPolynomial) {
        (
            &self.points[q].x - &self.points[p].x,
            &self.points[q].y - &self.points[p].y,
        )
    }

    pub fn contains_time(&self, t: &Rat) -> bool {
        &self.t_start <= t && t <= &self.t_end
    }
}

/// The `k` points at infinity, the `i`-th in direction `-v_i`.
pub fn augment_with_infinity(s: &Scenario) -> Vec<InfinitePoint> {
    s.polygon
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| InfinitePoint { vertex: i, direction: v.neg() })
        .collect()
}

/// `cross((dx, dy), w)` for a constant vector `w`.
pub fn cross_with(dx: &RatPolynomial, dy: &RatPolynomial, w: &Point) -> RatPolynomial {
    &dx.scale(&w.y) - &dy.scale(&w.x)
}

/// Non-fatal findings of [`validate_trajectories`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Checks the kinetic general-position assumptions that can be decided up
/// front: no two points collide during the span, and no pair stays parallel
/// to a chord of the polygon for all time. Orientation polynomials vanishing
/// exactly at the start time are reported as warnings.
pub fn validate_trajectories(s: &Scenario) -> Result<ValidationReport, ScenarioError> {
    let mut report = ValidationReport::default();
    let dirs = s.polygon.chord_directions();
    for p in 0..s.n() {
        for q in p + 1..s.n() {
            let (dx, dy) = s.relative(p, q);
            let (ip, iq) = (&s.points[p].id, &s.points[q].id);
            let g = dx.gcd(&dy);
            let collide = if g.is_zero() {
                true
            } else if g.is_constant() {
                false
            } else {
                !isolate_roots(&g, &s.t_start, &s.t_end).expect("nonzero gcd").is_empty()
            };
            if collide {
                return Err(ScenarioError::DegenerateScenario(format!("points `{ip}` and `{iq}` collide")));
            }
            for c in &dirs {
                let f = cross_with(&dx, &dy, &c.dir);
                if f.is_zero() {
                    let (i, j) = c.chords[0];
                    return Err(ScenarioError::DegenerateScenario(format!(
                        "`{ip}`-`{iq}` stays parallel to chord v{i}v{j}"
                    )));
                }
                if f.eval(&s.t_start).is_zero() {
                    let (i, j) = c.chords[0];
                    report.warnings.push(format!(
                        "`{ip}`-`{iq}` is parallel to chord v{i}v{j} at the start time"
                    ));
                }
            }
        }
    }
    Ok(report)
}

fn grid<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rat {
    Rat::new(rng.gen_range(lo * den..=hi * den).into(), den.into())
}

/// Random trajectories in a polygon-independent box: start positions in
/// `[-10, 10]^2`, velocities in `[-10, 10]^2`, and for degree 2 or more,
/// accelerations in `[-5, 5]^2`, all on a grid of step `1/100`. Resampled
/// until [`validate_trajectories`] accepts with no warnings. Span `[0, 1]`.
pub fn random_scenario_with<R: Rng>(rng: &mut R, polygon: ConvexPolygon, n: usize, degree: usize) -> Scenario {
    loop {
        let points = (0..n)
            .map(|i| {
                let mut xs = vec![grid(rng, -10, 10, 100), grid(rng, -10, 10, 100)];
                let mut ys = vec![grid(rng, -10, 10, 100), grid(rng, -10, 10, 100)];
                for _ in 2..=degree {
                    xs.push(grid(rng, -5, 5, 100));
                    ys.push(grid(rng, -5, 5, 100));
                }
                MovingPoint::new(format!("p{i}"), RatPolynomial::new(xs), RatPolynomial::new(ys))
            })
            .collect();
        let s = Scenario::new(polygon.clone(), points, Rat::zero(), Rat::from_integer(1.into()), degree.max(1))
            .expect("generated scenario is well formed");
        if matches!(validate_trajectories(&s), Ok(r) if r.is_clean()) {
            return s;
        }
    }
}

/// A random polygon with `k` vertices and a random scenario on it.
pub fn random_scenario<R: Rng>(rng: &mut R, n: usize, k: usize, degree: usize) -> Scenario {
    let q = random_polygon(rng, k);
    random_scenario_with(rng, q, n, degree)
}
