//! SVG rendering of the kinetic diagram at one instant.

use std::cmp::Ordering;
use std::fmt::Write as _;

use kinetic_voronoi::diagram::Diagram;
use kinetic_voronoi::engine::{Engine, EngineError, EngineOptions};
use kinetic_voronoi::frame::{Frame, TriangleKind, Witness};
use kinetic_voronoi::motion::{Scenario, Site};
use kinetic_voronoi::placements::{bisector_labels, bisector_polyline, PlacementError};
use kinetic_voronoi::rational::{format_rat, to_f64, Point, Rat};

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("t = {0} is the time of an event; pick an event-free time")]
    EventTimeCollision(String),
    #[error("t = {0} lies outside the scenario span")]
    OutOfSpan(String),
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("bisector: {0:?}")]
    Bisector(PlacementError),
}

type P = (f64, f64);

/// Polyline of the Voronoi edge of a finite pair `(a, b)`, `a < b`, from
/// the triangle where `a` precedes `b` to the other one, with `a` on the
/// left. Ends at infinity are replaced by points at distance `far`.
fn edge_path(
    frame: &Frame<'_>,
    d: &Diagram,
    pos: &[Point],
    a: usize,
    b: usize,
    far: f64,
) -> Result<(Vec<P>, Vec<P>), SnapshotError> {
    let topo = d.topology();
    let (sa, sb) = (Site::Finite(a), Site::Finite(b));
    let labels = topo.labels(sa, sb).expect("edge exists");
    let q = frame.polygon;
    let bs = bisector_labels(q, &pos[b].sub(&pos[a])).map_err(SnapshotError::Bisector)?;
    let poly = bisector_polyline(q, &pos[a], &pos[b]).map_err(SnapshotError::Bisector)?;
    let i0 = bs.position(labels[0]).expect("edge labels lie on the bisector");
    let m = labels.len();
    let inner: Vec<P> = (i0..i0 + m - 1).map(|j| poly.points[j].to_f64()).collect();
    let (t1, t2) = topo.endpoints(sa, sb).expect("edge has endpoints");
    let ray = |base: &Point, dir: &Point| {
        let (bx, by) = base.to_f64();
        let (dx, dy) = dir.to_f64();
        let l = (dx * dx + dy * dy).sqrt();
        (bx + far * dx / l, by + far * dy / l)
    };
    let start = match vertex(frame, &t1) {
        Some(v) => v,
        None => ray(&poly.points[0], &poly.start_dir),
    };
    let end = match vertex(frame, &t2) {
        Some(v) => v,
        None => ray(poly.points.last().unwrap(), &poly.end_dir),
    };
    let mut path = vec![start];
    path.extend(inner.iter().copied());
    path.push(end);
    Ok((path, inner))
}

fn vertex(frame: &Frame<'_>, t: &kinetic_voronoi::frame::Triangle) -> Option<P> {
    if t.kind() != TriangleKind::Bounded {
        return None;
    }
    match frame.witness(t)? {
        Witness::Bounded { cx, cy, .. } => {
            let z = Rat::from_integer(0.into());
            Some((to_f64(&cx.eval(&z)), to_f64(&cy.eval(&z))))
        }
        _ => None,
    }
}

fn fmt_pt(out: &mut String, (x, y): P) {
    let _ = write!(out, "{:.4},{:.4}", x + 0.0, 0.0 - y);
}

/// Renders `d`, the diagram of `s` at time `t`.
pub fn render(s: &Scenario, d: &Diagram, t: &Rat, delaunay: bool) -> Result<String, SnapshotError> {
    let pos = s.positions(t);
    let frame = Frame::at(s, t);
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &pos {
        let (x, y) = p.to_f64();
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    let mut max_scale: f64 = 0.0;
    for tri in d.triangles() {
        if tri.kind() == TriangleKind::Bounded {
            if let Some(Witness::Bounded { scale, .. }) = frame.witness(&tri) {
                max_scale = max_scale.max(to_f64(&scale.eval(t)));
            }
        }
    }
    if max_scale == 0.0 {
        max_scale = ((hi_x - lo_x).max(hi_y - lo_y) / 2.0).max(1.0);
    }
    let pad = 2.0 * max_scale;
    let (x0, y0, x1, y1) = (lo_x - pad, lo_y - pad, hi_x + pad, hi_y + pad);
    let (w, h) = (x1 - x0, y1 - y0);
    let far = 10.0 * (w + h);
    let dot = (w.max(h)) / 150.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">",
        x0, -y1, w, h
    );
    let _ = writeln!(out, "<title>t = {}</title>", format_rat(t));
    let _ = writeln!(
        out,
        "<defs><clipPath id=\"view\"><rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\"/></clipPath></defs>",
        x0, -y1, w, h
    );
    let _ = writeln!(out, "<g clip-path=\"url(#view)\" stroke-width=\"{:.4}\">", dot / 3.0);

    let topo = d.topology();
    let n = s.n();
    let mut edges = Vec::new();
    for (&(a, b), _) in topo.edges() {
        if let (Site::Finite(x), Site::Finite(y)) = (a, b) {
            edges.push(((x, y), edge_path(&frame, d, &pos, x, y, far)?));
        }
    }
    let hue = |i: usize| (i * 137) % 360;
    for a in 0..n {
        let me = Site::Finite(a);
        let nb = topo.neighbors(me);
        let Some(&x0s) = nb.first() else { continue };
        let mut path: Vec<P> = Vec::new();
        let mut x = x0s;
        for _ in 0..=nb.len() {
            match x {
                Site::Finite(j) => {
                    let (p, _) = &edges.iter().find(|(k, _)| *k == (a.min(j), a.max(j))).unwrap().1;
                    if a < j {
                        path.extend(p.iter().copied());
                    } else {
                        path.extend(p.iter().rev().copied());
                    }
                }
                Site::Infinite(m) => {
                    let v = s.polygon.vertex(m).neg();
                    let (dx, dy) = v.to_f64();
                    let l = (dx * dx + dy * dy).sqrt();
                    let (px, py) = pos[a].to_f64();
                    path.push((px + far * dx / l, py + far * dy / l));
                }
            }
            let tri = topo.triangle_with_directed(x, me).expect("closed cell");
            let pos_a = tri.position(me).unwrap();
            x = tri.sites[(pos_a + 1) % 3];
            if x == x0s {
                break;
            }
        }
        let _ = write!(out, "<path fill=\"hsl({},60%,85%)\" stroke=\"none\" d=\"M", hue(a));
        for (i, p) in path.iter().enumerate() {
            if i > 0 {
                out.push_str(" L");
            }
            fmt_pt(&mut out, *p);
        }
        out.push_str(" Z\"/>\n");
    }
    for ((a, b), (p, _)) in &edges {
        let _ = write!(out, "<polyline class=\"edge\" data-sites=\"p{a} p{b}\" fill=\"none\" stroke=\"black\" points=\"");
        for (i, q) in p.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            fmt_pt(&mut out, *q);
        }
        out.push_str("\"/>\n");
    }
    for ((a, b), (_, inner)) in &edges {
        for q in inner {
            let _ = writeln!(
                out,
                "<circle class=\"breakpoint\" data-sites=\"p{a} p{b}\" cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"white\" stroke=\"black\"/>",
                q.0 + 0.0,
                0.0 - q.1,
                dot / 2.0
            );
        }
    }
    if delaunay {
        for ((a, b), _) in &edges {
            let (p, q) = (pos[*a].to_f64(), pos[*b].to_f64());
            let _ = writeln!(
                out,
                "<line class=\"delaunay\" x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"gray\" stroke-dasharray=\"{:.4}\"/>",
                p.0 + 0.0,
                0.0 - p.1,
                q.0 + 0.0,
                0.0 - q.1,
                dot
            );
        }
    }
    for (i, p) in pos.iter().enumerate() {
        let (x, y) = p.to_f64();
        let _ = writeln!(
            out,
            "<circle class=\"site\" cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"black\"><title>{}</title></circle>",
            x + 0.0,
            0.0 - y,
            dot,
            s.points[i].id
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Runs the engine to `t` and renders its diagram.
pub fn snapshot(s: &Scenario, t: &Rat, delaunay: bool) -> Result<String, SnapshotError> {
    if !s.contains_time(t) {
        return Err(SnapshotError::OutOfSpan(format_rat(t)));
    }
    let mut e = Engine::with_options(s, &s.t_start, EngineOptions { verify_local: false, audit_each_step: false })?;
    e.run_until(t)?;
    let hit = e.log().last().is_some_and(|r| r.time.cmp_rational(t) == Ordering::Equal)
        || e.next_event_time().is_some_and(|x| x.cmp_rational(t) == Ordering::Equal);
    if hit {
        return Err(SnapshotError::EventTimeCollision(format_rat(t)));
    }
    render(s, e.diagram(), t, delaunay)
}
