use kinetic_voronoi::diagram::Diagram;
use kinetic_voronoi::frame::{Frame, TriangleKind};
use kinetic_voronoi::motion::{random_scenario, Site};
use kinetic_voronoi::placements::bisector_labels;
use kinetic_voronoi::rational::{frac, Point};
use kinetic_voronoi::static_oracle::{build_diagram, expected_triangle_count, OracleError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_diagrams_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut built = 0;
    for _ in 0..30 {
        let n = rng.gen_range(4..=10);
        let k = rng.gen_range(3..=8);
        let s = random_scenario(&mut rng, n, k, 2);
        for j in 0..5 {
            let t = frac(2 * j + 1, 10);
            let d = match build_diagram(&s, &t) {
                Ok(d) => d,
                Err(OracleError::DegenerateConfiguration(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            built += 1;
            assert_eq!(d.triangulation.triangles.len(), expected_triangle_count(n, k));
            assert_eq!(d.triangulation.count(TriangleKind::Halfplane), k);
            let p = s.positions(&t);
            for (&(a, b), labels) in d.topology.edges() {
                assert!(!labels.is_empty());
                if let (Site::Finite(x), Site::Finite(y)) = (a, b) {
                    let u: Point = p[y].sub(&p[x]);
                    let bs = bisector_labels(&s.polygon, &u).unwrap();
                    let i = bs.position(labels[0]).unwrap();
                    assert_eq!(&bs.labels[i..i + labels.len()], labels.as_slice());
                }
            }
            let kd = Diagram::from_topology(n, k, d.topology.clone());
            let frame = Frame::at(&s, &t);
            let report = kd.audit_with(&frame);
            assert!(report.is_clean(), "{report}");
            assert!(kd.compare(&d.topology).is_empty());
            let tri_edges = d.triangulation.edges();
            let finite_edges: Vec<_> = tri_edges.iter().filter(|(a, b)| a.is_finite() || b.is_finite()).collect();
            assert_eq!(finite_edges.len(), d.topology.edge_count());
        }
    }
    assert!(built > 100);
}
