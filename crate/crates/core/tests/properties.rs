use std::cmp::Ordering;

use kinetic_voronoi::motion::random_scenario;
use kinetic_voronoi::polygon::{random_polygon, ConvexPolygon};
use kinetic_voronoi::placements::{bisector_labels, bisector_polyline};
use kinetic_voronoi::rational::{format_rat, frac, int, parse_rat, simplest_between, Point, Rat};
use kinetic_voronoi::realroots::{isolate_roots, RatPolynomial};
use kinetic_voronoi::static_oracle::{build_diagram, expected_triangle_count, OracleError};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn polygon(seed: u64, k: usize) -> ConvexPolygon {
    random_polygon(&mut ChaCha8Rng::seed_from_u64(seed), k)
}

fn rat() -> impl Strategy<Value = Rat> {
    (-200i64..200, 1i64..12).prop_map(|(a, b)| frac(a, b))
}

fn point() -> impl Strategy<Value = Point> {
    (rat(), rat()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_gauge(seed in 0u64..1000, k in 3usize..9, x in point(), y in point(), z in point(), s in 1i64..20) {
        let q = polygon(seed, k);
        prop_assert!(q.distance(&x, &x).is_zero());
        prop_assert!(q.distance(&x, &z) <= q.distance(&x, &y) + q.distance(&y, &z));
        let far = x.add(&y.sub(&x).scale(&int(s)));
        prop_assert_eq!(q.distance(&x, &far), q.distance(&x, &y) * int(s));
    }

    #[test]
    fn bisector_points_and_rays_are_equidistant(seed in 0u64..1000, k in 3usize..9, p in point(), x in point()) {
        let q = polygon(seed, k);
        let Ok(line) = bisector_polyline(&q, &p, &x) else { return Ok(()) };
        let labels = bisector_labels(&q, &x.sub(&p)).unwrap();
        prop_assert_eq!(line.points.len() + 1, labels.labels.len());
        let mut probes = line.points.clone();
        for s in [1, 7] {
            probes.push(line.points[0].add(&line.start_dir.scale(&int(s))));
            probes.push(line.points.last().unwrap().add(&line.end_dir.scale(&int(s))));
        }
        for c in &probes {
            prop_assert_eq!(q.distance(c, &p), q.distance(c, &x));
        }
    }

    #[test]
    fn simplest_between_has_the_smallest_denominator(lo in rat(), w in (1i64..50, 1i64..50)) {
        let hi = &lo + frac(w.0, w.1 * 7);
        let r = simplest_between(&lo, &hi);
        prop_assert!(lo < r && r < hi);
        let den = r.denom().clone();
        let mut d = num_bigint::BigInt::one();
        while d < den {
            let m = (lo.numer() * &d).div_floor(lo.denom()) + 1;
            prop_assert!(Rat::new(m, d.clone()) >= hi, "denominator {} fits", d);
            d += 1;
        }
    }

    #[test]
    fn rationals_round_trip_through_text(r in rat()) {
        prop_assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
    }

    #[test]
    fn product_of_linear_factors_isolates_its_roots(roots in prop::collection::vec(rat(), 1..5)) {
        let mut p = RatPolynomial::constant(int(1));
        for r in &roots {
            p = &p * &RatPolynomial::linear_root(r);
        }
        let found = isolate_roots(&p, &int(-300), &int(300)).unwrap();
        let mut want = roots.clone();
        want.sort();
        let multiple: Vec<Rat> = want.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0].clone()).collect();
        want.dedup();
        prop_assert_eq!(found.len(), want.len());
        for (f, w) in found.iter().zip(&want) {
            prop_assert_eq!(f.time.cmp_rational(w), Ordering::Equal);
            prop_assert_eq!(f.multiple, multiple.contains(w));
        }
    }

    #[test]
    fn algebraic_times_order_like_their_values(a in 0i64..400, b in 0i64..400, c in 1i64..12) {
        // positive square roots of a / c and b / c
        let root = |v: i64| {
            let p = RatPolynomial::new(vec![-frac(v, c), Rat::zero(), int(1)]);
            isolate_roots(&p, &int(0), &int(100)).unwrap().pop().unwrap().time
        };
        let (x, y) = (root(a), root(b));
        prop_assert_eq!(x.compare(&y), a.cmp(&b));
        prop_assert_eq!(y.compare(&x), b.cmp(&a));
    }

    #[test]
    fn static_triangulation_has_the_expected_size(seed in 0u64..10_000, n in 1usize..8, k in 3usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_scenario(&mut rng, n, k, 1);
        let t = (&s.t_start + &s.t_end) / int(2);
        match build_diagram(&s, &t) {
            Ok(d) => prop_assert_eq!(d.topology.triangle_count(), expected_triangle_count(n, k)),
            Err(OracleError::DegenerateConfiguration(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
