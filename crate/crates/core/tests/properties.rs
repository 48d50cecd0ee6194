mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rac1_core::drawing::{validate, Drawing};
use rac1_core::geom::{intersect, orient, Coord, IntersectionKind, Point, Segment};
use rac1_core::planarize::{face_stats, planarize, Scope};

fn rat(num: i64, den_pow: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(1u8) << den_pow)
}

fn rpoint(x: &BigRational, y: &BigRational) -> Point {
    Point::new(Coord::Exact(x.clone()), Coord::Exact(y.clone()))
}

fn det_sign(a: (&BigRational, &BigRational), b: (&BigRational, &BigRational), c: (&BigRational, &BigRational)) -> i8 {
    let d = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    match d.cmp(&BigRational::from_integer(0.into())) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn seg(a: (i64, i64), b: (i64, i64)) -> Option<Segment> {
    Segment::new(Point::int(a.0, a.1), Point::int(b.0, b.1)).ok()
}

fn crossing_pairs(d: &Drawing) -> BTreeSet<(String, String)> {
    validate(d)
        .crossings
        .iter()
        .map(|c| {
            let (a, b) = (c.edge_a.clone(), c.edge_b.clone());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

proptest! {
    #[test]
    fn orient_matches_rational_determinant_near_collinear(
        ax in -1000i64..1000, ay in -1000i64..1000,
        bx in -1000i64..1000, by in -1000i64..1000,
        t in -4i64..8, nudge in -3i64..4, pow in 40u32..90,
    ) {
        let (ax, ay, bx, by) = (rat(ax, 0), rat(ay, 0), rat(bx, 0), rat(by, 0));
        let t = rat(t, 2);
        let cx = &ax + &t * (&bx - &ax) + rat(nudge, pow);
        let cy = &ay + &t * (&by - &ay);
        let expect = det_sign((&ax, &ay), (&bx, &by), (&cx, &cy));
        let (a, b, c) = (rpoint(&ax, &ay), rpoint(&bx, &by), rpoint(&cx, &cy));
        prop_assert_eq!(orient(&a, &b, &c), expect);
        prop_assert_eq!(orient(&b, &c, &a), expect);
        prop_assert_eq!(orient(&b, &a, &c), -expect);
    }

    #[test]
    fn intersection_is_symmetric(
        a in (-20i64..20, -20i64..20), b in (-20i64..20, -20i64..20),
        c in (-20i64..20, -20i64..20), d in (-20i64..20, -20i64..20),
    ) {
        let (Some(s1), Some(s2)) = (seg(a, b), seg(c, d)) else { return Ok(()); };
        let x = intersect(&s1, &s2);
        let y = intersect(&s2, &s1);
        prop_assert_eq!(x.is_some(), y.is_some());
        if let (Some(x), Some(y)) = (x, y) {
            prop_assert_eq!(x.kind, y.kind);
            if x.kind != IntersectionKind::Overlap {
                prop_assert_eq!(&x.point, &y.point);
            }
            prop_assert_eq!(orient(&s1.p, &s1.q, &x.point), 0);
            prop_assert_eq!(orient(&s2.p, &s2.q, &x.point), 0);
        }
        let r = intersect(&s1.reversed(), &s2);
        prop_assert_eq!(r.map(|i| i.kind), intersect(&s1, &s2).map(|i| i.kind));
    }

    #[test]
    fn float_and_exact_agree_on_integers(
        a in (-50i64..50, -50i64..50), b in (-50i64..50, -50i64..50), c in (-50i64..50, -50i64..50),
    ) {
        let f = |p: (i64, i64)| Point::float(p.0 as f64, p.1 as f64);
        let e = |p: (i64, i64)| Point::int(p.0, p.1);
        prop_assert_eq!(orient(&f(a), &f(b), &f(c)), orient(&e(a), &e(b), &e(c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planarization_invariants(seed in 0u64..10_000, n in 5usize..11, extra in 0usize..8) {
        let d = common::connected_rac(seed, n, n + extra);
        for scope in [Scope::All, Scope::Crossed, Scope::CrossingFree] {
            let p = planarize(&d, scope).unwrap();
            prop_assert_eq!(p.euler_defect(), 0);
            let total: usize = p.faces.iter().map(|f| f.length()).sum();
            prop_assert_eq!(total, 2 * p.arcs.len());
            for node in p.nodes.iter().filter(|n| n.is_dummy()) {
                prop_assert_eq!(p.degree(node.id), 4);
            }
            prop_assert_eq!(p.faces.iter().filter(|f| f.is_outer).count(), 1);
            for f in &p.faces {
                let s = face_stats(&p, f);
                prop_assert_eq!(s.l, s.d + s.m - s.i);
            }
            if p.arcs.len() <= 50 {
                prop_assert_eq!(common::planarizer_walks(&p), common::oracle_walks(&p));
            }
        }
    }

    #[test]
    fn json_round_trip(seed in 0u64..10_000, n in 4usize..10) {
        let d = common::random_rac(seed, n, n + 3);
        let back = Drawing::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn validation_ignores_edge_order(seed in 0u64..10_000, n in 4usize..10) {
        let d = common::random_rac(seed, n, n + 4);
        let mut shuffled = d.clone();
        shuffled.edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(validate(&shuffled).is_rac, validate(&d).is_rac);
        prop_assert_eq!(crossing_pairs(&shuffled), crossing_pairs(&d));
    }
}
