#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rac1_core::drawing::{exact, validate, Drawing, Edge};
use rac1_core::planarize::Planarization;

/// Non-simple, disconnected crossing-free face: heptagon v1 v3 … v8 with a
/// pendant v1v2, a separate edge v9v10 and a vertex v11 that has crossed
/// edges only. Crossed chords keep every crossing-free edge in its own
/// face; (v4, v7) is the only crossed edge between v5v6 and v9v10.
pub fn fig1a() -> Drawing {
    let mut d = Drawing::new(1);
    let pts = [
        ("v1", 0, 100),
        ("v3", -78, 62),
        ("v4", -97, -22),
        ("v5", -43, -90),
        ("v6", 43, -90),
        ("v7", 97, -22),
        ("v8", 78, 62),
        ("v2", 0, 80),
        ("v9", -20, 20),
        ("v10", 0, 20),
        ("v11", 20, 0),
    ];
    for (id, x, y) in pts {
        d.add_vertex(id, exact(x, y));
    }
    let cycle = ["v1", "v3", "v4", "v5", "v6", "v7", "v8"];
    for i in 0..7 {
        let (a, b) = (cycle[i], cycle[(i + 1) % 7]);
        d.add_edge(Edge::new(format!("{a}{b}"), a, b));
    }
    for (a, b) in [
        ("v1", "v2"),
        ("v9", "v10"),
        ("v1", "v4"),
        ("v3", "v5"),
        ("v6", "v8"),
        ("v7", "v1"),
        ("v8", "v3"),
        ("v4", "v7"),
        ("v11", "v8"),
        ("v9", "v3"),
    ] {
        d.add_edge(Edge::new(format!("{a}{b}"), a, b));
    }
    d
}

/// Random 1-bend RAC drawing: vertices with pairwise distinct x and y
/// coordinates, L-shaped edges whose pieces are axis-parallel, plus a few
/// straight edges kept only where they leave the drawing valid.
pub fn random_rac(seed: u64, n: usize, target_edges: usize) -> Drawing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<i64> = (0..n as i64).map(|i| 3 * i).collect();
    let mut ys = xs.clone();
    shuffle(&mut xs, &mut rng);
    shuffle(&mut ys, &mut rng);
    let mut d = Drawing::new(1);
    for i in 0..n {
        d.add_vertex(format!("v{i}"), exact(xs[i], ys[i]));
    }
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut attempts = 0;
    while d.edges.len() < target_edges && attempts < 6 * target_edges {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || used.contains(&(a.min(b), a.max(b))) {
            continue;
        }
        let mut e = Edge::new(format!("e{}", d.edges.len()), format!("v{a}"), format!("v{b}"));
        match rng.gen_range(0..5) {
            0 => {}
            1 | 2 => e = e.with_bend(exact(xs[a], ys[b])),
            _ => e = e.with_bend(exact(xs[b], ys[a])),
        }
        d.edges.push(e);
        if validate(&d).is_rac {
            used.insert((a.min(b), a.max(b)));
        } else {
            d.edges.pop();
        }
    }
    d
}

/// [`random_rac`] retried until the graph is connected.
pub fn connected_rac(seed: u64, n: usize, target_edges: usize) -> Drawing {
    (0..)
        .map(|k| random_rac(seed.wrapping_mul(1000).wrapping_add(k), n, target_edges))
        .find(|d| d.component_count() == 1)
        .unwrap()
}

fn shuffle<T>(v: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..v.len()).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
}

/// Facial walks traced independently of the planarizer's rotation system:
/// directions sorted by floating `atan2`, the successor of a half-edge is
/// the clockwise neighbour of its twin. Each walk is returned rotated to
/// start at its smallest half-edge.
pub fn oracle_walks(p: &Planarization) -> BTreeSet<Vec<usize>> {
    let nh = 2 * p.arcs.len();
    let tail = |h: usize| if h.is_multiple_of(2) { p.arcs[h / 2].tail } else { p.arcs[h / 2].head };
    let angle = |h: usize| {
        let pts = &p.arcs[h / 2].points;
        let (a, b) = if h.is_multiple_of(2) { (&pts[0], &pts[1]) } else { (&pts[pts.len() - 1], &pts[pts.len() - 2]) };
        let (ax, ay) = a.to_f64();
        let (bx, by) = b.to_f64();
        (by - ay).atan2(bx - ax)
    };
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); p.nodes.len()];
    for h in 0..nh {
        around[tail(h)].push(h);
    }
    for list in &mut around {
        list.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    }
    let next = |h: usize| {
        let t = h ^ 1;
        let list = &around[tail(t)];
        let pos = list.iter().position(|&x| x == t).unwrap();
        list[(pos + list.len() - 1) % list.len()]
    };
    let mut seen = vec![false; nh];
    let mut out = BTreeSet::new();
    for s in 0..nh {
        if seen[s] {
            continue;
        }
        let mut w = Vec::new();
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            w.push(h);
            h = next(h);
        }
        out.insert(canonical(&w));
    }
    out
}

pub fn canonical(w: &[usize]) -> Vec<usize> {
    let k = (0..w.len()).min_by_key(|&i| w[i]).unwrap_or(0);
    (0..w.len()).map(|i| w[(k + i) % w.len()]).collect()
}

pub fn planarizer_walks(p: &Planarization) -> BTreeSet<Vec<usize>> {
    p.faces.iter().flat_map(|f| f.walks.iter().map(|w| canonical(w))).collect()
}

/// Random drawings of the test corpus, all valid.
pub fn corpus(count: usize) -> Vec<Drawing> {
    (0..count as u64)
        .map(|s| {
            let n = 6 + (s % 7) as usize;
            connected_rac(s, n, n + 4 + (s % 9) as usize)
        })
        .collect()
}
