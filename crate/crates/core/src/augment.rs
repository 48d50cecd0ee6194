//! Insertion of crossing-free auxiliary edges until every face of the
//! planarization is a crossing-free triangle or touches at most one
//! crossing-free edge. Afterwards every crossing-free face is good.

use std::collections::BTreeSet;

use num_rational::BigRational;
use thiserror::Error;

use crate::drawing::{Drawing, Edge};
use crate::geom::{cross, intersect, on_segment, Coord, IntersectionKind, Point, Segment};
use crate::planarize::{arc_of, is_loop_arc, is_triangle, planarize, Face, NodeKind, Planarization, PlanarizeError, Scope};

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error(transparent)]
    Planarize(#[from] PlanarizeError),
    #[error("face {0} of the planarization is disconnected; the drawing must be connected")]
    Disconnected(usize),
    #[error("no clear route for an auxiliary edge in face {0}")]
    NoClearance(usize),
    #[error("face {0} cannot be split further")]
    Stuck(usize),
    #[error("augmentation did not terminate after {0} insertions")]
    NonTerminating(usize),
}

/// Crossing-free edges incident to a face of the full planarization,
/// self-loops excluded.
pub fn crossing_free_edges(p: &Planarization, f: &Face) -> BTreeSet<usize> {
    f.half_edges()
        .filter(|&h| !is_loop_arc(p, arc_of(h)))
        .map(|h| p.arcs[arc_of(h)].edge)
        .filter(|&e| !p.crossed[e])
        .collect()
}

/// Face touching two or more crossing-free edges without being a triangle
/// of crossing-free edges.
pub fn needs_split(p: &Planarization, f: &Face) -> bool {
    let e0 = crossing_free_edges(p, f);
    e0.len() >= 2 && !(is_triangle(p, f) && f.half_edges().all(|h| !p.crossed[p.arcs[arc_of(h)].edge]))
}

/// Returns a copy of `d` with auxiliary edges appended. Already-good
/// drawings come back unchanged.
pub fn augment_to_good(d: &Drawing) -> Result<Drawing, AugmentError> {
    let mut out = d.clone();
    let first = planarize(&out, Scope::All)?;
    let cap = 4 * (first.faces.len() + first.arcs.len());
    let mut p = first;
    let mut added = 0;
    loop {
        let Some(f) = p.faces.iter().find(|f| needs_split(&p, f)) else {
            return Ok(out);
        };
        if added >= cap {
            return Err(AugmentError::NonTerminating(added));
        }
        if f.walks.len() != 1 || !f.isolated_nodes.is_empty() {
            return Err(AugmentError::Disconnected(f.id));
        }
        let (x, y, path) = choose_route(&p, f)?;
        let edge = route(&out, &p, f.id, x, y, &path, added)?;
        out.edges.push(edge);
        added += 1;
        p = planarize(&out, Scope::All)?;
    }
}

/// Endpoints and the half-edges the new edge runs alongside.
fn choose_route(p: &Planarization, f: &Face) -> Result<(usize, usize, Vec<usize>), AugmentError> {
    let w = &f.walks[0];
    let len = w.len();
    let is_loop = |h: usize| is_loop_arc(p, arc_of(h));
    let is_e0 = |h: usize| !p.crossed[p.arcs[arc_of(h)].edge] && !is_loop(h);
    if w.iter().all(|&h| is_e0(h) || is_loop(h)) {
        let adjacent = |a: usize, b: usize| {
            p.arcs
                .iter()
                .any(|arc| (arc.tail == a && arc.head == b) || (arc.tail == b && arc.head == a))
        };
        // ears over consecutive non-loop half-edges; loops in between are
        // followed by the route
        let ear = |i: usize| {
            let mut path = vec![w[i]];
            let mut j = (i + 1) % len;
            while is_loop(w[j]) {
                path.push(w[j]);
                j = (j + 1) % len;
            }
            path.push(w[j]);
            path
        };
        let ends = |path: &[usize]| (p.tail(path[0]), p.head(path[path.len() - 1]));
        let candidates: Vec<Vec<usize>> = (0..len)
            .filter(|&i| !is_loop(w[i]))
            .map(ear)
            .filter(|path| {
                let (x, y) = ends(path);
                x != y
            })
            .collect();
        let path = candidates
            .iter()
            .find(|path| {
                let (x, y) = ends(path);
                !adjacent(x, y)
            })
            .or_else(|| candidates.first())
            .ok_or(AugmentError::Stuck(f.id))?
            .clone();
        let (x, y) = ends(&path);
        return Ok((x, y, path));
    }
    let start = (0..len)
        .filter(|&i| p.nodes[p.tail(w[i])].is_dummy())
        .min_by_key(|&i| p.tail(w[i]))
        .ok_or(AugmentError::Stuck(f.id))?;
    let rotated: Vec<usize> = (0..len).map(|k| w[(start + k) % len]).collect();
    let i1 = rotated.iter().position(|&h| is_e0(h)).expect("two crossing-free edges");
    let i2 = rotated.iter().rposition(|&h| is_e0(h)).expect("two crossing-free edges");
    Ok((p.tail(rotated[i1]), p.head(rotated[i2]), rotated[i1..=i2].to_vec()))
}

fn vertex_of(p: &Planarization, node: usize) -> usize {
    match p.nodes[node].kind {
        NodeKind::Real { vertex } => vertex,
        NodeKind::Dummy => unreachable!("crossing-free arcs end at real nodes"),
    }
}

type Vec2 = (Coord, Coord);

fn scale(v: &Vec2, s: &Coord) -> Vec2 {
    (&v.0 * s, &v.1 * s)
}

fn add(a: &Vec2, b: &Vec2) -> Vec2 {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn neg(a: &Vec2) -> Vec2 {
    (-&a.0, -&a.1)
}

fn left(a: &Vec2) -> Vec2 {
    (-&a.1, a.0.clone())
}

fn unit_inf(v: &Vec2) -> Vec2 {
    let n = if v.0.abs() > v.1.abs() { v.0.abs() } else { v.1.abs() };
    (v.0.div(&n), v.1.div(&n))
}

/// Rounds exact coordinates to the nearest double so that nested offsets
/// keep small denominators. Clearance is still checked exactly.
fn snap(p: &Point) -> Point {
    let c = |v: &Coord| match v {
        Coord::Exact(_) => BigRational::from_float(v.to_f64()).map_or_else(|| v.clone(), Coord::Exact),
        Coord::Float(_) => v.clone(),
    };
    Point::new(c(&p.x), c(&p.y))
}

fn shift(p: &Point, v: &Vec2) -> Point {
    Point::new(&p.x + &v.0, &p.y + &v.1)
}

/// Directions from `p` into the region left of the path `prev → p → next`;
/// a U-turn gets two, one on each side of the tip, a straight pass none.
fn inward(prev: &Point, p: &Point, next: &Point) -> Vec<Vec2> {
    let din = unit_inf(&p.sub(prev));
    let dout = unit_inf(&next.sub(p));
    let turn = cross(&din, &dout).signum();
    let back = neg(&din);
    if turn > 0 {
        vec![add(&dout, &back)]
    } else if turn < 0 {
        vec![neg(&add(&dout, &back))]
    } else if din == dout {
        Vec::new()
    } else {
        vec![add(&din, &left(&din)), add(&din, &neg(&left(&din)))]
    }
}

fn route(
    d: &Drawing,
    p: &Planarization,
    face: usize,
    x: usize,
    y: usize,
    path: &[usize],
    serial: usize,
) -> Result<Edge, AugmentError> {
    let mut pts: Vec<Point> = Vec::new();
    for &h in path {
        let hp = p.he_points(h);
        if pts.is_empty() {
            pts.push(hp[0].clone());
        }
        pts.extend(hp[1..].iter().cloned());
    }
    // corners with their inward directions; segment midpoints as well when
    // there are fewer than two corners
    let half = Coord::ratio(1, 2);
    let mut guide: Vec<(Point, Vec2)> = Vec::new();
    for k in 1..pts.len() - 1 {
        for v in inward(&pts[k - 1], &pts[k], &pts[k + 1]) {
            guide.push((pts[k].clone(), v));
        }
    }
    if guide.len() < 2 {
        guide.clear();
        for k in 0..pts.len() - 1 {
            if k > 0 {
                for v in inward(&pts[k - 1], &pts[k], &pts[k + 1]) {
                    guide.push((pts[k].clone(), v));
                }
            }
            let dir = unit_inf(&pts[k + 1].sub(&pts[k]));
            let mid = Point::new(
                (&pts[k].x + &pts[k + 1].x) * half.clone(),
                (&pts[k].y + &pts[k + 1].y) * half.clone(),
            );
            guide.push((mid, left(&dir)));
        }
    }
    let span = pts
        .windows(2)
        .map(|w| {
            let (a, b) = w[1].sub(&w[0]);
            let a = a.abs();
            let b = b.abs();
            if a > b {
                a
            } else {
                b
            }
        })
        .fold(None, |m: Option<Coord>, v| match m {
            Some(m) if m < v => Some(m),
            Some(m) => Some(m),
            None => Some(v),
        })
        .expect("non-empty path");
    let mut eps = span.div(&Coord::int(16));
    let xs = vertex_of(p, p.tail(path[0]));
    let ys = vertex_of(p, p.head(*path.last().unwrap()));
    debug_assert_eq!((p.tail(path[0]), p.head(*path.last().unwrap())), (x, y));
    for _ in 0..80 {
        let bends: Vec<Point> = guide.iter().map(|(q, v)| snap(&shift(q, &scale(v, &eps)))).collect();
        let mut line = vec![d.vertices[xs].point.clone()];
        line.extend(bends.iter().cloned());
        line.push(d.vertices[ys].point.clone());
        if is_clear(d, &line) {
            let mut e = Edge::new(format!("aux{serial}"), d.vertices[xs].id.clone(), d.vertices[ys].id.clone());
            e.bends = bends;
            e.auxiliary = true;
            return Ok(e);
        }
        eps = eps * half.clone();
    }
    Err(AugmentError::NoClearance(face))
}

/// The polyline touches the drawing only at its two end vertices and does
/// not touch itself.
fn is_clear(d: &Drawing, line: &[Point]) -> bool {
    let Ok(segs) = line
        .windows(2)
        .map(|w| Segment::new(w[0].clone(), w[1].clone()))
        .collect::<Result<Vec<_>, _>>()
    else {
        return false;
    };
    let (start, end) = (&line[0], &line[line.len() - 1]);
    let allowed = |q: &Point, j: usize| (j == 0 && q == start) || (j == segs.len() - 1 && q == end);
    for (j, s) in segs.iter().enumerate() {
        for v in &d.vertices {
            if on_segment(s, &v.point) && !allowed(&v.point, j) {
                return false;
            }
        }
        for e in 0..d.edges.len() {
            for t in d.segments(e) {
                match intersect(s, &t) {
                    None => {}
                    Some(i) if i.kind == IntersectionKind::Endpoint && allowed(&i.point, j) => {}
                    Some(_) => return false,
                }
            }
        }
        for (k, o) in segs.iter().enumerate().skip(j + 1) {
            match intersect(s, o) {
                None => {}
                Some(i) if i.kind == IntersectionKind::Endpoint => {
                    let shared = (k == j + 1 && i.point == s.q)
                        || (j == 0 && k == segs.len() - 1 && start == end && i.point == *start);
                    if !shared {
                        return false;
                    }
                }
                Some(_) => return false,
            }
        }
    }
    true
}

/// Crossing-free faces bounded by two parallel edges with nothing inside.
pub fn homotopic_pairs(d: &Drawing) -> Result<Vec<usize>, PlanarizeError> {
    let g0 = planarize(d, Scope::CrossingFree)?;
    let p_all = planarize(d, Scope::All)?;
    let ov = crate::planarize::overlay(d, &p_all)?;
    let mut used = vec![false; g0.faces.len()];
    for (g, &f) in ov.face_map.iter().enumerate() {
        if p_all.faces[g].half_edges().any(|h| p_all.crossed[p_all.arcs[arc_of(h)].edge]) {
            used[f] = true;
        }
    }
    Ok(g0
        .faces
        .iter()
        .filter(|f| f.walks.len() == 1 && f.walks[0].len() == 2 && f.isolated_nodes.is_empty() && !used[f.id])
        .map(|f| f.id)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::exact;
    use crate::planarize::good_edges;

    fn polygon(pts: &[(i64, i64)]) -> Drawing {
        let mut d = Drawing::new(1);
        for (i, &(x, y)) in pts.iter().enumerate() {
            d.add_vertex(format!("p{i}"), exact(x, y));
        }
        for i in 0..pts.len() {
            d.add_edge(Edge::new(format!("s{i}"), format!("p{i}"), format!("p{}", (i + 1) % pts.len())));
        }
        d
    }

    #[test]
    fn triangle_is_fixpoint() {
        let d = polygon(&[(0, 0), (4, 0), (0, 4)]);
        assert_eq!(augment_to_good(&d).unwrap(), d);
    }

    #[test]
    fn pentagon_is_triangulated() {
        let d = polygon(&[(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]);
        let a = augment_to_good(&d).unwrap();
        let p = planarize(&a, Scope::All).unwrap();
        assert!(p.faces.iter().all(|f| !needs_split(&p, f)));
        let ge = good_edges(&a, &p).unwrap();
        assert!(ge.all_good());
        // two chords inside, two outside
        assert_eq!(a.edges.len() - d.edges.len(), 4);
        let inner = p.faces.iter().filter(|f| !f.is_outer && f.length() == 3).count();
        assert!(inner >= 3);
        assert!(homotopic_pairs(&a).unwrap().is_empty());
    }
}
