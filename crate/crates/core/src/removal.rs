//! Removal of edges from a plane triangulation, one at a time, with the
//! potential `τ` tracked per step.
//!
//! A triangulation is stored with half-edges `2e` (first endpoint to
//! second) and `2e + 1`, each triangle listing its three half-edges
//! counter-clockwise. Parallel edges are allowed, self-loops are not.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::drawing::UnionFind;
use crate::planarize::{walk_stats, FaceStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RemovalError {
    #[error("edge {0} is not present")]
    MissingEdge(usize),
    #[error("removing edge {0} would merge two faces that both lost edges already")]
    OrderViolation(usize),
    #[error("triangulations need at least four vertices, got {0}")]
    TooSmall(usize),
    #[error("face {0} has no removal count")]
    UnknownT(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    /// Vertices 0 and 1 are joined to every vertex of the path `2, …, n−1`
    /// and to each other.
    pub fn double_fan(n: usize) -> Result<Self, RemovalError> {
        if n < 4 {
            return Err(RemovalError::TooSmall(n));
        }
        let mut tris = vec![[0, 1, 2], [0, n - 1, 1]];
        for i in 2..n - 1 {
            tris.push([0, i, i + 1]);
            tris.push([1, i + 1, i]);
        }
        Ok(Self::from_vertex_triangles(n, &tris))
    }

    /// Builds a simple triangulation from counter-clockwise vertex triples.
    pub fn from_vertex_triangles(n: usize, tris: &[[usize; 3]]) -> Self {
        let mut edges = Vec::new();
        let mut id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut triangles = Vec::new();
        for t in tris {
            let mut hs = [0; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let e = *id.entry(key).or_insert_with(|| {
                    edges.push((a, b));
                    edges.len() - 1
                });
                hs[k] = if edges[e].0 == a { 2 * e } else { 2 * e + 1 };
            }
            triangles.push(hs);
        }
        Triangulation { n, edges, triangles }
    }

    /// Double fan followed by `flips` random flip attempts.
    pub fn random<R: Rng>(n: usize, flips: usize, rng: &mut R) -> Result<Self, RemovalError> {
        let mut t = Self::double_fan(n)?;
        for _ in 0..flips {
            let e = rng.gen_range(0..t.edges.len());
            t.flip(e);
        }
        Ok(t)
    }

    pub fn tail(&self, h: usize) -> usize {
        let (a, b) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(h ^ 1)
    }

    /// Triangle containing each half-edge, and the half-edge's slot in it.
    pub fn face_of(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); 2 * self.edges.len()];
        for (t, hs) in self.triangles.iter().enumerate() {
            for (k, &h) in hs.iter().enumerate() {
                out[h] = (t, k);
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Replaces edge `e` by the other diagonal of its two triangles. Refused
    /// (returning false) when that would create a self-loop or leave an
    /// endpoint with degree below two.
    pub fn flip(&mut self, e: usize) -> bool {
        let fo = self.face_of();
        let (t1, k1) = fo[2 * e];
        let (t2, k2) = fo[2 * e + 1];
        let h1 = self.triangles[t1];
        let h2 = self.triangles[t2];
        let (a, b) = self.edges[e];
        let bc = h1[(k1 + 1) % 3];
        let ca = h1[(k1 + 2) % 3];
        let ad = h2[(k2 + 1) % 3];
        let db = h2[(k2 + 2) % 3];
        let c = self.head(bc);
        let d = self.head(ad);
        if c == d || t1 == t2 || self.degree(a) < 3 || self.degree(b) < 3 {
            return false;
        }
        self.edges[e] = (c, d);
        self.triangles[t1] = [db, bc, 2 * e];
        self.triangles[t2] = [ca, ad, 2 * e + 1];
        true
    }

    pub fn euler_ok(&self) -> bool {
        self.n as i64 - self.edges.len() as i64 + self.triangles.len() as i64 == 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    C1a,
    C1b,
    C1c,
    C2a,
    C2b,
    #[serde(rename = "small-t1")]
    SmallT1,
    #[serde(rename = "small-t2")]
    SmallT2,
    #[serde(rename = "small-t3")]
    SmallT3,
}

#[derive(Debug, Clone, PartialEq)]
struct FaceState {
    t: usize,
    stats: FaceStats,
    occ: BTreeMap<usize, usize>,
    isolated: BTreeSet<usize>,
}

/// A crossing-free graph obtained from a triangulation by removing edges.
#[derive(Debug, Clone)]
pub struct RemovalState {
    pub tri: Triangulation,
    pub removed: Vec<bool>,
    face_of: Vec<(usize, usize)>,
    uf: UnionFind,
    faces: BTreeMap<usize, FaceState>,
}

fn weight(t: usize, stats: &FaceStats) -> Rational64 {
    match t {
        0 => Rational64::from_integer(0),
        1 => Rational64::new(8, 3),
        2 => Rational64::new(16, 3),
        _ => Rational64::from_integer(stats.lemma_term()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceRecord {
    /// Lowest triangle index in the face.
    pub face: usize,
    pub t: usize,
    pub stats: FaceStats,
}

impl RemovalState {
    pub fn new(tri: Triangulation) -> Self {
        let face_of = tri.face_of();
        let mut faces = BTreeMap::new();
        for (i, hs) in tri.triangles.iter().enumerate() {
            let mut occ = BTreeMap::new();
            for &h in hs {
                *occ.entry(tri.tail(h)).or_insert(0) += 1;
            }
            let m = occ.values().map(|c| c - 1).sum();
            faces.insert(
                i,
                FaceState {
                    t: 0,
                    stats: FaceStats { d: occ.len(), l: 3, m, i: 0, b: 1 },
                    occ,
                    isolated: BTreeSet::new(),
                },
            );
        }
        RemovalState {
            removed: vec![false; tri.edges.len()],
            uf: UnionFind::new(tri.triangles.len()),
            face_of,
            tri,
            faces,
        }
    }

    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    fn class(&mut self, triangle: usize) -> usize {
        self.uf.find(triangle)
    }

    /// Incrementally tracked faces, keyed by their lowest triangle.
    pub fn faces(&mut self) -> Vec<FaceRecord> {
        let mut out: BTreeMap<usize, FaceRecord> = BTreeMap::new();
        for tr in 0..self.tri.triangles.len() {
            let root = self.class(tr);
            out.entry(root).or_insert_with(|| FaceRecord {
                face: tr,
                t: self.faces[&root].t,
                stats: self.faces[&root].stats,
            });
        }
        out.into_values().collect()
    }

    pub fn tau(&mut self) -> Rational64 {
        self.faces()
            .iter()
            .map(|f| weight(f.t, &f.stats))
            .fold(Rational64::from_integer(0), |a, b| a + b)
    }

    /// Face statistics recomputed by tracing the facial walks of the
    /// remaining graph.
    pub fn recompute_stats(&mut self) -> BTreeMap<usize, FaceStats> {
        let tri = &self.tri;
        let nh = 2 * tri.edges.len();
        let tnext = |h: usize| {
            let (t, k) = self.face_of[h];
            tri.triangles[t][(k + 1) % 3]
        };
        let next = |h: usize| {
            let mut g = tnext(h);
            while self.removed[g / 2] {
                g = tnext(g ^ 1);
            }
            g
        };
        let mut walks: BTreeMap<usize, Vec<Vec<(usize, usize, usize)>>> = BTreeMap::new();
        let mut seen = vec![false; nh];
        for start in 0..nh {
            if seen[start] || self.removed[start / 2] {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                walk.push((tri.tail(h), tri.head(h), h / 2));
                h = next(h);
            }
            let root = self.uf.find(self.face_of[start].0);
            walks.entry(root).or_default().push(walk);
        }
        let mut isolated: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..tri.n {
            let incident: Vec<usize> = (0..nh).filter(|&h| tri.tail(h) == v).collect();
            if incident.iter().all(|&h| self.removed[h / 2]) {
                let root = self.uf.find(self.face_of[incident[0]].0);
                isolated.entry(root).or_default().push(v);
            }
        }
        let roots: BTreeSet<usize> = (0..tri.triangles.len()).map(|t| self.uf.find(t)).collect();
        roots
            .into_iter()
            .map(|r| {
                let w = walks.remove(&r).unwrap_or_default();
                let iso = isolated.remove(&r).unwrap_or_default();
                (r, walk_stats(&w, &iso))
            })
            .collect()
    }

    /// Removes edge `e`, classifying the step and returning the change in τ.
    pub fn remove_step(&mut self, e: usize) -> Result<(CaseLabel, Rational64), RemovalError> {
        if e >= self.removed.len() || self.removed[e] {
            return Err(RemovalError::MissingEdge(e));
        }
        let before = self.tau();
        let (t1, _) = self.face_of[2 * e];
        let (t2, _) = self.face_of[2 * e + 1];
        let r1 = self.class(t1);
        let r2 = self.class(t2);
        let (u, v) = self.tri.edges[e];
        let label;
        if r1 == r2 {
            let mut f = self.faces.remove(&r1).expect("face state");
            f.stats.l -= 2;
            f.stats.b -= 1;
            let mut newly_isolated = 0;
            for w in [u, v] {
                let c = f.occ.get_mut(&w).expect("endpoint on face");
                *c -= 1;
                if *c == 0 {
                    f.occ.remove(&w);
                    f.isolated.insert(w);
                    f.stats.i += 1;
                    newly_isolated += 1;
                } else {
                    f.stats.m -= 1;
                }
            }
            f.t += 1;
            label = match (f.t, newly_isolated) {
                (1, _) => CaseLabel::SmallT1,
                (2, _) => CaseLabel::SmallT2,
                (3, _) => CaseLabel::SmallT3,
                (_, 2) => CaseLabel::C1a,
                (_, 1) => CaseLabel::C1b,
                _ => CaseLabel::C1c,
            };
            self.faces.insert(r1, f);
        } else {
            let fa = &self.faces[&r1];
            let fb = &self.faces[&r2];
            if fa.t >= 1 && fb.t >= 1 {
                return Err(RemovalError::OrderViolation(e));
            }
            // the face with t = 0 is an untouched triangle
            let (big_root, small_root, small_tri, small_slot) = if fa.t == 0 {
                let (t, k) = self.face_of[2 * e];
                (r2, r1, t, k)
            } else {
                (r1, r2, t2, self.face_of[2 * e + 1].1)
            };
            let x = self
                .tri
                .head(self.tri.triangles[small_tri][(small_slot + 1) % 3]);
            self.faces.remove(&small_root);
            let mut f = self.faces.remove(&big_root).expect("face state");
            f.stats.l += 1;
            let on_face = f.occ.contains_key(&x);
            *f.occ.entry(x).or_insert(0) += 1;
            if on_face {
                f.stats.m += 1;
                f.stats.b += 1;
            } else {
                f.stats.d += 1;
            }
            f.t += 1;
            label = match f.t {
                1 => CaseLabel::SmallT1,
                2 => CaseLabel::SmallT2,
                3 => CaseLabel::SmallT3,
                _ if on_face => CaseLabel::C2b,
                _ => CaseLabel::C2a,
            };
            self.uf.union(r1, r2);
            let root = self.uf.find(r1);
            self.faces.insert(root, f);
        }
        self.removed[e] = true;
        let after = self.tau();
        Ok((label, after - before))
    }
}

/// Removal order from a breadth-first search over the dual edges of `r`,
/// one search per connected component, rooted at its lowest triangle.
pub fn bfs_removal_order(t: &Triangulation, r: &[usize]) -> Vec<usize> {
    let wanted: BTreeSet<usize> = r.iter().copied().collect();
    let fo = t.face_of();
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    for &e in &wanted {
        touched.insert(fo[2 * e].0);
        touched.insert(fo[2 * e + 1].0);
    }
    let mut visited = vec![false; t.triangles.len()];
    let mut done: BTreeSet<usize> = BTreeSet::new();
    let mut order = Vec::new();
    for &root in &touched {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &h in &t.triangles[x] {
                let e = h / 2;
                if !wanted.contains(&e) || done.contains(&e) {
                    continue;
                }
                done.insert(e);
                order.push(e);
                let y = fo[h ^ 1].0;
                if !visited[y] {
                    visited[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub edge: usize,
    pub endpoints: (usize, usize),
    pub label: CaseLabel,
    pub tau_before: String,
    pub tau_after: String,
    pub delta: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovalTrace {
    pub n: usize,
    pub k: usize,
    pub seed: Option<u64>,
    pub steps: Vec<Step>,
    pub final_tau: String,
    pub faces: Vec<FaceRecord>,
    /// τ never exceeded 8/3 times the number of removals so far.
    pub within_bound: bool,
}

/// Removes the edges of `r` in breadth-first order and records every step.
pub fn simulate(t: &Triangulation, r: &[usize], seed: Option<u64>) -> Result<(RemovalTrace, RemovalState), RemovalError> {
    let order = bfs_removal_order(t, r);
    let mut state = RemovalState::new(t.clone());
    let mut steps = Vec::new();
    let mut within = true;
    let mut tau = state.tau();
    for (j, &e) in order.iter().enumerate() {
        let (label, delta) = state.remove_step(e)?;
        let after = tau + delta;
        within &= after <= Rational64::new(8 * (j as i64 + 1), 3);
        steps.push(Step {
            edge: e,
            endpoints: t.edges[e],
            label,
            tau_before: tau.to_string(),
            tau_after: after.to_string(),
            delta: delta.to_string(),
        });
        tau = after;
    }
    let trace = RemovalTrace {
        n: t.n,
        k: order.len(),
        seed,
        steps,
        final_tau: tau.to_string(),
        faces: state.faces(),
        within_bound: within,
    };
    Ok((trace, state))
}

/// Random triangulation on `n` vertices with `k` random edges removed.
pub fn random_trace<R: Rng>(n: usize, k: usize, rng: &mut R, seed: Option<u64>) -> Result<(RemovalTrace, RemovalState), RemovalError> {
    let t = Triangulation::random(n, 4 * n, rng)?;
    let mut ids: Vec<usize> = (0..t.edges.len()).collect();
    let k = k.min(ids.len());
    for i in 0..k {
        let j = rng.gen_range(i..ids.len());
        ids.swap(i, j);
    }
    simulate(&t, &ids[..k], seed)
}

/// [`random_trace`] driven by a ChaCha generator seeded with `seed`.
pub fn seeded_trace(n: usize, k: usize, seed: u64) -> Result<(RemovalTrace, RemovalState), RemovalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_trace(n, k, &mut rng, Some(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eq3Report {
    pub n: usize,
    pub k: usize,
    /// `2|F¹| + 5|F²| + Σ_{t>2} (2d − 2m + 2i + 4b − 8)`
    pub eq4: i64,
    /// `Σ_{d(f)>3} (4d(f) − 8)`
    pub coarse: i64,
    /// `8k/3`
    pub tau_cap: String,
    /// `3n − 6 − k + eq4`
    pub edge_bound: i64,
    /// `7n − 14 − k`
    pub bookend: i64,
}

pub fn eq3_bound(faces: &[FaceRecord], n: usize, k: usize) -> Eq3Report {
    let mut eq4 = 0;
    let mut coarse = 0;
    for f in faces {
        eq4 += match f.t {
            0 => 0,
            1 => 2,
            2 => 5,
            _ => f.stats.lemma_term(),
        };
        if f.stats.d > 3 {
            coarse += 4 * f.stats.d as i64 - 8;
        }
    }
    let (n, k) = (n as i64, k as i64);
    Eq3Report {
        n: n as usize,
        k: k as usize,
        eq4,
        coarse,
        tau_cap: Rational64::new(8 * k, 3).to_string(),
        edge_bound: 3 * n - 6 - k + eq4,
        bookend: 7 * n - 14 - k,
    }
}

/// Maximiser over `k` of `min(3n − 6 + (w − 1)k, 7n − 14 − k)` and the
/// value there.
pub fn optimum(n: i64, w: Rational64) -> (Rational64, Rational64) {
    let k = Rational64::from_integer(4 * n - 8) / w;
    (k, Rational64::from_integer(7 * n - 14) - k)
}

impl RemovalTrace {
    pub fn to_json(&self) -> serde_json::Value {
        json!(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Triangulation {
        Triangulation::double_fan(4).unwrap()
    }

    #[test]
    fn double_fan_counts() {
        for n in 4..12 {
            let t = Triangulation::double_fan(n).unwrap();
            assert_eq!(t.edges.len(), 3 * n - 6);
            assert_eq!(t.triangles.len(), 2 * n - 4);
            assert!(t.euler_ok());
            let mut s = RemovalState::new(t);
            for st in s.recompute_stats().values() {
                assert_eq!((st.d, st.l, st.m, st.i, st.b), (3, 3, 0, 0, 1));
            }
        }
    }

    #[test]
    fn single_edge_order_and_first_step() {
        let t = k4();
        assert_eq!(bfs_removal_order(&t, &[3]), vec![3]);
        let mut s = RemovalState::new(t);
        let (label, delta) = s.remove_step(0).unwrap();
        assert_eq!(label, CaseLabel::SmallT1);
        assert_eq!(delta, Rational64::new(8, 3));
        let f = s.faces().into_iter().find(|f| f.t == 1).unwrap();
        assert_eq!(f.stats.tuple(), (4, 0, 0, 1));
        assert_eq!(s.tau(), Rational64::new(8, 3));
    }

    #[test]
    fn order_violation_is_reported() {
        let t = Triangulation::double_fan(6).unwrap();
        let mut s = RemovalState::new(t.clone());
        let fo = t.face_of();
        // two disjoint pairs of triangles, then the edge between them
        let mut picked = None;
        'outer: for a in 0..t.edges.len() {
            for b in 0..t.edges.len() {
                let fa = [fo[2 * a].0, fo[2 * a + 1].0];
                let fb = [fo[2 * b].0, fo[2 * b + 1].0];
                if fa.iter().any(|x| fb.contains(x)) {
                    continue;
                }
                for c in 0..t.edges.len() {
                    let fc = [fo[2 * c].0, fo[2 * c + 1].0];
                    if fc.iter().any(|x| fa.contains(x)) && fc.iter().any(|x| fb.contains(x)) {
                        picked = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let (a, b, c) = picked.unwrap();
        s.remove_step(a).unwrap();
        s.remove_step(b).unwrap();
        assert_eq!(s.remove_step(c), Err(RemovalError::OrderViolation(c)));
    }

    #[test]
    fn optimum_points() {
        let (k, v) = optimum(10, Rational64::from_integer(8));
        assert_eq!((k, v), (Rational64::from_integer(4), Rational64::from_integer(52)));
        let (k, v) = optimum(10, Rational64::new(8, 3));
        assert_eq!((k, v), (Rational64::from_integer(12), Rational64::from_integer(44)));
    }

    #[test]
    fn untouched_triangulation_has_zero_potential() {
        let t = Triangulation::double_fan(7).unwrap();
        let (trace, mut state) = simulate(&t, &[], None).unwrap();
        assert_eq!(trace.final_tau, "0");
        let r = eq3_bound(&state.faces(), 7, 0);
        assert_eq!((r.eq4, r.coarse), (0, 0));
    }
}
