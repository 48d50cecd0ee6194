//! Planarizations: every crossing becomes a degree-4 dummy node, the
//! rotation at each node is read off the geometry, and faces are traced
//! combinatorially from the rotation system.
//!
//! Half-edges are numbered `2 * arc` (tail to head) and `2 * arc + 1`
//! (head to tail). The face of a half-edge lies to its left; bounded faces
//! are therefore traced counter-clockwise.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::drawing::{scan, Drawing, UnionFind, ViolationKind};
use crate::geom::{self, cmp_around, signed_area2, winding_number, Coord, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanarizeError {
    #[error("three or more edges cross in one point: {0}")]
    TriplePoint(String),
    #[error("overlapping segments: {0}")]
    OverlappingSegments(String),
    #[error("degenerate drawing: {0}")]
    Degenerate(String),
    #[error("inconsistent face structure: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Every edge of the drawing (G′).
    All,
    /// Only edges with at least one crossing (G₁′).
    Crossed,
    /// Only crossing-free edges, on all vertices (G₀).
    CrossingFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NodeKind {
    Real { vertex: usize },
    Dummy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub point: Point,
}

impl Node {
    pub fn is_dummy(&self) -> bool {
        self.kind == NodeKind::Dummy
    }
}

/// A piece of a drawing edge between two consecutive nodes along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    /// Index into the drawing's edge list.
    pub edge: usize,
    pub piece: usize,
    /// Tail point, interior bend points, head point.
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: usize,
    /// Facial walks as cyclic half-edge sequences.
    pub walks: Vec<Vec<usize>>,
    pub isolated_nodes: Vec<usize>,
    pub is_outer: bool,
}

impl Face {
    /// Total walk length (edges counted with multiplicity).
    pub fn length(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    pub fn half_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.walks.iter().flatten().copied()
    }
}

#[derive(Debug, Clone)]
pub struct Planarization {
    pub scope: Scope,
    pub nodes: Vec<Node>,
    pub arcs: Vec<Arc>,
    /// Counter-clockwise order of outgoing half-edges at every node.
    pub rotation: Vec<Vec<usize>>,
    pub faces: Vec<Face>,
    /// Face to the left of each half-edge.
    pub face_of: Vec<usize>,
    /// Node of each drawing vertex, if the vertex is in scope.
    pub vertex_node: Vec<Option<usize>>,
    /// Per drawing edge: included in this planarization.
    pub included: Vec<bool>,
    /// Per drawing edge: has at least one crossing in the full drawing.
    pub crossed: Vec<bool>,
    pos_in_rotation: Vec<usize>,
}

pub fn twin(h: usize) -> usize {
    h ^ 1
}

pub fn arc_of(h: usize) -> usize {
    h / 2
}

impl Planarization {
    pub fn tail(&self, h: usize) -> usize {
        let a = &self.arcs[arc_of(h)];
        if h.is_multiple_of(2) {
            a.tail
        } else {
            a.head
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(twin(h))
    }

    /// Geometry of a half-edge in its direction of travel.
    pub fn he_points(&self, h: usize) -> Vec<Point> {
        let mut pts = self.arcs[arc_of(h)].points.clone();
        if h % 2 == 1 {
            pts.reverse();
        }
        pts
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.arcs.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.rotation[node].len()
    }

    /// Next half-edge along the face to the left of `h`.
    pub fn next(&self, h: usize) -> usize {
        let t = twin(h);
        let v = self.tail(t);
        let rot = &self.rotation[v];
        let pos = self.pos_in_rotation[t];
        rot[(pos + rot.len() - 1) % rot.len()]
    }

    /// Connected component label of every node.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.nodes.len());
        for a in &self.arcs {
            uf.union(a.tail, a.head);
        }
        (0..self.nodes.len()).map(|v| uf.find(v)).collect()
    }

    pub fn component_count(&self) -> usize {
        let c = self.components();
        c.iter().collect::<BTreeSet<_>>().len()
    }

    /// `|nodes| - |arcs| + |faces| - (1 + #components)`; zero for a
    /// consistent plane structure.
    pub fn euler_defect(&self) -> i64 {
        self.nodes.len() as i64 - self.arcs.len() as i64 + self.faces.len() as i64
            - 1
            - self.component_count() as i64
    }

    pub fn dummy_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_dummy()).count()
    }

    /// Closed polygon traced by a walk.
    pub fn walk_polygon(&self, walk: &[usize]) -> Vec<Point> {
        let mut poly = Vec::new();
        for &h in walk {
            let pts = self.he_points(h);
            poly.extend(pts[..pts.len() - 1].iter().cloned());
        }
        poly
    }

    /// Face containing a point that lies on no arc and no node.
    pub fn locate(&self, p: &Point) -> usize {
        for f in &self.faces {
            if f.is_outer {
                continue;
            }
            let wn: i32 = f
                .walks
                .iter()
                .map(|w| winding_number(&self.walk_polygon(w), p))
                .sum();
            if wn == 1 {
                return f.id;
            }
        }
        self.outer_face()
    }

    pub fn outer_face(&self) -> usize {
        self.faces
            .iter()
            .position(|f| f.is_outer)
            .expect("planarization has an outer face")
    }

    /// Distinct drawing edges appearing on the boundary of a face.
    pub fn face_edges(&self, f: usize) -> BTreeSet<usize> {
        self.faces[f]
            .half_edges()
            .map(|h| self.arcs[arc_of(h)].edge)
            .collect()
    }

    pub fn to_json(&self, d: &Drawing) -> serde_json::Value {
        serde_json::json!({
            "scope": self.scope,
            "nodes": self.nodes.iter().map(|n| serde_json::json!({
                "id": n.id,
                "kind": if n.is_dummy() { "dummy" } else { "real" },
                "vertex": match n.kind { NodeKind::Real { vertex } => Some(d.vertices[vertex].id.clone()), NodeKind::Dummy => None },
                "x": n.point.x.to_string(),
                "y": n.point.y.to_string(),
                "degree": self.degree(n.id),
            })).collect::<Vec<_>>(),
            "arcs": self.arcs.iter().map(|a| serde_json::json!({
                "id": a.id,
                "tail": a.tail,
                "head": a.head,
                "edge": d.edges[a.edge].id,
                "piece": a.piece,
            })).collect::<Vec<_>>(),
            "rotation": self.rotation,
            "faces": self.faces.iter().map(|f| serde_json::json!({
                "id": f.id,
                "outer": f.is_outer,
                "walks": f.walks.iter().map(|w| w.iter().map(|&h| serde_json::json!([arc_of(h), if h % 2 == 0 { "+" } else { "-" }])).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "isolated_nodes": f.isolated_nodes,
            })).collect::<Vec<_>>(),
        })
    }
}

enum Item {
    Node(usize),
    Bend(Point),
}

/// Builds the planarization of the edges selected by `scope`.
pub fn planarize(d: &Drawing, scope: Scope) -> Result<Planarization, PlanarizeError> {
    let full = scan(d, &|_| true, geom::DEFAULT_EPSILON);
    for v in &full.violations {
        match v.kind {
            ViolationKind::TriplePoint => {
                return Err(PlanarizeError::TriplePoint(v.details.clone()))
            }
            ViolationKind::Overlap => {
                return Err(PlanarizeError::OverlappingSegments(v.details.clone()))
            }
            ViolationKind::EdgeThroughVertex | ViolationKind::SelfIntersection => {
                return Err(PlanarizeError::Degenerate(v.details.clone()))
            }
            _ => {}
        }
    }
    let mut crossed = vec![false; d.edges.len()];
    for c in &full.crossings {
        crossed[c.edge_a] = true;
        crossed[c.edge_b] = true;
    }
    let included: Vec<bool> = (0..d.edges.len())
        .map(|e| match scope {
            Scope::All => true,
            Scope::Crossed => crossed[e],
            Scope::CrossingFree => !crossed[e],
        })
        .collect();
    let ends = d.endpoints();

    let mut nodes = Vec::new();
    let mut vertex_node = vec![None; d.vertices.len()];
    let mut wanted = vec![scope != Scope::Crossed; d.vertices.len()];
    for (e, &(a, b)) in ends.iter().enumerate() {
        if included[e] {
            wanted[a] = true;
            wanted[b] = true;
        }
    }
    for (i, v) in d.vertices.iter().enumerate() {
        if wanted[i] {
            vertex_node[i] = Some(nodes.len());
            nodes.push(Node {
                id: nodes.len(),
                kind: NodeKind::Real { vertex: i },
                point: v.point.clone(),
            });
        }
    }

    // dummies, and per (edge, segment) the crossing nodes on it
    let mut on_segment: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for c in full
        .crossings
        .iter()
        .filter(|c| included[c.edge_a] && included[c.edge_b])
    {
        let id = nodes.len();
        nodes.push(Node {
            id,
            kind: NodeKind::Dummy,
            point: c.point.clone(),
        });
        on_segment.entry((c.edge_a, c.seg_a)).or_default().push(id);
        on_segment.entry((c.edge_b, c.seg_b)).or_default().push(id);
    }

    let mut arcs: Vec<Arc> = Vec::new();
    for e in (0..d.edges.len()).filter(|&e| included[e]) {
        let poly = d.polyline(e);
        let mut items = vec![Item::Node(vertex_node[ends[e].0].unwrap())];
        for k in 0..poly.len() - 1 {
            if let Some(list) = on_segment.get(&(e, k)) {
                let (p, q) = (&poly[k], &poly[k + 1]);
                let forward = p.lex_cmp(q) == Ordering::Less;
                let mut list = list.clone();
                list.sort_by(|&a, &b| {
                    let o = nodes[a].point.lex_cmp(&nodes[b].point);
                    if forward {
                        o
                    } else {
                        o.reverse()
                    }
                });
                items.extend(list.into_iter().map(Item::Node));
            }
            if k + 1 < poly.len() - 1 {
                items.push(Item::Bend(poly[k + 1].clone()));
            }
        }
        items.push(Item::Node(vertex_node[ends[e].1].unwrap()));

        let mut piece = 0;
        let mut current: Option<(usize, Vec<Point>)> = None;
        for item in items {
            match item {
                Item::Bend(p) => current.as_mut().expect("starts at a node").1.push(p),
                Item::Node(n) => {
                    if let Some((tail, mut pts)) = current.take() {
                        pts.push(nodes[n].point.clone());
                        arcs.push(Arc {
                            id: arcs.len(),
                            tail,
                            head: n,
                            edge: e,
                            piece,
                            points: pts,
                        });
                        piece += 1;
                    }
                    current = Some((n, vec![nodes[n].point.clone()]));
                }
            }
        }
    }

    let mut p = Planarization {
        scope,
        nodes,
        arcs,
        rotation: Vec::new(),
        faces: Vec::new(),
        face_of: Vec::new(),
        vertex_node,
        included,
        crossed,
        pos_in_rotation: Vec::new(),
    };
    build_rotation(&mut p)?;
    build_faces(&mut p)?;
    Ok(p)
}

fn build_rotation(p: &mut Planarization) -> Result<(), PlanarizeError> {
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); p.nodes.len()];
    for h in 0..p.half_edge_count() {
        rotation[p.tail(h)].push(h);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        let c = &p.nodes[v].point;
        let dir: HashMap<usize, Point> = rot.iter().map(|&h| (h, p.he_points(h)[1].clone())).collect();
        rot.sort_by(|a, b| cmp_around(c, &dir[a], &dir[b]).then(a.cmp(b)));
        for w in rot.windows(2) {
            if cmp_around(c, &dir[&w[0]], &dir[&w[1]]) == Ordering::Equal {
                return Err(PlanarizeError::OverlappingSegments(format!(
                    "two pieces leave node {v} in the same direction"
                )));
            }
        }
    }
    let mut pos = vec![0; p.half_edge_count()];
    for rot in &rotation {
        for (i, &h) in rot.iter().enumerate() {
            pos[h] = i;
        }
    }
    p.rotation = rotation;
    p.pos_in_rotation = pos;
    Ok(())
}

fn build_faces(p: &mut Planarization) -> Result<(), PlanarizeError> {
    let nh = p.half_edge_count();
    let mut seen = vec![false; nh];
    let mut walks: Vec<Vec<usize>> = Vec::new();
    for start in 0..nh {
        if seen[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            walk.push(h);
            h = p.next(h);
        }
        if h != start {
            return Err(PlanarizeError::Inconsistent(format!(
                "walk from half-edge {start} does not close"
            )));
        }
        walks.push(walk);
    }

    let comp = p.components();
    let areas: Vec<Coord> = walks.iter().map(|w| signed_area2(&p.walk_polygon(w))).collect();
    let polys: Vec<Vec<Point>> = walks.iter().map(|w| p.walk_polygon(w)).collect();
    let mut outer_walk: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bounded: Vec<usize> = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        let c = comp[p.tail(w[0])];
        if areas[i].signum() > 0 {
            bounded.push(i);
        } else if outer_walk.insert(c, i).is_some() {
            return Err(PlanarizeError::Inconsistent(format!(
                "component {c} has more than one outer walk"
            )));
        }
    }

    // face 0 is the unbounded face; walk i in `bounded` becomes face 1 + rank
    let mut faces = vec![Face {
        id: 0,
        walks: Vec::new(),
        isolated_nodes: Vec::new(),
        is_outer: true,
    }];
    let mut face_of_walk: HashMap<usize, usize> = HashMap::new();
    for &w in &bounded {
        face_of_walk.insert(w, faces.len());
        faces.push(Face {
            id: faces.len(),
            walks: vec![walks[w].clone()],
            isolated_nodes: Vec::new(),
            is_outer: false,
        });
    }

    let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..p.nodes.len() {
        reps.entry(comp[v]).or_insert(v);
    }
    for (&c, &rep) in &reps {
        let pt = &p.nodes[rep].point;
        let mut best: Option<usize> = None;
        for &w in &bounded {
            if comp[p.tail(walks[w][0])] == c || winding_number(&polys[w], pt) == 0 {
                continue;
            }
            best = match best {
                Some(b) if areas[b] <= areas[w] => Some(b),
                _ => Some(w),
            };
        }
        let target = best.map(|w| face_of_walk[&w]).unwrap_or(0);
        match outer_walk.get(&c) {
            Some(&w) => faces[target].walks.push(walks[w].clone()),
            None => faces[target].isolated_nodes.push(rep),
        }
    }

    let mut face_of = vec![usize::MAX; nh];
    for f in &faces {
        for h in f.half_edges() {
            face_of[h] = f.id;
        }
    }
    p.faces = faces;
    p.face_of = face_of;
    if p.euler_defect() != 0 {
        return Err(PlanarizeError::Inconsistent(format!(
            "Euler defect {}",
            p.euler_defect()
        )));
    }
    Ok(())
}

/// Per-face counts: distinct vertices `d`, total walk length `l`, extra
/// occurrences `m`, isolated vertices `i` and biconnected components `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FaceStats {
    pub d: usize,
    pub l: usize,
    pub m: usize,
    pub i: usize,
    pub b: usize,
}

impl FaceStats {
    /// `(d, m, i, b)`
    pub fn tuple(&self) -> (usize, usize, usize, usize) {
        (self.d, self.m, self.i, self.b)
    }

    /// `2d - 2m + 2i + 4b - 8`
    pub fn lemma_term(&self) -> i64 {
        2 * self.d as i64 - 2 * self.m as i64 + 2 * self.i as i64 + 4 * self.b as i64 - 8
    }
}

/// Statistics of a face given as node-level walks and isolated nodes. Each
/// walk lists `(tail node, edge key)` per step; edge keys identify edges of
/// the underlying multigraph.
pub fn walk_stats(walks: &[Vec<(usize, usize, usize)>], isolated: &[usize]) -> FaceStats {
    let mut occ: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edges: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut l = 0;
    for w in walks {
        for &(tail, head, key) in w {
            *occ.entry(tail).or_default() += 1;
            edges.insert(key, (tail, head));
            l += 1;
        }
    }
    let d = occ.len() + isolated.len();
    let m = occ.values().map(|c| c - 1).sum();
    let list: Vec<(usize, usize)> = edges.into_values().collect();
    FaceStats {
        d,
        l,
        m,
        i: isolated.len(),
        b: count_blocks(&list),
    }
}

pub fn face_stats(p: &Planarization, f: &Face) -> FaceStats {
    let walks: Vec<Vec<(usize, usize, usize)>> = f
        .walks
        .iter()
        .map(|w| w.iter().map(|&h| (p.tail(h), p.head(h), arc_of(h))).collect())
        .collect();
    walk_stats(&walks, &f.isolated_nodes)
}

/// Biconnected components (blocks) of a multigraph given as an edge list.
/// Bridges and self-loops each count as one block; isolated vertices are
/// not blocks.
pub fn count_blocks(edges: &[(usize, usize)]) -> usize {
    block_partition(edges).len()
}

/// Blocks as lists of edge indices.
pub fn block_partition(edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            blocks.push(vec![i]);
            continue;
        }
        adj.entry(a).or_default().push((b, i));
        adj.entry(b).or_default().push((a, i));
    }
    let mut disc: HashMap<usize, usize> = HashMap::new();
    let mut low: HashMap<usize, usize> = HashMap::new();
    let mut timer = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let roots: Vec<usize> = adj.keys().copied().collect();
    for root in roots {
        if disc.contains_key(&root) {
            continue;
        }
        disc.insert(root, timer);
        low.insert(root, timer);
        timer += 1;
        // (vertex, edge used to enter, next neighbour index)
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
            let nbrs = &adj[&v];
            if *idx < nbrs.len() {
                let (w, e) = nbrs[*idx];
                *idx += 1;
                if Some(e) == via {
                    continue;
                }
                if let Some(&dw) = disc.get(&w) {
                    if dw < disc[&v] {
                        edge_stack.push(e);
                        let lv = low[&v].min(dw);
                        low.insert(v, lv);
                    }
                } else {
                    edge_stack.push(e);
                    disc.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    stack.push((w, Some(e), 0));
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    let lv = low[&v];
                    if lv < low[&u] {
                        low.insert(u, lv);
                    }
                    if lv >= disc[&u] {
                        let e = via.expect("non-root has an entry edge");
                        let mut block = Vec::new();
                        while let Some(x) = edge_stack.pop() {
                            block.push(x);
                            if x == e {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Faces obtainable from a triangulation by removing `t` edges, `t = 1..3`,
/// as `(t, (d, m, i, b))`.
pub fn small_face_catalogue() -> Vec<(usize, (usize, usize, usize, usize))> {
    vec![
        (1, (4, 0, 0, 1)),
        (1, (3, 1, 0, 2)),
        (2, (5, 0, 0, 1)),
        (2, (4, 1, 0, 2)),
        (2, (3, 0, 1, 1)),
        (3, (6, 0, 0, 1)),
        (3, (5, 1, 0, 2)),
        (3, (4, 0, 1, 1)),
        (3, (4, 2, 0, 3)),
        (3, (4, 2, 0, 3)),
        (3, (4, 2, 0, 3)),
    ]
}

/// Relation between the full planarization G′ and the crossing-free
/// subdrawing G₀: which G₀ face every G′ face lies in.
#[derive(Debug, Clone)]
pub struct Overlay {
    pub g0: Planarization,
    /// G′ face id to G₀ face id.
    pub face_map: Vec<usize>,
}

pub fn overlay(d: &Drawing, p_all: &Planarization) -> Result<Overlay, PlanarizeError> {
    let g0 = planarize(d, Scope::CrossingFree)?;
    let mut g0_arc_of_edge: HashMap<usize, usize> = HashMap::new();
    for a in &g0.arcs {
        g0_arc_of_edge.insert(a.edge, a.id);
    }
    let nf = p_all.faces.len();
    let mut uf = UnionFind::new(nf);
    let mut direct: Vec<Option<usize>> = vec![None; nf];
    for h in 0..p_all.half_edge_count() {
        let arc = &p_all.arcs[arc_of(h)];
        let f = p_all.face_of[h];
        if p_all.crossed[arc.edge] {
            uf.union(f, p_all.face_of[twin(h)]);
        } else {
            let g0h = 2 * g0_arc_of_edge[&arc.edge] + (h % 2);
            direct[f] = Some(g0.face_of[g0h]);
        }
    }
    let mut class_face: HashMap<usize, usize> = HashMap::new();
    for f in 0..nf {
        if let Some(g) = direct[f] {
            class_face.insert(uf.find(f), g);
        }
    }
    let fallback = g0.outer_face();
    let face_map = (0..nf)
        .map(|f| {
            direct[f]
                .or_else(|| class_face.get(&uf.find(f)).copied())
                .unwrap_or(fallback)
        })
        .collect();
    Ok(Overlay { g0, face_map })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceGoodness {
    /// G₀ face id.
    pub face: usize,
    /// `(edge index, good)` for every crossing-free edge on the face.
    pub edges: Vec<(usize, bool)>,
    pub is_triangle: bool,
    pub good: bool,
}

#[derive(Debug, Clone)]
pub struct GoodEdges {
    pub overlay: Overlay,
    pub faces: Vec<FaceGoodness>,
}

impl GoodEdges {
    pub fn all_good(&self) -> bool {
        self.faces.iter().all(|f| f.good)
    }
}

/// Simple triangle: one walk of three distinct nodes, nothing isolated.
pub fn is_triangle(p: &Planarization, f: &Face) -> bool {
    let w: Vec<usize> = f.half_edges().filter(|&h| !is_loop_arc(p, arc_of(h))).collect();
    f.walks.len() == 1
        && f.isolated_nodes.is_empty()
        && w.len() == 3
        && w.iter().map(|&h| p.tail(h)).collect::<BTreeSet<_>>().len() == 3
}

/// Arc that starts and ends at the same node. Crossing-free self-loops
/// separate the drawing into an inside and an outside that are treated
/// independently, so they are skipped when judging faces.
pub fn is_loop_arc(p: &Planarization, a: usize) -> bool {
    p.arcs[a].tail == p.arcs[a].head
}

/// An edge of a G₀ face is good when no G′ face inside that face touches it
/// together with another crossing-free edge. The unbounded G₀ face is
/// handled like any other face.
pub fn good_edges(d: &Drawing, p_all: &Planarization) -> Result<GoodEdges, PlanarizeError> {
    let ov = overlay(d, p_all)?;
    let g0 = &ov.g0;
    let mut bad: BTreeSet<(usize, usize)> = BTreeSet::new();
    for g in &p_all.faces {
        let e0: BTreeSet<usize> = g
            .half_edges()
            .filter(|&h| !is_loop_arc(p_all, arc_of(h)))
            .map(|h| p_all.arcs[arc_of(h)].edge)
            .filter(|&e| !p_all.crossed[e])
            .collect();
        if e0.len() >= 2 {
            let f = ov.face_map[g.id];
            for e in e0 {
                bad.insert((f, e));
            }
        }
    }
    let faces = g0
        .faces
        .iter()
        .map(|f| {
            let edges: Vec<(usize, bool)> = g0
                .face_edges(f.id)
                .into_iter()
                .map(|e| (e, !bad.contains(&(f.id, e))))
                .collect();
            let tri = is_triangle(g0, f);
            let good = tri || edges.iter().all(|&(_, ok)| ok);
            FaceGoodness {
                face: f.id,
                edges,
                is_triangle: tri,
                good,
            }
        })
        .collect();
    Ok(GoodEdges { overlay: ov, faces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{exact, Edge};

    fn x_pair() -> Drawing {
        let mut d = Drawing::new(1);
        d.add_vertex("a", exact(0, 0))
            .add_vertex("b", exact(2, 2))
            .add_vertex("c", exact(0, 2))
            .add_vertex("d", exact(2, 0));
        d.add_edge(Edge::new("ab", "a", "b"))
            .add_edge(Edge::new("cd", "c", "d"));
        d
    }

    #[test]
    fn x_pair_star() {
        let p = planarize(&x_pair(), Scope::Crossed).unwrap();
        assert_eq!(p.nodes.len(), 5);
        assert_eq!(p.arcs.len(), 4);
        assert_eq!(p.faces.len(), 1);
        assert_eq!(p.faces[0].length(), 8);
        assert_eq!(p.dummy_count(), 1);
        let dummy = p.nodes.iter().find(|n| n.is_dummy()).unwrap();
        assert_eq!(p.degree(dummy.id), 4);
        assert_eq!(p.euler_defect(), 0);
    }

    #[test]
    fn triangle_faces() {
        let mut d = Drawing::new(1);
        d.add_vertex("a", exact(0, 0))
            .add_vertex("b", exact(4, 0))
            .add_vertex("c", exact(0, 4));
        d.add_edge(Edge::new("ab", "a", "b"))
            .add_edge(Edge::new("bc", "b", "c"))
            .add_edge(Edge::new("ca", "c", "a"));
        let p = planarize(&d, Scope::All).unwrap();
        assert_eq!((p.nodes.len(), p.arcs.len(), p.faces.len()), (3, 3, 2));
        for f in &p.faces {
            assert_eq!(f.length(), 3);
            let s = face_stats(&p, f);
            assert_eq!((s.d, s.l, s.m, s.i, s.b), (3, 3, 0, 0, 1));
            assert!(is_triangle(&p, f));
        }
        let bounded = p.faces.iter().find(|f| !f.is_outer).unwrap();
        assert_eq!(p.locate(&exact(1, 1)), bounded.id);
        assert_eq!(p.locate(&exact(5, 5)), p.outer_face());
    }

    #[test]
    fn pentagon_with_dangling_edge() {
        let mut d = Drawing::new(1);
        let pts = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)];
        for (i, &(x, y)) in pts.iter().enumerate() {
            d.add_vertex(format!("p{i}"), exact(x, y));
        }
        d.add_vertex("t", exact(2, 2));
        for i in 0..5 {
            d.add_edge(Edge::new(format!("s{i}"), format!("p{i}"), format!("p{}", (i + 1) % 5)));
        }
        d.add_edge(Edge::new("br", "p0", "t"));
        let p = planarize(&d, Scope::All).unwrap();
        let inner = p.faces.iter().find(|f| !f.is_outer).unwrap();
        let s = face_stats(&p, inner);
        assert_eq!((s.d, s.l, s.m, s.i, s.b), (6, 7, 1, 0, 2));
    }

    #[test]
    fn nested_components_share_a_face() {
        let mut d = Drawing::new(1);
        for (id, x, y) in [("a", 0, 0), ("b", 10, 0), ("c", 0, 10), ("u", 2, 2), ("v", 3, 2), ("z", 4, 4)] {
            d.add_vertex(id, exact(x, y));
        }
        d.add_edge(Edge::new("ab", "a", "b"))
            .add_edge(Edge::new("bc", "b", "c"))
            .add_edge(Edge::new("ca", "c", "a"))
            .add_edge(Edge::new("uv", "u", "v"));
        let p = planarize(&d, Scope::All).unwrap();
        assert_eq!(p.faces.len(), 2);
        let inner = p.faces.iter().find(|f| !f.is_outer).unwrap();
        assert_eq!(inner.walks.len(), 2);
        assert_eq!(inner.isolated_nodes.len(), 1);
        let s = face_stats(&p, inner);
        assert_eq!((s.d, s.l, s.m, s.i, s.b), (6, 5, 0, 1, 2));
        assert_eq!(s.l + s.i, s.d + s.m);
    }

    #[test]
    fn blocks_of_small_graphs() {
        assert_eq!(count_blocks(&[]), 0);
        assert_eq!(count_blocks(&[(0, 1)]), 1);
        assert_eq!(count_blocks(&[(0, 1), (1, 2), (2, 0)]), 1);
        // bowtie
        assert_eq!(count_blocks(&[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]), 2);
        // parallel pair is one block, a loop is its own
        assert_eq!(count_blocks(&[(0, 1), (0, 1), (1, 1)]), 2);
        // path of three edges
        assert_eq!(count_blocks(&[(0, 1), (1, 2), (2, 3)]), 3);
    }

    #[test]
    fn catalogue_shapes() {
        let cat = small_face_catalogue();
        assert_eq!(cat.len(), 11);
        assert_eq!(cat[0], (1, (4, 0, 0, 1)));
        assert_eq!(cat[4], (2, (3, 0, 1, 1)));
        for (t, (d, m, i, b)) in cat {
            let s = FaceStats { d, l: d + m - i, m, i, b };
            if t == 3 {
                assert!(s.lemma_term() <= 8);
            }
        }
    }
}
