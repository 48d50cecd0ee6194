//! Polyline drawings, their JSON form, RAC validation and the split of the
//! edge set into crossing-free and crossed edges.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    self, in_segment_interior, intersect, is_right_angle, Coord, GeomError, IntersectionKind,
    Point, Segment,
};

#[derive(Debug, Error)]
pub enum DrawingError {
    #[error("malformed drawing JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Coord(#[from] GeomError),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("vertices `{0}` and `{1}` share a point")]
    DuplicatePoint(String, String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{0}` references unknown vertex `{1}`")]
    UnknownVertex(String, String),
    #[error("edge `{0}` is a self-loop but not auxiliary")]
    SelfLoop(String),
    #[error("edge `{0}` has a bend on a vertex point")]
    BendOnVertex(String),
    #[error("edge `{0}` repeats a polyline point")]
    RepeatedPoint(String),
    #[error("drawing is not a valid RAC drawing ({0} violations)")]
    InvalidDrawing(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub source: String,
    pub target: String,
    pub bends: Vec<Point>,
    /// Crossing-free helper edge inserted by augmentation; exempt from the
    /// bend limit and the only kind of edge allowed to be a self-loop.
    pub auxiliary: bool,
}

impl Edge {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Edge {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            bends: Vec::new(),
            auxiliary: false,
        }
    }

    pub fn with_bend(mut self, bend: Point) -> Self {
        self.bends.push(bend);
        self
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A polyline drawing with at most `bend_limit` bends on every non-auxiliary
/// edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Drawing {
    pub bend_limit: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct RawVertex {
    id: String,
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    id: String,
    source: String,
    target: String,
    #[serde(default)]
    bends: Vec<RawPoint>,
    #[serde(default)]
    auxiliary: bool,
}

#[derive(Serialize, Deserialize)]
struct RawDrawing {
    bend_limit: usize,
    vertices: Vec<RawVertex>,
    edges: Vec<RawEdge>,
}

fn parse_point(x: &str, y: &str) -> Result<Point, GeomError> {
    Ok(Point::new(x.parse()?, y.parse()?))
}

impl Drawing {
    pub fn new(bend_limit: usize) -> Self {
        Drawing {
            bend_limit,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, point: Point) -> &mut Self {
        self.vertices.push(Vertex {
            id: id.into(),
            point,
        });
        self
    }

    pub fn add_edge(&mut self, edge: Edge) -> &mut Self {
        self.edges.push(edge);
        self
    }

    pub fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Endpoint vertex indices of every edge. Panics on unknown ids; call
    /// [`Drawing::check_structure`] first on untrusted input.
    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        let idx = self.vertex_index();
        self.edges
            .iter()
            .map(|e| (idx[e.source.as_str()], idx[e.target.as_str()]))
            .collect()
    }

    /// Full polyline of an edge: source, bends, target.
    pub fn polyline(&self, e: usize) -> Vec<Point> {
        let idx = self.vertex_index();
        let edge = &self.edges[e];
        let mut pts = Vec::with_capacity(edge.bends.len() + 2);
        pts.push(self.vertices[idx[edge.source.as_str()]].point.clone());
        pts.extend(edge.bends.iter().cloned());
        pts.push(self.vertices[idx[edge.target.as_str()]].point.clone());
        pts
    }

    pub fn segments(&self, e: usize) -> Vec<Segment> {
        self.polyline(e)
            .windows(2)
            .map(|w| Segment {
                p: w[0].clone(),
                q: w[1].clone(),
            })
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.vertices.iter().all(|v| v.point.is_exact())
            && self
                .edges
                .iter()
                .all(|e| e.bends.iter().all(Point::is_exact))
    }

    /// Structural invariants: unique ids, distinct vertex points, known
    /// endpoints, no bend on a vertex point, no repeated consecutive points,
    /// self-loops only on auxiliary edges.
    pub fn check_structure(&self) -> Result<(), DrawingError> {
        let mut ids = HashSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.as_str()) {
                return Err(DrawingError::DuplicateVertex(v.id.clone()));
            }
        }
        let mut by_point: Vec<&Vertex> = self.vertices.iter().collect();
        by_point.sort_by(|a, b| a.point.lex_cmp(&b.point));
        for w in by_point.windows(2) {
            if w[0].point == w[1].point {
                return Err(DrawingError::DuplicatePoint(w[0].id.clone(), w[1].id.clone()));
            }
        }
        let mut eids = HashSet::new();
        for e in &self.edges {
            if !eids.insert(e.id.as_str()) {
                return Err(DrawingError::DuplicateEdge(e.id.clone()));
            }
            for end in [&e.source, &e.target] {
                if !ids.contains(end.as_str()) {
                    return Err(DrawingError::UnknownVertex(e.id.clone(), end.clone()));
                }
            }
            if e.is_loop() && !e.auxiliary {
                return Err(DrawingError::SelfLoop(e.id.clone()));
            }
            if e
                .bends
                .iter()
                .any(|b| self.vertices.iter().any(|v| &v.point == b))
            {
                return Err(DrawingError::BendOnVertex(e.id.clone()));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let pts = self.polyline(i);
            if pts.windows(2).any(|w| w[0] == w[1]) || (e.is_loop() && e.bends.len() < 2) {
                return Err(DrawingError::RepeatedPoint(e.id.clone()));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, DrawingError> {
        let raw: RawDrawing = serde_json::from_str(s)?;
        let mut d = Drawing::new(raw.bend_limit);
        for v in raw.vertices {
            let p = parse_point(&v.x, &v.y)?;
            d.add_vertex(v.id, p);
        }
        for e in raw.edges {
            let bends = e
                .bends
                .iter()
                .map(|b| parse_point(&b.x, &b.y))
                .collect::<Result<Vec<_>, _>>()?;
            d.add_edge(Edge {
                id: e.id,
                source: e.source,
                target: e.target,
                bends,
                auxiliary: e.auxiliary,
            });
        }
        d.check_structure()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        let raw = RawDrawing {
            bend_limit: self.bend_limit,
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    x: v.point.x.to_string(),
                    y: v.point.y.to_string(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    source: e.source.clone(),
                    target: e.target.clone(),
                    bends: e
                        .bends
                        .iter()
                        .map(|b| RawPoint {
                            x: b.x.to_string(),
                            y: b.y.to_string(),
                        })
                        .collect(),
                    auxiliary: e.auxiliary,
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("drawing serializes")
    }

    /// Number of connected components of the graph on all vertices, using
    /// non-auxiliary edges only.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for (i, (a, b)) in self.endpoints().into_iter().enumerate() {
            if !self.edges[i].auxiliary {
                uf.union(a, b);
            }
        }
        uf.count()
    }
}

/// Plain union-find with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    NonRightAngle,
    TooManyBends,
    Overlap,
    EdgeThroughVertex,
    TriplePoint,
    SelfIntersection,
    CrossedAuxiliary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingRecord {
    pub edge_a: String,
    pub edge_b: String,
    pub point: Point,
    /// Acute angle between the crossing pieces, radians.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub is_rac: bool,
    pub crossings: Vec<CrossingRecord>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// Largest deviation of a crossing angle from pi/2.
    pub fn max_angle_deviation(&self) -> f64 {
        self.crossings
            .iter()
            .map(|c| (std::f64::consts::FRAC_PI_2 - c.angle).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "is_rac": self.is_rac,
            "crossing_count": self.crossings.len(),
            "max_angle_deviation": self.max_angle_deviation(),
            "crossings": self.crossings.iter().map(|c| serde_json::json!({
                "edge_a": c.edge_a,
                "edge_b": c.edge_b,
                "x": c.point.x.to_string(),
                "y": c.point.y.to_string(),
                "angle": c.angle,
            })).collect::<Vec<_>>(),
            "violations": self.violations,
        })
    }
}

/// A proper crossing between two segments of distinct edges.
#[derive(Debug, Clone)]
pub(crate) struct SegmentCrossing {
    pub edge_a: usize,
    pub seg_a: usize,
    pub edge_b: usize,
    pub seg_b: usize,
    pub point: Point,
}

#[derive(Debug, Default)]
pub(crate) struct Scan {
    pub crossings: Vec<SegmentCrossing>,
    pub violations: Vec<Violation>,
}

/// Brute-force pairwise test of all segments of the edges selected by
/// `keep`, collecting proper crossings and every degeneracy.
pub(crate) fn scan(d: &Drawing, keep: &dyn Fn(usize) -> bool, eps: f64) -> Scan {
    let mut out = Scan::default();
    let ends = d.endpoints();
    let mut segs: Vec<(usize, usize, Segment)> = Vec::new();
    let mut polylines: HashMap<usize, Vec<Point>> = HashMap::new();
    for e in (0..d.edges.len()).filter(|&e| keep(e)) {
        for (k, s) in d.segments(e).into_iter().enumerate() {
            segs.push((e, k, s));
        }
        polylines.insert(e, d.polyline(e));
    }

    for (e, edge) in d.edges.iter().enumerate() {
        if keep(e) && !edge.auxiliary && edge.bends.len() > d.bend_limit {
            out.violations.push(Violation {
                kind: ViolationKind::TooManyBends,
                details: format!("edge {} has {} bends", edge.id, edge.bends.len()),
            });
        }
    }

    // isolated vertices or foreign vertices lying on a segment
    for v in &d.vertices {
        for (e, _, s) in &segs {
            if in_segment_interior(s, &v.point) {
                out.violations.push(Violation {
                    kind: ViolationKind::EdgeThroughVertex,
                    details: format!("edge {} passes through vertex {}", d.edges[*e].id, v.id),
                });
            }
        }
    }

    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (ea, ka, sa) = &segs[i];
            let (eb, kb, sb) = &segs[j];
            let Some(hit) = intersect(sa, sb) else {
                continue;
            };
            let ida = &d.edges[*ea].id;
            let idb = &d.edges[*eb].id;
            if ea == eb {
                let last = polylines[ea].len() - 2;
                let adjacent = ka.abs_diff(*kb) == 1
                    || (d.edges[*ea].is_loop() && ((*ka, *kb) == (0, last)));
                let ok = adjacent && hit.kind == IntersectionKind::Endpoint;
                if !ok {
                    out.violations.push(Violation {
                        kind: if hit.kind == IntersectionKind::Overlap {
                            ViolationKind::Overlap
                        } else {
                            ViolationKind::SelfIntersection
                        },
                        details: format!("edge {} meets itself at ({})", ida, hit.point),
                    });
                }
                continue;
            }
            match hit.kind {
                IntersectionKind::Overlap => out.violations.push(Violation {
                    kind: ViolationKind::Overlap,
                    details: format!("edges {} and {} overlap at ({})", ida, idb, hit.point),
                }),
                IntersectionKind::Endpoint => {
                    // fine only when it is a vertex shared by both edges
                    let (a0, a1) = ends[*ea];
                    let (b0, b1) = ends[*eb];
                    let shared = [a0, a1]
                        .into_iter()
                        .filter(|x| *x == b0 || *x == b1)
                        .any(|x| d.vertices[x].point == hit.point);
                    if !shared {
                        let is_vertex = d.vertices.iter().any(|v| v.point == hit.point);
                        if !is_vertex {
                            out.violations.push(Violation {
                                kind: ViolationKind::EdgeThroughVertex,
                                details: format!(
                                    "edges {} and {} touch at bend ({})",
                                    ida, idb, hit.point
                                ),
                            });
                        }
                        // a foreign vertex on a segment interior was reported above
                    }
                }
                IntersectionKind::Proper => {
                    if d.edges[*ea].auxiliary || d.edges[*eb].auxiliary {
                        out.violations.push(Violation {
                            kind: ViolationKind::CrossedAuxiliary,
                            details: format!("edges {} and {} cross", ida, idb),
                        });
                    } else if !is_right_angle(sa, sb, eps) {
                        out.violations.push(Violation {
                            kind: ViolationKind::NonRightAngle,
                            details: format!(
                                "edges {} and {} cross at {:.9} rad",
                                ida,
                                idb,
                                geom::direction_angle(sa, sb)
                            ),
                        });
                    }
                    out.crossings.push(SegmentCrossing {
                        edge_a: *ea,
                        seg_a: *ka,
                        edge_b: *eb,
                        seg_b: *kb,
                        point: hit.point,
                    });
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..out.crossings.len()).collect();
    order.sort_by(|&a, &b| out.crossings[a].point.lex_cmp(&out.crossings[b].point));
    for w in order.windows(2) {
        let (a, b) = (&out.crossings[w[0]], &out.crossings[w[1]]);
        if a.point == b.point {
            out.violations.push(Violation {
                kind: ViolationKind::TriplePoint,
                details: format!("three or more edges meet at ({})", a.point),
            });
        }
    }
    out
}

/// Checks the RAC property with right-angle tolerance `eps` (ignored for
/// exact crossings, which must be exactly perpendicular).
pub fn validate_with(d: &Drawing, eps: f64) -> ValidationReport {
    let scan = scan(d, &|_| true, eps);
    let crossings = scan
        .crossings
        .iter()
        .map(|c| {
            let sa = &d.segments(c.edge_a)[c.seg_a];
            let sb = &d.segments(c.edge_b)[c.seg_b];
            CrossingRecord {
                edge_a: d.edges[c.edge_a].id.clone(),
                edge_b: d.edges[c.edge_b].id.clone(),
                point: c.point.clone(),
                angle: geom::direction_angle(sa, sb),
            }
        })
        .collect();
    ValidationReport {
        is_rac: scan.violations.is_empty(),
        crossings,
        violations: scan.violations,
    }
}

pub fn validate(d: &Drawing) -> ValidationReport {
    validate_with(d, geom::DEFAULT_EPSILON)
}

/// Crossing-free edges `e0` and crossed edges `e1`, as edge ids in drawing
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePartition {
    pub e0: Vec<String>,
    pub e1: Vec<String>,
}

impl EdgePartition {
    /// Per-edge flag, indexed like `d.edges`.
    pub fn crossed_mask(&self, d: &Drawing) -> Vec<bool> {
        let set: HashSet<&str> = self.e1.iter().map(String::as_str).collect();
        d.edges.iter().map(|e| set.contains(e.id.as_str())).collect()
    }
}

pub fn partition_edges(d: &Drawing, r: &ValidationReport) -> Result<EdgePartition, DrawingError> {
    if !r.is_rac {
        return Err(DrawingError::InvalidDrawing(r.violations.len()));
    }
    let crossed: HashSet<&str> = r
        .crossings
        .iter()
        .flat_map(|c| [c.edge_a.as_str(), c.edge_b.as_str()])
        .collect();
    let (e1, e0): (Vec<_>, Vec<_>) = d
        .edges
        .iter()
        .map(|e| e.id.clone())
        .partition(|id| crossed.contains(id.as_str()));
    Ok(EdgePartition { e0, e1 })
}

/// Edge count against the `5.5n - 11` bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub n: usize,
    pub m: usize,
    pub bound: f64,
    pub satisfied: bool,
    /// `bound - m`
    pub slack: f64,
}

/// Auxiliary edges are not counted in `m`.
pub fn density_check(d: &Drawing) -> Result<BoundVerdict, DrawingError> {
    let report = validate(d);
    if !report.is_rac {
        return Err(DrawingError::InvalidDrawing(report.violations.len()));
    }
    let n = d.vertices.len();
    if n < 5 {
        return Err(DrawingError::PreconditionViolated(format!(
            "need at least 5 vertices, got {n}"
        )));
    }
    if d.component_count() != 1 {
        return Err(DrawingError::PreconditionViolated(
            "graph is disconnected".to_string(),
        ));
    }
    let m = d.edges.iter().filter(|e| !e.auxiliary).count();
    // m <= 5.5n - 11  <=>  2m <= 11n - 22
    let satisfied = 2 * m + 22 <= 11 * n;
    let bound = 5.5 * n as f64 - 11.0;
    Ok(BoundVerdict {
        n,
        m,
        bound,
        satisfied,
        slack: bound - m as f64,
    })
}

/// Deterministic SVG rendering. The y axis is flipped so that the picture
/// matches the usual mathematical orientation.
pub fn to_svg(d: &Drawing, crossings: Option<&[CrossingRecord]>) -> String {
    let mut pts: Vec<(f64, f64)> = d.vertices.iter().map(|v| v.point.to_f64()).collect();
    for e in &d.edges {
        pts.extend(e.bends.iter().map(Point::to_f64));
    }
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if let Some(&(x, y)) = pts.first() {
        (x0, y0, x1, y1) = (x, y, x, y);
    }
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = span * 0.05;
    let r = span * 0.006;
    let stroke = span * 0.002;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        x0 - margin,
        -y1 - margin,
        x1 - x0 + 2.0 * margin,
        y1 - y0 + 2.0 * margin
    );
    for (i, e) in d.edges.iter().enumerate() {
        let coords: Vec<String> = d
            .polyline(i)
            .iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                format!("{:.6},{:.6}", x, -y)
            })
            .collect();
        let dash = if e.auxiliary {
            format!(r#" stroke-dasharray="{:.6}""#, stroke * 4.0)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            r#"  <polyline id="{}" points="{}" fill="none" stroke="black" stroke-width="{:.6}"{}/>"#,
            xml_escape(&e.id),
            coords.join(" "),
            stroke,
            dash
        );
    }
    for v in &d.vertices {
        let (x, y) = v.point.to_f64();
        let _ = writeln!(
            out,
            r#"  <circle id="{}" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="black"/>"#,
            xml_escape(&v.id),
            x,
            -y,
            r
        );
    }
    for c in crossings.unwrap_or(&[]) {
        let (x, y) = c.point.to_f64();
        let _ = writeln!(
            out,
            r#"  <circle class="crossing" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="red"/>"#,
            x,
            -y,
            r * 0.6
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Convenience for building exact drawings in tests and fixtures.
pub fn exact(x: i64, y: i64) -> Point {
    Point::new(Coord::int(x), Coord::int(y))
}
