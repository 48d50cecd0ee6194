//! Nested dodecahedral drawings with five one-bend chords in every
//! pentagonal face, giving 1-bend RAC drawings with exactly `5n − 10`
//! edges.
//!
//! Each level is a dodecahedron drawn as an inner regular pentagon, a ring
//! of five near-inner faces, a ring of five near-outer faces and an outer
//! regular pentagon. Level `j + 1` is level `j` scaled and mirrored so that
//! its outer pentagon coincides with the inner pentagon of level `j`.

use serde::Serialize;
use thiserror::Error;

use crate::drawing::{validate_with, Drawing, Edge};
use crate::geom::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("at least one nesting level is required")]
    NoLevels,
    #[error("scale factor {0} between levels is not in (0, 1)")]
    DegenerateScale(f64),
    #[error("endpoint rays of chord {0} do not meet")]
    RayMiss(String),
    #[error("output scale must be positive and finite, got {0}")]
    BadScale(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceRole {
    Innermost,
    Outer,
    NearInnermost,
    NearOuter,
}

/// Interior angles at the apex `A`, the two `B` corners and the two `C`
/// corners of a face listed as `A, B1, C1, C2, B2`, and the side ratios
/// `a : b : c` for `a = C1C2`, `b = BC`, `c = AB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaceShapeSpec {
    pub role: FaceRole,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `b / a` for near-innermost faces, `b / c` for near-outer faces.
    pub ratio: f64,
}

impl FaceShapeSpec {
    pub fn for_role(role: FaceRole) -> Self {
        match role {
            FaceRole::Innermost | FaceRole::Outer => FaceShapeSpec {
                role,
                alpha: 108.0,
                beta: 108.0,
                gamma: 108.0,
                ratio: 1.0,
            },
            FaceRole::NearInnermost => FaceShapeSpec {
                role,
                alpha: 88.0,
                beta: 100.0,
                gamma: 126.0,
                ratio: 1.5,
            },
            FaceRole::NearOuter => FaceShapeSpec {
                role,
                alpha: 160.0,
                beta: 136.0,
                gamma: 54.0,
                ratio: 8.5,
            },
        }
    }
}

/// Angles, in degrees, at which the chords leave their endpoints, measured
/// from the side towards the skipped vertex into the face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordSpec {
    /// At `A`, chord `A → C`, from side `AB`.
    pub alpha1: f64,
    /// At `B`, chord `B → C` on the far side, from side `BC`.
    pub beta1: f64,
    /// At `B`, chord `B1 → B2`, from side `BA`.
    pub beta2: f64,
    /// At `C`, chord `C → B` on the far side, from side `C1C2`.
    pub gamma1: f64,
    /// At `C`, chord `C → A`, from side `CB`.
    pub gamma2: f64,
}

impl ChordSpec {
    pub fn for_role(role: FaceRole) -> Self {
        match role {
            FaceRole::Innermost | FaceRole::Outer => ChordSpec {
                alpha1: 45.0,
                beta1: 45.0,
                beta2: 45.0,
                gamma1: 45.0,
                gamma2: 45.0,
            },
            FaceRole::NearInnermost => ChordSpec {
                alpha1: 40.0,
                beta1: 30.0,
                beta2: 50.0,
                gamma1: 45.0,
                gamma2: 60.0,
            },
            FaceRole::NearOuter => ChordSpec {
                alpha1: 47.5,
                beta1: 85.0,
                beta2: 42.5,
                gamma1: 45.0,
                gamma2: 5.0,
            },
        }
    }

    /// Angle at corner `k` of `A, B1, C1, C2, B2` for the chord skipping
    /// the next (`forward`) or previous corner.
    fn at(&self, k: usize, forward: bool) -> f64 {
        match (k, forward) {
            (0, _) => self.alpha1,
            (1, true) => self.beta1,
            (1, false) => self.beta2,
            (4, false) => self.beta1,
            (4, true) => self.beta2,
            (2, true) => self.gamma1,
            (2, false) => self.gamma2,
            (3, false) => self.gamma1,
            (3, true) => self.gamma2,
            _ => unreachable!("five corners"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorParams {
    pub levels: usize,
    /// Side length of the outermost pentagon.
    pub scale: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams { levels: 1, scale: 1.0 }
    }
}

type P = (f64, f64);

fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}

fn norm(a: P) -> f64 {
    a.0.hypot(a.1)
}

fn rotate(v: P, deg: f64) -> P {
    let (s, c) = deg.to_radians().sin_cos();
    (v.0 * c - v.1 * s, v.0 * s + v.1 * c)
}

fn polar(r: f64, deg: f64) -> P {
    let (s, c) = deg.to_radians().sin_cos();
    (r * c, r * s)
}

/// Parameters `(t, r)` with `a + t·da = b + r·db`.
fn meet(a: P, da: P, b: P, db: P) -> Option<(f64, f64)> {
    let den = da.0 * db.1 - da.1 * db.0;
    if den.abs() < 1e-15 {
        return None;
    }
    let w = sub(b, a);
    Some(((w.0 * db.1 - w.1 * db.0) / den, (w.0 * da.1 - w.1 * da.0) / den))
}

/// A face of the frame, as vertex indices `A, B1, C1, C2, B2` with the face
/// to the left.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameFace {
    pub role: FaceRole,
    pub level: usize,
    pub corners: [usize; 5],
}

/// Crossing-free skeleton with its faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub drawing: Drawing,
    pub faces: Vec<FrameFace>,
    pub coords: Vec<P>,
    /// Ratio between consecutive levels.
    pub level_scale: f64,
}

struct Base {
    inner: [P; 5],
    ring: [P; 5],
    apex: [P; 5],
    outer: [P; 5],
}

fn base() -> Base {
    let ni = FaceShapeSpec::for_role(FaceRole::NearInnermost);
    let radius = 1.0 / (2.0 * 36f64.to_radians().sin());
    let inner: [P; 5] = std::array::from_fn(|i| polar(radius, 126.0 + 72.0 * i as f64));
    let ring: [P; 5] = std::array::from_fn(|i| polar(radius + ni.ratio, 126.0 + 72.0 * i as f64));
    let apex: [P; 5] = std::array::from_fn(|i| {
        let axis = polar(1.0, 162.0 + 72.0 * i as f64);
        let dir = rotate(sub(inner[i], ring[i]), -ni.beta);
        let (t, _) = meet(ring[i], dir, (0.0, 0.0), axis).expect("apex ray meets its axis");
        (ring[i].0 + t * dir.0, ring[i].1 + t * dir.1)
    });
    let no = FaceShapeSpec::for_role(FaceRole::NearOuter);
    let outer: [P; 5] = std::array::from_fn(|i| {
        let c = norm(sub(apex[i], ring[i]));
        let r = norm(apex[i]) + no.ratio * c;
        polar(r, 162.0 + 72.0 * i as f64)
    });
    Base { inner, ring, apex, outer }
}

/// `k` nested dodecahedral drawings, outermost pentagon of side `scale`.
pub fn dodecahedral_frame(params: &GeneratorParams) -> Result<Frame, GeneratorError> {
    let k = params.levels;
    if k == 0 {
        return Err(GeneratorError::NoLevels);
    }
    if !(params.scale.is_finite() && params.scale > 0.0) {
        return Err(GeneratorError::BadScale(params.scale));
    }
    let b = base();
    let outer_side = norm(sub(b.outer[1], b.outer[0]));
    let s = norm(sub(b.inner[1], b.inner[0])) / outer_side;
    if !(s > 0.0 && s < 1.0) {
        return Err(GeneratorError::DegenerateScale(s));
    }
    let norm_factor = params.scale / outer_side;
    let place = |p: P, level: usize| {
        let f = norm_factor * s.powi(level as i32);
        let y = if level.is_multiple_of(2) { p.1 } else { -p.1 };
        (p.0 * f, y * f)
    };
    // outer pentagon vertex i of a level sits on inner vertex `glue[i]` of
    // the level above
    let glue: [usize; 5] = std::array::from_fn(|i| {
        let o = (b.outer[i].0 * s, -b.outer[i].1 * s);
        (0..5)
            .min_by(|&x, &y| norm(sub(o, b.inner[x])).total_cmp(&norm(sub(o, b.inner[y]))))
            .unwrap()
    });

    let mut d = Drawing::new(1);
    let mut coords: Vec<P> = Vec::new();
    let mut add = |d: &mut Drawing, id: String, p: P| {
        d.add_vertex(id, Point::float(p.0, p.1));
        coords.push(p);
        coords.len() - 1
    };
    let mut outer_ids: [usize; 5] = [0; 5];
    for (i, &p) in b.outer.iter().enumerate() {
        outer_ids[i] = add(&mut d, format!("L0o{i}"), place(p, 0));
    }
    let mut faces = Vec::new();
    let mut levels: Vec<([usize; 5], [usize; 5], [usize; 5], [usize; 5])> = Vec::new();
    for j in 0..k {
        let mut apex = [0; 5];
        let mut ring = [0; 5];
        let mut inner = [0; 5];
        for i in 0..5 {
            apex[i] = add(&mut d, format!("L{j}u{i}"), place(b.apex[i], j));
        }
        for i in 0..5 {
            ring[i] = add(&mut d, format!("L{j}w{i}"), place(b.ring[i], j));
        }
        for i in 0..5 {
            inner[i] = add(&mut d, format!("L{j}n{i}"), place(b.inner[i], j));
        }
        let outer = if j == 0 {
            outer_ids
        } else {
            let above = levels[j - 1].3;
            std::array::from_fn(|i| above[glue[i]])
        };
        levels.push((outer, apex, ring, inner));
    }
    let vid = |d: &Drawing, v: usize| d.vertices[v].id.clone();
    for (j, &(outer, apex, ring, inner)) in levels.iter().enumerate() {
        let edge = |d: &mut Drawing, a: usize, c: usize| {
            let id = format!("{}-{}", vid(d, a), vid(d, c));
            let e = Edge::new(id, vid(d, a), vid(d, c));
            d.add_edge(e);
        };
        for i in 0..5 {
            let n = (i + 1) % 5;
            if j == 0 {
                edge(&mut d, outer[i], outer[n]);
            }
            edge(&mut d, outer[i], apex[i]);
            edge(&mut d, apex[i], ring[i]);
            edge(&mut d, apex[i], ring[n]);
            edge(&mut d, ring[i], inner[i]);
            edge(&mut d, inner[i], inner[n]);
        }
        // the base is counter-clockwise; odd levels are mirrored
        let fix = |c: [usize; 5]| if j % 2 == 0 { c } else { [c[0], c[4], c[3], c[2], c[1]] };
        for i in 0..5 {
            let n = (i + 1) % 5;
            faces.push(FrameFace {
                role: FaceRole::NearInnermost,
                level: j,
                corners: fix([apex[i], ring[n], inner[n], inner[i], ring[i]]),
            });
            faces.push(FrameFace {
                role: FaceRole::NearOuter,
                level: j,
                corners: fix([ring[n], apex[i], outer[i], outer[n], apex[n]]),
            });
        }
        if j == 0 {
            let c = [outer[0], outer[4], outer[3], outer[2], outer[1]];
            faces.push(FrameFace { role: FaceRole::Outer, level: 0, corners: c });
        }
        if j + 1 == k {
            faces.push(FrameFace { role: FaceRole::Innermost, level: j, corners: fix(inner) });
        }
    }
    Ok(Frame {
        drawing: d,
        faces,
        coords,
        level_scale: s,
    })
}

/// Interior angles of a frame face in degrees, corner order `A, B1, C1, C2, B2`.
pub fn face_angles(frame: &Frame, face: &FrameFace) -> [f64; 5] {
    std::array::from_fn(|k| {
        let p = frame.coords[face.corners[k]];
        let next = frame.coords[face.corners[(k + 1) % 5]];
        let prev = frame.coords[face.corners[(k + 4) % 5]];
        let a = sub(next, p);
        let b = sub(prev, p);
        let ang = (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1).to_degrees();
        if ang < 0.0 {
            ang + 360.0
        } else {
            ang
        }
    })
}

/// Adds the five chords of every frame face.
pub fn add_chords(frame: &Frame) -> Result<Drawing, GeneratorError> {
    let mut d = frame.drawing.clone();
    for (fi, face) in frame.faces.iter().enumerate() {
        let spec = ChordSpec::for_role(face.role);
        for k in 0..5 {
            let u = face.corners[k];
            let w = face.corners[(k + 1) % 5];
            let v = face.corners[(k + 2) % 5];
            let pu = frame.coords[u];
            let pv = frame.coords[v];
            let du = rotate(sub(frame.coords[w], pu), spec.at(k, true));
            let dv = rotate(sub(frame.coords[w], pv), -spec.at((k + 2) % 5, false));
            let id = format!("f{fi}c{k}");
            let (t, r) = meet(pu, du, pv, dv).ok_or_else(|| GeneratorError::RayMiss(id.clone()))?;
            if t <= 0.0 || r <= 0.0 {
                return Err(GeneratorError::RayMiss(id));
            }
            let bend = Point::float(pu.0 + t * du.0, pu.1 + t * du.1);
            let e = Edge::new(id, d.vertices[u].id.clone(), d.vertices[v].id.clone()).with_bend(bend);
            d.add_edge(e);
        }
    }
    Ok(d)
}

pub fn generate(params: &GeneratorParams) -> Result<Drawing, GeneratorError> {
    add_chords(&dodecahedral_frame(params)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub levels: usize,
    pub n: usize,
    pub m: usize,
    pub matches_5n_minus_10: bool,
    pub crossings: usize,
    pub max_angle_deviation: f64,
    pub max_bends: usize,
    pub is_rac: bool,
}

pub fn family_report(levels: usize) -> Result<FamilyReport, GeneratorError> {
    let d = generate(&GeneratorParams { levels, scale: 1.0 })?;
    let r = validate_with(&d, 1e-6);
    let n = d.vertices.len();
    let m = d.edges.len();
    Ok(FamilyReport {
        levels,
        n,
        m,
        matches_5n_minus_10: m + 10 == 5 * n,
        crossings: r.crossings.len(),
        max_angle_deviation: r.max_angle_deviation(),
        max_bends: d.edges.iter().map(|e| e.bends.len()).max().unwrap_or(0),
        is_rac: r.is_rac,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_counts() {
        for (k, n, m, f) in [(1, 20, 30, 12), (2, 35, 55, 22), (3, 50, 80, 32)] {
            let fr = dodecahedral_frame(&GeneratorParams { levels: k, scale: 1.0 }).unwrap();
            assert_eq!(fr.drawing.vertices.len(), n);
            assert_eq!(fr.drawing.edges.len(), m);
            assert_eq!(fr.faces.len(), f);
            assert_eq!(3 * m, 5 * (n - 2));
            assert_eq!(3 * f, 2 * (n - 2));
        }
    }

    #[test]
    fn face_angles_match_shapes() {
        let fr = dodecahedral_frame(&GeneratorParams { levels: 2, scale: 1.0 }).unwrap();
        for face in &fr.faces {
            let s = FaceShapeSpec::for_role(face.role);
            let a = face_angles(&fr, face);
            let want = if face.role == FaceRole::Outer {
                [252.0; 5]
            } else {
                [s.alpha, s.beta, s.gamma, s.gamma, s.beta]
            };
            for k in 0..5 {
                assert!((a[k] - want[k]).abs() < 1e-6, "{:?} corner {k}: {} vs {}", face.role, a[k], want[k]);
            }
        }
    }

    #[test]
    fn side_ratios() {
        let fr = dodecahedral_frame(&GeneratorParams::default()).unwrap();
        let len = |a: usize, b: usize| norm(sub(fr.coords[a], fr.coords[b]));
        for face in &fr.faces {
            let [a, b1, c1, c2, _] = face.corners;
            match face.role {
                FaceRole::NearInnermost => assert!((len(b1, c1) / len(c1, c2) - 1.5).abs() < 1e-9),
                FaceRole::NearOuter => assert!((len(b1, c1) / len(a, b1) - 8.5).abs() < 1e-9),
                _ => {}
            }
        }
        assert!(fr.level_scale > 0.0 && fr.level_scale < 1.0);
    }

    #[test]
    fn family_is_rac() {
        for k in 1..=2 {
            let r = family_report(k).unwrap();
            assert!(r.is_rac, "{r:?}");
            assert!(r.matches_5n_minus_10);
            assert_eq!(r.crossings, 5 * (10 * k + 2));
            assert!(r.max_angle_deviation < 1e-6);
            assert_eq!(r.max_bends, 1);
        }
    }

    #[test]
    fn chords_perpendicular_pairs() {
        for role in [FaceRole::Innermost, FaceRole::NearInnermost, FaceRole::NearOuter] {
            let c = ChordSpec::for_role(role);
            assert_eq!(c.alpha1 + c.beta2, 90.0);
            assert_eq!(c.beta1 + c.gamma2, 90.0);
            assert_eq!(2.0 * c.gamma1, 90.0);
        }
    }
}
