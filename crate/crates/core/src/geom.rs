//! Numeric core: coordinates that are either exact rationals or finite
//! floats, sign predicates, segment intersection and angle measurement.
//!
//! All predicates evaluate exactly when every input is rational. As soon as a
//! float participates the computation falls back to `f64`, with orientation
//! tests routed through adaptive-precision `orient2d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default tolerance on the normalized dot product for right-angle tests in
/// floating mode.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("coordinate `{0}` is not a finite decimal or rational")]
    BadCoord(String),
    #[error("zero-length segment at ({0})")]
    ZeroLength(String),
    #[error("segments do not cross properly")]
    NotProperCrossing,
}

/// A single coordinate value.
#[derive(Debug, Clone)]
pub enum Coord {
    Exact(BigRational),
    Float(f64),
}

impl Coord {
    pub fn int(v: i64) -> Self {
        Coord::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coord::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Panics on non-finite input.
    pub fn float(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite coordinate");
        Coord::Float(v)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coord::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coord::Float(f) => *f,
        }
    }

    pub fn signum(&self) -> i8 {
        match self {
            Coord::Exact(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Coord::Float(f) => {
                if *f > 0.0 {
                    1
                } else if *f < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn abs(&self) -> Coord {
        match self {
            Coord::Exact(r) => Coord::Exact(r.abs()),
            Coord::Float(f) => Coord::Float(f.abs()),
        }
    }

    /// Division; panics when `rhs` is zero.
    pub fn div(&self, rhs: &Coord) -> Coord {
        match (self, rhs) {
            (Coord::Exact(a), Coord::Exact(b)) => {
                assert!(!b.is_zero(), "division by zero");
                Coord::Exact(a / b)
            }
            _ => Coord::Float(self.to_f64() / rhs.to_f64()),
        }
    }
}

macro_rules! coord_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a Coord> for &'a Coord {
            type Output = Coord;
            fn $method(self, rhs: &'a Coord) -> Coord {
                match (self, rhs) {
                    (Coord::Exact(a), Coord::Exact(b)) => Coord::Exact(a $op b),
                    _ => Coord::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            fn $method(self, rhs: Coord) -> Coord {
                &self $op &rhs
            }
        }
    };
}

coord_binop!(Add, add, +);
coord_binop!(Sub, sub, -);
coord_binop!(Mul, mul, *);

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        match self {
            Coord::Exact(a) => Coord::Exact(-a),
            Coord::Float(f) => Coord::Float(-f),
        }
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Coord::Exact(a), Coord::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Coord {
    /// Rationals print as `p/q` (or `p` when integral); floats always carry a
    /// `.` or exponent so that they re-parse as floats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Coord::Float(v) => write!(f, "{:?}", v),
        }
    }
}

impl FromStr for Coord {
    type Err = GeomError;

    /// `"5/4"` and `"3"` parse as exact rationals, anything with a decimal
    /// point or exponent as a float.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeomError::BadCoord(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Coord::Exact(BigRational::new(n, d)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(Coord::Exact(BigRational::from_integer(n)));
        }
        let v: f64 = t.parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Coord::Float(v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(Coord::int(x), Coord::int(y))
    }

    pub fn float(x: f64, y: f64) -> Self {
        Point::new(Coord::float(x), Coord::float(y))
    }

    pub fn is_exact(&self) -> bool {
        self.x.is_exact() && self.y.is_exact()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn sub(&self, o: &Point) -> (Coord, Coord) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    /// Lexicographic (x, then y) comparison.
    pub fn lex_cmp(&self, o: &Point) -> Ordering {
        self.x
            .partial_cmp(&o.x)
            .unwrap_or(Ordering::Equal)
            .then(self.y.partial_cmp(&o.y).unwrap_or(Ordering::Equal))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Result<Self, GeomError> {
        if p == q {
            return Err(GeomError::ZeroLength(p.to_string()));
        }
        Ok(Segment { p, q })
    }

    pub fn direction(&self) -> (Coord, Coord) {
        self.q.sub(&self.p)
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

/// Sign of the cross product `(b - a) x (c - a)`: `1` for a left turn,
/// `-1` for a right turn, `0` for collinear points.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    if a.is_exact() && b.is_exact() && c.is_exact() {
        if let Some(sign) = orient_filter(a, b, c) {
            return sign;
        }
        let (bx, by) = b.sub(a);
        let (cx, cy) = c.sub(a);
        (&bx * &cy - &by * &cx).signum()
    } else {
        let (ax, ay) = a.to_f64();
        let (bx, by) = b.to_f64();
        let (cx, cy) = c.to_f64();
        let det = robust::orient2d(
            robust::Coord { x: ax, y: ay },
            robust::Coord { x: bx, y: by },
            robust::Coord { x: cx, y: cy },
        );
        // robust returns a positive value for counter-clockwise triples
        if det > 0.0 {
            1
        } else if det < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Floating-point evaluation of the orientation determinant, trusted only
/// when it clears a forward error bound.
fn orient_filter(a: &Point, b: &Point, c: &Point) -> Option<i8> {
    let (ax, ay) = a.to_f64();
    let (bx, by) = b.to_f64();
    let (cx, cy) = c.to_f64();
    let l = (bx - ax) * (cy - ay);
    let r = (by - ay) * (cx - ax);
    let det = l - r;
    let mag = (bx.abs() + ax.abs()) * (cy.abs() + ay.abs()) + (by.abs() + ay.abs()) * (cx.abs() + ax.abs());
    let bound = 1e-13 * mag;
    if !det.is_finite() || !bound.is_finite() || det.abs() <= bound {
        return None;
    }
    Some(if det > 0.0 { 1 } else { -1 })
}

pub fn cross(a: &(Coord, Coord), b: &(Coord, Coord)) -> Coord {
    &a.0 * &b.1 - &a.1 * &b.0
}

pub fn dot(a: &(Coord, Coord), b: &(Coord, Coord)) -> Coord {
    &a.0 * &b.0 + &a.1 * &b.1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntersectionKind {
    /// Interior of both segments.
    Proper,
    /// At an endpoint of at least one segment.
    Endpoint,
    /// Collinear with positive-length overlap.
    Overlap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub point: Point,
    pub kind: IntersectionKind,
}

/// `p` lies on the closed segment `s`, given that it is collinear with it.
fn within_box(s: &Segment, p: &Point) -> bool {
    let (lo_x, hi_x) = minmax(&s.p.x, &s.q.x);
    let (lo_y, hi_y) = minmax(&s.p.y, &s.q.y);
    lo_x <= &p.x && &p.x <= hi_x && lo_y <= &p.y && &p.y <= hi_y
}

fn minmax<'a>(a: &'a Coord, b: &'a Coord) -> (&'a Coord, &'a Coord) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `p` lies on the closed segment `s`.
pub fn on_segment(s: &Segment, p: &Point) -> bool {
    orient(&s.p, &s.q, p) == 0 && within_box(s, p)
}

/// `p` lies on `s` but is neither of its endpoints.
pub fn in_segment_interior(s: &Segment, p: &Point) -> bool {
    on_segment(s, p) && *p != s.p && *p != s.q
}

/// Intersection point of the supporting lines of two non-parallel segments.
fn line_intersection(s1: &Segment, s2: &Segment) -> Point {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let denom = cross(&d1, &d2);
    let w = s2.p.sub(&s1.p);
    let t = cross(&w, &d2).div(&denom);
    Point::new(&s1.p.x + &(&t * &d1.0), &s1.p.y + &(&t * &d1.1))
}

/// Intersection of two closed segments.
pub fn intersect(s1: &Segment, s2: &Segment) -> Option<Intersection> {
    if boxes_apart(s1, s2) {
        return None;
    }
    let o1 = orient(&s1.p, &s1.q, &s2.p);
    let o2 = orient(&s1.p, &s1.q, &s2.q);
    let o3 = orient(&s2.p, &s2.q, &s1.p);
    let o4 = orient(&s2.p, &s2.q, &s1.q);

    if o1 == 0 && o2 == 0 {
        // collinear: order the endpoints along the line
        let (a0, a1) = sorted_pair(&s1.p, &s1.q);
        let (b0, b1) = sorted_pair(&s2.p, &s2.q);
        let lo = if a0.lex_cmp(b0) == Ordering::Less { b0 } else { a0 };
        let hi = if a1.lex_cmp(b1) == Ordering::Less { a1 } else { b1 };
        return match lo.lex_cmp(hi) {
            Ordering::Less => Some(Intersection {
                point: lo.clone(),
                kind: IntersectionKind::Overlap,
            }),
            Ordering::Equal => Some(Intersection {
                point: lo.clone(),
                kind: IntersectionKind::Endpoint,
            }),
            Ordering::Greater => None,
        };
    }

    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Some(Intersection {
            point: line_intersection(s1, s2),
            kind: IntersectionKind::Proper,
        });
    }

    let touch = [
        (o1, &s2.p, s1),
        (o2, &s2.q, s1),
        (o3, &s1.p, s2),
        (o4, &s1.q, s2),
    ];
    for (o, p, s) in touch {
        if o == 0 && within_box(s, p) {
            return Some(Intersection {
                point: p.clone(),
                kind: IntersectionKind::Endpoint,
            });
        }
    }
    None
}

/// Bounding boxes separated by more than the rounding error of the
/// floating-point coordinates.
fn boxes_apart(s1: &Segment, s2: &Segment) -> bool {
    let (p1, q1, p2, q2) = (s1.p.to_f64(), s1.q.to_f64(), s2.p.to_f64(), s2.q.to_f64());
    let scale = [p1.0, p1.1, q1.0, q1.1, p2.0, p2.1, q2.0, q2.1]
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    if !scale.is_finite() {
        return false;
    }
    let tol = 1e-12 * scale;
    let apart = |a0: f64, a1: f64, b0: f64, b1: f64| a0.max(a1) + tol < b0.min(b1) || b0.max(b1) + tol < a0.min(a1);
    apart(p1.0, q1.0, p2.0, q2.0) || apart(p1.1, q1.1, p2.1, q2.1)
}

fn sorted_pair<'a>(a: &'a Point, b: &'a Point) -> (&'a Point, &'a Point) {
    if a.lex_cmp(b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

/// Acute (or right) angle between the directions of two properly crossing
/// segments, in radians.
pub fn crossing_angle(s1: &Segment, s2: &Segment) -> Result<f64, GeomError> {
    match intersect(s1, s2) {
        Some(Intersection {
            kind: IntersectionKind::Proper,
            ..
        }) => Ok(direction_angle(s1, s2)),
        _ => Err(GeomError::NotProperCrossing),
    }
}

/// Angle in `[0, pi/2]` between the supporting lines of two segments.
pub fn direction_angle(s1: &Segment, s2: &Segment) -> f64 {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let c = cross(&d1, &d2).to_f64().abs();
    let d = dot(&d1, &d2).to_f64().abs();
    c.atan2(d)
}

/// Right-angle test. Exact inputs require a dot product of exactly zero;
/// otherwise the normalized dot product must be within `eps` of zero.
pub fn is_right_angle(s1: &Segment, s2: &Segment, eps: f64) -> bool {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let dp = dot(&d1, &d2);
    match dp {
        Coord::Exact(ref r) => r.is_zero(),
        Coord::Float(v) => {
            let n1 = d1.0.to_f64().hypot(d1.1.to_f64());
            let n2 = d2.0.to_f64().hypot(d2.1.to_f64());
            (v / (n1 * n2)).abs() <= eps
        }
    }
}

/// Side of a directed polyline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    Degenerate,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Degenerate => Side::Degenerate,
        }
    }
}

/// Side of the polyline `a -> bend -> b` on which the angle at `bend` is
/// smaller than pi.
pub fn bend_convex_side(a: &Point, bend: &Point, b: &Point) -> Side {
    match orient(a, bend, b) {
        1 => Side::Left,
        -1 => Side::Right,
        _ => Side::Degenerate,
    }
}

/// Counter-clockwise angular comparison of the directions `a - center` and
/// `b - center`, starting from the positive x axis.
pub fn cmp_around(center: &Point, a: &Point, b: &Point) -> Ordering {
    let ha = upper_half(center, a);
    let hb = upper_half(center, b);
    if ha != hb {
        return if ha { Ordering::Less } else { Ordering::Greater };
    }
    match orient(center, a, b) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

fn upper_half(center: &Point, p: &Point) -> bool {
    match p.y.partial_cmp(&center.y) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => p.x > center.x,
    }
}

/// Twice the signed area of a closed polygon (positive for counter-clockwise).
pub fn signed_area2(poly: &[Point]) -> Coord {
    let mut acc = Coord::int(0);
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        acc = acc + (&a.x * &b.y - &a.y * &b.x);
    }
    acc
}

/// Winding number of a closed polygon around `p`. `p` must not lie on the
/// polygon boundary.
pub fn winding_number(poly: &[Point], p: &Point) -> i32 {
    let mut wn = 0;
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0 {
            wn -= 1;
        }
    }
    wn
}
