//! Tile geometry: the parameterized hexagon and distance primitives.
//!
//! All coordinates are in unit-distance units (the forbidden distance is 1).
//! The tile is a centrally symmetric hexagon whose six corners lie on a circle
//! of diameter 1, parameterized by its width `w` and the abscissa `u` of the
//! upper corner measured from the tile's left edge. One pair of sides is
//! vertical, so a horizontal row of tiles is formed.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// Tolerance used by the exactness claims on the hexagon construction.
pub const DIAMETER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive if `o` is ccw from `self`.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotate 90° clockwise. For a ccw boundary edge this is the outward normal.
    pub fn perp_cw(self) -> Point {
        Point::new(self.y, -self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}
impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}
impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}
impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// The two free parameters of the tile: width `w` and the abscissa `u` of the
/// upper corner measured from the left edge, constrained by `0 ≤ u ≤ w ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TileShape {
    pub w: f64,
    pub u: f64,
}

impl TileShape {
    pub fn new(w: f64, u: f64) -> Result<Self> {
        let shape = TileShape { w, u };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.w.is_finite() || !self.u.is_finite() {
            return Err(Error::Shape(format!("non-finite (w, u) = ({}, {})", self.w, self.u)));
        }
        if self.w <= 0.0 || self.w > 1.0 {
            return Err(Error::Shape(format!("w = {} outside (0, 1]", self.w)));
        }
        if self.u < 0.0 || self.u > self.w {
            return Err(Error::Shape(format!("u = {} outside [0, w = {}]", self.u, self.w)));
        }
        Ok(())
    }

    /// Ordinates of the side ends: `yv` for the vertical-side corners and `yu`
    /// for the upper corner, both on the unit-diameter circle.
    pub fn corner_ys(&self) -> (f64, f64) {
        let yv = (1.0 - self.w * self.w).max(0.0).sqrt() / 2.0;
        let xu = self.u - self.w / 2.0;
        let yu = (0.25 - xu * xu).max(0.0).sqrt();
        (yv, yu)
    }

    /// Translation basis of the single-layer tiling: `e_i` shifts a tile onto
    /// its horizontal neighbor, `e_j` carries side CD onto FA.
    pub fn lattice_basis(&self) -> (Point, Point) {
        let (yv, yu) = self.corner_ys();
        (Point::new(self.w, 0.0), Point::new(self.u, yu + yv))
    }

    /// True when the hexagon collapses (repeated vertices on the parameter-box
    /// boundary). Degenerate shapes are evaluated, not rejected: the optimizer
    /// may walk the boundary.
    pub fn is_degenerate(&self) -> bool {
        let (yv, yu) = self.corner_ys();
        let xu = self.u - self.w / 2.0;
        yv < 1e-12 || (yu - yv).abs() < 1e-12 && (xu.abs() - self.w / 2.0).abs() < 1e-12
    }
}

/// A centrally symmetric convex hexagon, vertices in ccw order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hexagon {
    vertices: [Point; 6],
    center: Point,
}

impl Hexagon {
    /// Build from explicit vertices (test fixtures and translated copies).
    pub fn from_vertices(vertices: [Point; 6], center: Point) -> Self {
        Hexagon { vertices, center }
    }

    pub fn vertices(&self) -> &[Point; 6] {
        &self.vertices
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn translated(&self, v: Point) -> Hexagon {
        let mut vertices = self.vertices;
        for p in &mut vertices {
            *p = *p + v;
        }
        Hexagon { vertices, center: self.center + v }
    }

    pub fn side(&self, i: usize) -> Segment {
        Segment::new(self.vertices[i], self.vertices[(i + 1) % 6])
    }

    pub fn area(&self) -> f64 {
        let mut twice = 0.0;
        for i in 0..6 {
            twice += self.vertices[i].cross(self.vertices[(i + 1) % 6]);
        }
        twice / 2.0
    }

    fn contains(&self, p: Point) -> bool {
        // Only meaningful for polygons with area; collinear degenerates are
        // handled by the segment distances alone.
        if self.area() <= 1e-15 {
            return false;
        }
        for i in 0..6 {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % 6];
            let e = b - a;
            if e.norm2() < 1e-30 {
                continue;
            }
            if e.cross(p - a) < -1e-15 {
                return false;
            }
        }
        true
    }
}

/// Hexagon for a tile shape, centered at the origin.
///
/// With `yv = sqrt(1-w²)/2`, `xu = u - w/2` and `yu = sqrt(1/4 - xu²)` the ccw
/// vertices are A=(xu, yu), B=(-w/2, yv), C=(-w/2, -yv), D=-A, E=-B, F=-C.
/// All six lie on the circle of radius 1/2, sides BC and EF are vertical.
pub fn build_hexagon(shape: TileShape) -> Result<Hexagon> {
    shape.validate()?;
    let (yv, yu) = shape.corner_ys();
    let xu = shape.u - shape.w / 2.0;
    let a = Point::new(xu, yu);
    let b = Point::new(-shape.w / 2.0, yv);
    let c = Point::new(-shape.w / 2.0, -yv);
    Ok(Hexagon {
        vertices: [a, b, c, -a, -b, -c],
        center: Point::ORIGIN,
    })
}

/// Maximum pairwise vertex distance. For convex polygons this is the diameter.
pub fn polygon_diameter(p: &Hexagon) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..6 {
        for j in (i + 1)..6 {
            best = best.max(p.vertices[i].dist2(p.vertices[j]));
        }
    }
    best.sqrt()
}

/// Minimum Euclidean distance between two closed convex polygons; 0 if they
/// intersect or one contains the other.
pub fn polygon_distance(p: &Hexagon, q: &Hexagon) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..6 {
        let sa = p.side(i);
        for j in 0..6 {
            let d = seg_seg_distance(&sa, &q.side(j));
            if d < best {
                best = d;
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
    }
    if best > 0.0 && (p.contains(q.vertices[0]) || q.contains(p.vertices[0])) {
        return 0.0;
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point {
        (self.a + self.b) * 0.5
    }

    pub fn translated(&self, v: Point) -> Segment {
        Segment::new(self.a + v, self.b + v)
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.a + (self.b - self.a) * t
    }
}

/// Circular arc of radius exactly 1, spanning less than a half turn.
/// Angles are in radians with `end_angle > start_angle`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitArc {
    pub center: Point,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl UnitArc {
    pub const RADIUS: f64 = 1.0;

    pub fn new(center: Point, start_angle: f64, end_angle: f64) -> Result<Self> {
        if !(end_angle > start_angle) || end_angle - start_angle >= PI {
            return Err(Error::Shape(format!(
                "arc span [{start_angle}, {end_angle}] must be positive and below pi"
            )));
        }
        Ok(UnitArc { center, start_angle, end_angle })
    }

    pub fn span(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    pub fn point_at_angle(&self, ang: f64) -> Point {
        self.center + Point::new(ang.cos(), ang.sin())
    }

    pub fn endpoints(&self) -> (Point, Point) {
        (self.point_at_angle(self.start_angle), self.point_at_angle(self.end_angle))
    }

    pub fn contains_angle(&self, ang: f64) -> bool {
        let rel = (ang - self.start_angle).rem_euclid(TAU);
        rel <= self.span() + 1e-12
    }

    pub fn translated(&self, v: Point) -> UnitArc {
        UnitArc { center: self.center + v, ..*self }
    }

    /// Point reflection through `c` (reverses orientation, keeps span).
    pub fn reflected_through(&self, c: Point) -> UnitArc {
        UnitArc {
            center: c * 2.0 - self.center,
            start_angle: self.start_angle + PI,
            end_angle: self.end_angle + PI,
        }
    }

    pub fn arc_length(&self) -> f64 {
        self.span()
    }
}

/// A boundary piece: point, segment, or unit-radius arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Primitive {
    Point(Point),
    Segment(Segment),
    Arc(UnitArc),
}

impl Primitive {
    pub fn translated(&self, v: Point) -> Primitive {
        match self {
            Primitive::Point(p) => Primitive::Point(*p + v),
            Primitive::Segment(s) => Primitive::Segment(s.translated(v)),
            Primitive::Arc(a) => Primitive::Arc(a.translated(v)),
        }
    }

    pub fn arc_length(&self) -> f64 {
        match self {
            Primitive::Point(_) => 0.0,
            Primitive::Segment(s) => s.len(),
            Primitive::Arc(a) => a.arc_length(),
        }
    }

    /// Point at normalized parameter `t` in [0, 1] along the primitive.
    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Primitive::Point(p) => *p,
            Primitive::Segment(s) => s.point_at(t),
            Primitive::Arc(a) => a.point_at_angle(a.start_angle + t * a.span()),
        }
    }
}

/// Minimum Euclidean distance between two primitives. Closed forms throughout
/// except arc–arc, which polishes a 1-D scan to 1e-12.
pub fn primitive_distance(a: &Primitive, b: &Primitive) -> f64 {
    use Primitive::*;
    match (a, b) {
        (Point(p), Point(q)) => p.dist(*q),
        (Point(p), Segment(s)) | (Segment(s), Point(p)) => point_seg_distance(*p, s),
        (Point(p), Arc(c)) | (Arc(c), Point(p)) => point_arc_distance(*p, c),
        (Segment(s), Segment(t)) => seg_seg_distance(s, t),
        (Segment(s), Arc(c)) | (Arc(c), Segment(s)) => seg_arc_distance(s, c),
        (Arc(c), Arc(d)) => arc_arc_distance(c, d),
    }
}

pub fn point_seg_distance(p: Point, s: &Segment) -> f64 {
    let d = s.b - s.a;
    let len2 = d.norm2();
    if len2 < 1e-30 {
        return p.dist(s.a);
    }
    let t = ((p - s.a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(s.a + d * t)
}

pub fn point_arc_distance(p: Point, arc: &UnitArc) -> f64 {
    let v = p - arc.center;
    let r = v.norm();
    if r < 1e-15 {
        // The arc center itself: every arc point is at exactly the radius.
        return UnitArc::RADIUS;
    }
    if arc.contains_angle(v.angle()) {
        return (r - UnitArc::RADIUS).abs();
    }
    let (e0, e1) = arc.endpoints();
    p.dist(e0).min(p.dist(e1))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

pub fn seg_seg_distance(s: &Segment, t: &Segment) -> f64 {
    // Proper crossing means distance zero; touching cases fall out of the
    // point-segment minima below.
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return 0.0;
    }
    point_seg_distance(s.a, t)
        .min(point_seg_distance(s.b, t))
        .min(point_seg_distance(t.a, s))
        .min(point_seg_distance(t.b, s))
}

/// Intersections of the segment's supporting line with the unit circle about
/// `center`, as segment parameters.
fn seg_circle_params(s: &Segment, center: Point) -> Option<(f64, f64)> {
    let d = s.b - s.a;
    let f = s.a - center;
    let aa = d.norm2();
    if aa < 1e-30 {
        return None;
    }
    let bb = 2.0 * f.dot(d);
    let cc = f.norm2() - 1.0;
    let disc = bb * bb - 4.0 * aa * cc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some(((-bb - sq) / (2.0 * aa), (-bb + sq) / (2.0 * aa)))
}

pub fn seg_arc_distance(s: &Segment, arc: &UnitArc) -> f64 {
    if let Some((t0, t1)) = seg_circle_params(s, arc.center) {
        for t in [t0, t1] {
            if (0.0..=1.0).contains(&t) {
                let p = s.point_at(t);
                if arc.contains_angle((p - arc.center).angle()) {
                    return 0.0;
                }
            }
        }
    }
    let (e0, e1) = arc.endpoints();
    let mut best = point_arc_distance(s.a, arc)
        .min(point_arc_distance(s.b, arc))
        .min(point_seg_distance(e0, s))
        .min(point_seg_distance(e1, s));
    // Interior stationary pair: foot of the perpendicular from the arc center
    // paired with its radial projection.
    let d = s.b - s.a;
    let len2 = d.norm2();
    if len2 >= 1e-30 {
        let t = (arc.center - s.a).dot(d) / len2;
        if t > 0.0 && t < 1.0 {
            let q = s.point_at(t);
            let v = q - arc.center;
            let r = v.norm();
            if r >= 1e-15 && arc.contains_angle(v.angle()) {
                best = best.min((r - UnitArc::RADIUS).abs());
            }
        }
    }
    best
}

pub fn arc_arc_distance(a: &UnitArc, b: &UnitArc) -> f64 {
    let dv = b.center - a.center;
    let d12 = dv.norm();
    if d12 < 1e-15 {
        // Same circle: zero iff the angular intervals meet.
        let overlap = a.contains_angle(b.start_angle)
            || a.contains_angle(b.end_angle)
            || b.contains_angle(a.start_angle);
        if overlap {
            return 0.0;
        }
    } else if d12 <= 2.0 {
        // The full circles intersect; zero iff a crossing lies on both arcs.
        let ang = dv.angle();
        let half = (d12 / 2.0).clamp(-1.0, 1.0).acos();
        for sign in [1.0, -1.0] {
            let p = a.point_at_angle(ang + sign * half);
            if a.contains_angle((p - a.center).angle()) && b.contains_angle((p - b.center).angle()) {
                return 0.0;
            }
        }
    } else {
        // Disjoint circles: the inner radial points realize the minimum when
        // both lie on their arcs.
        let pa = a.center + dv * (1.0 / d12);
        let pb = b.center - dv * (1.0 / d12);
        if a.contains_angle((pa - a.center).angle()) && b.contains_angle((pb - b.center).angle()) {
            return d12 - 2.0;
        }
    }
    let (a0, a1) = a.endpoints();
    let (b0, b1) = b.endpoints();
    let mut best = point_arc_distance(a0, b)
        .min(point_arc_distance(a1, b))
        .min(point_arc_distance(b0, a))
        .min(point_arc_distance(b1, a));
    // Bounded 1-D minimization over a's angle; the b-direction is exact.
    let eval = |ang: f64| point_arc_distance(a.point_at_angle(ang), b);
    let n = 32;
    let step = a.span() / n as f64;
    let mut best_ang = a.start_angle;
    let mut best_val = f64::INFINITY;
    for i in 0..=n {
        let ang = a.start_angle + step * i as f64;
        let v = eval(ang);
        if v < best_val {
            best_val = v;
            best_ang = ang;
        }
    }
    let lo = (best_ang - step).max(a.start_angle);
    let hi = (best_ang + step).min(a.end_angle);
    let (_, refined) = crate::scalar::golden_min(eval, lo, hi, 1e-12);
    best = best.min(best_val).min(refined);
    best
}

/// Maximum distance between two primitives (used for wavy tile diameters).
pub fn primitive_max_distance(a: &Primitive, b: &Primitive) -> f64 {
    use Primitive::*;
    match (a, b) {
        (Point(p), Point(q)) => p.dist(*q),
        (Point(p), Segment(s)) | (Segment(s), Point(p)) => p.dist(s.a).max(p.dist(s.b)),
        (Point(p), Arc(c)) | (Arc(c), Point(p)) => point_arc_max_distance(*p, c),
        (Segment(s), Segment(t)) => {
            let mut m: f64 = 0.0;
            for p in [s.a, s.b] {
                for q in [t.a, t.b] {
                    m = m.max(p.dist(q));
                }
            }
            m
        }
        (Segment(s), Arc(c)) | (Arc(c), Segment(s)) => {
            point_arc_max_distance(s.a, c).max(point_arc_max_distance(s.b, c))
        }
        (Arc(c), Arc(d)) => {
            // Coarse scan suffices: only used for diameter reports where the
            // arcs are tiny compared to the tile.
            let n = 64;
            let mut m: f64 = 0.0;
            for i in 0..=n {
                let ang = c.start_angle + c.span() * i as f64 / n as f64;
                m = m.max(point_arc_max_distance(c.point_at_angle(ang), d));
            }
            m
        }
    }
}

fn point_arc_max_distance(p: Point, arc: &UnitArc) -> f64 {
    let v = p - arc.center;
    let r = v.norm();
    let (e0, e1) = arc.endpoints();
    let mut best = p.dist(e0).max(p.dist(e1));
    if r >= 1e-15 {
        let far = (-v).angle();
        if arc.contains_angle(far) {
            best = best.max(r + UnitArc::RADIUS);
        }
    } else {
        best = best.max(UnitArc::RADIUS);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular() -> TileShape {
        TileShape::new(0.866025, 0.433013).unwrap()
    }

    #[test]
    fn regular_hexagon_vertices() {
        let hex = build_hexagon(regular()).unwrap();
        let v = hex.vertices();
        assert!((v[0].x - 0.0).abs() < 1e-6 && (v[0].y - 0.5).abs() < 1e-6);
        assert!((v[1].x + 0.433013).abs() < 1e-6 && (v[1].y - 0.25).abs() < 1e-5);
        for p in v {
            assert!((p.dist(Point::ORIGIN) - 0.5).abs() < 1e-12);
        }
        // Side length of the regular hexagon inscribed in a unit-diameter circle.
        assert!((hex.side(0).len() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn degenerate_shape_accepted() {
        let shape = TileShape::new(1.0, 0.5).unwrap();
        assert!(shape.is_degenerate());
        let hex = build_hexagon(shape).unwrap();
        let v = hex.vertices();
        assert!(v[1].dist(v[2]) < 1e-12, "B and C collapse at w=1");
    }

    #[test]
    fn shape_validation() {
        assert!(TileShape::new(1.2, 0.5).is_err());
        assert!(TileShape::new(0.8, 0.9).is_err());
        assert!(TileShape::new(0.8, -0.1).is_err());
        assert!(TileShape::new(f64::NAN, 0.0).is_err());
        assert!(TileShape::new(0.0, 0.0).is_err());
    }

    #[test]
    fn derived_vertex_ordinates() {
        // Direct evaluation of the closed-form vertex formulas for the wavy
        // m=6 shape, cross-checked against the vertex-radius invariant.
        let shape = TileShape::new(0.831425, 0.322944).unwrap();
        let (yv, yu) = shape.corner_ys();
        let xu = shape.u - shape.w / 2.0;
        assert!((xu - -0.0927685).abs() < 1e-7);
        assert!((yu - 0.4913187).abs() < 1e-7);
        assert!((yv - 0.2778188).abs() < 1e-7);
        assert!((xu * xu + yu * yu - 0.25).abs() < 1e-15);
        assert!((shape.w * shape.w / 4.0 + yv * yv - 0.25).abs() < 1e-15);
    }

    #[test]
    fn hexagon_invariants_on_grid() {
        let n = 64;
        for i in 0..n {
            let w = (i + 1) as f64 / n as f64;
            for j in 0..n {
                let u = w * j as f64 / (n - 1) as f64;
                let shape = TileShape::new(w, u).unwrap();
                let hex = build_hexagon(shape).unwrap();
                let v = hex.vertices();
                for t in 0..3 {
                    let s = v[t + 3] + v[t];
                    assert!(s.norm() < 1e-12, "central symmetry at w={w} u={u}");
                }
                for p in v {
                    assert!((p.dist(Point::ORIGIN) - 0.5).abs() < 1e-12);
                }
                assert!((polygon_diameter(&hex) - 1.0).abs() < 1e-12);
                // ccw and convex (allowing repeated vertices).
                for t in 0..6 {
                    let a = v[t];
                    let b = v[(t + 1) % 6];
                    let c = v[(t + 2) % 6];
                    assert!((b - a).cross(c - b) > -1e-12, "convex ccw at w={w} u={u}");
                }
                // Tiling exactness: area equals the lattice determinant.
                let (ei, ej) = shape.lattice_basis();
                let det = ei.cross(ej);
                let (yv, yu) = shape.corner_ys();
                assert!((hex.area() - det).abs() < 1e-12);
                assert!((hex.area() - w * (yu + yv)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_square_diameter() {
        let sq = Hexagon::from_vertices(
            [
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
                Point::new(0.0, 1.0),
                Point::new(0.0, 0.0),
            ],
            Point::new(0.5, 0.5),
        );
        assert!((polygon_diameter(&sq) - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn overlapping_polygons_distance_zero() {
        let hex = build_hexagon(regular()).unwrap();
        assert_eq!(polygon_distance(&hex, &hex), 0.0);
        let close = hex.translated(Point::new(0.1, 0.05));
        assert_eq!(polygon_distance(&hex, &close), 0.0);
    }

    #[test]
    fn containment_distance_zero() {
        let sq = Hexagon::from_vertices(
            [
                Point::new(-2.0, -2.0),
                Point::new(2.0, -2.0),
                Point::new(2.0, 2.0),
                Point::new(-2.0, 2.0),
                Point::new(-2.0, 2.0),
                Point::new(-2.0, -2.0),
            ],
            Point::ORIGIN,
        );
        let hex = build_hexagon(regular()).unwrap();
        assert_eq!(polygon_distance(&sq, &hex), 0.0);
        assert_eq!(polygon_distance(&hex, &sq), 0.0);
    }

    #[test]
    fn parallel_segment_distance() {
        let s = Segment::new(Point::new(-1.0, 2.0), Point::new(1.0, 2.0));
        let t = Segment::new(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        assert!((seg_seg_distance(&s, &t) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn point_to_arc_radius() {
        let arc = UnitArc::new(Point::ORIGIN, 0.3, 1.1).unwrap();
        assert_eq!(point_arc_distance(Point::ORIGIN, &arc), 1.0);
        let off = Point::new(0.5_f64.cos() * 0.25, 0.5_f64.sin() * 0.25);
        assert!((point_arc_distance(off, &arc) - 0.75).abs() < 1e-12);
    }

    fn sample_primitive(p: &Primitive, step: f64) -> Vec<Point> {
        let len = p.arc_length();
        let n = ((len / step).ceil() as usize).max(1);
        (0..=n).map(|i| p.point_at(i as f64 / n as f64)).collect()
    }

    fn sampled_distance(a: &Primitive, b: &Primitive, step: f64) -> f64 {
        let pa = sample_primitive(a, step);
        let pb = sample_primitive(b, step);
        let mut best = f64::INFINITY;
        for p in &pa {
            for q in &pb {
                best = best.min(p.dist2(*q));
            }
        }
        best.sqrt()
    }

    #[test]
    fn seg_arc_matches_sampling() {
        let fixtures = [
            (
                Segment::new(Point::new(-0.8, 1.4), Point::new(0.9, 1.1)),
                UnitArc::new(Point::new(0.1, -0.2), 0.9, 2.0).unwrap(),
            ),
            (
                Segment::new(Point::new(1.4, -0.5), Point::new(1.6, 0.8)),
                UnitArc::new(Point::new(-0.3, 0.1), -0.4, 0.6).unwrap(),
            ),
            (
                Segment::new(Point::new(0.0, 0.2), Point::new(0.4, 0.3)),
                UnitArc::new(Point::new(0.0, 0.0), 0.1, 1.2).unwrap(),
            ),
        ];
        for (seg, arc) in fixtures {
            let exact = seg_arc_distance(&seg, &arc);
            let sampled = sampled_distance(
                &Primitive::Segment(seg),
                &Primitive::Arc(arc),
                1e-5,
            );
            assert!(
                (exact - sampled).abs() < 1e-6,
                "seg-arc exact {exact} vs sampled {sampled}"
            );
        }
    }

    #[test]
    fn arc_arc_matches_sampling() {
        let a = UnitArc::new(Point::new(0.0, 0.0), 0.2, 1.4).unwrap();
        let fixtures = [
            UnitArc::new(Point::new(2.6, 0.7), 2.8, 4.0).unwrap(),
            UnitArc::new(Point::new(1.2, 1.9), 3.5, 4.6).unwrap(),
            UnitArc::new(Point::new(0.4, -0.3), 1.8, 2.9).unwrap(),
        ];
        for b in fixtures {
            let exact = arc_arc_distance(&a, &b);
            let sampled = sampled_distance(&Primitive::Arc(a), &Primitive::Arc(b), 1e-5);
            assert!(
                exact <= sampled + 1e-9 && (exact - sampled).abs() < 1e-5,
                "arc-arc exact {exact} vs sampled {sampled}"
            );
        }
    }

    #[test]
    fn arc_span_validation() {
        assert!(UnitArc::new(Point::ORIGIN, 0.0, 3.5).is_err());
        assert!(UnitArc::new(Point::ORIGIN, 1.0, 1.0).is_err());
        assert!(UnitArc::new(Point::ORIGIN, 1.0, 0.5).is_err());
    }
}
