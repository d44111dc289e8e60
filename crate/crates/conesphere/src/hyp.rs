//! Upper half-plane primitives: points, orientation-preserving isometries as
//! projective 2x2 matrices, elliptic rotations, geodesic directions,
//! reflections and triangle placement.
//!
//! All isometry arithmetic happens on real matrices with determinant one,
//! canonicalized up to sign, so holonomy products stay structurally exact.
//! The Poincaré disk shows up only in net output (see [`crate::net`]).

use crate::trig::{self, TrigError};
use thiserror::Error;

pub const SIGN_CANON_TOL: f64 = 1e-9;
pub const ELLIPTIC_TRACE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypError {
    #[error("point ({x}, {y}) is not in the upper half plane")]
    NotInUpperHalfPlane { x: f64, y: f64 },
    #[error("matrix determinant {det} is not 1")]
    BadDeterminant { det: f64 },
    #[error("isometry is not elliptic: |trace| = {trace_abs}")]
    NotElliptic { trace_abs: f64 },
    #[error(transparent)]
    Trig(#[from] TrigError),
}

/// A point of the hyperbolic plane in upper half-plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, HypError> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(HypError::NotInUpperHalfPlane { x, y });
        }
        Ok(HPoint { x, y })
    }

    /// The reference point `i`.
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };
}

/// Hyperbolic distance between two points.
pub fn dist(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    arg.max(1.0).acosh()
}

/// An orientation-preserving isometry of the upper half plane: a real 2x2
/// matrix of determinant 1, canonicalized up to sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Isometry {
    /// Build from matrix entries, normalizing the determinant to 1 and the
    /// sign to canonical form. Rejects matrices whose determinant is not
    /// within `1e-12` of 1 after sign normalization.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, HypError> {
        let det = a * d - b * c;
        if !(det > 0.0) || (det - 1.0).abs() > 1e-12 * det.max(1.0) {
            return Err(HypError::BadDeterminant { det });
        }
        let s = det.sqrt();
        Ok(Isometry { a: a / s, b: b / s, c: c / s, d: d / s }.canonical())
    }

    pub fn identity() -> Self {
        Isometry { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Flip the overall sign so the first entry larger than `1e-9` in
    /// magnitude is positive.
    pub fn canonical(self) -> Self {
        for v in [self.a, self.b, self.c, self.d] {
            if v.abs() > SIGN_CANON_TOL {
                return if v < 0.0 {
                    Isometry { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
                } else {
                    self
                };
            }
        }
        self
    }

    pub fn inverse(self) -> Self {
        Isometry { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    /// Möbius action on a point.
    pub fn apply(self, p: HPoint) -> HPoint {
        let den = (self.c * p.x + self.d).powi(2) + (self.c * p.y).powi(2);
        let x = ((self.a * p.x + self.b) * (self.c * p.x + self.d) + self.a * self.c * p.y * p.y)
            / den;
        let y = p.y / den;
        HPoint { x, y }
    }

    /// The isometry `z -> y z + x` taking `i` to `p`, preserving directions
    /// at the reference point.
    pub fn to_point(p: HPoint) -> Self {
        let s = p.y.sqrt();
        Isometry { a: s, b: p.x / s, c: 0.0, d: 1.0 / s }.canonical()
    }

    /// Frobenius distance between projective classes (minimum over signs).
    pub fn proj_dist(self, other: Isometry) -> f64 {
        let m = |s: f64| {
            ((self.a - s * other.a).powi(2)
                + (self.b - s * other.b).powi(2)
                + (self.c - s * other.c).powi(2)
                + (self.d - s * other.d).powi(2))
            .sqrt()
        };
        m(1.0).min(m(-1.0))
    }
}

impl std::ops::Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        Isometry {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .canonical()
    }
}

/// Counterclockwise rotation by `angle` about `center`.
///
/// At the reference point this is `[[cos(a/2), sin(a/2)], [-sin(a/2),
/// cos(a/2)]]`; elsewhere its conjugate by the translation to `center`.
pub fn elliptic(center: HPoint, angle: f64) -> Isometry {
    let h = angle / 2.0;
    let r = Isometry { a: h.cos(), b: h.sin(), c: -h.sin(), d: h.cos() };
    let t = Isometry::to_point(center);
    t * r * t.inverse()
}

/// Fixed point and counterclockwise rotation angle in `(0, 2pi)` of an
/// elliptic isometry. Rejects matrices with `|trace| >= 2 - 1e-9`;
/// near-parabolic inputs are not guessed at.
pub fn elliptic_data(m: Isometry) -> Result<(HPoint, f64), HypError> {
    let tr = m.trace();
    if tr.abs() >= 2.0 - ELLIPTIC_TRACE_MARGIN {
        return Err(HypError::NotElliptic { trace_abs: tr.abs() });
    }
    // c = 0 would force |trace| = |a + 1/a| >= 2.
    let disc = (4.0 - tr * tr).sqrt();
    let x = (m.a - m.d) / (2.0 * m.c);
    let y = disc / (2.0 * m.c.abs());
    let center = HPoint { x, y };
    // The derivative at the fixed point is 1/(c z + d)^2 = e^{i angle}; this
    // resolves the counterclockwise branch that the trace alone cannot.
    let re = m.c * x + m.d;
    let im = m.c * y;
    let tau = std::f64::consts::TAU;
    let mut a = (-2.0 * im.atan2(re)) % tau;
    if a <= 0.0 {
        a += tau;
    }
    Ok((center, a))
}

/// Initial direction (conformal angle against the horizontal) of the
/// geodesic from `p` to `q`, for `p != q`.
pub fn direction(p: HPoint, q: HPoint) -> f64 {
    let w = Isometry::to_point(p).inverse().apply(q);
    if w.x.abs() < 1e-300 {
        return if w.x * w.x + w.y * w.y > 1.0 {
            std::f64::consts::FRAC_PI_2
        } else {
            -std::f64::consts::FRAC_PI_2
        };
    }
    let xc = (w.x * w.x + w.y * w.y - 1.0) / (2.0 * w.x);
    let s = w.x.signum();
    (s * xc).atan2(s)
}

/// Point at hyperbolic distance `t` from `p` along the geodesic with initial
/// direction `dir`.
pub fn geodesic_point(p: HPoint, dir: f64, t: f64) -> HPoint {
    let up = HPoint { x: 0.0, y: t.exp() };
    let rot = elliptic(HPoint::I, dir - std::f64::consts::FRAC_PI_2);
    Isometry::to_point(p).apply(rot.apply(up))
}

/// Wrap an angle into `[0, 2pi)`.
pub fn wrap_tau(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut r = a % tau;
    if r < 0.0 {
        r += tau;
    }
    if r >= tau {
        r -= tau;
    }
    r
}

/// Unsigned angle at `v` between the geodesic rays towards `a` and `b`,
/// in `[0, pi]`.
pub fn angle_at(v: HPoint, a: HPoint, b: HPoint) -> f64 {
    let d = wrap_tau(direction(v, a) - direction(v, b));
    d.min(std::f64::consts::TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Cw,
    Ccw,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Cw => Orientation::Ccw,
            Orientation::Ccw => Orientation::Cw,
        }
    }
}

/// Orientation of the vertex triple `(v1, v2, v3)`.
pub fn orientation(v1: HPoint, v2: HPoint, v3: HPoint) -> Orientation {
    let d = wrap_tau(direction(v1, v3) - direction(v1, v2));
    if d < std::f64::consts::PI {
        Orientation::Ccw
    } else {
        Orientation::Cw
    }
}

/// A placed hyperbolic triangle. Side `i` is opposite vertex `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTriangle {
    pub vertices: [HPoint; 3],
    pub angles: [f64; 3],
    pub sides: [f64; 3],
    pub orientation: Orientation,
}

impl HTriangle {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI - self.angles.iter().sum::<f64>()
    }

    /// Rebuild the derived data (angles, sides, orientation) from three
    /// placed vertices.
    pub fn from_vertices(v: [HPoint; 3]) -> Self {
        let sides = [dist(v[1], v[2]), dist(v[0], v[2]), dist(v[0], v[1])];
        let angles = [
            angle_at(v[0], v[1], v[2]),
            angle_at(v[1], v[0], v[2]),
            angle_at(v[2], v[0], v[1]),
        ];
        HTriangle { vertices: v, angles, sides, orientation: orientation(v[0], v[1], v[2]) }
    }
}

/// Where and how to place a triangle: first vertex position, direction of
/// the edge towards the second vertex, and the orientation of the triple.
#[derive(Debug, Clone, Copy)]
pub struct Anchor {
    pub at: HPoint,
    pub dir: f64,
    pub orientation: Orientation,
}

impl Anchor {
    pub fn standard() -> Self {
        Anchor { at: HPoint::I, dir: 0.0, orientation: Orientation::Cw }
    }
}

/// Place the triangle with interior angles `(t1, t2, t3)` at the anchor.
/// Side lengths come from the law of cosines for angles; fails with
/// `AngleSum` when the angles do not describe a hyperbolic triangle.
pub fn triangle_from_angles(t1: f64, t2: f64, t3: f64, anchor: Anchor) -> Result<HTriangle, HypError> {
    let s12 = trig::loa_side(t1, t2, t3)?;
    let s13 = trig::loa_side(t1, t3, t2)?;
    let s23 = trig::loa_side(t2, t3, t1)?;
    let v1 = anchor.at;
    let v2 = geodesic_point(v1, anchor.dir, s12);
    // Interior wedge at v1 opens counterclockwise from the edge to v2 for a
    // counterclockwise triple, clockwise otherwise.
    let sgn = match anchor.orientation {
        Orientation::Ccw => 1.0,
        Orientation::Cw => -1.0,
    };
    let v3 = geodesic_point(v1, anchor.dir + sgn * t1, s13);
    Ok(HTriangle {
        vertices: [v1, v2, v3],
        angles: [t1, t2, t3],
        sides: [s23, s13, s12],
        orientation: anchor.orientation,
    })
}

/// Reflect `z` across the complete geodesic through `p` and `q`.
pub fn reflect(p: HPoint, q: HPoint, z: HPoint) -> HPoint {
    let f = frame(p, q);
    let w = f.apply(z);
    f.inverse().apply(HPoint { x: -w.x, y: w.y })
}

/// Isometry taking `p` to the reference point and the ray `p -> q` to the
/// upward vertical ray.
pub fn frame(p: HPoint, q: HPoint) -> Isometry {
    let psi = direction(p, q);
    elliptic(HPoint::I, std::f64::consts::FRAC_PI_2 - psi) * Isometry::to_point(p).inverse()
}

/// Orientation-preserving isometry taking the ordered pair `(p1, q1)` to
/// `(p2, q2)`; the pairs must be at equal hyperbolic distance.
pub fn match_segment(p1: HPoint, q1: HPoint, p2: HPoint, q2: HPoint) -> Isometry {
    frame(p2, q2).inverse() * frame(p1, q1)
}

/// Does the open geodesic segment `a1 a2` properly cross the open segment
/// `b1 b2`? Touching within `tol` of an endpoint does not count.
pub fn segments_cross(a1: HPoint, a2: HPoint, b1: HPoint, b2: HPoint, tol: f64) -> bool {
    let f = frame(a1, a2);
    let la = dist(a1, a2);
    let w1 = f.apply(b1);
    let w2 = f.apply(b2);
    // The a-segment is now the vertical axis between heights 1 and e^la.
    if w1.x.abs() < tol && w2.x.abs() < tol {
        return false;
    }
    if w1.x.signum() == w2.x.signum() && w1.x.abs() > tol && w2.x.abs() > tol {
        return false;
    }
    // Geodesic through w1, w2: circle orthogonal to the real axis.
    let n1 = w1.x * w1.x + w1.y * w1.y;
    let n2 = w2.x * w2.x + w2.y * w2.y;
    let dx = w1.x - w2.x;
    if dx.abs() < 1e-14 {
        return false;
    }
    let xc = (n1 - n2) / (2.0 * dx);
    let r2 = (w1.x - xc).powi(2) + w1.y * w1.y;
    let y2 = r2 - xc * xc;
    if y2 <= 0.0 {
        return false;
    }
    let y = y2.sqrt();
    // Crossing point must lie strictly inside both segments.
    let t = y.ln();
    if t < tol || t > la - tol {
        return false;
    }
    let th1 = w1.y.atan2(w1.x - xc);
    let th2 = w2.y.atan2(w2.x - xc);
    let thx = y.atan2(-xc);
    let (lo, hi) = if th1 < th2 { (th1, th2) } else { (th2, th1) };
    thx > lo + 1e-14 && thx < hi - 1e-14
}

/// Is `p` strictly inside the triangle?
pub fn triangle_contains(t: &HTriangle, p: HPoint, tol: f64) -> bool {
    let side = |a: HPoint, b: HPoint, z: HPoint| {
        let w = frame(a, b).apply(z);
        w.x
    };
    let s1 = side(t.vertices[0], t.vertices[1], p);
    let s2 = side(t.vertices[1], t.vertices[2], p);
    let s3 = side(t.vertices[2], t.vertices[0], p);
    (s1 > tol && s2 > tol && s3 > tol) || (s1 < -tol && s2 < -tol && s3 < -tol)
}

/// Do the interiors of two placed triangles intersect?
pub fn triangles_overlap(t1: &HTriangle, t2: &HTriangle, tol: f64) -> bool {
    for i in 0..3 {
        if triangle_contains(t1, t2.vertices[i], tol) || triangle_contains(t2, t1.vertices[i], tol)
        {
            return true;
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if segments_cross(
                t1.vertices[i],
                t1.vertices[(i + 1) % 3],
                t2.vertices[j],
                t2.vertices[(j + 1) % 3],
                tol,
            ) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn rand_point(rng: &mut StdRng) -> HPoint {
        HPoint { x: rng.gen_range(-2.0..2.0), y: rng.gen_range(0.2..3.0) }
    }

    fn rand_isometry(rng: &mut StdRng) -> Isometry {
        let p = rand_point(rng);
        let ang = rng.gen_range(0.01..6.2);
        elliptic(p, ang) * Isometry::to_point(rand_point(rng))
    }

    #[test]
    fn dist_identity_and_vertical() {
        let p = HPoint::I;
        assert_eq!(dist(p, p), 0.0);
        let q = HPoint { x: 0.0, y: std::f64::consts::E };
        assert!((dist(p, q) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dist_isometry_invariant() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let p = rand_point(&mut rng);
            let q = rand_point(&mut rng);
            let d0 = dist(p, q);
            let m = rand_isometry(&mut rng);
            let d1 = dist(m.apply(p), m.apply(q));
            assert!((d0 - d1).abs() < 1e-11, "{d0} vs {d1}");
        }
    }

    #[test]
    fn elliptic_reference_matrix() {
        let a = 1.234;
        let m = elliptic(HPoint::I, a);
        let r = Isometry {
            a: (a / 2.0).cos(),
            b: (a / 2.0).sin(),
            c: -(a / 2.0).sin(),
            d: (a / 2.0).cos(),
        }
        .canonical();
        assert!(m.proj_dist(r) < 1e-12);
    }

    #[test]
    fn elliptic_zero_is_identity() {
        let m = elliptic(HPoint { x: 0.4, y: 2.0 }, 0.0);
        assert!(m.proj_dist(Isometry::identity()) < 1e-12);
    }

    #[test]
    fn elliptic_fixes_center() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..100 {
            let p = rand_point(&mut rng);
            let a = rng.gen_range(0.01..6.27);
            let q = elliptic(p, a).apply(p);
            assert!(dist(p, q) < 1e-10);
        }
    }

    #[test]
    fn elliptic_data_round_trip() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..1000 {
            let p = rand_point(&mut rng);
            let a = rng.gen_range(0.05..(2.0 * PI - 0.05));
            let (c, ang) = elliptic_data(elliptic(p, a)).unwrap();
            assert!(dist(c, p) < 1e-9, "center off by {}", dist(c, p));
            assert!((ang - a).abs() < 1e-9, "angle {a} vs {ang}");
        }
    }

    #[test]
    fn elliptic_data_rejects_identity() {
        assert!(matches!(
            elliptic_data(Isometry::identity()),
            Err(HypError::NotElliptic { .. })
        ));
    }

    #[test]
    fn rotation_direction_is_counterclockwise() {
        // A small ccw rotation about i moves the point 2i towards negative x:
        // the tangent e^{i a} at i turns the upward direction left.
        let m = elliptic(HPoint::I, 0.3);
        let q = m.apply(HPoint { x: 0.0, y: 2.0 });
        assert!(q.x < 0.0);
    }

    #[test]
    fn triangle_from_angles_equilateral() {
        let t = PI / 6.0;
        let tri = triangle_from_angles(t, t, t, Anchor::standard()).unwrap();
        let expect = ((t.cos() * t.cos() + t.cos()) / (t.sin() * t.sin())).acosh();
        for s in tri.sides {
            assert!((s - expect).abs() < 1e-12);
        }
        assert!((tri.area() - (PI - 3.0 * t)).abs() < 1e-12);
    }

    #[test]
    fn triangle_from_angles_measured_angles_match() {
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..200 {
            let mut t = [0.0; 3];
            loop {
                for v in t.iter_mut() {
                    *v = rng.gen_range(0.05..1.5);
                }
                if t.iter().sum::<f64>() < PI - 0.05 {
                    break;
                }
            }
            let orient = if rng.gen_bool(0.5) { Orientation::Cw } else { Orientation::Ccw };
            let anchor = Anchor { at: rand_point(&mut rng), dir: rng.gen_range(-3.0..3.0), orientation: orient };
            let tri = triangle_from_angles(t[0], t[1], t[2], anchor).unwrap();
            for i in 0..3 {
                let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                let measured = angle_at(tri.vertices[i], tri.vertices[a], tri.vertices[b]);
                assert!((measured - t[i]).abs() < 1e-9, "angle {i}: {measured} vs {}", t[i]);
                let side = dist(tri.vertices[a], tri.vertices[b]);
                assert!((side - tri.sides[i]).abs() < 1e-9);
            }
            assert_eq!(orientation(tri.vertices[0], tri.vertices[1], tri.vertices[2]), orient);
        }
    }

    #[test]
    fn triangle_from_angles_rejects_angle_sum() {
        assert!(triangle_from_angles(PI / 3.0, PI / 3.0, PI / 3.0, Anchor::standard()).is_err());
    }

    #[test]
    fn canonical_sign_projective_associativity() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let a = rand_isometry(&mut rng);
            let b = rand_isometry(&mut rng);
            let c = rand_isometry(&mut rng);
            assert!(((a * b) * c).proj_dist(a * (b * c)) < 1e-9);
        }
    }

    #[test]
    fn reflect_is_an_involution_fixing_the_line() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..50 {
            let p = rand_point(&mut rng);
            let q = rand_point(&mut rng);
            if dist(p, q) < 0.1 {
                continue;
            }
            let z = rand_point(&mut rng);
            let z2 = reflect(p, q, reflect(p, q, z));
            assert!(dist(z, z2) < 1e-9);
            assert!(dist(reflect(p, q, p), p) < 1e-10);
            assert!(dist(reflect(p, q, q), q) < 1e-10);
        }
    }

    #[test]
    fn segments_cross_basic() {
        let a1 = HPoint { x: -1.0, y: 1.0 };
        let a2 = HPoint { x: 1.0, y: 1.0 };
        let b1 = HPoint { x: 0.0, y: 0.5 };
        let b2 = HPoint { x: 0.0, y: 2.0 };
        assert!(segments_cross(a1, a2, b1, b2, 1e-12));
        let b3 = HPoint { x: 2.0, y: 0.5 };
        let b4 = HPoint { x: 2.0, y: 2.0 };
        assert!(!segments_cross(a1, a2, b3, b4, 1e-12));
    }

    #[test]
    fn match_segment_maps_pairs() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let p1 = rand_point(&mut rng);
            let dir = rng.gen_range(-3.0..3.0);
            let len = rng.gen_range(0.3..2.0);
            let q1 = geodesic_point(p1, dir, len);
            let p2 = rand_point(&mut rng);
            let dir2 = rng.gen_range(-3.0..3.0);
            let q2 = geodesic_point(p2, dir2, len);
            let m = match_segment(p1, q1, p2, q2);
            assert!(dist(m.apply(p1), p2) < 1e-9);
            assert!(dist(m.apply(q1), q2) < 1e-9);
        }
    }
}
