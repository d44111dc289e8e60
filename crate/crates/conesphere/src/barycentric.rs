//! Point-mass systems and barycentric coordinates on hyperbolic triangles.
//!
//! A point-mass is a pair `(X, x)` of a point and a positive weight. Two
//! point-masses combine into their center of mass `(Z, z)`: the unique `Z`
//! on the segment `XY` with `x sinh(d(X,Z)) = y sinh(d(Y,Z))` and
//! `z = x cosh(d(X,Z)) + y cosh(d(Y,Z))`. The combination is commutative and
//! associative, which makes barycentric coordinates on triangles well
//! defined and edge-compatible across triangles sharing a side length.

use crate::hyp::{self, HPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub point: HPoint,
    pub mass: f64,
}

impl PointMass {
    pub fn new(point: HPoint, mass: f64) -> Self {
        assert!(mass > 0.0, "point-mass weight must be positive");
        PointMass { point, mass }
    }
}

/// Center of mass of two point-masses.
///
/// Solved in a normalized frame: move `X` to the reference point and `Y`
/// onto the upward ray, where the balance equation
/// `x sinh(t) = y sinh(D - t)` has the closed-form solution
/// `tanh(t) = y sinh(D) / (x + y cosh(D))`.
pub fn pm_combine(a: PointMass, b: PointMass) -> PointMass {
    let d = hyp::dist(a.point, b.point);
    if d < 1e-14 {
        return PointMass { point: a.point, mass: a.mass + b.mass };
    }
    let t = (b.mass * d.sinh() / (a.mass + b.mass * d.cosh())).atanh();
    let dir = hyp::direction(a.point, b.point);
    let z = hyp::geodesic_point(a.point, dir, t);
    let mass = a.mass * t.cosh() + b.mass * (d - t).cosh();
    PointMass { point: z, mass }
}

/// Point at parameter `t` of the barycentric parameterization of the segment
/// `XY`: `Z_t = ((X, 1-t) * (Y, t)).point`, with the endpoints handled as
/// exact limits.
pub fn segment_point(x: HPoint, y: HPoint, t: f64) -> HPoint {
    if t <= 0.0 {
        return x;
    }
    if t >= 1.0 {
        return y;
    }
    pm_combine(PointMass::new(x, 1.0 - t), PointMass::new(y, t)).point
}

/// Barycentric point of a triangle at simplex coordinates `t`. Zero masses
/// drop out exactly rather than being approximated.
pub fn bary_point(x1: HPoint, x2: HPoint, x3: HPoint, t: [f64; 3]) -> HPoint {
    let mut acc: Option<PointMass> = None;
    for (p, w) in [(x1, t[0]), (x2, t[1]), (x3, t[2])] {
        if w <= 0.0 {
            continue;
        }
        let pm = PointMass::new(p, w);
        acc = Some(match acc {
            None => pm,
            Some(prev) => pm_combine(prev, pm),
        });
    }
    acc.expect("at least one barycentric coordinate must be positive").point
}
