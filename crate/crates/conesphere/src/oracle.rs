//! Placement-based reference computations. Everything here measures
//! quantities on explicitly placed hyperbolic figures (points, reflections,
//! bisection on rays) rather than through the closed-form expressions of
//! [`crate::trig`] and [`crate::realize`], so the test suites and the
//! `selftest` command can cross-check the production formulas against
//! independently developed geometry.

use crate::assembly::SamosaAssembly;
use crate::hyp::{self, Anchor, HPoint, HTriangle, Orientation};
use crate::realize::{CurveIntrinsics, HatIntrinsics, IntrinsicParams, VPieceIntrinsics};
use crate::trig::{KinkData, VCase, VPieceEdges};

/// Kink data measured on the placed isosceles triangle: two sides of the
/// slit length meeting at the whole singularity's apex angle.
pub fn kink_oracle(ell: f64, beta: f64) -> KinkData {
    let pi = std::f64::consts::PI;
    if beta == pi {
        return KinkData { c: 2.0 * ell, kappa: 0.0 };
    }
    let apex = beta.min(2.0 * pi - beta);
    let up = std::f64::consts::FRAC_PI_2;
    let p1 = hyp::geodesic_point(HPoint::I, up - apex / 2.0, ell);
    let p2 = hyp::geodesic_point(HPoint::I, up + apex / 2.0, ell);
    let c = hyp::dist(p1, p2);
    let base = hyp::angle_at(p1, HPoint::I, p2);
    let sign = if beta < pi { 1.0 } else { -1.0 };
    KinkData { c, kappa: sign * 2.0 * base }
}

/// Loop length around a cone point measured from placed endpoints.
pub fn cone_loop_oracle(lambda: f64, alpha: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let apex = alpha.min(2.0 * pi - alpha);
    let up = std::f64::consts::FRAC_PI_2;
    let p1 = hyp::geodesic_point(HPoint::I, up - apex / 2.0, lambda);
    let p2 = hyp::geodesic_point(HPoint::I, up + apex / 2.0, lambda);
    hyp::dist(p1, p2)
}

/// A placed samosa hemisphere with its slits developed: the triangle
/// carrying the downstream slit (or the only slit), the far hemisphere's
/// un-slit corner developed across the segment joining the slit corners, and
/// the slit endpoints.
pub struct PlacedSlits {
    pub tri: HTriangle,
    pub far_corner: HPoint,
    /// Slit endpoints, one per slit of the samosa (downstream first for
    /// middle samosas).
    pub ends: Vec<HPoint>,
    /// Slit segments (corner, end).
    pub segs: Vec<(HPoint, HPoint)>,
    pub same_hemisphere: bool,
}

fn ray_dir(tri: &HTriangle, corner: usize, phi_abs: f64) -> f64 {
    let here = tri.vertices[corner];
    let d_ref = hyp::direction(here, tri.vertices[(corner + 2) % 3]);
    let d_other = hyp::direction(here, tri.vertices[(corner + 1) % 3]);
    let delta = hyp::wrap_tau(d_other - d_ref);
    let sgn = if delta < std::f64::consts::PI { 1.0 } else { -1.0 };
    d_ref + sgn * phi_abs
}

/// Place samosa `k`'s hemisphere triangle and slits.
pub fn place_slits(assembly: &SamosaAssembly, k: usize) -> PlacedSlits {
    let th = assembly.corner_angles(k).unwrap();
    let tri = hyp::triangle_from_angles(
        th[0] / 2.0,
        th[1] / 2.0,
        th[2] / 2.0,
        Anchor { at: HPoint::I, dir: 0.0, orientation: Orientation::Ccw },
    )
    .unwrap();
    let far_corner = hyp::reflect(tri.vertices[0], tri.vertices[2], tri.vertices[1]);
    let slits = assembly.slits_of(k).unwrap();
    let same_hemisphere = slits.iter().all(|s| s.hemisphere == slits[0].hemisphere);
    let mirror = HTriangle::from_vertices([tri.vertices[0], far_corner, tri.vertices[2]]);
    let mut ends = Vec::new();
    let mut segs = Vec::new();
    for (i, s) in slits.iter().enumerate() {
        let in_main = i == 0 || s.hemisphere == slits[0].hemisphere;
        let t = if in_main { &tri } else { &mirror };
        let dir = ray_dir(t, s.corner, s.phi.abs());
        let end = hyp::geodesic_point(t.vertices[s.corner], dir, s.ell);
        ends.push(end);
        segs.push((t.vertices[s.corner], end));
    }
    PlacedSlits { tri, far_corner, ends, segs, same_hemisphere }
}

/// Distance along the ray from `start` at direction `dir` to the geodesic
/// through `p`, `q`, found by bisection on the side coordinate.
pub fn ray_line_distance(start: HPoint, dir: f64, p: HPoint, q: HPoint, hi0: f64) -> f64 {
    let f = hyp::frame(p, q);
    let side = |t: f64| f.apply(hyp::geodesic_point(start, dir, t)).x;
    let s0 = side(1e-12);
    let mut lo = 0.0;
    let mut hi = hi0;
    let mut grew = 0;
    while side(hi).signum() == s0.signum() {
        hi *= 2.0;
        grew += 1;
        assert!(grew < 60, "ray never crosses the line");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if side(mid).signum() == s0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximal slit length measured by shooting the slit ray in a placed
/// hemisphere until it hits the opposite side.
pub fn slit_max_one_oracle(theta: [f64; 3], corner: usize, phi_abs: f64) -> f64 {
    let tri = hyp::triangle_from_angles(
        theta[0] / 2.0,
        theta[1] / 2.0,
        theta[2] / 2.0,
        Anchor { at: HPoint::I, dir: 0.0, orientation: Orientation::Ccw },
    )
    .unwrap();
    let dir = ray_dir(&tri, corner, phi_abs);
    let a = tri.vertices[(corner + 1) % 3];
    let b = tri.vertices[(corner + 2) % 3];
    ray_line_distance(tri.vertices[corner], dir, a, b, 1.0)
}

/// Where the two slit continuations of a two-slit hemisphere meet: distances
/// from each corner, measured by intersecting the placed rays.
pub fn slit_meet_oracle(assembly: &SamosaAssembly, k: usize) -> (f64, f64) {
    let pic = place_slits(assembly, k);
    assert!(pic.same_hemisphere);
    let (c_a, s_a) = pic.segs[0];
    let (c_b, s_b) = pic.segs[1];
    let dir_a = hyp::direction(c_a, s_a);
    let dir_b = hyp::direction(c_b, s_b);
    // Extend ray b far enough to act as a line through the meeting point.
    let far_b = hyp::geodesic_point(c_b, dir_b, 5.0 + assembly.equator_lengths(k).unwrap()[1]);
    let t_a = ray_line_distance(c_a, dir_a, c_b, far_b, 0.5);
    let far_a = hyp::geodesic_point(c_a, dir_a, 5.0 + assembly.equator_lengths(k).unwrap()[1]);
    let t_b = ray_line_distance(c_b, dir_b, c_a, far_a, 0.5);
    (t_a, t_b)
}

/// Hat edges measured on placed geometry.
pub fn hat_oracle(assembly: &SamosaAssembly, low: bool) -> HatIntrinsics {
    let n = assembly.n;
    let k = if low { 1 } else { assembly.num_samosas() };
    let pic = place_slits(assembly, k);
    let s = pic.ends[0];
    let (corner_p, corner_q, alpha_p, alpha_q) = if low {
        (0usize, 1usize, assembly.alpha[0], assembly.alpha[1])
    } else {
        (1, 2, assembly.alpha[n - 2], assembly.alpha[n - 1])
    };
    let lambda_p = hyp::dist(s, pic.tri.vertices[corner_p]);
    let lambda_q = hyp::dist(s, pic.tri.vertices[corner_q]);
    HatIntrinsics {
        lambda_p,
        lambda_q,
        delta_p: cone_loop_oracle(lambda_p, alpha_p),
        delta_q: cone_loop_oracle(lambda_q, alpha_q),
    }
}

/// Blocked arcs of a V-piece, measured by segment intersections in the
/// placed picture: `(zeta_a, zeta'_a, zeta_b, zeta'_b)`.
pub fn blocked_arcs(assembly: &SamosaAssembly, k: usize) -> (bool, bool, bool, bool) {
    let pic = place_slits(assembly, k);
    let u = pic.tri.vertices[1];
    let u_far = pic.far_corner;
    let (u_same_b, u_cross_b) = if pic.same_hemisphere { (u, u_far) } else { (u_far, u) };
    let tol = 1e-11;
    let za = hyp::segments_cross(pic.ends[0], u, pic.segs[1].0, pic.segs[1].1, tol);
    let zac = hyp::segments_cross(pic.ends[0], u_far, pic.segs[1].0, pic.segs[1].1, tol);
    let zb = hyp::segments_cross(pic.ends[1], u_same_b, pic.segs[0].0, pic.segs[0].1, tol);
    let zbc = hyp::segments_cross(pic.ends[1], u_cross_b, pic.segs[0].0, pic.segs[0].1, tol);
    (za, zac, zb, zbc)
}

/// V-piece edges measured on placed geometry, including the replacement
/// arcs for the blocked cases (developed by composing reflections around the
/// slit corner).
pub fn vpiece_oracle(assembly: &SamosaAssembly, k: usize) -> VPieceIntrinsics {
    let pic = place_slits(assembly, k);
    let u = pic.tri.vertices[1];
    let u_far = pic.far_corner;
    let (u_same_b, u_cross_b) = if pic.same_hemisphere { (u, u_far) } else { (u_far, u) };
    let (s_a, s_b) = (pic.ends[0], pic.ends[1]);
    let lambda_a = hyp::dist(s_a, u);
    let lambda_a_cross = hyp::dist(s_a, u_far);
    let lambda_b = hyp::dist(s_b, u_same_b);
    let lambda_b_cross = hyp::dist(s_b, u_cross_b);
    let xi = hyp::dist(s_a, s_b);
    let (za, zac, zb, zbc) = blocked_arcs(assembly, k);
    let case = match (za, zac, zb, zbc) {
        (false, false, false, false) => VCase::V1,
        (true, false, false, true) => VCase::V2a,
        (false, true, true, false) => VCase::V2b,
        other => panic!("unexpected blocking pattern {other:?} on samosa {k}"),
    };
    match case {
        VCase::V1 => VPieceIntrinsics {
            case,
            edges: VPieceEdges {
                arc_a_same: lambda_a,
                arc_a_cross: lambda_a_cross,
                arc_b_same: lambda_b,
                arc_b_cross: lambda_b_cross,
                xi,
                eta: None,
            },
        },
        VCase::V2a | VCase::V2b => {
            let (r_a, r_b) = replacement_oracle(&pic);
            let eta = match case {
                VCase::V2a => hyp::angle_at(s_b, s_a, u),
                _ => hyp::angle_at(s_a, s_b, u),
            };
            let edges = match case {
                VCase::V2a => VPieceEdges {
                    arc_a_same: r_a,
                    arc_a_cross: lambda_a_cross,
                    arc_b_same: lambda_b,
                    arc_b_cross: r_b,
                    xi,
                    eta: Some(eta),
                },
                _ => VPieceEdges {
                    arc_a_same: lambda_a,
                    arc_a_cross: r_a,
                    arc_b_same: r_b,
                    arc_b_cross: lambda_b_cross,
                    xi,
                    eta: Some(eta),
                },
            };
            VPieceIntrinsics { case, edges }
        }
    }
}

/// Lengths of the arcs joining the two whole singularities around the back
/// of each slit corner: develop by reflecting across the two equator
/// segments at the corner (whichever composition shortens the turn).
pub fn replacement_oracle(pic: &PlacedSlits) -> (f64, f64) {
    let (s_a, s_b) = (pic.ends[0], pic.ends[1]);
    let v0 = pic.tri.vertices[0];
    let v1 = pic.tri.vertices[1];
    let v2 = pic.tri.vertices[2];
    let around = |apex: HPoint, e1: HPoint, e2: HPoint, from: HPoint, to: HPoint| {
        let t1 = hyp::reflect(apex, e1, hyp::reflect(apex, e2, to));
        let t2 = hyp::reflect(apex, e2, hyp::reflect(apex, e1, to));
        hyp::dist(from, t1).min(hyp::dist(from, t2))
    };
    let r_a = around(v0, v1, v2, s_a, s_b);
    let r_b = around(v2, v1, v0, s_b, s_a);
    (r_a, r_b)
}

/// Full intrinsic data measured on placed developments.
pub fn assembly_intrinsics_oracle(assembly: &SamosaAssembly) -> IntrinsicParams {
    let curves: Vec<CurveIntrinsics> = assembly
        .curves
        .iter()
        .map(|c| {
            let KinkData { c, kappa } = kink_oracle(c.ell, c.beta);
            CurveIntrinsics { c, kappa }
        })
        .collect();
    let hats = [hat_oracle(assembly, true), hat_oracle(assembly, false)];
    let vpieces: Vec<VPieceIntrinsics> =
        (2..=assembly.num_samosas() - 1).map(|k| vpiece_oracle(assembly, k)).collect();
    IntrinsicParams { n: assembly.n, alpha: assembly.alpha.clone(), curves, hats, vpieces }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{self, SlitMode};
    use crate::trig;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    #[test]
    fn kink_oracle_agrees_with_formula() {
        let mut rng = StdRng::seed_from_u64(91);
        for _ in 0..500 {
            let ell = rng.gen_range(0.05..3.0);
            let beta = rng.gen_range(0.05..2.0 * PI - 0.05);
            let f = trig::kink_forward(ell, beta);
            let o = kink_oracle(ell, beta);
            assert!((f.c - o.c).abs() < 1e-9, "c: {} vs {}", f.c, o.c);
            assert!((f.kappa - o.kappa).abs() < 1e-9, "kappa: {} vs {}", f.kappa, o.kappa);
        }
    }

    #[test]
    fn slit_bound_formula_matches_ray_shooting() {
        let mut rng = StdRng::seed_from_u64(92);
        for _ in 0..200 {
            // A random hemisphere triangle and slit.
            let mut th = [0.0; 3];
            loop {
                for t in th.iter_mut() {
                    *t = rng.gen_range(0.1..1.9 * PI);
                }
                if th.iter().sum::<f64>() < 2.0 * PI - 0.1 {
                    break;
                }
            }
            let corner = rng.gen_range(0..3);
            let phi_abs = rng.gen_range(0.0..th[corner] / 2.0 * 0.98);
            let tri = hyp::triangle_from_angles(
                th[0] / 2.0,
                th[1] / 2.0,
                th[2] / 2.0,
                Anchor { at: HPoint::I, dir: 0.0, orientation: Orientation::Ccw },
            )
            .unwrap();
            let d_ref = tri.sides[(corner + 1) % 3];
            let theta_far = th[(corner + 2) % 3];
            let formula = trig::slit_max_one(d_ref, phi_abs, theta_far);
            let measured = slit_max_one_oracle(th, corner, phi_abs);
            assert!(
                (formula - measured).abs() < 1e-8,
                "bound mismatch: {formula} vs {measured}"
            );
        }
    }

    #[test]
    fn two_slit_bounds_meet_in_one_point() {
        let mut rng = StdRng::seed_from_u64(93);
        for _ in 0..100 {
            let a = sampling::random_assembly(&mut rng, 5, SlitMode::North);
            let th = a.corner_angles(2).unwrap();
            let d = a.equator_lengths(2).unwrap();
            let (la, lb) =
                trig::slit_max_two(d[1], a.curves[0].phi, a.curves[1].phi_prime, th[2]).unwrap();
            let (ta, tb) = slit_meet_oracle(&a, 2);
            assert!((la - ta).abs() < 1e-8, "a-bound {la} vs measured {ta}");
            assert!((lb - tb).abs() < 1e-8, "b-bound {lb} vs measured {tb}");
        }
    }
}
