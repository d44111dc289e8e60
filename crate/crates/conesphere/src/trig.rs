//! Scalar hyperbolic trigonometry: laws of cosines and sines, the four-parts
//! formula, slit-length bounds, kink-angle equations and the edge-length
//! formulas for joker's hats and V-pieces.
//!
//! Everything here is a pure function of real inputs. Plane geometry
//! (placements, reflections, intersections) lives in [`crate::hyp`].

use thiserror::Error;

/// Slack allowed on `acos`/`acosh`/`atanh` arguments before an input is
/// treated as genuinely invalid rather than as round-off.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Tolerance below which a slit direction counts as lying on the equator
/// segment joining two slit corners (the excluded direction for two-slit
/// length bounds).
pub const DEGENERATE_DIRECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigError {
    #[error("side lengths violate the triangle inequality (law-of-cosines quotient {quotient})")]
    NotATriangle { quotient: f64 },
    #[error("angle sum {sum} is not below pi")]
    AngleSum { sum: f64 },
    #[error("slit direction is degenerate: the slit lies on the equator segment between the slit corners")]
    DegenerateSlitDirection,
    #[error("no solution: cos^2(kappa/2) = {lhs} does not exceed tanh^2(c/2) = {rhs}")]
    NoSolution { lhs: f64, rhs: f64 },
}

/// Length `c` and signed kink angle `kappa` of the shortest pants-curve
/// representative through a whole singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkData {
    pub c: f64,
    pub kappa: f64,
}

fn acosh_clamped(x: f64) -> Result<f64, TrigError> {
    if x < 1.0 - BOUNDARY_SLACK {
        return Err(TrigError::NotATriangle { quotient: x });
    }
    Ok(x.max(1.0).acosh())
}

fn acos_clamped(x: f64) -> Result<f64, TrigError> {
    if x.abs() > 1.0 + BOUNDARY_SLACK {
        return Err(TrigError::NotATriangle { quotient: x });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Inverse hyperbolic cotangent for arguments > 1.
fn acoth(x: f64) -> f64 {
    if x <= 1.0 {
        return f64::INFINITY;
    }
    0.5 * ((x + 1.0) / (x - 1.0)).ln()
}

/// Law of cosines for side lengths: the interior angle opposite side `c`
/// in the triangle with sides `a`, `b`, `c`.
///
/// Fails with `NotATriangle` when the quotient leaves the open interval
/// `(-1 + 1e-12, 1 - 1e-12)`, i.e. for degenerate or impossible triples.
pub fn loc_angle(a: f64, b: f64, c: f64) -> Result<f64, TrigError> {
    let q = (a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh());
    if !q.is_finite() || q <= -1.0 + BOUNDARY_SLACK || q >= 1.0 - BOUNDARY_SLACK {
        return Err(TrigError::NotATriangle { quotient: q });
    }
    Ok(q.acos())
}

/// Law of cosines for angles: the length of the side opposite `gamma` in the
/// triangle with interior angles `alpha`, `beta`, `gamma`.
pub fn loa_side(alpha: f64, beta: f64, gamma: f64) -> Result<f64, TrigError> {
    let sum = alpha + beta + gamma;
    if !(sum < std::f64::consts::PI) || alpha <= 0.0 || beta <= 0.0 || gamma <= 0.0 {
        return Err(TrigError::AngleSum { sum });
    }
    let q = (alpha.cos() * beta.cos() + gamma.cos()) / (alpha.sin() * beta.sin());
    Ok(q.max(1.0).acosh())
}

/// Residuals of the law of sines and the four-parts formula on full triangle
/// data `(a, b, c)` / `(alpha, beta, gamma)` with side `i` opposite angle `i`.
///
/// Returns `(|sin a residual|, |four-parts residual|)`. Test oracle, not a
/// solver.
pub fn check_sines_fourparts(sides: [f64; 3], angles: [f64; 3]) -> (f64, f64) {
    let [a, b, _c] = sides;
    let [alpha, beta, gamma] = angles;
    let r_sines = (alpha.sin() - a.sinh() * beta.sin() / b.sinh()).abs();
    // Four parts on the (a, gamma, b) corner chain: sides a, b meet at gamma,
    // with beta opposite b.
    let r_four =
        (gamma.cos() * a.cosh() - (a.sinh() * (b.cosh() / b.sinh()) - gamma.sin() / beta.tan()))
            .abs();
    (r_sines, r_four)
}

/// Maximal length of a single slit before it leaves its hemisphere.
///
/// `d_prev` is the equator segment the slit angle is measured from (joining
/// the slit corner to the reference corner), `phi` the slit angle, and
/// `theta_next` the cone angle at the reference corner. The slit of this
/// length ends on the far side of the hemisphere triangle; at `phi = 0` the
/// bound is exactly `d_prev`.
pub fn slit_max_one(d_prev: f64, phi: f64, theta_next: f64) -> f64 {
    let x = (phi.cos() * d_prev.cosh() + phi.sin().abs() / (theta_next / 2.0).tan())
        / d_prev.sinh();
    acoth(x)
}

/// Maximal slit lengths for two slits in the same hemisphere, at corners of
/// cone angles `beta_a` (slit angle `phi_a`, measured from the equator
/// segment joining the slit corners) and `beta_b_prime` (slit angle
/// `phi_b_prime`, measured from the segment towards the un-slit corner).
///
/// At these bounds the geodesic continuations of the two slits meet in a
/// single point. Fails when either slit lies on the segment joining the slit
/// corners (`phi_a = 0` or `|phi_b_prime| = beta_b_prime / 2`), where the
/// continuation of one slit meets the other at its starting point.
pub fn slit_max_two(
    d: f64,
    phi_a: f64,
    phi_b_prime: f64,
    beta_b_prime: f64,
) -> Result<(f64, f64), TrigError> {
    let w = beta_b_prime / 2.0 - phi_b_prime.abs();
    if phi_a.abs() < DEGENERATE_DIRECTION_TOL || w < DEGENERATE_DIRECTION_TOL {
        return Err(TrigError::DegenerateSlitDirection);
    }
    let ell_a = acoth((phi_a.cos() * d.cosh() + phi_a.sin().abs() / w.tan()) / d.sinh());
    let ell_b = acoth((w.cos() * d.cosh() + w.sin() / phi_a.abs().tan()) / d.sinh());
    Ok((ell_a, ell_b))
}

/// Length and kink angle of the pants-curve geodesic through the whole
/// singularity created by gluing two slits of length `ell` at corners of
/// angles `beta` and `2 pi - beta`.
///
/// `beta = pi` gives the straight case `c = 2 ell`, `kappa = 0` exactly.
pub fn kink_forward(ell: f64, beta: f64) -> KinkData {
    if beta == std::f64::consts::PI {
        return KinkData { c: 2.0 * ell, kappa: 0.0 };
    }
    let ch = ell.cosh();
    let sh = ell.sinh();
    let c = (ch * ch - sh * sh * beta.cos()).acosh();
    // tan(kappa/2) = (1 + cos b) / (sin b cosh l) = cot(b/2) / cosh l,
    // with sin(b/2) > 0 throughout (0, 2pi).
    let kappa = 2.0 * ((beta / 2.0).cos() / ((beta / 2.0).sin() * ch)).atan();
    KinkData { c, kappa }
}

/// Inverse of [`kink_forward`]: slit length and corner angle from the curve
/// length `c` and kink angle `kappa`.
///
/// The printed closed form for the slit length has the wrong sign in its
/// denominator: as stated, `cosh(ell)^2 = cos^2(k/2) / (cos^2(k/2) +
/// tanh^2(c/2))` would force `cosh(ell) < 1` and already fails the straight
/// case `kappa = 0`, `beta = pi`, `ell = c/2`. The correct relation, read off
/// the right-triangle split of the isosceles kink triangle, is
///
/// ```text
/// tanh(c/2) = tanh(ell) cos(kappa/2),
/// ```
///
/// equivalently `cosh(ell)^2 = cos^2(k/2) / (cos^2(k/2) - tanh^2(c/2))`,
/// which is what this function implements. It requires `cos^2(kappa/2) >
/// tanh^2(c/2)`; otherwise there is no solution.
///
/// Near `kappa = 0` the arccos form for `beta` loses precision, so `beta` is
/// recovered from the law of sines `sin(beta) = sin(kappa/2) sinh(c) /
/// sinh(ell)` instead.
pub fn kink_inverse(c: f64, kappa: f64) -> Result<(f64, f64), TrigError> {
    if kappa == 0.0 {
        return Ok((c / 2.0, std::f64::consts::PI));
    }
    let ck = (kappa / 2.0).cos();
    let th = (c / 2.0).tanh();
    if ck * ck - th * th <= BOUNDARY_SLACK * BOUNDARY_SLACK {
        return Err(TrigError::NoSolution { lhs: ck * ck, rhs: th * th });
    }
    let ell = (th / ck).atanh();
    let beta = if kappa.abs() < 1e-6 {
        let s = ((kappa / 2.0).sin() * c.sinh() / ell.sinh()).clamp(-1.0, 1.0);
        std::f64::consts::PI - s.asin()
    } else {
        let sk = (kappa / 2.0).sin();
        let x = (sk * sk * c.cosh() - ck * ck).clamp(-1.0, 1.0);
        if kappa > 0.0 {
            x.acos()
        } else {
            2.0 * std::f64::consts::PI - x.acos()
        }
    };
    Ok((ell, beta))
}

/// Absolute slit angle from the law-of-cosines kernel shared by all slit
/// angle equations: `cos|phi| = (cosh d cosh ell - cosh lambda) /
/// (sinh d sinh ell)`. The caller applies the sign from the hemisphere flag.
pub fn slit_angle_abs(d: f64, ell: f64, lambda: f64) -> Result<f64, TrigError> {
    let q = (d.cosh() * ell.cosh() - lambda.cosh()) / (d.sinh() * ell.sinh());
    acos_clamped(q)
}

/// Triangulation edge lengths of a joker's hat cut off around a terminal
/// samosa whose slit has length `ell` and angle `phi` at a corner of cone
/// angle `beta`.
///
/// `d_p`, `d_q` are the equator segments from the slit corner to the un-slit
/// corners `p` and `q`, where `p` is the corner the slit angle is measured
/// towards. Returns `(lambda_p, lambda_q, delta_p, delta_q)`: the geodesics
/// from the whole singularity to `p` and `q` and the geodesic loops around
/// them.
pub fn joker_hat_edges(
    d_p: f64,
    d_q: f64,
    ell: f64,
    beta: f64,
    phi: f64,
    alpha_p: f64,
    alpha_q: f64,
) -> Result<(f64, f64, f64, f64), TrigError> {
    let lambda_p = acosh_clamped(d_p.cosh() * ell.cosh() - phi.cos() * d_p.sinh() * ell.sinh())?;
    let ang_q = beta / 2.0 - phi.abs();
    let lambda_q = acosh_clamped(d_q.cosh() * ell.cosh() - ang_q.cos() * d_q.sinh() * ell.sinh())?;
    let delta_p = cone_loop(lambda_p, alpha_p)?;
    let delta_q = cone_loop(lambda_q, alpha_q)?;
    Ok((lambda_p, lambda_q, delta_p, delta_q))
}

/// Length of the geodesic loop around a cone point of defect `alpha` whose
/// endpoints sit at distance `lambda` from the cone point.
pub fn cone_loop(lambda: f64, alpha: f64) -> Result<f64, TrigError> {
    let ch = lambda.cosh();
    let sh = lambda.sinh();
    acosh_clamped(ch * ch - alpha.cos() * sh * sh)
}

/// Fourth side of the hyperbolic quadrilateral with consecutive sides
/// `s1, s2, s3` and interior angles `ang12` (between `s1`, `s2`) and `ang23`
/// (between `s2`, `s3`), obtained by splitting along a diagonal and applying
/// the law of cosines twice. The closed quadrilateral form is not written
/// out anywhere; the diagonal decomposition is this crate's choice.
pub fn quad_fourth_side(s1: f64, s2: f64, s3: f64, ang12: f64, ang23: f64) -> Result<f64, TrigError> {
    let diag =
        acosh_clamped(s1.cosh() * s2.cosh() - ang12.cos() * s1.sinh() * s2.sinh())?;
    // Angle the diagonal makes with s2 at their shared vertex.
    let split = acos_clamped((s2.cosh() * diag.cosh() - s1.cosh()) / (s2.sinh() * diag.sinh()))?;
    let rest = ang23 - split;
    acosh_clamped(diag.cosh() * s3.cosh() - rest.cos() * diag.sinh() * s3.sinh())
}

/// Which triangulation a V-piece uses, decided by which of the four
/// corner-to-singularity arcs are realized unbroken. The same-hemisphere
/// arcs survive for every slit configuration the validity bounds admit; a
/// hemisphere-crossing arc fails when its development either runs into a
/// slit or leaves the hemisphere pair around a slit corner instead of
/// through the segment joining the slit corners. Each failed crossing arc is
/// replaced by the geodesic joining the two whole singularities around the
/// back of the slit corner on its side, enclosing that boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VCase {
    /// All four arcs unbroken.
    V1,
    /// The crossing arc from the `a`-side singularity is replaced.
    V2a,
    /// The crossing arc from the `b`-side singularity is replaced.
    V2b,
    /// Both crossing arcs are replaced.
    V2ab,
}

/// Scalar parameters of a two-slit samosa as seen from one of its V-pieces.
///
/// Corner `a` carries the slit glued along the lower-index pants curve (cone
/// angle `beta_a`, slit angle measured from the equator segment joining the
/// two slit corners); corner `b` carries the other slit (cone angle
/// `beta_b_prime`, slit angle measured from the segment towards the un-slit
/// corner). `d_a`, `d_b` join the slit corners to the un-slit corner and
/// `d_ab` joins the two slit corners.
#[derive(Debug, Clone, Copy)]
pub struct VPieceParams {
    pub beta_a: f64,
    pub beta_b_prime: f64,
    pub phi_a_abs: f64,
    pub phi_b_prime_abs: f64,
    pub ell_a: f64,
    pub ell_b: f64,
    pub d_a: f64,
    pub d_b: f64,
    pub d_ab: f64,
    /// Both slits in one hemisphere?
    pub same_hemisphere: bool,
}

/// The five interior triangulation edges contributed by one V-piece.
///
/// In case `V1` the slots hold `(lambda_a, lambda'_a, lambda_b, lambda'_b,
/// xi)`: the same-hemisphere and hemisphere-crossing arcs from each whole
/// singularity to the un-slit corner, plus the direct arc between the
/// singularities. In case `V2` the two blocked arcs are replaced by the
/// geodesics that join the singularities around the back of a slit corner,
/// enclosing one boundary component each; `eta` is the reconstruction angle
/// at the singularity whose same-hemisphere arc survives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VPieceEdges {
    pub arc_a_same: f64,
    pub arc_a_cross: f64,
    pub arc_b_same: f64,
    pub arc_b_cross: f64,
    pub xi: f64,
    pub eta: Option<f64>,
}

/// Same-hemisphere arc lengths from the two whole singularities of a V-piece
/// to the un-slit corner, ignoring blocking: `(Lambda_a, Lambda_b)`.
///
/// These equal the placed within-hemisphere distances whether or not the
/// arcs are realized unbroken on the surface.
pub fn vpiece_lambda_same(p: &VPieceParams) -> Result<(f64, f64), TrigError> {
    let ang_a = p.beta_a / 2.0 - p.phi_a_abs;
    let la = acosh_clamped(p.d_a.cosh() * p.ell_a.cosh() - ang_a.cos() * p.d_a.sinh() * p.ell_a.sinh())?;
    let lb = acosh_clamped(
        p.d_b.cosh() * p.ell_b.cosh() - p.phi_b_prime_abs.cos() * p.d_b.sinh() * p.ell_b.sinh(),
    )?;
    Ok((la, lb))
}

/// Hemisphere-crossing arc lengths `(Lambda'_a, Lambda'_b)`, again ignoring
/// blocking.
pub fn vpiece_lambda_cross(p: &VPieceParams) -> Result<(f64, f64), TrigError> {
    let ang_a = p.beta_a / 2.0 + p.phi_a_abs;
    let la = acosh_clamped(p.d_a.cosh() * p.ell_a.cosh() - ang_a.cos() * p.d_a.sinh() * p.ell_a.sinh())?;
    let ang_b = p.beta_b_prime - p.phi_b_prime_abs;
    let lb = acosh_clamped(p.d_b.cosh() * p.ell_b.cosh() - ang_b.cos() * p.d_b.sinh() * p.ell_b.sinh())?;
    Ok((la, lb))
}

/// Direct arc between the two whole singularities of a V-piece.
///
/// For slits in one hemisphere this is the fourth side of the quadrilateral
/// with sides `ell_a`, `d_ab`, `ell_b` and interior angles `|phi_a|`,
/// `beta_b_prime/2 - |phi_b_prime|`; for slits in opposite hemispheres the
/// second angle opens across the equator.
pub fn vpiece_xi(p: &VPieceParams) -> Result<f64, TrigError> {
    let w_b = p.beta_b_prime / 2.0 - p.phi_b_prime_abs;
    // With the slits in opposite hemispheres the quadrilateral is crossed:
    // the developed slit at corner b opens on the far side of the equator.
    let ang_b = if p.same_hemisphere { w_b } else { -w_b };
    quad_fourth_side(p.ell_a, p.d_ab, p.ell_b, p.phi_a_abs, ang_b)
}

/// Distances from each slit corner to the opposite slit's endpoint:
/// `(dist(corner_a, S_b), dist(corner_b, S_a))`.
pub fn vpiece_corner_to_far_end(p: &VPieceParams) -> Result<(f64, f64), TrigError> {
    let w_b = p.beta_b_prime / 2.0 - p.phi_b_prime_abs;
    let cap_d_b =
        acosh_clamped(p.d_ab.cosh() * p.ell_b.cosh() - w_b.cos() * p.d_ab.sinh() * p.ell_b.sinh())?;
    let cap_d_a = acosh_clamped(
        p.d_ab.cosh() * p.ell_a.cosh() - p.phi_a_abs.cos() * p.d_ab.sinh() * p.ell_a.sinh(),
    )?;
    Ok((cap_d_b, cap_d_a))
}

/// Replacement edges for the blocked cases: the geodesics from one whole
/// singularity to the other around the back of each slit corner.
///
/// Going around the corner of angle `beta` swaps the apex angle `chi` of the
/// direct triangle through that corner for `beta - chi`.
pub fn vpiece_replacement_arcs(p: &VPieceParams) -> Result<(f64, f64), TrigError> {
    let (cap_d_b, cap_d_a) = vpiece_corner_to_far_end(p)?;
    // Angle at corner a between its own slit and the segment to S_b: the
    // segment direction sits at theta_a on S_b's side of the equator.
    let theta_a = acos_clamped(
        (p.d_ab.cosh() * cap_d_b.cosh() - p.ell_b.cosh()) / (p.d_ab.sinh() * cap_d_b.sinh()),
    )?;
    let chi_a =
        if p.same_hemisphere { (theta_a - p.phi_a_abs).abs() } else { theta_a + p.phi_a_abs };
    let around_a = p.beta_a - chi_a;
    let r_a = acosh_clamped(
        p.ell_a.cosh() * cap_d_b.cosh() - around_a.cos() * p.ell_a.sinh() * cap_d_b.sinh(),
    )?;
    // Same at corner b.
    let theta_b = acos_clamped(
        (p.d_ab.cosh() * cap_d_a.cosh() - p.ell_a.cosh()) / (p.d_ab.sinh() * cap_d_a.sinh()),
    )?;
    let w_b = p.beta_b_prime / 2.0 - p.phi_b_prime_abs;
    let chi_b = if p.same_hemisphere { (theta_b - w_b).abs() } else { theta_b + w_b };
    let around_b = p.beta_b_prime - chi_b;
    let r_b = acosh_clamped(
        p.ell_b.cosh() * cap_d_a.cosh() - around_b.cos() * p.ell_b.sinh() * cap_d_a.sinh(),
    )?;
    Ok((r_a, r_b))
}

/// All five interior edges of a V-piece in the given case.
///
/// `eta`, recorded for the replaced cases of same-hemisphere pieces, is the
/// angle between the direct singularity arc `xi` and the surviving
/// same-hemisphere arc at the singularity whose crossing arc was replaced;
/// it reconstructs the auxiliary law-of-cosines triangle `(xi, lambda,
/// lambda)` joining the singularities and the un-slit corner.
pub fn vpiece_edges(p: &VPieceParams, case: VCase) -> Result<VPieceEdges, TrigError> {
    let (lambda_a, lambda_b) = vpiece_lambda_same(p)?;
    let (lambda_a_cross, lambda_b_cross) = vpiece_lambda_cross(p)?;
    let xi = vpiece_xi(p)?;
    let eta_at_a = || {
        acos_clamped((xi.cosh() * lambda_a.cosh() - lambda_b.cosh()) / (xi.sinh() * lambda_a.sinh()))
    };
    let eta_at_b = || {
        acos_clamped((xi.cosh() * lambda_b.cosh() - lambda_a.cosh()) / (xi.sinh() * lambda_b.sinh()))
    };
    match case {
        VCase::V1 => Ok(VPieceEdges {
            arc_a_same: lambda_a,
            arc_a_cross: lambda_a_cross,
            arc_b_same: lambda_b,
            arc_b_cross: lambda_b_cross,
            xi,
            eta: None,
        }),
        VCase::V2a => {
            let (r_a, _) = vpiece_replacement_arcs(p)?;
            let eta = if p.same_hemisphere { Some(eta_at_a()?) } else { None };
            Ok(VPieceEdges {
                arc_a_same: lambda_a,
                arc_a_cross: r_a,
                arc_b_same: lambda_b,
                arc_b_cross: lambda_b_cross,
                xi,
                eta,
            })
        }
        VCase::V2b => {
            let (_, r_b) = vpiece_replacement_arcs(p)?;
            let eta = if p.same_hemisphere { Some(eta_at_b()?) } else { None };
            Ok(VPieceEdges {
                arc_a_same: lambda_a,
                arc_a_cross: lambda_a_cross,
                arc_b_same: lambda_b,
                arc_b_cross: r_b,
                xi,
                eta,
            })
        }
        VCase::V2ab => {
            let (r_a, r_b) = vpiece_replacement_arcs(p)?;
            let eta = if p.same_hemisphere { Some(eta_at_a()?) } else { None };
            Ok(VPieceEdges {
                arc_a_same: lambda_a,
                arc_a_cross: r_a,
                arc_b_same: lambda_b,
                arc_b_cross: r_b,
                xi,
                eta,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn loc_angle_isosceles_symmetric() {
        let g1 = loc_angle(0.8, 1.3, 0.9).unwrap();
        let g2 = loc_angle(1.3, 0.8, 0.9).unwrap();
        assert!((g1 - g2).abs() < 1e-15);
    }

    #[test]
    fn loc_angle_degenerate_is_error() {
        assert!(matches!(
            loc_angle(0.4, 0.6, 1.0),
            Err(TrigError::NotATriangle { .. })
        ));
    }

    #[test]
    fn loa_side_equilateral_pi_over_six() {
        let a = PI / 6.0;
        let c = loa_side(a, a, a).unwrap();
        let expected = ((a.cos() * a.cos() + a.cos()) / (a.sin() * a.sin())).acosh();
        assert!((c - expected).abs() < 1e-14);
    }

    #[test]
    fn loa_side_euclidean_limit() {
        let eps = 1e-7;
        let a = PI / 3.0 - eps;
        let c = loa_side(a, a, a + eps).unwrap();
        assert!(c > 0.0 && c < 1e-3);
        assert!(matches!(
            loa_side(PI / 3.0, PI / 3.0, PI / 3.0),
            Err(TrigError::AngleSum { .. })
        ));
    }

    #[test]
    fn loa_then_loc_round_trip() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let a = 0.05 + 2.9 * rnd();
            let b = 0.05 + 2.9 * rnd();
            let g = 0.05 + 2.9 * rnd();
            let s = a + b + g;
            if s >= PI - 1e-3 {
                continue;
            }
            let side = loa_side(a, b, g).unwrap();
            let sa = loa_side(g, b, a).unwrap();
            let sb = loa_side(a, g, b).unwrap();
            let g_back = loc_angle(sa, sb, side).unwrap();
            assert!((g_back - g).abs() < 1e-9, "gamma {g} vs {g_back}");
        }
    }

    #[test]
    fn slit_max_one_phi_zero_equals_d() {
        let d = 0.9371;
        assert!((slit_max_one(d, 0.0, 1.1) - d).abs() < 1e-14);
    }

    #[test]
    fn slit_max_one_symmetric_in_phi() {
        let l1 = slit_max_one(1.1, 0.4, 0.9);
        let l2 = slit_max_one(1.1, -0.4, 0.9);
        assert_eq!(l1, l2);
    }

    #[test]
    fn slit_max_two_degenerate_directions() {
        assert!(matches!(
            slit_max_two(1.0, 0.0, 0.1, 1.2),
            Err(TrigError::DegenerateSlitDirection)
        ));
        assert!(matches!(
            slit_max_two(1.0, 0.3, 0.6, 1.2),
            Err(TrigError::DegenerateSlitDirection)
        ));
    }

    #[test]
    fn slit_max_two_monotone_in_phi_a() {
        // The bound on the other slit collapses as |phi_a| approaches the
        // excluded direction along the equator (the cot(|phi_a|) term), and
        // grows monotonically as the slit swings away from it.
        let mut prev = 0.0;
        for k in 1..=8 {
            let phi_a = 0.05 * k as f64;
            let (_, ell_b) = slit_max_two(1.0, phi_a, 0.1, 1.4).unwrap();
            assert!(ell_b > prev, "ell_b {ell_b} should exceed {prev} at phi_a {phi_a}");
            prev = ell_b;
        }
    }

    #[test]
    fn kink_forward_straight_case_exact() {
        let k = kink_forward(0.7, PI);
        assert_eq!(k.c, 1.4);
        assert_eq!(k.kappa, 0.0);
    }

    #[test]
    fn kink_sign_convention() {
        assert!(kink_forward(0.5, 2.0).kappa > 0.0);
        assert!(kink_forward(0.5, 4.0).kappa < 0.0);
        // beta -> 2pi keeps kappa in (-pi, 0).
        let k = kink_forward(0.5, 2.0 * PI - 1e-3);
        assert!(k.kappa < 0.0 && k.kappa > -PI);
    }

    #[test]
    fn kink_inverse_straight_case_exact() {
        let (ell, beta) = kink_inverse(1.4, 0.0).unwrap();
        assert_eq!(ell, 0.7);
        assert_eq!(beta, PI);
    }

    #[test]
    fn kink_inverse_no_solution() {
        // cos^2(kappa/2) <= tanh^2(c/2)
        let c = 3.0f64;
        let kappa = 2.0 * (c / 2.0).tanh().acos() + 0.2;
        assert!(matches!(kink_inverse(c, kappa), Err(TrigError::NoSolution { .. })));
    }

    #[test]
    fn kink_round_trip() {
        let mut state = 123456789u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let ell = 0.05 + 2.95 * rnd();
            let beta = 0.05 + (2.0 * PI - 0.1) * rnd();
            let k = kink_forward(ell, beta);
            let (ell2, beta2) = kink_inverse(k.c, k.kappa).unwrap();
            assert!((ell - ell2).abs() < 1e-9, "ell {ell} vs {ell2} at beta {beta}");
            assert!((beta - beta2).abs() < 1e-9, "beta {beta} vs {beta2}");
        }
    }

    #[test]
    fn kink_right_triangle_identity() {
        for &(ell, beta) in &[(0.3, 1.0), (1.5, 2.9), (2.0, 5.0), (0.8, 3.3)] {
            let k = kink_forward(ell, beta);
            let lhs = (k.c / 2.0).tanh();
            let rhs = ell.tanh() * (k.kappa / 2.0).cos();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn slit_angle_abs_boundary_clamps() {
        // lambda at its minimum |d - ell| gives quotient 1, phi = 0.
        let phi = slit_angle_abs(1.2, 0.5, 0.7).unwrap();
        assert!(phi.abs() < 1e-6);
    }

    #[test]
    fn cone_loop_closes_up() {
        // alpha -> 2pi makes the loop length collapse.
        let d = cone_loop(0.9, 2.0 * PI - 1e-8).unwrap();
        assert!(d < 1e-3);
    }

    #[test]
    fn quad_fourth_side_degenerate_square_consistency() {
        // With ang23 equal to the diagonal split angle the fourth side is the
        // third side of the first triangle.
        let s1: f64 = 0.9;
        let s2: f64 = 1.1;
        let diag = (s1.cosh() * s2.cosh() - 0.7f64.cos() * s1.sinh() * s2.sinh()).acosh();
        let split = ((s2.cosh() * diag.cosh() - s1.cosh()) / (s2.sinh() * diag.sinh())).acos();
        let xi = quad_fourth_side(s1, s2, 1e-9, 0.7, split).unwrap();
        assert!((xi - diag).abs() < 1e-6);
    }
}
