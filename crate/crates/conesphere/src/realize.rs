//! Intrinsic parameters of an assembled cone sphere and their inversion.
//!
//! Cutting the assembled sphere along the kinked pants-curve geodesics
//! splits it into two joker's hats (around the terminal samosas) and `n - 4`
//! V-pieces. Each piece is triangulated by geodesic arcs between cone
//! points; together with the `n - 3` boundary curves this yields the
//! `6n - 15` edge lengths of the edge-length coordinate vector. All lengths
//! are intrinsic: they can be measured on the assembled surface without
//! knowing the samosa parameters, and the assembly parameters are recovered
//! from them in closed form.

use crate::assembly::{CurveParams, Hemisphere, SamosaAssembly};
use crate::trig::{self, KinkData, TrigError, VCase, VPieceEdges, VPieceParams};
use crate::hyp;
use thiserror::Error;

/// Tolerance for the forward re-check inside [`invert`]: recovered
/// assemblies must reproduce every intrinsic quantity this closely.
pub const CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("assembly is not valid: {report}")]
    InvalidAssembly { report: String },
    #[error("assembly is not generic: a slit lies on an equator segment opposite an un-slit corner")]
    NotGeneric,
    #[error("curve {curve}: {source}")]
    Curve { curve: usize, source: TrigError },
    #[error("piece for samosa {samosa}: {source}")]
    Piece { samosa: usize, source: TrigError },
    #[error("V-piece blocking pattern of samosa {samosa} is not one of the two known cases")]
    UnknownBlocking { samosa: usize },
    #[error("intrinsic data is inconsistent: {what} (residual {residual})")]
    Inconsistent { what: String, residual: f64 },
    #[error("hemisphere flags: expected {expected} pairs, got {got}")]
    BadEps { expected: usize, got: usize },
    #[error(transparent)]
    Trig(#[from] TrigError),
}

/// Per-curve intrinsic data: length and signed kink angle of the pants-curve
/// geodesic through the whole singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveIntrinsics {
    pub c: f64,
    pub kappa: f64,
}

/// Joker's hat edges. `p` is the lower-numbered puncture of the terminal
/// samosa (the first puncture for the low hat, the next-to-last for the high
/// hat); `lambda` are the geodesics from the whole singularity to the
/// punctures, `delta` the geodesic loops around them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatIntrinsics {
    pub lambda_p: f64,
    pub lambda_q: f64,
    pub delta_p: f64,
    pub delta_q: f64,
}

/// V-piece edges and case flag; `eta` is carried only in the replaced cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VPieceIntrinsics {
    pub case: VCase,
    pub edges: VPieceEdges,
}

/// The intrinsic parameters of a realized assembly. The angle defects ride
/// along: loop lengths determine cone angles only up to the sign of the
/// defect, so inversion is performed within a fixed defect tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicParams {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub curves: Vec<CurveIntrinsics>,
    pub hats: [HatIntrinsics; 2],
    pub vpieces: Vec<VPieceIntrinsics>,
}

/// Edge-length coordinate vector: `6n - 15` positive entries in the fixed
/// order curves, low hat `(delta_p, delta_q, lambda_p, lambda_q)`, high hat,
/// then V-pieces in curve order, each as `(arc_a_same, arc_a_cross,
/// arc_b_same, arc_b_cross, xi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVector {
    pub n: usize,
    pub lengths: Vec<f64>,
}

/// Scalar V-piece parameters of middle samosa `k`.
pub fn vpiece_params(assembly: &SamosaAssembly, k: usize) -> VPieceParams {
    let th = assembly.corner_angles(k).unwrap();
    let d = assembly.equator_lengths(k).unwrap();
    let down = &assembly.curves[k - 2];
    let up = &assembly.curves[k - 1];
    VPieceParams {
        beta_a: th[0],
        beta_b_prime: th[2],
        phi_a_abs: down.phi.abs(),
        phi_b_prime_abs: up.phi_prime.abs(),
        ell_a: down.ell,
        ell_b: up.ell,
        d_a: d[2],
        d_b: d[0],
        d_ab: d[1],
        same_hemisphere: down.hem_phi == up.hem_phi_prime,
    }
}

/// Placed picture of one samosa's slits used for blocking tests: the
/// hemisphere triangle carrying the downstream slit, the other hemisphere
/// developed across the segment joining the slit corners, and the slit
/// endpoints.
struct SlitPicture {
    tri: hyp::HTriangle,
    /// Un-slit corner of the developed far hemisphere.
    far_corner: hyp::HPoint,
    s_a: hyp::HPoint,
    s_b: hyp::HPoint,
    /// Slit segments as (corner, endpoint) pairs.
    seg_a: (hyp::HPoint, hyp::HPoint),
    seg_b: (hyp::HPoint, hyp::HPoint),
    same_hemisphere: bool,
}

fn slit_picture(assembly: &SamosaAssembly, k: usize) -> SlitPicture {
    let th = assembly.corner_angles(k).unwrap();
    let tri = hyp::triangle_from_angles(
        th[0] / 2.0,
        th[1] / 2.0,
        th[2] / 2.0,
        hyp::Anchor { at: hyp::HPoint::I, dir: 0.0, orientation: hyp::Orientation::Ccw },
    )
    .expect("hemisphere triangle");
    let far_corner = hyp::reflect(tri.vertices[0], tri.vertices[2], tri.vertices[1]);
    let slits = assembly.slits_of(k).unwrap();
    let (sa, sb) = (&slits[0], &slits[1]);
    let same = sa.hemisphere == sb.hemisphere;
    let ray_a = slit_dir(&tri, 0, sa.phi.abs());
    let s_a = hyp::geodesic_point(tri.vertices[0], ray_a, sa.ell);
    let s_b = if same {
        let ray_b = slit_dir(&tri, 2, sb.phi.abs());
        hyp::geodesic_point(tri.vertices[2], ray_b, sb.ell)
    } else {
        // The upstream slit lives in the far hemisphere: mirror triangle
        // (v0, far, v2) with the same corner roles.
        let mirror = hyp::HTriangle::from_vertices([tri.vertices[0], far_corner, tri.vertices[2]]);
        let ray_b = slit_dir(&mirror, 2, sb.phi.abs());
        hyp::geodesic_point(mirror.vertices[2], ray_b, sb.ell)
    };
    SlitPicture {
        far_corner,
        s_a,
        s_b,
        seg_a: (tri.vertices[0], s_a),
        seg_b: (tri.vertices[2], s_b),
        tri,
        same_hemisphere: same,
    }
}

/// Ray direction of a slit at a placed hemisphere corner, rotating by the
/// slit angle from the edge towards the cyclic predecessor into the
/// triangle.
fn slit_dir(tri: &hyp::HTriangle, corner: usize, phi_abs: f64) -> f64 {
    let here = tri.vertices[corner];
    let pred = tri.vertices[(corner + 2) % 3];
    let succ = tri.vertices[(corner + 1) % 3];
    let d_ref = hyp::direction(here, pred);
    let delta = hyp::wrap_tau(hyp::direction(here, succ) - d_ref);
    let sgn = if delta < std::f64::consts::PI { 1.0 } else { -1.0 };
    d_ref + sgn * phi_abs
}

/// Geometric classification of a V-piece: which corner-to-singularity arcs
/// are blocked by the slits decides the triangulation.
pub fn classify_vpiece(assembly: &SamosaAssembly, k: usize) -> Result<VCase, RealizeError> {
    let pic = slit_picture(assembly, k);
    let u = pic.tri.vertices[1];
    let u_far = pic.far_corner;
    let tol = 1e-11;
    // Same-hemisphere targets for each slit end, plus the crossing targets.
    let (u_same_a, u_cross_a) = (u, u_far);
    let (u_same_b, u_cross_b) = if pic.same_hemisphere { (u, u_far) } else { (u_far, u) };
    let crosses = |from: hyp::HPoint, to: hyp::HPoint, seg: (hyp::HPoint, hyp::HPoint)| {
        hyp::segments_cross(from, to, seg.0, seg.1, tol)
    };
    let zeta_a = crosses(pic.s_a, u_same_a, pic.seg_b);
    let zeta_a_cross = crosses(pic.s_a, u_cross_a, pic.seg_b);
    let zeta_b = crosses(pic.s_b, u_same_b, pic.seg_a);
    let zeta_b_cross = crosses(pic.s_b, u_cross_b, pic.seg_a);
    match (zeta_a, zeta_a_cross, zeta_b, zeta_b_cross) {
        (false, false, false, false) => Ok(VCase::V1),
        (true, false, false, true) => Ok(VCase::V2a),
        (false, true, true, false) => Ok(VCase::V2b),
        _ => Err(RealizeError::UnknownBlocking { samosa: k }),
    }
}

fn hat_for(assembly: &SamosaAssembly, low: bool) -> Result<HatIntrinsics, RealizeError> {
    let n = assembly.n;
    let k = if low { 1 } else { assembly.num_samosas() };
    let th = assembly.corner_angles(k).unwrap();
    let d = assembly.equator_lengths(k).unwrap();
    let map_err = |source| RealizeError::Piece { samosa: k, source };
    if low {
        let c = &assembly.curves[0];
        // Slit corner 2; reference corner 1 (the second puncture).
        let (l_ref, l_other, d_ref, d_other) = trig::joker_hat_edges(
            d[0],
            d[1],
            c.ell,
            th[2],
            c.phi_prime.abs(),
            assembly.alpha[1],
            assembly.alpha[0],
        )
        .map(|(lp, lq, dp, dq)| (lp, lq, dp, dq))
        .map_err(map_err)?;
        Ok(HatIntrinsics { lambda_p: l_other, lambda_q: l_ref, delta_p: d_other, delta_q: d_ref })
    } else {
        let c = &assembly.curves[n - 4];
        // Slit corner 0; reference corner 2 (the last puncture).
        let (l_ref, l_other, d_ref, d_other) = trig::joker_hat_edges(
            d[1],
            d[2],
            c.ell,
            th[0],
            c.phi.abs(),
            assembly.alpha[n - 1],
            assembly.alpha[n - 2],
        )
        .map_err(map_err)?;
        Ok(HatIntrinsics { lambda_p: l_other, lambda_q: l_ref, delta_p: d_other, delta_q: d_ref })
    }
}

/// Intrinsic parameters of a valid, generic assembly.
pub fn intrinsics(assembly: &SamosaAssembly) -> Result<IntrinsicParams, RealizeError> {
    let report = assembly.validate();
    if !report.is_valid() {
        return Err(RealizeError::InvalidAssembly { report: report.to_string() });
    }
    if !assembly.classify().is_generic {
        return Err(RealizeError::NotGeneric);
    }
    let curves: Vec<CurveIntrinsics> = assembly
        .curves
        .iter()
        .map(|c| {
            let KinkData { c, kappa } = trig::kink_forward(c.ell, c.beta);
            CurveIntrinsics { c, kappa }
        })
        .collect();
    let hats = [hat_for(assembly, true)?, hat_for(assembly, false)?];
    let mut vpieces = Vec::with_capacity(assembly.n.saturating_sub(4));
    for k in 2..=assembly.num_samosas() - 1 {
        let case = classify_vpiece(assembly, k)?;
        let params = vpiece_params(assembly, k);
        let edges = trig::vpiece_edges(&params, case)
            .map_err(|source| RealizeError::Piece { samosa: k, source })?;
        vpieces.push(VPieceIntrinsics { case, edges });
    }
    Ok(IntrinsicParams {
        n: assembly.n,
        alpha: assembly.alpha.clone(),
        curves,
        hats,
        vpieces,
    })
}

/// Recover the assembly from intrinsic parameters and a hemisphere choice
/// (one flag pair `(hem_phi_prime, hem_phi)` per curve).
///
/// The recovered parameters are pushed back through [`intrinsics`] and every
/// redundant quantity is compared: inconsistent inputs are rejected rather
/// than silently absorbed.
pub fn invert(
    params: &IntrinsicParams,
    eps: &[(Hemisphere, Hemisphere)],
) -> Result<SamosaAssembly, RealizeError> {
    let n = params.n;
    if eps.len() != n - 3 {
        return Err(RealizeError::BadEps { expected: n - 3, got: eps.len() });
    }
    let mut curves = Vec::with_capacity(n - 3);
    for (i, ci) in params.curves.iter().enumerate() {
        let (ell, beta) =
            trig::kink_inverse(ci.c, ci.kappa).map_err(|source| RealizeError::Curve { curve: i, source })?;
        curves.push(CurveParams {
            beta,
            ell,
            phi: 0.0,
            phi_prime: 0.0,
            hem_phi: eps[i].1,
            hem_phi_prime: eps[i].0,
        });
    }
    let mut assembly = SamosaAssembly { n, alpha: params.alpha.clone(), curves };

    // Slit angles, samosa by samosa. Terminal samosas read the hats; middle
    // samosas read their V-piece, reconstructing a blocked arc through the
    // stored angle eta when needed.
    {
        let (d_ref, _) = assembly.slit_reference(1, 2).unwrap();
        let ell = assembly.curves[0].ell;
        let phi_abs = trig::slit_angle_abs(d_ref, ell, params.hats[0].lambda_q)
            .map_err(|source| RealizeError::Piece { samosa: 1, source })?;
        assembly.curves[0].phi_prime = eps[0].0.sign() * phi_abs;
    }
    {
        let m = assembly.num_samosas();
        let (d_ref, _) = assembly.slit_reference(m, 0).unwrap();
        let ell = assembly.curves[n - 4].ell;
        let phi_abs = trig::slit_angle_abs(d_ref, ell, params.hats[1].lambda_q)
            .map_err(|source| RealizeError::Piece { samosa: m, source })?;
        assembly.curves[n - 4].phi = eps[n - 4].1.sign() * phi_abs;
    }
    for (idx, vp) in params.vpieces.iter().enumerate() {
        let k = idx + 2;
        let d = assembly.equator_lengths(k).unwrap();
        let down = idx; // curve of the downstream slit (corner 0)
        let up = idx + 1; // curve of the upstream slit (corner 2)
        let ell_a = assembly.curves[down].ell;
        let ell_b = assembly.curves[up].ell;
        let beta_a = assembly.curves[down].beta;
        let map_err = |source| RealizeError::Piece { samosa: k, source };
        let (lambda_a, lambda_b) = match vp.case {
            VCase::V1 => (vp.edges.arc_a_same, vp.edges.arc_b_same),
            VCase::V2a => {
                // arc_a_same was replaced; rebuild the within-hemisphere
                // distance from xi, the kept lambda_b and eta.
                let eta = vp.edges.eta.ok_or(RealizeError::Inconsistent {
                    what: "V2a piece without eta".into(),
                    residual: f64::NAN,
                })?;
                let xi = vp.edges.xi;
                let lb = vp.edges.arc_b_same;
                let la = (xi.cosh() * lb.cosh() - xi.sinh() * lb.sinh() * eta.cos()).acosh();
                (la, lb)
            }
            VCase::V2b => {
                let eta = vp.edges.eta.ok_or(RealizeError::Inconsistent {
                    what: "V2b piece without eta".into(),
                    residual: f64::NAN,
                })?;
                let xi = vp.edges.xi;
                let la = vp.edges.arc_a_same;
                let lb = (xi.cosh() * la.cosh() - xi.sinh() * la.sinh() * eta.cos()).acosh();
                (la, lb)
            }
        };
        let ang_a = trig::slit_angle_abs(d[2], ell_a, lambda_a).map_err(map_err)?;
        let phi_a_abs = (beta_a / 2.0 - ang_a).max(0.0);
        assembly.curves[down].phi = eps[down].1.sign() * phi_a_abs;
        let phi_b_abs = trig::slit_angle_abs(d[0], ell_b, lambda_b).map_err(map_err)?;
        assembly.curves[up].phi_prime = eps[up].0.sign() * phi_b_abs;
    }

    let report = assembly.validate();
    if !report.is_valid() {
        return Err(RealizeError::InvalidAssembly { report: report.to_string() });
    }

    // Forward re-check: every intrinsic quantity must be reproduced.
    let forward = intrinsics(&assembly)?;
    let mut worst: (f64, &str) = (0.0, "");
    for (a, b) in params.curves.iter().zip(forward.curves.iter()) {
        track(&mut worst, (a.c - b.c).abs(), "curve length c");
        track(&mut worst, (a.kappa - b.kappa).abs(), "kink angle");
    }
    for (a, b) in params.hats.iter().zip(forward.hats.iter()) {
        track(&mut worst, (a.lambda_p - b.lambda_p).abs(), "hat lambda_p");
        track(&mut worst, (a.lambda_q - b.lambda_q).abs(), "hat lambda_q");
        track(&mut worst, (a.delta_p - b.delta_p).abs(), "hat delta_p");
        track(&mut worst, (a.delta_q - b.delta_q).abs(), "hat delta_q");
    }
    for (a, b) in params.vpieces.iter().zip(forward.vpieces.iter()) {
        track(&mut worst, (a.edges.arc_a_same - b.edges.arc_a_same).abs(), "arc_a_same");
        track(&mut worst, (a.edges.arc_a_cross - b.edges.arc_a_cross).abs(), "arc_a_cross");
        track(&mut worst, (a.edges.arc_b_same - b.edges.arc_b_same).abs(), "arc_b_same");
        track(&mut worst, (a.edges.arc_b_cross - b.edges.arc_b_cross).abs(), "arc_b_cross");
        track(&mut worst, (a.edges.xi - b.edges.xi).abs(), "xi");
    }
    if worst.0 > CONSISTENCY_TOL {
        return Err(RealizeError::Inconsistent { what: worst.1.to_string(), residual: worst.0 });
    }
    Ok(assembly)
}

fn track<'a>(worst: &mut (f64, &'a str), v: f64, what: &'a str) {
    if v > worst.0 {
        *worst = (v, what);
    }
}

/// The `6n - 15` edge-length coordinates of a valid generic assembly.
pub fn edge_vector(assembly: &SamosaAssembly) -> Result<EdgeVector, RealizeError> {
    Ok(edge_vector_of(&intrinsics(assembly)?))
}

/// Edge vector of already-computed intrinsics.
pub fn edge_vector_of(p: &IntrinsicParams) -> EdgeVector {
    let mut lengths = Vec::with_capacity(6 * p.n - 15);
    for c in &p.curves {
        lengths.push(c.c);
    }
    for h in &p.hats {
        lengths.extend_from_slice(&[h.delta_p, h.delta_q, h.lambda_p, h.lambda_q]);
    }
    for v in &p.vpieces {
        lengths.extend_from_slice(&[
            v.edges.arc_a_same,
            v.edges.arc_a_cross,
            v.edges.arc_b_same,
            v.edges.arc_b_cross,
            v.edges.xi,
        ]);
    }
    debug_assert_eq!(lengths.len(), 6 * p.n - 15);
    EdgeVector { n: p.n, lengths }
}

/// Rebuild intrinsic parameters from an edge vector. The kink angles are
/// not themselves edge lengths; they are recovered from the piece angles at
/// each whole singularity (the downstream side of curve `j` subtends
/// `2pi - kappa_j` there). The V-piece case flags and reconstruction angles
/// `eta` travel alongside the vector, like the hemisphere flags do.
pub fn intrinsics_from_edge_vector(
    v: &EdgeVector,
    alpha: &[f64],
    cases: &[VCase],
    etas: &[Option<f64>],
) -> Result<IntrinsicParams, RealizeError> {
    let n = v.n;
    assert_eq!(v.lengths.len(), 6 * n - 15, "edge vector has the wrong length");
    assert_eq!(cases.len(), n - 4);
    let c_len = &v.lengths[..n - 3];
    let hat_at = |base: usize| HatIntrinsics {
        delta_p: v.lengths[base],
        delta_q: v.lengths[base + 1],
        lambda_p: v.lengths[base + 2],
        lambda_q: v.lengths[base + 3],
    };
    let hats = [hat_at(n - 3), hat_at(n + 1)];
    let mut vpieces = Vec::with_capacity(n - 4);
    for i in 0..n - 4 {
        let base = n + 5 + 5 * i;
        vpieces.push(VPieceIntrinsics {
            case: cases[i],
            edges: VPieceEdges {
                arc_a_same: v.lengths[base],
                arc_a_cross: v.lengths[base + 1],
                arc_b_same: v.lengths[base + 2],
                arc_b_cross: v.lengths[base + 3],
                xi: v.lengths[base + 4],
                eta: etas[i],
            },
        });
    }
    // Kink angles from the piece downstream of each curve.
    let tau = std::f64::consts::TAU;
    let mut curves = Vec::with_capacity(n - 3);
    for j in 0..n - 3 {
        let c = c_len[j];
        let psi = if j + 2 <= n - 3 {
            vpiece_singularity_angles(&vpieces[j], c, c_len[j + 1])?.0
        } else {
            hat_singularity_angle(&hats[1], c)?
        };
        curves.push(CurveIntrinsics { c, kappa: tau - psi });
    }
    Ok(IntrinsicParams { n, alpha: alpha.to_vec(), curves, hats, vpieces })
}

fn tri_angle(a: f64, b: f64, c: f64) -> Result<f64, TrigError> {
    let q = (a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh());
    if q.abs() > 1.0 + 1e-9 {
        return Err(TrigError::NotATriangle { quotient: q });
    }
    Ok(q.clamp(-1.0, 1.0).acos())
}

/// Base angle of the isosceles triangle with equal sides `lambda` and base
/// `delta` (half the cone around a puncture, cut open along `lambda`).
fn isosceles_base_angle(lambda: f64, delta: f64) -> f64 {
    ((delta / 2.0).tanh() / lambda.tanh()).clamp(-1.0, 1.0).acos()
}

/// Total angle of a joker's hat at its whole singularity, summed over the
/// three triangles of its triangulation.
pub fn hat_singularity_angle(h: &HatIntrinsics, c: f64) -> Result<f64, RealizeError> {
    let a1 = tri_angle(h.delta_p, h.delta_q, c)?;
    let a2 = tri_angle(h.delta_p, c, h.delta_q)?;
    let a3 = tri_angle(h.delta_q, c, h.delta_p)?;
    let w_p = isosceles_base_angle(h.lambda_p, h.delta_p);
    let w_q = isosceles_base_angle(h.lambda_q, h.delta_q);
    Ok(a1 + a2 + a3 + 2.0 * w_p + 2.0 * w_q)
}

/// Total angles of a V-piece at its two whole singularities `(S_a, S_b)`.
pub fn vpiece_singularity_angles(
    vp: &VPieceIntrinsics,
    c_a: f64,
    c_b: f64,
) -> Result<(f64, f64), RealizeError> {
    let e = &vp.edges;
    match vp.case {
        VCase::V1 => {
            // Triangles (la, la', c_a), (lb, lb', c_b), (la, lb, xi),
            // (la', lb', xi).
            let at_a = tri_angle(e.arc_a_same, c_a, e.arc_a_cross)?
                + tri_angle(e.arc_a_cross, c_a, e.arc_a_same)?
                + tri_angle(e.arc_a_same, e.xi, e.arc_b_same)?
                + tri_angle(e.arc_a_cross, e.xi, e.arc_b_cross)?;
            let at_b = tri_angle(e.arc_b_same, c_b, e.arc_b_cross)?
                + tri_angle(e.arc_b_cross, c_b, e.arc_b_same)?
                + tri_angle(e.arc_b_same, e.xi, e.arc_a_same)?
                + tri_angle(e.arc_b_cross, e.xi, e.arc_a_cross)?;
            Ok((at_a, at_b))
        }
        VCase::V2a | VCase::V2b => {
            // Triangles (c_a, r_a, xi), (c_b, r_b, xi), (kept_a, kept_b, r_a),
            // (kept_a, kept_b, r_b), with the replacement arcs in the slots
            // of the blocked edges.
            let (r_a, r_b, kept_a, kept_b) = match vp.case {
                VCase::V2a => (e.arc_a_same, e.arc_b_cross, e.arc_a_cross, e.arc_b_same),
                _ => (e.arc_a_cross, e.arc_b_same, e.arc_a_same, e.arc_b_cross),
            };
            let at_a = tri_angle(r_a, c_a, e.xi)?
                + tri_angle(e.xi, c_a, r_a)?
                + tri_angle(r_b, e.xi, c_b)?
                + tri_angle(kept_a, r_a, kept_b)?
                + tri_angle(kept_a, r_b, kept_b)?;
            let at_b = tri_angle(r_b, c_b, e.xi)?
                + tri_angle(e.xi, c_b, r_b)?
                + tri_angle(r_a, e.xi, c_a)?
                + tri_angle(kept_b, r_a, kept_a)?
                + tri_angle(kept_b, r_b, kept_a)?;
            Ok((at_a, at_b))
        }
    }
}

/// Total area of the assembled cone sphere, measured as twice the hemisphere
/// areas. Matches the angle-defect formula `sum(alpha) - 2pi(n-1)`.
pub fn total_area(assembly: &SamosaAssembly) -> f64 {
    let mut area = 0.0;
    for k in 1..=assembly.num_samosas() {
        let th = assembly.corner_angles(k).unwrap();
        area += 2.0 * (std::f64::consts::PI - (th[0] + th[1] + th[2]) / 2.0);
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::sampling::{self, SlitMode};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{PI, TAU};

    fn eps_of(a: &SamosaAssembly) -> Vec<(Hemisphere, Hemisphere)> {
        a.curves.iter().map(|c| (c.hem_phi_prime, c.hem_phi)).collect()
    }

    #[test]
    fn beta_pi_gives_straight_curves() {
        // n = 4 allows beta = pi.
        let alpha = vec![1.8 * PI; 4];
        let a = SamosaAssembly {
            n: 4,
            alpha,
            curves: vec![CurveParams {
                beta: PI,
                ell: 0.08,
                phi: 0.3,
                phi_prime: 0.25,
                hem_phi: Hemisphere::North,
                hem_phi_prime: Hemisphere::North,
            }],
        };
        assert!(a.validate().is_valid(), "{}", a.validate());
        let p = intrinsics(&a).unwrap();
        assert_eq!(p.curves[0].c, 0.16);
        assert_eq!(p.curves[0].kappa, 0.0);
        assert!(p.vpieces.is_empty());
        // kappa = 0 inverts exactly.
        let back = invert(&p, &eps_of(&a)).unwrap();
        assert_eq!(back.curves[0].ell, 0.08);
        assert_eq!(back.curves[0].beta, PI);
    }

    #[test]
    fn piece_census() {
        let mut rng = StdRng::seed_from_u64(81);
        for n in 4..=8 {
            let a = sampling::random_assembly(&mut rng, n, SlitMode::North);
            let p = intrinsics(&a).unwrap();
            assert_eq!(p.curves.len(), n - 3);
            assert_eq!(p.vpieces.len(), n - 4);
            let v = edge_vector(&a).unwrap();
            assert_eq!(v.lengths.len(), 6 * n - 15);
            assert!(v.lengths.iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn intrinsics_match_placement_oracle() {
        let mut rng = StdRng::seed_from_u64(82);
        for n in 4..=8 {
            for _ in 0..10 {
                let a = sampling::random_assembly(&mut rng, n, SlitMode::North);
                let p = intrinsics(&a).unwrap();
                let o = oracle::assembly_intrinsics_oracle(&a);
                for (i, (c, co)) in p.curves.iter().zip(o.curves.iter()).enumerate() {
                    assert!((c.c - co.c).abs() < 1e-8, "c at curve {i}");
                    assert!((c.kappa - co.kappa).abs() < 1e-8, "kappa at curve {i}");
                }
                for (h, ho) in p.hats.iter().zip(o.hats.iter()) {
                    assert!((h.lambda_p - ho.lambda_p).abs() < 1e-8);
                    assert!((h.lambda_q - ho.lambda_q).abs() < 1e-8);
                    assert!((h.delta_p - ho.delta_p).abs() < 1e-8);
                    assert!((h.delta_q - ho.delta_q).abs() < 1e-8);
                }
                for (vp, vo) in p.vpieces.iter().zip(o.vpieces.iter()) {
                    assert_eq!(vp.case, vo.case);
                    assert!((vp.edges.arc_a_same - vo.edges.arc_a_same).abs() < 1e-8);
                    assert!((vp.edges.arc_a_cross - vo.edges.arc_a_cross).abs() < 1e-8);
                    assert!((vp.edges.arc_b_same - vo.edges.arc_b_same).abs() < 1e-8);
                    assert!((vp.edges.arc_b_cross - vo.edges.arc_b_cross).abs() < 1e-8);
                    assert!((vp.edges.xi - vo.edges.xi).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn invert_round_trip() {
        let mut rng = StdRng::seed_from_u64(83);
        for n in 4..=8 {
            for _ in 0..40 {
                let mode = if rng.gen_bool(0.5) { SlitMode::North } else { SlitMode::Mixed };
                let a = sampling::random_assembly(&mut rng, n, mode);
                let p = intrinsics(&a).unwrap();
                let back = invert(&p, &eps_of(&a)).unwrap();
                for (c1, c2) in a.curves.iter().zip(back.curves.iter()) {
                    assert!((c1.beta - c2.beta).abs() < 1e-8, "beta");
                    assert!((c1.ell - c2.ell).abs() < 1e-8, "ell");
                    assert!((c1.phi - c2.phi).abs() < 1e-8, "phi");
                    assert!((c1.phi_prime - c2.phi_prime).abs() < 1e-8, "phi_prime");
                }
            }
        }
    }

    #[test]
    fn perturbed_lambda_is_never_silently_absorbed() {
        let mut rng = StdRng::seed_from_u64(84);
        for _ in 0..20 {
            let a = sampling::random_assembly(&mut rng, 6, SlitMode::North);
            let p = intrinsics(&a).unwrap();
            let mut bad = p.clone();
            bad.hats[0].lambda_p *= 1.1;
            match invert(&bad, &eps_of(&a)) {
                Err(_) => {}
                Ok(other) => {
                    // If a different assembly is produced, its re-measured
                    // intrinsics must match the perturbed inputs.
                    let re = intrinsics(&other).unwrap();
                    assert!((re.hats[0].lambda_p - bad.hats[0].lambda_p).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn total_area_matches_gauss_bonnet() {
        let mut rng = StdRng::seed_from_u64(85);
        for n in 4..=8 {
            for _ in 0..100 {
                let a = sampling::random_assembly(&mut rng, n, SlitMode::Mixed);
                let expect = a.alpha.iter().sum::<f64>() - TAU * (n as f64 - 1.0);
                assert!((total_area(&a) - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn area_shrinks_to_zero_at_the_defect_boundary() {
        let mut a = SamosaAssembly {
            n: 4,
            alpha: vec![1.5 * PI + 0.001; 4],
            curves: vec![CurveParams {
                beta: PI,
                ell: 0.01,
                phi: 0.2,
                phi_prime: 0.2,
                hem_phi: Hemisphere::North,
                hem_phi_prime: Hemisphere::North,
            }],
        };
        // sum(alpha) = 6pi + 0.004, barely above 2pi(n-1).
        assert!(a.validate().is_valid());
        assert!(total_area(&a) < 0.02);
        a.alpha = vec![1.5 * PI; 4];
        assert!(!a.validate().is_valid());
    }

    #[test]
    fn edge_vector_distinguishes_assemblies() {
        let mut rng = StdRng::seed_from_u64(86);
        for _ in 0..50 {
            let a = sampling::random_assembly(&mut rng, 6, SlitMode::North);
            let b = sampling::random_assembly(&mut rng, 6, SlitMode::North);
            let va = edge_vector(&a).unwrap();
            let vb = edge_vector(&b).unwrap();
            let gap = va
                .lengths
                .iter()
                .zip(vb.lengths.iter())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            assert!(gap > 1e-10);
        }
    }

    #[test]
    fn edge_vector_continuity() {
        let mut rng = StdRng::seed_from_u64(87);
        let delta = 1e-6;
        for _ in 0..10 {
            let a = sampling::random_assembly(&mut rng, 6, SlitMode::North);
            let v0 = edge_vector(&a).unwrap();
            for field in 0..4 {
                for i in 0..a.num_curves() {
                    let mut b = a.clone();
                    match field {
                        0 => b.curves[i].beta += delta,
                        1 => b.curves[i].ell += delta,
                        2 => b.curves[i].phi += delta * b.curves[i].phi.signum(),
                        _ => b.curves[i].phi_prime += delta * b.curves[i].phi_prime.signum(),
                    }
                    if !b.validate().is_valid() {
                        continue;
                    }
                    let v1 = match edge_vector(&b) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    for (x, y) in v0.lengths.iter().zip(v1.lengths.iter()) {
                        assert!(
                            (x - y).abs() < 1e3 * delta,
                            "edge jumped by {} under {delta} perturbation",
                            (x - y).abs()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singularity_angles_close_up() {
        let mut rng = StdRng::seed_from_u64(88);
        for n in 4..=8 {
            for _ in 0..10 {
                let a = sampling::random_assembly(&mut rng, n, SlitMode::North);
                let p = intrinsics(&a).unwrap();
                for j in 0..n - 3 {
                    // Upstream-side angle: hat for j = 0, else V-piece j-1.
                    let up = if j == 0 {
                        hat_singularity_angle(&p.hats[0], p.curves[0].c).unwrap()
                    } else {
                        vpiece_singularity_angles(&p.vpieces[j - 1], p.curves[j - 1].c, p.curves[j].c)
                            .unwrap()
                            .1
                    };
                    let down = if j == n - 4 {
                        hat_singularity_angle(&p.hats[1], p.curves[j].c).unwrap()
                    } else {
                        vpiece_singularity_angles(&p.vpieces[j], p.curves[j].c, p.curves[j + 1].c)
                            .unwrap()
                            .0
                    };
                    assert!((up + down - 2.0 * TAU).abs() < 1e-8, "angles at S_{j} do not close");
                    assert!((up - (TAU + p.curves[j].kappa)).abs() < 1e-8, "upstream angle");
                    assert!((down - (TAU - p.curves[j].kappa)).abs() < 1e-8, "downstream angle");
                }
            }
        }
    }

    #[test]
    fn rebuild_intrinsics_from_edge_vector() {
        let mut rng = StdRng::seed_from_u64(89);
        for n in 4..=8 {
            for _ in 0..10 {
                let a = sampling::random_assembly(&mut rng, n, SlitMode::North);
                let p = intrinsics(&a).unwrap();
                let v = edge_vector_of(&p);
                let cases: Vec<VCase> = p.vpieces.iter().map(|x| x.case).collect();
                let etas: Vec<Option<f64>> = p.vpieces.iter().map(|x| x.edges.eta).collect();
                let rebuilt = intrinsics_from_edge_vector(&v, &a.alpha, &cases, &etas).unwrap();
                for (x, y) in p.curves.iter().zip(rebuilt.curves.iter()) {
                    assert!((x.kappa - y.kappa).abs() < 1e-8, "kappa from edges");
                }
                let back = invert(&rebuilt, &eps_of(&a)).unwrap();
                for (c1, c2) in a.curves.iter().zip(back.curves.iter()) {
                    assert!((c1.beta - c2.beta).abs() < 1e-8);
                    assert!((c1.ell - c2.ell).abs() < 1e-8);
                    assert!((c1.phi - c2.phi).abs() < 1e-8);
                    assert!((c1.phi_prime - c2.phi_prime).abs() < 1e-8);
                }
            }
        }
    }
}
