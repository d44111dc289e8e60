//! Unfolding hamantash assemblies into planar nets, and SVG emission.
//!
//! Each samosa whose slits sit in one hemisphere unfolds: the other
//! hemisphere stays intact, and the slit hemisphere is cut along the slit
//! continuations (and, for two slits, the segment from their meeting point
//! to the un-slit corner) into flaps that flip over the equator. A samosa
//! with one generic slit becomes a pentagon, with two generic slits a
//! hexagon, and with a slit on the equator a quadrilateral.
//!
//! Consecutive unfolded samosas are laid out so the glued slit lips
//! coincide; the angles around each glued corner close up to exactly 2pi, so
//! both lip pairs of a curve coincide in the plane. Erasing the flaps leaves
//! the chain of intact hemispheres: for an all-northern assembly this is a
//! clockwise triangle chain whose rotation tuple is the holonomy of the
//! assembled cone sphere.

use crate::assembly::{Hemisphere, SamosaAssembly, SlitRole};
use crate::chains::TriangleChain;
use crate::hyp::{self, Anchor, HPoint, HTriangle, Isometry, Orientation};
use crate::trig;
use thiserror::Error;

/// Tolerance below which a slit counts as lying on the equator, switching
/// the unfolding to the quadrilateral case.
const ON_EQUATOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("assembly is not valid: {report}")]
    InvalidAssembly { report: String },
    #[error("samosa {samosa} has slits in both hemispheres and cannot unfold")]
    NotHamantash { samosa: usize },
    #[error(transparent)]
    Trig(#[from] trig::TrigError),
    #[error(transparent)]
    Hyp(#[from] hyp::HypError),
}

/// What a net vertex marks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VertexKind {
    /// Fractional singularity: un-slit corner for puncture `p` (0-based).
    Marked(usize),
    /// Glued slit corner of curve `k` (the chain vertex `B_k`).
    Glued(usize),
    /// Slit endpoint of curve `k` (a straight-edge marker; the whole
    /// singularity of the assembled sphere).
    SlitEnd(usize),
    /// Foot of a slit continuation on the equator, the meeting point of two
    /// continuations, or its mirror marker on an intact edge.
    CutFoot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetVertex {
    pub pos: HPoint,
    pub kind: VertexKind,
}

/// One unfolded samosa: boundary walk, the intact hemisphere's corners, and
/// the triangular regions it decomposes into (for area measurement).
#[derive(Debug, Clone)]
pub struct NetPolygon {
    /// 1-based samosa index.
    pub samosa: usize,
    /// Boundary vertices in walk order; edge `i` joins vertex `i` to vertex
    /// `i + 1` (mod len).
    pub vertices: Vec<NetVertex>,
    /// Walk indices of the intact hemisphere's corners, in cyclic order.
    pub corner_idx: [usize; 3],
    /// Triangular regions (intact hemisphere plus flaps).
    pub pieces: Vec<[HPoint; 3]>,
}

impl NetPolygon {
    /// Area measured from the placed pieces.
    pub fn area(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| HTriangle::from_vertices(*p).area())
            .sum()
    }

    /// Number of genuine corners (boundary vertices whose interior angle is
    /// not pi): 4, 5, or 6 for quadrilateral, pentagon, hexagon.
    pub fn corner_count(&self) -> usize {
        let m = self.vertices.len();
        (0..m)
            .filter(|&i| {
                let prev = self.vertices[(i + m - 1) % m].pos;
                let here = self.vertices[i].pos;
                let next = self.vertices[(i + 1) % m].pos;
                (hyp::angle_at(here, prev, next) - std::f64::consts::PI).abs() > 1e-7
            })
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

/// A pair of boundary edges identified by the assembly: either the two
/// copies of a cut inside one unfolded samosa, or the glued slit lips of a
/// pants curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlueTag {
    pub a: EdgeRef,
    pub b: EdgeRef,
    /// The pants curve for lip pairs; `None` for re-folding cuts.
    pub curve: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Net {
    pub polygons: Vec<NetPolygon>,
    pub glue: Vec<GlueTag>,
    /// The chain of intact hemispheres (clockwise for all-northern input).
    pub chain: TriangleChain,
}

impl Net {
    pub fn edge_points(&self, e: EdgeRef) -> (HPoint, HPoint) {
        let poly = &self.polygons[e.polygon];
        let m = poly.vertices.len();
        (poly.vertices[e.edge].pos, poly.vertices[(e.edge + 1) % m].pos)
    }

    pub fn edge_len(&self, e: EdgeRef) -> f64 {
        let (p, q) = self.edge_points(e);
        hyp::dist(p, q)
    }

    pub fn total_area(&self) -> f64 {
        self.polygons.iter().map(|p| p.area()).sum()
    }
}

/// A slit lip inside one unfolded samosa, before cross-samosa pairing.
#[derive(Debug, Clone, Copy)]
struct Lip {
    curve: usize,
    role: SlitRole,
    /// The lip on the side of the turning-angle gap between consecutive
    /// intact triangles; these are the copies that coincide first when the
    /// net is laid out.
    gamma_side: bool,
    edge: usize,
    corner_vertex: usize,
    end_vertex: usize,
}

struct UnfoldedSamosa {
    vertices: Vec<NetVertex>,
    corner_idx: [usize; 3],
    pieces: Vec<[HPoint; 3]>,
    internal_tags: Vec<(usize, usize)>,
    lips: Vec<Lip>,
}

/// Slit data in samosa-local terms.
struct LocalSlit {
    curve: usize,
    role: SlitRole,
    corner: usize,
    phi_abs: f64,
    ell: f64,
}

fn apply_iso(u: &mut UnfoldedSamosa, m: Isometry) {
    for v in u.vertices.iter_mut() {
        v.pos = m.apply(v.pos);
    }
    for p in u.pieces.iter_mut() {
        for q in p.iter_mut() {
            *q = m.apply(*q);
        }
    }
}

/// Direction of the slit ray at a corner of the placed hemisphere triangle:
/// rotate from the reference edge (towards the cyclic predecessor) into the
/// triangle by the slit angle.
fn slit_ray_dir(tri: &HTriangle, corner: usize, phi_abs: f64) -> f64 {
    let here = tri.vertices[corner];
    let pred = tri.vertices[(corner + 2) % 3];
    let succ = tri.vertices[(corner + 1) % 3];
    let d_ref = hyp::direction(here, pred);
    let d_other = hyp::direction(here, succ);
    let delta = hyp::wrap_tau(d_other - d_ref);
    let sgn = if delta < std::f64::consts::PI { 1.0 } else { -1.0 };
    d_ref + sgn * phi_abs
}

/// Unfold one samosa in local coordinates. `intact` is the placed intact
/// hemisphere; the slit hemisphere is its mirror image across each hinge.
fn unfold_samosa(
    assembly: &SamosaAssembly,
    k: usize,
    intact: &HTriangle,
) -> Result<UnfoldedSamosa, NetError> {
    let th = assembly.corner_angles(k).unwrap();
    let halves = [th[0] / 2.0, th[1] / 2.0, th[2] / 2.0];
    let slit_specs = assembly.slits_of(k).unwrap();
    let hemisphere = slit_specs[0].hemisphere;
    if slit_specs.iter().any(|s| s.hemisphere != hemisphere) {
        return Err(NetError::NotHamantash { samosa: k });
    }
    let slits: Vec<LocalSlit> = slit_specs
        .iter()
        .map(|s| LocalSlit {
            curve: s.curve,
            role: s.role,
            corner: s.corner,
            phi_abs: s.phi.abs(),
            ell: s.ell,
        })
        .collect();

    // The slit hemisphere, placed anywhere with the mirror orientation; its
    // points are carried into the plane flap by flap.
    let mirror = hyp::triangle_from_angles(
        halves[0],
        halves[1],
        halves[2],
        Anchor { at: HPoint::I, dir: 0.0, orientation: intact.orientation.flipped() },
    )?;

    // Map from the slit hemisphere into the plane across the hinge edge
    // (i, j): an orientation-preserving match of the shared edge puts the
    // mirror triangle on the far side automatically.
    let flap_map = |i: usize, j: usize| {
        hyp::match_segment(
            mirror.vertices[i],
            mirror.vertices[j],
            intact.vertices[i],
            intact.vertices[j],
        )
    };

    match slits.len() {
        1 => unfold_terminal(assembly, k, intact, &mirror, &slits[0], flap_map),
        2 => unfold_middle(assembly, k, intact, &mirror, &slits, flap_map),
        _ => unreachable!("chained assemblies carry one or two slits per samosa"),
    }
}

fn unfold_terminal(
    assembly: &SamosaAssembly,
    k: usize,
    intact: &HTriangle,
    mirror: &HTriangle,
    slit: &LocalSlit,
    flap_map: impl Fn(usize, usize) -> Isometry,
) -> Result<UnfoldedSamosa, NetError> {
    let j = slit.corner;
    let pred = (j + 2) % 3;
    let succ = (j + 1) % 3;
    let half = assembly.corner_angles(k).unwrap()[j] / 2.0;
    let (d_ref, theta_far) = assembly.slit_reference(k, j).unwrap();
    let kind_of = |corner: usize| corner_kind(assembly, k, corner);

    let on_pred = slit.phi_abs <= ON_EQUATOR_TOL;
    let on_succ = (half - slit.phi_abs).abs() <= ON_EQUATOR_TOL;
    if on_pred || on_succ {
        // Slit along an equator segment: the whole slit hemisphere flips
        // over the opposite hinge, yielding a quadrilateral.
        let along = if on_pred { pred } else { succ };
        let hinge = if on_pred { succ } else { pred };
        let map = flap_map(j, hinge);
        let s_len = slit.ell;
        let s_int = hyp::geodesic_point(
            intact.vertices[j],
            hyp::direction(intact.vertices[j], intact.vertices[along]),
            s_len,
        );
        let s_flap = map.apply(hyp::geodesic_point(
            mirror.vertices[j],
            hyp::direction(mirror.vertices[j], mirror.vertices[along]),
            s_len,
        ));
        let far = map.apply(mirror.vertices[along]);
        // Boundary: corner_j -> S* -> along -> hinge -> along' -> S_f -> corner_j,
        // oriented so the intact slit side comes first.
        let vertices = vec![
            NetVertex { pos: intact.vertices[j], kind: kind_of(j) },
            NetVertex { pos: s_int, kind: VertexKind::SlitEnd(slit.curve) },
            NetVertex { pos: intact.vertices[along], kind: kind_of(along) },
            NetVertex { pos: intact.vertices[hinge], kind: kind_of(hinge) },
            NetVertex { pos: far, kind: VertexKind::CutFoot },
            NetVertex { pos: s_flap, kind: VertexKind::SlitEnd(slit.curve) },
        ];
        let mut corner_idx = [0usize; 3];
        corner_idx[j] = 0;
        corner_idx[along] = 2;
        corner_idx[hinge] = 3;
        let pieces = vec![
            [intact.vertices[0], intact.vertices[1], intact.vertices[2]],
            [intact.vertices[j], far, intact.vertices[hinge]],
        ];
        // Extension pair [S, along] and the cut far side [along, hinge].
        let internal_tags = vec![(1, 4), (2, 3)];
        // The gamma-side lip is the one adjacent to the flap hinged at the
        // chain edge (slit corner, corner 1). On the equator that flap has
        // zero width on one side; the lip bordering it is gamma-side.
        let gamma_on_flap = hinge == 1;
        let lips = vec![
            Lip {
                curve: slit.curve,
                role: slit.role,
                gamma_side: !gamma_on_flap,
                edge: 0,
                corner_vertex: 0,
                end_vertex: 1,
            },
            Lip {
                curve: slit.curve,
                role: slit.role,
                gamma_side: gamma_on_flap,
                edge: 5,
                corner_vertex: 0,
                end_vertex: 5,
            },
        ];
        return Ok(UnfoldedSamosa { vertices, corner_idx, pieces, internal_tags, lips });
    }

    // Generic slit: two flaps, pentagon.
    let ext_len = trig::slit_max_one(d_ref, slit.phi_abs, theta_far);
    let ray = slit_ray_dir(mirror, j, slit.phi_abs);
    let s_m = hyp::geodesic_point(mirror.vertices[j], ray, slit.ell);
    let e_m = hyp::geodesic_point(mirror.vertices[j], ray, ext_len);

    let map_pred = flap_map(j, pred);
    let map_succ = flap_map(j, succ);
    let s_pred = map_pred.apply(s_m);
    let e_pred = map_pred.apply(e_m);
    let s_succ = map_succ.apply(s_m);
    let e_succ = map_succ.apply(e_m);
    // Mirror marker on the intact far side, at the distance of E from the
    // predecessor corner.
    let split = hyp::dist(e_m, mirror.vertices[pred]);
    let e_star = hyp::geodesic_point(
        intact.vertices[pred],
        hyp::direction(intact.vertices[pred], intact.vertices[succ]),
        split,
    );

    // Walk: corner_j -> S -> E (pred flap) -> pred -> E* -> succ (intact far
    // side) -> E -> S (succ flap) -> corner_j.
    let vertices = vec![
        NetVertex { pos: intact.vertices[j], kind: kind_of(j) },
        NetVertex { pos: s_pred, kind: VertexKind::SlitEnd(slit.curve) },
        NetVertex { pos: e_pred, kind: VertexKind::CutFoot },
        NetVertex { pos: intact.vertices[pred], kind: kind_of(pred) },
        NetVertex { pos: e_star, kind: VertexKind::CutFoot },
        NetVertex { pos: intact.vertices[succ], kind: kind_of(succ) },
        NetVertex { pos: e_succ, kind: VertexKind::CutFoot },
        NetVertex { pos: s_succ, kind: VertexKind::SlitEnd(slit.curve) },
    ];
    let mut corner_idx = [0usize; 3];
    corner_idx[j] = 0;
    corner_idx[pred] = 3;
    corner_idx[succ] = 5;
    let pieces = vec![
        [intact.vertices[0], intact.vertices[1], intact.vertices[2]],
        [intact.vertices[j], e_pred, intact.vertices[pred]],
        [intact.vertices[j], intact.vertices[succ], e_succ],
    ];
    let internal_tags = vec![(1, 6), (2, 3), (4, 5)];
    // Gamma-side flap is the one hinged on the edge (slit corner, corner 1).
    let gamma_is_pred = pred == 1;
    let lips = vec![
        Lip {
            curve: slit.curve,
            role: slit.role,
            gamma_side: gamma_is_pred,
            edge: 0,
            corner_vertex: 0,
            end_vertex: 1,
        },
        Lip {
            curve: slit.curve,
            role: slit.role,
            gamma_side: !gamma_is_pred,
            edge: 7,
            corner_vertex: 0,
            end_vertex: 7,
        },
    ];
    Ok(UnfoldedSamosa { vertices, corner_idx, pieces, internal_tags, lips })
}

fn unfold_middle(
    assembly: &SamosaAssembly,
    k: usize,
    intact: &HTriangle,
    mirror: &HTriangle,
    slits: &[LocalSlit],
    flap_map: impl Fn(usize, usize) -> Isometry,
) -> Result<UnfoldedSamosa, NetError> {
    // Corners: 0 = downstream slit, 1 = un-slit, 2 = upstream slit.
    let (sa, sb) = (&slits[0], &slits[1]);
    debug_assert!(sa.corner == 0 && sb.corner == 2);
    let th = assembly.corner_angles(k).unwrap();
    let d = assembly.equator_lengths(k).unwrap();
    let kind_of = |corner: usize| corner_kind(assembly, k, corner);

    // Meeting point of the slit continuations, from the paired length
    // bounds (both rays reach it).
    let (la_max, lb_max) = trig::slit_max_two(d[1], sa.phi_abs, sb.phi_abs, th[2])?;
    let ray_a = slit_ray_dir(mirror, 0, sa.phi_abs);
    let ray_b = slit_ray_dir(mirror, 2, sb.phi_abs);
    let m_a = hyp::geodesic_point(mirror.vertices[0], ray_a, la_max);
    let m_b = hyp::geodesic_point(mirror.vertices[2], ray_b, lb_max);
    debug_assert!(hyp::dist(m_a, m_b) < 1e-8, "slit continuations must meet in one point");
    let meet = m_a;
    let s_a = hyp::geodesic_point(mirror.vertices[0], ray_a, sa.ell);
    let s_b = hyp::geodesic_point(mirror.vertices[2], ray_b, sb.ell);

    let map_mid = flap_map(2, 0);
    let map_ru = flap_map(0, 1);
    let map_lu = flap_map(1, 2);

    let (sa_mid, m_mid, sb_mid) = (map_mid.apply(s_a), map_mid.apply(meet), map_mid.apply(s_b));
    let (sa_ru, m_ru) = (map_ru.apply(s_a), map_ru.apply(meet));
    let (sb_lu, m_lu) = (map_lu.apply(s_b), map_lu.apply(meet));

    // Walk: R -> Sa -> M -> Sb -> L (middle flap), L -> Sb -> M (LU flap),
    // M -> U, U -> M (RU flap), M -> Sa -> R.
    let vertices = vec![
        NetVertex { pos: intact.vertices[0], kind: kind_of(0) },
        NetVertex { pos: sa_mid, kind: VertexKind::SlitEnd(sa.curve) },
        NetVertex { pos: m_mid, kind: VertexKind::CutFoot },
        NetVertex { pos: sb_mid, kind: VertexKind::SlitEnd(sb.curve) },
        NetVertex { pos: intact.vertices[2], kind: kind_of(2) },
        NetVertex { pos: sb_lu, kind: VertexKind::SlitEnd(sb.curve) },
        NetVertex { pos: m_lu, kind: VertexKind::CutFoot },
        NetVertex { pos: intact.vertices[1], kind: kind_of(1) },
        NetVertex { pos: m_ru, kind: VertexKind::CutFoot },
        NetVertex { pos: sa_ru, kind: VertexKind::SlitEnd(sa.curve) },
    ];
    let corner_idx = [0, 7, 4];
    let pieces = vec![
        [intact.vertices[0], intact.vertices[1], intact.vertices[2]],
        [intact.vertices[0], m_mid, intact.vertices[2]],
        [intact.vertices[0], intact.vertices[1], m_ru],
        [intact.vertices[1], intact.vertices[2], m_lu],
    ];
    // Extension pairs for both slits, and the two copies of [meet, U].
    let internal_tags = vec![(1, 8), (2, 5), (6, 7)];
    let lips = vec![
        Lip {
            curve: sa.curve,
            role: SlitRole::Downstream,
            gamma_side: false,
            edge: 0,
            corner_vertex: 0,
            end_vertex: 1,
        },
        Lip {
            curve: sa.curve,
            role: SlitRole::Downstream,
            gamma_side: true,
            edge: 9,
            corner_vertex: 0,
            end_vertex: 9,
        },
        Lip {
            curve: sb.curve,
            role: SlitRole::Upstream,
            gamma_side: false,
            edge: 3,
            corner_vertex: 4,
            end_vertex: 3,
        },
        Lip {
            curve: sb.curve,
            role: SlitRole::Upstream,
            gamma_side: true,
            edge: 4,
            corner_vertex: 4,
            end_vertex: 5,
        },
    ];
    Ok(UnfoldedSamosa { vertices, corner_idx, pieces, internal_tags, lips })
}

fn corner_kind(assembly: &SamosaAssembly, k: usize, corner: usize) -> VertexKind {
    let m = assembly.num_samosas();
    if k == 1 {
        match corner {
            0 => VertexKind::Marked(0),
            1 => VertexKind::Marked(1),
            _ => VertexKind::Glued(0),
        }
    } else if k == m {
        match corner {
            0 => VertexKind::Glued(k - 2),
            1 => VertexKind::Marked(k),
            _ => VertexKind::Marked(k + 1),
        }
    } else {
        match corner {
            0 => VertexKind::Glued(k - 2),
            1 => VertexKind::Marked(k),
            _ => VertexKind::Glued(k - 1),
        }
    }
}

/// Unfold a hamantash assembly into a planar net.
///
/// The first samosa's intact hemisphere is anchored with its first corner at
/// the reference point and its first edge along the reference direction, so
/// nets are reproducible; the intact triangles coincide with the triangle
/// chain built from the assembly's coordinates.
pub fn unfold(assembly: &SamosaAssembly) -> Result<Net, NetError> {
    let report = assembly.validate();
    if !report.is_valid() {
        return Err(NetError::InvalidAssembly { report: report.to_string() });
    }

    let m = assembly.num_samosas();
    let mut polygons: Vec<NetPolygon> = Vec::with_capacity(m);
    let mut glue: Vec<GlueTag> = Vec::new();
    let mut unfolded: Vec<UnfoldedSamosa> = Vec::with_capacity(m);
    let mut intacts: Vec<HTriangle> = Vec::with_capacity(m);

    for k in 1..=m {
        let th = assembly.corner_angles(k).unwrap();
        let halves = [th[0] / 2.0, th[1] / 2.0, th[2] / 2.0];
        let hemis = assembly.slits_of(k).unwrap()[0].hemisphere;
        let orientation = match hemis {
            Hemisphere::North => Orientation::Cw,
            Hemisphere::South => Orientation::Ccw,
        };
        // Local placement; samosa 1 is already global.
        let anchor = Anchor { at: HPoint::I, dir: 0.0, orientation };
        let intact = hyp::triangle_from_angles(halves[0], halves[1], halves[2], anchor)?;
        let mut u = unfold_samosa(assembly, k, &intact)?;
        let mut intact_placed = intact;

        if k > 1 {
            // Glue along curve k-2 (0-based): match this samosa's
            // gamma-side downstream lip onto the previous samosa's placed
            // gamma-side upstream lip.
            let prev = &unfolded[k - 2];
            let target = prev
                .lips
                .iter()
                .find(|l| l.curve == k - 2 && l.role == SlitRole::Upstream && l.gamma_side)
                .expect("previous samosa carries the upstream lip");
            let here = u
                .lips
                .iter()
                .find(|l| l.curve == k - 2 && l.role == SlitRole::Downstream && l.gamma_side)
                .expect("this samosa carries the downstream lip");
            let g = hyp::match_segment(
                u.vertices[here.corner_vertex].pos,
                u.vertices[here.end_vertex].pos,
                prev.vertices[target.corner_vertex].pos,
                prev.vertices[target.end_vertex].pos,
            );
            apply_iso(&mut u, g);
            intact_placed = HTriangle::from_vertices([
                g.apply(intact.vertices[0]),
                g.apply(intact.vertices[1]),
                g.apply(intact.vertices[2]),
            ]);
        }

        for &(a, b) in &u.internal_tags {
            glue.push(GlueTag {
                a: EdgeRef { polygon: k - 1, edge: a },
                b: EdgeRef { polygon: k - 1, edge: b },
                curve: None,
            });
        }
        intacts.push(intact_placed);
        unfolded.push(u);
    }

    // Cross-samosa lip pairs: gamma-side with gamma-side, other with other.
    for c in 0..assembly.num_curves() {
        let up_poly = c; // samosa c+1 holds the upstream slit
        let down_poly = c + 1;
        for gamma_side in [true, false] {
            let up = unfolded[up_poly]
                .lips
                .iter()
                .find(|l| l.curve == c && l.role == SlitRole::Upstream && l.gamma_side == gamma_side)
                .unwrap();
            let down = unfolded[down_poly]
                .lips
                .iter()
                .find(|l| {
                    l.curve == c && l.role == SlitRole::Downstream && l.gamma_side == gamma_side
                })
                .unwrap();
            glue.push(GlueTag {
                a: EdgeRef { polygon: up_poly, edge: up.edge },
                b: EdgeRef { polygon: down_poly, edge: down.edge },
                curve: Some(c),
            });
        }
    }

    for (i, u) in unfolded.into_iter().enumerate() {
        polygons.push(NetPolygon {
            samosa: i + 1,
            vertices: u.vertices,
            corner_idx: u.corner_idx,
            pieces: u.pieces,
        });
    }

    // Chain overlay from the intact hemispheres.
    let n = assembly.n;
    let mut c_pts = Vec::with_capacity(n);
    let mut b_pts = Vec::with_capacity(n - 3);
    c_pts.push(intacts[0].vertices[0]);
    c_pts.push(intacts[0].vertices[1]);
    for t in intacts.iter().take(m).skip(1) {
        b_pts.push(t.vertices[0]);
        c_pts.push(t.vertices[1]);
    }
    c_pts.push(intacts[m - 1].vertices[2]);
    let chain = TriangleChain { c: c_pts, b: b_pts, triangles: intacts };

    Ok(Net { polygons, glue, chain })
}

/// Options for SVG rendering.
#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    /// Draw the chain of intact hemispheres.
    pub overlay: bool,
    /// Highlight the slit lips.
    pub markers: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { overlay: true, markers: true }
    }
}

/// Cayley transform to the Poincaré disk: `w = (z - i) / (z + i)`.
pub fn to_disk(p: HPoint) -> (f64, f64) {
    // (x + i(y-1)) / (x + i(y+1))
    let num = (p.x, p.y - 1.0);
    let den = (p.x, p.y + 1.0);
    let d2 = den.0 * den.0 + den.1 * den.1;
    ((num.0 * den.0 + num.1 * den.1) / d2, (num.1 * den.0 - num.0 * den.1) / d2)
}

fn fmt(v: f64) -> String {
    // Enough digits that parsing the path data reproduces the geometry.
    format!("{:.12}", v)
}

/// Path command for the geodesic from `a` to `b` in the disk: a circular arc
/// on the circle through both points orthogonal to the unit circle, or a
/// straight segment when the geodesic runs through the origin.
fn arc_to(a: (f64, f64), b: (f64, f64)) -> String {
    let cross = a.0 * b.1 - a.1 * b.0;
    let na = a.0 * a.0 + a.1 * a.1;
    let nb = b.0 * b.0 + b.1 * b.1;
    if cross.abs() < 1e-12 * (1.0 + na.max(nb)) {
        return format!("L {} {}", fmt(b.0), fmt(b.1));
    }
    // Orthogonality: 2 <c, w> = |w|^2 + 1 for both endpoints.
    let det = 2.0 * cross;
    let cx = ((na + 1.0) * b.1 - (nb + 1.0) * a.1) / det;
    let cy = ((nb + 1.0) * a.0 - (na + 1.0) * b.0) / det;
    let r = (cx * cx + cy * cy - 1.0).max(1e-300).sqrt();
    let sweep = if (a.0 - cx) * (b.1 - cy) - (a.1 - cy) * (b.0 - cx) > 0.0 { 1 } else { 0 };
    format!("A {} {} 0 0 {} {} {}", fmt(r), fmt(r), sweep, fmt(b.0), fmt(b.1))
}

const FILL_PALETTE: [&str; 6] = ["#4a79a5", "#a55d4a", "#5da54a", "#8a4aa5", "#a5984a", "#4aa59a"];

/// Render the net into a deterministic SVG document.
pub fn emit_svg(net: &Net, options: SvgOptions) -> String {
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"800\" height=\"800\">\n",
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    out.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.004\"/>\n");
    for (i, poly) in net.polygons.iter().enumerate() {
        let pts: Vec<(f64, f64)> = poly.vertices.iter().map(|v| to_disk(v.pos)).collect();
        let mut d = format!("M {} {}", fmt(pts[0].0), fmt(pts[0].1));
        for j in 0..pts.len() {
            let next = pts[(j + 1) % pts.len()];
            d.push(' ');
            d.push_str(&arc_to(pts[j], next));
        }
        d.push_str(" Z");
        let fill = FILL_PALETTE[i % FILL_PALETTE.len()];
        out.push_str(&format!(
            "<path id=\"samosa-{}\" d=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" stroke=\"#333333\" stroke-width=\"0.004\"/>\n",
            poly.samosa, d, fill
        ));
    }
    if options.markers {
        for (t, tag) in net.glue.iter().enumerate() {
            if tag.curve.is_none() {
                continue;
            }
            let (p, q) = net.edge_points(tag.a);
            let a = to_disk(p);
            let b = to_disk(q);
            out.push_str(&format!(
                "<path id=\"lip-{}\" d=\"M {} {} {}\" fill=\"none\" stroke=\"#d0453e\" stroke-width=\"0.008\"/>\n",
                t,
                fmt(a.0),
                fmt(a.1),
                arc_to(a, b)
            ));
        }
    }
    if options.overlay {
        for (k, tri) in net.chain.triangles.iter().enumerate() {
            let v: Vec<(f64, f64)> = tri.vertices.iter().map(|&p| to_disk(p)).collect();
            let mut d = format!("M {} {}", fmt(v[0].0), fmt(v[0].1));
            for j in 0..3 {
                let next = v[(j + 1) % 3];
                d.push(' ');
                d.push_str(&arc_to(v[j], next));
            }
            d.push_str(" Z");
            out.push_str(&format!(
                "<path id=\"chain-{}\" d=\"{}\" fill=\"none\" stroke=\"#1b7837\" stroke-width=\"0.006\"/>\n",
                k, d
            ));
        }
        for (k, &b) in net.chain.b.iter().enumerate() {
            let (x, y) = to_disk(b);
            out.push_str(&format!(
                "<circle id=\"b-{}\" cx=\"{}\" cy=\"{}\" r=\"0.012\" fill=\"#1b7837\"/>\n",
                k,
                fmt(x),
                fmt(y)
            ));
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{self, SlitMode};
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::TAU;

    fn area_expected(a: &SamosaAssembly) -> f64 {
        a.alpha.iter().sum::<f64>() - TAU * (a.n as f64 - 1.0)
    }

    #[test]
    fn unfold_random_north_assemblies() {
        let mut rng = StdRng::seed_from_u64(71);
        for n in 4..=8 {
            for _ in 0..15 {
                let a = sampling::random_assembly(&mut rng, n, SlitMode::North);
                let net = unfold(&a).unwrap();
                assert_eq!(net.polygons.len(), n - 2);
                // Terminal samosas are pentagons, middles hexagons.
                assert_eq!(net.polygons[0].corner_count(), 5);
                assert_eq!(net.polygons[n - 3].corner_count(), 5);
                for p in &net.polygons[1..n - 3] {
                    assert_eq!(p.corner_count(), 6);
                }
                // Every glued edge pair has matching length.
                for tag in &net.glue {
                    let la = net.edge_len(tag.a);
                    let lb = net.edge_len(tag.b);
                    assert!((la - lb).abs() < 1e-9, "glue mismatch {la} vs {lb}");
                }
                // Lip pairs coincide as segments in the laid-out net.
                for tag in net.glue.iter().filter(|t| t.curve.is_some()) {
                    let (a1, a2) = net.edge_points(tag.a);
                    let (b1, b2) = net.edge_points(tag.b);
                    let direct = hyp::dist(a1, b1) + hyp::dist(a2, b2);
                    let crossed = hyp::dist(a1, b2) + hyp::dist(a2, b1);
                    assert!(direct.min(crossed) < 1e-8, "lips fail to coincide");
                }
                // Area conservation.
                assert!((net.total_area() - area_expected(&a)).abs() < 1e-9);
                // The chain is a valid clockwise chain.
                net.chain.validate().unwrap();
            }
        }
    }

    #[test]
    fn corner_angles_of_the_net() {
        // The unfolded polygon has angle 2pi - alpha_i at each marked corner,
        // summing the intact wedge with the flap wedges.
        let mut rng = StdRng::seed_from_u64(72);
        let a = sampling::random_assembly(&mut rng, 6, SlitMode::North);
        let net = unfold(&a).unwrap();
        for poly in &net.polygons {
            let m = poly.vertices.len();
            for (i, v) in poly.vertices.iter().enumerate() {
                if let VertexKind::Marked(p) = v.kind {
                    let prev = poly.vertices[(i + m - 1) % m].pos;
                    let next = poly.vertices[(i + 1) % m].pos;
                    let total: f64 = poly
                        .pieces
                        .iter()
                        .filter_map(|piece| {
                            piece.iter().position(|q| hyp::dist(*q, v.pos) < 1e-9).map(|j| {
                                hyp::angle_at(
                                    piece[j],
                                    piece[(j + 1) % 3],
                                    piece[(j + 2) % 3],
                                )
                            })
                        })
                        .sum();
                    let _ = (prev, next);
                    assert!(
                        (total - (TAU - a.alpha[p])).abs() < 1e-9,
                        "corner angle at puncture {p}: {total}"
                    );
                }
            }
        }
    }

    #[test]
    fn quadrilateral_case_on_the_equator() {
        let mut rng = StdRng::seed_from_u64(73);
        let mut a = sampling::random_assembly(&mut rng, 4, SlitMode::North);
        // Slit of samosa 1 along the equator (phi' = 0), shortened to fit.
        a.curves[0].phi_prime = 0.0;
        let d = a.equator_lengths(1).unwrap();
        a.curves[0].ell = a.curves[0].ell.min(0.4 * d[0]);
        assert!(a.validate().is_valid(), "{}", a.validate());
        let net = unfold(&a).unwrap();
        assert_eq!(net.polygons[0].corner_count(), 4);
        assert!((net.total_area() - area_expected(&a)).abs() < 1e-9);
        for tag in &net.glue {
            assert!((net.edge_len(tag.a) - net.edge_len(tag.b)).abs() < 1e-9);
        }
    }

    #[test]
    fn south_assembly_unfolds_mirrored() {
        let mut rng = StdRng::seed_from_u64(74);
        let mut a = sampling::random_assembly(&mut rng, 5, SlitMode::North);
        for c in a.curves.iter_mut() {
            c.phi = -c.phi;
            c.phi_prime = -c.phi_prime;
            c.hem_phi = Hemisphere::South;
            c.hem_phi_prime = Hemisphere::South;
        }
        assert!(a.validate().is_valid());
        let net = unfold(&a).unwrap();
        assert!((net.total_area() - area_expected(&a)).abs() < 1e-9);
        // The intact chain is now counterclockwise, not a large-angle chain.
        assert!(net.chain.validate().is_err());
    }

    #[test]
    fn mixed_hemispheres_rejected() {
        let mut rng = StdRng::seed_from_u64(75);
        loop {
            let a = sampling::random_assembly(&mut rng, 5, SlitMode::Mixed);
            let flags = a.classify();
            if flags.is_hamantash {
                continue;
            }
            assert!(matches!(unfold(&a), Err(NetError::NotHamantash { .. })));
            break;
        }
    }

    #[test]
    fn svg_deterministic_and_coordinates_echo() {
        let mut rng = StdRng::seed_from_u64(76);
        let a = sampling::random_assembly(&mut rng, 5, SlitMode::North);
        let net = unfold(&a).unwrap();
        let svg1 = emit_svg(&net, SvgOptions::default());
        let svg2 = emit_svg(&net, SvgOptions::default());
        assert_eq!(svg1, svg2);
        // Overlay off drops the chain paths.
        let plain = emit_svg(&net, SvgOptions { overlay: false, markers: false });
        assert!(!plain.contains("chain-"));
        assert!(!plain.contains("lip-"));
        // Echo: the first polygon's M command reproduces the disk image of
        // its first vertex.
        let first = to_disk(net.polygons[0].vertices[0].pos);
        let needle = format!("M {} {}", super::fmt(first.0), super::fmt(first.1));
        assert!(svg1.contains(&needle));
        // And parsing back all M commands matches the stored vertices.
        for poly in &net.polygons {
            let (x, y) = to_disk(poly.vertices[0].pos);
            let m = format!("M {} {}", super::fmt(x), super::fmt(y));
            assert!(svg1.contains(&m));
            let parsed: Vec<f64> = m
                .trim_start_matches("M ")
                .split(' ')
                .map(|s| s.parse().unwrap())
                .collect();
            assert!((parsed[0] - x).abs() < 1e-9 && (parsed[1] - y).abs() < 1e-9);
        }
    }
}
