//! JSON formats for assemblies, representations, intrinsic parameters and
//! edge vectors. Every document carries `version: 1` and
//! `case: "large-angle"`; numbers round-trip exactly through the
//! shortest-representation decimal encoding.

use crate::assembly::{CurveParams, Hemisphere, SamosaAssembly};
use crate::dtrep::DtRep;
use crate::hyp::Isometry;
use crate::realize::{CurveIntrinsics, EdgeVector, HatIntrinsics, IntrinsicParams, VPieceIntrinsics};
use crate::trig::{VCase, VPieceEdges};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;
pub const CASE_TAG: &str = "large-angle";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported version {0}")]
    Version(u32),
    #[error("unsupported case {0:?} (only \"large-angle\" is implemented)")]
    Case(String),
    #[error("inconsistent document: {0}")]
    Shape(String),
    #[error("generator {index} is not a valid matrix: {reason}")]
    BadMatrix { index: usize, reason: String },
}

fn check_header(version: u32, case: &str) -> Result<(), IoError> {
    if version != FORMAT_VERSION {
        return Err(IoError::Version(version));
    }
    if case != CASE_TAG {
        return Err(IoError::Case(case.to_string()));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    beta: f64,
    ell: f64,
    phi: f64,
    phi_prime: f64,
    hem_phi: Hemisphere,
    hem_phi_prime: Hemisphere,
}

#[derive(Serialize, Deserialize)]
struct AssemblyJson {
    version: u32,
    case: String,
    n: usize,
    alpha: Vec<f64>,
    curves: Vec<CurveJson>,
}

pub fn assembly_to_json(a: &SamosaAssembly) -> String {
    let doc = AssemblyJson {
        version: FORMAT_VERSION,
        case: CASE_TAG.to_string(),
        n: a.n,
        alpha: a.alpha.clone(),
        curves: a
            .curves
            .iter()
            .map(|c| CurveJson {
                beta: c.beta,
                ell: c.ell,
                phi: c.phi,
                phi_prime: c.phi_prime,
                hem_phi: c.hem_phi,
                hem_phi_prime: c.hem_phi_prime,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("assembly serializes")
}

pub fn assembly_from_json(s: &str) -> Result<SamosaAssembly, IoError> {
    let doc: AssemblyJson = serde_json::from_str(s)?;
    check_header(doc.version, &doc.case)?;
    if doc.alpha.len() != doc.n || doc.curves.len() + 3 != doc.n {
        return Err(IoError::Shape(format!(
            "n = {} with {} defects and {} curve blocks",
            doc.n,
            doc.alpha.len(),
            doc.curves.len()
        )));
    }
    Ok(SamosaAssembly {
        n: doc.n,
        alpha: doc.alpha,
        curves: doc
            .curves
            .into_iter()
            .map(|c| CurveParams {
                beta: c.beta,
                ell: c.ell,
                phi: c.phi,
                phi_prime: c.phi_prime,
                hem_phi: c.hem_phi,
                hem_phi_prime: c.hem_phi_prime,
            })
            .collect(),
    })
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    version: u32,
    case: String,
    n: usize,
    alpha: Vec<f64>,
    gens: Vec<[f64; 4]>,
}

/// Representations are serialized as matrices; rotation angles are
/// recomputed and validated on load, avoiding branch ambiguity.
pub fn rep_to_json(r: &DtRep) -> String {
    let doc = RepJson {
        version: FORMAT_VERSION,
        case: CASE_TAG.to_string(),
        n: r.n,
        alpha: r.alpha.clone(),
        gens: r.gens.iter().map(|g| [g.a, g.b, g.c, g.d]).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("representation serializes")
}

pub fn rep_from_json(s: &str) -> Result<DtRep, IoError> {
    let doc: RepJson = serde_json::from_str(s)?;
    check_header(doc.version, &doc.case)?;
    if doc.alpha.len() != doc.n || doc.gens.len() != doc.n {
        return Err(IoError::Shape("generator or defect count does not match n".into()));
    }
    let gens = doc
        .gens
        .iter()
        .enumerate()
        .map(|(index, m)| {
            Isometry::new(m[0], m[1], m[2], m[3])
                .map_err(|e| IoError::BadMatrix { index, reason: e.to_string() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DtRep { n: doc.n, alpha: doc.alpha, gens })
}

#[derive(Serialize, Deserialize)]
struct CurveIntrJson {
    c: f64,
    kappa: f64,
}

#[derive(Serialize, Deserialize)]
struct HatJson {
    lambda_p: f64,
    lambda_q: f64,
    delta_p: f64,
    delta_q: f64,
}

#[derive(Serialize, Deserialize)]
struct VPieceJson {
    case: String,
    arc_a_same: f64,
    arc_a_cross: f64,
    arc_b_same: f64,
    arc_b_cross: f64,
    xi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct IntrinsicsJson {
    version: u32,
    case: String,
    n: usize,
    alpha: Vec<f64>,
    curves: Vec<CurveIntrJson>,
    hats: Vec<HatJson>,
    vpieces: Vec<VPieceJson>,
}

fn vcase_tag(c: VCase) -> &'static str {
    match c {
        VCase::V1 => "V1",
        VCase::V2a => "V2a",
        VCase::V2b => "V2b",
    }
}

fn vcase_parse(s: &str) -> Result<VCase, IoError> {
    match s {
        "V1" => Ok(VCase::V1),
        "V2a" => Ok(VCase::V2a),
        "V2b" => Ok(VCase::V2b),
        other => Err(IoError::Shape(format!("unknown V-piece case {other:?}"))),
    }
}

pub fn intrinsics_to_json(p: &IntrinsicParams) -> String {
    let doc = IntrinsicsJson {
        version: FORMAT_VERSION,
        case: CASE_TAG.to_string(),
        n: p.n,
        alpha: p.alpha.clone(),
        curves: p.curves.iter().map(|c| CurveIntrJson { c: c.c, kappa: c.kappa }).collect(),
        hats: p
            .hats
            .iter()
            .map(|h| HatJson {
                lambda_p: h.lambda_p,
                lambda_q: h.lambda_q,
                delta_p: h.delta_p,
                delta_q: h.delta_q,
            })
            .collect(),
        vpieces: p
            .vpieces
            .iter()
            .map(|v| VPieceJson {
                case: vcase_tag(v.case).to_string(),
                arc_a_same: v.edges.arc_a_same,
                arc_a_cross: v.edges.arc_a_cross,
                arc_b_same: v.edges.arc_b_same,
                arc_b_cross: v.edges.arc_b_cross,
                xi: v.edges.xi,
                eta: v.edges.eta,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("intrinsics serialize")
}

pub fn intrinsics_from_json(s: &str) -> Result<IntrinsicParams, IoError> {
    let doc: IntrinsicsJson = serde_json::from_str(s)?;
    check_header(doc.version, &doc.case)?;
    if doc.alpha.len() != doc.n
        || doc.curves.len() + 3 != doc.n
        || doc.hats.len() != 2
        || doc.vpieces.len() + 4 != doc.n
    {
        return Err(IoError::Shape("piece counts do not match n".into()));
    }
    let hats: Vec<HatIntrinsics> = doc
        .hats
        .iter()
        .map(|h| HatIntrinsics {
            lambda_p: h.lambda_p,
            lambda_q: h.lambda_q,
            delta_p: h.delta_p,
            delta_q: h.delta_q,
        })
        .collect();
    Ok(IntrinsicParams {
        n: doc.n,
        alpha: doc.alpha,
        curves: doc.curves.iter().map(|c| CurveIntrinsics { c: c.c, kappa: c.kappa }).collect(),
        hats: [hats[0], hats[1]],
        vpieces: doc
            .vpieces
            .iter()
            .map(|v| {
                Ok(VPieceIntrinsics {
                    case: vcase_parse(&v.case)?,
                    edges: VPieceEdges {
                        arc_a_same: v.arc_a_same,
                        arc_a_cross: v.arc_a_cross,
                        arc_b_same: v.arc_b_same,
                        arc_b_cross: v.arc_b_cross,
                        xi: v.xi,
                        eta: v.eta,
                    },
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?,
    })
}

#[derive(Serialize, Deserialize)]
struct EdgesJson {
    version: u32,
    case: String,
    n: usize,
    lengths: Vec<f64>,
}

pub fn edges_to_json(v: &EdgeVector) -> String {
    let doc = EdgesJson {
        version: FORMAT_VERSION,
        case: CASE_TAG.to_string(),
        n: v.n,
        lengths: v.lengths.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("edge vector serializes")
}

pub fn edges_from_json(s: &str) -> Result<EdgeVector, IoError> {
    let doc: EdgesJson = serde_json::from_str(s)?;
    check_header(doc.version, &doc.case)?;
    if doc.lengths.len() != 6 * doc.n - 15 {
        return Err(IoError::Shape(format!(
            "edge vector for n = {} must have {} entries, got {}",
            doc.n,
            6 * doc.n - 15,
            doc.lengths.len()
        )));
    }
    Ok(EdgeVector { n: doc.n, lengths: doc.lengths })
}

/// Parse a hemisphere-flag string for `invert`: one `n`/`s` pair per curve,
/// upstream flag first, e.g. `nn,ns,sn` for three curves.
pub fn parse_eps(s: &str, curves: usize) -> Result<Vec<(Hemisphere, Hemisphere)>, IoError> {
    let flag = |ch: char| match ch {
        'n' | 'N' => Ok(Hemisphere::North),
        's' | 'S' => Ok(Hemisphere::South),
        other => Err(IoError::Shape(format!("unknown hemisphere flag {other:?}"))),
    };
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != curves {
        return Err(IoError::Shape(format!(
            "expected {curves} comma-separated pairs, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            let chars: Vec<char> = p.chars().collect();
            if chars.len() != 2 {
                return Err(IoError::Shape(format!("flag pair {p:?} must have two letters")));
            }
            Ok((flag(chars[0])?, flag(chars[1])?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{self, SlitMode};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn assembly_round_trip_is_bit_exact() {
        let mut rng = StdRng::seed_from_u64(101);
        for n in 4..=8 {
            let a = sampling::random_assembly(&mut rng, n, SlitMode::Mixed);
            let s = assembly_to_json(&a);
            let b = assembly_from_json(&s).unwrap();
            assert_eq!(a, b);
            assert_eq!(s, assembly_to_json(&b));
        }
    }

    #[test]
    fn rep_round_trip_is_bit_exact() {
        let mut rng = StdRng::seed_from_u64(102);
        let r = sampling::random_dtrep(&mut rng, 6);
        let s = rep_to_json(&r);
        let r2 = rep_from_json(&s).unwrap();
        assert_eq!(r.gens, r2.gens);
        r2.validate().unwrap();
    }

    #[test]
    fn intrinsics_and_edges_round_trip() {
        let mut rng = StdRng::seed_from_u64(103);
        let a = sampling::random_assembly(&mut rng, 6, SlitMode::North);
        let p = crate::realize::intrinsics(&a).unwrap();
        let p2 = intrinsics_from_json(&intrinsics_to_json(&p)).unwrap();
        assert_eq!(p, p2);
        let v = crate::realize::edge_vector_of(&p);
        let v2 = edges_from_json(&edges_to_json(&v)).unwrap();
        assert_eq!(v, v2);
    }

    #[test]
    fn rejects_bad_headers() {
        let mut rng = StdRng::seed_from_u64(104);
        let a = sampling::random_assembly(&mut rng, 4, SlitMode::North);
        let s = assembly_to_json(&a).replace("large-angle", "small-angle");
        assert!(matches!(assembly_from_json(&s), Err(IoError::Case(_))));
        let s = assembly_to_json(&a).replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(assembly_from_json(&s), Err(IoError::Version(2))));
    }

    #[test]
    fn parse_eps_flags() {
        use Hemisphere::*;
        let e = parse_eps("nn,ns,sn", 3).unwrap();
        assert_eq!(e, vec![(North, North), (North, South), (South, North)]);
        assert!(parse_eps("nn", 2).is_err());
        assert!(parse_eps("nx", 1).is_err());
    }
}
