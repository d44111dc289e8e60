//! Seeded random generation of valid coordinates, assemblies and
//! representations. Shared by the test suites and the `selftest` command.

use crate::assembly::{CurveParams, Hemisphere, SamosaAssembly};
use crate::chains::{self, ActionAngle};
use crate::dtrep::DtRep;
use crate::hyp::{self, Anchor, HPoint, Isometry};
use rand::Rng;
use std::f64::consts::TAU;

/// Hemisphere placement policy for random slits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitMode {
    /// All slits in northern hemispheres (hamantash territory).
    North,
    /// Independent random hemisphere per slit.
    Mixed,
}

/// Random angle defects with `sum(alpha) > 2pi(n-1)`, each in `(0, 2pi)`.
pub fn random_alpha<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    // Work with deficits x_p = 2pi - alpha_p, total 2pi s with s in (0, 1).
    let s = rng.gen_range(0.15..0.85);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.15..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| TAU - TAU * s * w / total).collect()
}

/// Random action coordinates strictly inside the polytope for `alpha`.
pub fn random_beta<R: Rng>(rng: &mut R, alpha: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    let deficits: Vec<f64> = alpha.iter().map(|a| TAU - a).collect();
    // Lower bounds accumulate deficits; the upper bound leaves room for the
    // deficits still to come.
    let upper = alpha[n - 2] + alpha[n - 1] - TAU;
    let mut beta = Vec::with_capacity(n - 3);
    let mut lo = deficits[0] + deficits[1];
    for k in 0..n - 3 {
        let remaining: f64 = deficits[k + 2..n - 2].iter().sum();
        let hi = upper - remaining;
        debug_assert!(hi > lo, "polytope interior empty");
        let w = hi - lo;
        let b = rng.gen_range(lo + 0.08 * w..hi - 0.08 * w);
        beta.push(b);
        if k + 1 < n - 3 {
            lo = b + deficits[k + 2];
        }
    }
    beta
}

/// Random action-angle coordinates with `gamma` uniform in `[0, gamma_max)`.
pub fn random_action_angle<R: Rng>(rng: &mut R, n: usize, gamma_max: f64) -> ActionAngle {
    let alpha = random_alpha(rng, n);
    let beta = random_beta(rng, &alpha);
    let gamma = (0..n - 3).map(|_| rng.gen_range(0.0..gamma_max)).collect();
    ActionAngle::new(alpha, beta, gamma).expect("sampled coordinates lie inside the polytope")
}

/// Random valid non-degenerate assembly with comfortable margins.
pub fn random_assembly<R: Rng>(rng: &mut R, n: usize, mode: SlitMode) -> SamosaAssembly {
    let alpha = random_alpha(rng, n);
    let beta = random_beta(rng, &alpha);
    let hemi = |rng: &mut R| match mode {
        SlitMode::North => Hemisphere::North,
        SlitMode::Mixed => {
            if rng.gen_bool(0.5) {
                Hemisphere::North
            } else {
                Hemisphere::South
            }
        }
    };
    let curves: Vec<CurveParams> = beta
        .iter()
        .map(|&b| {
            let hp = hemi(rng);
            let hq = hemi(rng);
            // Keep slit angles away from the equator directions so the
            // assembly stays generic and the two-slit bounds apply.
            let phi_mag = rng.gen_range(0.08..0.9) * (b / 2.0);
            let phi_prime_mag = rng.gen_range(0.08..0.85) * ((TAU - b) / 2.0);
            CurveParams {
                beta: b,
                ell: 1e-3,
                phi: hp.sign() * phi_mag,
                phi_prime: hq.sign() * phi_prime_mag,
                hem_phi: hp,
                hem_phi_prime: hq,
            }
        })
        .collect();
    let mut assembly = SamosaAssembly { n, alpha, curves };

    // Slit lengths: a random fraction of the tightest applicable bound.
    let mut bound = vec![f64::INFINITY; n - 3];
    for k in 1..=assembly.num_samosas() {
        let slits = assembly.slits_of(k).unwrap();
        let bounds = assembly.slit_bounds(k).unwrap();
        for (s, b) in slits.iter().zip(bounds) {
            let b = b.expect("sampled slit angles avoid degenerate directions");
            if b < bound[s.curve] {
                bound[s.curve] = b;
            }
        }
    }
    for (c, b) in assembly.curves.iter_mut().zip(bound) {
        c.ell = rng.gen_range(0.1..0.9) * b;
    }
    debug_assert!(assembly.validate().is_valid(), "{}", assembly.validate());
    assembly
}

/// A random isometry (elliptic times a translation).
pub fn random_isometry<R: Rng>(rng: &mut R) -> Isometry {
    let p = HPoint { x: rng.gen_range(-1.5..1.5), y: rng.gen_range(0.3..2.5) };
    let q = HPoint { x: rng.gen_range(-1.5..1.5), y: rng.gen_range(0.3..2.5) };
    hyp::elliptic(p, rng.gen_range(0.05..6.2)) * Isometry::to_point(q)
}

/// Random totally elliptic tuple: coordinates are sampled in the polytope,
/// realized as a chain, and the resulting rotation tuple is conjugated by a
/// random isometry so fixed points carry no anchoring artifacts.
pub fn random_dtrep<R: Rng>(rng: &mut R, n: usize) -> DtRep {
    let coords = random_action_angle(rng, n, TAU);
    let chain = chains::build_chain(&coords, Anchor::standard()).expect("valid coordinates");
    let rep = chains::chain_rep(&chain, &coords.alpha).expect("valid chain");
    let m = random_isometry(rng);
    let gens = rep.gens.iter().map(|g| m * *g * m.inverse()).collect();
    DtRep { n, alpha: rep.alpha, gens }
}
