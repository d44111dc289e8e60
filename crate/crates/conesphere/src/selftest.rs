//! The seeded property suite behind `conesphere selftest`: a condensed run
//! of the round-trip and conservation checks, deterministic per seed.

use crate::assembly::Hemisphere;
use crate::chains::{self, ActionAngle};
use crate::hyp::{self, Anchor, Isometry};
use crate::sampling::{self, SlitMode};
use crate::{dtrep, net, realize};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::TAU;

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        passed: worst <= tol,
        detail: format!("max residual {worst:.3e} (tolerance {tol:.1e})"),
    }
}

/// Run the suite with a fixed seed; returns one result per property.
pub fn run(seed: u64) -> Vec<CheckResult> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();

    // Trig round trips.
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let ell = rng.gen_range(0.05..3.0);
        let beta = rng.gen_range(0.05..TAU - 0.05);
        let k = crate::trig::kink_forward(ell, beta);
        let (e2, b2) = crate::trig::kink_inverse(k.c, k.kappa).unwrap();
        worst = worst.max((ell - e2).abs()).max((beta - b2).abs());
    }
    out.push(check("kink round trip", worst, 1e-9));

    // Realization round trip.
    let mut worst: f64 = 0.0;
    for n in 4..=8 {
        for _ in 0..40 {
            let mode = if rng.gen_bool(0.5) { SlitMode::North } else { SlitMode::Mixed };
            let a = sampling::random_assembly(&mut rng, n, mode);
            let p = realize::intrinsics(&a).unwrap();
            let eps: Vec<(Hemisphere, Hemisphere)> =
                a.curves.iter().map(|c| (c.hem_phi_prime, c.hem_phi)).collect();
            let b = realize::invert(&p, &eps).unwrap();
            for (c1, c2) in a.curves.iter().zip(b.curves.iter()) {
                worst = worst
                    .max((c1.beta - c2.beta).abs())
                    .max((c1.ell - c2.ell).abs())
                    .max((c1.phi - c2.phi).abs())
                    .max((c1.phi_prime - c2.phi_prime).abs());
            }
        }
    }
    out.push(check("realization round trip", worst, 1e-8));

    // Area conservation.
    let mut worst: f64 = 0.0;
    for n in 4..=8 {
        for _ in 0..40 {
            let a = sampling::random_assembly(&mut rng, n, SlitMode::Mixed);
            let expect = a.alpha.iter().sum::<f64>() - TAU * (n as f64 - 1.0);
            worst = worst.max((realize::total_area(&a) - expect).abs());
        }
    }
    out.push(check("area conservation", worst, 1e-10));

    // Chain holonomy relation.
    let mut worst: f64 = 0.0;
    for n in 4..=8 {
        for _ in 0..40 {
            let coords = sampling::random_action_angle(&mut rng, n, TAU);
            let chain = chains::build_chain(&coords, Anchor::standard()).unwrap();
            let rep = chains::chain_rep(&chain, &coords.alpha).unwrap();
            let mut acc = Isometry::identity();
            for g in &rep.gens {
                acc = acc * *g;
            }
            worst = worst.max(acc.proj_dist(Isometry::identity()));
        }
    }
    out.push(check("holonomy relation", worst, 1e-8));

    // Synthesis round trip.
    let mut worst: f64 = 0.0;
    for n in 4..=7 {
        for _ in 0..15 {
            let rep = sampling::random_dtrep(&mut rng, n);
            let assembly = dtrep::synth(&rep).unwrap();
            let rep2 = dtrep::holonomy(&assembly).unwrap();
            let c1 = canonical_coords(&rep).unwrap();
            let c2 = dtrep::rep_coords(&rep2).unwrap();
            for i in 0..n - 3 {
                worst = worst.max((c1.beta[i] - c2.beta[i]).abs());
                let dg = (c1.gamma[i] - c2.gamma[i]).abs();
                worst = worst.max(dg.min(TAU - dg));
            }
        }
    }
    out.push(check("synthesis round trip", worst, 1e-8));

    // Net gluing consistency.
    let mut worst: f64 = 0.0;
    for n in 4..=7 {
        for _ in 0..10 {
            let a = sampling::random_assembly(&mut rng, n, SlitMode::North);
            let netted = net::unfold(&a).unwrap();
            for tag in &netted.glue {
                worst = worst.max((netted.edge_len(tag.a) - netted.edge_len(tag.b)).abs());
            }
            let expect = a.alpha.iter().sum::<f64>() - TAU * (n as f64 - 1.0);
            worst = worst.max((netted.total_area() - expect).abs());
        }
    }
    out.push(check("net gluing and area", worst, 1e-9));

    out
}

/// Coordinates of a representation after the standardization pipeline (the
/// ones synthesis is required to reproduce).
pub fn canonical_coords(rep: &dtrep::DtRep) -> Result<ActionAngle, dtrep::DtRepError> {
    let log = dtrep::play_game(rep)?;
    let std_rep = dtrep::standardize(rep, &log)?;
    let untwisted = dtrep::untwist(&std_rep)?;
    dtrep::rep_coords(&untwisted)
}

/// Convenience for the chain anchor used across the suite.
pub fn standard_anchor() -> Anchor {
    Anchor { at: hyp::HPoint::I, dir: 0.0, orientation: hyp::Orientation::Cw }
}
