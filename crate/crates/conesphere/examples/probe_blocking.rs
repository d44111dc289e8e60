// scratch: blocking + d-crossing diagnostics for crossing arcs
use conesphere::assembly::{CurveParams, Hemisphere, SamosaAssembly};
use conesphere::hyp;
use conesphere::oracle;
use conesphere::sampling;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

fn main() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut counts: BTreeMap<((bool, bool, bool, bool), (bool, bool)), usize> = BTreeMap::new();
    for trial in 0..80000 {
        let n = 5;
        let alpha = sampling::random_alpha(&mut rng, n);
        let beta = sampling::random_beta(&mut rng, &alpha);
        let south = trial % 4 == 0;
        let mk = |rng: &mut StdRng, b: f64, south: bool| {
            let phi = rng.gen_range(0.02..0.98) * (b / 2.0);
            if south { -phi } else { phi }
        };
        let hem = |south: bool| if south { Hemisphere::South } else { Hemisphere::North };
        let curves: Vec<CurveParams> = beta
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let s_down = south && i == 0;
                CurveParams {
                    beta: b,
                    ell: 1e-3,
                    phi: mk(&mut rng, b, s_down),
                    phi_prime: mk(&mut rng, std::f64::consts::TAU - b, false),
                    hem_phi: hem(s_down),
                    hem_phi_prime: hem(false),
                }
            })
            .collect();
        let mut a = SamosaAssembly { n, alpha, curves };
        let mut bound = vec![f64::INFINITY; n - 3];
        let mut ok = true;
        for k in 1..=n - 2 {
            let slits = a.slits_of(k).unwrap();
            match a.slit_bounds(k) {
                Ok(bs) => {
                    for (s, b) in slits.iter().zip(bs) {
                        match b {
                            Ok(v) => bound[s.curve] = bound[s.curve].min(v),
                            Err(_) => ok = false,
                        }
                    }
                }
                Err(_) => ok = false,
            }
        }
        if !ok {
            continue;
        }
        for (c, b) in a.curves.iter_mut().zip(&bound) {
            c.ell = rng.gen_range(0.3..0.9999) * b;
        }
        if !a.validate().is_valid() {
            continue;
        }
        let pat = oracle::blocked_arcs(&a, 2);
        // Does each crossing arc hit the open d segment?
        let pic = oracle::place_slits(&a, 2);
        let u = pic.tri.vertices[1];
        let u_far = pic.far_corner;
        let (r, l) = (pic.tri.vertices[0], pic.tri.vertices[2]);
        let hits_d = |from: hyp::HPoint, to: hyp::HPoint| {
            hyp::segments_cross(from, to, r, l, 1e-11)
        };
        let target_b = if pic.same_hemisphere { u_far } else { u };
        let dcross = (hits_d(pic.ends[0], u_far), hits_d(pic.ends[1], target_b));
        *counts.entry((pat, dcross)).or_default() += 1;
    }
    for ((pat, dc), c) in counts {
        println!("blocked {:?} d-crossing {:?} -> {}", pat, dc, c);
    }
}
