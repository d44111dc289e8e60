// scratch: enumerate blocking patterns
use conesphere::sampling::{self, SlitMode};
use conesphere::oracle;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

fn main() {
    let mut rng = StdRng::seed_from_u64(83);
    let mut counts: BTreeMap<(bool,bool,bool,bool), usize> = BTreeMap::new();
    for n in 4..=8usize {
        for _ in 0..200 {
            let mode = if rng.gen_bool(0.5) { SlitMode::North } else { SlitMode::Mixed };
            let a = sampling::random_assembly(&mut rng, n, mode);
            for k in 2..=(n as usize)-3 {
                let pat = oracle::blocked_arcs(&a, k);
                *counts.entry(pat).or_default() += 1;
            }
        }
    }
    for (pat, c) in counts {
        println!("{:?} -> {}", pat, c);
    }
}
