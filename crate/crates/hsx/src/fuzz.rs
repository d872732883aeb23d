//! Seeded random piecewise-linear initial data.

use hsx_core::{InitialData, VelocityProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_NODES: usize = 20;
pub const MAX_ATOMS: usize = 5;

/// Deterministic generator keyed by a case seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to 20 nodes with values in `[−3, 3]` and up to 5 atoms of mass in
/// `[0.01, 5]`; about half the atoms sit on a node.
pub fn random_data(rng: &mut impl Rng) -> InitialData {
    let n = rng.random_range(1..=MAX_NODES);
    let mut x = rng.random_range(-10.0..0.0);
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        nodes.push((x, rng.random_range(-3.0..3.0)));
        x += rng.random_range(0.05..3.0);
    }
    let k = rng.random_range(0..=MAX_ATOMS);
    let mut atoms: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let p = if rng.random_bool(0.5) {
                nodes[rng.random_range(0..n)].0
            } else {
                rng.random_range(-12.0..12.0)
            };
            (p, rng.random_range(0.01..5.0))
        })
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    atoms.dedup_by(|a, b| a.0 == b.0);
    InitialData::build(VelocityProfile::new(&nodes).expect("increasing nodes"), &atoms).expect("valid atoms")
}
