use alloc::vec::Vec;

use proptest::prelude::*;

use crate::{InitialData, VelocityProfile};

/// Random piecewise-linear data: up to 20 nodes and 5 atoms, some of them
/// sitting on nodes.
pub fn arb_data() -> impl Strategy<Value = InitialData> {
    let nodes = (1usize..=20).prop_flat_map(|n| {
        (
            -10.0f64..0.0,
            prop::collection::vec(0.05f64..3.0, n - 1),
            prop::collection::vec(-3.0f64..3.0, n),
        )
    });
    let atoms = prop::collection::vec((-12.0f64..12.0, 0.01f64..5.0, any::<bool>()), 0..=5);
    (nodes, atoms).prop_map(|((x0, gaps, us), atoms)| {
        let mut xs = Vec::with_capacity(us.len());
        let mut x = x0;
        xs.push(x);
        for g in gaps {
            x += g;
            xs.push(x);
        }
        let nodes: Vec<(f64, f64)> = xs.iter().copied().zip(us).collect();
        let mut at: Vec<(f64, f64)> = atoms
            .into_iter()
            .map(|(p, m, snap)| {
                let p = if snap { xs[((p + 12.0) as usize) % xs.len()] } else { p };
                (p, m)
            })
            .collect();
        at.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        at.dedup_by(|a, b| a.0 == b.0);
        InitialData::build(VelocityProfile::new(&nodes).unwrap(), &at).unwrap()
    })
}
