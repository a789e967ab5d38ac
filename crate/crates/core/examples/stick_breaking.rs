//! Stick-breaking weights and slice sets: how the sampler decides which
//! finite prefix of the infinite weight sequence it has to represent.
//!
//!     cargo run --example stick_breaking

use hsbm::rng::chain_rng;
use hsbm::stick::{slice_set, slice_sup};
use hsbm::{stick_transform, StickState};

fn main() -> hsbm::Result<()> {
    let w = stick_transform(&[0.2, 0.5, 0.25], 3)?;
    println!("fractions (0.2, 0.5, 0.25) -> weights {w:?}");

    let halves = stick_transform(&[0.5; 3], 3)?;
    for u in [0.6, 0.2, 0.1] {
        println!("u = {u}: slice_sup = {}, slice = {:?}", slice_sup(&halves, u), slice_set(&halves, u));
    }

    // Grow a GEM(5) prefix until the unrepresented mass is below the
    // smallest slice variable; every index that could matter is then present.
    let mut rng = chain_rng(42, 0);
    let mut sticks = StickState::new(5.0);
    for u_min in [0.1, 0.01, 0.001] {
        let added = sticks.ensure_slice_coverage(u_min, &mut rng);
        println!(
            "u_min = {u_min}: +{added} sticks, {} total, residual mass {:.5}",
            sticks.len(),
            sticks.residual()
        );
    }
    Ok(())
}
