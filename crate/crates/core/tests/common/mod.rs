#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shadowlab_core::geometry::StiefelPoint;

/// Points of the quadric from Gram–Schmidt on random real pairs.
pub fn random_points(seed: u64, n: usize) -> Vec<StiefelPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let y: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if let Ok(p) = StiefelPoint::from_real_pair(x, y) {
            out.push(p);
        }
    }
    out
}
