//! Fixtures shared by the engine benchmarks.

use cherednik_core::{DunklContext, Poly, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `count` random homogeneous polynomials of degree `d`, reproducible from `seed`.
pub fn sample_polys<R: Ring>(ctx: &DunklContext<R>, d: usize, count: usize, seed: u64) -> Vec<Poly<R>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ctx.random_poly(d, &mut rng)).collect()
}

/// Cells of the small `(p, n)` grid the sweep benchmark runs.
pub const SWEEP_GRID: [(u64, usize); 5] = [(2, 3), (2, 5), (3, 4), (3, 7), (5, 6)];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible() {
        let ctx = DunklContext::generic(2, 4).unwrap();
        assert_eq!(sample_polys(&ctx, 3, 4, 9), sample_polys(&ctx, 3, 4, 9));
    }
}
