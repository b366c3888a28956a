use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every seeded operation in the crate.
pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a sub-task so that stages seeded from the
/// same user seed do not share random numbers.
pub fn derived(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
