//! Project-wide pseudo random number generator.
//!
//! Every stochastic component (sampling, network generation, tie-breaking in
//! the hill climber) draws from [`Xoshiro256PlusPlus`] seeded through
//! `seed_from_u64`, so a 64-bit seed fully determines every output.

use rand::SeedableRng;
pub use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
