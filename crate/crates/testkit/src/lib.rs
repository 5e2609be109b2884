//! Seeded instance generators and brute-force reference implementations
//! used by the test suites. Oracles work from definitions (string
//! enumeration, exhaustive subsets) and share nothing with the library's
//! algorithms beyond reading automata.

pub mod gen;
pub mod oracle;

pub use rand_chacha::ChaCha8Rng;

use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
