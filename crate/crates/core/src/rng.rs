//! Deterministic seed derivation.
//!
//! Every learner in a method gets its own stream derived from the method
//! seed plus a structural position (role, target, fold, member), so results
//! are identical regardless of training order or worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Roles in the seed derivation hierarchy.
#[derive(Debug, Clone, Copy)]
pub enum Role {
    /// Single-target / first-stage learner for a target.
    FirstStage,
    /// Second-stage (stacking) learner for a target.
    SecondStage,
    /// Internal fold model for meta-feature generation.
    FoldModel,
    /// Chain link at a position within a member.
    ChainLink,
    /// Fold partition used for internal cross-validation.
    FoldSplit,
    /// Chain permutation sampling.
    ChainSample,
    /// Ensemble member.
    Member,
    /// Bagging bootstrap within a base learner.
    Bootstrap,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::FirstStage => 1,
            Role::SecondStage => 2,
            Role::FoldModel => 3,
            Role::ChainLink => 4,
            Role::FoldSplit => 5,
            Role::ChainSample => 6,
            Role::Member => 7,
            Role::Bootstrap => 8,
        }
    }
}

/// SplitMix64 finalizer; full-period mixing of a 64-bit state.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Combine a seed with a sequence of components into a new 64-bit seed.
pub fn derive(seed: u64, parts: &[u64]) -> u64 {
    let mut s = splitmix64(seed ^ 0xA0761D6478BD642F);
    for &p in parts {
        s = splitmix64(s ^ splitmix64(p));
    }
    s
}

/// Seed for a learner at a structural position.
pub fn learner_seed(seed: u64, role: Role, target: u64, fold: u64, member: u64) -> u64 {
    derive(seed, &[role.tag(), target, fold, member])
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
