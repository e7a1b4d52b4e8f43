//! Seeded random structures for sampling-based verification.
//!
//! The universe size is uniform in `[1, max_size]` and every possible tuple
//! is included independently with probability one half. The generator is
//! ChaCha8, so a seed fixes the whole sample sequence on every platform.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::structure::{Signature, Structure};

pub struct Sampler {
    signature: Signature,
    max_size: usize,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(signature: Signature, max_size: usize, seed: u64) -> Self {
        assert!(max_size >= 1, "structures need at least one element");
        Self { signature, max_size, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn sample(&mut self) -> Structure {
        let n = self.rng.gen_range(1..=self.max_size);
        let relations = self
            .signature
            .arities()
            .map(|arity| {
                (0..arity)
                    .map(|_| 0..n)
                    .multi_cartesian_product()
                    .filter(|_| self.rng.gen_bool(0.5))
                    .collect::<BTreeSet<_>>()
            })
            .collect::<Vec<_>>();
        let names = (0..n).map(|i| i.to_string()).collect();
        Structure::from_parts(self.signature.clone(), names, relations)
    }
}

impl Iterator for Sampler {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        Some(self.sample())
    }
}
