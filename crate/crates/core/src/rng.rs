//! Seedable random source used for every stochastic operation.
//!
//! The generator is xoshiro256++ seeded from a `u64` through SplitMix64, the
//! reference seeding procedure of that family. Independent streams are split
//! off with the generator's 2^128-step jump, so a parent seed deterministically
//! fixes every child sequence. Uniform doubles take the top 53 bits of a draw.

use num_complex::Complex64;
use rand::{Rng as _, RngCore, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct Rng {
    inner: Xoshiro256PlusPlus,
}

impl Rng {
    pub fn seed(seed: u64) -> Self {
        Rng { inner: Xoshiro256PlusPlus::seed_from_u64(seed) }
    }

    /// Returns an independent stream and advances `self` past it.
    pub fn split(&mut self) -> Rng {
        let child = self.inner.clone();
        self.inner.jump();
        Rng { inner: child }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Circularly symmetric complex normal with `E|z|^2 = 1`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.gaussian() * s, self.gaussian() * s)
    }

    /// Index drawn from a cumulative distribution whose last entry is the total mass.
    pub fn categorical(&mut self, cumulative: &[f64]) -> usize {
        let total = *cumulative.last().expect("empty distribution");
        let u = self.uniform() * total;
        let idx = cumulative.partition_point(|&c| c <= u);
        idx.min(cumulative.len() - 1)
    }
}
