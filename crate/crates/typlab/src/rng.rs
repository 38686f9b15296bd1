// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random source shared by every sampler in the crate.
//!
//! The generator is xoshiro256++ seeded from a `u64` through SplitMix64
//! (the `seed_from_u64` expansion of `rand_xoshiro`). Gaussian variates come
//! in pairs from the Box–Muller transform applied to two consecutive 53-bit
//! uniforms, so a complex amplitude consumes exactly two generator outputs:
//!
//! ```text
//! u1 = ((x1 >> 11) + 0.5) / 2^53        in (0, 1)
//! u2 = (x2 >> 11) / 2^53                in [0, 1)
//! r  = sqrt(-2 ln u1)
//! (g1, g2) = (r cos 2πu2, r sin 2πu2)
//! ```
//!
//! Child seeds are derived with [`child_seed`], which is injective in the
//! trajectory index.

use faer::c64;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Identifier written to run metadata so outputs can be reproduced.
pub const RNG_ALGORITHM: &str =
    "xoshiro256++/splitmix64-seeded; gaussian=box-muller(53-bit uniforms); child_seed=mix64(base^((i+1)*0x9e3779b97f4a7c15))";

/// Odd multiplier used by [`child_seed`] (the 64-bit golden ratio).
pub const SEED_STRIDE: u64 = 0x9e37_79b9_7f4a_7c15;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// SplitMix64 finalizer. A bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trajectory `index` under `base`: `mix64(base ^ (index + 1) * K)`.
///
/// Multiplication by the odd `K` is invertible mod 2^64, as are the xor and
/// `mix64`, so distinct indices always give distinct seeds.
pub fn child_seed(base: u64, index: u64) -> u64 {
    mix64(base ^ index.wrapping_add(1).wrapping_mul(SEED_STRIDE))
}

/// Independent stream for a named purpose (observable placement, perturbation).
pub fn salted_seed(base: u64, salt: u64) -> u64 {
    mix64(base ^ mix64(salt))
}

pub(crate) const SALT_OBSERVABLE: u64 = 0x6f62_7365_7276_6162; // "observab"
pub(crate) const SALT_PERTURBATION: u64 = 0x7065_7274_7572_6221; // "perturb!"
pub(crate) const SALT_UNITARY: u64 = 0x756e_6974_6172_7921; // "unitary!"

/// Deterministic random source.
#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: Xoshiro256PlusPlus,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * INV_2_53
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * INV_2_53
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut m = u128::from(self.next_u64()) * u128::from(bound);
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(bound);
            }
        }
        (m >> 64) as u64
    }

    /// Two independent standard normal variates.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Complex number whose real and imaginary parts are independent
    /// standard normals.
    pub fn complex_gaussian(&mut self) -> c64 {
        let (re, im) = self.gaussian_pair();
        c64::new(re, im)
    }

    /// Fisher–Yates shuffle driven by [`SeededRng::below`].
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
