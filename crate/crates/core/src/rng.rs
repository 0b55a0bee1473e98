// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random streams.
//!
//! Every random consumer uses ChaCha8 seeded with `seed_from_u64(seed)` and
//! then switched to a stream number that identifies the consumer (a
//! multistart index, a batch row, …). ChaCha8 output is specified bit for
//! bit, so draws are reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed for item `index` of a run seeded with `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    use rand::RngCore;
    stream_rng(master, index.wrapping_add(1 << 32)).next_u64()
}
