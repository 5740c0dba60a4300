//! Seeded, splittable uniform streams.
//!
//! A stream is a ChaCha8 generator keyed by the master seed and positioned
//! on its own 64-bit stream id, so replication `r` of an experiment always
//! sees the same variates no matter which thread runs it.

use rand::distr::Open01;
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform variate on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.sample(Open01)
    }
}

/// Runs `f` once per replication on stream `r` of `master_seed`, in
/// parallel on the current rayon pool. Results come back in replication
/// order, so any reduction over them is independent of the thread count.
pub fn replicate<T, F>(master_seed: u64, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut RngStream) -> T + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|r| f(r, &mut RngStream::new(master_seed, r)))
        .collect()
}

/// Derives an independent master seed for a sub-experiment (e.g. the
/// power study run after a calibration with the same user seed).
pub fn derive_seed(master_seed: u64, purpose: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = master_seed ^ purpose.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
