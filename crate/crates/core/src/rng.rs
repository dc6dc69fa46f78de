//! Seeded generator substreams.
//!
//! Every stochastic routine splits its work into fixed-size batches and
//! gives batch `k` the ChaCha stream `k` under the caller's seed. Results
//! therefore depend only on `(seed, batch size)`, never on thread count or
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Work items per generator substream.
pub const BATCH: u64 = 8192;

pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `n` items into `(stream index, batch length)` pairs.
pub fn batches(n: u64) -> impl Iterator<Item = (u64, u64)> {
    let count = n.div_ceil(BATCH);
    (0..count).map(move |k| (k, BATCH.min(n - k * BATCH)))
}
