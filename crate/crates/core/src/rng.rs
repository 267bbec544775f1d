//! Seeded random streams.
//!
//! Every random consumer receives its own ChaCha8 stream: the 64-bit root seed
//! fixes the key and the stream index selects an independent keystream via
//! `set_stream`. Results therefore depend only on `(seed, stream)` and never on
//! thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` under root seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
