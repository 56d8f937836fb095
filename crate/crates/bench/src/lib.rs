//! Shared fixtures for the criterion benchmarks in `benches/`.

use ccwsim::synthetic::{channel_training_image, ChannelParams};
use ccwsim::CategoricalGrid;

/// Channelized training image used by every benchmark.
pub fn bench_ti(size: usize) -> CategoricalGrid {
    channel_training_image(&ChannelParams::new(size, size), 1).expect("valid parameters")
}
