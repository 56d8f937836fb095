//! Synthetic training images for tests, benchmarks and demos.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::grid::CategoricalGrid;

/// Shape of a binary channelized image: sinuous east-west sand channels
/// (code 1) in a shale background (code 0).
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelParams {
    pub width: usize,
    pub height: usize,
    /// Channels are added until the sand fraction reaches this value.
    pub sand_fraction: f64,
    /// Channel thickness range in cells.
    pub thickness: (f64, f64),
    /// Meander amplitude range in cells.
    pub amplitude: (f64, f64),
    /// Meander wavelength range in cells.
    pub wavelength: (f64, f64),
}

impl ChannelParams {
    pub fn new(width: usize, height: usize) -> Self {
        let scale = width as f64;
        Self {
            width,
            height,
            sand_fraction: 0.3,
            thickness: (4.0, 8.0),
            amplitude: (3.0, 10.0),
            wavelength: (scale / 4.0, scale / 1.5),
        }
    }
}

/// Deterministic channel image for `seed`.
pub fn channel_training_image(params: &ChannelParams, seed: u64) -> Result<CategoricalGrid> {
    let (w, h) = (params.width, params.height);
    if w == 0 || h == 0 {
        return Err(Error::EmptyInput("training image"));
    }
    if !(0.0..1.0).contains(&params.sand_fraction) {
        return Err(Error::Validation(format!(
            "sand fraction {} outside [0, 1)",
            params.sand_fraction
        )));
    }
    let draw = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
        if hi > lo {
            rng.random_range(lo..hi)
        } else {
            lo
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = vec![0u8; w * h];
    let target = (params.sand_fraction * (w * h) as f64).round() as usize;
    let mut sand = 0;
    let mut attempts = 0;
    while sand < target && attempts < 10_000 {
        attempts += 1;
        let centre = rng.random_range(0.0..h as f64);
        let half = draw(&mut rng, params.thickness) / 2.0;
        let amp = draw(&mut rng, params.amplitude);
        let lambda = draw(&mut rng, params.wavelength).max(1.0);
        let phase = rng.random_range(0.0..TAU);
        let amp2 = amp * rng.random_range(0.0..0.4);
        let phase2 = rng.random_range(0.0..TAU);
        for c in 0..w {
            let x = c as f64;
            let y = centre
                + amp * (TAU * x / lambda + phase).sin()
                + amp2 * (2.0 * TAU * x / lambda + phase2).sin();
            let lo = (y - half).ceil().max(0.0) as usize;
            let hi = ((y + half).floor().min(h as f64 - 1.0)).max(-1.0);
            if hi < 0.0 {
                continue;
            }
            for r in lo..=hi as usize {
                let cell = &mut cells[r * w + c];
                if *cell == 0 {
                    *cell = 1;
                    sand += 1;
                }
            }
        }
    }
    CategoricalGrid::new(w, h, 2, cells)
}
