//! Working grid and overlap-region extraction.

use super::config::FaciesMode;
use super::plan::{OrShape, Placement};
use crate::error::{Error, Result};
use crate::grid::{CategoricalGrid, RealPlane};

/// Scoring channels of one overlap region plus its fine-resolution mask.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapRegion {
    /// `T x T` planes, zero outside the band.
    pub channels: Vec<RealPlane>,
    pub mask: RealPlane,
}

impl OverlapRegion {
    pub fn area(&self) -> usize {
        self.mask.values().iter().filter(|&&m| m == 1.0).count()
    }
}

/// The grid being simulated together with which cells have been written.
#[derive(Clone, Debug)]
pub struct Canvas {
    grid: CategoricalGrid,
    written: Vec<bool>,
}

impl Canvas {
    pub fn new(width: usize, height: usize, num_facies: usize) -> Result<Self> {
        Ok(Self {
            grid: CategoricalGrid::filled(width, height, num_facies, 0)?,
            written: vec![false; width * height],
        })
    }

    pub fn grid(&self) -> &CategoricalGrid {
        &self.grid
    }

    pub fn into_grid(self) -> CategoricalGrid {
        self.grid
    }

    pub fn is_written(&self, row: usize, col: usize) -> bool {
        self.written[row * self.grid.width() + col]
    }

    pub fn paste(&mut self, patch: &CategoricalGrid, top: usize, left: usize) -> Result<()> {
        self.grid.paste(patch, top, left)?;
        let w = self.grid.width();
        for r in top..top + patch.height() {
            self.written[r * w + left..r * w + left + patch.width()].fill(true);
        }
        Ok(())
    }

    /// Builds the scoring planes for the overlap band of `p`.
    pub fn extract_or(
        &self,
        p: &Placement,
        template: usize,
        overlap: usize,
        mode: FaciesMode,
    ) -> Result<OverlapRegion> {
        let footprint = self.grid.crop(p.top, p.left, template, template)?;
        let mask = p.overlap_mask(template, overlap);
        let nchan = match mode {
            FaciesMode::Indicator => self.grid.num_facies(),
            FaciesMode::RawCodes => 1,
        };
        let mut channels = vec![RealPlane::zeros(template, template); nchan];
        if p.or_shape == OrShape::None {
            return Ok(OverlapRegion { channels, mask });
        }
        for r in 0..template {
            for c in 0..template {
                if mask.get(r, c) == 0.0 {
                    continue;
                }
                if !self.is_written(p.top + r, p.left + c) {
                    return Err(Error::Sequencing(format!(
                        "overlap cell ({}, {}) read before being simulated",
                        p.top + r,
                        p.left + c
                    )));
                }
                let code = footprint.get(r, c);
                match mode {
                    FaciesMode::Indicator => channels[code as usize].set(r, c, 1.0),
                    FaciesMode::RawCodes => channels[0].set(r, c, code as f64),
                }
            }
        }
        Ok(OverlapRegion { channels, mask })
    }
}
