//! Validation metrics for realizations and ensembles.

mod anodi;
mod connectivity;
mod histogram;
mod mds;
mod variogram;

pub use anodi::{anodi, downsample_majority, AnodiLevel, AnodiResult};
pub use connectivity::{connectivity_function, label_components, ConnectivitySeries};
pub use histogram::{js_divergence, js_divergence_probs, pattern_histogram, PatternHistogram};
pub use mds::{classical_mds, js_distance_matrix};
pub use variogram::{indicator_variogram, VariogramSeries};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{CategoricalGrid, RealPlane};

/// Axis along which lag pairs are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Pairs `(r, c)` and `(r, c + h)`.
    EastWest,
    /// Pairs `(r, c)` and `(r + h, c)`.
    NorthSouth,
}

impl Direction {
    pub fn extent(self, grid: &CategoricalGrid) -> usize {
        match self {
            Direction::EastWest => grid.width(),
            Direction::NorthSouth => grid.height(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::EastWest => "ew",
            Direction::NorthSouth => "ns",
        }
    }

    /// Calls `f(a, b)` with the flat indices of every pair at lag `h`.
    pub(crate) fn for_each_pair(self, width: usize, height: usize, h: usize, mut f: impl FnMut(usize, usize)) {
        match self {
            Direction::EastWest => {
                for r in 0..height {
                    for c in 0..width.saturating_sub(h) {
                        f(r * width + c, r * width + c + h);
                    }
                }
            }
            Direction::NorthSouth => {
                for r in 0..height.saturating_sub(h) {
                    for c in 0..width {
                        f(r * width + c, (r + h) * width + c);
                    }
                }
            }
        }
    }
}

pub(crate) fn check_max_lag(grid: &CategoricalGrid, direction: Direction, max_lag: usize) -> Result<()> {
    let extent = direction.extent(grid);
    if max_lag == 0 || max_lag >= extent {
        return Err(Error::Dimension(format!(
            "max lag {max_lag} must be in 1..{extent} for this direction"
        )));
    }
    Ok(())
}

/// Per-cell fraction of realizations equal to `facies`.
pub fn ensemble_average(ensemble: &[CategoricalGrid], facies: u8) -> Result<RealPlane> {
    let first = ensemble.first().ok_or(Error::EmptyInput("ensemble is empty"))?;
    let (w, h) = (first.width(), first.height());
    if ensemble.iter().any(|g| g.width() != w || g.height() != h) {
        return Err(Error::Structure("realizations differ in size".into()));
    }
    let mut counts = vec![0u32; w * h];
    for g in ensemble {
        for (n, &c) in counts.iter_mut().zip(g.cells()) {
            *n += (c == facies) as u32;
        }
    }
    let n = ensemble.len() as f64;
    RealPlane::new(w, h, counts.into_iter().map(|c| c as f64 / n).collect())
}
