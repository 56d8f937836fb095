use serde::Serialize;

use super::{check_max_lag, Direction};
use crate::error::Result;
use crate::grid::CategoricalGrid;

/// Experimental indicator variogram along one axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariogramSeries {
    pub direction: Direction,
    pub facies: u8,
    /// `1..=max_lag`.
    pub lags: Vec<usize>,
    pub gamma: Vec<f64>,
    /// Set when the facies never occurs, in which case every gamma is 0.
    pub degenerate: bool,
}

/// `gamma(h) = 0.5 * mean((I(x) - I(x + h))^2)` over all axis pairs at lag `h`.
pub fn indicator_variogram(
    grid: &CategoricalGrid,
    facies: u8,
    direction: Direction,
    max_lag: usize,
) -> Result<VariogramSeries> {
    check_max_lag(grid, direction, max_lag)?;
    let cells = grid.cells();
    let degenerate = !cells.contains(&facies);
    let mut gamma = Vec::with_capacity(max_lag);
    for h in 1..=max_lag {
        let (mut diff, mut pairs) = (0u64, 0u64);
        direction.for_each_pair(grid.width(), grid.height(), h, |a, b| {
            diff += ((cells[a] == facies) != (cells[b] == facies)) as u64;
            pairs += 1;
        });
        gamma.push(0.5 * diff as f64 / pairs as f64);
    }
    Ok(VariogramSeries {
        direction,
        facies,
        lags: (1..=max_lag).collect(),
        gamma,
        degenerate,
    })
}
