//! Minimum-error boundary cuts through the overlap band.
//!
//! The cost of a cell is 1 where the already simulated value and the incoming
//! pattern disagree, 0 otherwise. A seam crosses the band with one cell per
//! line, moving at most one cell sideways between consecutive lines. Cells on
//! the simulated side of the seam keep their current value.

use super::plan::Placement;
use crate::error::{Error, Result};
use crate::grid::CategoricalGrid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stitch {
    pub patch: CategoricalGrid,
    /// Total disagreement along the chosen seam(s).
    pub cost: u32,
}

/// Cheapest top-to-bottom seam through a `rows x cols` cost table.
/// Returns the seam column per row and its total cost; ties go to the lower column.
pub fn vertical_seam(cost: &[u32], rows: usize, cols: usize) -> (Vec<usize>, u32) {
    assert_eq!(cost.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return (Vec::new(), 0);
    }
    let mut acc = cost.to_vec();
    for r in 1..rows {
        for c in 0..cols {
            let lo = c.saturating_sub(1);
            let hi = (c + 1).min(cols - 1);
            let best = (lo..=hi).map(|k| acc[(r - 1) * cols + k]).min().unwrap();
            acc[r * cols + c] += best;
        }
    }
    let last = &acc[(rows - 1) * cols..];
    let mut c = (0..cols).min_by_key(|&k| (last[k], k)).unwrap();
    let total = last[c];
    let mut seam = vec![0; rows];
    seam[rows - 1] = c;
    for r in (0..rows - 1).rev() {
        let lo = c.saturating_sub(1);
        let hi = (c + 1).min(cols - 1);
        c = (lo..=hi).min_by_key(|&k| (acc[r * cols + k], k)).unwrap();
        seam[r] = c;
    }
    (seam, total)
}

/// Blends `incoming` into the current footprint content `existing` along the
/// cheapest seam(s) of the placement's overlap band.
pub fn min_cut_stitch(
    existing: &CategoricalGrid,
    incoming: &CategoricalGrid,
    placement: &Placement,
    overlap: usize,
) -> Result<Stitch> {
    let t = incoming.height();
    if incoming.width() != t || existing.height() != t || existing.width() != t {
        return Err(Error::Structure(format!(
            "stitching needs two square patches of equal size, got {}x{} and {}x{}",
            existing.height(),
            existing.width(),
            incoming.height(),
            incoming.width()
        )));
    }
    if overlap > t {
        return Err(Error::Structure(format!("overlap {overlap} exceeds template {t}")));
    }
    // canonical frame: bands on the left / top
    let top = placement.corner.is_top();
    let left = placement.corner.is_left();
    let at = |r: usize, c: usize| {
        (
            if top { r } else { t - 1 - r },
            if left { c } else { t - 1 - c },
        )
    };
    let disagree = |r: usize, c: usize| {
        let (ar, ac) = at(r, c);
        (existing.get(ar, ac) != incoming.get(ar, ac)) as u32
    };

    let mut keep = vec![false; t * t];
    let mut total = 0;
    if placement.or_shape.has_column_band() {
        let cost: Vec<u32> = (0..t)
            .flat_map(|r| (0..overlap).map(move |c| (r, c)))
            .map(|(r, c)| disagree(r, c))
            .collect();
        let (seam, c) = vertical_seam(&cost, t, overlap);
        total += c;
        for (r, &s) in seam.iter().enumerate() {
            for c in 0..s {
                keep[r * t + c] = true;
            }
        }
    }
    if placement.or_shape.has_row_band() {
        // transpose so the seam runs left to right
        let cost: Vec<u32> = (0..t)
            .flat_map(|c| (0..overlap).map(move |r| (r, c)))
            .map(|(r, c)| disagree(r, c))
            .collect();
        let (seam, c) = vertical_seam(&cost, t, overlap);
        total += c;
        for (c, &s) in seam.iter().enumerate() {
            for r in 0..s {
                keep[r * t + c] = true;
            }
        }
    }

    let mut patch = incoming.clone();
    for r in 0..t {
        for c in 0..t {
            if keep[r * t + c] {
                let (ar, ac) = at(r, c);
                patch.set(ar, ac, existing.get(ar, ac));
            }
        }
    }
    Ok(Stitch { patch, cost: total })
}
