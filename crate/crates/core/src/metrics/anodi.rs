//! Analysis of distance between two ensembles.
//!
//! At resolution level `p` every grid is coarsened by block majority with
//! block edge `2^(p-1)` and summarized by its exact-pattern histogram. For
//! each ensemble `X`:
//!
//! * `between_X` is the mean JS divergence over all realization pairs of `X`
//!   (spatial uncertainty);
//! * `within_X` is the mean JS divergence of each realization against the TI
//!   (pattern reproduction).
//!
//! The level ratio is `(between_A / between_B) / (within_A / within_B)` and
//! the aggregate is the weighted sum of level ratios.

use rayon::prelude::*;
use serde::Serialize;

use super::histogram::{js_divergence, pattern_histogram, PatternHistogram};
use crate::error::{Error, Result};
use crate::grid::CategoricalGrid;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnodiLevel {
    pub level: usize,
    pub between_a: f64,
    pub between_b: f64,
    pub within_a: f64,
    pub within_b: f64,
    /// `between_a / between_b`.
    pub d_between: f64,
    /// `within_a / within_b`.
    pub d_within: f64,
    /// `d_between / d_within`.
    pub ratio: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnodiResult {
    pub window: usize,
    pub levels: Vec<AnodiLevel>,
    /// Weighted sum of the level ratios.
    pub r: f64,
}

/// Coarsens by `factor` taking the most frequent code per block (lowest code on ties).
/// Partial blocks at the right and bottom edges are dropped.
pub fn downsample_majority(grid: &CategoricalGrid, factor: usize) -> Result<CategoricalGrid> {
    if factor == 0 {
        return Err(Error::Dimension("downsampling factor must be positive".into()));
    }
    if factor == 1 {
        return Ok(grid.clone());
    }
    let (h, w) = (grid.height() / factor, grid.width() / factor);
    if h == 0 || w == 0 {
        return Err(Error::Dimension(format!(
            "{}x{} grid too small for factor {factor}",
            grid.height(),
            grid.width()
        )));
    }
    let mut counts = vec![0u32; grid.num_facies()];
    let mut cells = Vec::with_capacity(h * w);
    for br in 0..h {
        for bc in 0..w {
            counts.fill(0);
            for r in br * factor..(br + 1) * factor {
                for &c in &grid.row(r)[bc * factor..(bc + 1) * factor] {
                    counts[c as usize] += 1;
                }
            }
            let best = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map(|(code, _)| code as u8)
                .unwrap_or(0);
            cells.push(best);
        }
    }
    CategoricalGrid::new(w, h, grid.num_facies(), cells)
}

fn histograms(grids: &[CategoricalGrid], factor: usize, window: usize) -> Result<Vec<PatternHistogram>> {
    grids
        .par_iter()
        .map(|g| pattern_histogram(&downsample_majority(g, factor)?, window, 1))
        .collect()
}

fn mean_pairwise(h: &[PatternHistogram]) -> Result<f64> {
    let pairs: Vec<(usize, usize)> = (0..h.len())
        .flat_map(|i| (i + 1..h.len()).map(move |j| (i, j)))
        .collect();
    let d = pairs
        .par_iter()
        .map(|&(i, j)| js_divergence(&h[i], &h[j]))
        .collect::<Result<Vec<f64>>>()?;
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

fn mean_to_reference(h: &[PatternHistogram], reference: &PatternHistogram) -> Result<f64> {
    let d = h
        .par_iter()
        .map(|x| js_divergence(x, reference))
        .collect::<Result<Vec<f64>>>()?;
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

/// Compares ensemble `a` against ensemble `b` relative to the training image.
///
/// `weights` defaults to `1 / levels` for every level.
pub fn anodi(
    a: &[CategoricalGrid],
    b: &[CategoricalGrid],
    ti: &CategoricalGrid,
    levels: usize,
    window: usize,
    weights: Option<&[f64]>,
) -> Result<AnodiResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Validation(format!(
            "each ensemble needs at least 2 realizations (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if levels == 0 {
        return Err(Error::Validation("at least one resolution level is required".into()));
    }
    let weights: Vec<f64> = match weights {
        Some(w) if w.len() != levels => {
            return Err(Error::Validation(format!(
                "{} weights supplied for {levels} levels",
                w.len()
            )))
        }
        Some(w) => w.to_vec(),
        None => vec![1.0 / levels as f64; levels],
    };

    let mut out = Vec::with_capacity(levels);
    for (p, &weight) in (1..=levels).zip(&weights) {
        let factor = 1 << (p - 1);
        let ha = histograms(a, factor, window)?;
        let hb = histograms(b, factor, window)?;
        let ht = pattern_histogram(&downsample_majority(ti, factor)?, window, 1)?;

        let between_a = mean_pairwise(&ha)?;
        let between_b = mean_pairwise(&hb)?;
        let within_a = mean_to_reference(&ha, &ht)?;
        let within_b = mean_to_reference(&hb, &ht)?;
        if within_a == 0.0 || within_b == 0.0 {
            return Err(Error::Degenerate(format!(
                "level {p}: realizations identical to the training image"
            )));
        }
        if between_b == 0.0 {
            return Err(Error::Degenerate(format!(
                "level {p}: all realizations of the second ensemble are identical"
            )));
        }
        let d_between = between_a / between_b;
        let d_within = within_a / within_b;
        out.push(AnodiLevel {
            level: p,
            between_a,
            between_b,
            within_a,
            within_b,
            d_between,
            d_within,
            ratio: d_between / d_within,
            weight,
        });
    }
    let r = out.iter().map(|l| l.weight * l.ratio).sum();
    Ok(AnodiResult {
        window,
        levels: out,
        r,
    })
}
