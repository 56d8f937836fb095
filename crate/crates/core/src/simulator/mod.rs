//! Patch-based sequential simulation along a raster path.
//!
//! Each realization walks its raster path once. The first footprint receives a
//! random block-aligned TI patch; every later footprint takes the overlap band
//! already on the grid, reduces it to level-`J` approximation coefficients,
//! scores it against the TI's coefficients and pastes the TI patch found at
//! the chosen coarse location. The pasted patch is cut straight from the TI at
//! the `2^J`-aligned fine position, which for Haar is identical to inverting
//! the transform of the selected coefficients with their detail bands.

mod config;
mod overlap;
mod plan;
mod stitch;

pub use config::{FaciesMode, ScoringMode, SimConfig, MAX_DWT_LEVEL};
pub use overlap::{Canvas, OverlapRegion};
pub use plan::{plan_raster_path, plan_with, Corner, OrShape, Placement, PlacementPlan, ScanOrder};
pub use stitch::{min_cut_stitch, vertical_seam, Stitch};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{CategoricalGrid, HardDatum, RealPlane};
use crate::matcher::{
    ccw_score_map_multi, local_energy_map, normalize_scores, select_conditional,
    select_unconditional, top_k, Candidate, CandidateSet,
};
use crate::wavelet::{approx_coefficients, coarse_to_fine};

/// RNG used for every realization.
pub type SimRng = ChaCha8Rng;

/// Seed of realization `index` derived from the master seed.
///
/// SplitMix64 finalizer applied to `master ^ (index * golden_gamma) + golden_gamma`.
/// Any `(master, index)` pair maps to an independent-looking 64-bit seed, so
/// realizations can be generated in any order or in parallel.
pub fn mix64(master: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = (master ^ index.wrapping_mul(GAMMA)).wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the 1-based realization `r`.
pub fn realization_seed(cfg: &SimConfig, r: usize) -> u64 {
    mix64(cfg.master_seed, r as u64)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub seed: u64,
    pub placements: usize,
    /// Placements whose footprint held hard data.
    pub conditioned_placements: usize,
    pub hard_data: usize,
    /// Hard-datum cells whose simulated value differed before the final overwrite.
    pub mismatches_before_overwrite: usize,
    pub corner: Option<Corner>,
    pub order: Option<ScanOrder>,
}

impl Diagnostics {
    pub fn mismatch_rate(&self) -> f64 {
        if self.hard_data == 0 {
            0.0
        } else {
            self.mismatches_before_overwrite as f64 / self.hard_data as f64
        }
    }
}

/// One paste recorded by [`simulate_one_traced`].
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub placement: Placement,
    /// Fine TI coordinates of the selected pattern.
    pub source: (usize, usize),
    /// Coarse location that won the selection.
    pub coarse: (usize, usize),
    /// Exactly what was written into the footprint.
    pub pasted: CategoricalGrid,
}

/// Training-image coefficients shared by every placement of a run.
#[derive(Clone, Debug)]
pub struct TiCoefficients {
    pub approx: Vec<RealPlane>,
    squared: Vec<RealPlane>,
}

impl TiCoefficients {
    pub fn new(ti: &CategoricalGrid, mode: FaciesMode, levels: usize) -> Result<Self> {
        let planes = match mode {
            FaciesMode::Indicator => ti.to_indicator_planes(),
            FaciesMode::RawCodes => vec![ti.to_code_plane()],
        };
        let approx = planes
            .iter()
            .map(|p| approx_coefficients(p, levels))
            .collect::<Result<Vec<_>>>()?;
        let squared = approx
            .iter()
            .map(|a| {
                RealPlane::from_fn(a.width(), a.height(), |r, c| a.get(r, c) * a.get(r, c))
            })
            .collect();
        Ok(Self { approx, squared })
    }
}

/// Coarse mask of a block-aligned fine mask.
fn coarse_mask(mask: &RealPlane, levels: usize) -> RealPlane {
    let b = 1 << levels;
    RealPlane::from_fn(mask.width() / b, mask.height() / b, |r, c| mask.get(r * b, c * b))
}

/// A validated TI and configuration with the TI coefficients precomputed,
/// ready to produce any number of realizations.
pub struct Simulator<'a> {
    ti: &'a CategoricalGrid,
    cfg: &'a SimConfig,
    coeffs: TiCoefficients,
}

impl<'a> Simulator<'a> {
    pub fn new(ti: &'a CategoricalGrid, cfg: &'a SimConfig) -> Result<Self> {
        cfg.validate_for(ti)?;
        Ok(Self {
            ti,
            cfg,
            coeffs: TiCoefficients::new(ti, cfg.facies_mode, cfg.dwt_level)?,
        })
    }

    pub fn config(&self) -> &SimConfig {
        self.cfg
    }

    /// One realization from an explicit seed.
    pub fn run(&self, seed: u64) -> Result<(CategoricalGrid, Diagnostics)> {
        self.simulate(seed, None)
    }

    /// Realization `r` (1-based) of the ensemble.
    pub fn realization(&self, r: usize) -> Result<(CategoricalGrid, Diagnostics)> {
        self.simulate(realization_seed(self.cfg, r), None)
    }

    fn score(&self, or: &OverlapRegion) -> Result<crate::matcher::ScoreMap> {
        let levels = self.cfg.dwt_level;
        let or_approx = or
            .channels
            .iter()
            .map(|c| approx_coefficients(c, levels))
            .collect::<Result<Vec<_>>>()?;
        let mask = coarse_mask(&or.mask, levels);
        let raw = ccw_score_map_multi(&self.coeffs.approx, &or_approx, &mask)?;
        match self.cfg.scoring {
            ScoringMode::Raw => Ok(raw),
            ScoringMode::Normalized => {
                normalize_scores(&raw, &local_energy_map(&self.coeffs.squared, &mask)?)
            }
        }
    }

    /// Every block-aligned TI location in a random order, as a flat candidate set.
    fn shuffled_locations(&self, rng: &mut SimRng) -> Result<CandidateSet> {
        let b = self.cfg.block();
        let rows = (self.ti.height() - self.cfg.template) / b + 1;
        let cols = (self.ti.width() - self.cfg.template) / b + 1;
        let mut all: Vec<Candidate> = (0..rows)
            .flat_map(|row| (0..cols).map(move |col| Candidate { row, col, score: 0.0 }))
            .collect();
        all.shuffle(rng);
        CandidateSet::new(all)
    }

    fn choose(
        &self,
        canvas: &Canvas,
        p: &Placement,
        hard: &[HardDatum],
        rng: &mut SimRng,
    ) -> Result<Candidate> {
        let cfg = self.cfg;
        if p.or_shape == OrShape::None {
            let all = self.shuffled_locations(rng)?;
            return if hard.is_empty() {
                Ok(all.entries()[0])
            } else {
                Ok(select_conditional(&all, hard, self.ti, cfg.dwt_level)?.0)
            };
        }
        let or = canvas.extract_or(p, cfg.template, cfg.overlap, cfg.facies_mode)?;
        let map = self.score(&or)?;
        if hard.is_empty() {
            select_unconditional(&top_k(&map, cfg.candidates)?, rng)
        } else {
            // sequential search through the whole ranking
            let ranked = top_k(&map, map.len())?;
            Ok(select_conditional(&ranked, hard, self.ti, cfg.dwt_level)?.0)
        }
    }

    fn simulate(&self, seed: u64, mut trace: Option<&mut Vec<TraceEntry>>) -> Result<(CategoricalGrid, Diagnostics)> {
        let cfg = self.cfg;
        let mut rng = SimRng::seed_from_u64(seed);
        let plan = plan_raster_path(cfg, &mut rng)?;
        let mut canvas = Canvas::new(plan.working_width, plan.working_height, self.ti.num_facies())?;
        let hard = cfg.hard_data.clone().unwrap_or_default();
        let t = cfg.template;
        let mut diag = Diagnostics {
            seed,
            placements: plan.len(),
            hard_data: hard.len(),
            corner: Some(plan.corner),
            order: Some(plan.order),
            ..Diagnostics::default()
        };

        for p in &plan.placements {
            let local = hard.local_to(p.top, p.left, t, t);
            if !local.is_empty() {
                diag.conditioned_placements += 1;
            }
            let pick = self.choose(&canvas, p, &local, &mut rng)?;
            let (src_top, src_left) = coarse_to_fine((pick.row, pick.col), cfg.dwt_level);
            let mut patch = self.ti.crop(src_top, src_left, t, t)?;
            if cfg.min_cut && p.or_shape != OrShape::None {
                let existing = canvas.grid().crop(p.top, p.left, t, t)?;
                patch = min_cut_stitch(&existing, &patch, p, cfg.overlap)?.patch;
            }
            canvas.paste(&patch, p.top, p.left)?;
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(TraceEntry {
                    placement: *p,
                    source: (src_top, src_left),
                    coarse: (pick.row, pick.col),
                    pasted: patch,
                });
            }
        }

        let mut out = canvas.into_grid().crop(0, 0, cfg.sg_height, cfg.sg_width)?;
        for d in hard.points() {
            if out.get(d.row, d.col) != d.facies {
                diag.mismatches_before_overwrite += 1;
                out.set(d.row, d.col, d.facies);
            }
        }
        Ok((out, diag))
    }
}

/// One realization from an explicit seed.
pub fn simulate_one(ti: &CategoricalGrid, cfg: &SimConfig, seed: u64) -> Result<(CategoricalGrid, Diagnostics)> {
    Simulator::new(ti, cfg)?.run(seed)
}

/// Like [`simulate_one`], also returning every paste in path order.
pub fn simulate_one_traced(
    ti: &CategoricalGrid,
    cfg: &SimConfig,
    seed: u64,
) -> Result<(CategoricalGrid, Diagnostics, Vec<TraceEntry>)> {
    let mut trace = Vec::new();
    let (grid, diag) = Simulator::new(ti, cfg)?.simulate(seed, Some(&mut trace))?;
    Ok((grid, diag, trace))
}

/// All `cfg.realizations` realizations, ordered by index, on the global rayon pool.
pub fn simulate_ensemble(ti: &CategoricalGrid, cfg: &SimConfig) -> Result<Vec<(CategoricalGrid, Diagnostics)>> {
    let sim = Simulator::new(ti, cfg)?;
    (1..=cfg.realizations)
        .into_par_iter()
        .map(|r| sim.realization(r))
        .collect()
}

/// [`simulate_ensemble`] on a dedicated pool of `workers` threads.
pub fn simulate_ensemble_with_workers(
    ti: &CategoricalGrid,
    cfg: &SimConfig,
    workers: usize,
) -> Result<Vec<(CategoricalGrid, Diagnostics)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Validation(format!("cannot start worker pool: {e}")))?;
    pool.install(|| simulate_ensemble(ti, cfg))
}

/// Draws a fresh master seed for callers that explicitly opt into entropy.
pub fn entropy_seed() -> u64 {
    rand::rng().random()
}
