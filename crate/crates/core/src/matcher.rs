//! Cross-correlation of approximation coefficients and candidate selection.
//!
//! The score at coarse location `(x, y)` is the plain product-sum
//! `sum_s sum_t A_ti(x + s, y + t) * A_or(s, t)` taken over the overlap mask.
//! Multi-channel inputs (one indicator plane per facies) are scored per
//! channel and summed.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{CategoricalGrid, HardDatum, RealPlane};
use crate::wavelet::coarse_to_fine;

/// Similarity values over every valid coarse placement.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMap {
    scores: RealPlane,
}

impl ScoreMap {
    pub fn new(scores: RealPlane) -> Self {
        Self { scores }
    }

    pub fn scores(&self) -> &RealPlane {
        &self.scores
    }

    /// `(rows, cols)` of valid placements.
    pub fn extent(&self) -> (usize, usize) {
        (self.scores.height(), self.scores.width())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.scores.get(row, col)
    }

    pub fn len(&self) -> usize {
        self.scores.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    /// Coarse-space row.
    pub row: usize,
    /// Coarse-space column.
    pub col: usize,
    pub score: f64,
}

/// Candidates in non-increasing score order with unique locations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateSet {
    entries: Vec<Candidate>,
}

impl CandidateSet {
    pub fn new(entries: Vec<Candidate>) -> Result<Self> {
        if entries.windows(2).any(|w| w[1].score > w[0].score) {
            return Err(Error::Structure("candidate scores must be non-increasing".into()));
        }
        let mut seen = HashSet::with_capacity(entries.len());
        if !entries.iter().all(|c| seen.insert((c.row, c.col))) {
            return Err(Error::Structure("candidate locations must be unique".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Candidate] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_mask(mask: &RealPlane) -> Result<()> {
    if mask.values().iter().any(|&m| m != 0.0 && m != 1.0) {
        return Err(Error::Structure("overlap mask must hold only 0 and 1".into()));
    }
    Ok(())
}

fn valid_extent(ti: &RealPlane, tpl_h: usize, tpl_w: usize) -> Result<(usize, usize)> {
    if tpl_h > ti.height() || tpl_w > ti.width() {
        return Err(Error::Dimension(format!(
            "template {tpl_h}x{tpl_w} larger than coefficient plane {}x{}",
            ti.height(),
            ti.width()
        )));
    }
    Ok((ti.height() - tpl_h + 1, ti.width() - tpl_w + 1))
}

/// Adds `sum over masked (s,t) of tpl(s,t) * ti(x+s, y+t)` into `acc`.
fn accumulate(acc: &mut [f64], ti: &RealPlane, tpl: &RealPlane, mask: &RealPlane, out_w: usize) {
    let out_h = acc.len() / out_w.max(1);
    for s in 0..tpl.height() {
        for t in 0..tpl.width() {
            let v = tpl.get(s, t);
            if mask.get(s, t) == 0.0 || v == 0.0 {
                continue;
            }
            for x in 0..out_h {
                let src = &ti.row(x + s)[t..t + out_w];
                let dst = &mut acc[x * out_w..(x + 1) * out_w];
                for (d, &a) in dst.iter_mut().zip(src) {
                    *d += v * a;
                }
            }
        }
    }
}

/// Single-channel score map.
pub fn ccw_score_map(ti_approx: &RealPlane, or_approx: &RealPlane, or_mask: &RealPlane) -> Result<ScoreMap> {
    ccw_score_map_multi(
        std::slice::from_ref(ti_approx),
        std::slice::from_ref(or_approx),
        or_mask,
    )
}

/// Sum of per-channel score maps.
pub fn ccw_score_map_multi(
    ti_approx: &[RealPlane],
    or_approx: &[RealPlane],
    or_mask: &RealPlane,
) -> Result<ScoreMap> {
    if ti_approx.is_empty() || ti_approx.len() != or_approx.len() {
        return Err(Error::Structure(format!(
            "{} TI channels vs {} overlap channels",
            ti_approx.len(),
            or_approx.len()
        )));
    }
    check_mask(or_mask)?;
    let (th, tw) = (or_mask.height(), or_mask.width());
    if or_approx.iter().any(|p| !p.same_shape(or_mask)) {
        return Err(Error::Structure("overlap coefficients and mask differ in size".into()));
    }
    if ti_approx.iter().any(|p| !p.same_shape(&ti_approx[0])) {
        return Err(Error::Structure("TI channels differ in size".into()));
    }
    let (oh, ow) = valid_extent(&ti_approx[0], th, tw)?;
    let mut acc = vec![0.0; oh * ow];
    for (ti, tpl) in ti_approx.iter().zip(or_approx) {
        accumulate(&mut acc, ti, tpl, or_mask, ow);
    }
    Ok(ScoreMap::new(RealPlane::new(ow, oh, acc)?))
}

/// Per-location energy `sum over masked (s,t) of sum_f ti_f(x+s, y+t)^2`.
///
/// `ti_squared` holds the element-wise squares of the TI channels.
pub fn local_energy_map(ti_squared: &[RealPlane], or_mask: &RealPlane) -> Result<RealPlane> {
    if ti_squared.is_empty() {
        return Err(Error::EmptyInput("no TI channels"));
    }
    check_mask(or_mask)?;
    let (oh, ow) = valid_extent(&ti_squared[0], or_mask.height(), or_mask.width())?;
    let mut acc = vec![0.0; oh * ow];
    for sq in ti_squared {
        accumulate(&mut acc, sq, or_mask, or_mask, ow);
    }
    RealPlane::new(ow, oh, acc)
}

/// Divides every raw score by the local TI coefficient norm over the mask.
/// Locations with zero energy score 0.
pub fn normalize_scores(map: &ScoreMap, energy: &RealPlane) -> Result<ScoreMap> {
    if !map.scores.same_shape(energy) {
        return Err(Error::Structure("energy map and score map differ in size".into()));
    }
    let values = map
        .scores
        .values()
        .iter()
        .zip(energy.values())
        .map(|(&s, &e)| if e > 0.0 { s / e.sqrt() } else { 0.0 })
        .collect();
    Ok(ScoreMap::new(RealPlane::new(
        map.scores.width(),
        map.scores.height(),
        values,
    )?))
}

/// The `k` best locations; ties go to the earlier row-major location.
pub fn top_k(map: &ScoreMap, k: usize) -> Result<CandidateSet> {
    if map.is_empty() {
        return Err(Error::EmptyInput("score map has no valid placements"));
    }
    if k == 0 {
        return Err(Error::Validation("top_k requires k >= 1".into()));
    }
    let values = map.scores.values();
    let order = |a: &usize, b: &usize| values[*b].total_cmp(&values[*a]).then(a.cmp(b));
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let k = k.min(idx.len());
    if k < idx.len() {
        idx.select_nth_unstable_by(k - 1, order);
        idx.truncate(k);
    }
    idx.sort_unstable_by(order);
    let w = map.scores.width();
    Ok(CandidateSet {
        entries: idx
            .into_iter()
            .map(|i| Candidate {
                row: i / w,
                col: i % w,
                score: values[i],
            })
            .collect(),
    })
}

/// Uniform draw among the candidates.
pub fn select_unconditional<R: Rng + ?Sized>(cands: &CandidateSet, rng: &mut R) -> Result<Candidate> {
    if cands.is_empty() {
        return Err(Error::EmptyInput("candidate set is empty"));
    }
    Ok(cands.entries[rng.random_range(0..cands.len())])
}

/// Number of `hard` points (template-local) that disagree with the TI
/// pattern whose top-left fine cell is `(top, left)`.
pub fn count_mismatches(ti: &CategoricalGrid, top: usize, left: usize, hard: &[HardDatum]) -> usize {
    hard.iter()
        .filter(|d| ti.get(top + d.row, left + d.col) != d.facies)
        .count()
}

/// Sequential search in score order for a pattern honoring the hard data.
///
/// `hard` carries every datum inside the template footprint in template-local
/// coordinates, whether it lies in the already simulated overlap or in the
/// part of the footprint not yet visited. Returns the first candidate with no
/// mismatches, otherwise the one with the fewest (earlier, i.e. higher
/// scoring, wins ties), together with its mismatch count.
pub fn select_conditional(
    cands: &CandidateSet,
    hard: &[HardDatum],
    ti: &CategoricalGrid,
    levels: usize,
) -> Result<(Candidate, usize)> {
    let mut best: Option<(Candidate, usize)> = None;
    for &cand in &cands.entries {
        let (top, left) = coarse_to_fine((cand.row, cand.col), levels);
        let miss = count_mismatches(ti, top, left, hard);
        if miss == 0 {
            return Ok((cand, 0));
        }
        if best.is_none_or(|(_, m)| miss < m) {
            best = Some((cand, miss));
        }
    }
    best.ok_or(Error::EmptyInput("candidate set is empty"))
}
