//! Multi-level 2D Haar analysis and synthesis.
//!
//! The transform is separable: rows are filtered and decimated first, then
//! columns. With the orthonormal taps this is, for every 2x2 block
//! `(p00 p01 / p10 p11)`:
//!
//! ```text
//! cA = (p00 + p01 + p10 + p11) / 2
//! cH = (p00 + p01 - p10 - p11) / 2
//! cV = (p00 - p01 + p10 - p11) / 2
//! cD = (p00 - p01 - p10 + p11) / 2
//! ```
//!
//! No boundary extension is performed, so every level requires even
//! dimensions. Because Haar supports never straddle a 2x2 block, a crop
//! aligned to `2^J` commutes with the level-`J` transform.

use crate::error::{Error, Result};
use crate::grid::RealPlane;

/// Two-tap analysis/synthesis filters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarFilterBank {
    pub analysis_low: [f64; 2],
    pub analysis_high: [f64; 2],
    pub synthesis_low: [f64; 2],
    pub synthesis_high: [f64; 2],
}

impl HaarFilterBank {
    pub fn orthonormal() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            analysis_low: [s, s],
            analysis_high: [s, -s],
            synthesis_low: [s, s],
            synthesis_high: [s, -s],
        }
    }

    /// One analysis step on an even-length signal: `(approx, detail)`.
    pub fn analyze(&self, signal: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if !signal.len().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "signal length {} is odd",
                signal.len()
            )));
        }
        let [l0, l1] = self.analysis_low;
        let [h0, h1] = self.analysis_high;
        Ok(signal
            .chunks_exact(2)
            .map(|p| (l0 * p[0] + l1 * p[1], h0 * p[0] + h1 * p[1]))
            .unzip())
    }

    pub fn synthesize(&self, approx: &[f64], detail: &[f64]) -> Result<Vec<f64>> {
        if approx.len() != detail.len() {
            return Err(Error::Structure("approx/detail length mismatch".into()));
        }
        let [l0, l1] = self.synthesis_low;
        let [h0, h1] = self.synthesis_high;
        let mut out = Vec::with_capacity(approx.len() * 2);
        for (&a, &d) in approx.iter().zip(detail) {
            out.push(l0 * a + h0 * d);
            out.push(l1 * a + h1 * d);
        }
        Ok(out)
    }
}

impl Default for HaarFilterBank {
    fn default() -> Self {
        Self::orthonormal()
    }
}

/// Detail subbands of one decomposition level.
#[derive(Clone, Debug, PartialEq)]
pub struct DetailBands {
    pub horizontal: RealPlane,
    pub vertical: RealPlane,
    pub diagonal: RealPlane,
}

/// Approximation apex plus per-level details.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletPyramid {
    approx: RealPlane,
    /// `details[j - 1]` holds level `j`.
    details: Vec<DetailBands>,
    original_size: (usize, usize),
}

impl WaveletPyramid {
    /// Assembles a pyramid, checking the halving law at each level.
    pub fn from_parts(
        approx: RealPlane,
        details: Vec<DetailBands>,
        original_size: (usize, usize),
    ) -> Result<Self> {
        let (mut h, mut w) = original_size;
        for (j, band) in details.iter().enumerate() {
            if h % 2 != 0 || w % 2 != 0 {
                return Err(Error::Structure(format!(
                    "level {} parent size {h}x{w} is odd",
                    j + 1
                )));
            }
            h /= 2;
            w /= 2;
            for p in [&band.horizontal, &band.vertical, &band.diagonal] {
                if p.height() != h || p.width() != w {
                    return Err(Error::Structure(format!(
                        "level {} detail plane is {}x{}, expected {h}x{w}",
                        j + 1,
                        p.height(),
                        p.width()
                    )));
                }
            }
        }
        if approx.height() != h || approx.width() != w {
            return Err(Error::Structure(format!(
                "apex is {}x{}, expected {h}x{w}",
                approx.height(),
                approx.width()
            )));
        }
        Ok(Self {
            approx,
            details,
            original_size,
        })
    }

    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Level-`J` approximation coefficients.
    pub fn approx(&self) -> &RealPlane {
        &self.approx
    }

    /// Detail bands of `level` (1-based).
    pub fn details(&self, level: usize) -> Option<&DetailBands> {
        level.checked_sub(1).and_then(|i| self.details.get(i))
    }

    pub fn details_mut(&mut self, level: usize) -> Option<&mut DetailBands> {
        level.checked_sub(1).and_then(|i| self.details.get_mut(i))
    }

    /// `(height, width)` of the plane the pyramid was built from.
    pub fn original_size(&self) -> (usize, usize) {
        self.original_size
    }

    pub fn coefficient_energy(&self) -> f64 {
        self.approx.sum_of_squares()
            + self
                .details
                .iter()
                .map(|b| {
                    b.horizontal.sum_of_squares()
                        + b.vertical.sum_of_squares()
                        + b.diagonal.sum_of_squares()
                })
                .sum::<f64>()
    }

    /// Sub-pyramid covering the apex rectangle `[row, row+h) x [col, col+w)`
    /// and, at every finer level, the matching dyadic rectangle.
    pub fn crop_apex(&self, row: usize, col: usize, h: usize, w: usize) -> Result<Self> {
        let levels = self.levels();
        let approx = self.approx.crop(row, col, h, w)?;
        let details = self
            .details
            .iter()
            .enumerate()
            .map(|(i, band)| {
                let scale = 1usize << (levels - (i + 1));
                let crop = |p: &RealPlane| p.crop(row * scale, col * scale, h * scale, w * scale);
                Ok(DetailBands {
                    horizontal: crop(&band.horizontal)?,
                    vertical: crop(&band.vertical)?,
                    diagonal: crop(&band.diagonal)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            approx,
            details,
            original_size: (h << levels, w << levels),
        })
    }
}

/// Single-level analysis returning `(cA, cH, cV, cD)`.
pub fn dwt2_single(plane: &RealPlane) -> Result<(RealPlane, RealPlane, RealPlane, RealPlane)> {
    dwt2_single_with(&HaarFilterBank::orthonormal(), plane)
}

fn dwt2_single_with(
    bank: &HaarFilterBank,
    plane: &RealPlane,
) -> Result<(RealPlane, RealPlane, RealPlane, RealPlane)> {
    let (h, w) = (plane.height(), plane.width());
    if h % 2 != 0 || w % 2 != 0 {
        return Err(Error::Dimension(format!(
            "plane {h}x{w} has an odd dimension"
        )));
    }
    let (hh, hw) = (h / 2, w / 2);

    // row pass: low/high halves, each h x w/2
    let mut row_low = Vec::with_capacity(h * hw);
    let mut row_high = Vec::with_capacity(h * hw);
    for r in 0..h {
        let (lo, hi) = bank.analyze(plane.row(r))?;
        row_low.extend(lo);
        row_high.extend(hi);
    }

    // column pass over each half
    let [l0, l1] = bank.analysis_low;
    let [h0, h1] = bank.analysis_high;
    let mut ca = RealPlane::zeros(hw, hh);
    let mut ch = RealPlane::zeros(hw, hh);
    let mut cv = RealPlane::zeros(hw, hh);
    let mut cd = RealPlane::zeros(hw, hh);
    for r in 0..hh {
        let top = 2 * r * hw;
        let bot = top + hw;
        for c in 0..hw {
            let (lt, lb) = (row_low[top + c], row_low[bot + c]);
            let (ht, hb) = (row_high[top + c], row_high[bot + c]);
            ca.set(r, c, l0 * lt + l1 * lb);
            ch.set(r, c, h0 * lt + h1 * lb);
            cv.set(r, c, l0 * ht + l1 * hb);
            cd.set(r, c, h0 * ht + h1 * hb);
        }
    }
    Ok((ca, ch, cv, cd))
}

/// Single-level synthesis, inverse of [`dwt2_single`].
pub fn idwt2_single(
    ca: &RealPlane,
    ch: &RealPlane,
    cv: &RealPlane,
    cd: &RealPlane,
) -> Result<RealPlane> {
    if !(ca.same_shape(ch) && ca.same_shape(cv) && ca.same_shape(cd)) {
        return Err(Error::Structure("subband shapes differ".into()));
    }
    let bank = HaarFilterBank::orthonormal();
    let (hh, hw) = (ca.height(), ca.width());
    let [l0, l1] = bank.synthesis_low;
    let [h0, h1] = bank.synthesis_high;

    // undo the column pass
    let mut row_low = vec![0.0; 2 * hh * hw];
    let mut row_high = vec![0.0; 2 * hh * hw];
    for r in 0..hh {
        for c in 0..hw {
            let (a, hd, v, d) = (ca.get(r, c), ch.get(r, c), cv.get(r, c), cd.get(r, c));
            row_low[2 * r * hw + c] = l0 * a + h0 * hd;
            row_low[(2 * r + 1) * hw + c] = l1 * a + h1 * hd;
            row_high[2 * r * hw + c] = l0 * v + h0 * d;
            row_high[(2 * r + 1) * hw + c] = l1 * v + h1 * d;
        }
    }

    // undo the row pass
    let mut values = Vec::with_capacity(4 * hh * hw);
    for r in 0..2 * hh {
        let span = r * hw..(r + 1) * hw;
        values.extend(bank.synthesize(&row_low[span.clone()], &row_high[span])?);
    }
    RealPlane::new(2 * hw, 2 * hh, values)
}

/// `levels`-deep decomposition. Both dimensions must be divisible by `2^levels`.
pub fn dwt2(plane: &RealPlane, levels: usize) -> Result<WaveletPyramid> {
    let block = 1usize
        .checked_shl(levels as u32)
        .filter(|_| levels < usize::BITS as usize)
        .ok_or_else(|| Error::Dimension(format!("level {levels} too deep")))?;
    if !plane.height().is_multiple_of(block) || !plane.width().is_multiple_of(block) {
        return Err(Error::Dimension(format!(
            "plane {}x{} not divisible by 2^{levels}",
            plane.height(),
            plane.width()
        )));
    }
    let bank = HaarFilterBank::orthonormal();
    let mut approx = plane.clone();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (ca, ch, cv, cd) = dwt2_single_with(&bank, &approx)?;
        details.push(DetailBands {
            horizontal: ch,
            vertical: cv,
            diagonal: cd,
        });
        approx = ca;
    }
    Ok(WaveletPyramid {
        approx,
        details,
        original_size: (plane.height(), plane.width()),
    })
}

/// Only the level-`levels` approximation plane.
///
/// Equal to `dwt2(plane, levels).approx()` but skips the detail bands: each
/// apex coefficient is the block sum divided by `2^levels`.
pub fn approx_coefficients(plane: &RealPlane, levels: usize) -> Result<RealPlane> {
    let block = 1usize << levels;
    if !plane.height().is_multiple_of(block) || !plane.width().is_multiple_of(block) {
        return Err(Error::Dimension(format!(
            "plane {}x{} not divisible by 2^{levels}",
            plane.height(),
            plane.width()
        )));
    }
    let mut approx = plane.clone();
    for _ in 0..levels {
        let (h, w) = (approx.height() / 2, approx.width() / 2);
        let src = approx.values();
        let sw = approx.width();
        let mut next = Vec::with_capacity(h * w);
        for r in 0..h {
            let top = &src[2 * r * sw..(2 * r + 1) * sw];
            let bot = &src[(2 * r + 1) * sw..(2 * r + 2) * sw];
            for c in 0..w {
                next.push(0.5 * ((top[2 * c] + top[2 * c + 1]) + (bot[2 * c] + bot[2 * c + 1])));
            }
        }
        approx = RealPlane::new(w, h, next)?;
    }
    Ok(approx)
}

/// Full synthesis back to the original resolution.
pub fn idwt2(pyramid: &WaveletPyramid) -> Result<RealPlane> {
    let checked = WaveletPyramid::from_parts(
        pyramid.approx.clone(),
        pyramid.details.clone(),
        pyramid.original_size,
    )?;
    let mut plane = checked.approx;
    for band in checked.details.iter().rev() {
        plane = idwt2_single(&plane, &band.horizontal, &band.vertical, &band.diagonal)?;
    }
    Ok(plane)
}

/// Maps a level-`levels` coefficient coordinate to the top-left fine cell of its block.
pub fn coarse_to_fine(coord: (usize, usize), levels: usize) -> (usize, usize) {
    (coord.0 << levels, coord.1 << levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_plane(rng: &mut impl Rng, w: usize, h: usize) -> RealPlane {
        RealPlane::from_fn(w, h, |_, _| rng.random_range(-5.0..5.0))
    }

    /// Direct evaluation of the four block formulas.
    fn block_oracle(p: &RealPlane) -> [RealPlane; 4] {
        let (h, w) = (p.height() / 2, p.width() / 2);
        let mut out = [
            RealPlane::zeros(w, h),
            RealPlane::zeros(w, h),
            RealPlane::zeros(w, h),
            RealPlane::zeros(w, h),
        ];
        for r in 0..h {
            for c in 0..w {
                let p00 = p.get(2 * r, 2 * c);
                let p01 = p.get(2 * r, 2 * c + 1);
                let p10 = p.get(2 * r + 1, 2 * c);
                let p11 = p.get(2 * r + 1, 2 * c + 1);
                out[0].set(r, c, (p00 + p01 + p10 + p11) / 2.0);
                out[1].set(r, c, (p00 + p01 - p10 - p11) / 2.0);
                out[2].set(r, c, (p00 - p01 + p10 - p11) / 2.0);
                out[3].set(r, c, (p00 - p01 - p10 + p11) / 2.0);
            }
        }
        out
    }

    #[test]
    fn filter_bank_taps() {
        let b = HaarFilterBank::orthonormal();
        let s = 1.0 / 2f64.sqrt();
        for (x, y) in b.analysis_low.iter().chain(&b.analysis_high).zip([s, s, s, -s]) {
            assert!((x - y).abs() < 1e-15);
        }
        let sig = [3.0, -1.0, 0.5, 2.25, 7.0, 7.0];
        let (a, d) = b.analyze(&sig).unwrap();
        let back = b.synthesize(&a, &d).unwrap();
        for (x, y) in sig.iter().zip(&back) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(b.analyze(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn single_block_convention() {
        let p = RealPlane::new(2, 2, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let (a, h, v, d) = dwt2_single(&p).unwrap();
        assert!((a.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((h.get(0, 0) - 1.0).abs() < 1e-15);
        assert!(v.get(0, 0).abs() < 1e-15);
        assert!(d.get(0, 0).abs() < 1e-15);
    }

    #[test]
    fn constant_plane() {
        let c = 0.75;
        let p = RealPlane::from_fn(8, 8, |_, _| c);
        let (a, h, v, d) = dwt2_single(&p).unwrap();
        assert!(a.values().iter().all(|&x| (x - 2.0 * c).abs() < 1e-12));
        for band in [h, v, d] {
            assert!(band.values().iter().all(|&x| x.abs() < 1e-12));
        }
        let pyr = dwt2(&p, 3).unwrap();
        assert_eq!(pyr.approx().width(), 1);
        assert!((pyr.approx().get(0, 0) - 8.0 * c).abs() < 1e-12);
    }

    #[test]
    fn matches_block_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_plane(&mut rng, 8, 8);
        let (a, h, v, d) = dwt2_single(&p).unwrap();
        let oracle = block_oracle(&p);
        for (got, want) in [a, h, v, d].iter().zip(&oracle) {
            assert!(got.max_abs_diff(want) < 1e-12);
        }
    }

    #[test]
    fn odd_dimensions_rejected() {
        let p = RealPlane::zeros(3, 4);
        assert!(matches!(dwt2_single(&p), Err(Error::Dimension(_))));
        let p = RealPlane::zeros(12, 12);
        assert!(dwt2(&p, 2).is_ok());
        assert!(matches!(dwt2(&p, 3), Err(Error::Dimension(_))));
    }

    #[test]
    fn multilevel_is_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = random_plane(&mut rng, 16, 16);
        let one = dwt2(&p, 1).unwrap();
        let (a, h, _, _) = dwt2_single(&p).unwrap();
        assert_eq!(one.approx(), &a);
        assert_eq!(&one.details(1).unwrap().horizontal, &h);

        let two = dwt2(&p, 2).unwrap();
        let (a2, _, _, _) = dwt2_single(&a).unwrap();
        assert!(two.approx().max_abs_diff(&a2) < 1e-12);
        assert_eq!(two.approx().width(), 4);
        assert_eq!(two.details(1).unwrap().diagonal.width(), 8);
        assert_eq!(two.details(2).unwrap().diagonal.width(), 4);
    }

    #[test]
    fn approx_only_matches_pyramid() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = random_plane(&mut rng, 32, 16);
        for j in 0..=3 {
            let full = dwt2(&p, j).unwrap();
            let fast = approx_coefficients(&p, j).unwrap();
            assert!(full.approx().max_abs_diff(&fast) < 1e-12);
        }
    }

    #[test]
    fn roundtrip_binary() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let p = RealPlane::from_fn(64, 64, |_, _| rng.random_range(0..2) as f64);
        let back = idwt2(&dwt2(&p, 3).unwrap()).unwrap();
        assert!(back.max_abs_diff(&p) < 1e-9);
    }

    #[test]
    fn zero_details_constant_apex() {
        let c = 1.5;
        let pyr = WaveletPyramid::from_parts(
            RealPlane::from_fn(3, 2, |_, _| 2.0 * c),
            vec![DetailBands {
                horizontal: RealPlane::zeros(3, 2),
                vertical: RealPlane::zeros(3, 2),
                diagonal: RealPlane::zeros(3, 2),
            }],
            (4, 6),
        )
        .unwrap();
        let plane = idwt2(&pyr).unwrap();
        assert!(plane.values().iter().all(|&x| (x - c).abs() < 1e-12));
    }

    #[test]
    fn single_level_inverts_hand_formulas() {
        // block (p00 p01 / p10 p11) = (4 2 / 1 -3)
        let (a, h, v, d) = (2.0, 4.0, 3.0, -1.0);
        let plane = idwt2_single(
            &RealPlane::new(1, 1, vec![a]).unwrap(),
            &RealPlane::new(1, 1, vec![h]).unwrap(),
            &RealPlane::new(1, 1, vec![v]).unwrap(),
            &RealPlane::new(1, 1, vec![d]).unwrap(),
        )
        .unwrap();
        let want = [4.0, 2.0, 1.0, -3.0];
        for (x, y) in plane.values().iter().zip(want) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn inconsistent_pyramid_rejected() {
        let err = WaveletPyramid::from_parts(
            RealPlane::zeros(2, 2),
            vec![DetailBands {
                horizontal: RealPlane::zeros(2, 2),
                vertical: RealPlane::zeros(3, 2),
                diagonal: RealPlane::zeros(2, 2),
            }],
            (4, 4),
        );
        assert!(matches!(err, Err(Error::Structure(_))));

        let mut pyr = dwt2(&RealPlane::zeros(8, 8), 2).unwrap();
        pyr.details_mut(1).unwrap().vertical = RealPlane::zeros(2, 2);
        assert!(matches!(idwt2(&pyr), Err(Error::Structure(_))));
    }

    #[test]
    fn coarse_mapping() {
        assert_eq!(coarse_to_fine((0, 0), 5), (0, 0));
        assert_eq!(coarse_to_fine((3, 5), 2), (12, 20));
    }

    #[test]
    fn crop_commutes_with_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let p = random_plane(&mut rng, 32, 24);
        let j = 2;
        let pyr = dwt2(&p, j).unwrap();
        let (r, c, h, w) = (1, 3, 3, 2);
        let (fr, fc) = coarse_to_fine((r, c), j);
        let fine = p.crop(fr, fc, h << j, w << j).unwrap();
        let direct = dwt2(&fine, j).unwrap();
        let cropped = pyr.crop_apex(r, c, h, w).unwrap();
        assert!(direct.approx().max_abs_diff(cropped.approx()) < 1e-12);
        for lvl in 1..=j {
            let (x, y) = (direct.details(lvl).unwrap(), cropped.details(lvl).unwrap());
            assert!(x.horizontal.max_abs_diff(&y.horizontal) < 1e-12);
            assert!(x.diagonal.max_abs_diff(&y.diagonal) < 1e-12);
        }
        let rebuilt = idwt2(&cropped).unwrap();
        assert!(rebuilt.max_abs_diff(&fine) < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn perfect_reconstruction_and_energy(seed in any::<u64>(), j in 1usize..=3, bh in 1usize..6, bw in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (h, w) = (bh << j, bw << j);
            let p = random_plane(&mut rng, w, h);
            let pyr = dwt2(&p, j).unwrap();
            prop_assert_eq!(pyr.approx().height(), h >> j);
            let back = idwt2(&pyr).unwrap();
            prop_assert!(back.max_abs_diff(&p) < 1e-9);
            let e = p.sum_of_squares();
            prop_assert!((pyr.coefficient_energy() - e).abs() <= 1e-9 * e.max(1e-300));
        }
    }
}
