//! Categorical and real-valued 2D lattices.
//!
//! All grids are row-major with `(row, col)` addressing and row 0 at the top.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

fn check_rect(
    top: usize,
    left: usize,
    h: usize,
    w: usize,
    height: usize,
    width: usize,
) -> Result<()> {
    let fits = top.checked_add(h).is_some_and(|b| b <= height)
        && left.checked_add(w).is_some_and(|r| r <= width);
    if fits {
        Ok(())
    } else {
        Err(Error::Bounds {
            top,
            left,
            h,
            w,
            height,
            width,
        })
    }
}

/// A 2D lattice of dense facies codes `0..num_facies`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CategoricalGrid {
    width: usize,
    height: usize,
    num_facies: usize,
    cells: Vec<u8>,
}

impl CategoricalGrid {
    pub const MAX_FACIES: usize = 256;

    pub fn new(width: usize, height: usize, num_facies: usize, cells: Vec<u8>) -> Result<Self> {
        if num_facies == 0 || num_facies > Self::MAX_FACIES {
            return Err(Error::Structure(format!(
                "num_facies must be in 1..={}, got {num_facies}",
                Self::MAX_FACIES
            )));
        }
        if cells.len() != width * height {
            return Err(Error::Structure(format!(
                "{} cells supplied for a {height}x{width} grid",
                cells.len()
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&c| c as usize >= num_facies) {
            return Err(Error::FaciesCode {
                code: bad as u32,
                num_facies: num_facies as u32,
            });
        }
        Ok(Self {
            width,
            height,
            num_facies,
            cells,
        })
    }

    /// Grid with every cell set to `code`.
    pub fn filled(width: usize, height: usize, num_facies: usize, code: u8) -> Result<Self> {
        Self::new(width, height, num_facies, vec![code; width * height])
    }

    /// Builds a grid from arbitrary integer labels, remapping them to dense
    /// codes in ascending label order.
    pub fn from_labels(width: usize, height: usize, labels: &[i64]) -> Result<(Self, LabelMap)> {
        let distinct: Vec<i64> = labels
            .iter()
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if distinct.len() > Self::MAX_FACIES {
            return Err(Error::Structure(format!(
                "{} distinct labels exceed the {} facies limit",
                distinct.len(),
                Self::MAX_FACIES
            )));
        }
        let lookup: BTreeMap<i64, u8> = distinct
            .iter()
            .enumerate()
            .map(|(code, &label)| (label, code as u8))
            .collect();
        let cells = labels.iter().map(|l| lookup[l]).collect();
        let grid = Self::new(width, height, distinct.len().max(1), cells)?;
        Ok((grid, LabelMap { labels: distinct }))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_facies(&self) -> usize {
        self.num_facies
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    /// Sets one cell. Panics if the code is not a valid facies.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, code: u8) {
        assert!((code as usize) < self.num_facies, "facies code {code} out of range");
        self.cells[row * self.width + col] = code;
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.cells[row * self.width..(row + 1) * self.width]
    }

    /// Copies the `h x w` sub-grid whose top-left cell is `(top, left)`.
    pub fn crop(&self, top: usize, left: usize, h: usize, w: usize) -> Result<Self> {
        check_rect(top, left, h, w, self.height, self.width)?;
        let mut cells = Vec::with_capacity(h * w);
        for r in top..top + h {
            cells.extend_from_slice(&self.row(r)[left..left + w]);
        }
        Ok(Self {
            width: w,
            height: h,
            num_facies: self.num_facies,
            cells,
        })
    }

    /// Overwrites the cells under `patch`'s footprint.
    pub fn paste(&mut self, patch: &CategoricalGrid, top: usize, left: usize) -> Result<()> {
        check_rect(top, left, patch.height, patch.width, self.height, self.width)?;
        if patch.num_facies > self.num_facies {
            if let Some(&bad) = patch.cells.iter().find(|&&c| c as usize >= self.num_facies) {
                return Err(Error::FaciesCode {
                    code: bad as u32,
                    num_facies: self.num_facies as u32,
                });
            }
        }
        for r in 0..patch.height {
            let dst = (top + r) * self.width + left;
            self.cells[dst..dst + patch.width].copy_from_slice(patch.row(r));
        }
        Ok(())
    }

    /// Fraction of cells holding each code, indexed by code.
    pub fn facies_proportions(&self) -> Vec<f64> {
        let counts = self.facies_counts();
        let area = self.area().max(1) as f64;
        counts.into_iter().map(|c| c as f64 / area).collect()
    }

    pub fn facies_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_facies];
        for &c in &self.cells {
            counts[c as usize] += 1;
        }
        counts
    }

    /// One 0/1 plane per facies code.
    pub fn to_indicator_planes(&self) -> Vec<RealPlane> {
        (0..self.num_facies)
            .map(|f| {
                let values = self
                    .cells
                    .iter()
                    .map(|&c| if c as usize == f { 1.0 } else { 0.0 })
                    .collect();
                RealPlane {
                    width: self.width,
                    height: self.height,
                    values,
                }
            })
            .collect()
    }

    /// The codes themselves as real values.
    pub fn to_code_plane(&self) -> RealPlane {
        RealPlane {
            width: self.width,
            height: self.height,
            values: self.cells.iter().map(|&c| c as f64).collect(),
        }
    }
}

/// Dense-code to original-label mapping recorded by [`CategoricalGrid::from_labels`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<i64>,
}

impl LabelMap {
    pub fn label(&self, code: u8) -> Option<i64> {
        self.labels.get(code as usize).copied()
    }

    pub fn code(&self, label: i64) -> Option<u8> {
        self.labels.binary_search(&label).ok().map(|i| i as u8)
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }
}

/// Row-major plane of finite reals.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPlane {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl RealPlane {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::Structure(format!(
                "{} values supplied for a {height}x{width} plane",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Structure("plane contains non-finite values".into()));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                values.push(f(r, c));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.values[row * self.width + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.width..(row + 1) * self.width]
    }

    pub fn crop(&self, top: usize, left: usize, h: usize, w: usize) -> Result<Self> {
        check_rect(top, left, h, w, self.height, self.width)?;
        let mut values = Vec::with_capacity(h * w);
        for r in top..top + h {
            values.extend_from_slice(&self.row(r)[left..left + w]);
        }
        Ok(Self {
            width: w,
            height: h,
            values,
        })
    }

    pub fn same_shape(&self, other: &RealPlane) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Largest absolute element-wise difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &RealPlane) -> f64 {
        assert!(self.same_shape(other), "plane shapes differ");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HardDatum {
    pub row: usize,
    pub col: usize,
    pub facies: u8,
}

/// Validated set of cell observations on a simulation grid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HardDataSet {
    points: Vec<HardDatum>,
}

impl HardDataSet {
    /// Validates bounds, facies codes and coordinate uniqueness against a
    /// `height x width` grid.
    pub fn new(
        points: Vec<HardDatum>,
        height: usize,
        width: usize,
        num_facies: usize,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.row >= height || p.col >= width {
                return Err(Error::HardData(format!(
                    "point ({}, {}) outside {height}x{width} grid",
                    p.row, p.col
                )));
            }
            if p.facies as usize >= num_facies {
                return Err(Error::HardData(format!(
                    "point ({}, {}) has facies {} but only {num_facies} facies exist",
                    p.row, p.col, p.facies
                )));
            }
            if !seen.insert((p.row, p.col)) {
                return Err(Error::HardData(format!(
                    "duplicate coordinate ({}, {})",
                    p.row, p.col
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[HardDatum] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Samples `count` distinct cells of `reference` as hard data, in row-major order.
    pub fn sample_from<R: rand::Rng + ?Sized>(
        reference: &CategoricalGrid,
        count: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if count > reference.area() {
            return Err(Error::HardData(format!(
                "cannot sample {count} points from {} cells",
                reference.area()
            )));
        }
        let mut idx = rand::seq::index::sample(rng, reference.area(), count).into_vec();
        idx.sort_unstable();
        let points = idx
            .into_iter()
            .map(|i| HardDatum {
                row: i / reference.width(),
                col: i % reference.width(),
                facies: reference.cells()[i],
            })
            .collect();
        Ok(Self { points })
    }

    /// Points inside the rectangle, converted to rectangle-local coordinates.
    pub fn local_to(&self, top: usize, left: usize, h: usize, w: usize) -> Vec<HardDatum> {
        self.points
            .iter()
            .filter(|p| p.row >= top && p.row < top + h && p.col >= left && p.col < left + w)
            .map(|p| HardDatum {
                row: p.row - top,
                col: p.col - left,
                facies: p.facies,
            })
            .collect()
    }
}
