//! Raster-path planning.

use rand::Rng;
use serde::Serialize;

use super::config::SimConfig;
use crate::error::{Error, Result};
use crate::grid::RealPlane;

/// Corner of the simulation grid the raster path starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::TopLeft,
        Corner::TopRight,
        Corner::BottomLeft,
        Corner::BottomRight,
    ];

    pub fn is_top(self) -> bool {
        matches!(self, Corner::TopLeft | Corner::TopRight)
    }

    pub fn is_left(self) -> bool {
        matches!(self, Corner::TopLeft | Corner::BottomLeft)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanOrder {
    RowMajor,
    ColumnMajor,
}

/// Shape of the previously simulated band inside a template footprint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrShape {
    None,
    /// Band of `overlap` columns on the origin side.
    VerticalStrip,
    /// Band of `overlap` rows on the origin side.
    HorizontalStrip,
    LShaped,
}

impl OrShape {
    pub fn has_column_band(self) -> bool {
        matches!(self, OrShape::VerticalStrip | OrShape::LShaped)
    }

    pub fn has_row_band(self) -> bool {
        matches!(self, OrShape::HorizontalStrip | OrShape::LShaped)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    /// Working-grid row of the footprint's top-left cell.
    pub top: usize,
    /// Working-grid column of the footprint's top-left cell.
    pub left: usize,
    pub or_shape: OrShape,
    /// Origin of the path; decides which sides of the footprint the bands sit on.
    pub corner: Corner,
}

impl Placement {
    /// Whether template-local cell `(r, c)` lies in the overlap band.
    pub fn in_overlap(&self, r: usize, c: usize, template: usize, overlap: usize) -> bool {
        let in_cols = if self.corner.is_left() {
            c < overlap
        } else {
            c >= template - overlap
        };
        let in_rows = if self.corner.is_top() {
            r < overlap
        } else {
            r >= template - overlap
        };
        (self.or_shape.has_column_band() && in_cols) || (self.or_shape.has_row_band() && in_rows)
    }

    /// Template-local 0/1 mask of the overlap band.
    pub fn overlap_mask(&self, template: usize, overlap: usize) -> RealPlane {
        RealPlane::from_fn(template, template, |r, c| {
            if self.in_overlap(r, c, template, overlap) {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Ordered placements over a working grid at least as large as the
/// simulation grid. The simulation grid occupies the working grid's
/// top-left corner.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlacementPlan {
    pub placements: Vec<Placement>,
    pub corner: Corner,
    pub order: ScanOrder,
    pub working_height: usize,
    pub working_width: usize,
    pub stride: usize,
}

impl PlacementPlan {
    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }
}

/// Placements needed along one axis and the padded extent they cover.
fn axis_layout(extent: usize, template: usize, stride: usize) -> (usize, usize) {
    let n = (extent - template).div_ceil(stride) + 1;
    (n, template + (n - 1) * stride)
}

/// Draws the origin corner and scan order from `rng`, then lays out the path.
pub fn plan_raster_path<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<PlacementPlan> {
    let corner = Corner::ALL[rng.random_range(0..4)];
    let order = if rng.random_bool(0.5) {
        ScanOrder::RowMajor
    } else {
        ScanOrder::ColumnMajor
    };
    plan_with(cfg, corner, order)
}

pub fn plan_with(cfg: &SimConfig, corner: Corner, order: ScanOrder) -> Result<PlacementPlan> {
    if cfg.template > cfg.sg_height || cfg.template > cfg.sg_width {
        return Err(Error::config(
            "template",
            format!(
                "{} exceeds simulation grid {}x{}",
                cfg.template, cfg.sg_height, cfg.sg_width
            ),
        ));
    }
    if cfg.overlap >= cfg.template {
        return Err(Error::config("overlap", "must be smaller than template"));
    }
    let stride = cfg.stride();
    let (ny, working_height) = axis_layout(cfg.sg_height, cfg.template, stride);
    let (nx, working_width) = axis_layout(cfg.sg_width, cfg.template, stride);

    let top_of = |i: usize| {
        if corner.is_top() {
            i * stride
        } else {
            working_height - cfg.template - i * stride
        }
    };
    let left_of = |j: usize| {
        if corner.is_left() {
            j * stride
        } else {
            working_width - cfg.template - j * stride
        }
    };
    let shape = |i: usize, j: usize| match (i, j) {
        (0, 0) => OrShape::None,
        (0, _) => OrShape::VerticalStrip,
        (_, 0) => OrShape::HorizontalStrip,
        _ => OrShape::LShaped,
    };

    let mut placements = Vec::with_capacity(nx * ny);
    let mut push = |i: usize, j: usize| {
        placements.push(Placement {
            top: top_of(i),
            left: left_of(j),
            or_shape: shape(i, j),
            corner,
        })
    };
    match order {
        ScanOrder::RowMajor => (0..ny).for_each(|i| (0..nx).for_each(|j| push(i, j))),
        ScanOrder::ColumnMajor => (0..nx).for_each(|j| (0..ny).for_each(|i| push(i, j))),
    }

    Ok(PlacementPlan {
        placements,
        corner,
        order,
        working_height,
        working_width,
        stride,
    })
}
