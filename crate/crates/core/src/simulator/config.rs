use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{CategoricalGrid, HardDataSet};

/// How overlap coefficients are compared with the TI coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoringMode {
    /// Plain product-sum.
    #[default]
    Raw,
    /// Product-sum divided by the local TI coefficient norm over the mask.
    Normalized,
}

/// How categorical cells become real-valued planes before the transform.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaciesMode {
    /// One indicator plane per facies; channel scores are summed.
    #[default]
    Indicator,
    /// A single plane holding the integer codes.
    RawCodes,
}

impl FromStr for ScoringMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "raw" => Ok(Self::Raw),
            "normalized" => Ok(Self::Normalized),
            other => Err(format!("expected `raw` or `normalized`, got `{other}`")),
        }
    }
}

impl FromStr for FaciesMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "indicator" => Ok(Self::Indicator),
            "raw-codes" => Ok(Self::RawCodes),
            other => Err(format!("expected `indicator` or `raw-codes`, got `{other}`")),
        }
    }
}

impl fmt::Display for ScoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Raw => "raw",
            Self::Normalized => "normalized",
        })
    }
}

impl fmt::Display for FaciesMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Indicator => "indicator",
            Self::RawCodes => "raw-codes",
        })
    }
}

/// Every user parameter of a simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub sg_height: usize,
    pub sg_width: usize,
    /// Template edge length in cells.
    pub template: usize,
    /// Overlap band width in cells.
    pub overlap: usize,
    pub dwt_level: usize,
    /// Number of top-ranked candidates for the random draw.
    pub candidates: usize,
    pub realizations: usize,
    pub master_seed: u64,
    pub scoring: ScoringMode,
    pub facies_mode: FaciesMode,
    pub min_cut: bool,
    pub hard_data: Option<HardDataSet>,
}

/// Deepest decomposition accepted.
pub const MAX_DWT_LEVEL: usize = 8;

impl SimConfig {
    /// Square simulation grid with one realization, `K = 10` and default modes.
    pub fn new(sg_size: usize, template: usize, overlap: usize, dwt_level: usize) -> Self {
        Self {
            sg_height: sg_size,
            sg_width: sg_size,
            template,
            overlap,
            dwt_level,
            candidates: 10,
            realizations: 1,
            master_seed: 0,
            scoring: ScoringMode::Raw,
            facies_mode: FaciesMode::Indicator,
            min_cut: false,
            hard_data: None,
        }
    }

    /// Distance between consecutive placements along the raster path.
    pub fn stride(&self) -> usize {
        self.template - self.overlap
    }

    pub fn block(&self) -> usize {
        1 << self.dwt_level
    }

    /// Checks the invariants that do not depend on the training image.
    pub fn validate(&self) -> Result<()> {
        if self.dwt_level > MAX_DWT_LEVEL {
            return Err(Error::config(
                "dwt_level",
                format!("{} exceeds the maximum of {MAX_DWT_LEVEL}", self.dwt_level),
            ));
        }
        if self.template == 0 {
            return Err(Error::config("template", "must be positive"));
        }
        if self.overlap >= self.template {
            return Err(Error::config(
                "overlap",
                format!("{} must be smaller than template {}", self.overlap, self.template),
            ));
        }
        let block = self.block();
        if !self.template.is_multiple_of(block) {
            return Err(Error::config(
                "template",
                format!("{} not divisible by 2^{} = {block}", self.template, self.dwt_level),
            ));
        }
        if !self.overlap.is_multiple_of(block) {
            return Err(Error::config(
                "overlap",
                format!("{} not divisible by 2^{} = {block}", self.overlap, self.dwt_level),
            ));
        }
        if self.candidates == 0 {
            return Err(Error::config("candidates", "must be at least 1"));
        }
        if self.realizations == 0 {
            return Err(Error::config("realizations", "must be at least 1"));
        }
        if self.template > self.sg_height || self.template > self.sg_width {
            return Err(Error::config(
                "sg_size",
                format!(
                    "{}x{} smaller than template {}",
                    self.sg_height, self.sg_width, self.template
                ),
            ));
        }
        Ok(())
    }

    /// Full validation against a training image.
    pub fn validate_for(&self, ti: &CategoricalGrid) -> Result<()> {
        self.validate()?;
        let block = self.block();
        if !ti.height().is_multiple_of(block) || !ti.width().is_multiple_of(block) {
            return Err(Error::config(
                "ti",
                format!(
                    "{}x{} not divisible by 2^{} = {block}",
                    ti.height(),
                    ti.width(),
                    self.dwt_level
                ),
            ));
        }
        if self.template > ti.height() || self.template > ti.width() {
            return Err(Error::config(
                "template",
                format!(
                    "{} larger than training image {}x{}",
                    self.template,
                    ti.height(),
                    ti.width()
                ),
            ));
        }
        if let Some(hd) = &self.hard_data {
            for p in hd.points() {
                if p.row >= self.sg_height || p.col >= self.sg_width {
                    return Err(Error::config(
                        "hard_data",
                        format!("point ({}, {}) outside the simulation grid", p.row, p.col),
                    ));
                }
                if p.facies as usize >= ti.num_facies() {
                    return Err(Error::config(
                        "hard_data",
                        format!(
                            "facies {} at ({}, {}) absent from the training image's {} facies",
                            p.facies,
                            p.row,
                            p.col,
                            ti.num_facies()
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}
