//! Categorical pattern simulation driven by cross-correlation of Haar
//! approximation coefficients.
//!
//! A training image (TI) and the overlap band of each template footprint are
//! reduced to level-`J` approximation coefficients; candidate patterns are
//! ranked by their masked cross-correlation with the band and the winner is
//! pasted at full resolution. The [`metrics`] module provides the validation
//! statistics used to compare ensembles against the TI.

pub mod error;
pub mod grid;
pub mod io;
pub mod matcher;
pub mod metrics;
pub mod simulator;
pub mod synthetic;
pub mod wavelet;

pub use error::{Error, Result};
pub use grid::{CategoricalGrid, HardDataSet, HardDatum, LabelMap, RealPlane};
pub use matcher::{Candidate, CandidateSet, ScoreMap};
pub use simulator::{Simulator, 
    simulate_ensemble, simulate_ensemble_with_workers, simulate_one, Diagnostics, FaciesMode,
    ScoringMode, SimConfig,
};
pub use wavelet::WaveletPyramid;
