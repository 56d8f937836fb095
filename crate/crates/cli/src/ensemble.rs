//! Configuration assembly and realization directories shared by the subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ccwsim::io::{read_grid, ConfigEntries};
use ccwsim::CategoricalGrid;

use crate::ConfigFlags;

/// A flag that replaced or supplied a configuration value.
#[derive(Clone, Debug)]
pub struct Override {
    pub key: &'static str,
    pub file_value: Option<String>,
    pub flag_value: String,
}

/// Reads the optional configuration file and applies the flag twins on top.
pub fn load_entries(config: Option<&Path>, flags: &ConfigFlags) -> Result<(ConfigEntries, Vec<Override>)> {
    let mut entries = match config {
        Some(path) => ConfigEntries::read(path)?,
        None => ConfigEntries::default(),
    };
    let mut applied = Vec::new();
    for (key, value) in flags.overrides() {
        let file_value = entries.set(key, value.clone())?;
        if let Some(old) = &file_value {
            if *old != value {
                eprintln!("note: --{} {value} overrides `{key} = {old}` from the config file", key.replace('_', "-"));
            }
        }
        applied.push(Override {
            key,
            file_value,
            flag_value: value,
        });
    }
    Ok((entries, applied))
}

/// Index of a `real_<r>.grid` file name.
pub fn realization_index(path: &Path) -> Option<usize> {
    let name = path.file_name()?.to_str()?;
    name.strip_prefix("real_")?.strip_suffix(".grid")?.parse().ok()
}

pub fn realization_path(dir: &Path, r: usize) -> PathBuf {
    dir.join(format!("real_{r}.grid"))
}

/// Every realization in `dir`, ordered by index.
pub fn read_realizations(dir: &Path) -> Result<Vec<(usize, CategoricalGrid)>> {
    let mut found: Vec<(usize, PathBuf)> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter_map(|p| realization_index(&p).map(|r| (r, p)))
        .collect();
    if found.is_empty() {
        bail!("no real_<r>.grid files in {}", dir.display());
    }
    found.sort();
    let grids = found
        .into_iter()
        .map(|(r, p)| Ok((r, read_grid(&p)?)))
        .collect::<Result<Vec<_>>>()?;
    let (w, h) = (grids[0].1.width(), grids[0].1.height());
    if let Some((r, g)) = grids.iter().find(|(_, g)| (g.width(), g.height()) != (w, h)) {
        bail!(
            "realization {r} is {}x{} but realization {} is {h}x{w}",
            g.height(),
            g.width(),
            grids[0].0
        );
    }
    Ok(grids)
}

pub fn worker_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            bail!("--workers must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    builder.build().context("cannot start worker pool")
}
