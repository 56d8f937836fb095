use std::path::Path;

use anyhow::{bail, Result};
use ccwsim::io::{fmt_f64, read_grid, write_csv, write_plane_pgm};
use ccwsim::metrics::{connectivity_function, ensemble_average, indicator_variogram, Direction};
use ccwsim::CategoricalGrid;
use rayon::prelude::*;

use crate::ensemble::read_realizations;
use crate::{Directions, ValidateArgs};

const DEFAULT_MAX_LAG: usize = 64;

struct Envelope {
    mean: Option<f64>,
    min: Option<f64>,
    max: Option<f64>,
}

/// Mean, min and max over the defined values.
fn envelope(values: impl Iterator<Item = Option<f64>>) -> Envelope {
    let defined: Vec<f64> = values.flatten().collect();
    if defined.is_empty() {
        return Envelope { mean: None, min: None, max: None };
    }
    let min = defined.iter().copied().fold(f64::INFINITY, f64::min);
    let max = defined.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let offset = defined.iter().map(|v| v - min).sum::<f64>() / defined.len() as f64;
    Envelope {
        mean: Some((min + offset).clamp(min, max)),
        min: Some(min),
        max: Some(max),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), fmt_f64)
}

fn header(first: &str) -> Vec<String> {
    [first, "ti", "mean", "min", "max"].iter().map(|s| s.to_string()).collect()
}

/// Rows of `lag,ti,mean,min,max` from per-grid series.
fn lag_rows(ti: &[Option<f64>], reals: &[Vec<Option<f64>>]) -> Vec<Vec<String>> {
    ti.iter()
        .enumerate()
        .map(|(i, t)| {
            let e = envelope(reals.iter().map(|s| s[i]));
            vec![(i + 1).to_string(), cell(*t), cell(e.mean), cell(e.min), cell(e.max)]
        })
        .collect()
}

fn max_lag(requested: Option<usize>, dir: Direction, ti: &CategoricalGrid, real: &CategoricalGrid) -> usize {
    let extent = dir.extent(ti).min(dir.extent(real));
    requested.unwrap_or_else(|| DEFAULT_MAX_LAG.min(extent.saturating_sub(1)).max(1))
}

fn variogram_csv(out: &Path, dir: Direction, lag: usize, facies: u8, ti: &CategoricalGrid, grids: &[CategoricalGrid]) -> Result<()> {
    let series = |g: &CategoricalGrid| -> ccwsim::Result<Vec<Option<f64>>> {
        Ok(indicator_variogram(g, facies, dir, lag)?.gamma.into_iter().map(Some).collect())
    };
    let t = series(ti)?;
    let reals = grids.par_iter().map(series).collect::<ccwsim::Result<Vec<_>>>()?;
    write_csv(out.join(format!("variogram_{}.csv", dir.label())), &header("lag"), &lag_rows(&t, &reals))?;
    Ok(())
}

fn connectivity_csv(out: &Path, dir: Direction, lag: usize, facies: u8, ti: &CategoricalGrid, grids: &[CategoricalGrid]) -> Result<()> {
    let series = |g: &CategoricalGrid| -> ccwsim::Result<Vec<Option<f64>>> {
        Ok(connectivity_function(g, facies, dir, lag)?.probability)
    };
    let t = series(ti)?;
    let reals = grids.par_iter().map(series).collect::<ccwsim::Result<Vec<_>>>()?;
    write_csv(out.join(format!("connectivity_{}.csv", dir.label())), &header("lag"), &lag_rows(&t, &reals))?;
    Ok(())
}

pub fn run(args: ValidateArgs) -> Result<()> {
    let reals = read_realizations(&args.realizations)?;
    let ti = read_grid(&args.ti)?;
    let grids: Vec<CategoricalGrid> = reals.into_iter().map(|(_, g)| g).collect();
    if usize::from(args.facies) >= ti.num_facies() {
        bail!("facies {} not present in a {}-facies training image", args.facies, ti.num_facies());
    }
    if let Some(g) = grids.iter().find(|g| g.num_facies() != ti.num_facies()) {
        bail!("realizations declare {} facies but the training image {}", g.num_facies(), ti.num_facies());
    }
    let out = args.out_dir.clone().unwrap_or_else(|| args.realizations.clone());
    std::fs::create_dir_all(&out)?;

    for dir in [Direction::EastWest, Direction::NorthSouth] {
        let lag = max_lag(args.max_lag, dir, &ti, &grids[0]);
        variogram_csv(&out, dir, lag, args.facies, &ti, &grids)?;
    }
    let conn_dirs: &[Direction] = match args.connectivity {
        Directions::Ew => &[Direction::EastWest],
        Directions::Ns => &[Direction::NorthSouth],
        Directions::Both => &[Direction::EastWest, Direction::NorthSouth],
    };
    for &dir in conn_dirs {
        let lag = max_lag(args.max_lag, dir, &ti, &grids[0]);
        connectivity_csv(&out, dir, lag, args.facies, &ti, &grids)?;
    }

    let ti_props = ti.facies_proportions();
    let props: Vec<Vec<f64>> = grids.iter().map(|g| g.facies_proportions()).collect();
    let rows: Vec<Vec<String>> = (0..ti.num_facies())
        .map(|f| {
            let e = envelope(props.iter().map(|p| Some(p[f])));
            vec![f.to_string(), fmt_f64(ti_props[f]), cell(e.mean), cell(e.min), cell(e.max)]
        })
        .collect();
    write_csv(out.join("facies_proportions.csv"), &header("facies"), &rows)?;
    write_plane_pgm(&ensemble_average(&grids, args.facies)?, out.join("ensemble_average.pgm"))?;

    println!("validated {} realization(s); results in {}", grids.len(), out.display());
    for (f, row) in rows.iter().enumerate() {
        println!("facies {f}: ti {} ensemble mean {}", row[1], row[2]);
    }
    Ok(())
}
