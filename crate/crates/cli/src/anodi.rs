use anyhow::Result;
use ccwsim::io::{fmt_f64, read_grid, write_csv, write_metrics_csv};
use ccwsim::metrics::{anodi, classical_mds, js_distance_matrix, pattern_histogram};
use ccwsim::CategoricalGrid;
use rayon::prelude::*;

use crate::ensemble::read_realizations;
use crate::AnodiArgs;

pub fn run(args: AnodiArgs) -> Result<()> {
    let a = read_realizations(&args.a)?;
    let b = read_realizations(&args.b)?;
    let ti = read_grid(&args.ti)?;
    let grids = |e: &[(usize, CategoricalGrid)]| e.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>();
    let (ga, gb) = (grids(&a), grids(&b));

    let result = anodi(&ga, &gb, &ti, args.levels, args.window, args.weights.as_deref())?;
    std::fs::create_dir_all(&args.out_dir)?;
    write_metrics_csv(&result, args.out_dir.join("anodi.csv"))?;

    // TI first, then ensemble A, then ensemble B
    let labelled: Vec<(&str, usize, &CategoricalGrid)> = std::iter::once(("ti", 0, &ti))
        .chain(a.iter().zip(&ga).map(|((r, _), g)| ("a", *r, g)))
        .chain(b.iter().zip(&gb).map(|((r, _), g)| ("b", *r, g)))
        .collect();
    let hists = labelled
        .par_iter()
        .map(|(_, _, g)| pattern_histogram(g, args.window, 1))
        .collect::<ccwsim::Result<Vec<_>>>()?;
    let coords = classical_mds(&js_distance_matrix(&hists)?)?;
    let header: Vec<String> = ["set", "index", "x", "y"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = labelled
        .iter()
        .zip(&coords)
        .map(|((set, r, _), [x, y])| vec![set.to_string(), r.to_string(), fmt_f64(*x), fmt_f64(*y)])
        .collect();
    write_csv(args.out_dir.join("mds.csv"), &header, &rows)?;

    for l in &result.levels {
        println!(
            "level {}: d_between {:.6} d_within {:.6} ratio {:.6}",
            l.level, l.d_between, l.d_within, l.ratio
        );
    }
    println!("r = {:.6}", result.r);
    Ok(())
}
