use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};
use ccwsim::io::{fmt_f64, format_csv, read_grid, read_hard_data};
use ccwsim::simulator::realization_seed;
use ccwsim::simulate_one;

use crate::ensemble::load_entries;
use crate::BenchArgs;

/// Sample mean and standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run(args: BenchArgs) -> Result<()> {
    if args.repetitions == 0 || args.levels.is_empty() || args.sizes.is_empty() {
        bail!("need at least one level, one size and one repetition");
    }
    let (mut entries, _) = load_entries(args.config.as_deref(), &args.flags)?;
    for (key, default) in [("candidates", "10"), ("realizations", "1"), ("seed", "0")] {
        if !entries.contains(key) {
            entries.set(key, default)?;
        }
    }
    let mut levels = args.levels.clone();
    if !levels.contains(&1) {
        levels.insert(0, 1);
    }
    levels.sort_unstable();
    levels.dedup();

    let mut timings: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    let mut ti = None;
    for &size in &args.sizes {
        for &level in &levels {
            entries.set("sg_size", size.to_string())?;
            entries.set("dwt_level", level.to_string())?;
            let run = entries.to_run_config()?;
            let ti = match &ti {
                Some(t) => t,
                None => ti.insert(read_grid(&run.ti)?),
            };
            let mut cfg = run.sim.clone();
            if let Some(path) = &run.hard_data {
                cfg.hard_data = Some(read_hard_data(path, size, size, ti.num_facies())?);
            }
            let mut secs = Vec::with_capacity(args.repetitions);
            for rep in 1..=args.repetitions {
                let t = Instant::now();
                simulate_one(ti, &cfg, realization_seed(&cfg, rep))?;
                secs.push(t.elapsed().as_secs_f64());
            }
            let (mean, std) = mean_std(&secs);
            eprintln!("level {level} sg {size}: {mean:.4}s +/- {std:.4}s");
            timings.insert((level, size), (mean, std));
        }
    }

    let header: Vec<String> = ["level", "sg", "mean_s", "std_s", "speedup_vs_level1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for &level in &args.levels {
        for &size in &args.sizes {
            let (mean, std) = timings[&(level, size)];
            let base = timings[&(1, size)].0;
            rows.push(vec![
                level.to_string(),
                size.to_string(),
                fmt_f64(mean),
                fmt_f64(std),
                fmt_f64(base / mean),
            ]);
        }
    }
    let csv = format_csv(&header, &rows);
    match &args.output {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_statistics() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.2909944487358056).abs() < 1e-12);
    }
}
