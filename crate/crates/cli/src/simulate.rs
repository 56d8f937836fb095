use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use ccwsim::io::{read_grid, read_hard_data, write_grid, write_pgm};
use ccwsim::simulator::{entropy_seed, plan_with, realization_seed, Corner, ScanOrder};
use ccwsim::Simulator;
use rayon::prelude::*;
use serde_json::json;

use crate::ensemble::{load_entries, realization_path, worker_pool};
use crate::SimulateArgs;

pub const OUT_DIR_ENV: &str = "CCWSIM_OUT_DIR";

pub fn run(args: SimulateArgs) -> Result<()> {
    let started = Instant::now();
    let (mut entries, overrides) = load_entries(args.config.as_deref(), &args.flags)?;
    let mut seed_source = "configured";
    if !entries.contains("seed") && args.entropy {
        entries.set("seed", entropy_seed().to_string())?;
        seed_source = "entropy";
    }
    if !entries.contains("out_dir") {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            entries.set("out_dir", dir)?;
        }
    }
    let run = entries.to_run_config()?;
    let out_dir: PathBuf = run
        .out_dir
        .clone()
        .with_context(|| format!("no output directory: set out_dir, --out-dir or {OUT_DIR_ENV}"))?;

    let ti = read_grid(&run.ti)?;
    let mut cfg = run.sim.clone();
    if let Some(path) = &run.hard_data {
        cfg.hard_data = Some(read_hard_data(path, cfg.sg_height, cfg.sg_width, ti.num_facies())?);
    }
    let simulator = Simulator::new(&ti, &cfg)?;
    let pool = worker_pool(args.workers)?;
    let results = pool.install(|| {
        (1..=cfg.realizations)
            .into_par_iter()
            .map(|r| {
                let t = Instant::now();
                let (grid, diag) = simulator.realization(r)?;
                Ok((grid, diag, t.elapsed().as_secs_f64()))
            })
            .collect::<ccwsim::Result<Vec<_>>>()
    })?;

    fs::create_dir_all(&out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    let mut realizations = Vec::with_capacity(results.len());
    let (mut mismatches, mut data) = (0, 0);
    for (i, (grid, diag, secs)) in results.iter().enumerate() {
        let r = i + 1;
        let path = realization_path(&out_dir, r);
        write_grid(grid, &path)?;
        write_pgm(grid, path.with_extension("pgm"))?;
        mismatches += diag.mismatches_before_overwrite;
        data += diag.hard_data;
        realizations.push(json!({
            "index": r,
            "file": path.file_name().map(|n| n.to_string_lossy().into_owned()),
            "seed": realization_seed(&cfg, r),
            "wall_seconds": secs,
            "diagnostics": diag,
            "mismatch_rate": diag.mismatch_rate(),
        }));
    }

    let effective: BTreeMap<&str, &str> = entries.entries().map(|(k, v, _)| (k, v)).collect();
    let placements = plan_with(&cfg, Corner::TopLeft, ScanOrder::RowMajor)?.len();
    let manifest = json!({
        "tool": concat!("ccwsim ", env!("CARGO_PKG_VERSION")),
        "config_file": args.config.as_ref().map(|p| p.display().to_string()),
        "effective": effective,
        "overrides": overrides.iter().map(|o| json!({
            "key": o.key,
            "config_value": o.file_value,
            "flag_value": o.flag_value,
        })).collect::<Vec<_>>(),
        "seed_source": seed_source,
        "master_seed": cfg.master_seed,
        "workers": pool.current_num_threads(),
        "training_image": { "height": ti.height(), "width": ti.width(), "facies": ti.num_facies() },
        "stride": cfg.stride(),
        "placements_per_realization": placements,
        "hard_data": cfg.hard_data.as_ref().map_or(0, |h| h.len()),
        "mismatch_rate": if data == 0 { 0.0 } else { mismatches as f64 / data as f64 },
        "realizations": realizations,
        "total_wall_seconds": started.elapsed().as_secs_f64(),
    });
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    println!(
        "wrote {} realization(s) to {} in {:.2}s",
        cfg.realizations,
        out_dir.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}
