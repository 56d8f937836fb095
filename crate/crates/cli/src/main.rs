use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod anodi;
mod bench;
mod ensemble;
mod simulate;
mod validate;

#[derive(Parser)]
#[command(name = "ccwsim", version, about = "Wavelet-space pattern simulation of categorical grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate realizations from a training image.
    Simulate(SimulateArgs),
    /// Compare an ensemble of realizations against the training image.
    Validate(ValidateArgs),
    /// Compare two ensembles with the ANODI ratio and an MDS embedding.
    Anodi(AnodiArgs),
    /// Time simulations across DWT levels and grid sizes.
    Bench(BenchArgs),
}

/// Flag twins of the configuration keys. A flag wins over the file.
#[derive(Args, Clone, Debug, Default)]
pub struct ConfigFlags {
    /// Training image (grid file).
    #[arg(long)]
    pub ti: Option<PathBuf>,
    /// Simulation grid size, `N` or `<rows>x<cols>`.
    #[arg(long)]
    pub sg_size: Option<String>,
    #[arg(long)]
    pub template: Option<usize>,
    #[arg(long)]
    pub overlap: Option<usize>,
    #[arg(long)]
    pub dwt_level: Option<usize>,
    /// Number of best-scoring candidates to draw from.
    #[arg(long)]
    pub candidates: Option<usize>,
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Hard data file (`row,col,facies` lines).
    #[arg(long)]
    pub hard_data: Option<PathBuf>,
    /// `raw` or `normalized`.
    #[arg(long)]
    pub scoring: Option<String>,
    /// `indicator` or `raw-codes`.
    #[arg(long)]
    pub facies_mode: Option<String>,
    #[arg(long)]
    pub min_cut: Option<bool>,
    /// Output directory (falls back to `CCWSIM_OUT_DIR`).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl ConfigFlags {
    /// `(key, value)` for every flag given on the command line.
    pub fn overrides(&self) -> Vec<(&'static str, String)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let num = |n: Option<usize>| n.map(|n| n.to_string());
        [
            ("ti", path(&self.ti)),
            ("sg_size", self.sg_size.clone()),
            ("template", num(self.template)),
            ("overlap", num(self.overlap)),
            ("dwt_level", num(self.dwt_level)),
            ("candidates", num(self.candidates)),
            ("realizations", num(self.realizations)),
            ("seed", self.seed.map(|s| s.to_string())),
            ("hard_data", path(&self.hard_data)),
            ("scoring", self.scoring.clone()),
            ("facies_mode", self.facies_mode.clone()),
            ("min_cut", self.min_cut.map(|b| b.to_string())),
            ("out_dir", path(&self.out_dir)),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ConfigFlags,
    /// Threads used for realizations (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Draw the master seed from system entropy when no seed is configured.
    #[arg(long)]
    pub entropy: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Directions {
    Ew,
    Ns,
    Both,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Directory holding `real_<r>.grid` files.
    #[arg(long)]
    pub realizations: PathBuf,
    #[arg(long)]
    pub ti: PathBuf,
    /// Facies code the indicator statistics refer to.
    #[arg(long, default_value_t = 1)]
    pub facies: u8,
    /// Largest lag (default: 64, capped by the grid size).
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Directions of the connectivity function.
    #[arg(long, value_enum, default_value_t = Directions::Ew)]
    pub connectivity: Directions,
    /// Output directory (default: the realization directory).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnodiArgs {
    /// First ensemble directory.
    #[arg(long)]
    pub a: PathBuf,
    /// Second ensemble directory.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub ti: PathBuf,
    /// Number of resolution levels.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Pattern window edge.
    #[arg(long, default_value_t = 8)]
    pub window: usize,
    /// Comma-separated level weights (default: uniform).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Base configuration; its sg_size and dwt_level are replaced per run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ConfigFlags,
    /// Comma-separated DWT levels.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub levels: Vec<usize>,
    /// Comma-separated simulation grid edges.
    #[arg(long, value_delimiter = ',', default_value = "512")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub repetitions: usize,
    /// CSV destination (default: standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Validate(a) => validate::run(a),
        Command::Anodi(a) => anodi::run(a),
        Command::Bench(a) => bench::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
