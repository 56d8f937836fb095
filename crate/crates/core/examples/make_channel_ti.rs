//! Writes a synthetic channelized training image.
//!
//! Usage: `make_channel_ti <out.grid> [size] [seed]`

use ccwsim::io::{write_grid, write_pgm};
use ccwsim::synthetic::{channel_training_image, ChannelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().ok_or("usage: make_channel_ti <out.grid> [size] [seed]")?;
    let size: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(256);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let ti = channel_training_image(&ChannelParams::new(size, size), seed)?;
    write_grid(&ti, &out)?;
    write_pgm(&ti, std::path::Path::new(&out).with_extension("pgm"))?;
    println!(
        "wrote {out}: {size}x{size}, sand fraction {:.3}",
        ti.facies_proportions()[1]
    );
    Ok(())
}
