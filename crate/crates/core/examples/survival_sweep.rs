//! Coupled survival curve of the frog model on T(2, 2) with one frog per
//! vertex. The curve rises between the lower bound 0.6 and the upper bound
//! 0.75.

use frog_biregular::output::{write_sweep, Format};
use frog_biregular::sim::{sweep, SimConfig};
use frog_biregular::{InitLaw, Survival, TreeParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SimConfig::new(TreeParams::new(2, 2)?, InitLaw::Constant(1), Survival::new(0.5)?)
        .with_awake_cap(20_000)
        .with_seed(2024);
    let grid: Vec<f64> = (10..=18).map(|i| f64::from(i) / 20.0).collect();
    let curve = sweep(&cfg, &grid, 400, true)?;
    write_sweep(&mut std::io::stdout(), Format::Pretty, &curve)?;
    Ok(())
}
