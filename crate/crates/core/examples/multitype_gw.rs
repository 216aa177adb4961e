//! The two-type branching process that dominates the frog model dies out
//! below the lower bound and survives with positive probability above it.

use frog_biregular::bounds::{lb_biregular, spectral_radius};
use frog_biregular::sim::run_multitype_gw;
use frog_biregular::{InitLaw, Survival, TreeParams};

fn main() -> frog_biregular::Result<()> {
    let t = TreeParams::new(2, 3)?;
    let law = InitLaw::Constant(1);
    let lb = lb_biregular(t, law.mean())?;
    println!("lower bound {lb:.6}");
    for factor in [0.8, 0.95, 1.05, 1.2] {
        let p = Survival::new(factor * lb)?;
        let runs = 500;
        let extinct = (0..runs).filter(|&s| run_multitype_gw(t, &law, p, 10_000, s).extinct()).count();
        println!(
            "p = {:.4}  spectral radius {:.4}  extinct {extinct}/{runs}",
            p.get(),
            spectral_radius(t, law.mean(), p)
        );
    }
    Ok(())
}
