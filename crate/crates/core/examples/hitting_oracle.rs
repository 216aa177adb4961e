//! Compares the killed-walk hitting probabilities α and β with Monte Carlo.

use frog_biregular::hitting::{alpha, beta, mc_hit_neighbor, MC_STEP_CAP};
use frog_biregular::{Survival, TreeParams, VertexType};

fn main() -> frog_biregular::Result<()> {
    let t = TreeParams::new(2, 3)?;
    for p in [0.3, 0.6, 0.9] {
        let s = Survival::new(p)?;
        let a = mc_hit_neighbor(t, s, VertexType::One, 200_000, 1, MC_STEP_CAP);
        let b = mc_hit_neighbor(t, s, VertexType::Two, 200_000, 2, MC_STEP_CAP);
        println!(
            "p = {p}: alpha {:.5} vs {:.5} (z {:+.2}), beta {:.5} vs {:.5} (z {:+.2})",
            alpha(t, s),
            a.estimate,
            a.z_score(alpha(t, s)),
            beta(t, s),
            b.estimate,
            b.z_score(beta(t, s)),
        );
    }
    Ok(())
}
