//! Frog ranges against the dominating disk-percolation balls.
//!
//! For a vertex `x` the range `R_x` is the set of vertices visited by its
//! frogs, and the ball `B_x` is the set of vertices at distance smaller than
//! the largest lifetime among them. A frog with lifetime `Ξ` makes `Ξ - 1`
//! jumps, so `R_x ⊆ B_x` holds on every realization.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hitting::{edge_open_prob, Survival, VertexType};
use crate::law::InitLaw;
use crate::stats::Estimate;
use crate::tree::{distance, TreeParams, VertexAddr};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeDiskReport {
    pub k: u32,
    /// Empirical `P[y ∈ R_x]`.
    pub in_range: Estimate,
    /// Empirical `P[y ∈ B_x]`.
    pub in_disk: Estimate,
    /// `π_η(i, j, k)`, the exact `P[y ∈ R_x]`.
    pub range_exact: f64,
    /// `Σ_i ρ_i [1 - (1 - p^k)^i]`, the exact `P[y ∈ B_x]`.
    pub disk_exact: f64,
    /// Visited vertices found outside the ball (always 0).
    pub violations: u64,
}

/// Samples the frogs of one vertex `x` of type `from` and compares range and
/// ball membership of the vertex `y` at distance `k` down the child-0 branch.
pub fn mc_range_vs_disk(
    t: TreeParams,
    law: &InitLaw,
    p: Survival,
    from: VertexType,
    k: u32,
    trials: u64,
    seed: u64,
) -> Result<RangeDiskReport> {
    if p.get() >= 1.0 {
        return Err(Error::InvalidParam { name: "p", reason: "must be below 1".into() });
    }
    if k == 0 {
        return Err(Error::InvalidParam { name: "k", reason: "must be at least 1".into() });
    }
    let x = match from {
        VertexType::One => VertexAddr::root(),
        VertexType::Two => VertexAddr::root().child(0),
    };
    let mut y = x.clone();
    for _ in 0..k {
        y = y.child(0);
    }
    let p_val = p.get();
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let (mut range_hits, mut disk_hits, mut violations) = (0u64, 0u64, 0u64);
    for _ in 0..trials {
        let frogs = law.sample(&mut rng);
        let mut max_life = 0u64;
        let mut y_in_range = false;
        for _ in 0..frogs {
            let mut pos = x.clone();
            let mut visited = vec![0usize];
            let mut life = 1u64;
            while rng.random::<f64>() < p_val {
                pos.step_random(t, &mut rng);
                life += 1;
                visited.push(distance(&x, &pos));
                y_in_range |= pos == y;
            }
            violations += visited.iter().filter(|&&d| d as u64 >= life).count() as u64;
            max_life = max_life.max(life);
        }
        let y_in_disk = u64::from(k) < max_life;
        if y_in_range && !y_in_disk {
            violations += 1;
        }
        range_hits += u64::from(y_in_range);
        disk_hits += u64::from(y_in_disk);
    }
    Ok(RangeDiskReport {
        k,
        in_range: Estimate::from_counts(range_hits, trials),
        in_disk: Estimate::from_counts(disk_hits, trials),
        range_exact: edge_open_prob(t, law, p, from, from.after(k), k)?,
        disk_exact: law.hit_any(p_val.powi(k as i32)),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::alpha;

    #[test]
    fn single_frog_examples() {
        let t = TreeParams::new(2, 3).unwrap();
        let p = Survival::new(0.5).unwrap();
        let one = InitLaw::Constant(1);
        let r = mc_range_vs_disk(t, &one, p, VertexType::One, 2, 50_000, 1).unwrap();
        assert_eq!(r.violations, 0);
        assert!((r.disk_exact - 0.25).abs() < 1e-15);
        assert!(r.in_disk.within_sigmas(0.25, 4.0), "{r:?}");
        let r = mc_range_vs_disk(t, &one, p, VertexType::One, 1, 50_000, 2).unwrap();
        assert!(r.in_range.within_sigmas(alpha(t, p), 4.0), "{r:?}");
        assert!(r.in_range.estimate <= r.in_disk.estimate);
    }

    #[test]
    fn rejects_full_survival() {
        let t = TreeParams::new(2, 2).unwrap();
        let p = Survival::new(1.0).unwrap();
        assert!(mc_range_vs_disk(t, &InitLaw::Constant(1), p, VertexType::One, 1, 10, 0).is_err());
    }
}
