//! Two-type Galton–Watson process dominating the frog model.
//!
//! A particle of type `i` stands for an awake frog on a type-`i` vertex. It
//! dies with probability `1 - p`; otherwise it jumps back towards an already
//! visited vertex with probability `1/(d_i + 1)` (one offspring of the other
//! type) or to a fresh vertex with probability `d_i/(d_i + 1)`, where it is
//! joined by the `η` frogs found there (`1 + η` offspring of the other type).
//! The process starts with no type-1 particles and the sum of `d1 + 2`
//! independent copies of `η` type-2 particles.

use rand::{Rng, SeedableRng};
use rand_distr::{Binomial, Distribution, Poisson};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::hitting::{Survival, VertexType};
use crate::law::InitLaw;
use crate::tree::TreeParams;

/// Total population above which a run is declared censored.
pub const EXPLOSION_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GwStatus {
    Extinct { generation: u64 },
    Censored,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwOutcome {
    pub status: GwStatus,
    /// `(type-1, type-2)` counts per generation, generation 0 first.
    pub population_trace: Vec<(u64, u64)>,
}

impl GwOutcome {
    pub fn extinct(&self) -> bool {
        matches!(self.status, GwStatus::Extinct { .. })
    }
}

/// Probability that one type-`parent` particle has exactly `k` offspring (all
/// of the other type).
pub fn progeny_pmf(t: TreeParams, law: &InitLaw, p: Survival, parent: VertexType, k: u64) -> f64 {
    let d = f64::from(t.degree_of(parent) - 1);
    let p = p.get();
    match k {
        0 => 1.0 - p,
        1 => p * (1.0 + d * law.pmf(0)) / (d + 1.0),
        _ => p * d * law.pmf(k - 1) / (d + 1.0),
    }
}

/// `Σ_{k ≤ k_max} progeny_pmf(k)`.
pub fn progeny_total_mass(t: TreeParams, law: &InitLaw, p: Survival, parent: VertexType, k_max: u64) -> f64 {
    (0..=k_max).map(|k| progeny_pmf(t, law, p, parent, k)).sum()
}

fn sum_of_copies<R: Rng>(law: &InitLaw, copies: u64, rng: &mut R) -> u64 {
    if copies == 0 {
        return 0;
    }
    match *law {
        InitLaw::Constant(k) => copies * u64::from(k),
        InitLaw::Bernoulli(q) => Binomial::new(copies, q).expect("valid binomial").sample(rng),
        InitLaw::Poisson(mu) => Poisson::new(mu * copies as f64).expect("valid Poisson").sample(rng) as u64,
        InitLaw::Geometric(_) => (0..copies).map(|_| law.sample(rng)).sum(),
    }
}

/// Offspring of `n` particles of one type, aggregated.
fn generation_offspring<R: Rng>(n: u64, d: u32, law: &InitLaw, p: f64, rng: &mut R) -> u64 {
    if n == 0 {
        return 0;
    }
    let alive = Binomial::new(n, p).expect("valid binomial").sample(rng);
    let back = Binomial::new(alive, 1.0 / f64::from(d + 1)).expect("valid binomial").sample(rng);
    alive + sum_of_copies(law, alive - back, rng)
}

/// Simulates generations until extinction, `max_generations`, or the
/// explosion guard.
pub fn run_multitype_gw(t: TreeParams, law: &InitLaw, p: Survival, max_generations: u64, seed: u64) -> GwOutcome {
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let (d1, d2) = (t.d1(), t.d2());
    let mut state = (0u64, sum_of_copies(law, u64::from(d1) + 2, &mut rng));
    let mut trace = vec![state];
    for generation in 0..=max_generations {
        if state == (0, 0) {
            return GwOutcome { status: GwStatus::Extinct { generation }, population_trace: trace };
        }
        if generation == max_generations || state.0 + state.1 > EXPLOSION_GUARD {
            break;
        }
        // type-1 particles produce type 2 and vice versa
        let next2 = generation_offspring(state.0, d1, law, p.get(), &mut rng);
        let next1 = generation_offspring(state.1, d2, law, p.get(), &mut rng);
        state = (next1, next2);
        trace.push(state);
    }
    GwOutcome { status: GwStatus::Censored, population_trace: trace }
}
