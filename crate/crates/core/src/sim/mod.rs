//! Seeded Monte Carlo simulation of the frog model with death.
//!
//! Time runs in discrete steps. At every instant each present frog first
//! decides whether it survives (probability `p`); survivors then jump to a
//! uniform neighbor. A frog arriving at a vertex nobody has visited before
//! wakes the `η` frogs sleeping there; they decide and jump from then on.
//!
//! All randomness is keyed by identity (see [`rng`]): the frog count of a
//! vertex depends only on (seed, replica, vertex) and the `j`-th survival
//! uniform and jump of a frog only on (seed, replica, vertex, frog, j). A frog
//! survives its `j`-th decision when its `j`-th uniform is below `p`, so one
//! replica realized at several values of `p` is a monotone coupling.

pub mod disk;
pub mod gw;
pub mod rng;

use rand::Rng;
use rand_pcg::Pcg64Mcg;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hitting::Survival;
use crate::law::InitLaw;
use crate::stats::{wilson, Z95};
use crate::tree::{LazyTree, NodeId, TreeParams};

pub use disk::{mc_range_vs_disk, RangeDiskReport};
pub use gw::{progeny_pmf, progeny_total_mass, run_multitype_gw, GwOutcome, GwStatus};

pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_AWAKE_CAP: u64 = 100_000;
/// Hard cap on activated vertices in one replica.
pub const ACTIVATED_LIMIT: usize = 10_000_000;
/// Hard cap on vertices materialized by walking frogs in one replica.
pub const MATERIALIZED_LIMIT: usize = 30_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub tree: TreeParams,
    pub law: InitLaw,
    pub p: Survival,
    pub horizon: u64,
    /// Censored survival is declared once more than this many frogs have
    /// been awake.
    pub awake_cap: u64,
    pub seed: u64,
    pub replica_index: u64,
}

impl SimConfig {
    pub fn new(tree: TreeParams, law: InitLaw, p: Survival) -> Self {
        Self { tree, law, p, horizon: DEFAULT_HORIZON, awake_cap: DEFAULT_AWAKE_CAP, seed: 0, replica_index: 0 }
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_awake_cap(mut self, cap: u64) -> Self {
        self.awake_cap = cap;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_p(mut self, p: Survival) -> Self {
        self.p = p;
        self
    }

    pub fn with_replica(mut self, replica_index: u64) -> Self {
        self.replica_index = replica_index;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParam { name: "horizon", reason: "must be at least 1".into() });
        }
        if self.awake_cap == 0 {
            return Err(Error::InvalidParam { name: "awake_cap", reason: "must be at least 1".into() });
        }
        self.law.validated().map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CensorReason {
    Horizon,
    AwakeCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimStatus {
    Extinct { at_time: u64 },
    CensoredSurvival { reason: CensorReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub status: SimStatus,
    /// Largest number of simultaneously awake frogs.
    pub max_awake: u64,
    pub vertices_activated: u64,
    /// Frogs ever woken, root frogs included.
    pub frogs_awakened: u64,
    /// Last time step reached.
    pub final_time: u64,
}

impl SimOutcome {
    pub fn survived(&self) -> bool {
        matches!(self.status, SimStatus::CensoredSurvival { .. })
    }
}

struct Frog {
    at: NodeId,
    rng: Pcg64Mcg,
}

struct Replica {
    tree: LazyTree,
    visited: Vec<bool>,
    law: InitLaw,
    p: f64,
    activated: usize,
}

impl Replica {
    fn is_visited(&self, id: NodeId) -> bool {
        self.visited.get(id as usize).copied().unwrap_or(false)
    }

    /// Marks `id` visited and pushes its sleeping frogs. Returns how many woke.
    fn activate(&mut self, id: NodeId, into: &mut Vec<Frog>) -> Result<u64> {
        let idx = id as usize;
        if self.visited.len() <= idx {
            self.visited.resize(self.tree.len().max(idx + 1), false);
        }
        self.visited[idx] = true;
        self.activated += 1;
        if self.activated > ACTIVATED_LIMIT {
            return Err(Error::ResourceLimit { what: "activated vertices", limit: ACTIVATED_LIMIT });
        }
        let key = self.tree.key(id);
        let count = self.law.sample(&mut rng::vertex_stream(key));
        into.extend((0..count).map(|k| Frog { at: id, rng: rng::frog_stream(key, k) }));
        Ok(count)
    }

    fn survives(&self, frog: &mut Frog) -> bool {
        frog.rng.random::<f64>() < self.p
    }
}

/// Runs one replica of the frog model.
pub fn run_frog(config: &SimConfig) -> Result<SimOutcome> {
    config.validate()?;
    let key = rng::replica_key(config.seed, config.replica_index);
    let mut rep = Replica {
        tree: LazyTree::new(config.tree, key, MATERIALIZED_LIMIT),
        visited: Vec::new(),
        law: config.law,
        p: config.p.get(),
        activated: 0,
    };

    let mut present = Vec::new();
    let mut awakened = rep.activate(LazyTree::ROOT, &mut present)?;
    let mut awake: Vec<Frog> = present.into_iter().filter_map(|mut f| rep.survives(&mut f).then_some(f)).collect();
    let mut max_awake = awake.len() as u64;

    let finish = |status, max_awake, rep: &Replica, awakened, t| SimOutcome {
        status,
        max_awake,
        vertices_activated: rep.activated as u64,
        frogs_awakened: awakened,
        final_time: t,
    };

    let mut newborn = Vec::new();
    let mut t = 0u64;
    loop {
        if awakened > config.awake_cap {
            let status = SimStatus::CensoredSurvival { reason: CensorReason::AwakeCap };
            return Ok(finish(status, max_awake, &rep, awakened, t));
        }
        if awake.is_empty() {
            return Ok(finish(SimStatus::Extinct { at_time: t }, max_awake, &rep, awakened, t));
        }
        if t == config.horizon {
            let status = SimStatus::CensoredSurvival { reason: CensorReason::Horizon };
            return Ok(finish(status, max_awake, &rep, awakened, t));
        }
        t += 1;

        let before = awake.len() as u64;
        newborn.clear();
        let mut woke = 0;
        for frog in awake.iter_mut() {
            let j = frog.rng.random_range(0..rep.tree.degree(frog.at));
            frog.at = rep.tree.neighbor(frog.at, j)?;
            if !rep.is_visited(frog.at) {
                woke += rep.activate(frog.at, &mut newborn)?;
            }
        }
        awake.append(&mut newborn);
        let candidates = awake.len();
        awake.retain_mut(|f| rep.survives(f));
        let deaths = (candidates - awake.len()) as u64;
        assert_eq!(awake.len() as u64, before + woke - deaths, "frog count conservation at t = {t}");
        awakened += woke;
        max_awake = max_awake.max(awake.len() as u64);
    }
}

/// Survival-fraction estimate at one `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub replicas: u64,
    pub survived: u64,
    pub fraction: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl SweepPoint {
    fn from_counts(p: f64, survived: u64, replicas: u64) -> Self {
        let (ci_lo, ci_hi) = wilson(survived, replicas, Z95);
        Self { p, replicas, survived, fraction: survived as f64 / replicas.max(1) as f64, ci_lo, ci_hi }
    }
}

fn check_replicas(replicas: u64) -> Result<()> {
    if replicas == 0 {
        Err(Error::InvalidParam { name: "replicas", reason: "must be at least 1".into() })
    } else {
        Ok(())
    }
}

/// Fraction of `replicas` replicas that reach censored survival at `p`.
/// Replica `r` uses substream `(seed, r)`; results are aggregated in replica
/// order and do not depend on the thread count.
pub fn estimate_survival(template: &SimConfig, p: Survival, replicas: u64) -> Result<SweepPoint> {
    check_replicas(replicas)?;
    let outcomes: Vec<bool> = (0..replicas)
        .into_par_iter()
        .map(|r| run_frog(&template.with_p(p).with_replica(r)).map(|o| o.survived()))
        .collect::<Result<_>>()?;
    let survived = outcomes.iter().filter(|&&s| s).count() as u64;
    Ok(SweepPoint::from_counts(p.get(), survived, replicas))
}

/// Offset between the seeds of consecutive grid points in an uncoupled sweep.
pub const UNCOUPLED_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Survival curve over an ascending grid.
///
/// With `coupled`, replica `r` is the same realization at every grid point
/// and its survival indicator must be nondecreasing along the grid; a
/// violation is reported as [`Error::CouplingViolation`]. Without it, grid
/// point `i` uses seed `seed + i · UNCOUPLED_SEED_STRIDE`.
pub fn sweep(template: &SimConfig, p_grid: &[f64], replicas: u64, coupled: bool) -> Result<Vec<SweepPoint>> {
    check_replicas(replicas)?;
    if p_grid.is_empty() {
        return Err(Error::InvalidParam { name: "p_grid", reason: "is empty".into() });
    }
    if p_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParam { name: "p_grid", reason: "must be sorted ascending".into() });
    }
    let grid: Vec<Survival> = p_grid.iter().map(|&p| Survival::new(p)).collect::<Result<_>>()?;

    if !coupled {
        return grid
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let seed = template.seed.wrapping_add((i as u64).wrapping_mul(UNCOUPLED_SEED_STRIDE));
                estimate_survival(&template.with_seed(seed), p, replicas)
            })
            .collect();
    }

    let indicators: Vec<Vec<bool>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let row = grid
                .iter()
                .map(|&p| run_frog(&template.with_p(p).with_replica(r)).map(|o| o.survived()))
                .collect::<Result<Vec<bool>>>()?;
            if let Some(w) = row.windows(2).position(|w| w[0] && !w[1]) {
                return Err(Error::CouplingViolation { replica: r, p: p_grid[w + 1] });
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let survived = indicators.iter().filter(|row| row[i]).count() as u64;
            SweepPoint::from_counts(p.get(), survived, replicas)
        })
        .collect())
}
