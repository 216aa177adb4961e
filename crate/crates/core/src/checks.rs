//! Named invariant suites behind `frogbi check`.
//!
//! Each suite evaluates a fixed list of invariants and reports one
//! [`CheckRow`] per invariant; randomized suites take an explicit seed.

use serde::{Deserialize, Serialize};

use crate::bounds::{asymptotic_check, f_value, lb_biregular, ub_closed};
use crate::error::Result;
use crate::hitting::{alpha, beta, edge_open_prob, mc_hit_neighbor, HittingPair, Survival, VertexType, MC_STEP_CAP};
use crate::law::InitLaw;
use crate::pathprob::{f_closed, PathOpenQuery, PathOpenTable};
use crate::sim::{progeny_total_mass, run_multitype_gw};
use crate::stats::Estimate;
use crate::tree::TreeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hitting,
    Pathprob,
    CorollaryGrid,
    Asymptotics,
    Gw,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Hitting, Suite::Pathprob, Suite::CorollaryGrid, Suite::Asymptotics, Suite::Gw];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hitting => "hitting",
            Suite::Pathprob => "pathprob",
            Suite::CorollaryGrid => "corollary-grid",
            Suite::Asymptotics => "asymptotics",
            Suite::Gw => "gw",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub invariant: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckRow {
    fn new(suite: Suite, invariant: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { suite: suite.name().into(), invariant: invariant.into(), passed, detail: detail.into() }
    }
}

/// `(d1, d2, p)` points for the hitting-probability Monte Carlo comparison.
pub const HITTING_GRID: [(u32, u32, f64); 6] =
    [(2, 2, 0.5), (2, 3, 0.7), (1, 2, 0.9), (3, 5, 0.6), (2, 4, 0.8), (1, 3, 0.95)];
pub const HITTING_TRIALS: u64 = 100_000;
/// Agreement threshold, in standard errors, for every Monte Carlo check.
pub const SIGMAS: f64 = 4.0;

pub const CLOSED_FORM_QS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 1.0];
/// Fractions of the `p = 1` values `(α(1), β(1))` on `T(2, 3)` forming the
/// `(a, b)` grid of the closed-form comparison.
pub const CLOSED_FORM_FRACTIONS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.95];
pub const CLOSED_FORM_MAX_N: u32 = 15;
pub const CLOSED_FORM_TOL: f64 = 1e-10;

pub const GW_RUNS: u64 = 1_000;
pub const GW_MAX_GENERATIONS: u64 = 100_000;

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckRow>> {
    match suite {
        Suite::Hitting => hitting(seed),
        Suite::Pathprob => pathprob(),
        Suite::CorollaryGrid => corollary_grid(),
        Suite::Asymptotics => asymptotics(),
        Suite::Gw => gw(seed),
    }
}

fn mc_row(suite: Suite, name: String, est: Estimate, exact: f64) -> CheckRow {
    let z = est.z_score(exact);
    CheckRow::new(
        suite,
        name,
        est.within_sigmas(exact, SIGMAS),
        format!("estimate {:.5} ± {:.5}, exact {exact:.5}, z = {z:.2}", est.estimate, est.stderr),
    )
}

fn hitting(seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (i, &(d1, d2, p)) in HITTING_GRID.iter().enumerate() {
        let t = TreeParams::new(d1, d2)?;
        let p = Survival::new(p)?;
        for (from, exact, sym) in [(VertexType::One, alpha(t, p), "alpha"), (VertexType::Two, beta(t, p), "beta")] {
            let stream = seed.wrapping_add(2 * i as u64 + u64::from(from.index()));
            let est = mc_hit_neighbor(t, p, from, HITTING_TRIALS, stream, MC_STEP_CAP);
            rows.push(mc_row(Suite::Hitting, format!("{sym}({d1},{d2},{})", p.get()), est, exact));
        }
    }
    Ok(rows)
}

fn pathprob() -> Result<Vec<CheckRow>> {
    let t = TreeParams::new(2, 3)?;
    let corner = HittingPair::domain_max(t);
    let mut rows = Vec::new();
    for &q in &CLOSED_FORM_QS {
        let mut worst = 0.0f64;
        for &fa in &CLOSED_FORM_FRACTIONS {
            for &fb in &CLOSED_FORM_FRACTIONS {
                let (a, b) = (fa * corner.alpha, fb * corner.beta);
                let mut table = PathOpenTable::new(InitLaw::Bernoulli(q), a, b);
                for n in 1..=CLOSED_FORM_MAX_N {
                    let nu = table.value(PathOpenQuery::new(VertexType::One, VertexType::One, 2 * n)?)?;
                    worst = worst.max((nu - f_closed(n, q, a, b)).abs());
                }
            }
        }
        rows.push(CheckRow::new(
            Suite::Pathprob,
            format!("closed_form(q={q})"),
            worst <= CLOSED_FORM_TOL,
            format!("max |nu - F| = {worst:.3e} over n <= {CLOSED_FORM_MAX_N}"),
        ));
    }

    let mut worst = f64::INFINITY;
    for law in [InitLaw::Constant(1), InitLaw::Bernoulli(0.5), InitLaw::Poisson(1.0)] {
        for &p in &[0.3, 0.6, 0.9] {
            let p = Survival::new(p)?;
            let mut table = PathOpenTable::for_tree(t, law, p);
            for k in 1..=12 {
                for from in [VertexType::One, VertexType::Two] {
                    let to = from.after(k);
                    let nu = table.value(PathOpenQuery::new(from, to, k)?)?;
                    worst = worst.min(nu - edge_open_prob(t, &law, p, from, to, k)?);
                }
            }
        }
    }
    rows.push(CheckRow::new(
        Suite::Pathprob,
        "path_open_dominates_edge_open",
        worst >= -1e-12,
        format!("min (nu - pi) = {worst:.3e}"),
    ));
    Ok(rows)
}

fn corollary_grid() -> Result<Vec<CheckRow>> {
    let mut worst = (f64::INFINITY, 0, 0);
    for d1 in 1..=50 {
        for d2 in 1..=50 {
            if (d1, d2) == (1, 1) {
                continue;
            }
            let t = TreeParams::new(d1, d2)?;
            let f = f_value(t, 1.0, Survival::new(ub_closed(t)?)?);
            if f < worst.0 {
                worst = (f, d1, d2);
            }
        }
    }
    Ok(vec![CheckRow::new(
        Suite::CorollaryGrid,
        "f(ub_closed) >= 0 on 1 <= d1, d2 <= 50",
        worst.0 >= -1e-12,
        format!("min f = {:.3e} at ({}, {})", worst.0, worst.1, worst.2),
    )])
}

fn asymptotics() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for row in asymptotic_check(&[1000, 10_000])? {
        rows.push(CheckRow::new(
            Suite::Asymptotics,
            format!("(lb - 1/2) d in [0.24, 0.26], d = {}", row.d),
            (0.24..=0.26).contains(&row.lb_scaled),
            format!("{:.6}", row.lb_scaled),
        ));
        rows.push(CheckRow::new(
            Suite::Asymptotics,
            format!("(ub_closed - 1/2) d in [0.49, 0.51], d = {}", row.d),
            (0.49..=0.51).contains(&row.ub_scaled),
            format!("{:.6}", row.ub_scaled),
        ));
    }
    Ok(rows)
}

fn gw(seed: u64) -> Result<Vec<CheckRow>> {
    let trees = [(1, 2), (2, 2), (2, 3), (3, 5)];
    let laws = [
        InitLaw::Constant(1),
        InitLaw::Constant(3),
        InitLaw::Bernoulli(0.5),
        InitLaw::Poisson(1.5),
        InitLaw::Geometric(0.4),
    ];
    let mut worst = 0.0f64;
    for &(d1, d2) in &trees {
        let t = TreeParams::new(d1, d2)?;
        for law in &laws {
            for &p in &[0.0, 0.3, 0.6, 0.9, 1.0] {
                let p = Survival::new(p)?;
                for ty in [VertexType::One, VertexType::Two] {
                    worst = worst.max((progeny_total_mass(t, law, p, ty, 400) - 1.0).abs());
                }
            }
        }
    }
    let mut rows =
        vec![CheckRow::new(Suite::Gw, "progeny masses sum to 1", worst <= 1e-12, format!("max deviation {worst:.3e}"))];

    for (d1, d2, law) in [(2, 2, InitLaw::Constant(1)), (2, 3, InitLaw::Poisson(1.0))] {
        let t = TreeParams::new(d1, d2)?;
        let p = Survival::new(0.9 * lb_biregular(t, law.mean())?)?;
        let extinct = (0..GW_RUNS)
            .filter(|&r| run_multitype_gw(t, &law, p, GW_MAX_GENERATIONS, seed.wrapping_add(r)).extinct())
            .count() as u64;
        let frac = extinct as f64 / GW_RUNS as f64;
        rows.push(CheckRow::new(
            Suite::Gw,
            format!("extinct at 0.9 lb on ({d1},{d2}), {law}"),
            frac >= 0.99,
            format!("{extinct}/{GW_RUNS} extinct at p = {:.4}", p.get()),
        ));
    }
    Ok(rows)
}
