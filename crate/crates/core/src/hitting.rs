//! Hitting probabilities of the killed simple random walk on `T(d1, d2)`.
//!
//! A frog survives each step with probability `p` and then jumps to a uniform
//! neighbor. `α(p)` is the probability that a frog started at a type-1 vertex
//! ever visits a fixed type-2 neighbor; `β(p)` is the same for a type-2 start.
//! Conditioning on the first jump gives the system
//!
//! ```text
//! α = p/(d1+1) + d1/(d1+1) · p · α · β
//! β = p/(d2+1) + d2/(d2+1) · p · α · β
//! ```
//!
//! whose root vanishing at `p = 0` is computed in closed form below.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::InitLaw;
use crate::stats::Estimate;
use crate::tree::{TreeParams, VertexAddr};

/// Partition class of a vertex: type 1 at even level, type 2 at odd level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    One,
    Two,
}

impl VertexType {
    pub fn of_level(level: usize) -> Self {
        if level.is_multiple_of(2) {
            Self::One
        } else {
            Self::Two
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::InvalidParam { name: "type", reason: format!("{i} is not 1 or 2") }),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Self::One => Self::Two,
            Self::Two => Self::One,
        }
    }

    /// Type of the vertex at distance `k` from a vertex of this type.
    pub fn after(self, k: u32) -> Self {
        if k.is_multiple_of(2) {
            self
        } else {
            self.other()
        }
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Per-step survival probability `p` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Survival(f64);

impl Survival {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::InvalidParam { name: "p", reason: format!("{p} is outside [0, 1]") })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// The pair `(α, β)` evaluated at one `(t, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HittingPair {
    pub alpha: f64,
    pub beta: f64,
}

impl HittingPair {
    pub fn at(t: TreeParams, p: Survival) -> Self {
        Self { alpha: alpha(t, p), beta: beta(t, p) }
    }

    /// Upper corner of the domain `[0, α(1)] × [0, β(1)]`.
    pub fn domain_max(t: TreeParams) -> Self {
        let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
        Self { alpha: (d2 + 1.0) / (d2 * (d1 + 1.0)), beta: (d1 + 1.0) / (d1 * (d2 + 1.0)) }
    }

    pub fn in_domain(&self, t: TreeParams) -> bool {
        let max = Self::domain_max(t);
        (0.0..=max.alpha).contains(&self.alpha) && (0.0..=max.beta).contains(&self.beta)
    }
}

fn discriminant(t: TreeParams, p: f64) -> f64 {
    let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
    let kappa = (d1 + 1.0) * (d2 + 1.0);
    let p2 = p * p;
    let k2 = kappa * kappa;
    let delta = k2 - 2.0 * kappa * (d1 + d2) * p2 + (d2 - d1) * (d2 - d1) * p2 * p2;
    assert!(delta >= -1e-12 * k2, "negative discriminant {delta} for {t} at p = {p}");
    delta.max(0.0)
}

/// `α(p)`, the probability that a type-1 frog ever visits a given neighbor.
pub fn alpha(t: TreeParams, p: Survival) -> f64 {
    let p = p.get();
    if p == 0.0 {
        return 0.0;
    }
    let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
    let kappa = (d1 + 1.0) * (d2 + 1.0);
    // (κ + p²(d2−d1) − √Δ) / (2 d2 (d1+1) p), multiplied through by the
    // conjugate so that small p does not cancel.
    2.0 * (d2 + 1.0) * p / (kappa + p * p * (d2 - d1) + discriminant(t, p).sqrt())
}

/// `β(p)`, the type-2 counterpart of [`alpha`].
pub fn beta(t: TreeParams, p: Survival) -> f64 {
    alpha(t.swapped(), p)
}

/// Residuals of the two first-jump equations at `h`.
pub fn system_residuals(t: TreeParams, p: Survival, h: HittingPair) -> (f64, f64) {
    let p = p.get();
    let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
    let ab = h.alpha * h.beta;
    let r1 = h.alpha - (p / (d1 + 1.0) + d1 / (d1 + 1.0) * p * ab);
    let r2 = h.beta - (p / (d2 + 1.0) + d2 / (d2 + 1.0) * p * ab);
    (r1, r2)
}

/// Half-length `n` of a distance: `k = 2n` or `k = 2n - 1`.
pub(crate) fn half_length(i: VertexType, j: VertexType, k: u32) -> Result<u32> {
    let odd = k % 2 == 1;
    if k == 0 || odd == (i == j) {
        return Err(Error::ParityMismatch { i: i.index(), j: j.index(), k });
    }
    Ok(k.div_ceil(2))
}

/// Probability that a single frog started at a type-`i` vertex ever visits a
/// type-`j` vertex at distance `k`, given hitting pair `(a, b)`.
pub(crate) fn single_frog_reach(a: f64, b: f64, i: VertexType, j: VertexType, n: u32) -> f64 {
    let n = n as i32;
    match (i, j) {
        (VertexType::One, VertexType::Two) => a.powi(n) * b.powi(n - 1),
        (VertexType::Two, VertexType::One) => a.powi(n - 1) * b.powi(n),
        _ => a.powi(n) * b.powi(n),
    }
}

/// `π_η(i, j, k)` for an arbitrary pair `(a, b)` in place of `(α, β)`.
pub fn edge_open_with(law: &InitLaw, a: f64, b: f64, i: VertexType, j: VertexType, k: u32) -> Result<f64> {
    let n = half_length(i, j, k)?;
    Ok(law.hit_any(single_frog_reach(a, b, i, j, n)))
}

/// `π_η(i, j, k)`: probability that some frog initially at a type-`i` vertex
/// `x` ever visits a fixed type-`j` vertex at distance `k` from `x`.
pub fn edge_open_prob(t: TreeParams, law: &InitLaw, p: Survival, i: VertexType, j: VertexType, k: u32) -> Result<f64> {
    let h = HittingPair::at(t, p);
    edge_open_with(law, h.alpha, h.beta, i, j, k)
}

/// Step cap for walks that would otherwise never terminate at `p = 1`.
pub const MC_STEP_CAP: u64 = 1_000_000;

/// Monte Carlo estimate of the neighbor hitting probability.
///
/// Each trial runs a killed walk from a vertex of type `from` until it visits
/// a designated neighbor, dies, or exhausts `step_cap` jumps (counted as a
/// miss). At `p = 1` the cap biases the estimate downwards.
pub fn mc_hit_neighbor(
    t: TreeParams,
    p: Survival,
    from: VertexType,
    trials: u64,
    seed: u64,
    step_cap: u64,
) -> Estimate {
    let (start, target) = match from {
        VertexType::One => (VertexAddr::root(), VertexAddr::root().child(0)),
        VertexType::Two => (VertexAddr::root().child(0), VertexAddr::root()),
    };
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let p = p.get();
    let mut hits = 0;
    for _ in 0..trials {
        let mut pos = start.clone();
        for _ in 0..step_cap {
            if rng.random::<f64>() >= p {
                break;
            }
            pos.step_random(t, &mut rng);
            if pos == target {
                hits += 1;
                break;
            }
        }
    }
    Estimate::from_counts(hits, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(d1: u32, d2: u32) -> TreeParams {
        TreeParams::new(d1, d2).unwrap()
    }

    fn sp(p: f64) -> Survival {
        Survival::new(p).unwrap()
    }

    /// Iterates the first-jump system from (0, 0); the iteration is monotone
    /// and converges to the minimal solution.
    fn fixed_point(t: TreeParams, p: f64) -> (f64, f64) {
        let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
        let (mut a, mut b) = (0.0, 0.0);
        for _ in 0..200_000 {
            let na = p / (d1 + 1.0) + d1 / (d1 + 1.0) * p * a * b;
            let nb = p / (d2 + 1.0) + d2 / (d2 + 1.0) * p * a * b;
            if (na - a).abs() < 1e-16 && (nb - b).abs() < 1e-16 {
                break;
            }
            a = na;
            b = nb;
        }
        (a, b)
    }

    #[test]
    fn regular_tree_at_one() {
        assert!((alpha(tp(2, 2), sp(1.0)) - 0.5).abs() < 1e-12);
        for d in 1..10 {
            assert!((alpha(tp(d, d), sp(1.0)) - 1.0 / f64::from(d)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_survival() {
        assert_eq!(alpha(tp(3, 5), sp(0.0)), 0.0);
        assert_eq!(beta(tp(3, 5), sp(0.0)), 0.0);
    }

    #[test]
    fn integer_line() {
        for p in [0.05, 0.3, 0.5, 0.8, 0.99] {
            let expect = (1.0 - (1.0f64 - p * p).sqrt()) / p;
            assert!((alpha(tp(1, 1), sp(p)) - expect).abs() < 1e-12);
            let (fa, _) = fixed_point(tp(1, 1), p);
            assert!((fa - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_matches_fixed_point() {
        for (d1, d2) in [(2, 4), (1, 3), (5, 2)] {
            for p in [0.2, 0.7, 0.95] {
                let (fa, fb) = fixed_point(tp(d1, d2), p);
                let h = HittingPair::at(tp(d1, d2), sp(p));
                assert!((h.alpha - fa).abs() < 1e-10);
                assert!((h.beta - fb).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn beta_examples() {
        assert!((beta(tp(1, 2), sp(1.0)) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(beta(tp(2, 4), sp(0.7)), alpha(tp(4, 2), sp(0.7)));
    }

    #[test]
    fn residual_examples() {
        let h = HittingPair::at(tp(2, 2), sp(0.75));
        let (r1, r2) = system_residuals(tp(2, 2), sp(0.75), h);
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);

        let h = HittingPair { alpha: 5.0 / 12.0, beta: 3.0 / 10.0 };
        let (r1, r2) = system_residuals(tp(2, 4), sp(1.0), h);
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);

        let (r1, r2) = system_residuals(tp(2, 2), sp(0.5), HittingPair { alpha: 0.0, beta: 0.0 });
        assert!((r1 + 1.0 / 6.0).abs() < 1e-15 && (r2 + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_dominates_beta_when_d1_le_d2() {
        for d1 in 1..8 {
            for d2 in d1..12 {
                for i in 0..=20 {
                    let p = sp(f64::from(i) / 20.0);
                    assert!(alpha(tp(d1, d2), p) >= beta(tp(d1, d2), p) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn monotone_in_p() {
        for (d1, d2) in [(1, 1), (2, 3), (3, 100)] {
            let t = tp(d1, d2);
            let mut prev = HittingPair { alpha: 0.0, beta: 0.0 };
            for i in 1..=1000 {
                let h = HittingPair::at(t, sp(f64::from(i) / 1000.0));
                assert!(h.alpha > prev.alpha && h.beta > prev.beta);
                assert!(h.in_domain(t));
                prev = h;
            }
        }
    }

    #[test]
    fn edge_open_examples() {
        let t = tp(2, 3);
        let p = sp(0.8);
        let h = HittingPair::at(t, p);
        let one = InitLaw::Constant(1);
        let (t1, t2) = (VertexType::One, VertexType::Two);
        assert!((edge_open_prob(t, &one, p, t1, t2, 1).unwrap() - h.alpha).abs() < 1e-15);
        for n in 1..6 {
            let v = edge_open_prob(t, &one, p, t1, t1, 2 * n).unwrap();
            assert!((v - (h.alpha * h.beta).powi(n as i32)).abs() < 1e-15);
            // the even edge factorizes into an odd leg and one type-2 step
            let odd = edge_open_prob(t, &one, p, t1, t2, 2 * n - 1).unwrap();
            let back = edge_open_prob(t, &one, p, t2, t1, 1).unwrap();
            assert!((v - odd * back).abs() < 1e-15);
        }
        let bern = InitLaw::Bernoulli(0.35);
        let v = edge_open_prob(t, &bern, p, t2, t2, 2).unwrap();
        assert!((v - 0.35 * h.alpha * h.beta).abs() < 1e-15);
    }

    #[test]
    fn edge_open_parity() {
        let t = tp(2, 2);
        let one = InitLaw::Constant(1);
        let (t1, t2) = (VertexType::One, VertexType::Two);
        assert!(edge_open_prob(t, &one, sp(0.5), t1, t2, 2).is_err());
        assert!(edge_open_prob(t, &one, sp(0.5), t1, t1, 3).is_err());
        assert!(edge_open_prob(t, &one, sp(0.5), t1, t1, 0).is_err());
    }

    #[test]
    fn mc_zero_survival_never_hits() {
        let e = mc_hit_neighbor(tp(2, 2), sp(0.0), VertexType::One, 1000, 3, MC_STEP_CAP);
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn mc_is_deterministic() {
        let a = mc_hit_neighbor(tp(2, 3), sp(0.6), VertexType::Two, 5000, 9, MC_STEP_CAP);
        let b = mc_hit_neighbor(tp(2, 3), sp(0.6), VertexType::Two, 5000, 9, MC_STEP_CAP);
        assert_eq!(a, b);
    }

    #[test]
    fn mc_at_full_survival_is_one_sided() {
        let t = tp(2, 2);
        let e = mc_hit_neighbor(t, sp(1.0), VertexType::One, 2000, 5, 10_000);
        let exact = alpha(t, sp(1.0));
        assert!(e.estimate <= exact + 4.0 * e.stderr);
        assert!(e.estimate > exact - 0.05);
    }
}
