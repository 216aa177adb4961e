//! Analytic bounds on the critical probability `p_c(T(d1, d2), η)`.
//!
//! Lower bounds come from dominating branching processes: the single-type
//! comparison on graphs of maximum degree `D + 1` ([`lb_alves`]) and the
//! two-type process whose first-moment matrix is [`MomentMatrix`]
//! ([`lb_biregular`]). Upper bounds come from embedded branching processes
//! whose offspring probability is [`phi_n`](crate::pathprob::phi_n): their
//! roots `p̃_n` ([`ub_root_n`]) converge to the root `p̃` of [`f_value`]
//! ([`ub_root`]), and for `η ≡ 1` the root is dominated by [`ub_closed`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hitting::{HittingPair, Survival};
use crate::law::InitLaw;
use crate::pathprob::ln_phi_n;
use crate::tree::TreeParams;

/// Bisection bracket.
pub const BRACKET: (f64, f64) = (1e-9, 1.0 - 1e-9);
pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: u32 = 200;

fn survival(p: f64) -> Survival {
    Survival::new(p).expect("bisection stays inside [0, 1]")
}

/// `√{(d1+1)(d2+1) / ([d1(Eη+1)+1][d2(Eη+1)+1])}`.
pub fn lb_biregular(t: TreeParams, mean_eta: f64) -> Result<f64> {
    t.require_branching()?;
    check_mean(mean_eta)?;
    let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
    let m = mean_eta + 1.0;
    Ok(((d1 + 1.0) * (d2 + 1.0) / ((d1 * m + 1.0) * (d2 * m + 1.0))).sqrt())
}

/// `(D+1) / (D(Eη+1)+1)` for graphs of maximum degree `D + 1`.
pub fn lb_alves(max_branching: u32, mean_eta: f64) -> f64 {
    let d = f64::from(max_branching);
    (d + 1.0) / (d * (mean_eta + 1.0) + 1.0)
}

fn check_mean(mean_eta: f64) -> Result<()> {
    if mean_eta.is_finite() && mean_eta >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam { name: "mean_eta", reason: format!("{mean_eta} is not a finite mean") })
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam { name: "q", reason: format!("{q} is outside (0, 1]") })
    }
}

/// `f(p) = αβ[1 + q(1-α)][1 + q(1-β)] - 1/(d1 d2)`.
pub fn f_value(t: TreeParams, q: f64, p: Survival) -> f64 {
    let h = HittingPair::at(t, p);
    h.alpha * h.beta * (1.0 + q * (1.0 - h.alpha)) * (1.0 + q * (1.0 - h.beta))
        - 1.0 / (f64::from(t.d1()) * f64::from(t.d2()))
}

/// `f_n(p) = φ_n(p)^(1/n) - 1/(d1 d2)`.
pub fn f_n_value(t: TreeParams, q: f64, n: u32, p: Survival) -> f64 {
    let floor = 1.0 / (f64::from(t.d1()) * f64::from(t.d2()));
    if p.get() == 0.0 {
        return -floor;
    }
    (ln_phi_n(t, q, n, p) / f64::from(n)).exp() - floor
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub root: f64,
    pub iterations: u32,
}

/// Bisection for an increasing function with `f(lo) < 0 < f(hi)`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64, max_iter: u32) -> Result<Root> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while hi - lo > tol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Root { root: 0.5 * (lo + hi), iterations })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam { name: "tol", reason: format!("{tol} is negative") })
    }
}

/// `p̃(d1, d2, q)`, the unique root of [`f_value`] in `(0, 1)`.
pub fn ub_root(t: TreeParams, q: f64, tol: f64) -> Result<Root> {
    t.require_branching()?;
    check_q(q)?;
    check_tol(tol)?;
    bisect(|p| f_value(t, q, survival(p)), BRACKET.0, BRACKET.1, tol, MAX_ITERATIONS)
}

/// `p̃_n(d1, d2, q)`, the root of [`f_n_value`].
pub fn ub_root_n(t: TreeParams, q: f64, n: u32, tol: f64) -> Result<Root> {
    t.require_branching()?;
    check_q(q)?;
    check_tol(tol)?;
    if n == 0 {
        return Err(Error::InvalidParam { name: "n", reason: "must be at least 1".into() });
    }
    bisect(|p| f_n_value(t, q, n, survival(p)), BRACKET.0, BRACKET.1, tol, MAX_ITERATIONS)
}

/// `½ √{(d1+1)(d2+1)/(d1 d2)}`, valid for `η ≡ 1`.
pub fn ub_closed(t: TreeParams) -> Result<f64> {
    t.require_branching()?;
    let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
    Ok(0.5 * ((d1 + 1.0) * (d2 + 1.0) / (d1 * d2)).sqrt())
}

/// Off-diagonal first-moment matrix of the dominating two-type process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentMatrix {
    /// Mean type-2 offspring of a type-1 particle.
    pub m12: f64,
    /// Mean type-1 offspring of a type-2 particle.
    pub m21: f64,
}

impl MomentMatrix {
    pub fn new(t: TreeParams, mean_eta: f64, p: Survival) -> Self {
        let (d1, d2) = (f64::from(t.d1()), f64::from(t.d2()));
        let m = mean_eta + 1.0;
        let p = p.get();
        Self { m12: p / (d1 + 1.0) * (1.0 + d1 * m), m21: p / (d2 + 1.0) * (1.0 + d2 * m) }
    }

    /// Largest eigenvalue of `[[0, m12], [m21, 0]]`.
    pub fn spectral_radius(&self) -> f64 {
        (self.m12 * self.m21).sqrt()
    }
}

pub fn spectral_radius(t: TreeParams, mean_eta: f64, p: Survival) -> f64 {
    MomentMatrix::new(t, mean_eta, p).spectral_radius()
}

/// Truncated mean offspring of the disk-percolation process on `T_D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskSeries {
    pub value: f64,
    /// Upper bound on the neglected tail in both `k` and `i`.
    pub remainder: f64,
}

impl DiskSeries {
    pub fn upper(&self) -> f64 {
        self.value + self.remainder
    }

    /// True when the series certifies a subcritical dominating process.
    pub fn certifies_subcritical(&self) -> bool {
        self.upper() < 1.0
    }
}

/// `E|B_x \ {x}| = Σ_k (D+1) D^(k-1) Σ_i ρ_i [1 - (1 - p^k)^i]`, summed over
/// `k ≤ k_max`, `i ≤ i_max`.
///
/// The remainder uses `1 - (1 - x)^i ≤ i x`: the `k` tail is at most
/// `Eη (D+1)(Dp)^k_max p / (1 - Dp)` and the `i` tail at most
/// `E[η; η > i_max] Σ_{k ≤ k_max} s_k p^k`.
pub fn disk_mean_offspring(d: u32, law: &InitLaw, p: Survival, k_max: u32, i_max: u64) -> Result<DiskSeries> {
    if d < 2 {
        return Err(Error::InvalidParam { name: "D", reason: format!("{d} is below 2") });
    }
    let dd = f64::from(d);
    let p = p.get();
    if p * dd >= 1.0 {
        return Err(Error::InvalidParam { name: "p", reason: format!("{p} is not below 1/D = {}", 1.0 / dd) });
    }
    let rho: Vec<f64> = (1..=i_max).map(|i| law.pmf(i)).collect();
    let mut value = 0.0;
    let mut weighted = 0.0;
    let mut shell = dd + 1.0;
    let mut pk = p;
    for _ in 1..=k_max {
        let log_miss = (-pk).ln_1p();
        let inner: f64 = rho
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0.0)
            .map(|(idx, &r)| r * -((idx as f64 + 1.0) * log_miss).exp_m1())
            .sum();
        value += shell * inner;
        weighted += shell * pk;
        shell *= dd;
        pk *= p;
    }
    let k_tail = law.mean() * (dd + 1.0) * (dd * p).powi(k_max as i32) * p / (1.0 - dd * p);
    let i_tail = law.tail_mean(i_max) * weighted;
    Ok(DiskSeries { value, remainder: k_tail + i_tail })
}

/// All bounds for one tree and initial law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub d1: u32,
    pub d2: u32,
    pub eta: String,
    pub mean_eta: f64,
    pub q: f64,
    pub lb_alves: f64,
    pub lb_biregular: f64,
    pub ub_root: f64,
    pub ub_closed: Option<f64>,
    pub root_iterations: u32,
    pub tol: f64,
}

pub fn bounds_report(t: TreeParams, law: &InitLaw, tol: f64) -> Result<BoundsReport> {
    t.require_branching()?;
    let mean_eta = law.mean();
    let q = law.q();
    let root = ub_root(t, q, tol)?;
    let ub_closed = match law {
        InitLaw::Constant(1) => Some(ub_closed(t)?),
        _ => None,
    };
    Ok(BoundsReport {
        d1: t.d1(),
        d2: t.d2(),
        eta: law.to_string(),
        mean_eta,
        q,
        lb_alves: lb_alves(t.max_branching(), mean_eta),
        lb_biregular: lb_biregular(t, mean_eta)?,
        ub_root: root.root,
        ub_closed,
        root_iterations: root.iterations,
        tol,
    })
}

/// Reference rows `(d1, d2, LB max-degree, LB biregular, UB root)` for `η ≡ 1`.
pub const TABLE1: [(u32, u32, f64, f64, f64); 9] = [
    (1, 2, 0.6000, 0.6325, 0.8588),
    (1, 3, 0.5714, 0.6172, 0.8039),
    (1, 4, 0.5556, 0.6086, 0.7749),
    (2, 2, 0.6000, 0.6000, 0.7500),
    (2, 3, 0.5714, 0.5855, 0.7063),
    (2, 4, 0.5556, 0.5774, 0.6828),
    (3, 100, 0.5025, 0.5359, 0.5771),
    (3, 1000, 0.5002, 0.5347, 0.5743),
    (4, 10000, 0.5000, 0.5271, 0.5572),
];

/// Absolute tolerance for comparing against values given to four decimals.
pub const TABLE1_TOL: f64 = 5e-5;

/// Computes the nine reference rows with `η ≡ 1`.
pub fn table1(tol: f64) -> Result<Vec<BoundsReport>> {
    let one = InitLaw::Constant(1);
    TABLE1.iter().map(|&(d1, d2, ..)| bounds_report(TreeParams::new(d1, d2)?, &one, tol)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub d1: u32,
    pub d2: u32,
    pub column: &'static str,
    pub expected: f64,
    pub computed: f64,
}

/// Cells of `rows` differing from [`TABLE1`] by more than `tol`.
pub fn table1_mismatches(rows: &[BoundsReport], tol: f64) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for (row, &(d1, d2, alves, lb, ub)) in rows.iter().zip(TABLE1.iter()) {
        for (column, expected, computed) in
            [("lb_alves", alves, row.lb_alves), ("lb_biregular", lb, row.lb_biregular), ("ub_root", ub, row.ub_root)]
        {
            // negated so that a NaN cell counts as a mismatch
            if !((computed - expected).abs() <= tol) {
                out.push(Mismatch { d1, d2, column, expected, computed });
            }
        }
    }
    out
}

/// Rounds to four decimals, ties to even.
pub fn round4(x: f64) -> f64 {
    (x * 1e4).round_ties_even() / 1e4
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub d: u32,
    /// `(lb - 1/2) d`, tends to 1/4.
    pub lb_scaled: f64,
    /// `(ub_closed - 1/2) d`, tends to 1/2.
    pub ub_scaled: f64,
}

/// Scaled gaps to 1/2 of the lower and closed-form upper bound on `T(d, d)`
/// with `η ≡ 1`.
pub fn asymptotic_check(ds: &[u32]) -> Result<Vec<AsymptoticRow>> {
    ds.iter()
        .map(|&d| {
            let t = TreeParams::new(d, d)?;
            let scale = f64::from(d);
            Ok(AsymptoticRow {
                d,
                lb_scaled: (lb_biregular(t, 1.0)? - 0.5) * scale,
                ub_scaled: (ub_closed(t)? - 0.5) * scale,
            })
        })
        .collect()
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

    #[test]
    fn lower_bound_examples() {
        assert!((lb_biregular(tp(1, 2), 1.0).unwrap() - 0.6325).abs() < 5e-5);
        assert!((lb_biregular(tp(2, 2), 1.0).unwrap() - 0.6).abs() < 1e-15);
        assert!((lb_biregular(tp(3, 100), 1.0).unwrap() - 0.5359).abs() < 5e-5);
        assert!(lb_biregular(tp(1, 1), 1.0).is_err());
        assert!((lb_alves(2, 1.0) - 0.6).abs() < 1e-15);
        assert!((lb_alves(4, 1.0) - 5.0 / 9.0).abs() < 1e-15);
        assert!((lb_alves(100, 1.0) - 101.0 / 201.0).abs() < 1e-15);
    }

    #[test]
    fn f_examples() {
        let t = tp(2, 2);
        assert!((f_value(t, 1.0, sp(0.0)) + 0.25).abs() < 1e-15);
        assert!(f_value(t, 1.0, sp(0.75)).abs() < 1e-12);
        assert!((f_value(t, 1.0, sp(1.0)) - 0.3125).abs() < 1e-12);
        assert!((f_n_value(t, 1.0, 3, sp(0.0)) + 0.25).abs() < 1e-15);
        assert!((f_n_value(tp(2, 3), 0.7, 200, sp(0.8)) - f_value(tp(2, 3), 0.7, sp(0.8))).abs() < 1e-3);
    }

    #[test]
    fn f_is_increasing() {
        for (d1, d2) in [(1, 2), (2, 2), (3, 100), (4, 10000)] {
            for q in [0.2, 0.6, 1.0] {
                let t = tp(d1, d2);
                let mut prev = f_value(t, q, sp(0.0));
                for i in 1..=2000 {
                    let v = f_value(t, q, sp(f64::from(i) / 2000.0));
                    assert!(v > prev, "({d1},{d2}) q={q} i={i}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn roots() {
        let r = ub_root(tp(2, 2), 1.0, DEFAULT_TOL).unwrap();
        assert!((r.root - 0.75).abs() < 1e-11);
        assert!(r.iterations <= MAX_ITERATIONS);
        assert!((ub_root(tp(1, 2), 1.0, DEFAULT_TOL).unwrap().root - 0.8588).abs() < 5e-5);
        assert!((ub_root(tp(4, 10000), 1.0, DEFAULT_TOL).unwrap().root - 0.5572).abs() < 5e-5);
        assert!(ub_root(tp(1, 1), 1.0, DEFAULT_TOL).is_err());
        assert!(ub_root(tp(2, 2), 0.0, DEFAULT_TOL).is_err());
    }

    #[test]
    fn approximating_roots() {
        let t = tp(2, 2);
        let exact = ub_root(t, 1.0, DEFAULT_TOL).unwrap().root;
        let first = ub_root_n(t, 1.0, 1, DEFAULT_TOL).unwrap().root;
        assert!(first >= exact);
        // 4 φ_1 = 1 at the first root
        let phi = crate::pathprob::phi_n(t, 1.0, 1, sp(first));
        assert!((4.0 * phi - 1.0).abs() < 1e-9);
        let r = ub_root_n(tp(2, 3), 1.0, 200, DEFAULT_TOL).unwrap().root;
        assert!((r - 0.7063).abs() < 1e-3);
        for (d1, d2) in [(1, 3), (2, 4), (3, 100)] {
            let t = tp(d1, d2);
            for q in [0.3, 1.0] {
                let exact = ub_root(t, q, DEFAULT_TOL).unwrap().root;
                for n in [1, 2, 5, 20, 100] {
                    match ub_root_n(t, q, n, DEFAULT_TOL) {
                        Ok(r) => assert!(r.root >= exact - DEFAULT_TOL),
                        // small q: φ_n^(1/n) stays below 1/(d1 d2), the n-th bound is vacuous
                        Err(Error::NoSignChange { f_hi, .. }) => assert!(f_hi < 0.0 && q < 1.0),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn closed_upper_bound() {
        assert!((ub_closed(tp(2, 2)).unwrap() - 0.75).abs() < 1e-15);
        assert!((ub_closed(tp(2, 4)).unwrap() - 0.5 * (15.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!((ub_closed(tp(3, 100)).unwrap() - 0.5 * (404.0f64 / 300.0).sqrt()).abs() < 1e-15);
        assert!(ub_closed(tp(1, 1)).is_err());
    }

    #[test]
    fn swapping_degrees_keeps_root() {
        for (d1, d2) in [(1, 2), (2, 5), (3, 100)] {
            for q in [0.4, 1.0] {
                let a = ub_root(tp(d1, d2), q, DEFAULT_TOL).unwrap().root;
                let b = ub_root(tp(d2, d1), q, DEFAULT_TOL).unwrap().root;
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spectral_examples() {
        let t = tp(2, 2);
        assert_eq!(spectral_radius(t, 1.0, sp(0.0)), 0.0);
        assert!((spectral_radius(t, 1.0, sp(0.5)) - 0.5 * 5.0 / 3.0).abs() < 1e-15);
        let lb = lb_biregular(tp(3, 7), 2.0).unwrap();
        assert!((spectral_radius(tp(3, 7), 2.0, sp(lb)) - 1.0).abs() < 1e-12);
        assert!(spectral_radius(tp(3, 7), 2.0, sp(lb * 0.99)) < 1.0);
    }

    #[test]
    fn disk_series() {
        let one = InitLaw::Constant(1);
        let s = disk_mean_offspring(2, &one, sp(0.2), 60, 200).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        let s = disk_mean_offspring(2, &one, sp(0.0), 60, 200).unwrap();
        assert_eq!(s.value, 0.0);
        let s = disk_mean_offspring(2, &InitLaw::Poisson(1.0), sp(0.1), 60, 200).unwrap();
        assert!(s.certifies_subcritical(), "{s:?}");
        assert!(disk_mean_offspring(2, &one, sp(0.5), 60, 200).is_err());
        assert!(disk_mean_offspring(1, &one, sp(0.1), 60, 200).is_err());
    }

    #[test]
    fn disk_remainder_bounds_the_tail() {
        let law = InitLaw::Geometric(0.5);
        let p = sp(0.15);
        let full = disk_mean_offspring(3, &law, p, 200, 400).unwrap();
        let short = disk_mean_offspring(3, &law, p, 8, 10).unwrap();
        assert!(short.value <= full.value);
        assert!(short.upper() >= full.value);
    }

    #[test]
    fn table_rounding_and_ordering() {
        let rows = table1(DEFAULT_TOL).unwrap();
        assert!(table1_mismatches(&rows, TABLE1_TOL).is_empty());
        for row in &rows {
            assert!(row.lb_alves <= row.lb_biregular + 1e-15);
            assert!(row.lb_biregular <= row.ub_root);
            assert!(row.ub_root <= row.ub_closed.unwrap() + 1e-12);
            assert_eq!(row.lb_alves == row.lb_biregular, row.d1 == row.d2);
        }
        assert_eq!(round4(0.57434494), 0.5743);
        assert_eq!(round4(0.50024988), 0.5002);
        assert_eq!(round4(0.75), 0.75);
    }

    #[test]
    fn asymptotics() {
        let rows = asymptotic_check(&[10, 100, 1000]).unwrap();
        let last = rows[2];
        assert!((0.24..=0.26).contains(&last.lb_scaled));
        assert!((0.49..=0.51).contains(&last.ub_scaled));
        assert!(rows[0].lb_scaled < rows[1].lb_scaled && rows[1].lb_scaled < rows[2].lb_scaled);
    }
}
