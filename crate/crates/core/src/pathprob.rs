//! Path-open probabilities `ν_η(i, j, k)`.
//!
//! Fix the geodesic `x_0 ≺ x_1 ≺ … ≺ x_k`. The path is open when the frogs of
//! `x_0` reach `x_k` directly, or reach exactly `x_0..x_l` for some `l < k`
//! and the path from `x_l` is open. On a tree the vertices of the path visited
//! from `x_0` always form a prefix, which makes the decomposition disjoint and
//! yields four mutually recursive families
//!
//! - `K_n  = ν(1, 2, 2n-1)`, `F_n  = ν(1, 1, 2n)`,
//! - `K*_n = ν(2, 1, 2n-1)`, `F*_n = ν(2, 2, 2n)`,
//!
//! all functions of the hitting pair `(a, b) = (α, β)` and the pgf of `η`.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use crate::error::{Error, Result};
use crate::hitting::{half_length, single_frog_reach, HittingPair, Survival, VertexType};
use crate::law::InitLaw;
use crate::stats::Estimate;
use crate::tree::TreeParams;

pub const DEFAULT_K_MAX: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathOpenQuery {
    pub from: VertexType,
    pub to: VertexType,
    pub k: u32,
}

impl PathOpenQuery {
    pub fn new(from: VertexType, to: VertexType, k: u32) -> Result<Self> {
        half_length(from, to, k)?;
        Ok(Self { from, to, k })
    }

    /// `n` with `k = 2n` or `k = 2n - 1`.
    pub fn n(&self) -> u32 {
        self.k.div_ceil(2)
    }
}

/// Memoized evaluation of the four families for one `(η, a, b)`.
#[derive(Debug, Clone)]
pub struct PathOpenTable {
    law: InitLaw,
    a: f64,
    b: f64,
    k_max: u32,
    // index 0 unused so that family[n] is the n-th term
    k: Vec<f64>,
    k_star: Vec<f64>,
    f: Vec<f64>,
    f_star: Vec<f64>,
}

impl PathOpenTable {
    pub fn new(law: InitLaw, a: f64, b: f64) -> Self {
        Self::with_limit(law, a, b, DEFAULT_K_MAX)
    }

    pub fn with_limit(law: InitLaw, a: f64, b: f64, k_max: u32) -> Self {
        Self { law, a, b, k_max, k: vec![0.0], k_star: vec![0.0], f: vec![0.0], f_star: vec![0.0] }
    }

    pub fn for_tree(t: TreeParams, law: InitLaw, p: Survival) -> Self {
        let h = HittingPair::at(t, p);
        Self::new(law, h.alpha, h.beta)
    }

    fn edge(&self, i: VertexType, j: VertexType, n: u32) -> f64 {
        self.law.hit_any(single_frog_reach(self.a, self.b, i, j, n))
    }

    fn extend_to(&mut self, n_max: usize) {
        use VertexType::{One, Two};
        while self.k.len() <= n_max {
            let n = self.k.len();
            let nu = n as u32;
            let even = |s: &Self, l: usize| s.edge(One, One, l as u32);
            let odd1 = |s: &Self, l: usize| s.edge(One, Two, l as u32);
            let odd2 = |s: &Self, l: usize| s.edge(Two, One, l as u32);

            let mut k = self.edge(One, Two, nu);
            let mut k_star = self.edge(Two, One, nu);
            for l in 1..n {
                k += (even(self, l) - odd1(self, l + 1)) * self.k[n - l];
                k += (odd1(self, l) - even(self, l)) * self.f_star[n - l];
                k_star += (even(self, l) - odd2(self, l + 1)) * self.k_star[n - l];
                k_star += (odd2(self, l) - even(self, l)) * self.f[n - l];
            }
            self.k.push(k);
            self.k_star.push(k_star);

            let mut f = self.edge(One, One, nu);
            let mut f_star = f;
            for l in 1..n {
                f += (even(self, l) - odd1(self, l + 1)) * self.f[n - l];
                f_star += (even(self, l) - odd2(self, l + 1)) * self.f_star[n - l];
            }
            for l in 1..=n {
                f += (odd1(self, l) - even(self, l)) * self.k_star[n + 1 - l];
                f_star += (odd2(self, l) - even(self, l)) * self.k[n + 1 - l];
            }
            self.f.push(f);
            self.f_star.push(f_star);
        }
    }

    pub fn value(&mut self, q: PathOpenQuery) -> Result<f64> {
        if q.k > self.k_max {
            return Err(Error::DepthLimit { k: q.k, limit: self.k_max });
        }
        let n = q.n() as usize;
        self.extend_to(n);
        Ok(match (q.from, q.to) {
            (VertexType::One, VertexType::Two) => self.k[n],
            (VertexType::Two, VertexType::One) => self.k_star[n],
            (VertexType::One, VertexType::One) => self.f[n],
            (VertexType::Two, VertexType::Two) => self.f_star[n],
        })
    }
}

/// `ν_η(i, j, k)` on `T(d1, d2)` at survival `p`.
pub fn nu(query: PathOpenQuery, t: TreeParams, law: InitLaw, p: Survival) -> Result<f64> {
    PathOpenTable::for_tree(t, law, p).value(query)
}

/// Closed form of `F_n` for `η ~ Bernoulli(q)`:
/// `q [ab(1 + q(1-b))]^n [1 + q(1-a)]^(n-1)`.
pub fn f_closed(n: u32, q: f64, a: f64, b: f64) -> f64 {
    let n = n as i32;
    q * (a * b * (1.0 + q * (1.0 - b))).powi(n) * (1.0 + q * (1.0 - a)).powi(n - 1)
}

/// `φ_n(p) = F_n^(q)(α(p), β(p))`, the per-site offspring probability of the
/// `n`-th embedded branching process.
pub fn phi_n(t: TreeParams, q: f64, n: u32, p: Survival) -> f64 {
    let h = HittingPair::at(t, p);
    f_closed(n, q, h.alpha, h.beta)
}

/// `ln φ_n(p)`, finite for every `p > 0` even when `φ_n` underflows.
pub fn ln_phi_n(t: TreeParams, q: f64, n: u32, p: Survival) -> f64 {
    let h = HittingPair::at(t, p);
    let n = f64::from(n);
    q.ln() + n * (h.alpha * h.beta * (1.0 + q * (1.0 - h.beta))).ln() + (n - 1.0) * (1.0 + q * (1.0 - h.alpha)).ln()
}

/// Farthest index along the path `x_0, x_1, …` reached by a killed walk from
/// `x_start`, capped at `limit`.
///
/// The path is the all-zero branch: `x_m` has address `[0; base_level + m]`.
/// The walk keeps its full address and the number of nonzero entries in it,
/// so it is on the path exactly when that count is zero.
fn walk_reach<R: Rng>(t: TreeParams, p: f64, base_level: usize, start: usize, limit: usize, rng: &mut R) -> usize {
    let mut path = vec![0u32; base_level + start];
    let mut nonzero = 0usize;
    let mut best = start;
    loop {
        if rng.random::<f64>() >= p {
            return best;
        }
        let level = path.len();
        let deg = t.children_at(level) + u32::from(level > 0);
        let j = rng.random_range(0..deg);
        if level > 0 && j == 0 {
            if path.pop() != Some(0) {
                nonzero -= 1;
            }
            continue;
        }
        let idx = if level > 0 { j - 1 } else { j };
        path.push(idx);
        if idx != 0 {
            nonzero += 1;
        } else if nonzero == 0 && path.len() > base_level {
            best = best.max(path.len() - base_level);
            if best >= limit {
                return best;
            }
        }
    }
}

/// Monte Carlo estimate of `ν_η(i, j, k)`.
///
/// Each trial samples `η` at `x_0..x_{k-1}`, runs every frog's killed walk on
/// the full tree, records how far along the path each vertex's frogs reach,
/// and evaluates the path-open event by backward induction on those reaches.
pub fn mc_path_open(
    t: TreeParams,
    law: InitLaw,
    p: Survival,
    query: PathOpenQuery,
    trials: u64,
    seed: u64,
) -> Estimate {
    let k = query.k as usize;
    let base_level = match query.from {
        VertexType::One => 0,
        VertexType::Two => 1,
    };
    let p = p.get();
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let mut reach = vec![0usize; k];
    let mut open = vec![false; k + 1];
    let mut hits = 0;
    for _ in 0..trials {
        for (l, r) in reach.iter_mut().enumerate() {
            let frogs = law.sample(&mut rng);
            *r = l;
            for _ in 0..frogs {
                let got = walk_reach(t, p, base_level, l, k, &mut rng);
                *r = (*r).max(got);
                if *r >= k {
                    break;
                }
            }
        }
        open[k] = true;
        for l in (0..k).rev() {
            let r = reach[l];
            open[l] = r >= k || (r > l && open[r]);
        }
        hits += u64::from(open[0]);
    }
    Estimate::from_counts(hits, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::edge_open_prob;

    const T1: VertexType = VertexType::One;
    const T2: VertexType = VertexType::Two;

    fn tp(d1: u32, d2: u32) -> TreeParams {
        TreeParams::new(d1, d2).unwrap()
    }

    fn sp(p: f64) -> Survival {
        Survival::new(p).unwrap()
    }

    fn q(i: VertexType, j: VertexType, k: u32) -> PathOpenQuery {
        PathOpenQuery::new(i, j, k).unwrap()
    }

    #[test]
    fn first_step_is_edge_open() {
        let t = tp(2, 3);
        let law = InitLaw::Poisson(1.2);
        let v = nu(q(T1, T2, 1), t, law, sp(0.7)).unwrap();
        let a = HittingPair::at(t, sp(0.7)).alpha;
        assert!((v - (1.0 - law.pgf(1.0 - a))).abs() < 1e-15);
    }

    #[test]
    fn single_frog_matches_closed_form() {
        let t = tp(2, 3);
        let h = HittingPair::at(t, sp(0.85));
        let mut table = PathOpenTable::new(InitLaw::Constant(1), h.alpha, h.beta);
        for n in 1..12 {
            let v = table.value(q(T1, T1, 2 * n)).unwrap();
            assert!((v - f_closed(n, 1.0, h.alpha, h.beta)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn forced_pair_bernoulli() {
        let mut table = PathOpenTable::new(InitLaw::Bernoulli(0.5), 0.4, 0.3);
        let v = table.value(q(T1, T1, 6)).unwrap();
        assert!((v - f_closed(3, 0.5, 0.4, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_edge_cases() {
        assert!((f_closed(1, 0.6, 0.4, 0.3) - 0.6 * 0.4 * 0.3 * (1.0 + 0.6 * 0.7)).abs() < 1e-15);
        for n in 1..5 {
            assert_eq!(f_closed(n, 0.3, 0.0, 0.2), 0.0);
            assert_eq!(f_closed(n, 0.3, 0.2, 0.0), 0.0);
        }
    }

    #[test]
    fn closed_form_recurrence() {
        for &qq in &[0.1, 0.5, 1.0] {
            for &(a, b) in &[(0.1, 0.2), (0.4, 0.37)] {
                for n in 1..20 {
                    let lhs = f_closed(n + 1, qq, a, b);
                    let rhs = a * b * (1.0 + qq * (1.0 - a)) * (1.0 + qq * (1.0 - b)) * f_closed(n, qq, a, b);
                    assert!((lhs - rhs).abs() <= 1e-15 * lhs.abs());
                }
            }
        }
    }

    #[test]
    fn phi_n_examples() {
        let t = tp(2, 2);
        for n in 1..5 {
            assert_eq!(phi_n(t, 0.4, n, sp(0.0)), 0.0);
        }
        let h = HittingPair::at(t, sp(0.75));
        let expect = h.alpha * h.beta * (2.0 - h.beta);
        assert!((phi_n(t, 1.0, 1, sp(0.75)) - expect).abs() < 1e-15);
        assert!((phi_n(t, 0.7, 3, sp(0.6)).ln() - ln_phi_n(t, 0.7, 3, sp(0.6))).abs() < 1e-12);
    }

    #[test]
    fn depth_limit() {
        let mut table = PathOpenTable::with_limit(InitLaw::Constant(1), 0.3, 0.3, 8);
        assert!(table.value(q(T1, T1, 8)).is_ok());
        assert!(matches!(table.value(q(T1, T2, 9)), Err(Error::DepthLimit { .. })));
        assert!(PathOpenQuery::new(T1, T2, 4).is_err());
    }

    #[test]
    fn path_open_dominates_edge_open() {
        let t = tp(2, 3);
        for law in [InitLaw::Poisson(1.0), InitLaw::Geometric(0.4), InitLaw::Bernoulli(0.6)] {
            for pi in 1..10 {
                let p = sp(f64::from(pi) / 10.0);
                let mut table = PathOpenTable::for_tree(t, law, p);
                for k in 1..12u32 {
                    for i in [T1, T2] {
                        let j = i.after(k);
                        let v = table.value(q(i, j, k)).unwrap();
                        let e = edge_open_prob(t, &law, p, i, j, k).unwrap();
                        assert!(v >= e - 1e-15 && v <= 1.0 + 1e-15, "{law} p={p:?} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn nondecreasing_in_p() {
        let t = tp(2, 2);
        let law = InitLaw::Poisson(0.8);
        let mut prev = [0.0f64; 8];
        for pi in 0..=50 {
            let p = sp(f64::from(pi) / 50.0);
            let mut table = PathOpenTable::for_tree(t, law, p);
            for (slot, k) in prev.iter_mut().zip(1..=8u32) {
                let v = table.value(q(T1, T1.after(k), k)).unwrap();
                assert!(v >= *slot - 1e-15);
                *slot = v;
            }
        }
    }

    #[test]
    fn mc_examples() {
        let t = tp(2, 2);
        let one = InitLaw::Constant(1);
        let e = mc_path_open(t, one, sp(0.0), q(T1, T1, 4), 1000, 1);
        assert_eq!(e.estimate, 0.0);

        let p = sp(0.8);
        let e = mc_path_open(t, one, p, q(T1, T2, 1), 40_000, 2);
        assert!(e.within_sigmas(HittingPair::at(t, p).alpha, 4.0));

        let e = mc_path_open(t, one, p, q(T2, T2, 2), 40_000, 3);
        let exact = nu(q(T2, T2, 2), t, one, p).unwrap();
        assert!(e.within_sigmas(exact, 4.0), "{e:?} vs {exact}");
    }
}
