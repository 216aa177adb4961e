//! Laws for the number of sleeping frogs placed at each vertex.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Geometric, Poisson};

use crate::error::{Error, Result};

/// Distribution of `η`, the initial frog count at a vertex.
///
/// `Geometric(r)` counts failures before the first success of a
/// `Bernoulli(r)` trial, so `P[η = k] = r (1 - r)^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitLaw {
    Constant(u32),
    Bernoulli(f64),
    Poisson(f64),
    Geometric(f64),
}

impl InitLaw {
    pub fn constant(k: u32) -> Result<Self> {
        Self::Constant(k).validated()
    }

    pub fn bernoulli(q: f64) -> Result<Self> {
        Self::Bernoulli(q).validated()
    }

    pub fn poisson(mu: f64) -> Result<Self> {
        Self::Poisson(mu).validated()
    }

    pub fn geometric(r: f64) -> Result<Self> {
        Self::Geometric(r).validated()
    }

    /// Checks the family parameter and the standing assumption `ρ0 < 1`.
    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Constant(k) => k >= 1,
            Self::Bernoulli(q) => q > 0.0 && q <= 1.0,
            Self::Poisson(mu) => mu > 0.0 && mu.is_finite(),
            Self::Geometric(r) => r > 0.0 && r < 1.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidLaw(format!("{self} violates its parameter range or has ρ0 = 1")))
        }
    }

    /// Probability generating function `E[s^η]` for `s` in `[0, 1]`.
    pub fn pgf(&self, s: f64) -> f64 {
        match *self {
            Self::Constant(k) => s.powi(k as i32),
            Self::Bernoulli(q) => 1.0 - q * (1.0 - s),
            Self::Poisson(mu) => (mu * (s - 1.0)).exp(),
            Self::Geometric(r) => r / (1.0 - (1.0 - r) * s),
        }
    }

    /// `1 - φ(1 - x)`, evaluated without cancellation for small `x`.
    pub fn hit_any(&self, x: f64) -> f64 {
        match *self {
            Self::Constant(k) => -((-x).ln_1p() * f64::from(k)).exp_m1(),
            Self::Bernoulli(q) => q * x,
            Self::Poisson(mu) => -(-mu * x).exp_m1(),
            Self::Geometric(r) => (1.0 - r) * x / (r + (1.0 - r) * x),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Constant(k) => f64::from(k),
            Self::Bernoulli(q) => q,
            Self::Poisson(mu) => mu,
            Self::Geometric(r) => (1.0 - r) / r,
        }
    }

    /// `q = 1 - ρ0 = P[η ≥ 1]`.
    pub fn q(&self) -> f64 {
        1.0 - self.pmf(0)
    }

    /// `ρ_k = P[η = k]`.
    pub fn pmf(&self, k: u64) -> f64 {
        match *self {
            Self::Constant(c) => f64::from(u8::from(u64::from(c) == k)),
            Self::Bernoulli(q) => match k {
                0 => 1.0 - q,
                1 => q,
                _ => 0.0,
            },
            Self::Poisson(mu) => {
                // log-space keeps large k finite
                let log_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
                (k as f64 * mu.ln() - mu - log_fact).exp()
            }
            Self::Geometric(r) => r * (1.0 - r).powf(k as f64),
        }
    }

    /// `E[η; η > i_max]`, the mean mass beyond a truncation point.
    pub fn tail_mean(&self, i_max: u64) -> f64 {
        match *self {
            Self::Constant(c) => {
                if u64::from(c) > i_max {
                    f64::from(c)
                } else {
                    0.0
                }
            }
            Self::Bernoulli(q) => {
                if i_max == 0 {
                    q
                } else {
                    0.0
                }
            }
            Self::Poisson(_) | Self::Geometric(_) => {
                let mut total = 0.0;
                let mut i = i_max + 1;
                loop {
                    let term = i as f64 * self.pmf(i);
                    total += term;
                    if term <= total * 1e-18 || term == 0.0 {
                        break;
                    }
                    i += 1;
                }
                total
            }
        }
    }

    /// `η' = 1{η ≥ 1}`, the Bernoulli law dominated by this one.
    pub fn indicator_law(&self) -> Self {
        Self::Bernoulli(self.q())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            Self::Constant(k) => u64::from(k),
            Self::Bernoulli(q) => u64::from(rng.random_bool(q)),
            Self::Poisson(mu) => {
                let d = Poisson::new(mu).expect("validated Poisson mean");
                d.sample(rng) as u64
            }
            Self::Geometric(r) => {
                let d = Geometric::new(r).expect("validated geometric parameter");
                d.sample(rng)
            }
        }
    }
}

impl fmt::Display for InitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(k) => write!(f, "const:{k}"),
            Self::Bernoulli(q) => write!(f, "bernoulli:{q}"),
            Self::Poisson(mu) => write!(f, "poisson:{mu}"),
            Self::Geometric(r) => write!(f, "geometric:{r}"),
        }
    }
}

/// Parses `const:k`, `bernoulli:q`, `poisson:mu` or `geometric:r`.
impl FromStr for InitLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, value) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("law spec `{s}` must look like family:value")))?;
        let bad = |e: &dyn fmt::Display| Error::Parse(format!("law spec `{s}`: {e}"));
        let law = match family.trim() {
            "const" => Self::Constant(value.trim().parse().map_err(|e| bad(&e))?),
            "bernoulli" => Self::Bernoulli(value.trim().parse().map_err(|e| bad(&e))?),
            "poisson" => Self::Poisson(value.trim().parse().map_err(|e| bad(&e))?),
            "geometric" => Self::Geometric(value.trim().parse().map_err(|e| bad(&e))?),
            other => return Err(bad(&format!("unknown family `{other}`"))),
        };
        law.validated()
    }
}
