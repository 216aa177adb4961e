use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tree degrees must be at least 1, got ({d1}, {d2})")]
    InvalidTree { d1: u32, d2: u32 },

    #[error("requires d1 ≥ 2 or d2 ≥ 2, got ({d1}, {d2})")]
    DegenerateTree { d1: u32, d2: u32 },

    #[error("invalid initial law: {0}")]
    InvalidLaw(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("types ({i}, {j}) are inconsistent with distance {k} on a bipartite tree")]
    ParityMismatch { i: u8, j: u8, k: u32 },

    #[error("path length {k} exceeds the configured limit {limit}")]
    DepthLimit { k: u32, limit: u32 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("resource limit exceeded: {what} reached {limit}")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("coupled sweep lost monotonicity in replica {replica} at p = {p}")]
    CouplingViolation { replica: u64, p: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
