use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("full Hilbert space oracle supports at most {max} bath spins, got {n}")]
    DimensionTooLarge { n: u32, max: u32 },
    #[error("resonance 2(N+1)g = Δ: fast frequency ν0 vanishes")]
    Resonance,
    #[error("resonance 2gN = Δ: coefficient a3 diverges")]
    ResonanceA3,
    #[error("coupling g = {g} lies inside the non-convergent interval [{lo}, {hi}] of the large-N expansion")]
    OutsideValidity { g: f64, lo: f64, hi: f64 },
    #[error("large-N expansion needs ω_b/T > 0, got {0}")]
    NonPositiveBeta(f64),
    #[error("arccos argument {0} outside [-1, 1]")]
    ArccosDomain(f64),
    #[error("α_x = {0} too small for the analytic half width; use the numeric extractor")]
    AlphaXDegenerate(f64),
    #[error("collapse-revival pattern does not exist (g = 0 or Δ = 0)")]
    NoCollapseRevival,
    #[error("series needs at least {need} points, got {got}")]
    GridTooShort { need: usize, got: usize },
    #[error("series grid is not strictly increasing at index {0}")]
    GridNotIncreasing(usize),
    #[error("series span {span} covers fewer than {need} envelope windows of width {window}")]
    InsufficientSpan { span: f64, window: f64, need: usize },
    #[error("fewer than two envelope peaks found")]
    NoPeakFound,
}

pub type Result<T> = std::result::Result<T, Error>;
