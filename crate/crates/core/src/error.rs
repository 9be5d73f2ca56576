use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("derivative order {0} is not supported (max 5)")]
    UnsupportedOrder(usize),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("no peak root in [1, sqrt(2)+0.5] at omega = {omega}; omega too large for this model")]
    NoPeakRoot { omega: f64 },
    #[error("profile integration became unstable at y = {y}; try a smaller omega or a finer grid")]
    ProfileInstability { y: f64 },
    #[error("no internal mode: s(alpha) keeps one sign on the bracket at omega = {omega}")]
    NoInternalMode { omega: f64 },
    #[error("linear solve did not converge (relative residual {residual:e})")]
    IllConditioned { residual: f64 },
    #[error("oracle failed: {0}")]
    Oracle(String),
    #[error("denominator W2 too small at y = {y}")]
    DegenerateDenominator { y: f64 },
    #[error("integral operator norm estimate {norm} is not below 1; omega too large")]
    OperatorTooLarge { norm: f64 },
    #[error("tau is not real: lambda = {lambda} <= 1/2")]
    NoOscillation { lambda: f64 },
    #[error("field blew up at t = {t}")]
    BlowUp { t: f64 },
    #[error("modulation decomposition lost at t = {t}: {reason}")]
    DecompositionLost { t: f64, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
