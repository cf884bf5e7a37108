use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("non-homogeneous input: {0}")]
    NonHomogeneous(String),

    #[error("unit ideal: {0}")]
    UnitIdeal(String),

    #[error("zero ideal: {0}")]
    ZeroIdeal(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The hypotheses of a closed formula do not hold for this input.
    #[error("hypothesis failed: {0}")]
    HypothesisFail(String),

    /// Finite differences did not settle inside the requested window.
    #[error("no stabilization in window {lo}..={hi}: differences {differences:?}")]
    NoStabilization {
        lo: u32,
        hi: u32,
        differences: Vec<i64>,
    },

    /// An interpolated polynomial failed to reproduce a held-out grid point.
    #[error("fit mismatch at {point:?}: fitted {fitted}, measured {measured}")]
    FitMismatch {
        point: Vec<u32>,
        fitted: String,
        measured: i64,
    },

    #[error("search exhausted after {attempts} attempts: {detail}")]
    SearchExhausted { attempts: usize, detail: String },

    /// A bounded search neither proved nor refuted the claim.
    #[error("inconclusive up to bound {bound}: {detail}")]
    Inconclusive { bound: u32, detail: String },

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Machine-readable code used in JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RingMismatch(_) => "RING-MISMATCH",
            Error::NonHomogeneous(_) => "NON-HOMOGENEOUS",
            Error::UnitIdeal(_) => "UNIT-IDEAL",
            Error::ZeroIdeal(_) => "ZERO-IDEAL",
            Error::Precondition(_) => "PRECONDITION",
            Error::HypothesisFail(_) => "HYPOTHESIS-FAIL",
            Error::NoStabilization { .. } => "NO-STABILIZATION",
            Error::FitMismatch { .. } => "FIT-MISMATCH",
            Error::SearchExhausted { .. } => "SEARCH-EXHAUSTED",
            Error::Inconclusive { .. } => "INCONCLUSIVE",
            Error::Parse { .. } => "PARSE",
            Error::Internal(_) => "INTERNAL",
        }
    }

    /// Errors that mean "the hypotheses do not apply", as opposed to a
    /// computation that ran out of budget.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::HypothesisFail(_)
                | Error::Precondition(_)
                | Error::NonHomogeneous(_)
                | Error::UnitIdeal(_)
                | Error::ZeroIdeal(_)
        )
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::NoStabilization { .. }
                | Error::FitMismatch { .. }
                | Error::SearchExhausted { .. }
                | Error::Inconclusive { .. }
        )
    }
}
