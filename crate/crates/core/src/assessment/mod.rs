//! Readiness scoring: composite score, criteria aggregation, gap analysis,
//! risk aggregation, performance indicator and readiness score.
//!
//! All scores live on `[0, 1]`. Weight vectors must sum to one; see
//! [`WeightVector::normalize`] for the tolerance bands.

mod scoring;
mod snapshot;
mod types;

pub use scoring::{
    aggregate_assessment, compute_pqr, compute_pqr_per_domain, gap_analysis, performance_indicator,
    readiness_score, risk_vector, GapAnalysis, PerformanceIndicator, Pqr,
};
pub use snapshot::{
    AssessmentSnapshot, DomainScoresDoc, InputSource, PerDomainWeightsDoc, RiskMatrixDoc, SnapshotError,
    ValidatedSnapshot, WeightedScoresDoc,
};
pub use types::{
    scores_from, ComponentScore, DomainScores, PerDomainWeights, RiskMatrix, TechnicalReadinessMatrix,
    WeightVector, TECHNICAL_ROWS, WEIGHT_RENORMALIZE_LIMIT, WEIGHT_SUM_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScoreError {
    #[error("{what}: expected length {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("weights sum to {sum}, expected 1 (tolerance {WEIGHT_RENORMALIZE_LIMIT:e})")]
    Normalization { sum: f64 },
    #[error("weight {index} is {value}; weights must be finite and nonnegative")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weight vector is empty")]
    EmptyWeights,
    #[error("score {value} is outside [0, 1]")]
    OutOfRange { value: f64 },
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("{0} is absent from the snapshot")]
    MatrixAbsent(&'static str),
}
