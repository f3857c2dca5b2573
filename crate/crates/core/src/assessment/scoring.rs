use serde::Serialize;

use super::types::{ComponentScore, DomainScores, PerDomainWeights, RiskMatrix, WeightVector};
use super::ScoreError;

/// Composite readiness: the literal weighted sum over areas (range `[0, 3]`)
/// and the same value divided by three.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pqr {
    pub literal: f64,
    pub normalized: f64,
}

impl Pqr {
    fn from_literal(literal: f64) -> Self {
        let literal = literal.clamp(0.0, 3.0);
        Self {
            literal,
            normalized: literal / 3.0,
        }
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), ScoreError> {
    if expected == found {
        Ok(())
    } else {
        Err(ScoreError::Dimension {
            what,
            expected,
            found,
        })
    }
}

/// `Σ w_i·(T_i + S_i + O_i)` with one weight shared by the three domains.
pub fn compute_pqr(scores: &DomainScores, weights: &WeightVector) -> Result<Pqr, ScoreError> {
    check_len("domain weights", scores.len(), weights.len())?;
    let literal = weights
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            w * (scores.technical()[i].value()
                + scores.security()[i].value()
                + scores.operational()[i].value())
        })
        .sum();
    Ok(Pqr::from_literal(literal))
}

/// `Σ (T_i·wT_i + S_i·wS_i + O_i·wO_i)`, each domain carrying its own
/// normalized weight vector.
pub fn compute_pqr_per_domain(scores: &DomainScores, weights: &PerDomainWeights) -> Result<Pqr, ScoreError> {
    check_len("technical weights", scores.len(), weights.technical.len())?;
    check_len("security weights", scores.len(), weights.security.len())?;
    check_len("operational weights", scores.len(), weights.operational.len())?;
    let literal = weighted_sum(scores.technical(), &weights.technical)
        + weighted_sum(scores.security(), &weights.security)
        + weighted_sum(scores.operational(), &weights.operational);
    Ok(Pqr::from_literal(literal))
}

fn weighted_sum(values: &[ComponentScore], weights: &WeightVector) -> f64 {
    values
        .iter()
        .zip(weights.as_slice())
        .map(|(c, w)| c.value() * w)
        .sum()
}

/// Weighted sum of assessment criteria.
pub fn aggregate_assessment(criteria: &[ComponentScore], weights: &WeightVector) -> Result<f64, ScoreError> {
    check_len("criteria weights", criteria.len(), weights.len())?;
    Ok(weighted_sum(criteria, weights).clamp(0.0, 1.0))
}

/// Element-wise gaps between target and current state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapAnalysis {
    /// `target - current` per area, in input order. Positive means deficit.
    pub gaps: Vec<f64>,
    /// Area indices ordered by descending gap; ties keep input order.
    pub ranking: Vec<usize>,
}

pub fn gap_analysis(
    current: &[ComponentScore],
    target: &[ComponentScore],
) -> Result<GapAnalysis, ScoreError> {
    check_len("target state", current.len(), target.len())?;
    let gaps: Vec<f64> = current
        .iter()
        .zip(target)
        .map(|(c, t)| t.value() - c.value())
        .collect();
    let mut ranking: Vec<usize> = (0..gaps.len()).collect();
    // stable sort keeps input order among equal gaps
    ranking.sort_by(|&a, &b| gaps[b].total_cmp(&gaps[a]));
    Ok(GapAnalysis { gaps, ranking })
}

/// Matrix-vector product of risk entries and dimension weights.
pub fn risk_vector(matrix: &RiskMatrix) -> [f64; 3] {
    let w = matrix.dimension_weights().as_slice();
    matrix
        .entries()
        .map(|row| (row[0] * w[0] + row[1] * w[1] + row[2] * w[2]).clamp(0.0, 1.0))
}

/// Composite performance indicator.
///
/// `literal` keeps the `1/n` prefactor even though the weights already sum to
/// one, so it lies in `[0, 1/n]`. `rescaled` is `n * literal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerformanceIndicator {
    pub literal: f64,
    pub rescaled: f64,
}

pub fn performance_indicator(
    metrics: &[ComponentScore],
    weights: &WeightVector,
) -> Result<PerformanceIndicator, ScoreError> {
    if metrics.is_empty() {
        return Err(ScoreError::Empty("performance metrics"));
    }
    check_len("metric weights", metrics.len(), weights.len())?;
    let n = metrics.len() as f64;
    let rescaled = weighted_sum(metrics, weights).clamp(0.0, 1.0);
    Ok(PerformanceIndicator {
        literal: rescaled / n,
        rescaled,
    })
}

/// Root sum square of weighted readiness components.
///
/// Squaring emphasises the largest weighted terms.
pub fn readiness_score(readiness: &[ComponentScore], weights: &WeightVector) -> Result<f64, ScoreError> {
    check_len("readiness weights", readiness.len(), weights.len())?;
    let sum_sq: f64 = readiness
        .iter()
        .zip(weights.as_slice())
        .map(|(r, w)| {
            let term = r.value() * w;
            term * term
        })
        .sum();
    Ok(sum_sq.sqrt().clamp(0.0, 1.0))
}
