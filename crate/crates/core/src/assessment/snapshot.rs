use std::error::Error as StdError;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::scoring::{self, GapAnalysis, PerformanceIndicator, Pqr};
use super::types::{
    scores_from, ComponentScore, DomainScores, PerDomainWeights, RiskMatrix, TechnicalReadinessMatrix,
    WeightVector,
};
use super::ScoreError;
use crate::inventory::{self, CryptoAsset};
use crate::trajectory::TrajectorySettings;
use crate::Warning;

/// One dated scoring of an organization, as stored on disk and exchanged
/// over the API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AssessmentSnapshot {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<DateTime<Utc>>,
    #[serde(default)]
    pub label: String,
    /// Unit of the time axis used by trajectory parameters, e.g. "quarters".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_unit: Option<String>,
    /// Optional display names for the assessed areas.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub areas: Option<Vec<String>>,
    pub domain_scores: DomainScoresDoc,
    pub domain_weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_domain_weights: Option<PerDomainWeightsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub technical_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_matrix: Option<RiskMatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_state: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub performance: Option<WeightedScoresDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readiness: Option<WeightedScoresDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectorySettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inventory: Option<Vec<CryptoAsset>>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainScoresDoc {
    pub technical: Vec<f64>,
    pub security: Vec<f64>,
    pub operational: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerDomainWeightsDoc {
    pub technical: Vec<f64>,
    pub security: Vec<f64>,
    pub operational: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RiskMatrixDoc {
    pub entries: Vec<Vec<f64>>,
    pub dimension_weights: Vec<f64>,
}

/// Scores with their own weight vector (performance metrics, readiness
/// components).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedScoresDoc {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

/// A snapshot input that failed validation, tagged with its document path.
#[derive(Debug, thiserror::Error)]
#[error("{field}: {source}")]
pub struct SnapshotError {
    pub field: String,
    #[source]
    pub source: Box<dyn StdError + Send + Sync>,
}

impl SnapshotError {
    fn new(field: impl Into<String>, source: impl StdError + Send + Sync + 'static) -> Self {
        Self {
            field: field.into(),
            source: Box::new(source),
        }
    }
}

/// Where the inputs of a derived score came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum InputSource {
    /// Supplied explicitly in the snapshot.
    Explicit,
    /// Per-area means of the three domain scores, weighted by `domainWeights`.
    AreaComposites,
}

/// A snapshot whose inputs have been checked and converted to domain types.
#[derive(Debug, Clone)]
pub struct ValidatedSnapshot {
    pub snapshot: AssessmentSnapshot,
    pub scores: DomainScores,
    pub weights: WeightVector,
    pub per_domain_weights: Option<PerDomainWeights>,
    pub technical_matrix: Option<TechnicalReadinessMatrix>,
    pub risk_matrix: Option<RiskMatrix>,
    pub target_state: Option<Vec<ComponentScore>>,
    pub performance: Option<(Vec<ComponentScore>, WeightVector)>,
    pub readiness: Option<(Vec<ComponentScore>, WeightVector)>,
    pub warnings: Vec<Warning>,
}

fn scores_at(field: &str, values: &[f64]) -> Result<Vec<ComponentScore>, SnapshotError> {
    scores_from(values).map_err(|(i, e)| SnapshotError::new(format!("{field}[{i}]"), e))
}

fn weights_at(
    field: &str,
    values: &[f64],
    warnings: &mut Vec<Warning>,
) -> Result<WeightVector, SnapshotError> {
    let (w, warning) = WeightVector::normalize(values.to_vec()).map_err(|e| SnapshotError::new(field, e))?;
    if let Some(mut warning) = warning {
        warning.field = field.to_string();
        warnings.push(warning);
    }
    Ok(w)
}

fn expect_len(field: &str, expected: usize, found: usize, what: &'static str) -> Result<(), SnapshotError> {
    if expected == found {
        Ok(())
    } else {
        Err(SnapshotError::new(
            field,
            ScoreError::Dimension {
                what,
                expected,
                found,
            },
        ))
    }
}

impl AssessmentSnapshot {
    pub fn validate(&self) -> Result<ValidatedSnapshot, SnapshotError> {
        let mut warnings = Vec::new();
        let ds = &self.domain_scores;
        let scores = DomainScores::new(
            scores_at("domainScores.technical", &ds.technical)?,
            scores_at("domainScores.security", &ds.security)?,
            scores_at("domainScores.operational", &ds.operational)?,
        )
        .map_err(|e| SnapshotError::new("domainScores", e))?;
        if scores.is_empty() {
            return Err(SnapshotError::new(
                "domainScores",
                ScoreError::Empty("domain scores"),
            ));
        }
        let n = scores.len();

        let weights = weights_at("domainWeights", &self.domain_weights, &mut warnings)?;
        expect_len("domainWeights", n, weights.len(), "domain weights")?;

        let per_domain_weights = match &self.per_domain_weights {
            Some(doc) => {
                let technical = weights_at("perDomainWeights.technical", &doc.technical, &mut warnings)?;
                let security = weights_at("perDomainWeights.security", &doc.security, &mut warnings)?;
                let operational =
                    weights_at("perDomainWeights.operational", &doc.operational, &mut warnings)?;
                expect_len(
                    "perDomainWeights.technical",
                    n,
                    technical.len(),
                    "technical weights",
                )?;
                expect_len("perDomainWeights.security", n, security.len(), "security weights")?;
                expect_len(
                    "perDomainWeights.operational",
                    n,
                    operational.len(),
                    "operational weights",
                )?;
                Some(PerDomainWeights {
                    technical,
                    security,
                    operational,
                })
            }
            None => None,
        };

        if let Some(areas) = &self.areas {
            expect_len("areas", n, areas.len(), "area names")?;
        }

        let technical_matrix = self
            .technical_matrix
            .as_ref()
            .map(|rows| {
                TechnicalReadinessMatrix::from_rows(rows)
                    .map_err(|e| SnapshotError::new("technicalMatrix", e))
            })
            .transpose()?;

        let risk_matrix = match &self.risk_matrix {
            Some(doc) => {
                let w = weights_at(
                    "riskMatrix.dimensionWeights",
                    &doc.dimension_weights,
                    &mut warnings,
                )?;
                expect_len(
                    "riskMatrix.dimensionWeights",
                    3,
                    w.len(),
                    "risk dimension weights",
                )?;
                Some(
                    RiskMatrix::from_rows(&doc.entries, w)
                        .map_err(|e| SnapshotError::new("riskMatrix.entries", e))?,
                )
            }
            None => None,
        };

        let target_state = match &self.target_state {
            Some(values) => {
                let target = scores_at("targetState", values)?;
                expect_len("targetState", n, target.len(), "target state")?;
                Some(target)
            }
            None => None,
        };

        let mut weighted = |field: &str, doc: &Option<WeightedScoresDoc>| {
            doc.as_ref()
                .map(|doc| {
                    let values = scores_at(&format!("{field}.values"), &doc.values)?;
                    if values.is_empty() {
                        return Err(SnapshotError::new(
                            format!("{field}.values"),
                            ScoreError::Empty("scores"),
                        ));
                    }
                    let w = weights_at(&format!("{field}.weights"), &doc.weights, &mut warnings)?;
                    expect_len(&format!("{field}.weights"), values.len(), w.len(), "weights")?;
                    Ok((values, w))
                })
                .transpose()
        };
        let performance = weighted("performance", &self.performance)?;
        let readiness = weighted("readiness", &self.readiness)?;

        if let Some(settings) = &self.trajectory {
            settings
                .validate()
                .map_err(|e| SnapshotError::new("trajectory", e))?;
        }
        if let Some(assets) = &self.inventory {
            inventory::validate_inventory(assets)
                .map_err(|(i, e)| SnapshotError::new(format!("inventory[{i}]"), e))?;
        }

        Ok(ValidatedSnapshot {
            snapshot: self.clone(),
            scores,
            weights,
            per_domain_weights,
            technical_matrix,
            risk_matrix,
            target_state,
            performance,
            readiness,
            warnings,
        })
    }
}

impl ValidatedSnapshot {
    /// Display name for area `i`.
    pub fn area_name(&self, i: usize) -> String {
        self.snapshot
            .areas
            .as_ref()
            .and_then(|a| a.get(i).cloned())
            .unwrap_or_else(|| format!("area {}", i + 1))
    }

    /// Composite score; uses the per-domain weights when they were supplied.
    pub fn pqr(&self) -> Pqr {
        let result = match &self.per_domain_weights {
            Some(per) => scoring::compute_pqr_per_domain(&self.scores, per),
            None => scoring::compute_pqr(&self.scores, &self.weights),
        };
        result.expect("lengths checked during validation")
    }

    /// Gaps of the target state against the per-area composite scores.
    pub fn gaps(&self) -> Result<GapAnalysis, ScoreError> {
        let target = self
            .target_state
            .as_ref()
            .ok_or(ScoreError::MatrixAbsent("targetState"))?;
        scoring::gap_analysis(&self.scores.area_composites(), target)
    }

    pub fn risk_vector(&self) -> Result<[f64; 3], ScoreError> {
        self.risk_matrix
            .as_ref()
            .map(scoring::risk_vector)
            .ok_or(ScoreError::MatrixAbsent("riskMatrix"))
    }

    pub fn technical_matrix(&self) -> Result<&TechnicalReadinessMatrix, ScoreError> {
        self.technical_matrix
            .as_ref()
            .ok_or(ScoreError::MatrixAbsent("technicalMatrix"))
    }

    fn inputs(
        &self,
        explicit: &Option<(Vec<ComponentScore>, WeightVector)>,
    ) -> (Vec<ComponentScore>, WeightVector, InputSource) {
        match explicit {
            Some((values, weights)) => (values.clone(), weights.clone(), InputSource::Explicit),
            None => (
                self.scores.area_composites(),
                self.weights.clone(),
                InputSource::AreaComposites,
            ),
        }
    }

    pub fn performance_indicator(&self) -> (PerformanceIndicator, InputSource) {
        let (values, weights, source) = self.inputs(&self.performance);
        let pi =
            scoring::performance_indicator(&values, &weights).expect("lengths checked during validation");
        (pi, source)
    }

    pub fn readiness_score(&self) -> (f64, InputSource) {
        let (values, weights, source) = self.inputs(&self.readiness);
        let rs = scoring::readiness_score(&values, &weights).expect("lengths checked during validation");
        (rs, source)
    }
}
