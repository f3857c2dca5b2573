use serde::{Deserialize, Serialize};

use super::ScoreError;
use crate::Warning;

/// Sums closer to 1 than this are accepted as-is.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
/// Sums within this distance of 1 (but outside [`WEIGHT_SUM_TOLERANCE`]) are
/// rescaled and reported; anything further is rejected.
pub const WEIGHT_RENORMALIZE_LIMIT: f64 = 1e-6;

/// A dimensionless score on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ComponentScore(f64);

impl ComponentScore {
    pub const ZERO: ComponentScore = ComponentScore(0.0);
    pub const ONE: ComponentScore = ComponentScore(1.0);

    pub fn new(value: f64) -> Result<Self, ScoreError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(ScoreError::OutOfRange { value })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ComponentScore {
    type Error = ScoreError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl<'de> Deserialize<'de> for ComponentScore {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        ComponentScore::new(value).map_err(serde::de::Error::custom)
    }
}

/// Validates a list of raw values as component scores, reporting the first
/// offending index.
pub fn scores_from(values: &[f64]) -> Result<Vec<ComponentScore>, (usize, ScoreError)> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| ComponentScore::new(v).map_err(|e| (i, e)))
        .collect()
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Accepts weights whose sum is within [`WEIGHT_SUM_TOLERANCE`] of one.
    /// Sums off by up to [`WEIGHT_RENORMALIZE_LIMIT`] are rescaled and a
    /// warning is returned alongside.
    pub fn normalize(weights: Vec<f64>) -> Result<(Self, Option<Warning>), ScoreError> {
        if weights.is_empty() {
            return Err(ScoreError::EmptyWeights);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(ScoreError::NegativeWeight { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        let deviation = (sum - 1.0).abs();
        if deviation <= WEIGHT_SUM_TOLERANCE {
            Ok((Self(weights), None))
        } else if deviation <= WEIGHT_RENORMALIZE_LIMIT {
            let rescaled = weights.iter().map(|w| w / sum).collect();
            let warning = Warning::new("", format!("weights summed to {sum:.12}; rescaled to sum to 1"));
            Ok((Self(rescaled), Some(warning)))
        } else {
            Err(ScoreError::Normalization { sum })
        }
    }

    /// Strict constructor: renormalization is treated as an error.
    pub fn new(weights: Vec<f64>) -> Result<Self, ScoreError> {
        match Self::normalize(weights)? {
            (w, None) => Ok(w),
            (w, Some(_)) => Err(ScoreError::Normalization {
                sum: w.0.iter().sum::<f64>(),
            }),
        }
    }

    /// `n` equal weights.
    pub fn uniform(n: usize) -> Result<Self, ScoreError> {
        if n == 0 {
            return Err(ScoreError::EmptyWeights);
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Technical, security and operational scores for `n` assessed areas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainScores {
    technical: Vec<ComponentScore>,
    security: Vec<ComponentScore>,
    operational: Vec<ComponentScore>,
}

impl DomainScores {
    pub fn new(
        technical: Vec<ComponentScore>,
        security: Vec<ComponentScore>,
        operational: Vec<ComponentScore>,
    ) -> Result<Self, ScoreError> {
        let n = technical.len();
        if security.len() != n {
            return Err(ScoreError::Dimension {
                what: "security scores",
                expected: n,
                found: security.len(),
            });
        }
        if operational.len() != n {
            return Err(ScoreError::Dimension {
                what: "operational scores",
                expected: n,
                found: operational.len(),
            });
        }
        Ok(Self {
            technical,
            security,
            operational,
        })
    }

    /// Convenience constructor from raw values.
    pub fn from_values(t: &[f64], s: &[f64], o: &[f64]) -> Result<Self, ScoreError> {
        let conv = |v: &[f64]| scores_from(v).map_err(|(_, e)| e);
        Self::new(conv(t)?, conv(s)?, conv(o)?)
    }

    pub fn len(&self) -> usize {
        self.technical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.technical.is_empty()
    }

    pub fn technical(&self) -> &[ComponentScore] {
        &self.technical
    }

    pub fn security(&self) -> &[ComponentScore] {
        &self.security
    }

    pub fn operational(&self) -> &[ComponentScore] {
        &self.operational
    }

    /// Mean of the three domain scores for area `i`.
    pub fn area_composite(&self, i: usize) -> ComponentScore {
        let mean = (self.technical[i].0 + self.security[i].0 + self.operational[i].0) / 3.0;
        ComponentScore(mean.clamp(0.0, 1.0))
    }

    pub fn area_composites(&self) -> Vec<ComponentScore> {
        (0..self.len()).map(|i| self.area_composite(i)).collect()
    }
}

/// Separate weight vectors for the three domains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerDomainWeights {
    pub technical: WeightVector,
    pub security: WeightVector,
    pub operational: WeightVector,
}

/// Row labels of the technical readiness matrix, in order.
pub const TECHNICAL_ROWS: [&str; 3] = ["cryptographic", "infrastructure", "algorithm"];

/// 3x3 grid: rows are cryptographic systems, infrastructure dependencies and
/// algorithm preparedness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TechnicalReadinessMatrix([[ComponentScore; 3]; 3]);

impl TechnicalReadinessMatrix {
    pub fn new(cells: [[f64; 3]; 3]) -> Result<Self, ScoreError> {
        let mut out = [[ComponentScore::ZERO; 3]; 3];
        for (r, row) in cells.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                out[r][c] = ComponentScore::new(v)?;
            }
        }
        Ok(Self(out))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, ScoreError> {
        Self::new(square3(rows, "technical matrix")?)
    }

    pub fn cell(&self, row: usize, col: usize) -> ComponentScore {
        self.0[row][col]
    }

    pub fn values(&self) -> [[f64; 3]; 3] {
        self.0.map(|row| row.map(ComponentScore::value))
    }

    /// Unweighted mean of all nine cells.
    pub fn mean(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.0).sum::<f64>() / 9.0
    }
}

/// Risk categories (rows) scored against three dimensions (columns).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RiskMatrix {
    entries: [[ComponentScore; 3]; 3],
    dimension_weights: WeightVector,
}

impl RiskMatrix {
    pub fn new(entries: [[f64; 3]; 3], dimension_weights: WeightVector) -> Result<Self, ScoreError> {
        if dimension_weights.len() != 3 {
            return Err(ScoreError::Dimension {
                what: "risk dimension weights",
                expected: 3,
                found: dimension_weights.len(),
            });
        }
        let mut out = [[ComponentScore::ZERO; 3]; 3];
        for (r, row) in entries.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                out[r][c] = ComponentScore::new(v)?;
            }
        }
        Ok(Self {
            entries: out,
            dimension_weights,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], dimension_weights: WeightVector) -> Result<Self, ScoreError> {
        Self::new(square3(rows, "risk matrix")?, dimension_weights)
    }

    pub fn entries(&self) -> [[f64; 3]; 3] {
        self.entries.map(|row| row.map(ComponentScore::value))
    }

    pub fn dimension_weights(&self) -> &WeightVector {
        &self.dimension_weights
    }
}

fn square3(rows: &[Vec<f64>], what: &'static str) -> Result<[[f64; 3]; 3], ScoreError> {
    if rows.len() != 3 {
        return Err(ScoreError::Dimension {
            what,
            expected: 3,
            found: rows.len(),
        });
    }
    let mut out = [[0.0; 3]; 3];
    for (r, row) in rows.iter().enumerate() {
        if row.len() != 3 {
            return Err(ScoreError::Dimension {
                what,
                expected: 3,
                found: row.len(),
            });
        }
        out[r].copy_from_slice(row);
    }
    Ok(out)
}
