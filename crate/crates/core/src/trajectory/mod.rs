//! Time-dependent transformation curves.
//!
//! Time is measured in dimensionless planning periods; rates carry the
//! reciprocal unit.

mod fit;
mod series;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use fit::{fit_lambda, LambdaFit, LAMBDA_MAX, LAMBDA_MIN};
pub use series::{project_series, SeriesBundle, TimeSeries};

/// Exponent arguments are clamped here before exponentiation.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

fn check(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<(), TrajectoryError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(TrajectoryError::Domain {
            name,
            value,
            expected,
        })
    }
}

fn check_time(t: f64) -> Result<(), TrajectoryError> {
    check("t", t, t >= 0.0, "t >= 0")
}

/// `e^{-x}` with `x` clamped to [`MAX_EXPONENT`].
fn decay(x: f64) -> f64 {
    (-x.min(MAX_EXPONENT)).exp()
}

/// Initial and target preparedness with the transformation rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryParams {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl TrajectoryParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self, TrajectoryError> {
        check("alpha", alpha, (0.0..=1.0).contains(&alpha), "0 <= alpha <= 1")?;
        check("beta", beta, (0.0..=1.0).contains(&beta), "0 <= beta <= 1")?;
        check("lambda", lambda, lambda > 0.0, "lambda > 0")?;
        Ok(Self { alpha, beta, lambda })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Initial and final implementation state with the rate constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProgressParams {
    i0: f64,
    i_f: f64,
    k: f64,
}

impl ProgressParams {
    pub fn new(i0: f64, i_f: f64, k: f64) -> Result<Self, TrajectoryError> {
        check("i0", i0, (0.0..=1.0).contains(&i0), "0 <= i0 <= 1")?;
        check("iF", i_f, (i0..=1.0).contains(&i_f), "i0 <= iF <= 1")?;
        check("k", k, k > 0.0, "k > 0")?;
        Ok(Self { i0, i_f, k })
    }

    pub fn i0(&self) -> f64 {
        self.i0
    }

    pub fn i_f(&self) -> f64 {
        self.i_f
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Horizon {
    Short,
    Medium,
    Long,
}

impl FromStr for Horizon {
    type Err = TrajectoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "short" => Ok(Self::Short),
            "medium" => Ok(Self::Medium),
            "long" => Ok(Self::Long),
            other => Err(TrajectoryError::Input(format!("unknown horizon '{other}'"))),
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Short => "short",
            Self::Medium => "medium",
            Self::Long => "long",
        })
    }
}

/// How the long-term timeline factor is evaluated.
///
/// `Literal` uses `1 - e^{-2λt}`, which ramps up faster than the medium-term
/// factor. `Prose` uses `1 - e^{-λt/2}`, a slower ramp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LtMode {
    #[default]
    Literal,
    Prose,
}

impl FromStr for LtMode {
    type Err = TrajectoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(Self::Literal),
            "prose" => Ok(Self::Prose),
            other => Err(TrajectoryError::Input(format!(
                "unknown long-term mode '{other}'"
            ))),
        }
    }
}

/// A planned action with constant impact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Action {
    #[serde(default)]
    pub name: String,
    pub impact: f64,
    pub horizon: Horizon,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct ActionSet(Vec<Action>);

impl ActionSet {
    pub fn new(actions: Vec<Action>) -> Result<Self, TrajectoryError> {
        for a in &actions {
            if !(a.impact.is_finite() && a.impact >= 0.0) {
                return Err(TrajectoryError::Domain {
                    name: "impact",
                    value: a.impact,
                    expected: "impact >= 0",
                });
            }
        }
        Ok(Self(actions))
    }

    pub fn actions(&self) -> &[Action] {
        &self.0
    }

    /// Sum of impacts of actions in `horizon`.
    pub fn total_impact(&self, horizon: Horizon) -> f64 {
        self.0
            .iter()
            .filter(|a| a.horizon == horizon)
            .map(|a| a.impact)
            .sum()
    }
}

/// `α·e^{-λt} + β·(1 - e^{-λt})`.
pub fn phase_transformation(p: &TrajectoryParams, t: f64) -> Result<f64, TrajectoryError> {
    check_time(t)?;
    let e = decay(p.lambda * t);
    Ok(p.alpha * e + p.beta * (1.0 - e))
}

/// `I_0 + (I_f - I_0)(1 - e^{-kt})`.
pub fn implementation_progress(p: &ProgressParams, t: f64) -> Result<f64, TrajectoryError> {
    check_time(t)?;
    let e = decay(p.k * t);
    Ok(p.i0 + (p.i_f - p.i0) * (1.0 - e))
}

/// Time factor applied to the total impact of a horizon.
pub fn timeline_factor(horizon: Horizon, lambda: f64, t: f64, mode: LtMode) -> f64 {
    let x = lambda * t;
    match (horizon, mode) {
        (Horizon::Short, _) => decay(x),
        (Horizon::Medium, _) => 1.0 - decay(x),
        (Horizon::Long, LtMode::Literal) => 1.0 - decay(2.0 * x),
        (Horizon::Long, LtMode::Prose) => 1.0 - decay(0.5 * x),
    }
}

/// Aggregate impact of the actions at `horizon`, weighted by the horizon's
/// time factor.
pub fn timeline_value(
    actions: &ActionSet,
    horizon: Horizon,
    lambda: f64,
    t: f64,
    mode: LtMode,
) -> Result<f64, TrajectoryError> {
    check("lambda", lambda, lambda > 0.0, "lambda > 0")?;
    check_time(t)?;
    Ok(actions.total_impact(horizon) * timeline_factor(horizon, lambda, t, mode))
}

/// Trajectory inputs as carried in snapshot documents and API requests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TrajectorySettings {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub i0: f64,
    #[serde(rename = "iF")]
    pub i_f: f64,
    pub k: f64,
    #[serde(default)]
    pub actions: Vec<Action>,
    #[serde(default)]
    pub lt_mode: LtMode,
}

impl TrajectorySettings {
    pub fn validate(&self) -> Result<(TrajectoryParams, ProgressParams, ActionSet), TrajectoryError> {
        Ok((
            TrajectoryParams::new(self.alpha, self.beta, self.lambda)?,
            ProgressParams::new(self.i0, self.i_f, self.k)?,
            ActionSet::new(self.actions.clone())?,
        ))
    }
}
