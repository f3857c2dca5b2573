//! Trajectory projection requests shared by the CLI and the API.

use quasar_core::trajectory::{
    project_series, Action, ActionSet, LtMode, ProgressParams, SeriesBundle, TrajectoryError,
    TrajectoryParams,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of a projection. Progress parameters default to the preparedness
/// ones: `i0 = alpha`, `iF = beta`, `k = lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProjectionRequest {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i0: Option<f64>,
    #[serde(default, rename = "iF", skip_serializing_if = "Option::is_none")]
    pub i_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default)]
    pub actions: Vec<Action>,
    #[serde(default)]
    pub lt_mode: LtMode,
    pub horizon_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    1.0
}

fn invalid(e: TrajectoryError) -> Error {
    let field = match &e {
        TrajectoryError::Domain { name, .. } => *name,
        _ => "",
    };
    Error::input(field, e)
}

impl ProjectionRequest {
    pub fn run(&self) -> Result<SeriesBundle> {
        let p = TrajectoryParams::new(self.alpha, self.beta, self.lambda).map_err(invalid)?;
        let q = ProgressParams::new(
            self.i0.unwrap_or(self.alpha),
            self.i_f.unwrap_or(self.beta),
            self.k.unwrap_or(self.lambda),
        )
        .map_err(invalid)?;
        let actions = ActionSet::new(self.actions.clone()).map_err(|e| Error::input("actions", e))?;
        project_series(&p, &q, &actions, self.horizon_end, self.step, self.lt_mode).map_err(invalid)
    }
}
