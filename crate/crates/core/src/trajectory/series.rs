use serde::Serialize;

use super::{
    implementation_progress, phase_transformation, timeline_factor, ActionSet, Horizon, LtMode,
    ProgressParams, TrajectoryError, TrajectoryParams,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Five series sampled on one uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesBundle {
    pub t: Vec<f64>,
    #[serde(rename = "P")]
    pub preparedness: Vec<f64>,
    #[serde(rename = "I")]
    pub progress: Vec<f64>,
    #[serde(rename = "ST")]
    pub short_term: Vec<f64>,
    #[serde(rename = "MT")]
    pub medium_term: Vec<f64>,
    #[serde(rename = "LT")]
    pub long_term: Vec<f64>,
}

/// Samples every closed form on `t = 0, step, 2·step, … <= horizon_end`.
pub fn project_series(
    p: &TrajectoryParams,
    q: &ProgressParams,
    actions: &ActionSet,
    horizon_end: f64,
    step: f64,
    mode: LtMode,
) -> Result<SeriesBundle, TrajectoryError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(TrajectoryError::Input(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(horizon_end.is_finite() && horizon_end >= step) {
        return Err(TrajectoryError::Input(format!(
            "horizon end {horizon_end} must be at least one step ({step})"
        )));
    }
    // tolerate round-off so that e.g. 0.1-steps reach the end point
    let count = (horizon_end / step + 1e-9).floor() as usize + 1;
    let t: Vec<f64> = (0..count).map(|i| i as f64 * step).collect();

    let short = actions.total_impact(Horizon::Short);
    let medium = actions.total_impact(Horizon::Medium);
    let long = actions.total_impact(Horizon::Long);
    let lambda = p.lambda();

    let mut bundle = SeriesBundle {
        t: t.clone(),
        preparedness: Vec::with_capacity(count),
        progress: Vec::with_capacity(count),
        short_term: Vec::with_capacity(count),
        medium_term: Vec::with_capacity(count),
        long_term: Vec::with_capacity(count),
    };
    for &ti in &t {
        bundle.preparedness.push(phase_transformation(p, ti)?);
        bundle.progress.push(implementation_progress(q, ti)?);
        bundle
            .short_term
            .push(short * timeline_factor(Horizon::Short, lambda, ti, mode));
        bundle
            .medium_term
            .push(medium * timeline_factor(Horizon::Medium, lambda, ti, mode));
        bundle
            .long_term
            .push(long * timeline_factor(Horizon::Long, lambda, ti, mode));
    }
    Ok(bundle)
}

impl SeriesBundle {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// One named series: `P`, `I`, `ST`, `MT` or `LT`.
    pub fn series(&self, name: &str) -> Option<TimeSeries> {
        let values = match name {
            "P" => &self.preparedness,
            "I" => &self.progress,
            "ST" => &self.short_term,
            "MT" => &self.medium_term,
            "LT" => &self.long_term,
            _ => return None,
        };
        Some(TimeSeries {
            times: self.t.clone(),
            values: values.clone(),
        })
    }

    /// CSV with header `t,P,I,ST,MT,LT`, values to nine significant digits
    /// with trailing zeros dropped.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,P,I,ST,MT,LT\n");
        for i in 0..self.len() {
            let row = [
                self.t[i],
                self.preparedness[i],
                self.progress[i],
                self.short_term[i],
                self.medium_term[i],
                self.long_term[i],
            ];
            let cells: Vec<String> = row.iter().map(|&v| significant(v, 9)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fixed-point rendering of `value` with `digits` significant digits.
pub(crate) fn significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 {
            "0".into()
        } else {
            value.to_string()
        };
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let text = format!("{value:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Action;

    fn setup() -> (TrajectoryParams, ProgressParams, ActionSet) {
        (
            TrajectoryParams::new(0.2, 0.9, 0.5).unwrap(),
            ProgressParams::new(0.1, 0.8, 1.0).unwrap(),
            ActionSet::new(vec![
                Action {
                    name: "rotate keys".into(),
                    impact: 1.0,
                    horizon: Horizon::Short,
                },
                Action {
                    name: "hybrid tls".into(),
                    impact: 2.0,
                    horizon: Horizon::Long,
                },
            ])
            .unwrap(),
        )
    }

    #[test]
    fn grid_arithmetic() {
        let (p, q, a) = setup();
        let b = project_series(&p, &q, &a, 1.0, 0.5, LtMode::Literal).unwrap();
        assert_eq!(b.t, vec![0.0, 0.5, 1.0]);
        assert_eq!(b.preparedness.len(), 3);
        assert_eq!(b.preparedness[0], 0.2);
        assert_eq!(b.progress[0], 0.1);
        assert_eq!(b.short_term[0], 1.0);
        assert_eq!(b.long_term[0], 0.0);

        let b = project_series(&p, &q, &a, 1.0, 0.1, LtMode::Literal).unwrap();
        assert_eq!(b.len(), 11);
    }

    #[test]
    fn rejects_bad_step() {
        let (p, q, a) = setup();
        assert!(project_series(&p, &q, &a, 1.0, 0.0, LtMode::Literal).is_err());
        assert!(project_series(&p, &q, &a, 1.0, -0.5, LtMode::Literal).is_err());
        assert!(project_series(&p, &q, &a, 0.2, 0.5, LtMode::Literal).is_err());
    }

    #[test]
    fn preparedness_stays_between_endpoints() {
        let (p, q, a) = setup();
        let b = project_series(&p, &q, &a, 50.0, 0.25, LtMode::Prose).unwrap();
        assert!(b.preparedness.iter().all(|&v| (0.2..=0.9).contains(&v)));
    }

    #[test]
    fn csv_layout() {
        let (p, q, a) = setup();
        let b = project_series(&p, &q, &a, 2.0, 1.0, LtMode::Literal).unwrap();
        let csv = b.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,P,I,ST,MT,LT");
        assert_eq!(lines.len(), 4);
        let last: Vec<f64> = lines[3].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(last[0], 2.0);
        assert!((last[1] - 0.642485).abs() < 1e-6);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.642484391, 9), "0.642484391");
        assert_eq!(significant(2.0, 9), "2");
        assert_eq!(significant(0.0, 9), "0");
        assert_eq!(significant(123.456, 9), "123.456");
        assert_eq!(significant(0.000123456789012, 9), "0.000123456789");
    }

    #[test]
    fn named_series_lookup() {
        let (p, q, a) = setup();
        let b = project_series(&p, &q, &a, 1.0, 0.5, LtMode::Literal).unwrap();
        assert_eq!(b.series("MT").unwrap().values, b.medium_term);
        assert!(b.series("XX").is_none());
    }
}
