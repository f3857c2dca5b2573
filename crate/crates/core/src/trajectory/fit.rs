use serde::Serialize;

use super::{decay, TrajectoryError};

pub const LAMBDA_MIN: f64 = 1e-6;
pub const LAMBDA_MAX: f64 = 1e3;
const GRID_POINTS: usize = 200;
const RELATIVE_TOLERANCE: f64 = 1e-6;
/// 1/φ
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaFit {
    pub lambda: f64,
    /// Sum of squared residuals at `lambda`.
    pub residual: f64,
    /// The minimum sits on an edge of the search interval.
    pub saturated: bool,
}

fn sse(observations: &[(f64, f64)], alpha: f64, beta: f64, lambda: f64) -> f64 {
    observations
        .iter()
        .map(|&(t, obs)| {
            let e = decay(lambda * t);
            let r = alpha * e + beta * (1.0 - e) - obs;
            r * r
        })
        .sum()
}

/// Least-squares rate for the phase transformation curve with fixed
/// endpoints.
///
/// A 200-point log-spaced scan over `[1e-6, 1e3]` locates the basin, then a
/// golden-section search in log space refines it between the neighbouring
/// grid points.
pub fn fit_lambda(observations: &[(f64, f64)], alpha: f64, beta: f64) -> Result<LambdaFit, TrajectoryError> {
    for &(t, obs) in observations {
        if !t.is_finite() || t < 0.0 || !obs.is_finite() {
            return Err(TrajectoryError::Input(format!(
                "observation ({t}, {obs}) must have finite t >= 0 and a finite value"
            )));
        }
    }
    let mut times: Vec<f64> = observations
        .iter()
        .map(|&(t, _)| t)
        .filter(|&t| t > 0.0)
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    if times.len() < 2 {
        return Err(TrajectoryError::Input(
            "at least two observations with distinct positive times are required".into(),
        ));
    }
    if alpha == beta {
        return Err(TrajectoryError::Degenerate(
            "alpha equals beta, so the rate is unidentifiable".into(),
        ));
    }

    let lo = LAMBDA_MIN.ln();
    let hi = LAMBDA_MAX.ln();
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    let objective = |log_lambda: f64| sse(observations, alpha, beta, log_lambda.exp());

    // ties resolve towards the larger rate
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (i, &g) in grid.iter().enumerate() {
        let v = objective(g);
        if v <= best_value {
            best = i;
            best_value = v;
        }
    }

    if best == 0 || best == GRID_POINTS - 1 {
        let lambda = if best == 0 { LAMBDA_MIN } else { LAMBDA_MAX };
        return Ok(LambdaFit {
            lambda,
            residual: sse(observations, alpha, beta, lambda),
            saturated: true,
        });
    }

    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    // interval width in log space approximates the relative width in lambda
    while b - a > RELATIVE_TOLERANCE {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d);
        }
    }
    let lambda = (0.5 * (a + b)).exp();
    Ok(LambdaFit {
        lambda,
        residual: sse(observations, alpha, beta, lambda),
        saturated: false,
    })
}
