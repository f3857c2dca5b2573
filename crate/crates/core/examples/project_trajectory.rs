//! Projects preparedness, implementation progress and the three action
//! horizons over twelve periods and prints them as CSV.

use quasar_core::trajectory::{
    project_series, Action, ActionSet, Horizon, LtMode, ProgressParams, TrajectoryParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let preparedness = TrajectoryParams::new(0.2, 0.9, 0.5)?;
    let progress = ProgressParams::new(0.1, 0.8, 0.3)?;
    let actions = ActionSet::new(vec![
        Action {
            name: "inventory keys".into(),
            impact: 0.3,
            horizon: Horizon::Short,
        },
        Action {
            name: "hybrid TLS".into(),
            impact: 0.4,
            horizon: Horizon::Medium,
        },
        Action {
            name: "retire RSA PKI".into(),
            impact: 0.6,
            horizon: Horizon::Long,
        },
    ])?;

    let bundle = project_series(&preparedness, &progress, &actions, 12.0, 1.0, LtMode::Literal)?;
    print!("{}", bundle.to_csv());

    // the same long-term horizon read the slower way
    let prose = project_series(&preparedness, &progress, &actions, 12.0, 1.0, LtMode::Prose)?;
    println!(
        "LT at t=12: literal {:.4}, prose {:.4}",
        bundle.long_term[12], prose.long_term[12]
    );
    Ok(())
}
