//! Solves a small resource-allocation problem, then re-solves it at later
//! times to show how a time-dependent objective shifts the plan.

use quasar_core::optimizer::{solve, OptimizationProblem, ProblemDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc: ProblemDocument = serde_json::from_str(
        r#"{
            "variables": [
                {"name": "migration", "lo": 0, "hi": 1},
                {"name": "tooling", "lo": 0, "hi": 1}
            ],
            "objectives": ["(1 - exp(-0.5*t)) * log(1 + migration) + exp(-0.5*t) * log(1 + tooling)"],
            "inequalities": ["migration + tooling - 1"]
        }"#,
    )?;
    let problem = OptimizationProblem::from_document(&doc)?;

    println!("{:>4}  {:>9}  {:>9}  {:>9}", "t", "migration", "tooling", "value");
    for t in [0.0, 1.0, 2.0, 4.0, 8.0] {
        let s = solve(&problem.at_time(t))?;
        println!(
            "{t:>4}  {:>9.4}  {:>9.4}  {:>9.4}{}",
            s.value_of("migration").unwrap_or_default(),
            s.value_of("tooling").unwrap_or_default(),
            s.objective_value,
            if s.feasible { "" } else { "  (infeasible)" }
        );
    }
    Ok(())
}
