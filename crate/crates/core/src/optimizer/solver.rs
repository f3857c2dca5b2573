use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expr::{EvalError, Expr};
use super::problem::OptimizationProblem;

/// Constraint violations at or below this are feasible.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_inner_iterations: usize,
    pub projected_gradient_tolerance: f64,
    pub armijo: f64,
    pub max_halvings: usize,
    /// Penalty weights tried in order.
    pub penalties: Vec<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            seed: 42,
            max_inner_iterations: 500,
            projected_gradient_tolerance: 1e-8,
            armijo: 1e-4,
            max_halvings: 60,
            penalties: (0..=8).map(|k| 10f64.powi(k)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assignment {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    pub starts_tried: usize,
    /// Inner iterations summed over all starts.
    pub iterations: usize,
    /// Penalty weight in force when the returned candidate finished.
    pub penalty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Solution {
    pub assignment: Vec<Assignment>,
    pub objective_value: f64,
    pub max_inequality_violation: f64,
    pub max_equality_violation: f64,
    pub feasible: bool,
    pub diagnostics: Diagnostics,
}

impl Solution {
    pub fn values(&self) -> Vec<f64> {
        self.assignment.iter().map(|a| a.value).collect()
    }

    pub fn value_of(&self, name: &str) -> Option<f64> {
        self.assignment.iter().find(|a| a.name == name).map(|a| a.value)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("problem cannot be evaluated from any start point: {0}")]
    Unsolvable(EvalError),
}

struct Evaluator<'a> {
    problem: &'a OptimizationProblem,
}

struct Candidate {
    x: Vec<f64>,
    objective: f64,
    inequality: f64,
    equality: f64,
    penalty: f64,
}

impl Candidate {
    fn violation(&self) -> f64 {
        self.inequality.max(self.equality)
    }

    fn feasible(&self) -> bool {
        self.inequality <= FEASIBILITY_TOLERANCE && self.equality <= FEASIBILITY_TOLERANCE
    }
}

impl Evaluator<'_> {
    fn t(&self) -> f64 {
        self.problem.time()
    }

    fn objective(&self, x: &[f64]) -> Result<f64, EvalError> {
        sum(self.problem.objectives(), x, self.t())
    }

    fn violations(&self, x: &[f64]) -> Result<(f64, f64), EvalError> {
        let mut inequality = 0.0f64;
        for g in self.problem.inequalities() {
            inequality = inequality.max(g.evaluate(x, self.t())?.max(0.0));
        }
        let mut equality = 0.0f64;
        for h in self.problem.equalities() {
            equality = equality.max(h.evaluate(x, self.t())?.abs());
        }
        Ok((inequality, equality))
    }

    /// `-F(x) + ρ(Σ max(0, g)² + Σ h²)`
    fn penalized(&self, x: &[f64], rho: f64) -> Result<f64, EvalError> {
        let mut p = 0.0;
        for g in self.problem.inequalities() {
            let v = g.evaluate(x, self.t())?.max(0.0);
            p += v * v;
        }
        for h in self.problem.equalities() {
            let v = h.evaluate(x, self.t())?;
            p += v * v;
        }
        Ok(-self.objective(x)? + rho * p)
    }

    fn penalized_gradient(&self, x: &[f64], rho: f64) -> Result<Vec<f64>, EvalError> {
        let t = self.t();
        let mut grad = vec![0.0; x.len()];
        for f in self.problem.objectives() {
            for (g, d) in grad.iter_mut().zip(f.gradient(x, t)?) {
                *g -= d;
            }
        }
        for c in self.problem.inequalities() {
            let v = c.evaluate(x, t)?;
            if v > 0.0 {
                for (g, d) in grad.iter_mut().zip(c.gradient(x, t)?) {
                    *g += 2.0 * rho * v * d;
                }
            }
        }
        for c in self.problem.equalities() {
            let v = c.evaluate(x, t)?;
            for (g, d) in grad.iter_mut().zip(c.gradient(x, t)?) {
                *g += 2.0 * rho * v * d;
            }
        }
        Ok(grad)
    }

    fn project(&self, x: &mut [f64]) {
        for (xi, var) in x.iter_mut().zip(self.problem.variables()) {
            *xi = xi.clamp(var.lower, var.upper);
        }
    }
}

fn sum(exprs: &[Expr], x: &[f64], t: f64) -> Result<f64, EvalError> {
    exprs.iter().map(|e| e.evaluate(x, t)).sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Deterministic start points: the box centre, corners spanned by the first
/// three variables (remaining variables at their centre), then seeded
/// uniform samples, truncated to `count`.
pub fn start_points(problem: &OptimizationProblem, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let vars = problem.variables();
    let center: Vec<f64> = vars.iter().map(|v| 0.5 * (v.lower + v.upper)).collect();
    let mut starts = vec![center.clone()];
    let corner_dims = vars
        .len()
        .min(count.next_power_of_two().trailing_zeros() as usize);
    for mask in 0..(1usize << corner_dims) {
        let mut corner = center.clone();
        for (j, value) in corner.iter_mut().enumerate().take(corner_dims) {
            *value = if mask & (1 << j) == 0 {
                vars[j].lower
            } else {
                vars[j].upper
            };
        }
        starts.push(corner);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < count {
        starts.push(
            vars.iter()
                .map(|v| v.lower + (v.upper - v.lower) * rng.gen::<f64>())
                .collect(),
        );
    }
    starts.truncate(count);
    starts
}

/// Maximizes the objective sum with the default options.
pub fn solve(problem: &OptimizationProblem) -> Result<Solution, SolveError> {
    solve_with(problem, &SolverOptions::default())
}

/// Quadratic-penalty method with projected gradient descent inside the box.
///
/// For each start the penalty weight increases through `options.penalties`
/// until the violations fall within [`FEASIBILITY_TOLERANCE`]. The best
/// feasible candidate wins; without one, the least-violating candidate is
/// returned with `feasible = false`.
pub fn solve_with(problem: &OptimizationProblem, options: &SolverOptions) -> Result<Solution, SolveError> {
    let eval = Evaluator { problem };
    let mut iterations = 0;
    let mut best: Option<Candidate> = None;
    let mut last_error = None;
    let starts = start_points(problem, options.starts, options.seed);

    for start in &starts {
        match run_start(&eval, start.clone(), options, &mut iterations) {
            Ok(candidate) => {
                let better = match &best {
                    None => true,
                    Some(b) => match (candidate.feasible(), b.feasible()) {
                        (true, false) => true,
                        (false, true) => false,
                        (true, true) => candidate.objective > b.objective,
                        (false, false) => candidate.violation() < b.violation(),
                    },
                };
                if better {
                    best = Some(candidate);
                }
            }
            Err(e) => last_error = Some(e),
        }
    }

    let best = match best {
        Some(b) => b,
        None => return Err(SolveError::Unsolvable(last_error.unwrap_or(EvalError::NonFinite))),
    };
    let feasible = best.feasible();
    Ok(Solution {
        assignment: problem
            .variables()
            .iter()
            .zip(&best.x)
            .map(|(v, &value)| Assignment {
                name: v.name.clone(),
                value,
            })
            .collect(),
        objective_value: best.objective,
        max_inequality_violation: best.inequality,
        max_equality_violation: best.equality,
        feasible,
        diagnostics: Diagnostics {
            starts_tried: starts.len(),
            iterations,
            penalty: best.penalty,
        },
    })
}

fn run_start(
    eval: &Evaluator<'_>,
    mut x: Vec<f64>,
    options: &SolverOptions,
    iterations: &mut usize,
) -> Result<Candidate, EvalError> {
    eval.project(&mut x);
    // fail early if the start itself cannot be evaluated
    eval.objective(&x)?;
    eval.violations(&x)?;

    let mut penalty = options.penalties.first().copied().unwrap_or(1.0);
    for &rho in &options.penalties {
        penalty = rho;
        x = minimize_inner(eval, x, rho, options, iterations);
        let (inequality, equality) = eval.violations(&x)?;
        if inequality <= FEASIBILITY_TOLERANCE && equality <= FEASIBILITY_TOLERANCE {
            break;
        }
    }
    let (inequality, equality) = eval.violations(&x)?;
    Ok(Candidate {
        objective: eval.objective(&x)?,
        x,
        inequality,
        equality,
        penalty,
    })
}

/// Projected gradient descent with Armijo backtracking on the penalized
/// objective. Stops on a small projected gradient, a failed line search, an
/// evaluation error, or the iteration cap; always returns a point in the box.
fn minimize_inner(
    eval: &Evaluator<'_>,
    mut x: Vec<f64>,
    rho: f64,
    options: &SolverOptions,
    iterations: &mut usize,
) -> Vec<f64> {
    let Ok(mut value) = eval.penalized(&x, rho) else {
        return x;
    };
    let Ok(mut grad) = eval.penalized_gradient(&x, rho) else {
        return x;
    };
    let mut trial = vec![0.0; x.len()];

    for _ in 0..options.max_inner_iterations {
        for ((ti, xi), gi) in trial.iter_mut().zip(&x).zip(&grad) {
            *ti = xi - gi;
        }
        eval.project(&mut trial);
        let step: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        if norm(&step) <= options.projected_gradient_tolerance {
            break;
        }

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..options.max_halvings {
            for ((ti, xi), gi) in trial.iter_mut().zip(&x).zip(&grad) {
                *ti = xi - scale * gi;
            }
            eval.project(&mut trial);
            let slope: f64 = grad
                .iter()
                .zip(trial.iter().zip(&x))
                .map(|(g, (a, b))| g * (a - b))
                .sum();
            if let Ok(v) = eval.penalized(&trial, rho) {
                if v <= value + options.armijo * slope {
                    accepted = Some(v);
                    break;
                }
            }
            scale *= 0.5;
        }
        let Some(new_value) = accepted else { break };
        *iterations += 1;
        x.copy_from_slice(&trial);
        value = new_value;
        match eval.penalized_gradient(&x, rho) {
            Ok(g) => grad = g,
            Err(_) => break,
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::problem::{ProblemDocument, VariableSpec};

    fn problem(
        vars: &[(&str, f64, f64)],
        objectives: &[&str],
        inequalities: &[&str],
        equalities: &[&str],
    ) -> OptimizationProblem {
        let doc = ProblemDocument {
            variables: vars
                .iter()
                .map(|&(name, lo, hi)| VariableSpec {
                    name: name.into(),
                    lo,
                    hi,
                })
                .collect(),
            objectives: objectives.iter().map(|s| s.to_string()).collect(),
            inequalities: inequalities.iter().map(|s| s.to_string()).collect(),
            equalities: equalities.iter().map(|s| s.to_string()).collect(),
            t: 0.0,
        };
        OptimizationProblem::from_document(&doc).unwrap()
    }

    #[test]
    fn interior_maximum() {
        let p = problem(&[("x", 0.0, 1.0)], &["-(x - 0.5)^2"], &[], &[]);
        let s = solve(&p).unwrap();
        assert!((s.values()[0] - 0.5).abs() < 1e-4);
        assert!(s.objective_value.abs() < 1e-8);
        assert!(s.feasible);
    }

    #[test]
    fn budget_constraint_binds() {
        let p = problem(
            &[("x", 0.0, 1.0), ("y", 0.0, 1.0)],
            &["x + y"],
            &["x + y - 1"],
            &[],
        );
        let s = solve(&p).unwrap();
        assert!((s.objective_value - 1.0).abs() < 1e-3);
        let v = s.values();
        assert!((v[0] + v[1] - 1.0).abs() < 1e-6);
        assert!(s.feasible);
    }

    #[test]
    fn equality_pins_solution() {
        let p = problem(&[("x", 0.0, 1.0)], &["x"], &[], &["x - 0.25"]);
        let s = solve(&p).unwrap();
        assert!((s.values()[0] - 0.25).abs() < 1e-4);
        assert!(s.max_equality_violation <= 1e-6);
    }

    #[test]
    fn infeasible_problem_is_flagged_not_error() {
        let p = problem(&[("x", 0.0, 1.0)], &["x"], &["2 - x"], &[]);
        let s = solve(&p).unwrap();
        assert!(!s.feasible);
        assert!((s.values()[0] - 1.0).abs() < 1e-9);
        assert!((s.max_inequality_violation - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unevaluable_everywhere_is_unsolvable() {
        let p = problem(&[("x", 0.0, 1.0)], &["log(x - 2)"], &[], &[]);
        assert!(matches!(solve(&p), Err(SolveError::Unsolvable(_))));
    }

    #[test]
    fn start_schedule() {
        let p = problem(&[("x", 0.0, 1.0)], &["x"], &[], &[]);
        let s = start_points(&p, 8, 42);
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], vec![0.5]);
        assert_eq!(s[1], vec![0.0]);
        assert_eq!(s[2], vec![1.0]);
        let p4 = problem(
            &[
                ("a", 0.0, 1.0),
                ("b", 0.0, 1.0),
                ("c", 0.0, 1.0),
                ("d", -1.0, 1.0),
            ],
            &["a"],
            &[],
            &[],
        );
        let s = start_points(&p4, 8, 42);
        assert_eq!(s.len(), 8);
        assert_eq!(s[1], vec![0.0, 0.0, 0.0, 0.0]);
        assert!(s.iter().all(|x| x[3] == 0.0));
    }

    #[test]
    fn reruns_are_bit_identical() {
        let p = problem(
            &[("x", 0.0, 2.0), ("y", -1.0, 1.0)],
            &["log(1 + x) + 2*exp(-y^2)"],
            &["x + y - 1"],
            &[],
        );
        assert_eq!(solve(&p).unwrap(), solve(&p).unwrap());
    }
}
