//! Resource-allocation optimization: maximize a sum of objective expressions
//! over a box, subject to inequality (`<= 0`) and equality (`= 0`)
//! constraints, at a fixed time value.

mod expr;
mod problem;
mod solver;

pub use expr::{parse_expression, BinaryOp, EvalError, Expr, Function, ParseError, TIME_SYMBOL};
pub use problem::{OptimizationProblem, ProblemDocument, ProblemError, Variable, VariableSpec};
pub use solver::{
    solve, solve_with, start_points, Assignment, Diagnostics, Solution, SolveError, SolverOptions,
    FEASIBILITY_TOLERANCE,
};
