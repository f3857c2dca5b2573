use proptest::prelude::*;
use quasar_core::optimizer::{
    parse_expression, solve, OptimizationProblem, ProblemDocument, VariableSpec, FEASIBILITY_TOLERANCE,
};

fn bounds() -> impl Strategy<Value = (f64, f64)> {
    (-5.0..5.0f64, 0.1..5.0f64).prop_map(|(lo, width)| (lo, lo + width))
}

fn problem(vars: &[(f64, f64)], objective: String, inequalities: Vec<String>) -> OptimizationProblem {
    let doc = ProblemDocument {
        variables: vars
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| VariableSpec {
                name: format!("x{i}"),
                lo,
                hi,
            })
            .collect(),
        objectives: vec![objective],
        inequalities,
        equalities: vec![],
        t: 0.0,
    };
    OptimizationProblem::from_document(&doc).unwrap()
}

fn linear(coeffs: &[f64]) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| format!("({c:.6})*x{i}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_box_optimum_is_a_corner(vars in prop::collection::vec(bounds(), 1..4), raw in prop::collection::vec(-3.0..3.0f64, 4)) {
        let coeffs: Vec<f64> = raw[..vars.len()].iter().map(|c| (c * 1e6).round() / 1e6).collect();
        let sol = solve(&problem(&vars, linear(&coeffs), vec![])).unwrap();
        let best: f64 = coeffs.iter().zip(&vars).map(|(c, (lo, hi))| (c * lo).max(c * hi)).sum();
        prop_assert!(sol.feasible);
        prop_assert!((sol.objective_value - best).abs() <= 1e-6, "{} vs {}", sol.objective_value, best);
    }

    #[test]
    fn reported_violations_are_consistent(vars in prop::collection::vec(bounds(), 2..4), raw in prop::collection::vec(-3.0..3.0f64, 4), cap in -4.0..4.0f64) {
        let n = vars.len();
        let coeffs: Vec<f64> = raw[..n].iter().map(|c| (c * 1e6).round() / 1e6).collect();
        let sum = (0..n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(" + ");
        let constraint = format!("{sum} - ({cap:.6})");
        let p = problem(&vars, linear(&coeffs), vec![constraint.clone()]);
        let sol = solve(&p).unwrap();
        let x = sol.values();
        for (v, (lo, hi)) in x.iter().zip(&vars) {
            prop_assert!(*v >= *lo && *v <= *hi);
        }
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g = parse_expression(&constraint, &refs).unwrap().evaluate(&x, 0.0).unwrap();
        prop_assert!((sol.max_inequality_violation - g.max(0.0)).abs() <= 1e-12);
        prop_assert_eq!(sol.feasible, sol.max_inequality_violation <= FEASIBILITY_TOLERANCE);
    }
}

proptest! {
    #[test]
    fn gradient_matches_analytic(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -2.0..2.0f64, x in -2.0..2.0f64, y in 0.1..3.0f64) {
        let src = format!("({a:.4})*x^2 + ({b:.4})*x*y + ({c:.4})*exp(y) + log(y)");
        let (a, b, c) = ((a * 1e4).round() / 1e4, (b * 1e4).round() / 1e4, (c * 1e4).round() / 1e4);
        let expr = parse_expression(&src, &["x", "y"]).unwrap();
        let g = expr.gradient(&[x, y], 0.0).unwrap();
        let dx = 2.0 * a * x + b * y;
        let dy = b * x + c * y.exp() + 1.0 / y;
        prop_assert!((g[0] - dx).abs() <= 1e-5 * (1.0 + dx.abs()), "{} vs {}", g[0], dx);
        prop_assert!((g[1] - dy).abs() <= 1e-5 * (1.0 + dy.abs()), "{} vs {}", g[1], dy);
    }
}
