use serde::{Deserialize, Serialize};

use super::expr::{parse_expression, Expr, ParseError, TIME_SYMBOL};

/// Problem document as read from disk or received over the API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub variables: Vec<VariableSpec>,
    pub objectives: Vec<String>,
    #[serde(default)]
    pub inequalities: Vec<String>,
    #[serde(default)]
    pub equalities: Vec<String>,
    #[serde(default)]
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("at least one decision variable is required")]
    NoVariables,
    #[error("at least one objective is required")]
    NoObjectives,
    #[error("variable '{name}': lower bound {lo} must be below upper bound {hi}")]
    InvalidBounds { name: String, lo: f64, hi: f64 },
    #[error("variable '{0}' is declared twice")]
    DuplicateVariable(String),
    #[error("variable name '{0}' is not an identifier")]
    InvalidName(String),
    #[error("time value must be finite")]
    InvalidTime,
    #[error("{field}: {source}")]
    Expression {
        field: String,
        #[source]
        source: ParseError,
    },
}

impl ProblemError {
    /// Document path of the offending input.
    pub fn field(&self) -> String {
        match self {
            ProblemError::NoVariables
            | ProblemError::InvalidBounds { .. }
            | ProblemError::DuplicateVariable(_)
            | ProblemError::InvalidName(_) => "variables".into(),
            ProblemError::NoObjectives => "objectives".into(),
            ProblemError::InvalidTime => "t".into(),
            ProblemError::Expression { field, .. } => field.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

/// Maximize `Σ objectives` over the box, subject to `inequalities <= 0` and
/// `equalities = 0`, with `t` held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationProblem {
    variables: Vec<Variable>,
    objectives: Vec<Expr>,
    inequalities: Vec<Expr>,
    equalities: Vec<Expr>,
    time: f64,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl OptimizationProblem {
    pub fn from_document(doc: &ProblemDocument) -> Result<Self, ProblemError> {
        if doc.variables.is_empty() {
            return Err(ProblemError::NoVariables);
        }
        if doc.objectives.is_empty() {
            return Err(ProblemError::NoObjectives);
        }
        if !doc.t.is_finite() {
            return Err(ProblemError::InvalidTime);
        }
        let mut variables = Vec::with_capacity(doc.variables.len());
        for spec in &doc.variables {
            if !is_identifier(&spec.name) || spec.name == TIME_SYMBOL {
                return Err(ProblemError::InvalidName(spec.name.clone()));
            }
            if variables.iter().any(|v: &Variable| v.name == spec.name) {
                return Err(ProblemError::DuplicateVariable(spec.name.clone()));
            }
            if !(spec.lo.is_finite() && spec.hi.is_finite() && spec.lo < spec.hi) {
                return Err(ProblemError::InvalidBounds {
                    name: spec.name.clone(),
                    lo: spec.lo,
                    hi: spec.hi,
                });
            }
            variables.push(Variable {
                name: spec.name.clone(),
                lower: spec.lo,
                upper: spec.hi,
            });
        }
        let names: Vec<&str> = variables.iter().map(|v| v.name.as_str()).collect();
        let parse_all = |field: &str, sources: &[String]| {
            sources
                .iter()
                .enumerate()
                .map(|(i, src)| {
                    parse_expression(src, &names).map_err(|source| ProblemError::Expression {
                        field: format!("{field}[{i}]"),
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Self {
            objectives: parse_all("objectives", &doc.objectives)?,
            inequalities: parse_all("inequalities", &doc.inequalities)?,
            equalities: parse_all("equalities", &doc.equalities)?,
            variables,
            time: doc.t,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn objectives(&self) -> &[Expr] {
        &self.objectives
    }

    pub fn inequalities(&self) -> &[Expr] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Expr] {
        &self.equalities
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Same problem at a different time value.
    pub fn at_time(&self, t: f64) -> Self {
        Self {
            time: t,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(vars: &[(&str, f64, f64)], objectives: &[&str]) -> ProblemDocument {
        ProblemDocument {
            variables: vars
                .iter()
                .map(|&(name, lo, hi)| VariableSpec {
                    name: name.into(),
                    lo,
                    hi,
                })
                .collect(),
            objectives: objectives.iter().map(|s| s.to_string()).collect(),
            inequalities: vec![],
            equalities: vec![],
            t: 0.0,
        }
    }

    #[test]
    fn invariants_enforced() {
        assert_eq!(
            OptimizationProblem::from_document(&doc(&[], &["1"])),
            Err(ProblemError::NoVariables)
        );
        assert_eq!(
            OptimizationProblem::from_document(&doc(&[("x", 0.0, 1.0)], &[])),
            Err(ProblemError::NoObjectives)
        );
        assert!(matches!(
            OptimizationProblem::from_document(&doc(&[("x", 1.0, 1.0)], &["x"])),
            Err(ProblemError::InvalidBounds { .. })
        ));
        assert!(matches!(
            OptimizationProblem::from_document(&doc(&[("x", 0.0, 1.0), ("x", 0.0, 2.0)], &["x"])),
            Err(ProblemError::DuplicateVariable(_))
        ));
        assert!(matches!(
            OptimizationProblem::from_document(&doc(&[("t", 0.0, 1.0)], &["t"])),
            Err(ProblemError::InvalidName(_))
        ));
    }

    #[test]
    fn expression_errors_carry_field() {
        let mut d = doc(&[("x", 0.0, 1.0)], &["x"]);
        d.inequalities = vec!["x - 1".into(), "x + y".into()];
        let err = OptimizationProblem::from_document(&d).unwrap_err();
        assert_eq!(err.field(), "inequalities[1]");
    }

    #[test]
    fn document_json_shape() {
        let d: ProblemDocument = serde_json::from_str(
            r#"{"variables":[{"name":"x","lo":0,"hi":1}],"objectives":["x"],"equalities":["x-0.25"],"t":2}"#,
        )
        .unwrap();
        let p = OptimizationProblem::from_document(&d).unwrap();
        assert_eq!(p.equalities().len(), 1);
        assert_eq!(p.time(), 2.0);
    }
}
