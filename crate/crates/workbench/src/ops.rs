//! Request handling shared by the CLI and the HTTP API.

use std::path::Path;

use chrono::{DateTime, Utc};
use quasar_core::inventory::{
    classify_all, derive_technical_matrix, rank_hndl, read_inventory_csv, validate_inventory,
    ClassifiedAsset, CryptoAsset, DerivedMatrix,
};
use quasar_core::optimizer::{solve, OptimizationProblem, ProblemDocument, Solution};
use serde::{Deserialize, Serialize};

use crate::document::{self, from_json};
use crate::error::{Error, Result};

/// Classified inventory with its derived matrix and exposure ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub as_of: DateTime<Utc>,
    pub classified: Vec<ClassifiedAsset>,
    pub matrix: DerivedMatrix,
    /// Asset ids by descending harvest-now-decrypt-later priority.
    pub ranking: Vec<String>,
}

/// Body of a classification request: a bare asset list, or the list with
/// the reference instant for certificate expiry.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ClassifyRequest {
    Assets(Vec<CryptoAsset>),
    Dated {
        assets: Vec<CryptoAsset>,
        #[serde(rename = "asOf")]
        as_of: DateTime<Utc>,
    },
}

pub fn classify_inventory(assets: &[CryptoAsset], as_of: DateTime<Utc>) -> Result<Classification> {
    validate_inventory(assets).map_err(|(i, e)| Error::input(format!("[{i}]"), e))?;
    let classified = classify_all(assets);
    let matrix = derive_technical_matrix(&classified, as_of).map_err(|e| Error::input("", e))?;
    let ranking = rank_hndl(&classified, classified.len())
        .into_iter()
        .map(|c| c.asset.id)
        .collect();
    Ok(Classification {
        as_of,
        classified,
        matrix,
        ranking,
    })
}

/// Reads an inventory file: CSV when the extension is `.csv`, JSON otherwise.
pub fn load_inventory(path: &Path) -> Result<Vec<CryptoAsset>> {
    let path = document::resolve(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let file =
            std::fs::File::open(&path).map_err(|e| Error::input("", format!("{}: {e}", path.display())))?;
        read_inventory_csv(file).map_err(|e| Error::input("", e))
    } else {
        from_json(&document::read_text(&path)?)
    }
}

pub fn problem_from(doc: &ProblemDocument) -> Result<OptimizationProblem> {
    OptimizationProblem::from_document(doc).map_err(|e| Error::input(e.field(), e))
}

pub fn optimize(doc: &ProblemDocument) -> Result<Solution> {
    let problem = problem_from(doc)?;
    solve(&problem).map_err(|e| Error::input("", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dated_and_bare_requests() {
        let bare: ClassifyRequest = serde_json::from_str(
            r#"[{"id":"a","name":"a","kind":"hash","algorithm":"SHA-256","sensitivity":0.5,"retentionYears":1}]"#,
        )
        .unwrap();
        assert!(matches!(bare, ClassifyRequest::Assets(ref a) if a.len() == 1));
        let dated: ClassifyRequest =
            serde_json::from_str(r#"{"assets":[],"asOf":"2026-01-01T00:00:00Z"}"#).unwrap();
        assert!(matches!(dated, ClassifyRequest::Dated { .. }));
    }

    #[test]
    fn bad_expression_names_its_field() {
        let doc: ProblemDocument =
            serde_json::from_str(r#"{"variables":[{"name":"x","lo":0,"hi":1}],"objectives":["x +"]}"#)
                .unwrap();
        assert_eq!(optimize(&doc).unwrap_err().field(), "objectives[0]");
    }
}
