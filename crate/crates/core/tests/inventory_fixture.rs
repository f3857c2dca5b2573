//! The 12-asset mixed inventory against its hand-tallied expectations.

use std::path::PathBuf;

use quasar_core::inventory::{
    classify_all, derive_technical_matrix, rank_hndl, read_inventory_csv, validate_inventory, CryptoAsset,
};
use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load_json() -> Vec<CryptoAsset> {
    let text = std::fs::read_to_string(fixtures().join("inventory-mixed.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn expected() -> Value {
    let text = std::fs::read_to_string(fixtures().join("inventory-mixed.expected.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn csv_and_json_describe_the_same_inventory() {
    let csv =
        read_inventory_csv(std::fs::File::open(fixtures().join("inventory-mixed.csv")).unwrap()).unwrap();
    assert_eq!(csv, load_json());
}

#[test]
fn labels_and_priorities_match_tally() {
    let assets = load_json();
    validate_inventory(&assets).unwrap();
    let expected = expected();
    let classified = classify_all(&assets);
    assert_eq!(classified.len(), 12);
    for c in &classified {
        let want = &expected["labels"][&c.asset.id];
        assert_eq!(
            serde_json::to_value(c.vulnerability).unwrap(),
            want["vulnerability"],
            "{}",
            c.asset.id
        );
        let p = want["hndlPriority"].as_f64().unwrap();
        assert!(
            (c.hndl_priority - p).abs() <= 1e-12,
            "{}: {} vs {p}",
            c.asset.id,
            c.hndl_priority
        );
        let level = want.get("nistLevelEquivalent").and_then(Value::as_u64);
        assert_eq!(c.nist_level_equivalent.map(u64::from), level, "{}", c.asset.id);
    }

    let ranking: Vec<String> = rank_hndl(&classified, 12)
        .into_iter()
        .map(|c| c.asset.id)
        .collect();
    let want: Vec<String> = expected["hndlRanking"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(ranking, want);
}

#[test]
fn matrix_shares_match_tally() {
    let expected = expected();
    let as_of = expected["asOf"].as_str().unwrap().parse().unwrap();
    let derived = derive_technical_matrix(&classify_all(&load_json()), as_of).unwrap();
    assert!(derived.warnings.is_empty());
    for r in 0..3 {
        for c in 0..3 {
            let pair = &expected["shares"][r][c];
            let (n, d) = (
                pair[0].as_u64().unwrap() as usize,
                pair[1].as_u64().unwrap() as usize,
            );
            assert_eq!(
                (derived.shares[r][c].numerator, derived.shares[r][c].denominator),
                (n, d)
            );
            assert_eq!(derived.matrix.cell(r, c).value(), n as f64 / d as f64);
        }
    }
}
