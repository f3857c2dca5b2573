//! Classifies a crypto inventory, ranks harvest-now-decrypt-later
//! exposure and derives the technical readiness matrix.

use quasar_core::inventory::{classify_all, derive_technical_matrix, rank_hndl, CryptoAsset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/inventory-mixed.json").into()
    });
    let assets: Vec<CryptoAsset> = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    let classified = classify_all(&assets);

    println!("{:<12} {:<16} {:<16} {:>6}", "id", "algorithm", "class", "HNDL");
    for c in rank_hndl(&classified, 5) {
        println!(
            "{:<12} {:<16} {:<16} {:>6.3}",
            c.asset.id,
            c.asset.algorithm,
            format!("{:?}", c.vulnerability),
            c.hndl_priority
        );
    }

    let derived = derive_technical_matrix(&classified, "2026-01-01T00:00:00Z".parse()?)?;
    println!();
    for (row, shares) in derived.shares.iter().enumerate() {
        let cells: Vec<String> = shares
            .iter()
            .map(|s| format!("{}/{}", s.numerator, s.denominator))
            .collect();
        let values: Vec<String> = derived.matrix.values()[row]
            .iter()
            .map(|v| format!("{v:.3}"))
            .collect();
        println!("row {row}: {}   = {}", cells.join("  "), values.join("  "));
    }
    for w in &derived.warnings {
        println!("warning: {}", w.message);
    }
    Ok(())
}
