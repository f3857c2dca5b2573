//! Scores an assessment snapshot and prints the headline numbers.
//!
//! ```text
//! cargo run -p quasar-core --example score_snapshot [snapshot.json]
//! ```

use quasar_core::assessment::AssessmentSnapshot;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/snapshot-basic.json").into());
    let snapshot: AssessmentSnapshot = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    let v = snapshot.validate()?;

    let pqr = v.pqr();
    println!(
        "PQR          {:.4} (normalized {:.4})",
        pqr.literal, pqr.normalized
    );
    let (pi, source) = v.performance_indicator();
    println!(
        "PI           {:.4} (rescaled {:.4}, from {source:?})",
        pi.literal, pi.rescaled
    );
    let (rs, source) = v.readiness_score();
    println!("RS           {rs:.4} (from {source:?})");

    if let Ok(risk) = v.risk_vector() {
        println!("risk vector  {:.4} {:.4} {:.4}", risk[0], risk[1], risk[2]);
    }
    if let Ok(gaps) = v.gaps() {
        for i in gaps.ranking {
            println!("gap          {:<24} {:+.4}", v.area_name(i), gaps.gaps[i]);
        }
    }
    for w in &v.warnings {
        println!("warning      {}: {}", w.field, w.message);
    }
    Ok(())
}
