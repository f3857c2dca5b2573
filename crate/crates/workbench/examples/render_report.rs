//! Scores a snapshot and prints the markdown report that `quasar report`
//! writes.
//!
//! ```text
//! cargo run -p quasar-workbench --example render_report [snapshot.json]
//! ```

use quasar_core::assessment::AssessmentSnapshot;
use quasar_workbench::report::{render_report, score_snapshot};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/snapshot-basic.json").into());
    let snapshot: AssessmentSnapshot = serde_json::from_str(&std::fs::read_to_string(&path)?)?;

    // the report falls back to this date only when the snapshot has no timestamp
    let report = score_snapshot(&snapshot, chrono::Utc::now())?;
    print!("{}", render_report(&snapshot, &report));
    Ok(())
}
