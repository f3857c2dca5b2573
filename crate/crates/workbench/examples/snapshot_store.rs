//! Files three snapshots into a temporary store, lists the index and reads
//! one back. Ids are kept when the document carries one and generated
//! otherwise.

use quasar_core::assessment::AssessmentSnapshot;
use quasar_workbench::store::SnapshotStore;
use quasar_workbench::FixedClock;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::temp_dir().join(format!("quasar-example-store-{}", std::process::id()));
    let store = SnapshotStore::open(&root)?;
    let clock = FixedClock("2026-03-31T12:00:00Z".parse()?);

    for name in [
        "snapshot-basic.json",
        "snapshot-zero.json",
        "snapshot-no-risk.json",
    ] {
        let snapshot: AssessmentSnapshot =
            serde_json::from_str(&std::fs::read_to_string(format!("{FIXTURES}/{name}"))?)?;
        let stored = store.add(snapshot, &clock)?;
        println!("added {:<20} from {name}", stored.id.unwrap_or_default());
    }

    println!();
    for entry in store.list()? {
        println!("{}  {:<20} {}", entry.timestamp, entry.id, entry.label);
    }

    let basic = store.get("basic")?;
    println!("\nbasic has {} areas", basic.domain_scores.technical.len());

    // a second add with the same id is refused
    if let Err(e) = store.add(basic, &clock) {
        println!("re-adding basic: {e}");
    }
    std::fs::remove_dir_all(&root)?;
    Ok(())
}
