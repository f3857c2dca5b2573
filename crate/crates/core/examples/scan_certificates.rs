//! Reads a PEM or DER file and lists every certificate with its
//! quantum-vulnerability class. Malformed blocks are reported, not fatal.

use quasar_core::inventory::{classify, parse_certificates};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/certs/valid-plus-truncated.pem"
        )
        .into()
    });
    let scan = parse_certificates(&std::fs::read(&path)?)?;

    for (i, record) in scan.records.iter().enumerate() {
        let class = classify(&record.to_asset(format!("cert-{i}"))).vulnerability;
        println!("subject    {}", record.subject);
        println!(
            "key        {} {} bits",
            record.public_key_algorithm, record.public_key_bits
        );
        println!("signature  {}", record.signature_algorithm);
        println!("expires    {}", record.not_after);
        println!("class      {class:?}\n");
    }
    for d in &scan.diagnostics {
        println!("skipped: {d:?}");
    }
    Ok(())
}
