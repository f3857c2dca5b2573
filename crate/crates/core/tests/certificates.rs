use std::path::PathBuf;

use quasar_core::inventory::{classify, parse_certificates, VulnerabilityClass};

fn fixture(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/certs")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn rsa_pem_matches_openssl_dump() {
    let scan = parse_certificates(&fixture("rsa2048-selfsigned.pem")).unwrap();
    assert_eq!(scan.records.len(), 1);
    assert!(scan.diagnostics.is_empty());
    let r = &scan.records[0];
    assert_eq!(r.public_key_algorithm, "RSA");
    assert_eq!(r.public_key_bits, 2048);
    assert_eq!(r.signature_algorithm, "RSA-SHA256");
    assert!(r.subject.contains("CN=quasar-fixture-rsa"));

    // the openssl text dump is the independent reference
    let dump = String::from_utf8(fixture("rsa2048-selfsigned.txt")).unwrap();
    assert!(dump.contains("Public-Key: (2048 bit)"));
    assert!(dump.contains("sha256WithRSAEncryption"));
    assert!(dump.contains(&r.not_after.format("%b %e %H:%M:%S %Y").to_string()));

    let asset = r.to_asset("cert-0");
    assert_eq!(classify(&asset).vulnerability, VulnerabilityClass::ShorBroken);
}

#[test]
fn der_and_pem_agree() {
    let pem = parse_certificates(&fixture("rsa2048-selfsigned.pem")).unwrap();
    let der = parse_certificates(&fixture("rsa2048-selfsigned.der")).unwrap();
    assert_eq!(pem.records, der.records);
}

#[test]
fn truncated_second_block_is_a_diagnostic() {
    let input = fixture("valid-plus-truncated.pem");
    let scan = parse_certificates(&input).unwrap();
    assert_eq!(scan.records.len(), 1);
    assert_eq!(scan.diagnostics.len(), 1);
    let offset = scan.diagnostics[0].offset;
    assert!(offset > 0);
    assert!(input[offset..].starts_with(b"-----BEGIN CERTIFICATE-----"));
}
