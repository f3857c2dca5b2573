//! Certificate inventory from PEM bundles or concatenated DER.

use base64::Engine;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use x509_parser::prelude::*;
use x509_parser::public_key::PublicKey;

use super::{AssetKind, CryptoAsset, InventoryError};
use crate::Warning;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateRecord {
    pub subject: String,
    pub issuer: String,
    pub signature_algorithm: String,
    pub public_key_algorithm: String,
    pub public_key_bits: u32,
    pub not_before: DateTime<Utc>,
    pub not_after: DateTime<Utc>,
    /// Position in the container, 0 for the first certificate.
    pub chain_depth: u32,
}

impl CertificateRecord {
    /// Inventory entry for this certificate. Certificates authenticate
    /// rather than protect stored data, so sensitivity and retention start
    /// at zero.
    pub fn to_asset(&self, id: impl Into<String>) -> CryptoAsset {
        CryptoAsset {
            id: id.into(),
            name: self.subject.clone(),
            kind: AssetKind::Certificate,
            algorithm: self.public_key_algorithm.clone(),
            key_bits: Some(self.public_key_bits),
            protocol: None,
            sensitivity: 0.0,
            retention_years: 0.0,
            crypto_agile: false,
            pqc_alternative_identified: false,
            pilot_tested: false,
            hybrid_deployed: false,
            not_after: Some(self.not_after),
            depends_on: Vec::new(),
        }
    }
}

/// A certificate entry that could not be read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertDiagnostic {
    /// Byte offset of the entry within the input.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CertificateScan {
    pub records: Vec<CertificateRecord>,
    pub diagnostics: Vec<CertDiagnostic>,
    pub warnings: Vec<Warning>,
}

fn public_key_name(oid: &str) -> Option<&'static str> {
    Some(match oid {
        "1.2.840.113549.1.1.1" | "1.2.840.113549.1.1.10" => "RSA",
        "1.2.840.10045.2.1" => "ECDSA",
        "1.2.840.10040.4.1" => "DSA",
        "1.2.840.10046.2.1" | "1.2.840.113549.1.3.1" => "DH",
        "1.3.101.110" => "X25519",
        "1.3.101.111" => "X448",
        "1.3.101.112" => "Ed25519",
        "1.3.101.113" => "Ed448",
        "2.16.840.1.101.3.4.4.1" => "ML-KEM-512",
        "2.16.840.1.101.3.4.4.2" => "ML-KEM-768",
        "2.16.840.1.101.3.4.4.3" => "ML-KEM-1024",
        _ => return pqc_signature_name(oid),
    })
}

fn pqc_signature_name(oid: &str) -> Option<&'static str> {
    Some(match oid {
        "2.16.840.1.101.3.4.3.17" => "ML-DSA-44",
        "2.16.840.1.101.3.4.3.18" => "ML-DSA-65",
        "2.16.840.1.101.3.4.3.19" => "ML-DSA-87",
        _ => {
            let arc: u32 = oid.strip_prefix("2.16.840.1.101.3.4.3.")?.parse().ok()?;
            return (20..=31).contains(&arc).then_some("SLH-DSA");
        }
    })
}

fn signature_name(oid: &str) -> Option<&'static str> {
    Some(match oid {
        "1.2.840.113549.1.1.4" => "RSA-MD5",
        "1.2.840.113549.1.1.5" => "RSA-SHA1",
        "1.2.840.113549.1.1.11" => "RSA-SHA256",
        "1.2.840.113549.1.1.12" => "RSA-SHA384",
        "1.2.840.113549.1.1.13" => "RSA-SHA512",
        "1.2.840.113549.1.1.10" => "RSA-PSS",
        "1.2.840.10045.4.1" => "ECDSA-SHA1",
        "1.2.840.10045.4.3.2" => "ECDSA-SHA256",
        "1.2.840.10045.4.3.3" => "ECDSA-SHA384",
        "1.2.840.10045.4.3.4" => "ECDSA-SHA512",
        "2.16.840.1.101.3.4.3.2" => "DSA-SHA256",
        "1.3.101.112" => "Ed25519",
        "1.3.101.113" => "Ed448",
        _ => return pqc_signature_name(oid),
    })
}

fn timestamp(t: ASN1Time) -> DateTime<Utc> {
    DateTime::from_timestamp(t.timestamp(), 0).unwrap_or(DateTime::<Utc>::MIN_UTC)
}

/// Extracts a record from one parsed certificate.
pub fn record_from_certificate(
    cert: &X509Certificate<'_>,
    chain_depth: u32,
) -> Result<CertificateRecord, String> {
    let spki = cert.public_key();
    let key_oid = spki.algorithm.algorithm.to_id_string();
    let sig_oid = cert.signature_algorithm.algorithm.to_id_string();
    let bits = match spki.parsed() {
        Ok(PublicKey::RSA(rsa)) => rsa.key_size(),
        Ok(PublicKey::EC(ec)) => ec.key_size(),
        _ => spki.subject_public_key.data.len() * 8,
    };
    if bits == 0 {
        return Err("public key is empty".into());
    }
    let not_before = timestamp(cert.validity().not_before);
    let not_after = timestamp(cert.validity().not_after);
    if not_before >= not_after {
        return Err(format!(
            "notBefore {not_before} is not before notAfter {not_after}"
        ));
    }
    Ok(CertificateRecord {
        subject: cert.subject().to_string(),
        issuer: cert.issuer().to_string(),
        signature_algorithm: signature_name(&sig_oid).map_or(sig_oid.clone(), String::from),
        public_key_algorithm: public_key_name(&key_oid).map_or(key_oid.clone(), String::from),
        public_key_bits: u32::try_from(bits).unwrap_or(u32::MAX),
        not_before,
        not_after,
        chain_depth,
    })
}

fn parse_der(der: &[u8], depth: u32) -> Result<(CertificateRecord, usize), String> {
    let (rest, cert) = X509Certificate::from_der(der).map_err(|e| e.to_string())?;
    let consumed = der.len() - rest.len();
    record_from_certificate(&cert, depth).map(|r| (r, consumed))
}

const BEGIN: &str = "-----BEGIN ";
const END: &str = "-----END ";

/// Parses every certificate in `input`, which is either PEM text (one or more
/// `CERTIFICATE` blocks) or one or more concatenated DER certificates.
///
/// Unreadable entries become diagnostics. The call fails only when entries
/// were present and none could be read.
pub fn parse_certificates(input: &[u8]) -> Result<CertificateScan, InventoryError> {
    let mut scan = CertificateScan::default();
    if input.iter().all(u8::is_ascii_whitespace) {
        scan.warnings
            .push(Warning::new("", "input contains zero certificates"));
        return Ok(scan);
    }
    let pem = std::str::from_utf8(input).ok().filter(|s| s.contains(BEGIN));
    match pem {
        Some(text) => parse_pem(text, &mut scan),
        None => parse_der_stream(input, &mut scan),
    }
    if scan.records.is_empty() {
        if let Some(first) = scan.diagnostics.first() {
            return Err(InventoryError::Format {
                offset: first.offset,
                message: first.message.clone(),
            });
        }
        scan.warnings
            .push(Warning::new("", "input contains zero certificates"));
    }
    Ok(scan)
}

fn parse_der_stream(input: &[u8], scan: &mut CertificateScan) {
    let mut offset = 0;
    let mut depth = 0;
    while offset < input.len() {
        match parse_der(&input[offset..], depth) {
            Ok((record, consumed)) => {
                scan.records.push(record);
                offset += consumed;
                depth += 1;
            }
            Err(message) => {
                // no framing to resynchronise on, so the rest is lost
                scan.diagnostics.push(CertDiagnostic { offset, message });
                break;
            }
        }
    }
}

fn parse_pem(text: &str, scan: &mut CertificateScan) {
    let mut cursor = 0;
    let mut depth = 0;
    while let Some(found) = text[cursor..].find(BEGIN) {
        let start = cursor + found;
        let line_end = text[start..].find('\n').map_or(text.len(), |i| start + i);
        let label = text[start + BEGIN.len()..line_end]
            .trim_end()
            .trim_end_matches('-')
            .to_string();
        let end_marker = format!("{END}{label}-----");
        let Some(end_rel) = text[line_end..].find(&end_marker) else {
            scan.diagnostics.push(CertDiagnostic {
                offset: start,
                message: format!("unterminated PEM block '{label}'"),
            });
            break;
        };
        let body_end = line_end + end_rel;
        cursor = body_end + end_marker.len();

        if label != "CERTIFICATE" && label != "X509 CERTIFICATE" && label != "TRUSTED CERTIFICATE" {
            scan.warnings.push(Warning::new(
                "",
                format!("skipped non-certificate PEM block '{label}' at offset {start}"),
            ));
            continue;
        }
        let body: String = text[line_end..body_end]
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let der = match base64::engine::general_purpose::STANDARD.decode(body.as_bytes()) {
            Ok(der) => der,
            Err(e) => {
                scan.diagnostics.push(CertDiagnostic {
                    offset: start,
                    message: format!("invalid base64: {e}"),
                });
                continue;
            }
        };
        match parse_der(&der, depth) {
            Ok((record, _)) => {
                scan.records.push(record);
                depth += 1;
            }
            Err(message) => scan.diagnostics.push(CertDiagnostic {
                offset: start,
                message,
            }),
        }
    }
}
