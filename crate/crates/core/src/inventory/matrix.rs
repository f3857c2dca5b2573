//! Technical readiness matrix derived from a classified inventory.
//!
//! Cell conventions (each a share over its own denominator):
//!
//! | row | col 1 | col 2 | col 3 |
//! |-----|-------|-------|-------|
//! | cryptographic | key-exchange assets post-quantum or hybrid | signature assets post-quantum or hybrid | symmetric/hash assets quantum-resistant |
//! | infrastructure | protocol-bearing assets on TLS 1.3 | crypto-agile assets | certificates post-quantum or expiring within a year |
//! | algorithm | PQC alternative identified | pilot tested | hybrid deployed |
//!
//! An empty denominator yields 0 and a coverage warning.

use chrono::{DateTime, Duration, Utc};
use serde::Serialize;

use super::{AssetKind, ClassifiedAsset, InventoryError, VulnerabilityClass};
use crate::assessment::{TechnicalReadinessMatrix, TECHNICAL_ROWS};
use crate::Warning;

const CELL_LABELS: [[&str; 3]; 3] = [
    [
        "key-exchange PQC/hybrid",
        "signature PQC/hybrid",
        "symmetric/hash quantum-resistant",
    ],
    [
        "TLS 1.3 share",
        "crypto-agile share",
        "certificates PQC or expiring < 1y",
    ],
    ["PQC alternative identified", "pilot tested", "hybrid deployed"],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Share {
    pub numerator: usize,
    pub denominator: usize,
}

impl Share {
    fn value(self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedMatrix {
    pub matrix: TechnicalReadinessMatrix,
    pub shares: [[Share; 3]; 3],
    pub warnings: Vec<Warning>,
}

fn share<'a>(
    items: impl Iterator<Item = &'a ClassifiedAsset>,
    mut include: impl FnMut(&ClassifiedAsset) -> bool,
    mut hit: impl FnMut(&ClassifiedAsset) -> bool,
) -> Share {
    let mut numerator = 0;
    let mut denominator = 0;
    for item in items {
        if include(item) {
            denominator += 1;
            if hit(item) {
                numerator += 1;
            }
        }
    }
    Share {
        numerator,
        denominator,
    }
}

/// Normalised protocol label, e.g. `TLSv1.3` and `tls 1.3` both become `TLS1.3`.
pub fn normalize_protocol(protocol: &str) -> String {
    let upper: String = protocol
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| c.to_ascii_uppercase())
        .collect();
    upper.replacen("TLSV", "TLS", 1)
}

/// Derives the 3x3 technical readiness matrix. `as_of` is the reference
/// instant for certificate expiry.
pub fn derive_technical_matrix(
    inventory: &[ClassifiedAsset],
    as_of: DateTime<Utc>,
) -> Result<DerivedMatrix, InventoryError> {
    if inventory.is_empty() {
        return Err(InventoryError::EmptyInventory);
    }
    let all = || inventory.iter();
    let pq_or_hybrid =
        |c: &ClassifiedAsset| c.vulnerability == VulnerabilityClass::PostQuantum || c.asset.hybrid_deployed;
    let year = Duration::days(365);

    let shares = [
        [
            share(all(), |c| c.asset.kind == AssetKind::KeyExchange, pq_or_hybrid),
            share(all(), |c| c.asset.kind == AssetKind::Signature, pq_or_hybrid),
            share(
                all(),
                |c| matches!(c.asset.kind, AssetKind::SymmetricCipher | AssetKind::Hash),
                |c| c.vulnerability == VulnerabilityClass::QuantumResistant,
            ),
        ],
        [
            share(
                all(),
                |c| c.asset.protocol.as_deref().is_some_and(|p| !p.trim().is_empty()),
                |c| c.asset.protocol.as_deref().map(normalize_protocol).as_deref() == Some("TLS1.3"),
            ),
            share(all(), |_| true, |c| c.asset.crypto_agile),
            share(
                all(),
                |c| c.asset.kind == AssetKind::Certificate,
                |c| {
                    c.vulnerability == VulnerabilityClass::PostQuantum
                        || c.asset.not_after.is_some_and(|t| t - as_of < year)
                },
            ),
        ],
        [
            share(all(), |_| true, |c| c.asset.pqc_alternative_identified),
            share(all(), |_| true, |c| c.asset.pilot_tested),
            share(all(), |_| true, |c| c.asset.hybrid_deployed),
        ],
    ];

    let mut warnings = Vec::new();
    for (r, row) in shares.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            if s.denominator == 0 {
                warnings.push(Warning::new(
                    format!("technicalMatrix[{r}][{c}]"),
                    format!(
                        "no assets in scope for {} cell '{}'; cell set to 0",
                        TECHNICAL_ROWS[r], CELL_LABELS[r][c]
                    ),
                ));
            }
        }
    }
    let matrix =
        TechnicalReadinessMatrix::new(shares.map(|row| row.map(Share::value))).expect("shares lie in [0, 1]");
    Ok(DerivedMatrix {
        matrix,
        shares,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inventory::{classify, CryptoAsset};

    fn asset(id: &str, kind: AssetKind, algorithm: &str) -> CryptoAsset {
        CryptoAsset {
            id: id.into(),
            name: id.into(),
            kind,
            algorithm: algorithm.into(),
            key_bits: None,
            protocol: None,
            sensitivity: 0.5,
            retention_years: 5.0,
            crypto_agile: false,
            pqc_alternative_identified: false,
            pilot_tested: false,
            hybrid_deployed: false,
            not_after: None,
            depends_on: vec![],
        }
    }

    fn now() -> DateTime<Utc> {
        "2026-01-01T00:00:00Z".parse().unwrap()
    }

    #[test]
    fn single_hybrid_kem() {
        let mut a = asset("k", AssetKind::KeyExchange, "ML-KEM");
        a.hybrid_deployed = true;
        let d = derive_technical_matrix(&[classify(&a)], now()).unwrap();
        assert_eq!(d.matrix.cell(0, 0).value(), 1.0);
        // signature, symmetric, protocol and certificate cells have no assets in scope
        assert_eq!(d.warnings.len(), 4);
    }

    #[test]
    fn all_rsa_no_flags_is_zero() {
        let inv: Vec<_> = ["a", "b", "c"]
            .iter()
            .map(|id| classify(&asset(id, AssetKind::Signature, "RSA")))
            .collect();
        let d = derive_technical_matrix(&inv, now()).unwrap();
        assert_eq!(d.matrix.values(), [[0.0; 3]; 3]);
        assert!(!d.warnings.is_empty());
    }

    #[test]
    fn certificate_expiry_window() {
        let mut soon = asset("c1", AssetKind::Certificate, "RSA");
        soon.not_after = Some("2026-06-01T00:00:00Z".parse().unwrap());
        let mut later = asset("c2", AssetKind::Certificate, "RSA");
        later.not_after = Some("2028-06-01T00:00:00Z".parse().unwrap());
        let pq = asset("c3", AssetKind::Certificate, "ML-DSA-65");
        let d = derive_technical_matrix(&[classify(&soon), classify(&later), classify(&pq)], now()).unwrap();
        assert_eq!(
            d.shares[1][2],
            Share {
                numerator: 2,
                denominator: 3
            }
        );
    }

    #[test]
    fn protocol_normalisation() {
        assert_eq!(normalize_protocol("TLSv1.3"), "TLS1.3");
        assert_eq!(normalize_protocol("tls 1.3"), "TLS1.3");
        assert_eq!(normalize_protocol("TLS1.2"), "TLS1.2");
    }

    #[test]
    fn empty_inventory_rejected() {
        assert_eq!(
            derive_technical_matrix(&[], now()),
            Err(InventoryError::EmptyInventory)
        );
    }
}
