use std::collections::HashSet;
use std::fmt;
use std::io::Read;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::InventoryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssetKind {
    KeyExchange,
    Signature,
    SymmetricCipher,
    Hash,
    Certificate,
    ProtocolEndpoint,
}

impl fmt::Display for AssetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssetKind::KeyExchange => "key-exchange",
            AssetKind::Signature => "signature",
            AssetKind::SymmetricCipher => "symmetric-cipher",
            AssetKind::Hash => "hash",
            AssetKind::Certificate => "certificate",
            AssetKind::ProtocolEndpoint => "protocol-endpoint",
        })
    }
}

/// One inventoried use of cryptography.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CryptoAsset {
    pub id: String,
    pub name: String,
    pub kind: AssetKind,
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<String>,
    /// Data sensitivity on `[0, 1]`.
    pub sensitivity: f64,
    /// Years the protected data must remain confidential.
    pub retention_years: f64,
    #[serde(default)]
    pub crypto_agile: bool,
    #[serde(default)]
    pub pqc_alternative_identified: bool,
    #[serde(default)]
    pub pilot_tested: bool,
    #[serde(default)]
    pub hybrid_deployed: bool,
    /// Expiry, for certificate assets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_after: Option<DateTime<Utc>>,
    /// Ids of assets this one relies on. Recorded, not discovered.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub depends_on: Vec<String>,
}

impl CryptoAsset {
    pub fn validate(&self) -> Result<(), InventoryError> {
        if self.id.trim().is_empty() {
            return Err(InventoryError::Invalid {
                id: self.id.clone(),
                message: "id must not be empty".into(),
            });
        }
        if self.key_bits == Some(0) {
            return Err(InventoryError::Invalid {
                id: self.id.clone(),
                message: "keyBits must be positive".into(),
            });
        }
        if !(self.sensitivity.is_finite() && (0.0..=1.0).contains(&self.sensitivity)) {
            return Err(InventoryError::Invalid {
                id: self.id.clone(),
                message: format!("sensitivity {} is outside [0, 1]", self.sensitivity),
            });
        }
        if !(self.retention_years.is_finite() && self.retention_years >= 0.0) {
            return Err(InventoryError::Invalid {
                id: self.id.clone(),
                message: format!("retentionYears {} must be >= 0", self.retention_years),
            });
        }
        Ok(())
    }
}

/// Checks every asset and id uniqueness; reports the first offending index.
pub fn validate_inventory(assets: &[CryptoAsset]) -> Result<(), (usize, InventoryError)> {
    let mut seen = HashSet::new();
    for (i, asset) in assets.iter().enumerate() {
        asset.validate().map_err(|e| (i, e))?;
        if !seen.insert(asset.id.as_str()) {
            return Err((i, InventoryError::DuplicateId(asset.id.clone())));
        }
    }
    Ok(())
}

/// Column order of the CSV inventory format.
pub const CSV_HEADER: [&str; 14] = [
    "id",
    "name",
    "kind",
    "algorithm",
    "keyBits",
    "protocol",
    "sensitivity",
    "retentionYears",
    "cryptoAgile",
    "pqcAlternativeIdentified",
    "pilotTested",
    "hybridDeployed",
    "notAfter",
    "dependsOn",
];

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CsvRow {
    id: String,
    name: String,
    kind: AssetKind,
    algorithm: String,
    key_bits: Option<u32>,
    protocol: Option<String>,
    sensitivity: f64,
    retention_years: f64,
    crypto_agile: bool,
    pqc_alternative_identified: bool,
    pilot_tested: bool,
    hybrid_deployed: bool,
    not_after: Option<DateTime<Utc>>,
    depends_on: Option<String>,
}

/// Reads the CSV inventory format: a header row equal to [`CSV_HEADER`],
/// `dependsOn` as a `;`-separated id list, empty cells for absent values.
pub fn read_inventory_csv(reader: impl Read) -> Result<Vec<CryptoAsset>, InventoryError> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers().map_err(|e| InventoryError::Csv(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(InventoryError::Csv(format!(
            "header must be exactly '{}'",
            CSV_HEADER.join(",")
        )));
    }
    let mut assets = Vec::new();
    for (line, row) in csv.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|e| InventoryError::Csv(format!("row {}: {e}", line + 2)))?;
        assets.push(CryptoAsset {
            id: row.id,
            name: row.name,
            kind: row.kind,
            algorithm: row.algorithm,
            key_bits: row.key_bits,
            protocol: row.protocol.filter(|p| !p.is_empty()),
            sensitivity: row.sensitivity,
            retention_years: row.retention_years,
            crypto_agile: row.crypto_agile,
            pqc_alternative_identified: row.pqc_alternative_identified,
            pilot_tested: row.pilot_tested,
            hybrid_deployed: row.hybrid_deployed,
            not_after: row.not_after,
            depends_on: row
                .depends_on
                .map(|d| {
                    d.split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect()
                })
                .unwrap_or_default(),
        });
    }
    Ok(assets)
}
