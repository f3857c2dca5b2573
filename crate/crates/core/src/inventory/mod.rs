//! Cryptographic asset inventory: ingestion, quantum-vulnerability
//! classification, harvest-now-decrypt-later ranking, certificate parsing,
//! TLS endpoint probing and technical readiness matrix derivation.

mod asset;
mod certs;
mod classify;
mod matrix;
mod probe;

pub use asset::{read_inventory_csv, validate_inventory, AssetKind, CryptoAsset, CSV_HEADER};
pub use certs::{
    parse_certificates, record_from_certificate, CertDiagnostic, CertificateRecord, CertificateScan,
};
pub use classify::{
    algorithm_family, classify, classify_all, classify_with, hndl_order, rank_hndl, AlgorithmFamily,
    ClassifiedAsset, HndlConfig, VulnerabilityClass,
};
pub use matrix::{derive_technical_matrix, normalize_protocol, DerivedMatrix, Share};
pub use probe::{
    key_exchange_algorithm, parse_target, probe_endpoint, probe_many, ProbeError, ProbeOptions, ProbeOutcome,
    ProbeResult, DEFAULT_CONCURRENCY,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InventoryError {
    #[error("asset '{id}': {message}")]
    Invalid { id: String, message: String },
    #[error("duplicate asset id '{0}'")]
    DuplicateId(String),
    #[error("inventory is empty")]
    EmptyInventory,
    #[error("csv: {0}")]
    Csv(String),
    #[error("unreadable certificate input at byte offset {offset}: {message}")]
    Format { offset: usize, message: String },
}
