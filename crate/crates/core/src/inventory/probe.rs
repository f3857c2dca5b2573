//! Single-handshake TLS probing.
//!
//! The probe records what an endpoint negotiates; it never validates the
//! certificate chain.

use std::io;
use std::net::{TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use rustls::client::danger::{HandshakeSignatureValid, ServerCertVerified, ServerCertVerifier};
use rustls::crypto::{verify_tls12_signature, verify_tls13_signature, CryptoProvider};
use rustls::pki_types::{CertificateDer, ServerName, UnixTime};
use rustls::{
    ClientConfig, ClientConnection, DigitallySignedStruct, NamedGroup, ProtocolVersion, SignatureScheme,
};
use serde::Serialize;
use x509_parser::prelude::{FromDer, X509Certificate};

use super::certs::record_from_certificate;
use super::{AssetKind, CryptoAsset};

/// Default number of probes in flight.
pub const DEFAULT_CONCURRENCY: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("timeout must be positive")]
    InvalidTimeout,
    #[error("cannot resolve {0}")]
    Resolve(String),
    #[error("connection refused")]
    Refused,
    #[error("timed out")]
    Timeout,
    #[error("handshake failed: {0}")]
    Handshake(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<io::Error> for ProbeError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::ConnectionRefused => ProbeError::Refused,
            io::ErrorKind::TimedOut | io::ErrorKind::WouldBlock => ProbeError::Timeout,
            io::ErrorKind::InvalidData => ProbeError::Handshake(e.to_string()),
            _ => ProbeError::Io(e.to_string()),
        }
    }
}

/// Attributes applied to the asset a probe produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOptions {
    pub timeout: Duration,
    pub sensitivity: f64,
    pub retention_years: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(5),
            sensitivity: 0.5,
            retention_years: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeResult {
    pub host: String,
    pub port: u16,
    pub protocol_version: String,
    /// Negotiated key-exchange group, e.g. `X25519`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key_exchange_group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf_signature_algorithm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf_public_key_algorithm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf_public_key_bits: Option<u32>,
    pub asset: CryptoAsset,
}

#[derive(Debug)]
struct RecordOnly(Arc<CryptoProvider>);

impl ServerCertVerifier for RecordOnly {
    fn verify_server_cert(
        &self,
        _end_entity: &CertificateDer<'_>,
        _intermediates: &[CertificateDer<'_>],
        _server_name: &ServerName<'_>,
        _ocsp_response: &[u8],
        _now: UnixTime,
    ) -> Result<ServerCertVerified, rustls::Error> {
        Ok(ServerCertVerified::assertion())
    }

    fn verify_tls12_signature(
        &self,
        message: &[u8],
        cert: &CertificateDer<'_>,
        dss: &DigitallySignedStruct,
    ) -> Result<HandshakeSignatureValid, rustls::Error> {
        verify_tls12_signature(message, cert, dss, &self.0.signature_verification_algorithms)
    }

    fn verify_tls13_signature(
        &self,
        message: &[u8],
        cert: &CertificateDer<'_>,
        dss: &DigitallySignedStruct,
    ) -> Result<HandshakeSignatureValid, rustls::Error> {
        verify_tls13_signature(message, cert, dss, &self.0.signature_verification_algorithms)
    }

    fn supported_verify_schemes(&self) -> Vec<SignatureScheme> {
        self.0.signature_verification_algorithms.supported_schemes()
    }
}

fn client_config() -> Result<Arc<ClientConfig>, ProbeError> {
    let provider = Arc::new(rustls::crypto::ring::default_provider());
    let config = ClientConfig::builder_with_provider(provider.clone())
        .with_protocol_versions(rustls::ALL_VERSIONS)
        .map_err(|e| ProbeError::Handshake(e.to_string()))?
        .dangerous()
        .with_custom_certificate_verifier(Arc::new(RecordOnly(provider)))
        .with_no_client_auth();
    Ok(Arc::new(config))
}

fn version_label(version: Option<ProtocolVersion>) -> String {
    match version {
        Some(ProtocolVersion::TLSv1_3) => "TLS1.3".into(),
        Some(ProtocolVersion::TLSv1_2) => "TLS1.2".into(),
        Some(other) => format!("{other:?}"),
        None => "unknown".into(),
    }
}

/// Maps a negotiated group to the algorithm name used by the classifier and
/// whether it is a hybrid classical + post-quantum group.
pub fn key_exchange_algorithm(group: Option<NamedGroup>) -> (String, bool) {
    let Some(group) = group else {
        // no ephemeral group: static RSA key transport
        return ("RSA".into(), false);
    };
    let name = format!("{group:?}");
    let upper = name.to_ascii_uppercase();
    if upper.contains("MLKEM") || upper.contains("KYBER") {
        ("ML-KEM".into(), true)
    } else if upper.starts_with("FFDHE") {
        ("DH".into(), false)
    } else if upper.starts_with("SECP") || upper.starts_with("X25519") || upper.starts_with("X448") {
        ("ECDH".into(), false)
    } else {
        (name, false)
    }
}

/// Performs one TLS handshake with `host:port` and records what was
/// negotiated. Never retries.
pub fn probe_endpoint(host: &str, port: u16, options: &ProbeOptions) -> Result<ProbeResult, ProbeError> {
    if options.timeout.is_zero() {
        return Err(ProbeError::InvalidTimeout);
    }
    let addr = (host, port)
        .to_socket_addrs()
        .map_err(|e| ProbeError::Resolve(format!("{host}:{port}: {e}")))?
        .next()
        .ok_or_else(|| ProbeError::Resolve(format!("{host}:{port}")))?;
    let mut sock = TcpStream::connect_timeout(&addr, options.timeout)?;
    sock.set_read_timeout(Some(options.timeout))?;
    sock.set_write_timeout(Some(options.timeout))?;

    let server_name =
        ServerName::try_from(host.to_string()).map_err(|e| ProbeError::Resolve(format!("{host}: {e}")))?;
    let mut conn = ClientConnection::new(client_config()?, server_name)
        .map_err(|e| ProbeError::Handshake(e.to_string()))?;
    while conn.is_handshaking() {
        conn.complete_io(&mut sock)?;
    }

    let group = conn.negotiated_key_exchange_group().map(|g| g.name());
    let (algorithm, hybrid) = key_exchange_algorithm(group);
    let protocol = version_label(conn.protocol_version());
    let leaf = conn
        .peer_certificates()
        .and_then(|chain| chain.first())
        .and_then(|der| X509Certificate::from_der(der.as_ref()).ok())
        .and_then(|(_, cert)| record_from_certificate(&cert, 0).ok());

    let asset = CryptoAsset {
        id: format!("tls:{host}:{port}"),
        name: format!("{host}:{port}"),
        kind: AssetKind::ProtocolEndpoint,
        algorithm,
        key_bits: None,
        protocol: Some(protocol.clone()),
        sensitivity: options.sensitivity,
        retention_years: options.retention_years,
        crypto_agile: false,
        pqc_alternative_identified: hybrid,
        pilot_tested: false,
        hybrid_deployed: hybrid,
        not_after: None,
        depends_on: Vec::new(),
    };
    Ok(ProbeResult {
        host: host.to_string(),
        port,
        protocol_version: protocol,
        key_exchange_group: group.map(|g| format!("{g:?}")),
        leaf_signature_algorithm: leaf.as_ref().map(|l| l.signature_algorithm.clone()),
        leaf_public_key_algorithm: leaf.as_ref().map(|l| l.public_key_algorithm.clone()),
        leaf_public_key_bits: leaf.as_ref().map(|l| l.public_key_bits),
        asset,
    })
}

pub type ProbeOutcome = ((String, u16), Result<ProbeResult, ProbeError>);

/// Probes every target with at most `limit` handshakes in flight. Results
/// are ordered by `(host, port)` regardless of completion order.
pub fn probe_many(targets: &[(String, u16)], options: &ProbeOptions, limit: usize) -> Vec<ProbeOutcome> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(targets.len()));
    let workers = limit.max(1).min(targets.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((host, port)) = targets.get(i) else { break };
                let outcome = probe_endpoint(host, *port, options);
                results
                    .lock()
                    .expect("probe result lock")
                    .push(((host.clone(), *port), outcome));
            });
        }
    });
    let mut results = results.into_inner().expect("probe result lock");
    results.sort_by(|a, b| a.0.cmp(&b.0));
    results
}

/// Splits `host:port`, accepting bracketed IPv6 literals.
pub fn parse_target(target: &str) -> Option<(String, u16)> {
    let (host, port) = target.rsplit_once(':')?;
    let host = host.trim_start_matches('[').trim_end_matches(']');
    if host.is_empty() {
        return None;
    }
    Some((host.to_string(), port.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_timeout_is_input_error() {
        let opts = ProbeOptions {
            timeout: Duration::ZERO,
            ..ProbeOptions::default()
        };
        assert_eq!(
            probe_endpoint("127.0.0.1", 443, &opts),
            Err(ProbeError::InvalidTimeout)
        );
    }

    #[test]
    fn group_mapping() {
        assert_eq!(key_exchange_algorithm(Some(NamedGroup::X25519)).0, "ECDH");
        assert_eq!(key_exchange_algorithm(Some(NamedGroup::secp384r1)).0, "ECDH");
        assert_eq!(key_exchange_algorithm(Some(NamedGroup::FFDHE2048)).0, "DH");
        assert_eq!(key_exchange_algorithm(None).0, "RSA");
    }

    #[test]
    fn targets() {
        assert_eq!(parse_target("example.org:443"), Some(("example.org".into(), 443)));
        assert_eq!(parse_target("[::1]:8443"), Some(("::1".into(), 8443)));
        assert_eq!(parse_target("nohost"), None);
        assert_eq!(parse_target(":443"), None);
    }
}
