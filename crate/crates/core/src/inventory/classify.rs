use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CryptoAsset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VulnerabilityClass {
    /// Public-key schemes whose hardness falls to Shor's algorithm.
    ShorBroken,
    /// Symmetric primitives with effective strength roughly halved by Grover.
    GroverWeakened,
    /// Broken by classical cryptanalysis.
    ClassicallyBroken,
    /// Symmetric primitives with enough margin against Grover.
    QuantumResistant,
    PostQuantum,
    Unknown,
}

impl VulnerabilityClass {
    /// Counts as safe for harvest-now-decrypt-later purposes.
    pub fn is_quantum_safe(self) -> bool {
        matches!(self, Self::QuantumResistant | Self::PostQuantum)
    }
}

impl fmt::Display for VulnerabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Algorithm families recognised by the rule table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmFamily {
    Rsa,
    Dsa,
    Dh,
    Ecdh,
    Ecdsa,
    EdDsa,
    Ecc,
    Rainbow,
    Sike,
    /// Key size from the name (e.g. `AES-256-GCM`) when present.
    Aes(Option<u32>),
    Sha256,
    Sha384,
    Sha512,
    Sha3,
    ChaCha20,
    TripleDes,
    MlKem,
    MlDsa,
    SlhDsa,
    Xmss,
    McEliece,
    FrodoKem,
}

impl AlgorithmFamily {
    fn slug(self) -> &'static str {
        match self {
            Self::Rsa => "rsa",
            Self::Dsa => "dsa",
            Self::Dh => "dh",
            Self::Ecdh => "ecdh",
            Self::Ecdsa => "ecdsa",
            Self::EdDsa => "eddsa",
            Self::Ecc => "ecc",
            Self::Rainbow => "rainbow",
            Self::Sike => "sike",
            Self::Aes(_) => "aes",
            Self::Sha256 => "sha-256",
            Self::Sha384 => "sha-384",
            Self::Sha512 => "sha-512",
            Self::Sha3 => "sha3",
            Self::ChaCha20 => "chacha20",
            Self::TripleDes => "3des",
            Self::MlKem => "ml-kem",
            Self::MlDsa => "ml-dsa",
            Self::SlhDsa => "slh-dsa",
            Self::Xmss => "xmss",
            Self::McEliece => "mceliece",
            Self::FrodoKem => "frodokem",
        }
    }
}

/// Name prefixes, matched in order against the upper-cased algorithm name.
/// A prefix matches the whole name or is followed by `-`, `/` or a digit.
const ALIASES: &[(&str, AlgorithmFamily)] = &[
    ("RSASSA-PSS", AlgorithmFamily::Rsa),
    ("RSAES-OAEP", AlgorithmFamily::Rsa),
    ("RSA-PSS", AlgorithmFamily::Rsa),
    ("RSA", AlgorithmFamily::Rsa),
    ("ECDHE", AlgorithmFamily::Ecdh),
    ("ECDH", AlgorithmFamily::Ecdh),
    ("X25519", AlgorithmFamily::Ecdh),
    ("X448", AlgorithmFamily::Ecdh),
    ("ECDSA", AlgorithmFamily::Ecdsa),
    ("EDDSA", AlgorithmFamily::EdDsa),
    ("ED25519", AlgorithmFamily::EdDsa),
    ("ED448", AlgorithmFamily::EdDsa),
    ("ECC", AlgorithmFamily::Ecc),
    ("DIFFIE-HELLMAN", AlgorithmFamily::Dh),
    ("FFDHE", AlgorithmFamily::Dh),
    ("DHE", AlgorithmFamily::Dh),
    ("DH", AlgorithmFamily::Dh),
    ("DSA", AlgorithmFamily::Dsa),
    ("RAINBOW", AlgorithmFamily::Rainbow),
    ("SIKE", AlgorithmFamily::Sike),
    ("SHA-256", AlgorithmFamily::Sha256),
    ("SHA256", AlgorithmFamily::Sha256),
    ("SHA-384", AlgorithmFamily::Sha384),
    ("SHA384", AlgorithmFamily::Sha384),
    ("SHA-512", AlgorithmFamily::Sha512),
    ("SHA512", AlgorithmFamily::Sha512),
    ("SHA3", AlgorithmFamily::Sha3),
    ("SHA-3", AlgorithmFamily::Sha3),
    ("CHACHA20", AlgorithmFamily::ChaCha20),
    ("3DES", AlgorithmFamily::TripleDes),
    ("TRIPLE-DES", AlgorithmFamily::TripleDes),
    ("TRIPLEDES", AlgorithmFamily::TripleDes),
    ("DES-EDE3", AlgorithmFamily::TripleDes),
    ("TDEA", AlgorithmFamily::TripleDes),
    ("ML-KEM", AlgorithmFamily::MlKem),
    ("MLKEM", AlgorithmFamily::MlKem),
    ("KYBER", AlgorithmFamily::MlKem),
    ("ML-DSA", AlgorithmFamily::MlDsa),
    ("MLDSA", AlgorithmFamily::MlDsa),
    ("DILITHIUM", AlgorithmFamily::MlDsa),
    ("SLH-DSA", AlgorithmFamily::SlhDsa),
    ("SLHDSA", AlgorithmFamily::SlhDsa),
    ("SPHINCS+", AlgorithmFamily::SlhDsa),
    ("SPHINCS", AlgorithmFamily::SlhDsa),
    ("XMSS", AlgorithmFamily::Xmss),
    ("CLASSIC-MCELIECE", AlgorithmFamily::McEliece),
    ("MCELIECE", AlgorithmFamily::McEliece),
    ("FRODOKEM", AlgorithmFamily::FrodoKem),
];

/// Resolves an algorithm name to its family, case-insensitively.
pub fn algorithm_family(name: &str) -> Option<AlgorithmFamily> {
    let norm: String = name
        .trim()
        .chars()
        .map(|c| match c {
            '_' | ' ' => '-',
            c => c.to_ascii_uppercase(),
        })
        .collect();
    if let Some(rest) = norm.strip_prefix("AES") {
        if rest.is_empty() || rest.starts_with(['-', '/']) || rest.starts_with(|c: char| c.is_ascii_digit()) {
            let digits: String = rest
                .trim_start_matches(['-', '/'])
                .chars()
                .take_while(char::is_ascii_digit)
                .collect();
            return Some(AlgorithmFamily::Aes(digits.parse().ok()));
        }
        return None;
    }
    ALIASES.iter().find_map(|&(prefix, family)| {
        let rest = norm.strip_prefix(prefix)?;
        let boundary =
            rest.is_empty() || rest.starts_with(['-', '/']) || rest.starts_with(|c: char| c.is_ascii_digit());
        boundary.then_some(family)
    })
}

/// Priority multipliers and horizon for harvest-now-decrypt-later ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HndlConfig {
    pub broken_weight: f64,
    pub unknown_weight: f64,
    pub grover_weight: f64,
    pub horizon_years: f64,
}

impl Default for HndlConfig {
    fn default() -> Self {
        Self {
            broken_weight: 1.0,
            unknown_weight: 0.6,
            grover_weight: 0.4,
            horizon_years: 10.0,
        }
    }
}

impl HndlConfig {
    fn weight(&self, class: VulnerabilityClass) -> f64 {
        match class {
            VulnerabilityClass::ShorBroken | VulnerabilityClass::ClassicallyBroken => self.broken_weight,
            VulnerabilityClass::Unknown => self.unknown_weight,
            VulnerabilityClass::GroverWeakened => self.grover_weight,
            VulnerabilityClass::QuantumResistant | VulnerabilityClass::PostQuantum => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifiedAsset {
    pub asset: CryptoAsset,
    pub vulnerability: VulnerabilityClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nist_level_equivalent: Option<u8>,
    pub hndl_priority: f64,
    /// Identifier of the rule that fired.
    pub rationale: String,
}

pub fn classify(asset: &CryptoAsset) -> ClassifiedAsset {
    classify_with(asset, &HndlConfig::default())
}

pub fn classify_with(asset: &CryptoAsset, config: &HndlConfig) -> ClassifiedAsset {
    use AlgorithmFamily as F;
    use VulnerabilityClass as V;

    let family = algorithm_family(&asset.algorithm);
    let (vulnerability, nist_level, rule) = match family {
        Some(f @ (F::Rsa | F::Dsa | F::Dh | F::Ecdh | F::Ecdsa | F::EdDsa | F::Ecc)) => {
            (V::ShorBroken, None, format!("shor-broken:{}", f.slug()))
        }
        Some(f @ (F::Rainbow | F::Sike)) => (
            V::ClassicallyBroken,
            None,
            format!("classically-broken:{}", f.slug()),
        ),
        Some(F::Aes(name_bits)) => match asset.key_bits.or(name_bits) {
            Some(bits) if bits <= 128 => (
                V::GroverWeakened,
                (bits == 128).then_some(1),
                format!("grover-weakened:aes-{bits}"),
            ),
            Some(bits) if bits >= 192 => (
                V::QuantumResistant,
                match bits {
                    192 => Some(3),
                    256 => Some(5),
                    _ => None,
                },
                format!("quantum-resistant:aes-{bits}"),
            ),
            Some(bits) => (V::Unknown, None, format!("unknown:aes-{bits}")),
            None => (V::Unknown, None, "unknown:aes-key-size-absent".to_string()),
        },
        Some(f @ (F::Sha256 | F::ChaCha20 | F::TripleDes)) => {
            (V::GroverWeakened, None, format!("grover-weakened:{}", f.slug()))
        }
        Some(f @ (F::Sha384 | F::Sha512 | F::Sha3)) => (
            V::QuantumResistant,
            None,
            format!("quantum-resistant:{}", f.slug()),
        ),
        Some(f @ (F::MlKem | F::MlDsa | F::SlhDsa | F::Xmss | F::McEliece | F::FrodoKem)) => {
            (V::PostQuantum, None, format!("post-quantum:{}", f.slug()))
        }
        None => (
            V::Unknown,
            None,
            format!("unknown:{}", asset.algorithm.trim().to_ascii_lowercase()),
        ),
    };

    let horizon = if config.horizon_years > 0.0 {
        (asset.retention_years / config.horizon_years).min(1.0)
    } else {
        1.0
    };
    let priority = (config.weight(vulnerability) * asset.sensitivity * horizon).clamp(0.0, 1.0);

    ClassifiedAsset {
        asset: asset.clone(),
        vulnerability,
        nist_level_equivalent: nist_level,
        hndl_priority: priority,
        rationale: rule,
    }
}

pub fn classify_all(assets: &[CryptoAsset]) -> Vec<ClassifiedAsset> {
    assets.iter().map(classify).collect()
}

/// Descending priority; ties by longer retention, then ascending id.
pub fn hndl_order(a: &ClassifiedAsset, b: &ClassifiedAsset) -> Ordering {
    b.hndl_priority
        .total_cmp(&a.hndl_priority)
        .then_with(|| b.asset.retention_years.total_cmp(&a.asset.retention_years))
        .then_with(|| a.asset.id.cmp(&b.asset.id))
}

/// The `top_n` assets most exposed to harvest-now-decrypt-later.
pub fn rank_hndl(inventory: &[ClassifiedAsset], top_n: usize) -> Vec<ClassifiedAsset> {
    let mut ranked = inventory.to_vec();
    ranked.sort_by(hndl_order);
    ranked.truncate(top_n);
    ranked
}
