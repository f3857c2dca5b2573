//! Score reports and their markdown rendering.

use std::fmt::Write as _;

use chrono::{DateTime, SecondsFormat, Utc};
use quasar_core::assessment::{AssessmentSnapshot, InputSource, Pqr, TECHNICAL_ROWS};
use quasar_core::inventory::{classify_all, derive_technical_matrix, rank_hndl, VulnerabilityClass};
use quasar_core::Warning;
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of assets listed in the exposure table.
pub const HNDL_TOP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Weighting {
    Shared,
    PerDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiReport {
    pub literal: f64,
    /// `n` times the literal value.
    pub rescaled: f64,
    pub source: InputSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub index: usize,
    pub area: String,
    pub current: f64,
    pub target: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    /// In area order.
    pub areas: Vec<GapRow>,
    /// Area indices by descending gap.
    pub ranking: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum MatrixSource {
    Snapshot,
    Inventory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixReport {
    pub values: [[f64; 3]; 3],
    pub source: MatrixSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HndlRow {
    pub id: String,
    pub name: String,
    pub algorithm: String,
    pub vulnerability: VulnerabilityClass,
    pub hndl_priority: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub depends_on: Vec<String>,
}

/// Every derived number for one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoreReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_id: Option<String>,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_unit: Option<String>,
    pub pqr: Pqr,
    pub weighting: Weighting,
    pub pi: PiReport,
    pub rs: f64,
    pub rs_source: InputSource,
    pub gaps: Option<GapReport>,
    pub risk_vector: Option<[f64; 3]>,
    pub technical_matrix: Option<MatrixReport>,
    pub hndl_top: Vec<HndlRow>,
    pub warnings: Vec<Warning>,
}

/// Scores `snapshot`. When the snapshot has an inventory but no technical
/// matrix, the matrix is derived with certificate expiry measured from the
/// snapshot timestamp, or `as_of` if the snapshot has none.
pub fn score_snapshot(snapshot: &AssessmentSnapshot, as_of: DateTime<Utc>) -> Result<ScoreReport> {
    let v = snapshot.validate()?;
    let mut warnings = v.warnings.clone();

    let (pi, pi_source) = v.performance_indicator();
    let (rs, rs_source) = v.readiness_score();

    let gaps = match &v.target_state {
        Some(target) => {
            let analysis = v.gaps().map_err(|e| Error::input("targetState", e))?;
            let current = v.scores.area_composites();
            Some(GapReport {
                areas: (0..analysis.gaps.len())
                    .map(|i| GapRow {
                        index: i,
                        area: v.area_name(i),
                        current: current[i].value(),
                        target: target[i].value(),
                        gap: analysis.gaps[i],
                    })
                    .collect(),
                ranking: analysis.ranking,
            })
        }
        None => None,
    };

    let classified = snapshot
        .inventory
        .as_deref()
        .map(classify_all)
        .unwrap_or_default();
    let technical_matrix = match (&v.technical_matrix, classified.is_empty()) {
        (Some(m), _) => Some(MatrixReport {
            values: m.values(),
            source: MatrixSource::Snapshot,
        }),
        (None, false) => {
            let derived = derive_technical_matrix(&classified, snapshot.timestamp.unwrap_or(as_of))
                .map_err(|e| Error::input("inventory", e))?;
            warnings.extend(derived.warnings);
            Some(MatrixReport {
                values: derived.matrix.values(),
                source: MatrixSource::Inventory,
            })
        }
        (None, true) => None,
    };
    let hndl_top = rank_hndl(&classified, HNDL_TOP)
        .into_iter()
        .map(|c| HndlRow {
            id: c.asset.id,
            name: c.asset.name,
            algorithm: c.asset.algorithm,
            vulnerability: c.vulnerability,
            hndl_priority: c.hndl_priority,
            depends_on: c.asset.depends_on,
        })
        .collect();

    Ok(ScoreReport {
        snapshot_id: snapshot.id.clone(),
        label: snapshot.label.clone(),
        time_unit: snapshot.time_unit.clone(),
        pqr: v.pqr(),
        weighting: if v.per_domain_weights.is_some() {
            Weighting::PerDomain
        } else {
            Weighting::Shared
        },
        pi: PiReport {
            literal: pi.literal,
            rescaled: pi.rescaled,
            source: pi_source,
        },
        rs,
        rs_source,
        gaps,
        risk_vector: v.risk_vector().ok(),
        technical_matrix,
        hndl_top,
        warnings,
    })
}

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Five-cell bar, one cell per fifth of the unit interval.
fn heat(v: f64) -> String {
    let filled = (v.clamp(0.0, 1.0) * 5.0).round() as usize;
    "█".repeat(filled) + &"░".repeat(5 - filled)
}

fn source_label(source: InputSource) -> &'static str {
    match source {
        InputSource::Explicit => "explicit inputs",
        InputSource::AreaComposites => "area composite scores",
    }
}

fn vulnerability_label(v: VulnerabilityClass) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|s| s.as_str().map(String::from))
        .unwrap_or_default()
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

/// Markdown status report. Identical inputs give identical bytes.
pub fn render_report(snapshot: &AssessmentSnapshot, report: &ScoreReport) -> String {
    let mut md = String::new();
    let title = if report.label.is_empty() {
        "unlabelled snapshot"
    } else {
        &report.label
    };
    let _ = writeln!(md, "# Readiness report: {title}\n");
    if let Some(id) = &snapshot.id {
        let _ = writeln!(md, "- Snapshot: `{id}`");
    }
    if let Some(ts) = snapshot.timestamp {
        let _ = writeln!(md, "- Taken: {}", ts.to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    let _ = writeln!(md, "- Assessed areas: {}", snapshot.domain_weights.len());
    if let Some(unit) = &report.time_unit {
        let _ = writeln!(md, "- Time unit: {unit}");
    }

    md.push_str("\n## Summary\n\n| Measure | Value |\n|---|---:|\n");
    let weighting = match report.weighting {
        Weighting::Shared => "shared weights",
        Weighting::PerDomain => "per-domain weights",
    };
    let _ = writeln!(
        md,
        "| PQR, literal (0 to 3, {weighting}) | {} |",
        num(report.pqr.literal)
    );
    let _ = writeln!(
        md,
        "| PQR, normalized (0 to 1) | {} |",
        num(report.pqr.normalized)
    );
    let _ = writeln!(
        md,
        "| Performance indicator, literal | {} |",
        num(report.pi.literal)
    );
    let _ = writeln!(
        md,
        "| Performance indicator, n x literal | {} |",
        num(report.pi.rescaled)
    );
    let _ = writeln!(md, "| Readiness score (root sum square) | {} |", num(report.rs));
    let _ = writeln!(
        md,
        "\nPerformance indicator from {}; readiness score from {}.",
        source_label(report.pi.source),
        source_label(report.rs_source)
    );

    md.push_str("\n## Gaps\n\n");
    match &report.gaps {
        Some(gaps) => {
            md.push_str("| Rank | Area | Current | Target | Gap |\n|---:|---|---:|---:|---:|\n");
            for (rank, &i) in gaps.ranking.iter().enumerate() {
                let row = &gaps.areas[i];
                let _ = writeln!(
                    md,
                    "| {} | {} | {} | {} | {} |",
                    rank + 1,
                    cell(&row.area),
                    num(row.current),
                    num(row.target),
                    num(row.gap)
                );
            }
            md.push_str("\nCurrent is the mean of the technical, security and operational scores. A negative gap means the target is exceeded.\n");
        }
        None => md.push_str("No target state recorded; gap analysis omitted.\n"),
    }

    md.push_str("\n## Risk\n\n");
    match report.risk_vector {
        Some(r) => {
            md.push_str("| Risk category | Aggregated risk |\n|---|---:|\n");
            for (k, v) in r.iter().enumerate() {
                let _ = writeln!(md, "| category {} | {} |", k + 1, num(*v));
            }
        }
        None => md.push_str("No risk matrix recorded; risk section omitted.\n"),
    }

    md.push_str("\n## Technical readiness matrix\n\n");
    match &report.technical_matrix {
        Some(m) => {
            md.push_str("| Row | Column 1 | Column 2 | Column 3 |\n|---|---|---|---|\n");
            for (r, row) in m.values.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|v| format!("{} {}", num(*v), heat(*v))).collect();
                let _ = writeln!(md, "| {} | {} |", TECHNICAL_ROWS[r], cells.join(" | "));
            }
            let origin = match m.source {
                MatrixSource::Snapshot => "Values as recorded in the snapshot.",
                MatrixSource::Inventory => "Values derived from the cryptographic inventory.",
            };
            let _ = writeln!(md, "\n{origin}");
        }
        None => md.push_str("No technical matrix or inventory recorded.\n"),
    }

    let _ = writeln!(md, "\n## Harvest-now-decrypt-later exposure (top {HNDL_TOP})\n");
    if report.hndl_top.is_empty() {
        md.push_str("No inventory recorded.\n");
    } else {
        md.push_str(
            "| # | Asset | Algorithm | Class | Priority | Depends on |\n|---:|---|---|---|---:|---|\n",
        );
        for (i, row) in report.hndl_top.iter().enumerate() {
            let deps = if row.depends_on.is_empty() {
                "-".to_string()
            } else {
                row.depends_on.join(", ")
            };
            let _ = writeln!(
                md,
                "| {} | {} (`{}`) | {} | {} | {} | {} |",
                i + 1,
                cell(&row.name),
                row.id,
                cell(&row.algorithm),
                vulnerability_label(row.vulnerability),
                num(row.hndl_priority),
                cell(&deps)
            );
        }
    }

    md.push_str("\n## Warnings\n\n");
    if report.warnings.is_empty() {
        md.push_str("None.\n");
    } else {
        for w in &report.warnings {
            let _ = writeln!(md, "- {w}");
        }
    }

    if !snapshot.notes.trim().is_empty() {
        let _ = writeln!(md, "\n## Notes\n\n{}", snapshot.notes.trim());
    }
    md
}
