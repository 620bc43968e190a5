//! Panel ingestion and report serialization.
//!
//! Panels travel as long-format tables (one row per case × group cell) in
//! CSV or JSON; audit reports serialize to JSON (lossless, deterministic
//! field order) or Markdown (summary table plus per-metric detail).

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use mfarm_core::{
    AuditConfig, AuditReport, GroupSet, Label, Metric, MetricReport, PredictionPanel, RawRow,
};

/// Errors that exit with code 1 (bad input) as opposed to code 2 (bad
/// configuration).
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(#[from] io::Error),

    #[error("row {row}: {reason}")]
    Parse { row: usize, reason: String },

    #[error("{0}")]
    Panel(#[from] mfarm_core::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type IoResult<T> = Result<T, IoError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

const CSV_HEADER: [&str; 5] = ["case_id", "group", "prob_yes", "true_label", "pred_label"];

/// One long-format panel row as it appears on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelRow {
    pub case_id: String,
    pub group: String,
    pub prob_yes: f64,
    pub true_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_label: Option<String>,
}

/// Read, validate, and assemble a panel from a file.
///
/// The BASE group is selected by name; the group universe is discovered from
/// the rows themselves.
pub fn parse_panel(
    path: &Path,
    format: PanelFormat,
    base_group: &str,
    config: &AuditConfig,
) -> IoResult<PredictionPanel> {
    let rows = match format {
        PanelFormat::Csv => read_csv_rows(path)?,
        PanelFormat::Json => read_json_rows(path)?,
    };
    build_panel_from_rows(rows, base_group, config)
}

fn read_csv_rows(path: &Path) -> IoResult<Vec<(usize, PanelRow)>> {
    let file = fs::File::open(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| IoError::Parse {
            row: 1,
            reason: format!("unreadable header: {e}"),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let idx: Vec<usize> = CSV_HEADER[..4]
        .iter()
        .map(|name| {
            col(name).ok_or_else(|| IoError::Parse {
                row: 1,
                reason: format!("missing required column `{name}`"),
            })
        })
        .collect::<IoResult<_>>()?;
    let pred_idx = col("pred_label");

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row_no = i + 2; // 1-based, after the header line
        let record = record.map_err(|e| IoError::Parse {
            row: row_no,
            reason: e.to_string(),
        })?;
        let field = |j: usize| record.get(j).unwrap_or("").to_string();
        let prob_text = field(idx[2]);
        let prob_yes: f64 = prob_text.parse().map_err(|_| IoError::Parse {
            row: row_no,
            reason: format!("prob_yes `{prob_text}` is not a number"),
        })?;
        let pred_label = pred_idx
            .map(field)
            .filter(|s| !s.is_empty())
            .map(Some)
            .unwrap_or(None);
        rows.push((
            row_no,
            PanelRow {
                case_id: field(idx[0]),
                group: field(idx[1]),
                prob_yes,
                true_label: field(idx[3]),
                pred_label,
            },
        ));
    }
    Ok(rows)
}

fn read_json_rows(path: &Path) -> IoResult<Vec<(usize, PanelRow)>> {
    let text = fs::read_to_string(path)?;
    let rows: Vec<PanelRow> = serde_json::from_str(&text)?;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| (i + 1, r))
        .collect())
}

fn build_panel_from_rows(
    rows: Vec<(usize, PanelRow)>,
    base_group: &str,
    config: &AuditConfig,
) -> IoResult<PredictionPanel> {
    let mut raw = Vec::with_capacity(rows.len());
    let mut groups: Vec<String> = Vec::new();
    for (row_no, row) in rows {
        if !row.prob_yes.is_finite() {
            return Err(IoError::Parse {
                row: row_no,
                reason: format!("prob_yes must be a finite number, got {}", row.prob_yes),
            });
        }
        let true_label = Label::parse(&row.true_label).ok_or_else(|| IoError::Parse {
            row: row_no,
            reason: format!("true_label `{}` is not yes/no", row.true_label),
        })?;
        let pred_label = match &row.pred_label {
            None => None,
            Some(text) => Some(Label::parse(text).ok_or_else(|| IoError::Parse {
                row: row_no,
                reason: format!("pred_label `{text}` is not yes/no"),
            })?),
        };
        if !groups.contains(&row.group) {
            groups.push(row.group.clone());
        }
        raw.push(RawRow {
            case_id: row.case_id,
            group: row.group,
            prob: row.prob_yes,
            true_label,
            pred_label,
        });
    }
    if raw.is_empty() {
        return Err(IoError::Panel(mfarm_core::Error::EmptyPanel));
    }
    let group_set = GroupSet::new(groups, base_group)?;
    Ok(PredictionPanel::build(&raw, group_set, config)?)
}

/// Write a panel back to long-format CSV.
///
/// Probabilities are written in shortest round-trip form, so re-parsing
/// reproduces every value bit-exactly.
pub fn write_panel_csv<W: io::Write>(panel: &PredictionPanel, writer: W) -> IoResult<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(CSV_HEADER)?;
    for i in 0..panel.n_cases() {
        for g in 0..panel.n_groups() {
            out.write_record([
                panel.case_ids()[i].as_str(),
                panel.group_set().name(g),
                &format!("{}", panel.prob(i, g)),
                panel.true_label(i).as_str(),
                panel.pred_label(i, g).as_str(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

impl From<csv::Error> for IoError {
    fn from(e: csv::Error) -> Self {
        IoError::Parse {
            row: 0,
            reason: e.to_string(),
        }
    }
}

/// Report as pretty-printed JSON with deterministic field ordering.
pub fn report_to_json(report: &AuditReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn report_from_json(text: &str) -> IoResult<AuditReport> {
    Ok(serde_json::from_str(text)?)
}

/// Render the report as Markdown: audit header, the five-metric summary row
/// (Mean, Abs., KS, Var., Corr., Fairness, Accuracy, H-Score), then
/// per-metric detail blocks.
pub fn report_to_markdown(report: &AuditReport) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "# Fairness Audit Report\n");
    let _ = writeln!(md, "- tool version: {}", report.tool_version);
    let _ = writeln!(md, "- alpha: {}", report.config.alpha);
    let _ = writeln!(md, "- label threshold: {}", report.config.threshold);
    let _ = writeln!(
        md,
        "- accuracy scope: {}",
        match report.config.accuracy_scope {
            mfarm_core::AccuracyScope::AllVariants => "all-variants",
            mfarm_core::AccuracyScope::BaseOnly => "base-only",
        }
    );
    let _ = writeln!(
        md,
        "- panel: {} cases x {} groups (BASE = `{}`), {} true-yes / {} true-no",
        report.panel.n_cases,
        report.panel.n_groups,
        report.panel.base_group,
        report.panel.true_yes,
        report.panel.true_no
    );
    let _ = writeln!(
        md,
        "- baselines ({}): SP = {:.6}, EO = {}",
        report.baseline_variant,
        report.statistical_parity,
        opt(report.equalized_odds)
    );
    let _ = writeln!(md, "- accuracy skew: {}\n", opt(report.accuracy_skew));

    let _ = writeln!(
        md,
        "| Mean | Abs. | KS | Var. | Corr. | Fairness | Accuracy | H-Score |"
    );
    let _ = writeln!(md, "|---|---|---|---|---|---|---|---|");
    let cell = |m: Metric| {
        report
            .score(m)
            .map(|s| format!("{s:.6}"))
            .unwrap_or_else(|| "-".to_string())
    };
    let _ = writeln!(
        md,
        "| {} | {} | {} | {} | {} | {} | {:.6} | {} |\n",
        cell(Metric::MeanDifference),
        cell(Metric::AbsoluteDeviation),
        cell(Metric::KsDistributional),
        cell(Metric::VarianceHeterogeneity),
        cell(Metric::CorrelationDifference),
        opt(report.mfarm),
        report.accuracy,
        opt(report.fab),
    );

    for metric in &report.metrics {
        render_metric(&mut md, metric);
    }
    md
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}"))
        .unwrap_or_else(|| "-".to_string())
}

fn render_metric(md: &mut String, m: &MetricReport) {
    let _ = writeln!(md, "## {}\n", m.metric.display_name());
    let _ = writeln!(md, "- fairness score: {:.6}", m.fairness_score);
    let _ = writeln!(md, "- short-circuited: {}", m.short_circuited);
    if let Some(o) = &m.omnibus {
        let _ = writeln!(
            md,
            "- omnibus: statistic {:.6}, p {:.6}, df/n {:.1}{}",
            o.statistic,
            o.p_value,
            o.df_or_n,
            if o.degenerate { " (degenerate)" } else { "" }
        );
    }
    if let Some(w) = m.concordance {
        let _ = writeln!(md, "- concordance (Kendall W): {w:.6}");
    }
    for (name, value) in &m.u_components {
        let _ = writeln!(md, "- {name}: {value:.6}");
    }
    if !m.comparisons.is_empty() {
        let _ = writeln!(
            md,
            "\n| family | group | vs | raw p | adj p | sig | effect | magnitude |"
        );
        let _ = writeln!(md, "|---|---|---|---|---|---|---|---|");
        for c in &m.comparisons {
            let _ = writeln!(
                md,
                "| {:?} | {} | {} | {:.6} | {:.6} | {} | {:.6} | {:.6} |",
                c.family,
                c.group_a,
                c.group_b,
                c.raw_p,
                c.adjusted_p,
                if c.significant { "yes" } else { "no" },
                c.effect.value,
                c.effect.magnitude,
            );
        }
    }
    let _ = writeln!(md);
}
