//! The five fairness metric pipelines.
//!
//! Each pipeline follows the same three stages: an omnibus test gating the
//! analysis (non-significance short-circuits to a perfect score), Bonferroni-
//! corrected post-hoc comparisons, and an unfairness aggregate
//! U = (1/|C|) Σ I(c)·|s_c| folded into a fairness score in [0, 1].

mod absolute_deviation;
mod correlation_difference;
mod distributional;
mod mean_difference;
mod variance_heterogeneity;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::model::{AuditConfig, PredictionPanel};
use crate::stats::{stable_sum, EffectSize, TestOutcome};

/// The five metrics, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    MeanDifference,
    AbsoluteDeviation,
    KsDistributional,
    VarianceHeterogeneity,
    CorrelationDifference,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::MeanDifference,
        Metric::AbsoluteDeviation,
        Metric::KsDistributional,
        Metric::VarianceHeterogeneity,
        Metric::CorrelationDifference,
    ];

    /// Short identifier used by the CLI `--metrics` list.
    pub fn id(self) -> &'static str {
        match self {
            Metric::MeanDifference => "mean",
            Metric::AbsoluteDeviation => "abs",
            Metric::KsDistributional => "ks",
            Metric::VarianceHeterogeneity => "var",
            Metric::CorrelationDifference => "corr",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Metric::ALL.into_iter().find(|m| m.id() == id)
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Metric::MeanDifference => "Mean Difference",
            Metric::AbsoluteDeviation => "Absolute Deviation",
            Metric::KsDistributional => "KS Distributional",
            Metric::VarianceHeterogeneity => "Variance Heterogeneity",
            Metric::CorrelationDifference => "Correlation Difference",
        }
    }
}

/// Comparison family a post-hoc record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonFamily {
    Base,
    Peer,
    Group,
    Ks,
    Corr,
}

/// One post-hoc comparison: identity, raw/adjusted p, indicator, effect size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub family: ComparisonFamily,
    pub group_a: String,
    /// May be the synthetic "peers" aggregate.
    pub group_b: String,
    pub raw_p: f64,
    pub adjusted_p: f64,
    pub significant: bool,
    pub effect: EffectSize,
}

/// Full record of one metric pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: Metric,
    pub omnibus: Option<TestOutcome>,
    /// Kendall's W concordance, emitted as a diagnostic alongside Friedman
    /// omnibus tests; never enters any score.
    pub concordance: Option<f64>,
    pub comparisons: Vec<ComparisonRecord>,
    pub u_components: BTreeMap<String, f64>,
    pub fairness_score: f64,
    pub short_circuited: bool,
}

impl MetricReport {
    fn short_circuit(
        metric: Metric,
        omnibus: Option<TestOutcome>,
        concordance: Option<f64>,
    ) -> Self {
        Self {
            metric,
            omnibus,
            concordance,
            comparisons: Vec::new(),
            u_components: BTreeMap::new(),
            fairness_score: 1.0,
            short_circuited: true,
        }
    }
}

/// Unfairness aggregate over one comparison family (Eq. U = mean of
/// indicator-gated effect magnitudes).
pub fn unfairness(records: &[ComparisonRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut contributions: Vec<f64> = records
        .iter()
        .filter(|r| r.significant)
        .map(|r| r.effect.magnitude)
        .collect();
    if contributions.is_empty() {
        return Ok(0.0);
    }
    Ok(stable_sum(&mut contributions) / records.len() as f64)
}

// Family U with the empty-family-means-no-comparisons convention used by the
// variance pipeline at K = 2.
fn unfairness_or_zero(records: &[ComparisonRecord]) -> Result<f64> {
    if records.is_empty() {
        Ok(0.0)
    } else {
        unfairness(records)
    }
}

/// Kendall's W concordance for a Friedman omnibus outcome.
pub fn kendalls_w(outcome: &TestOutcome, n_cases: usize, k_columns: usize) -> f64 {
    if k_columns < 2 || n_cases == 0 {
        return 0.0;
    }
    outcome.statistic / (n_cases as f64 * (k_columns as f64 - 1.0))
}

/// Run a single metric pipeline.
pub fn evaluate(
    metric: Metric,
    panel: &PredictionPanel,
    config: &AuditConfig,
) -> Result<MetricReport> {
    config.validate()?;
    match metric {
        Metric::MeanDifference => mean_difference::evaluate(panel, config),
        Metric::AbsoluteDeviation => absolute_deviation::evaluate(panel, config),
        Metric::KsDistributional => distributional::evaluate(panel, config),
        Metric::VarianceHeterogeneity => variance_heterogeneity::evaluate(panel, config),
        Metric::CorrelationDifference => correlation_difference::evaluate(panel, config),
    }
}

/// Run several pipelines (possibly concurrently); reports come back in the
/// requested order.
pub fn evaluate_many(
    metrics: &[Metric],
    panel: &PredictionPanel,
    config: &AuditConfig,
) -> Result<Vec<MetricReport>> {
    config.validate()?;
    exec::try_map(metrics.to_vec(), |m| evaluate(m, panel, config))
}

// One Bonferroni-corrected comparison family: per-group (raw p, effect)
// pairs become records against the named opposite side.
fn family(
    panel: &PredictionPanel,
    nb: &[usize],
    fam: ComparisonFamily,
    raw: Vec<(f64, EffectSize)>,
    opposite: impl Fn(&PredictionPanel, usize) -> String,
    alpha: f64,
) -> Result<Vec<ComparisonRecord>> {
    let ps: Vec<f64> = raw.iter().map(|(p, _)| *p).collect();
    let adjusted = crate::stats::bonferroni(&ps, alpha)?;
    Ok(nb
        .iter()
        .zip(raw)
        .zip(adjusted)
        .map(
            |((&g, (raw_p, effect)), (adjusted_p, significant))| ComparisonRecord {
                family: fam,
                group_a: panel.group_set().name(g).to_string(),
                group_b: opposite(panel, g),
                raw_p,
                adjusted_p,
                significant,
                effect,
            },
        )
        .collect())
}

// True when every non-BASE probability cell equals its BASE cell exactly.
fn is_clone_panel(panel: &PredictionPanel) -> bool {
    let base = panel.base_column();
    panel
        .group_set()
        .non_base_indices()
        .into_iter()
        .all(|g| panel.column(g) == base)
}

fn finish_score(unfairness_total: f64) -> f64 {
    (1.0 - unfairness_total).clamp(0.0, 1.0)
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::model::{AuditConfig, GroupSet, Label, PredictionPanel};

    /// Panel with explicit columns; labels alternate yes/no.
    pub fn panel_from(columns: &[Vec<f64>], base: usize) -> PredictionPanel {
        let names: Vec<String> = (0..columns.len())
            .map(|i| {
                if i == base {
                    "BASE".to_string()
                } else {
                    format!("G{i}")
                }
            })
            .collect();
        let gs = GroupSet::new(names, "BASE").unwrap();
        let n = columns[0].len();
        let case_ids = (0..n).map(|i| format!("c{i}")).collect();
        let labels = (0..n)
            .map(|i| if i % 2 == 0 { Label::Yes } else { Label::No })
            .collect();
        PredictionPanel::from_columns(gs, case_ids, columns, labels, &AuditConfig::default())
            .unwrap()
    }

    /// Deterministic pseudo-random base column in [0.05, 0.95].
    pub fn noisy_base(n: usize, seed: u64) -> Vec<f64> {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                0.05 + 0.9 * (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect()
    }
}
