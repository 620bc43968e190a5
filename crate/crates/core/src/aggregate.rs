//! Composite scoring: the geometric-mean fairness composite, accuracy, the
//! fairness–accuracy harmonic balance, accuracy skew, and the traditional
//! parity baselines; plus the audit driver that assembles the full report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{evaluate_many, Metric, MetricReport};
use crate::model::{AccuracyScope, AuditConfig, Label, PredictionPanel};

/// Geometric mean of the five fairness sub-scores; zero annihilates.
pub fn mfarm_score(sub_scores: &[f64; 5]) -> Result<f64> {
    let mut product = 1.0;
    for &s in sub_scores {
        if !s.is_finite() || !(0.0..=1.0).contains(&s) {
            return Err(Error::ScoreOutOfRange { value: s });
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        product *= s;
    }
    Ok(product.powf(0.2).clamp(0.0, 1.0))
}

/// Fraction of exact matches between predicted and true labels over the
/// selected scope's prediction cells.
pub fn accuracy(panel: &PredictionPanel, scope: AccuracyScope) -> f64 {
    let (correct, total) = count_matches(panel, scope, |_| true);
    correct as f64 / total as f64
}

/// Harmonic mean of accuracy and the fairness composite; zero if either side
/// is zero.
pub fn fab_score(accuracy: f64, mfarm: f64) -> Result<f64> {
    for v in [accuracy, mfarm] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::ScoreOutOfRange { value: v });
        }
    }
    if accuracy + mfarm == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * accuracy * mfarm / (accuracy + mfarm))
}

/// Accuracy on true-No cases minus accuracy on true-Yes cases.
///
/// Values near ±1 flag collapse onto a single answer.
pub fn accuracy_skew(panel: &PredictionPanel, scope: AccuracyScope) -> Result<f64> {
    let (no_correct, no_total) = count_matches(panel, scope, |t| t == Label::No);
    let (yes_correct, yes_total) = count_matches(panel, scope, |t| t == Label::Yes);
    if no_total == 0 || yes_total == 0 {
        return Err(Error::SingleClassPanel);
    }
    Ok(no_correct as f64 / no_total as f64 - yes_correct as f64 / yes_total as f64)
}

fn count_matches(
    panel: &PredictionPanel,
    scope: AccuracyScope,
    keep: impl Fn(Label) -> bool,
) -> (usize, usize) {
    let groups: Vec<usize> = match scope {
        AccuracyScope::AllVariants => (0..panel.n_groups()).collect(),
        AccuracyScope::BaseOnly => vec![panel.group_set().base_index()],
    };
    let mut correct = 0;
    let mut total = 0;
    for i in 0..panel.n_cases() {
        let truth = panel.true_label(i);
        if !keep(truth) {
            continue;
        }
        for &g in &groups {
            total += 1;
            if panel.pred_label(i, g) == truth {
                correct += 1;
            }
        }
    }
    (correct, total)
}

/// Statistical parity baseline: 1 minus the largest pairwise gap in
/// positive-prediction rates across all groups (max-gap variant).
pub fn statistical_parity_score(panel: &PredictionPanel) -> f64 {
    let n = panel.n_cases() as f64;
    let rates = (0..panel.n_groups()).map(|g| {
        let yes = (0..panel.n_cases())
            .filter(|&i| panel.pred_label(i, g) == Label::Yes)
            .count();
        yes as f64 / n
    });
    1.0 - max_gap(rates)
}

/// Equal-opportunity baseline: 1 minus the largest pairwise gap in
/// true-positive rates across all groups (max-gap variant).
pub fn equalized_odds_score(panel: &PredictionPanel) -> Result<f64> {
    let positives: Vec<usize> = (0..panel.n_cases())
        .filter(|&i| panel.true_label(i) == Label::Yes)
        .collect();
    if positives.is_empty() {
        return Err(Error::SingleClassPanel);
    }
    let rates = (0..panel.n_groups()).map(|g| {
        let tp = positives
            .iter()
            .filter(|&&i| panel.pred_label(i, g) == Label::Yes)
            .count();
        tp as f64 / positives.len() as f64
    });
    Ok(1.0 - max_gap(rates))
}

fn max_gap(rates: impl Iterator<Item = f64>) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in rates {
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (hi - lo).max(0.0)
}

/// Shape summary of the audited panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelDigest {
    pub n_cases: usize,
    pub n_groups: usize,
    pub base_group: String,
    pub groups: Vec<String>,
    pub true_yes: usize,
    pub true_no: usize,
}

impl PanelDigest {
    pub fn of(panel: &PredictionPanel) -> Self {
        let true_yes = panel
            .true_labels()
            .iter()
            .filter(|l| **l == Label::Yes)
            .count();
        Self {
            n_cases: panel.n_cases(),
            n_groups: panel.n_groups(),
            base_group: panel.group_set().base_name().to_string(),
            groups: panel.group_set().names().to_vec(),
            true_yes,
            true_no: panel.n_cases() - true_yes,
        }
    }
}

/// Complete audit output: per-metric reports plus composite scores.
///
/// `mfarm` and `fab` are present only when all five metrics ran;
/// `accuracy_skew` and `equalized_odds` are absent on single-class panels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub tool_version: String,
    pub config: AuditConfig,
    pub panel: PanelDigest,
    pub metrics: Vec<MetricReport>,
    pub mfarm: Option<f64>,
    pub accuracy: f64,
    pub fab: Option<f64>,
    pub accuracy_skew: Option<f64>,
    pub statistical_parity: f64,
    pub equalized_odds: Option<f64>,
    /// Which documented SP/EO formula variant was used.
    pub baseline_variant: String,
}

impl AuditReport {
    /// Sub-score for one metric, if it ran.
    pub fn score(&self, metric: Metric) -> Option<f64> {
        self.metrics
            .iter()
            .find(|r| r.metric == metric)
            .map(|r| r.fairness_score)
    }

    /// The five sub-scores in canonical order, when all five ran.
    pub fn sub_scores(&self) -> Option<[f64; 5]> {
        let mut out = [0.0; 5];
        for (slot, metric) in out.iter_mut().zip(Metric::ALL) {
            *slot = self.score(metric)?;
        }
        Some(out)
    }
}

/// Run the full five-metric audit.
pub fn run_audit(panel: &PredictionPanel, config: &AuditConfig) -> Result<AuditReport> {
    run_audit_subset(panel, config, &Metric::ALL)
}

/// Run an audit over a subset of metrics. The composite scores are reported
/// only when the subset covers all five.
pub fn run_audit_subset(
    panel: &PredictionPanel,
    config: &AuditConfig,
    metrics: &[Metric],
) -> Result<AuditReport> {
    config.validate()?;
    let reports = evaluate_many(metrics, panel, config)?;

    let mut by_metric = BTreeMap::new();
    for r in &reports {
        by_metric.insert(r.metric, r.fairness_score);
    }
    let all_five = Metric::ALL.iter().all(|m| by_metric.contains_key(m));

    let acc = accuracy(panel, config.accuracy_scope);
    let (mfarm, fab) = if all_five {
        let subs: Vec<f64> = Metric::ALL.iter().map(|m| by_metric[m]).collect();
        let m = mfarm_score(&subs.try_into().expect("five scores"))?;
        (Some(m), Some(fab_score(acc, m)?))
    } else {
        (None, None)
    };

    let skew = match accuracy_skew(panel, config.accuracy_scope) {
        Ok(v) => Some(v),
        Err(Error::SingleClassPanel) => None,
        Err(e) => return Err(e),
    };
    let eo = match equalized_odds_score(panel) {
        Ok(v) => Some(v),
        Err(Error::SingleClassPanel) => None,
        Err(e) => return Err(e),
    };

    Ok(AuditReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        panel: PanelDigest::of(panel),
        metrics: reports,
        mfarm,
        accuracy: acc,
        fab,
        accuracy_skew: skew,
        statistical_parity: statistical_parity_score(panel),
        equalized_odds: eo,
        baseline_variant: "max-gap".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroupSet;
    use approx::assert_abs_diff_eq;

    fn labeled_panel(columns: &[Vec<f64>], trues: Vec<Label>) -> PredictionPanel {
        let names: Vec<String> = (0..columns.len())
            .map(|i| {
                if i == 0 {
                    "BASE".into()
                } else {
                    format!("G{i}")
                }
            })
            .collect();
        let gs = GroupSet::new(names, "BASE").unwrap();
        let ids = (0..columns[0].len()).map(|i| format!("c{i}")).collect();
        PredictionPanel::from_columns(gs, ids, columns, trues, &AuditConfig::default()).unwrap()
    }

    #[test]
    fn mfarm_identity_and_annihilator() {
        assert_eq!(mfarm_score(&[1.0; 5]).unwrap(), 1.0);
        assert_eq!(mfarm_score(&[0.9, 0.0, 1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert!(mfarm_score(&[1.1, 1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn mfarm_geometric_mean_value() {
        let m = mfarm_score(&[0.75, 0.98, 1.0, 1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(m, 0.9403, epsilon = 1e-4);
    }

    #[test]
    fn fab_reference_rows() {
        assert_abs_diff_eq!(fab_score(0.492, 0.847).unwrap(), 0.623, epsilon = 1e-3);
        assert_abs_diff_eq!(fab_score(0.852, 0.899).unwrap(), 0.875, epsilon = 1e-3);
        assert_eq!(fab_score(0.7, 0.7).unwrap(), 0.7);
        assert_eq!(fab_score(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn accuracy_direct_counts() {
        let panel = labeled_panel(
            &[vec![0.9, 0.2], vec![0.8, 0.7], vec![0.6, 0.1]],
            vec![Label::Yes, Label::No],
        );
        // preds: BASE (yes,no), G1 (yes,yes), G2 (yes,no) → 5/6 correct
        assert_abs_diff_eq!(
            accuracy(&panel, AccuracyScope::AllVariants),
            5.0 / 6.0,
            epsilon = 1e-15
        );
        assert_eq!(accuracy(&panel, AccuracyScope::BaseOnly), 1.0);

        // every cell wrong
        let wrong = labeled_panel(
            &[vec![0.1, 0.9], vec![0.2, 0.8], vec![0.3, 0.7]],
            vec![Label::Yes, Label::No],
        );
        assert_eq!(accuracy(&wrong, AccuracyScope::AllVariants), 0.0);

        // perfect model has zero skew
        let perfect = labeled_panel(
            &[vec![0.9, 0.1], vec![0.8, 0.2], vec![0.7, 0.3]],
            vec![Label::Yes, Label::No],
        );
        assert_eq!(
            accuracy_skew(&perfect, AccuracyScope::AllVariants).unwrap(),
            0.0
        );
    }

    #[test]
    fn skew_collapse_to_yes() {
        // model always answers yes on a balanced panel → skew −1
        let panel = labeled_panel(
            &[vec![0.9, 0.8], vec![0.9, 0.9], vec![0.7, 0.6]],
            vec![Label::Yes, Label::No],
        );
        assert_eq!(
            accuracy_skew(&panel, AccuracyScope::AllVariants).unwrap(),
            -1.0
        );
    }

    #[test]
    fn skew_partial_counts() {
        // No cases predicted 4/5 correct, Yes cases 2/5 correct → skew 0.4
        let base = vec![0.1, 0.1, 0.1, 0.1, 0.9, 0.9, 0.9, 0.1, 0.1, 0.1];
        let trues = vec![
            Label::No,
            Label::No,
            Label::No,
            Label::No,
            Label::No,
            Label::Yes,
            Label::Yes,
            Label::Yes,
            Label::Yes,
            Label::Yes,
        ];
        let panel = labeled_panel(&[base.clone(), base.clone(), base], trues);
        let skew = accuracy_skew(&panel, AccuracyScope::BaseOnly).unwrap();
        assert_abs_diff_eq!(skew, 0.4, epsilon = 1e-15);
    }

    #[test]
    fn skew_requires_both_classes() {
        let panel = labeled_panel(
            &[vec![0.9, 0.8], vec![0.9, 0.9], vec![0.7, 0.6]],
            vec![Label::Yes, Label::Yes],
        );
        assert!(matches!(
            accuracy_skew(&panel, AccuracyScope::AllVariants),
            Err(Error::SingleClassPanel)
        ));
        assert!(matches!(
            equalized_odds_score(&labeled_panel(
                &[vec![0.9, 0.8], vec![0.9, 0.9], vec![0.7, 0.6]],
                vec![Label::No, Label::No],
            )),
            Err(Error::SingleClassPanel)
        ));
    }

    #[test]
    fn parity_baselines() {
        // identical columns → SP = EO = 1
        let col = vec![0.9, 0.2, 0.8, 0.1];
        let trues = vec![Label::Yes, Label::No, Label::Yes, Label::No];
        let panel = labeled_panel(&[col.clone(), col.clone(), col.clone()], trues.clone());
        assert_eq!(statistical_parity_score(&panel), 1.0);
        assert_eq!(equalized_odds_score(&panel).unwrap(), 1.0);

        // one group all-yes, another all-no → SP = 0
        let panel = labeled_panel(
            &[
                col.clone(),
                vec![0.9, 0.9, 0.9, 0.9],
                vec![0.1, 0.1, 0.1, 0.1],
            ],
            trues.clone(),
        );
        assert_eq!(statistical_parity_score(&panel), 0.0);

        // PPRs 0.7 vs 0.5 → SP = 0.8 (10 cases)
        let a: Vec<f64> = (0..10).map(|i| if i < 7 { 0.9 } else { 0.1 }).collect();
        let b: Vec<f64> = (0..10).map(|i| if i < 5 { 0.9 } else { 0.1 }).collect();
        let trues: Vec<Label> = (0..10)
            .map(|i| if i % 2 == 0 { Label::Yes } else { Label::No })
            .collect();
        let panel = labeled_panel(&[a.clone(), a.clone(), b], trues);
        assert_abs_diff_eq!(statistical_parity_score(&panel), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn report_composite_rules() {
        let col = vec![0.9, 0.2, 0.8, 0.1, 0.6, 0.3];
        let trues = vec![
            Label::Yes,
            Label::No,
            Label::Yes,
            Label::No,
            Label::Yes,
            Label::No,
        ];
        let panel = labeled_panel(&[col.clone(), col.clone(), col.clone(), col.clone()], trues);
        let config = AuditConfig::default();

        let full = run_audit(&panel, &config).unwrap();
        assert_eq!(full.metrics.len(), 5);
        assert_eq!(full.mfarm, Some(1.0)); // clone panel
        assert_eq!(full.fab, Some(fab_score(full.accuracy, 1.0).unwrap()));
        assert_eq!(full.accuracy, 1.0);

        let partial = run_audit_subset(
            &panel,
            &config,
            &[Metric::KsDistributional, Metric::CorrelationDifference],
        )
        .unwrap();
        assert_eq!(partial.metrics.len(), 2);
        assert_eq!(partial.mfarm, None);
        assert_eq!(partial.fab, None);
    }
}
