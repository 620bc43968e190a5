//! Correlation Difference fairness: detects bias that intensifies with model
//! confidence (latent harm).
//!
//! A Spearman rank-correlation test between the BASE probabilities and each
//! group's absolute-deviation vector, Bonferroni-corrected; |ρ| is the
//! effect; score 1 − U_CorrDiff.

use crate::error::Result;
use crate::exec;
use crate::metrics::{
    finish_score, is_clone_panel, unfairness, ComparisonFamily, Metric, MetricReport,
};
use crate::model::{AuditConfig, PredictionPanel};
use crate::stats::{spearman_test, EffectKind, EffectSize};

pub(crate) fn evaluate(panel: &PredictionPanel, config: &AuditConfig) -> Result<MetricReport> {
    let metric = Metric::CorrelationDifference;
    if is_clone_panel(panel) {
        return Ok(MetricReport::short_circuit(metric, None, None));
    }

    let base = panel.base_column();
    let nb = panel.group_set().non_base_indices();
    let raw = exec::try_map(nb.clone(), |g| -> Result<_> {
        let deviations = panel.abs_deviation(g)?;
        let outcome = spearman_test(base, &deviations)?;
        let effect = EffectSize::new(EffectKind::SpearmanAbs, outcome.statistic);
        Ok((outcome.p_value, effect))
    })?;

    let family = super::family(
        panel,
        &nb,
        ComparisonFamily::Corr,
        raw,
        |panel, _| panel.group_set().base_name().to_string(),
        config.alpha,
    )?;
    let u_corr = unfairness(&family)?;
    let fairness_score = finish_score(u_corr);

    let mut u_components = std::collections::BTreeMap::new();
    u_components.insert("U_CorrDiff".to_string(), u_corr);
    Ok(MetricReport {
        metric,
        omnibus: None,
        concordance: None,
        comparisons: family,
        u_components,
        fairness_score,
        short_circuited: false,
    })
}
