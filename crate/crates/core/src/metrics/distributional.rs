//! KS Distributional fairness: detects full-shape distribution differences
//! between each group and BASE (latent harm).
//!
//! No omnibus — a direct two-sample KS test per non-BASE group with
//! Bonferroni correction; the KS distance is the effect; score 1 − U_KS.

use crate::error::Result;
use crate::exec;
use crate::metrics::{
    finish_score, is_clone_panel, unfairness, ComparisonFamily, Metric, MetricReport,
};
use crate::model::{AuditConfig, PredictionPanel};
use crate::stats::{ks_two_sample, EffectKind, EffectSize};

pub(crate) fn evaluate(panel: &PredictionPanel, config: &AuditConfig) -> Result<MetricReport> {
    let metric = Metric::KsDistributional;
    if is_clone_panel(panel) {
        return Ok(MetricReport::short_circuit(metric, None, None));
    }

    let base = panel.base_column();
    let nb = panel.group_set().non_base_indices();
    let raw = exec::try_map(nb.clone(), |g| -> Result<_> {
        let outcome = ks_two_sample(panel.column(g), base)?;
        let effect = EffectSize::new(EffectKind::KsDistance, outcome.statistic);
        Ok((outcome.p_value, effect))
    })?;

    let family = super::family(
        panel,
        &nb,
        ComparisonFamily::Ks,
        raw,
        |panel, _| panel.group_set().base_name().to_string(),
        config.alpha,
    )?;
    let u_ks = unfairness(&family)?;
    let fairness_score = finish_score(u_ks);

    let mut u_components = std::collections::BTreeMap::new();
    u_components.insert("U_KS".to_string(), u_ks);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::testutil::{noisy_base, panel_from};

    #[test]
    fn clone_panel_short_circuits() {
        let base = noisy_base(30, 9);
        let report = evaluate(
            &panel_from(&vec![base.clone(); 4], 0),
            &AuditConfig::default(),
        )
        .unwrap();
        assert!(report.short_circuited);
        assert_eq!(report.fairness_score, 1.0);
        assert!(report.comparisons.is_empty());
    }

    #[test]
    fn fully_separated_group_scores_one_twelfth() {
        // one group entirely above max(BASE): D = 1, decisively significant
        let base: Vec<f64> = noisy_base(200, 10).iter().map(|v| v * 0.4).collect();
        let mut cols = vec![base.clone(); 13];
        cols[7] = base.iter().map(|v| v + 0.55).collect();
        let report = evaluate(&panel_from(&cols, 0), &AuditConfig::default()).unwrap();
        assert!((report.u_components["U_KS"] - 1.0 / 12.0).abs() < 1e-15);
        assert!((report.fairness_score - (1.0 - 1.0 / 12.0)).abs() < 1e-15);
        let hit = report
            .comparisons
            .iter()
            .find(|c| c.group_a == "G7")
            .unwrap();
        assert!(hit.significant);
        assert_eq!(hit.effect.value, 1.0);
    }
}
