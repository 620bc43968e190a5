//! Variance Heterogeneity fairness: detects unequal predictive consistency
//! across groups (stability harm).
//!
//! K-sample Levene omnibus; post-hoc pairwise two-sample Levene tests for the
//! BASE-vs-group family (m = K−1) and the group-vs-group family
//! (m = (K−1)(K−2)/2); normalized variance-ratio effects on the pairs' sample
//! variances; score 1 − (U_BASE + U_GROUP)/2.

use crate::error::Result;
use crate::exec;
use crate::metrics::{
    finish_score, unfairness, unfairness_or_zero, ComparisonFamily, ComparisonRecord, Metric,
    MetricReport,
};
use crate::model::{AuditConfig, PredictionPanel};
use crate::stats::{bonferroni, levene_test, sample_variance, variance_ratio_effect};

pub(crate) fn evaluate(panel: &PredictionPanel, config: &AuditConfig) -> Result<MetricReport> {
    let metric = Metric::VarianceHeterogeneity;
    let k = panel.n_groups();

    let columns: Vec<&[f64]> = (0..k).map(|g| panel.column(g)).collect();
    let omnibus = levene_test(&columns, config.levene_centering)?;
    if omnibus.p_value > config.alpha {
        return Ok(MetricReport::short_circuit(metric, Some(omnibus), None));
    }

    let base = panel.base_column();
    let base_var = sample_variance(base);
    let nb = panel.group_set().non_base_indices();

    // BASE vs group family
    let base_raw = exec::try_map(nb.clone(), |g| -> Result<_> {
        let col = panel.column(g);
        let p = levene_test(&[base, col], config.levene_centering)?.p_value;
        let effect = variance_ratio_effect(base_var, sample_variance(col));
        Ok((p, effect))
    })?;
    let base_family = super::family(
        panel,
        &nb,
        ComparisonFamily::Base,
        base_raw,
        |panel, _| panel.group_set().base_name().to_string(),
        config.alpha,
    )?;
    let u_base = unfairness(&base_family)?;

    // group vs group family over unordered non-BASE pairs
    let mut pairs = Vec::with_capacity(nb.len() * (nb.len().saturating_sub(1)) / 2);
    for (i, &g) in nb.iter().enumerate() {
        for &h in &nb[i + 1..] {
            pairs.push((g, h));
        }
    }
    let group_raw = exec::try_map(pairs.clone(), |(g, h)| -> Result<_> {
        let cg = panel.column(g);
        let ch = panel.column(h);
        let p = levene_test(&[cg, ch], config.levene_centering)?.p_value;
        let effect = variance_ratio_effect(sample_variance(cg), sample_variance(ch));
        Ok((p, effect))
    })?;
    let group_family: Vec<ComparisonRecord> = if pairs.is_empty() {
        Vec::new()
    } else {
        let ps: Vec<f64> = group_raw.iter().map(|(p, _)| *p).collect();
        let adjusted = bonferroni(&ps, config.alpha)?;
        pairs
            .iter()
            .zip(group_raw)
            .zip(adjusted)
            .map(
                |((&(g, h), (raw_p, effect)), (adjusted_p, significant))| ComparisonRecord {
                    family: ComparisonFamily::Group,
                    group_a: panel.group_set().name(g).to_string(),
                    group_b: panel.group_set().name(h).to_string(),
                    raw_p,
                    adjusted_p,
                    significant,
                    effect,
                },
            )
            .collect()
    };
    let u_group = unfairness_or_zero(&group_family)?;

    let fairness_score = finish_score((u_base + u_group) / 2.0);
    let mut comparisons = base_family;
    comparisons.extend(group_family);
    let mut u_components = std::collections::BTreeMap::new();
    u_components.insert("U_BASE".to_string(), u_base);
    u_components.insert("U_GROUP".to_string(), u_group);

    Ok(MetricReport {
        metric,
        omnibus: Some(omnibus),
        concordance: None,
        comparisons,
        u_components,
        fairness_score,
        short_circuited: false,
    })
}
