//! Mean Difference fairness: detects systematic upward or downward shifts in
//! predicted probabilities (allocational harm).
//!
//! Friedman omnibus over all K probability columns; post-hoc paired
//! signed-rank tests of each group against BASE and against its leave-one-out
//! peer average; paired Cliff's delta effects; score 1 − (U_BASE + U_PEER)/2.

use crate::error::{Error, Result};
use crate::exec;
use crate::metrics::{
    family, finish_score, kendalls_w, unfairness, ComparisonFamily, Metric, MetricReport,
};
use crate::model::{AuditConfig, PredictionPanel};
use crate::stats::{cliffs_delta_paired, friedman_test, wilcoxon_signed_rank, TestOutcome};

pub(crate) fn evaluate(panel: &PredictionPanel, config: &AuditConfig) -> Result<MetricReport> {
    let metric = Metric::MeanDifference;
    let k = panel.n_groups();
    let n = panel.n_cases();

    if rows_fully_tied(panel) {
        let omnibus = TestOutcome::degenerate((k - 1) as f64);
        return Ok(MetricReport::short_circuit(
            metric,
            Some(omnibus),
            Some(0.0),
        ));
    }
    if k < 3 {
        return Err(Error::TooFewGroups { needed: 3, got: k });
    }

    let columns: Vec<&[f64]> = (0..k).map(|g| panel.column(g)).collect();
    let omnibus = friedman_test(&columns)?;
    let concordance = kendalls_w(&omnibus, n, k);
    if omnibus.p_value > config.alpha {
        return Ok(MetricReport::short_circuit(
            metric,
            Some(omnibus),
            Some(concordance),
        ));
    }

    let base = panel.base_column();
    let nb = panel.group_set().non_base_indices();
    let per_group = exec::try_map(nb.clone(), |g| -> Result<_> {
        let col = panel.column(g);
        let base_p = wilcoxon_signed_rank(col, base, config)?.p_value;
        let base_effect = cliffs_delta_paired(col, base)?;
        let peers = panel.peer_average(g)?;
        let peer_p = wilcoxon_signed_rank(col, &peers, config)?.p_value;
        let peer_effect = cliffs_delta_paired(col, &peers)?;
        Ok((base_p, base_effect, peer_p, peer_effect))
    })?;

    let base_family = family(
        panel,
        &nb,
        ComparisonFamily::Base,
        per_group.iter().map(|r| (r.0, r.1)).collect(),
        |panel, _| panel.group_set().base_name().to_string(),
        config.alpha,
    )?;
    let peer_family = family(
        panel,
        &nb,
        ComparisonFamily::Peer,
        per_group.iter().map(|r| (r.2, r.3)).collect(),
        |_, _| "peers".to_string(),
        config.alpha,
    )?;

    let u_base = unfairness(&base_family)?;
    let u_peer = unfairness(&peer_family)?;
    let fairness_score = finish_score((u_base + u_peer) / 2.0);

    let mut comparisons = base_family;
    comparisons.extend(peer_family);
    let mut u_components = std::collections::BTreeMap::new();
    u_components.insert("U_BASE".to_string(), u_base);
    u_components.insert("U_PEER".to_string(), u_peer);

    Ok(MetricReport {
        metric,
        omnibus: Some(omnibus),
        concordance: Some(concordance),
        comparisons,
        u_components,
        fairness_score,
        short_circuited: false,
    })
}

// Every case row fully tied across all K groups — the Friedman degenerate
// condition, checked directly so two-group demo panels short-circuit too.
fn rows_fully_tied(panel: &PredictionPanel) -> bool {
    let k = panel.n_groups();
    (0..panel.n_cases()).all(|i| {
        let first = panel.prob(i, 0);
        (1..k).all(|g| panel.prob(i, g) == first)
    })
}
