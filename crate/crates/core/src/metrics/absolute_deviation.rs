//! Absolute Deviation fairness: detects groups pushed systematically further
//! from BASE than their peers (stability harm).
//!
//! Friedman omnibus over the K−1 absolute-deviation columns; post-hoc
//! signed-rank test of each group's deviations against the peer mean
//! deviation; paired Cliff's delta effects; score 1 − U_PEER.

use crate::error::{Error, Result};
use crate::exec;
use crate::metrics::{
    finish_score, kendalls_w, unfairness, ComparisonFamily, Metric, MetricReport,
};
use crate::model::{AuditConfig, PredictionPanel};
use crate::stats::{cliffs_delta_paired, friedman_test, wilcoxon_signed_rank, TestOutcome};

pub(crate) fn evaluate(panel: &PredictionPanel, config: &AuditConfig) -> Result<MetricReport> {
    let metric = Metric::AbsoluteDeviation;
    let nb = panel.group_set().non_base_indices();
    let n = panel.n_cases();

    let deviations: Vec<Vec<f64>> = nb
        .iter()
        .map(|&g| panel.abs_deviation(g))
        .collect::<Result<_>>()?;

    if deviations.iter().all(|d| d.iter().all(|v| *v == 0.0)) {
        // every group identical to BASE
        let omnibus = TestOutcome::degenerate(nb.len().saturating_sub(1) as f64);
        return Ok(MetricReport::short_circuit(
            metric,
            Some(omnibus),
            Some(0.0),
        ));
    }
    if nb.len() < 3 {
        return Err(Error::TooFewGroups {
            needed: 4,
            got: panel.n_groups(),
        });
    }

    let dev_refs: Vec<&[f64]> = deviations.iter().map(|d| d.as_slice()).collect();
    let omnibus = friedman_test(&dev_refs)?;
    let concordance = kendalls_w(&omnibus, n, nb.len());
    if omnibus.p_value > config.alpha {
        return Ok(MetricReport::short_circuit(
            metric,
            Some(omnibus),
            Some(concordance),
        ));
    }

    let indexed: Vec<(usize, usize)> = nb.iter().copied().enumerate().collect();
    let raw = exec::try_map(indexed, |(pos, g)| -> Result<_> {
        let dev = &deviations[pos];
        let peer = panel.peer_abs_deviation(g)?;
        let p = wilcoxon_signed_rank(dev, &peer, config)?.p_value;
        let effect = cliffs_delta_paired(dev, &peer)?;
        Ok((p, effect))
    })?;

    let peer_family = super::family(
        panel,
        &nb,
        ComparisonFamily::Peer,
        raw,
        |_, _| "peers".to_string(),
        config.alpha,
    )?;
    let u_peer = unfairness(&peer_family)?;
    let fairness_score = finish_score(u_peer);

    let mut u_components = std::collections::BTreeMap::new();
    u_components.insert("U_PEER".to_string(), u_peer);
    Ok(MetricReport {
        metric,
        omnibus: Some(omnibus),
        concordance: Some(concordance),
        comparisons: peer_family,
        u_components,
        fairness_score,
        short_circuited: false,
    })
}
