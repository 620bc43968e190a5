//! Domain types shared by every pipeline: the prediction panel, group
//! structure, audit configuration, and the derived vectors.
//!
//! All types are immutable after construction and safe to share across
//! threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::stable_sum;

/// Binary decision label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Yes,
    No,
}

impl Label {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "yes" => Some(Label::Yes),
            "no" => Some(Label::No),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Yes => "yes",
            Label::No => "no",
        }
    }
}

/// Centering used by the Levene spread transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeveneCentering {
    Mean,
    Median,
}

/// Handling of zero differences in the signed-rank test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroPolicy {
    DropZeros,
    Pratt,
}

/// Which prediction cells count toward accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccuracyScope {
    AllVariants,
    BaseOnly,
}

/// Knobs shared by every test and pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    /// Significance level for every hypothesis test.
    pub alpha: f64,
    /// Probability cutoff when predicted labels are derived from probabilities.
    pub threshold: f64,
    pub levene_centering: LeveneCentering,
    pub wilcoxon_zero_policy: ZeroPolicy,
    /// Sample-size cutoff at or below which the signed-rank test enumerates
    /// the exact null distribution.
    pub min_exact_n: usize,
    pub accuracy_scope: AccuracyScope,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            threshold: 0.5,
            levene_centering: LeveneCentering::Mean,
            wilcoxon_zero_policy: ZeroPolicy::DropZeros,
            min_exact_n: 25,
            accuracy_scope: AccuracyScope::AllVariants,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig {
                reason: format!("alpha must lie strictly inside (0, 1), got {}", self.alpha),
            });
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "threshold must lie strictly inside (0, 1), got {}",
                    self.threshold
                ),
            });
        }
        Ok(())
    }
}

/// Ordered group identifiers with one designated BASE group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSet {
    groups: Vec<String>,
    base_index: usize,
}

impl GroupSet {
    /// Standard layout: BASE plus at least two non-BASE groups (K ≥ 3), so
    /// peer averages (divisor K − 2) are defined.
    pub fn new<S: Into<String>>(groups: Vec<S>, base: &str) -> Result<Self> {
        Self::build(groups.into_iter().map(Into::into).collect(), base, 3)
    }

    /// Minimal two-group layout for single-comparison demos. Peer-based
    /// operations are unavailable on panels built from it.
    pub fn pair(base: &str, other: &str) -> Result<Self> {
        Self::build(vec![base.to_string(), other.to_string()], base, 2)
    }

    fn build(groups: Vec<String>, base: &str, min_k: usize) -> Result<Self> {
        if groups.len() < min_k {
            return Err(Error::TooFewGroups {
                needed: min_k,
                got: groups.len(),
            });
        }
        for (i, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::EmptyGroupName);
            }
            if groups[..i].contains(g) {
                return Err(Error::DuplicateGroup { group: g.clone() });
            }
        }
        let base_index =
            groups
                .iter()
                .position(|g| g == base)
                .ok_or_else(|| Error::UnknownGroup {
                    group: base.to_string(),
                    known: groups.join(", "),
                })?;
        Ok(Self { groups, base_index })
    }

    /// Total number of groups K.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn base_index(&self) -> usize {
        self.base_index
    }

    pub fn base_name(&self) -> &str {
        &self.groups[self.base_index]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.groups[index]
    }

    pub fn names(&self) -> &[String] {
        &self.groups
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.groups.iter().position(|g| g == name)
    }

    /// Non-BASE group indices in declaration order.
    pub fn non_base_indices(&self) -> Vec<usize> {
        (0..self.groups.len())
            .filter(|&i| i != self.base_index)
            .collect()
    }
}

/// One ingested observation: a single (case, group) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub case_id: String,
    pub group: String,
    pub prob: f64,
    pub true_label: Label,
    pub pred_label: Option<Label>,
}

/// Complete N × K panel of yes-probabilities plus labels.
///
/// Probabilities are stored column-major so each group's vector is a
/// contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionPanel {
    group_set: GroupSet,
    case_ids: Vec<String>,
    /// column-major, `probs[g * n + i]`
    probs: Vec<f64>,
    true_labels: Vec<Label>,
    /// column-major, same layout as `probs`
    pred_labels: Vec<Label>,
}

impl PredictionPanel {
    /// Validate and assemble a panel from long-format rows.
    ///
    /// Rows must cover the full case × group grid exactly once. Missing
    /// predicted labels are derived as `prob ≥ threshold → yes`.
    pub fn build(rows: &[RawRow], group_set: GroupSet, config: &AuditConfig) -> Result<Self> {
        let k = group_set.len();

        // discover cases in first-appearance order
        let mut case_ids: Vec<String> = Vec::new();
        for row in rows {
            if !case_ids.contains(&row.case_id) {
                case_ids.push(row.case_id.clone());
            }
        }
        if case_ids.is_empty() {
            return Err(Error::EmptyPanel);
        }
        let n = case_ids.len();
        let case_index = |id: &str| case_ids.iter().position(|c| c == id).unwrap();

        let mut probs = vec![0.0f64; n * k];
        let mut preds: Vec<Option<Label>> = vec![None; n * k];
        let mut filled = vec![false; n * k];
        let mut trues: Vec<Option<Label>> = vec![None; n];

        for row in rows {
            let g = group_set
                .index_of(&row.group)
                .ok_or_else(|| Error::UnknownGroup {
                    group: row.group.clone(),
                    known: group_set.names().join(", "),
                })?;
            let i = case_index(&row.case_id);
            let cell = g * n + i;
            if filled[cell] {
                return Err(Error::DuplicateCell {
                    case: row.case_id.clone(),
                    group: row.group.clone(),
                });
            }
            if !row.prob.is_finite() || !(0.0..=1.0).contains(&row.prob) {
                return Err(Error::ProbOutOfRange {
                    case: row.case_id.clone(),
                    group: row.group.clone(),
                    value: row.prob,
                });
            }
            match trues[i] {
                None => trues[i] = Some(row.true_label),
                Some(existing) if existing != row.true_label => {
                    return Err(Error::ConflictingLabel {
                        case: row.case_id.clone(),
                    })
                }
                _ => {}
            }
            probs[cell] = row.prob;
            preds[cell] = row.pred_label;
            filled[cell] = true;
        }

        // completeness check, reported per offending (case, group)
        for g in 0..k {
            for i in 0..n {
                if !filled[g * n + i] {
                    return Err(Error::IncompleteGrid {
                        case: case_ids[i].clone(),
                        group: group_set.name(g).to_string(),
                    });
                }
            }
        }

        let true_labels: Vec<Label> = trues.into_iter().map(|t| t.unwrap()).collect();
        let pred_labels: Vec<Label> = preds
            .iter()
            .enumerate()
            .map(|(cell, p)| p.unwrap_or(derive_label(probs[cell], config.threshold)))
            .collect();

        Ok(Self {
            group_set,
            case_ids,
            probs,
            true_labels,
            pred_labels,
        })
    }

    /// Assemble a panel directly from per-group probability columns
    /// (declaration order of `group_set`). Predicted labels are derived.
    pub fn from_columns(
        group_set: GroupSet,
        case_ids: Vec<String>,
        columns: &[Vec<f64>],
        true_labels: Vec<Label>,
        config: &AuditConfig,
    ) -> Result<Self> {
        let k = group_set.len();
        let n = case_ids.len();
        if n == 0 {
            return Err(Error::EmptyPanel);
        }
        if columns.len() != k {
            return Err(Error::ShapeMismatch {
                left: columns.len(),
                right: k,
            });
        }
        if true_labels.len() != n {
            return Err(Error::ShapeMismatch {
                left: true_labels.len(),
                right: n,
            });
        }
        let mut probs = Vec::with_capacity(n * k);
        for (g, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::ShapeMismatch {
                    left: col.len(),
                    right: n,
                });
            }
            for (i, &p) in col.iter().enumerate() {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::ProbOutOfRange {
                        case: case_ids[i].clone(),
                        group: group_set.name(g).to_string(),
                        value: p,
                    });
                }
                probs.push(p);
            }
        }
        let pred_labels = probs
            .iter()
            .map(|&p| derive_label(p, config.threshold))
            .collect();
        Ok(Self {
            group_set,
            case_ids,
            probs,
            true_labels,
            pred_labels,
        })
    }

    pub fn n_cases(&self) -> usize {
        self.case_ids.len()
    }

    pub fn n_groups(&self) -> usize {
        self.group_set.len()
    }

    pub fn group_set(&self) -> &GroupSet {
        &self.group_set
    }

    pub fn case_ids(&self) -> &[String] {
        &self.case_ids
    }

    pub fn prob(&self, case: usize, group: usize) -> f64 {
        self.probs[group * self.n_cases() + case]
    }

    /// Contiguous probability column for one group.
    pub fn column(&self, group: usize) -> &[f64] {
        let n = self.n_cases();
        &self.probs[group * n..(group + 1) * n]
    }

    pub fn base_column(&self) -> &[f64] {
        self.column(self.group_set.base_index())
    }

    pub fn true_label(&self, case: usize) -> Label {
        self.true_labels[case]
    }

    pub fn true_labels(&self) -> &[Label] {
        &self.true_labels
    }

    pub fn pred_label(&self, case: usize, group: usize) -> Label {
        self.pred_labels[group * self.n_cases() + case]
    }

    /// Leave-one-out mean of the other non-BASE columns, per case.
    pub fn peer_average(&self, group: usize) -> Result<Vec<f64>> {
        self.peer_mean_of(group, |i, h| self.prob(i, h))
    }

    /// |P_i^(g) − P_i^(BASE)| per case.
    pub fn abs_deviation(&self, group: usize) -> Result<Vec<f64>> {
        self.require_non_base(group)?;
        let base = self.base_column();
        Ok(self
            .column(group)
            .iter()
            .zip(base)
            .map(|(p, b)| (p - b).abs())
            .collect())
    }

    /// Leave-one-out mean of the other groups' absolute deviations, per case.
    pub fn peer_abs_deviation(&self, group: usize) -> Result<Vec<f64>> {
        let base_idx = self.group_set.base_index();
        self.peer_mean_of(group, |i, h| {
            (self.prob(i, h) - self.prob(i, base_idx)).abs()
        })
    }

    fn require_non_base(&self, group: usize) -> Result<()> {
        if group == self.group_set.base_index() {
            return Err(Error::BaseGroupNotAllowed {
                group: self.group_set.base_name().to_string(),
            });
        }
        Ok(())
    }

    fn peer_mean_of<F: Fn(usize, usize) -> f64>(&self, group: usize, value: F) -> Result<Vec<f64>> {
        self.require_non_base(group)?;
        let k = self.n_groups();
        if k < 3 {
            return Err(Error::TooFewGroups { needed: 3, got: k });
        }
        let peers: Vec<usize> = self
            .group_set
            .non_base_indices()
            .into_iter()
            .filter(|&h| h != group)
            .collect();
        let divisor = peers.len() as f64;
        let mut buf = vec![0.0; peers.len()];
        let mut out = Vec::with_capacity(self.n_cases());
        for i in 0..self.n_cases() {
            for (slot, &h) in buf.iter_mut().zip(&peers) {
                *slot = value(i, h);
            }
            out.push(stable_sum(&mut buf) / divisor);
        }
        Ok(out)
    }
}

fn derive_label(prob: f64, threshold: f64) -> Label {
    if prob >= threshold {
        Label::Yes
    } else {
        Label::No
    }
}

/// Per-group derived vectors, indexed by position in `non_base_indices()`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedVectors {
    pub peer_avg: Vec<Vec<f64>>,
    pub abs_dev: Vec<Vec<f64>>,
    pub peer_abs_dev: Vec<Vec<f64>>,
}

impl DerivedVectors {
    pub fn compute(panel: &PredictionPanel) -> Result<Self> {
        let nb = panel.group_set().non_base_indices();
        let mut peer_avg = Vec::with_capacity(nb.len());
        let mut abs_dev = Vec::with_capacity(nb.len());
        let mut peer_abs_dev = Vec::with_capacity(nb.len());
        for &g in &nb {
            peer_avg.push(panel.peer_average(g)?);
            abs_dev.push(panel.abs_deviation(g)?);
            peer_abs_dev.push(panel.peer_abs_deviation(g)?);
        }
        Ok(Self {
            peer_avg,
            abs_dev,
            peer_abs_dev,
        })
    }
}
