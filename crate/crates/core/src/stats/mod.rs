//! Statistical kernels: tail functions, rank utilities, hypothesis tests,
//! effect sizes, and the Bonferroni correction.

pub mod adjust;
pub mod effect;
pub mod hypothesis;
pub mod ranks;
pub mod special;

pub use adjust::bonferroni;
pub use effect::{cliffs_delta_paired, variance_ratio_effect, EffectKind, EffectSize};
pub use hypothesis::{
    friedman_test, ks_two_sample, levene_test, spearman_test, wilcoxon_signed_rank, TestOutcome,
};

/// Sum after sorting into a canonical order.
///
/// Group-indexed reductions go through this so that relabeling or reordering
/// non-BASE groups leaves every aggregate bit-identical.
pub(crate) fn stable_sum(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    values.iter().sum()
}

/// Arithmetic mean.
pub fn mean(xs: &[f64]) -> f64 {
    debug_assert!(!xs.is_empty());
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (divisor n − 1).
pub fn sample_variance(xs: &[f64]) -> f64 {
    debug_assert!(xs.len() >= 2);
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub(crate) fn median(xs: &[f64]) -> f64 {
    debug_assert!(!xs.is_empty());
    let mut sorted = xs.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}
