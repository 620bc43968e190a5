//! Independent brute-force reference implementations.
//!
//! These deliberately avoid the kernels in [`crate::stats`]: ranks are
//! recomputed by direct counting, the signed-rank null is enumerated rather
//! than tabulated, the KS distance is a full sweep over pooled points, and
//! the Friedman statistic comes from an algebraically equivalent but
//! differently arranged formula. Tests compare kernel output against these.

use crate::error::{Error, Result};
use crate::stats::special::chi2_sf;

/// Exact two-sided signed-rank p-value by enumerating all 2^n sign
/// assignments of the observed tie-averaged ranks. Zero differences are
/// dropped. Limited to n ≤ 15.
pub fn wilcoxon_exact_p(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let diffs: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Ok(1.0);
    }
    let n = diffs.len();
    if n > 15 {
        return Err(Error::InputTooLarge { max: 15, got: n });
    }

    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = counting_ranks(&abs);

    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let w_minus: f64 = ranks.iter().sum::<f64>() - w_plus;
    let observed = w_plus.min(w_minus);

    let mut at_or_below = 0u64;
    let total = 1u64 << n;
    for mask in 0..total {
        let mut w = 0.0;
        for (bit, r) in ranks.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                w += r;
            }
        }
        if w <= observed + 1e-9 {
            at_or_below += 1;
        }
    }
    Ok((2.0 * at_or_below as f64 / total as f64).min(1.0))
}

// Rank by direct counting: 1 + #{smaller} + #{equal others}/2.
fn counting_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|v| {
            let smaller = values.iter().filter(|w| *w < v).count();
            let equal = values.iter().filter(|w| *w == v).count();
            1.0 + smaller as f64 + (equal - 1) as f64 / 2.0
        })
        .collect()
}

/// KS distance as a plain sweep of |ECDF difference| over every pooled point.
pub fn ks_statistic_bruteforce(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    let nx = x.len() as f64;
    let ny = y.len() as f64;
    let mut d_max = 0.0f64;
    for &t in x.iter().chain(y) {
        let fx = x.iter().filter(|v| **v <= t).count() as f64 / nx;
        let fy = y.iter().filter(|v| **v <= t).count() as f64 / ny;
        let d = (fx - fy).abs();
        if d > d_max {
            d_max = d;
        }
    }
    Ok(d_max)
}

/// Friedman statistic and p-value from a second, independently arranged
/// computation: counting-based ranks and the
/// (K−1)·[Σ R_j² − N²K(K+1)²/4] / [Σ r_ij² − NK(K+1)²/4] form.
pub fn friedman_reference(columns: &[&[f64]]) -> Result<(f64, f64)> {
    let k = columns.len();
    if k < 3 {
        return Err(Error::TooFewGroups { needed: 3, got: k });
    }
    let n = columns[0].len();
    for c in columns {
        if c.len() != n {
            return Err(Error::ShapeMismatch {
                left: c.len(),
                right: n,
            });
        }
    }

    let mut rank_sums = vec![0.0f64; k];
    let mut sum_sq_ranks = 0.0f64;
    for i in 0..n {
        let row: Vec<f64> = columns.iter().map(|c| c[i]).collect();
        let ranks = counting_ranks(&row);
        for (j, r) in ranks.iter().enumerate() {
            rank_sums[j] += r;
            sum_sq_ranks += r * r;
        }
    }

    let nf = n as f64;
    let kf = k as f64;
    let numerator: f64 = (kf - 1.0)
        * (rank_sums.iter().map(|r| r * r).sum::<f64>()
            - nf * nf * kf * (kf + 1.0) * (kf + 1.0) / 4.0);
    let denominator = sum_sq_ranks - nf * kf * (kf + 1.0) * (kf + 1.0) / 4.0;
    if denominator <= 0.0 {
        return Ok((0.0, 1.0));
    }
    let statistic = (numerator / denominator).max(0.0);
    let p = chi2_sf(statistic, (k - 1) as u64)?;
    Ok((statistic, p))
}

/// Paired Cliff's delta evaluated term by term.
pub fn cliffs_delta_reference(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut score = 0i64;
    for (a, b) in x.iter().zip(y) {
        if a > b {
            score += 1;
        }
        if a < b {
            score -= 1;
        }
    }
    Ok(score as f64 / x.len() as f64)
}
