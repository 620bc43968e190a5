//! Nonparametric hypothesis tests.
//!
//! Shared contract: every returned p-value lies in [0, 1], and degenerate
//! inputs (zero variance, full ties, all-zero differences) yield p = 1 with
//! the `degenerate` flag set instead of an error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AuditConfig, LeveneCentering, ZeroPolicy};
use crate::stats::ranks::{average_ranks, average_ranks_with_ties, tie_correction_sum};
use crate::stats::special::{chi2_sf, f_sf, kolmogorov_sf, normal_sf, t_sf};
use crate::stats::{mean, median, stable_sum};

/// Statistic, p-value, and degeneracy flag for any hypothesis test.
///
/// `statistic` is test-specific: χ² for Friedman, min rank sum for the
/// signed-rank test, F for Levene, D for KS, ρ for Spearman. `df_or_n` holds
/// the effective degrees of freedom or sample size, whichever the test's
/// reference distribution uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub df_or_n: f64,
    pub degenerate: bool,
}

impl TestOutcome {
    pub(crate) fn degenerate(df_or_n: f64) -> Self {
        Self {
            statistic: 0.0,
            p_value: 1.0,
            df_or_n,
            degenerate: true,
        }
    }
}

/// Friedman rank test over K aligned columns (blocks = cases).
///
/// Within-case average ranks, tie-corrected χ² statistic, p-value against
/// chi-square with K − 1 degrees of freedom. All cases fully tied →
/// degenerate.
pub fn friedman_test(columns: &[&[f64]]) -> Result<TestOutcome> {
    let k = columns.len();
    if k < 3 {
        return Err(Error::TooFewGroups { needed: 3, got: k });
    }
    let n = columns[0].len();
    for col in columns {
        if col.len() != n {
            return Err(Error::ShapeMismatch {
                left: col.len(),
                right: n,
            });
        }
    }
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }

    let mut rank_sums = vec![0.0f64; k];
    let mut tie_sum = 0.0;
    let mut row = vec![0.0f64; k];
    for i in 0..n {
        for (j, col) in columns.iter().enumerate() {
            row[j] = col[i];
        }
        let (ranks, ties) = average_ranks_with_ties(&row);
        for (j, r) in ranks.iter().enumerate() {
            rank_sums[j] += r;
        }
        tie_sum += tie_correction_sum(&ties);
    }

    let nf = n as f64;
    let kf = k as f64;
    let correction = 1.0 - tie_sum / (nf * kf * (kf * kf - 1.0));
    if correction <= 0.0 {
        // every case fully tied
        return Ok(TestOutcome::degenerate(kf - 1.0));
    }

    let mut squares: Vec<f64> = rank_sums.iter().map(|r| r * r).collect();
    let ss = stable_sum(&mut squares);
    let uncorrected = 12.0 / (nf * kf * (kf + 1.0)) * ss - 3.0 * nf * (kf + 1.0);
    let statistic = (uncorrected / correction).max(0.0);
    let p_value = chi2_sf(statistic, (k - 1) as u64)?;
    Ok(TestOutcome {
        statistic,
        p_value,
        df_or_n: kf - 1.0,
        degenerate: false,
    })
}

/// Paired Wilcoxon signed-rank test, two-sided.
///
/// Zero differences handled per `config.wilcoxon_zero_policy`. Exact
/// enumeration of the signed-rank null when the effective sample size is at
/// most `config.min_exact_n`, tie-corrected normal approximation with
/// continuity correction above it.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64], config: &AuditConfig) -> Result<TestOutcome> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }

    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let n_zero = diffs.iter().filter(|d| **d == 0.0).count();
    if n_zero == diffs.len() {
        return Ok(TestOutcome::degenerate(0.0));
    }

    // ranking set per policy: Pratt keeps zeros in the ranking, classical drops them
    let ranked: Vec<f64> = match config.wilcoxon_zero_policy {
        ZeroPolicy::DropZeros => diffs.iter().copied().filter(|d| *d != 0.0).collect(),
        ZeroPolicy::Pratt => diffs.clone(),
    };
    let abs: Vec<f64> = ranked.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);

    let mut w_plus = 0.0;
    let mut w_minus = 0.0;
    for (d, r) in ranked.iter().zip(&ranks) {
        if *d > 0.0 {
            w_plus += r;
        } else if *d < 0.0 {
            w_minus += r;
        }
    }
    let statistic = w_plus.min(w_minus);
    let n_eff = ranked.iter().filter(|d| **d != 0.0).count();

    let p_value = if n_eff <= config.min_exact_n && n_eff <= 50 {
        // ranks of the sign-flippable (nonzero) positions
        let flippable: Vec<f64> = ranked
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| **d != 0.0)
            .map(|(_, r)| *r)
            .collect();
        exact_signed_rank_p(&flippable, statistic)
    } else {
        let nr = ranked.len() as f64;
        let nz = (ranked.len() - n_eff) as f64;
        let mut mn = nr * (nr + 1.0) * 0.25;
        let mut var24 = nr * (nr + 1.0) * (2.0 * nr + 1.0);
        if nz > 0.0 {
            mn -= nz * (nz + 1.0) * 0.25;
            var24 -= nz * (nz + 1.0) * (2.0 * nz + 1.0);
        }
        // tie correction over the nonzero positions' ranks
        let nonzero_ranks: Vec<f64> = ranked
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| **d != 0.0)
            .map(|(_, r)| *r)
            .collect();
        let (_, ties) = average_ranks_with_ties(&nonzero_ranks);
        var24 -= 0.5 * tie_correction_sum(&ties);
        let se = (var24 / 24.0).sqrt();
        if se <= 0.0 {
            return Ok(TestOutcome::degenerate(n_eff as f64));
        }
        // continuity correction toward the mean; zero when already there
        let diff = statistic - mn;
        let cc = if diff == 0.0 {
            0.0
        } else {
            0.5 * diff.signum()
        };
        let z = (diff - cc) / se;
        (2.0 * normal_sf(z.abs())).min(1.0)
    };

    Ok(TestOutcome {
        statistic,
        p_value,
        df_or_n: n_eff as f64,
        degenerate: false,
    })
}

// Exact two-sided p over all 2^n sign assignments of the observed ranks.
//
// Tie-averaged ranks are multiples of 1/2; doubling makes them integers, so
// the null distribution of W+ is tabulated by dynamic programming. p =
// min(1, 2 · P(W+ ≤ min(W+, W−))), the distribution being symmetric.
fn exact_signed_rank_p(ranks: &[f64], observed_min: f64) -> f64 {
    let n = ranks.len();
    debug_assert!(n <= 50);
    let scaled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = scaled.iter().sum();
    let threshold = (2.0 * observed_min).round() as usize;

    // counts[w] = number of sign assignments with scaled W+ = w
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &s in &scaled {
        reach += s;
        for w in (s..=reach).rev() {
            counts[w] += counts[w - s];
        }
    }
    let tail: f64 = counts[..=threshold.min(total)].iter().sum();
    let total_assignments = 2.0f64.powi(n as i32);
    (2.0 * tail / total_assignments).min(1.0)
}

/// Levene's homogeneity-of-variances test (one-way ANOVA on |x − center|).
///
/// `centering` selects the classical mean-centered transform or the
/// median-centered (Brown–Forsythe) variant.
pub fn levene_test(samples: &[&[f64]], centering: LeveneCentering) -> Result<TestOutcome> {
    let k = samples.len();
    if k < 2 {
        return Err(Error::TooFewGroups { needed: 2, got: k });
    }
    for (index, s) in samples.iter().enumerate() {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall {
                index,
                len: s.len(),
            });
        }
    }

    let n_total: usize = samples.iter().map(|s| s.len()).sum();
    let mut group_sums = Vec::with_capacity(k);
    let mut group_means = Vec::with_capacity(k);
    let mut group_ssw = Vec::with_capacity(k);
    let mut sizes = Vec::with_capacity(k);
    for s in samples {
        let center = match centering {
            LeveneCentering::Mean => mean(s),
            LeveneCentering::Median => median(s),
        };
        let z: Vec<f64> = s.iter().map(|x| (x - center).abs()).collect();
        let zm = mean(&z);
        let ssw: f64 = z.iter().map(|v| (v - zm) * (v - zm)).sum();
        group_sums.push(z.iter().sum::<f64>());
        group_means.push(zm);
        group_ssw.push(ssw);
        sizes.push(s.len() as f64);
    }

    let df1 = (k - 1) as f64;
    let df2 = (n_total - k) as f64;

    // identical spread profiles across groups carry no signal at all
    if group_means.iter().all(|zm| *zm == group_means[0]) {
        return Ok(TestOutcome::degenerate(df2));
    }

    let grand = stable_sum(&mut group_sums) / n_total as f64;
    let mut between: Vec<f64> = group_means
        .iter()
        .zip(&sizes)
        .map(|(zm, nj)| nj * (zm - grand) * (zm - grand))
        .collect();
    let ssb = stable_sum(&mut between);
    let ssw = stable_sum(&mut group_ssw);

    if ssw == 0.0 {
        // zero within-group spread with real between-group spread: off the
        // F scale entirely
        return Ok(TestOutcome {
            statistic: f64::MAX,
            p_value: 0.0,
            df_or_n: df2,
            degenerate: false,
        });
    }

    let statistic = (df2 / df1) * (ssb / ssw);
    let p_value = f_sf(statistic, df1, df2)?;
    Ok(TestOutcome {
        statistic,
        p_value,
        df_or_n: df2,
        degenerate: false,
    })
}

/// Two-sample Kolmogorov–Smirnov test.
///
/// D is the exact sup over the pooled sample points of the ECDF difference;
/// the p-value uses the asymptotic Kolmogorov distribution at
/// λ = (√n_e + 0.12 + 0.11/√n_e) · D with n_e the harmonic sample size.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<TestOutcome> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);

    let nx = xs.len();
    let ny = ys.len();
    let (mut i, mut j) = (0usize, 0usize);
    let mut d_max = 0.0f64;
    while i < nx || j < ny {
        // next pooled point
        let t = match (xs.get(i), ys.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => break,
        };
        while i < nx && xs[i] == t {
            i += 1;
        }
        while j < ny && ys[j] == t {
            j += 1;
        }
        let d = (i as f64 / nx as f64 - j as f64 / ny as f64).abs();
        if d > d_max {
            d_max = d;
        }
    }

    let n_e = (nx * ny) as f64 / (nx + ny) as f64;
    let sqrt_ne = n_e.sqrt();
    let lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d_max;
    let p_value = kolmogorov_sf(lambda);
    Ok(TestOutcome {
        statistic: d_max,
        p_value,
        df_or_n: n_e,
        degenerate: d_max == 0.0,
    })
}

/// Spearman rank-correlation test, two-sided.
///
/// ρ is the Pearson correlation of tie-averaged ranks; the p-value uses the
/// t approximation with N − 2 degrees of freedom. Either input all-tied →
/// degenerate (ρ = 0, p = 1); |ρ| = 1 → p = 0.
pub fn spearman_test(x: &[f64], y: &[f64]) -> Result<TestOutcome> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }

    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let mx = mean(&rx);
    let my = mean(&ry);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        let da = a - mx;
        let db = b - my;
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(TestOutcome::degenerate((n - 2) as f64));
    }

    // perfect concordance/discordance detected on the ranks themselves
    // (rank arithmetic is exact in f64, the normalized formula is not)
    let rho = if rx == ry {
        1.0
    } else if rx.iter().zip(&ry).all(|(a, b)| a + b == (n + 1) as f64) {
        -1.0
    } else {
        (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)
    };
    let df = (n - 2) as f64;
    let p_value = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        (2.0 * t_sf(t.abs(), df)?).min(1.0)
    };
    Ok(TestOutcome {
        statistic: rho,
        p_value,
        df_or_n: df,
        degenerate: false,
    })
}
