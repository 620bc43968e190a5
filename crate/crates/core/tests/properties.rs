//! Randomized invariants for the kernels and pipelines.

use proptest::prelude::*;

use mfarm_core::model::{AuditConfig, GroupSet, Label, PredictionPanel};
use mfarm_core::stats::{
    bonferroni, cliffs_delta_paired, friedman_test, ks_two_sample, spearman_test,
    variance_ratio_effect, wilcoxon_signed_rank,
};
use mfarm_core::{
    evaluate_metric, fab_score, generate_panel, mfarm_score, oracle, run_audit, GroupSpec, Metric,
    SynthSpec,
};

fn grid(max: usize) -> impl Strategy<Value = Vec<f64>> {
    // probabilities on a 0.01 grid keep strictly-monotone transforms
    // order-exact in floating point
    prop::collection::vec((0u32..=100).prop_map(|v| v as f64 / 100.0), 3..max)
}

fn paired(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    grid(max).prop_flat_map(|x| {
        let n = x.len();
        (
            Just(x),
            prop::collection::vec((0u32..=100).prop_map(|v| v as f64 / 100.0), n..=n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wilcoxon_p_in_unit_interval_and_symmetric((x, y) in paired(40)) {
        let config = AuditConfig::default();
        let ab = wilcoxon_signed_rank(&x, &y, &config).unwrap();
        let ba = wilcoxon_signed_rank(&y, &x, &config).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
        prop_assert_eq!(ab.p_value.to_bits(), ba.p_value.to_bits());
        if ab.degenerate {
            prop_assert_eq!(ab.p_value, 1.0);
        }
    }

    #[test]
    fn cliffs_delta_antisymmetric_and_bounded((x, y) in paired(40)) {
        let ab = cliffs_delta_paired(&x, &y).unwrap();
        let ba = cliffs_delta_paired(&y, &x).unwrap();
        prop_assert!(ab.value.abs() <= 1.0);
        prop_assert_eq!(ab.value, -ba.value);
        prop_assert!((0.0..=1.0).contains(&ab.magnitude));
    }

    #[test]
    fn ks_matches_bruteforce_exactly((x, y) in (grid(30), grid(30))) {
        let kernel = ks_two_sample(&x, &y).unwrap();
        let brute = oracle::ks_statistic_bruteforce(&x, &y).unwrap();
        prop_assert_eq!(kernel.statistic.to_bits(), brute.to_bits());
        prop_assert!((0.0..=1.0).contains(&kernel.p_value));
    }

    #[test]
    fn variance_ratio_symmetric_unit(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let ab = variance_ratio_effect(a, b).value;
        let ba = variance_ratio_effect(b, a).value;
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn friedman_rank_invariance(cols in prop::collection::vec(grid(20), 3..5)) {
        let n = cols.iter().map(|c| c.len()).min().unwrap();
        let trimmed: Vec<Vec<f64>> = cols.iter().map(|c| c[..n].to_vec()).collect();
        let refs: Vec<&[f64]> = trimmed.iter().map(|c| c.as_slice()).collect();
        let plain = friedman_test(&refs).unwrap();
        prop_assert!((0.0..=1.0).contains(&plain.p_value));

        // strictly monotone transform of every entry preserves ranks
        let transformed: Vec<Vec<f64>> = trimmed
            .iter()
            .map(|c| c.iter().map(|v| v * v * v + 2.0 * v).collect())
            .collect();
        let refs2: Vec<&[f64]> = transformed.iter().map(|c| c.as_slice()).collect();
        let mapped = friedman_test(&refs2).unwrap();
        prop_assert_eq!(plain.statistic.to_bits(), mapped.statistic.to_bits());
    }

    #[test]
    fn spearman_increasing_transform_invariance((x, y) in paired(30)) {
        prop_assume!(x.len() >= 3);
        let a = spearman_test(&x, &y).unwrap();
        let fx: Vec<f64> = x.iter().map(|v| v * v * v + 2.0 * v).collect();
        let gy: Vec<f64> = y.iter().map(|v| 3.0 * v + 1.0).collect();
        let b = spearman_test(&fx, &gy).unwrap();
        prop_assert_eq!(a.statistic.to_bits(), b.statistic.to_bits());
        prop_assert!((0.0..=1.0).contains(&a.p_value));
    }

    #[test]
    fn bonferroni_contract(ps in prop::collection::vec(0.0f64..=1.0, 1..30), alpha in 0.001f64..0.5) {
        let out = bonferroni(&ps, alpha).unwrap();
        let m = ps.len() as f64;
        for (raw, (adj, sig)) in ps.iter().zip(&out) {
            prop_assert!(*adj >= *raw && *adj <= 1.0);
            prop_assert_eq!(*sig, *adj <= alpha);
            prop_assert_eq!(*sig, *raw <= alpha / m + f64::EPSILON * raw.max(1.0));
        }
    }

    #[test]
    fn fab_between_harmonic_bounds(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let fab = fab_score(a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&fab));
        // harmonic <= geometric <= arithmetic
        prop_assert!(fab <= (a * b).sqrt() + 1e-15);
        prop_assert!((a * b).sqrt() <= (a + b) / 2.0 + 1e-15);
        let swapped = fab_score(b, a).unwrap();
        prop_assert!((fab - swapped).abs() < 1e-15);
    }

    #[test]
    fn mfarm_between_min_and_max(scores in prop::collection::vec(0.0f64..=1.0, 5)) {
        let arr: [f64; 5] = scores.clone().try_into().unwrap();
        let m = mfarm_score(&arr).unwrap();
        let lo = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = scores.iter().cloned().fold(0.0f64, f64::max);
        prop_assert!(m >= lo - 1e-12 && m <= hi + 1e-12);
    }
}

#[test]
fn exact_and_approximate_wilcoxon_overlap() {
    // the two regimes agree to 0.01 for sample sizes around the cutoff
    let exact_cfg = AuditConfig {
        min_exact_n: 31,
        ..AuditConfig::default()
    };
    let approx_cfg = AuditConfig {
        min_exact_n: 0,
        ..AuditConfig::default()
    };

    let mut state = 0x5DEECE66Du64;
    let mut uniform = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst = 0.0f64;
    for trial in 0..40 {
        let n = 20 + trial % 11;
        let x: Vec<f64> = (0..n).map(|_| uniform()).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| (v + 0.15 * (uniform() - 0.45)).clamp(0.0, 1.0))
            .collect();
        let pe = wilcoxon_signed_rank(&x, &y, &exact_cfg).unwrap().p_value;
        let pa = wilcoxon_signed_rank(&x, &y, &approx_cfg).unwrap().p_value;
        worst = worst.max((pe - pa).abs());
    }
    assert!(worst < 0.01, "max |exact - approx| = {worst}");
}

#[test]
fn null_panels_short_circuit_at_least_ninety_percent() {
    // all groups i.i.d. around BASE: the deviation omnibus should pass
    // (p > alpha) in roughly 95% of runs
    let config = AuditConfig::default();
    let mut short_circuits = 0;
    let mut ks_perfect = 0;
    for seed in 0..200u64 {
        let spec = SynthSpec {
            n_cases: 50,
            base_group: "BASE".into(),
            groups: (0..12)
                .map(|i| GroupSpec {
                    name: format!("G{i}"),
                    mean_shift: 0.0,
                    noise_scale: 0.05,
                    variance_multiplier: 1.0,
                    coupling: 0.0,
                })
                .collect(),
            label_balance: 0.5,
            seed: seed + 40_000,
        };
        let panel = generate_panel(&spec).unwrap().panel;
        let report = evaluate_metric(Metric::AbsoluteDeviation, &panel, &config).unwrap();
        if report.short_circuited {
            short_circuits += 1;
        }
        // on panels with no distributional shift the KS sub-score should
        // stay at 1.00 almost always
        let ks = evaluate_metric(Metric::KsDistributional, &panel, &config).unwrap();
        if ks.fairness_score == 1.0 {
            ks_perfect += 1;
        }
    }
    assert!(
        short_circuits >= 180,
        "only {short_circuits}/200 null panels short-circuited"
    );
    assert!(
        ks_perfect >= 180,
        "only {ks_perfect}/200 null panels kept a perfect KS score"
    );
}

#[test]
fn short_circuit_reports_are_well_formed() {
    let config = AuditConfig::default();
    for seed in 0..20u64 {
        let spec = SynthSpec {
            n_cases: 30,
            base_group: "BASE".into(),
            groups: (0..5)
                .map(|i| GroupSpec {
                    name: format!("G{i}"),
                    noise_scale: 0.03,
                    ..GroupSpec::named("x")
                })
                .collect(),
            label_balance: 0.5,
            seed: seed + 70_000,
        };
        let panel = generate_panel(&spec).unwrap().panel;
        let report = run_audit(&panel, &config).unwrap();
        for m in &report.metrics {
            if m.short_circuited {
                assert!(m.comparisons.is_empty());
                assert_eq!(m.fairness_score, 1.0);
                if let Some(o) = &m.omnibus {
                    assert!(o.degenerate || o.p_value > config.alpha);
                }
            }
            // U never exceeds significant-count / |C|
            for u in m.u_components.values() {
                let sig = m.comparisons.iter().filter(|c| c.significant).count();
                let total = m.comparisons.len().max(1);
                assert!(*u <= sig as f64 / total as f64 + 1e-12);
            }
        }
    }
}

#[test]
fn accuracy_skew_sign_flips_under_label_inversion() {
    let gs = GroupSet::new(vec!["BASE", "A", "B"], "BASE").unwrap();
    let col = vec![0.9, 0.2, 0.7, 0.4, 0.8, 0.1];
    let trues = vec![
        Label::Yes,
        Label::No,
        Label::Yes,
        Label::No,
        Label::Yes,
        Label::No,
    ];
    let ids: Vec<String> = (0..6).map(|i| format!("c{i}")).collect();
    let config = AuditConfig::default();
    let panel = PredictionPanel::from_columns(
        gs.clone(),
        ids.clone(),
        &[col.clone(), col.clone(), col.clone()],
        trues.clone(),
        &config,
    )
    .unwrap();
    let skew = mfarm_core::accuracy_skew(&panel, mfarm_core::AccuracyScope::AllVariants).unwrap();

    // inverted predictions via inverted probabilities around the threshold
    let inv: Vec<f64> = col.iter().map(|p| 1.0 - p).collect();
    let panel_inv = PredictionPanel::from_columns(
        gs,
        ids,
        &[inv.clone(), inv.clone(), inv.clone()],
        trues,
        &config,
    )
    .unwrap();
    let skew_inv =
        mfarm_core::accuracy_skew(&panel_inv, mfarm_core::AccuracyScope::AllVariants).unwrap();
    assert!((skew + skew_inv).abs() < 1e-12);
}

#[test]
fn metric_independence_harness() {
    // the five scores must not be the same function of the panel; the
    // pairwise correlation matrix across randomized panels is reported
    let config = AuditConfig::default();
    let mut all_scores: Vec<[f64; 5]> = Vec::new();
    for seed in 0..40u64 {
        let s = seed as f64 / 40.0;
        let spec = SynthSpec {
            n_cases: 80,
            base_group: "BASE".into(),
            groups: (0..6)
                .map(|i| GroupSpec {
                    name: format!("G{i}"),
                    mean_shift: if i % 3 == 0 { 0.25 * s } else { 0.0 },
                    noise_scale: 0.02 + 0.2 * s * ((i % 2) as f64),
                    variance_multiplier: if i == 1 { 1.0 + 8.0 * s } else { 1.0 },
                    coupling: if i == 2 { s } else { 0.0 },
                })
                .collect(),
            label_balance: 0.5,
            seed: seed + 55_000,
        };
        let panel = generate_panel(&spec).unwrap().panel;
        let report = run_audit(&panel, &config).unwrap();
        all_scores.push(report.sub_scores().unwrap());
    }

    println!("pairwise score correlations across 40 panels:");
    for i in 0..5 {
        for j in (i + 1)..5 {
            let xi: Vec<f64> = all_scores.iter().map(|s| s[i]).collect();
            let xj: Vec<f64> = all_scores.iter().map(|s| s[j]).collect();
            println!(
                "  {} vs {}: r = {:+.3}",
                Metric::ALL[i].id(),
                Metric::ALL[j].id(),
                pearson(&xi, &xj)
            );
        }
    }

    let differs = all_scores
        .iter()
        .any(|s| s.iter().any(|v| (v - s[0]).abs() > 1e-9));
    assert!(differs, "all five scores identical on every panel");
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}
