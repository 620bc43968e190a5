//! Fairness auditing over demographic prediction panels.
//!
//! Given a complete panel of model output probabilities — N cases, each
//! evaluated under K demographic variants including a neutral BASE — this
//! crate computes five statistically grounded fairness metrics (mean
//! difference, absolute deviation, KS distributional, variance
//! heterogeneity, correlation difference), aggregates them into the mFARM
//! composite (geometric mean) and the FAB deployability score (harmonic mean
//! with accuracy), and reports the traditional statistical-parity /
//! equal-opportunity baselines alongside.
//!
//! Pipelines fan out over rayon when the default `parallel` feature is
//! enabled; disabling it produces a dependency-free sequential build with
//! bit-identical results.

pub mod aggregate;
pub mod error;
mod exec;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod stats;
pub mod synth;

pub use aggregate::{
    accuracy, accuracy_skew, equalized_odds_score, fab_score, mfarm_score, run_audit,
    run_audit_subset, statistical_parity_score, AuditReport, PanelDigest,
};
pub use error::{Error, Result};
pub use metrics::{
    evaluate as evaluate_metric, unfairness, ComparisonFamily, ComparisonRecord, Metric,
    MetricReport,
};
pub use model::{
    AccuracyScope, AuditConfig, DerivedVectors, GroupSet, Label, LeveneCentering, PredictionPanel,
    RawRow, ZeroPolicy,
};
pub use stats::{EffectKind, EffectSize, TestOutcome};
pub use synth::{generate_panel, toy_example_panels, GroupSpec, SynthPanel, SynthSpec};
