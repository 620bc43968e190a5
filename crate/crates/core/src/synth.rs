//! Synthetic panel generation with controlled harm injection.
//!
//! The generator lets tests dial in each harm type independently: a mean
//! shift (allocational), a variance multiplier (stability), and a
//! deviation–confidence coupling coefficient (latent). Columns derive from a
//! shared BASE draw:
//!
//! ```text
//! base_i ~ U[0.05, 0.95]
//! col_i  = clip01(base_i + shift
//!                 + noise_scale · √variance_multiplier · eps_i
//!                 + coupling · 0.25 · base_i · eta_i)
//! eps_i ~ U[−1, 1],  eta_i ∈ {−1, +1}
//! ```
//!
//! Clipped cells are counted so callers can demand clip-free panels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AuditConfig, GroupSet, Label, PredictionPanel};

/// Per-group generation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    /// Constant shift added to every probability (vs BASE).
    #[serde(default)]
    pub mean_shift: f64,
    /// Amplitude of the uniform noise term.
    #[serde(default)]
    pub noise_scale: f64,
    /// Multiplies the noise variance; √multiplier scales the amplitude.
    #[serde(default = "one")]
    pub variance_multiplier: f64,
    /// Couples deviation magnitude to the BASE probability.
    #[serde(default)]
    pub coupling: f64,
}

fn one() -> f64 {
    1.0
}

impl GroupSpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            mean_shift: 0.0,
            noise_scale: 0.0,
            variance_multiplier: 1.0,
            coupling: 0.0,
        }
    }
}

/// Full panel synthesis spec. Same seed, same panel, on every platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_cases: usize,
    #[serde(default = "default_base_name")]
    pub base_group: String,
    pub groups: Vec<GroupSpec>,
    /// Fraction of true-Yes cases.
    #[serde(default = "half")]
    pub label_balance: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_base_name() -> String {
    "BASE".to_string()
}

fn half() -> f64 {
    0.5
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_cases == 0 {
            return Err(Error::SpecOutOfRange {
                reason: "n_cases must be at least 1".into(),
            });
        }
        if self.groups.len() < 2 {
            return Err(Error::SpecOutOfRange {
                reason: "at least two non-BASE groups required".into(),
            });
        }
        if !(0.0..=1.0).contains(&self.label_balance) {
            return Err(Error::SpecOutOfRange {
                reason: format!("label_balance {} outside [0, 1]", self.label_balance),
            });
        }
        for g in &self.groups {
            for (field, v) in [
                ("mean_shift", g.mean_shift),
                ("noise_scale", g.noise_scale),
                ("variance_multiplier", g.variance_multiplier),
                ("coupling", g.coupling),
            ] {
                if !v.is_finite() {
                    return Err(Error::SpecOutOfRange {
                        reason: format!("group `{}`: {} must be finite", g.name, field),
                    });
                }
            }
            if g.noise_scale < 0.0 || g.variance_multiplier < 0.0 {
                return Err(Error::SpecOutOfRange {
                    reason: format!("group `{}`: negative scale", g.name),
                });
            }
        }
        Ok(())
    }
}

/// Generated panel plus the number of clipped cells.
#[derive(Debug, Clone)]
pub struct SynthPanel {
    pub panel: PredictionPanel,
    pub clipped: usize,
}

/// Deterministically realize a spec.
///
/// Draw order is fixed: the BASE column first, then the true labels, then
/// each group column in declaration order (eps and eta per case).
pub fn generate_panel(spec: &SynthSpec) -> Result<SynthPanel> {
    spec.validate()?;
    let n = spec.n_cases;
    let mut rng = SplitMix64::new(spec.seed);

    let base: Vec<f64> = (0..n).map(|_| 0.05 + 0.9 * rng.next_f64()).collect();
    let labels: Vec<Label> = (0..n)
        .map(|_| {
            if rng.next_f64() < spec.label_balance {
                Label::Yes
            } else {
                Label::No
            }
        })
        .collect();

    let mut clipped = 0usize;
    let mut columns = Vec::with_capacity(spec.groups.len() + 1);
    columns.push(base.clone());
    for g in &spec.groups {
        let amplitude = g.noise_scale * g.variance_multiplier.sqrt();
        let col = base
            .iter()
            .map(|&b| {
                let eps = 2.0 * rng.next_f64() - 1.0;
                let eta = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
                let raw = b + g.mean_shift + amplitude * eps + g.coupling * 0.25 * b * eta;
                if !(0.0..=1.0).contains(&raw) {
                    clipped += 1;
                }
                raw.clamp(0.0, 1.0)
            })
            .collect();
        columns.push(col);
    }

    let mut names = vec![spec.base_group.clone()];
    names.extend(spec.groups.iter().map(|g| g.name.clone()));
    let group_set = GroupSet::new(names, &spec.base_group)?;
    let case_ids = (0..n).map(|i| format!("case{i:05}")).collect();
    let panel = PredictionPanel::from_columns(
        group_set,
        case_ids,
        &columns,
        labels,
        &AuditConfig::default(),
    )?;
    Ok(SynthPanel { panel, clipped })
}

/// The two-group demonstration pair: one model with an erratic group, one
/// perfectly stable. Group A is BASE in both.
pub fn toy_example_panels() -> (PredictionPanel, PredictionPanel) {
    let steady = vec![0.72, 0.68, 0.71, 0.69];
    let erratic = vec![0.95, 0.45, 0.90, 0.50];
    (
        two_group_panel(&steady, &erratic),
        two_group_panel(&steady, &steady),
    )
}

fn two_group_panel(a: &[f64], b: &[f64]) -> PredictionPanel {
    let gs = GroupSet::pair("Group A", "Group B").expect("valid pair");
    let ids = (1..=a.len()).map(|i| format!("patient{i}")).collect();
    let trues = (0..a.len())
        .map(|i| if i % 2 == 0 { Label::Yes } else { Label::No })
        .collect();
    PredictionPanel::from_columns(
        gs,
        ids,
        &[a.to_vec(), b.to_vec()],
        trues,
        &AuditConfig::default(),
    )
    .expect("valid toy panel")
}

/// SplitMix64: documented constant set, identical stream on every platform.
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
