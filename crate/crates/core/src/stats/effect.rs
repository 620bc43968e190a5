//! Effect sizes attached to post-hoc comparisons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectKind {
    CliffsDelta,
    VarianceRatio,
    KsDistance,
    SpearmanAbs,
}

/// A signed effect size with its magnitude clipped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub kind: EffectKind,
    pub value: f64,
    pub magnitude: f64,
}

impl EffectSize {
    pub fn new(kind: EffectKind, value: f64) -> Self {
        Self {
            kind,
            value,
            magnitude: value.abs().clamp(0.0, 1.0),
        }
    }
}

/// Paired Cliff's delta: (#{x_i > y_i} − #{x_i < y_i}) / N. Ties contribute zero.
pub fn cliffs_delta_paired(x: &[f64], y: &[f64]) -> Result<EffectSize> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut greater = 0i64;
    let mut less = 0i64;
    for (a, b) in x.iter().zip(y) {
        if a > b {
            greater += 1;
        } else if a < b {
            less += 1;
        }
    }
    let delta = (greater - less) as f64 / x.len() as f64;
    Ok(EffectSize::new(EffectKind::CliffsDelta, delta))
}

/// Normalized variance ratio |R − 1| / (R + 1) with R = var_a / var_b.
///
/// Limits: exactly one variance zero → 1; both zero → 0. Symmetric in its
/// arguments.
pub fn variance_ratio_effect(var_a: f64, var_b: f64) -> EffectSize {
    let a = var_a.max(0.0);
    let b = var_b.max(0.0);
    let value = if a == 0.0 && b == 0.0 {
        0.0
    } else if a == 0.0 || b == 0.0 {
        1.0
    } else {
        // evaluated on the ratio ≥ 1 so that swapped arguments give the
        // same bits
        let r = a.max(b) / a.min(b);
        (r - 1.0) / (r + 1.0)
    };
    EffectSize::new(EffectKind::VarianceRatio, value)
}
