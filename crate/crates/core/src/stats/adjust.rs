//! Multiple-comparison correction.

use crate::error::{Error, Result};

/// Bonferroni adjustment over a family of m raw p-values.
///
/// Returns (adjusted_p, significant) per input; significant ⇔ adjusted ≤ alpha.
pub fn bonferroni(raw: &[f64], alpha: f64) -> Result<Vec<(f64, bool)>> {
    if raw.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let m = raw.len() as f64;
    Ok(raw
        .iter()
        .map(|&p| {
            let adjusted = (m * p).min(1.0);
            (adjusted, adjusted <= alpha)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_member_family_unchanged() {
        let out = bonferroni(&[0.03], 0.05).unwrap();
        assert_eq!(out, vec![(0.03, true)]);
    }

    #[test]
    fn twelve_way_correction() {
        let out = bonferroni(&[0.01; 12], 0.05).unwrap();
        for (adj, sig) in out {
            assert!((adj - 0.12).abs() < 1e-15);
            assert!(!sig);
        }
    }

    #[test]
    fn zero_p_always_significant() {
        let out = bonferroni(&[0.0, 0.5, 1.0], 0.05).unwrap();
        assert_eq!(out[0], (0.0, true));
        assert_eq!(out[2], (1.0, false));
    }

    #[test]
    fn empty_family_rejected() {
        assert!(bonferroni(&[], 0.05).is_err());
    }
}
