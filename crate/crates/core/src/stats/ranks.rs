//! Rank assignment with tie averaging.

/// 1-based ranks with ties replaced by the mean rank of the tied block.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    average_ranks_with_ties(values).0
}

/// Ranks plus the sizes of every tied block (blocks of size 1 included).
///
/// The tie sizes feed the Σ(t³ − t) corrections used by the rank tests.
pub fn average_ranks_with_ties(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; n];
    let mut tie_sizes = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // tied block occupies ranks i+1 ..= j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        tie_sizes.push(j - i + 1);
        i = j + 1;
    }
    (ranks, tie_sizes)
}

/// Σ (t³ − t) over tied blocks.
pub fn tie_correction_sum(tie_sizes: &[usize]) -> f64 {
    tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum()
}
