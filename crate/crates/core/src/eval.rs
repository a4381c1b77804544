//! Scores for comparing features with labels and partitions with each other.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Area under the ROC curve of `scores` against binary `labels` (1 is
/// positive), via the Mann–Whitney statistic with average ranks for ties.
pub fn rank_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(invalid("labels", "must have one entry per score"));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(invalid("scores", "contain NaN"));
    }
    let positives = labels.iter().filter(|&&l| l != 0).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(invalid("labels", "need both classes"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Ranks i+1..=j+1 share their mean.
        let mean = (i + j + 2) as f64 / 2.0;
        rank_sum += mean * order[i..=j].iter().filter(|&&k| labels[k] != 0).count() as f64;
        i = j + 1;
    }
    let (p, q) = (positives as f64, negatives as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

fn densify(labels: &[u32]) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    let ids = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (ids, map.len())
}

fn entropy(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * libm::log(p)
        })
        .sum()
}

/// Adjusted mutual information with arithmetic-mean normalization, natural
/// logarithm. 1 for identical clusterings, about 0 for independent ones.
pub fn adjusted_mutual_information(a: &[u32], b: &[u32]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(invalid("clusterings", "must be nonempty and of equal length"));
    }
    let (x, ka) = densify(a);
    let (y, kb) = densify(b);
    if ka == kb && (ka == 1 || ka == a.len()) {
        return Ok(1.0);
    }
    let n = a.len();
    let nf = n as f64;
    let mut table = vec![0u64; ka * kb];
    let mut rows = vec![0u64; ka];
    let mut cols = vec![0u64; kb];
    for (&i, &j) in x.iter().zip(&y) {
        table[i * kb + j] += 1;
        rows[i] += 1;
        cols[j] += 1;
    }
    let mut mi = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let c = table[i * kb + j];
            if c > 0 {
                let c = c as f64;
                mi += c / nf * libm::log(nf * c / (rows[i] as f64 * cols[j] as f64));
            }
        }
    }
    let mut log_fact = vec![0.0; n + 1];
    for k in 1..=n {
        log_fact[k] = log_fact[k - 1] + libm::log(k as f64);
    }
    // Expected mutual information under the hypergeometric model.
    let mut emi = 0.0;
    for &ai in &rows {
        for &bj in &cols {
            let (ai, bj) = (ai as usize, bj as usize);
            let start = (ai + bj).saturating_sub(n).max(1);
            let fixed = log_fact[ai] + log_fact[bj] + log_fact[n - ai] + log_fact[n - bj] - log_fact[n];
            for nij in start..=ai.min(bj) {
                let term = nij as f64 / nf * libm::log(nf * nij as f64 / (ai as f64 * bj as f64));
                let log_p = fixed
                    - log_fact[nij]
                    - log_fact[ai - nij]
                    - log_fact[bj - nij]
                    - log_fact[n + nij - ai - bj];
                emi += term * libm::exp(log_p);
            }
        }
    }
    let mean_entropy = (entropy(&rows, nf) + entropy(&cols, nf)) / 2.0;
    let denominator = mean_entropy - emi;
    let denominator = if denominator < 0.0 {
        denominator.min(-f64::EPSILON)
    } else {
        denominator.max(f64::EPSILON)
    };
    Ok((mi - emi) / denominator)
}
