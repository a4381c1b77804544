/// The four distances between a neighbour distribution and `q̂₁`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Distances {
    pub l1: f64,
    pub l2: f64,
    /// Kullback–Leibler divergence, natural logarithm.
    pub kl: f64,
    /// Hellinger distance, scaled to `[0, 1]`.
    pub hellinger: f64,
}

/// Distances from a sparse stochastic vector to the null vector.
///
/// `support` yields `(community, probability)` for the nonzero entries only,
/// each community at most once. Communities outside the support contribute
/// through complements of the null vector, so the cost is linear in the
/// support size. When the support covers every community the complements are
/// exactly zero.
pub fn sparse_distances<I>(support: I, null: &[f64], null_sum_sq: f64) -> Distances
where
    I: IntoIterator<Item = (u32, f64)>,
{
    let mut l1 = 0.0;
    let mut sq = 0.0;
    let mut kl = 0.0;
    let mut hell = 0.0;
    let mut w_in = 0.0;
    let mut w_sq_in = 0.0;
    let mut len = 0usize;
    for (c, p) in support {
        let w = null[c as usize];
        let diff = p - w;
        l1 += diff.abs();
        sq += diff * diff;
        w_in += w;
        w_sq_in += w * w;
        if p > 0.0 {
            kl += p * libm::log(p / w);
            let root = libm::sqrt(p) - libm::sqrt(w);
            hell += root * root;
        }
        len += 1;
    }
    let (w_out, w_sq_out) = if len == null.len() {
        (0.0, 0.0)
    } else {
        ((1.0 - w_in).max(0.0), (null_sum_sq - w_sq_in).max(0.0))
    };
    Distances {
        l1: l1 + w_out,
        l2: libm::sqrt(sq + w_sq_out),
        kl: kl.max(0.0),
        hellinger: libm::sqrt((hell + w_out) / 2.0).min(1.0),
    }
}
