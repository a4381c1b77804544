//! Community-aware node features.
//!
//! Given a graph and a partition, every node gets thirteen features that
//! describe how its neighbourhood is spread over communities:
//!
//! | column   | meaning |
//! |----------|---------|
//! | `CADA`   | `deg(v) / max_i deg_{A_i}(v)` |
//! | `CADA*`  | share of neighbours inside the node's own community |
//! | `WMD`    | z-score of the internal degree within the community |
//! | `CPC`    | participation coefficient `1 − Σ_i (deg_{A_i}(v)/deg(v))²` |
//! | `CAS`    | community association strength, the outlier threshold `β*(v)` |
//! | `CD_*1`  | L1, L2, KL and Hellinger distance between `q₁(v)` and `q̂₁` |
//! | `CD_*2`  | the same for the two-step distribution `q₂(v)` |
//!
//! `q₁(v)` is the community distribution of a random neighbour of `v`,
//! `q₂(v)` the average of `q₁` over the neighbours (two random-walk steps),
//! and `q̂₁` the volume shares that a degree-preserving random graph
//! predicts for both.
//!
//! Depth-one features cost `O(m + n·ℓ)` in the worst case and `O(m)` when
//! nodes touch few communities; depth-two features cost `O(m·ℓ)` worst case.

mod distance;
mod matrix;
mod profile;

use alloc::vec;
use alloc::vec::Vec;

pub use distance::{sparse_distances, Distances};
pub use matrix::FeatureMatrix;
pub use profile::CommunityProfile;

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;

/// Column names of the community-aware features, in output order.
pub const COMMUNITY_FEATURES: [&str; 13] = [
    "CADA", "CADA*", "WMD", "CPC", "CAS", "CD_L11", "CD_L21", "CD_KL1", "CD_HD1", "CD_L12", "CD_L22", "CD_KL2",
    "CD_HD2",
];

/// Reusable buffers for the two-step distribution.
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    acc: Vec<f64>,
    touched: Vec<u32>,
}

impl Scratch {
    pub fn new(num_communities: usize) -> Scratch {
        Scratch {
            acc: vec![0.0; num_communities],
            touched: Vec::new(),
        }
    }
}

/// Feature evaluator over a fixed graph and partition. Read-only after
/// construction, so it can be shared between threads.
#[derive(Debug, Clone)]
pub struct CommunityFeatures<'a> {
    g: &'a Graph,
    p: &'a Partition,
    profile: CommunityProfile,
    lambda: f64,
    /// Mean and population standard deviation of internal degrees per community.
    internal_stats: Vec<(f64, f64)>,
}

impl<'a> CommunityFeatures<'a> {
    pub fn new(g: &'a Graph, p: &'a Partition, lambda: f64) -> Result<CommunityFeatures<'a>> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", "must be a positive finite number"));
        }
        let profile = CommunityProfile::build(g, p)?;
        let l = p.num_communities();
        let mut sum = vec![0.0; l];
        for v in g.nodes() {
            let c = p.community_of(v);
            sum[c as usize] += profile.count_in(v, c) as f64;
        }
        let mean: Vec<f64> = sum.iter().zip(p.sizes()).map(|(s, &k)| s / k as f64).collect();
        let mut dev = vec![0.0; l];
        for v in g.nodes() {
            let c = p.community_of(v) as usize;
            let d = profile.count_in(v, c as u32) as f64 - mean[c];
            dev[c] += d * d;
        }
        let internal_stats = (0..l)
            .map(|c| (mean[c], libm::sqrt(dev[c] / p.sizes()[c] as f64)))
            .collect();
        Ok(CommunityFeatures {
            g,
            p,
            profile,
            lambda,
            internal_stats,
        })
    }

    pub fn profile(&self) -> &CommunityProfile {
        &self.profile
    }

    pub fn scratch(&self) -> Scratch {
        Scratch::new(self.p.num_communities())
    }

    fn degree(&self, v: NodeId) -> f64 {
        self.g.degree(v) as f64
    }

    fn own_count(&self, v: NodeId) -> f64 {
        self.profile.count_in(v, self.p.community_of(v)) as f64
    }

    /// Anomaly score `deg(v) / max_i deg_{A_i}(v)`, in `[1, deg(v)]`.
    pub fn cada(&self, v: NodeId) -> f64 {
        self.degree(v) / self.profile.max_count(v) as f64
    }

    /// Normalized anomaly score `deg_{A_i}(v)/deg(v)` for the node's own
    /// community `A_i`, even when another community holds more neighbours.
    pub fn cada_norm(&self, v: NodeId) -> f64 {
        self.own_count(v) / self.degree(v)
    }

    /// Within-module degree z-score; 0 when the community's internal degrees
    /// are all equal.
    pub fn wmd(&self, v: NodeId) -> f64 {
        let (mean, sd) = self.internal_stats[self.p.community_of(v) as usize];
        if sd == 0.0 {
            0.0
        } else {
            (self.own_count(v) - mean) / sd
        }
    }

    /// Participation coefficient.
    pub fn cpc(&self, v: NodeId) -> f64 {
        let d = self.degree(v);
        let concentration: f64 = self
            .profile
            .entries(v)
            .iter()
            .map(|&(_, k)| {
                let share = k as f64 / d;
                share * share
            })
            .sum();
        1.0 - concentration
    }

    /// Community association strength
    /// `β*(v) = 2 (deg_{A_i}(v)/deg(v) − λ (vol(A_i) − deg(v))/vol(V))`:
    /// the value of β above which moving `v` into a community of its own
    /// raises the approximated regularized modularity.
    pub fn cas(&self, v: NodeId) -> f64 {
        let d = self.degree(v);
        let vol_own = self.p.volume(self.p.community_of(v)) as f64;
        let vol = self.g.total_volume() as f64;
        2.0 * (self.own_count(v) / d - self.lambda * (vol_own - d) / vol)
    }

    /// `q₁(v)` as sparse `(community, probability)` pairs.
    pub fn q1_vector(&self, v: NodeId) -> Vec<(u32, f64)> {
        let d = self.degree(v);
        self.profile.entries(v).iter().map(|&(c, k)| (c, k as f64 / d)).collect()
    }

    /// Distances between `q₁(v)` and `q̂₁` in `O(|supp q₁(v)|)`.
    pub fn depth1(&self, v: NodeId) -> Distances {
        let d = self.degree(v);
        sparse_distances(
            self.profile.entries(v).iter().map(|&(c, k)| (c, k as f64 / d)),
            self.profile.null(),
            self.profile.null_sum_sq(),
        )
    }

    fn accumulate_q2(&self, v: NodeId, scratch: &mut Scratch) {
        if scratch.acc.len() != self.p.num_communities() {
            *scratch = self.scratch();
        }
        for &u in self.g.neighbors(v) {
            let du = self.degree(u);
            for &(c, k) in self.profile.entries(u) {
                let slot = &mut scratch.acc[c as usize];
                if *slot == 0.0 {
                    scratch.touched.push(c);
                }
                *slot += k as f64 / du;
            }
        }
    }

    /// `q₂(v) = mean of q₁(u) over neighbours u`, as sparse pairs.
    pub fn q2_vector(&self, v: NodeId, scratch: &mut Scratch) -> Vec<(u32, f64)> {
        self.accumulate_q2(v, scratch);
        let d = self.degree(v);
        let out = scratch
            .touched
            .iter()
            .map(|&c| (c, scratch.acc[c as usize] / d))
            .collect();
        for &c in &scratch.touched {
            scratch.acc[c as usize] = 0.0;
        }
        scratch.touched.clear();
        out
    }

    /// Distances between `q₂(v)` and `q̂₁`.
    pub fn depth2(&self, v: NodeId, scratch: &mut Scratch) -> Distances {
        self.accumulate_q2(v, scratch);
        let d = self.degree(v);
        let acc = &scratch.acc;
        let out = sparse_distances(
            scratch.touched.iter().map(|&c| (c, acc[c as usize] / d)),
            self.profile.null(),
            self.profile.null_sum_sq(),
        );
        for &c in &scratch.touched {
            scratch.acc[c as usize] = 0.0;
        }
        scratch.touched.clear();
        out
    }

    /// Writes all thirteen features of `v` into `out`, in
    /// [`COMMUNITY_FEATURES`] order.
    pub fn fill_row(&self, v: NodeId, scratch: &mut Scratch, out: &mut [f64]) {
        let d1 = self.depth1(v);
        let d2 = self.depth2(v, scratch);
        out[..13].copy_from_slice(&[
            self.cada(v),
            self.cada_norm(v),
            self.wmd(v),
            self.cpc(v),
            self.cas(v),
            d1.l1,
            d1.l2,
            d1.kl,
            d1.hellinger,
            d2.l1,
            d2.l2,
            d2.kl,
            d2.hellinger,
        ]);
    }

    /// Only the depth-one columns (`CADA` through `CD_HD1`).
    pub fn fill_depth1_row(&self, v: NodeId, out: &mut [f64]) {
        let d1 = self.depth1(v);
        out[..9].copy_from_slice(&[
            self.cada(v),
            self.cada_norm(v),
            self.wmd(v),
            self.cpc(v),
            self.cas(v),
            d1.l1,
            d1.l2,
            d1.kl,
            d1.hellinger,
        ]);
    }
}

/// All community-aware features for every node, sharing one profile.
pub fn compute_all(g: &Graph, p: &Partition, lambda: f64) -> Result<FeatureMatrix> {
    let features = CommunityFeatures::new(g, p, lambda)?;
    let mut matrix = FeatureMatrix::zeros(&COMMUNITY_FEATURES, g.num_nodes());
    let mut scratch = features.scratch();
    for (v, row) in matrix.rows_mut().enumerate() {
        features.fill_row(v as NodeId, &mut scratch, row);
    }
    Ok(matrix)
}

/// The depth-one columns only; `O(m + n·ℓ)`.
pub fn compute_depth1(g: &Graph, p: &Partition, lambda: f64) -> Result<FeatureMatrix> {
    let features = CommunityFeatures::new(g, p, lambda)?;
    let mut matrix = FeatureMatrix::zeros(&COMMUNITY_FEATURES[..9], g.num_nodes());
    for (v, row) in matrix.rows_mut().enumerate() {
        features.fill_depth1_row(v as NodeId, row);
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests;
