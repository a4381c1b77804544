use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;

/// Per-node neighbour counts by community, plus the volume-share vector of
/// the degree-preserving null model.
///
/// For node `v` the entries are the pairs `(i, deg_{A_i}(v))` with a nonzero
/// count, so `entries(v)` is the sparse support of `q₁(v)` scaled by
/// `deg(v)`. `null()[i] = vol(A_i)/vol(V)` is `q̂₁`.
#[derive(Debug, Clone)]
pub struct CommunityProfile {
    offsets: Vec<usize>,
    entries: Vec<(u32, u32)>,
    null: Vec<f64>,
    null_sum_sq: f64,
}

impl CommunityProfile {
    /// One pass over the edges, `O(m + n + ℓ)`.
    pub fn build(g: &Graph, p: &Partition) -> Result<CommunityProfile> {
        p.check_graph(g)?;
        let l = p.num_communities();
        let mut count = vec![0u32; l];
        let mut touched: Vec<u32> = Vec::new();
        let mut offsets = Vec::with_capacity(g.num_nodes() + 1);
        let mut entries = Vec::with_capacity(g.num_nodes());
        offsets.push(0);
        for v in g.nodes() {
            for &u in g.neighbors(v) {
                let c = p.community_of(u);
                if count[c as usize] == 0 {
                    touched.push(c);
                }
                count[c as usize] += 1;
            }
            for &c in &touched {
                entries.push((c, count[c as usize]));
                count[c as usize] = 0;
            }
            touched.clear();
            offsets.push(entries.len());
        }
        let vol = g.total_volume() as f64;
        let null: Vec<f64> = p.volumes().iter().map(|&x| x as f64 / vol).collect();
        let null_sum_sq = null.iter().map(|w| w * w).sum();
        Ok(CommunityProfile {
            offsets,
            entries,
            null,
            null_sum_sq,
        })
    }

    #[inline]
    pub fn entries(&self, v: NodeId) -> &[(u32, u32)] {
        let v = v as usize;
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    /// `deg_{A_c}(v)`.
    pub fn count_in(&self, v: NodeId, c: u32) -> u32 {
        self.entries(v)
            .iter()
            .find(|&&(i, _)| i == c)
            .map_or(0, |&(_, k)| k)
    }

    /// Largest neighbour count over all communities.
    pub fn max_count(&self, v: NodeId) -> u32 {
        self.entries(v).iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// `q̂₁`.
    pub fn null(&self) -> &[f64] {
        &self.null
    }

    /// `Σ_i q̂₁[i]²`.
    pub fn null_sum_sq(&self) -> f64 {
        self.null_sum_sq
    }

    pub fn num_communities(&self) -> usize {
        self.null.len()
    }
}
