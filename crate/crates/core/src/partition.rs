//! Node-to-community assignments with cached per-community statistics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// A partition of the node set into nonempty communities `0..ℓ`.
///
/// Community volumes, sizes and internal edge counts are cached and kept
/// coherent by [`Partition::move_node`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    volume: Vec<u64>,
    internal_edges: Vec<u64>,
    size: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary community labels, one per node.
    /// Labels are renumbered densely in order of first appearance.
    pub fn from_assignment(g: &Graph, labels: &[u32]) -> Result<Partition> {
        let opt: Vec<Option<u32>> = labels.iter().map(|&c| Some(c)).collect();
        Self::from_optional(g, &opt)
    }

    /// Like [`Partition::from_assignment`], but `None` puts the node into a
    /// community of its own (how planted outliers are represented).
    pub fn from_optional(g: &Graph, labels: &[Option<u32>]) -> Result<Partition> {
        let n = g.num_nodes();
        if labels.len() != n {
            return Err(Error::PartitionMismatch(format!(
                "{} assignments for {n} nodes",
                labels.len()
            )));
        }
        let max_label = labels.iter().flatten().copied().max().map_or(0, |m| m as usize + 1);
        let mut dense = vec![u32::MAX; max_label];
        let mut next = 0u32;
        let mut assignment = Vec::with_capacity(n);
        for label in labels {
            let c = match label {
                Some(l) => {
                    let slot = &mut dense[*l as usize];
                    if *slot == u32::MAX {
                        *slot = next;
                        next += 1;
                    }
                    *slot
                }
                None => {
                    next += 1;
                    next - 1
                }
            };
            assignment.push(c);
        }
        Ok(Self::with_dense_assignment(g, assignment, next as usize))
    }

    /// Every node in its own community.
    pub fn singletons(g: &Graph) -> Partition {
        Self::with_dense_assignment(g, (0..g.num_nodes() as u32).collect(), g.num_nodes())
    }

    /// The single community `{V}`.
    pub fn whole(g: &Graph) -> Partition {
        Self::with_dense_assignment(g, vec![0; g.num_nodes()], 1)
    }

    /// `assignment` must already use every index in `0..count`.
    pub(crate) fn with_dense_assignment(g: &Graph, assignment: Vec<u32>, count: usize) -> Partition {
        let mut p = Partition {
            assignment,
            volume: vec![0; count],
            internal_edges: vec![0; count],
            size: vec![0; count],
        };
        p.refresh(g);
        p
    }

    fn refresh(&mut self, g: &Graph) {
        self.volume.iter_mut().for_each(|x| *x = 0);
        self.internal_edges.iter_mut().for_each(|x| *x = 0);
        self.size.iter_mut().for_each(|x| *x = 0);
        for v in g.nodes() {
            let c = self.assignment[v as usize] as usize;
            self.size[c] += 1;
            self.volume[c] += g.degree(v) as u64;
            for &u in g.neighbors(v) {
                if u > v && self.assignment[u as usize] as usize == c {
                    self.internal_edges[c] += 1;
                }
            }
        }
    }

    /// Fresh copy with every cache recomputed from the assignment alone.
    pub fn recomputed(&self, g: &Graph) -> Partition {
        Self::with_dense_assignment(g, self.assignment.clone(), self.num_communities())
    }

    /// Checks that the partition was built for a graph of this size.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.assignment.len() != g.num_nodes() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} nodes, graph has {}",
                self.assignment.len(),
                g.num_nodes()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.assignment.len()
    }

    #[inline]
    pub fn num_communities(&self) -> usize {
        self.volume.len()
    }

    #[inline]
    pub fn community_of(&self, v: NodeId) -> u32 {
        self.assignment[v as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    #[inline]
    pub fn volume(&self, c: u32) -> u64 {
        self.volume[c as usize]
    }

    #[inline]
    pub fn internal_edges(&self, c: u32) -> u64 {
        self.internal_edges[c as usize]
    }

    #[inline]
    pub fn size(&self, c: u32) -> usize {
        self.size[c as usize]
    }

    pub fn volumes(&self) -> &[u64] {
        &self.volume
    }

    pub fn sizes(&self) -> &[usize] {
        &self.size
    }

    /// Member lists, each in increasing node order.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut out: Vec<Vec<NodeId>> = self.size.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(v as NodeId);
        }
        out
    }

    /// Nodes in single-node communities.
    pub fn outliers(&self) -> Vec<NodeId> {
        (0..self.num_nodes() as NodeId)
            .filter(|&v| self.size[self.assignment[v as usize] as usize] == 1)
            .collect()
    }

    /// `deg_{A_c}(v)`: neighbours of `v` inside community `c`.
    pub fn degree_into(&self, g: &Graph, v: NodeId, c: u32) -> usize {
        g.neighbors(v)
            .iter()
            .filter(|&&u| self.assignment[u as usize] == c)
            .count()
    }

    /// Neighbours of `v` inside its own community.
    pub fn internal_degree(&self, g: &Graph, v: NodeId) -> usize {
        self.degree_into(g, v, self.community_of(v))
    }

    /// Moves `v` into community `target`, or into a new community of its own
    /// when `target` is `None`. Caches are updated in `O(deg(v))`; if the
    /// source community empties, the highest-numbered community takes over
    /// its index.
    pub fn move_node(&mut self, g: &Graph, v: NodeId, target: Option<u32>) -> Result<()> {
        self.check_graph(g)?;
        if v as usize >= self.num_nodes() {
            return Err(Error::NodeOutOfRange {
                node: v as usize,
                n: self.num_nodes(),
            });
        }
        let from = self.community_of(v);
        let to = match target {
            Some(t) if t as usize >= self.num_communities() => {
                return Err(Error::PartitionMismatch(format!("no community {t}")));
            }
            Some(t) => t,
            None if self.size(from) == 1 => return Ok(()),
            None => {
                self.volume.push(0);
                self.internal_edges.push(0);
                self.size.push(0);
                (self.num_communities() - 1) as u32
            }
        };
        if to == from {
            return Ok(());
        }
        let d = g.degree(v) as u64;
        let into_from = self.degree_into(g, v, from) as u64;
        let into_to = self.degree_into(g, v, to) as u64;
        let (f, t) = (from as usize, to as usize);
        self.volume[f] -= d;
        self.internal_edges[f] -= into_from;
        self.size[f] -= 1;
        self.volume[t] += d;
        self.internal_edges[t] += into_to;
        self.size[t] += 1;
        self.assignment[v as usize] = to;
        if self.size[f] == 0 {
            let last = self.num_communities() - 1;
            if f != last {
                for c in self.assignment.iter_mut() {
                    if *c as usize == last {
                        *c = from;
                    }
                }
                self.volume.swap(f, last);
                self.internal_edges.swap(f, last);
                self.size.swap(f, last);
            }
            self.volume.pop();
            self.internal_edges.pop();
            self.size.pop();
        }
        Ok(())
    }

    /// Splits every community into its connected components (in the
    /// subgraph it induces). Returns the number of extra communities made.
    pub fn split_disconnected(&mut self, g: &Graph) -> usize {
        let n = self.num_nodes();
        let mut fresh = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut stack = Vec::new();
        for s in g.nodes() {
            if fresh[s as usize] != u32::MAX {
                continue;
            }
            let c = self.assignment[s as usize];
            fresh[s as usize] = next;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in g.neighbors(v) {
                    if fresh[u as usize] == u32::MAX && self.assignment[u as usize] == c {
                        fresh[u as usize] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        let extra = next as usize - self.num_communities();
        if extra > 0 {
            *self = Self::with_dense_assignment(g, fresh, next as usize);
        }
        extra
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{gnp, two_triangles};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn caches_on_construction() {
        let g = two_triangles();
        let p = Partition::from_assignment(&g, &[5, 5, 5, 9, 9, 9]).unwrap();
        assert_eq!(p.num_communities(), 2);
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(p.volumes(), &[7, 7]);
        assert_eq!((p.internal_edges(0), p.internal_edges(1)), (3, 3));
        assert_eq!(p.sizes(), &[3, 3]);
    }

    #[test]
    fn wrong_length_rejected() {
        let g = two_triangles();
        assert!(matches!(
            Partition::from_assignment(&g, &[0, 1]),
            Err(Error::PartitionMismatch(_))
        ));
    }

    #[test]
    fn optional_labels_make_singletons() {
        let g = two_triangles();
        let p = Partition::from_optional(&g, &[Some(0), Some(0), None, Some(1), Some(1), None]).unwrap();
        assert_eq!(p.num_communities(), 4);
        assert_eq!(p.outliers(), vec![2, 5]);
    }

    #[test]
    fn emptied_community_is_compacted() {
        let g = two_triangles();
        let mut p = Partition::from_assignment(&g, &[0, 0, 1, 2, 2, 2]).unwrap();
        p.move_node(&g, 2, Some(0)).unwrap();
        assert_eq!(p.num_communities(), 2);
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(p, p.recomputed(&g));
    }

    #[test]
    fn split_disconnected_communities() {
        let g = two_triangles();
        let mut p = Partition::from_assignment(&g, &[0, 0, 1, 1, 0, 0]).unwrap();
        assert_eq!(p.split_disconnected(&g), 1);
        assert_eq!(p.num_communities(), 3);
        assert_eq!(p, p.recomputed(&g));
    }

    proptest! {
        #[test]
        fn caches_stay_coherent_under_moves(seed in 0u64..500, moves in 1usize..60) {
            let g = gnp(25, 0.2, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let labels: Vec<u32> = (0..g.num_nodes()).map(|_| rng.gen_range(0..5)).collect();
            let mut p = Partition::from_assignment(&g, &labels).unwrap();
            for _ in 0..moves {
                let v = rng.gen_range(0..g.num_nodes()) as NodeId;
                let target = if rng.gen_bool(0.2) {
                    None
                } else {
                    Some(rng.gen_range(0..p.num_communities()) as u32)
                };
                p.move_node(&g, v, target).unwrap();
            }
            let fresh = p.recomputed(&g);
            prop_assert_eq!(&p, &fresh);
            prop_assert!(p.sizes().iter().all(|&s| s > 0));
            prop_assert_eq!(p.volumes().iter().sum::<u64>(), g.total_volume());
            prop_assert_eq!(p.sizes().iter().sum::<usize>(), g.num_nodes());
            for (c, members) in p.members().iter().enumerate() {
                prop_assert_eq!(g.induced_edge_count(members).unwrap(), p.internal_edges(c as u32));
            }
        }
    }
}
