//! Immutable simple undirected graphs in compressed adjacency form.
//!
//! Nodes are dense `0..n` indices. Every node has at least one neighbour,
//! neighbour lists are sorted and free of duplicates, and there are no
//! self-loops. These invariants are established once by [`Graph::build`] and
//! every other module relies on them.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense node index.
pub type NodeId = u32;

/// What was removed while building a graph from raw edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CleanReport {
    pub self_loops: usize,
    pub duplicate_edges: usize,
    pub isolated_nodes: usize,
}

/// Simple undirected graph with sorted CSR adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph on nodes `0..n`, silently dropping loops, duplicate
    /// edges and isolated nodes. See [`Graph::build`] for the report.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        Self::build(n, edges, None).map(|(g, _)| g)
    }

    /// Builds a graph from raw endpoint pairs.
    ///
    /// Node `i` keeps `labels[i]` as its external identifier when labels are
    /// given. If isolated nodes are dropped and no labels were given, the
    /// surviving nodes are labelled with their original index so that output
    /// files still refer to the caller's numbering.
    pub fn build(
        n: usize,
        edges: &[(NodeId, NodeId)],
        labels: Option<Vec<String>>,
    ) -> Result<(Graph, CleanReport)> {
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidParameter {
                    name: "labels",
                    reason: format!("expected {n} labels, got {}", l.len()),
                });
            }
        }
        if n > NodeId::MAX as usize {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("at most {} nodes are supported", NodeId::MAX),
            });
        }
        let mut report = CleanReport::default();
        let mut keys: Vec<u64> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::NodeOutOfRange { node: w as usize, n });
                }
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            keys.push(edge_key(u, v));
        }
        keys.sort_unstable();
        let before = keys.len();
        keys.dedup();
        report.duplicate_edges = before - keys.len();

        let mut degree = vec![0usize; n];
        for &k in &keys {
            let (u, v) = split_key(k);
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        // Old index -> new dense index; `NodeId::MAX` marks a dropped node.
        let mut remap = vec![NodeId::MAX; n];
        let mut kept = 0u32;
        for (old, &d) in degree.iter().enumerate() {
            if d > 0 {
                remap[old] = kept;
                kept += 1;
            }
        }
        let kept = kept as usize;
        report.isolated_nodes = n - kept;
        if kept == 0 {
            return Err(Error::EmptyGraph);
        }

        let labels = match labels {
            Some(l) if report.isolated_nodes > 0 => Some(
                l.into_iter()
                    .zip(degree.iter())
                    .filter(|(_, &d)| d > 0)
                    .map(|(s, _)| s)
                    .collect(),
            ),
            Some(l) => Some(l),
            None if report.isolated_nodes > 0 => Some(
                (0..n)
                    .filter(|&i| degree[i] > 0)
                    .map(|i| i.to_string())
                    .collect(),
            ),
            None => None,
        };

        let mut offsets = vec![0usize; kept + 1];
        for (old, &d) in degree.iter().enumerate() {
            if d > 0 {
                offsets[remap[old] as usize + 1] = d;
            }
        }
        for i in 0..kept {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0 as NodeId; offsets[kept]];
        for &k in &keys {
            let (u, v) = split_key(k);
            let (u, v) = (remap[u as usize], remap[v as usize]);
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }
        for &k in &keys {
            let (u, v) = split_key(k);
            let (u, v) = (remap[u as usize], remap[v as usize]);
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..kept {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok((
            Graph {
                offsets,
                targets,
                labels,
            },
            report,
        ))
    }

    /// Attaches external identifiers, one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.num_nodes() {
            return Err(Error::InvalidParameter {
                name: "labels",
                reason: format!("expected {} labels, got {}", self.num_nodes(), labels.len()),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn nodes(&self) -> core::ops::Range<NodeId> {
        0..self.num_nodes() as NodeId
    }

    /// `vol(V) = 2m`.
    #[inline]
    pub fn total_volume(&self) -> u64 {
        self.targets.len() as u64
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// External identifiers, if the graph carries any.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External identifier of `v`; the dense index when no labels are set.
    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        }
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.num_nodes() {
            Err(Error::NodeOutOfRange {
                node: v,
                n: self.num_nodes(),
            })
        } else {
            Ok(())
        }
    }

    /// Sum of degrees over a node subset. Repeated ids count once.
    pub fn volume(&self, nodes: &[NodeId]) -> Result<u64> {
        let mut seen = vec![false; self.num_nodes()];
        let mut vol = 0u64;
        for &v in nodes {
            self.check_node(v as usize)?;
            if !core::mem::replace(&mut seen[v as usize], true) {
                vol += self.degree(v) as u64;
            }
        }
        Ok(vol)
    }

    /// Number of edges with both endpoints in the subset.
    pub fn induced_edge_count(&self, nodes: &[NodeId]) -> Result<u64> {
        let mut member = vec![false; self.num_nodes()];
        for &v in nodes {
            self.check_node(v as usize)?;
            member[v as usize] = true;
        }
        let mut count = 0u64;
        for v in self.nodes().filter(|&v| member[v as usize]) {
            count += self
                .neighbors(v)
                .iter()
                .filter(|&&u| u > v && member[u as usize])
                .count() as u64;
        }
        Ok(count)
    }

    /// Connected component index per node, numbered in order of the smallest
    /// node they contain, plus the component count.
    pub fn connected_components(&self) -> (Vec<u32>, usize) {
        let n = self.num_nodes();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in self.nodes() {
            if comp[s as usize] != u32::MAX {
                continue;
            }
            comp[s as usize] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &u in self.neighbors(v) {
                    if comp[u as usize] == u32::MAX {
                        comp[u as usize] = count;
                        queue.push_back(u);
                    }
                }
            }
            count += 1;
        }
        (comp, count as usize)
    }

    /// Nodes of the largest connected component, in increasing order. Ties go
    /// to the component with the smallest node.
    pub fn giant_component_nodes(&self) -> Vec<NodeId> {
        let (comp, count) = self.connected_components();
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c as usize] += 1;
        }
        let best = (0..count).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b }) as u32;
        self.nodes().filter(|&v| comp[v as usize] == best).collect()
    }

    /// The largest connected component as a graph of its own, keeping
    /// external labels.
    pub fn giant_component(&self) -> Graph {
        let keep = self.giant_component_nodes();
        if keep.len() == self.num_nodes() {
            return self.clone();
        }
        self.induced_subgraph(&keep)
    }

    /// Subgraph induced by `keep` (given in increasing order), relabelled
    /// densely in that order. Nodes left without neighbours are dropped.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Graph {
        let mut remap = vec![NodeId::MAX; self.num_nodes()];
        for (i, &v) in keep.iter().enumerate() {
            remap[v as usize] = i as NodeId;
        }
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .filter_map(|(u, v)| {
                let (a, b) = (remap[u as usize], remap[v as usize]);
                (a != NodeId::MAX && b != NodeId::MAX).then_some((a, b))
            })
            .collect();
        let labels = keep.iter().map(|&v| self.label(v)).collect();
        Graph::build(keep.len(), &edges, Some(labels))
            .map(|(g, _)| g)
            .expect("induced subgraph of a connected component is nonempty")
    }

    /// Returns the graph with node `v` renamed to `perm[v]`. Labels follow
    /// their nodes.
    pub fn permuted(&self, perm: &[NodeId]) -> Result<Graph> {
        let n = self.num_nodes();
        if perm.len() != n {
            return Err(Error::InvalidParameter {
                name: "perm",
                reason: format!("expected length {n}, got {}", perm.len()),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p as usize >= n || core::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::InvalidParameter {
                    name: "perm",
                    reason: "not a permutation".into(),
                });
            }
        }
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .map(|(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        let mut labels = vec![String::new(); n];
        for v in self.nodes() {
            labels[perm[v as usize] as usize] = self.label(v);
        }
        Graph::build(n, &edges, Some(labels)).map(|(g, _)| g)
    }

    /// Raw CSR arrays: `offsets` of length `n + 1` and concatenated sorted
    /// neighbour lists.
    pub fn csr(&self) -> (&[usize], &[NodeId]) {
        (&self.offsets, &self.targets)
    }
}

#[inline]
pub(crate) fn edge_key(u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

#[inline]
pub(crate) fn split_key(k: u64) -> (NodeId, NodeId) {
    ((k >> 32) as NodeId, k as NodeId)
}
