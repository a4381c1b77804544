//! Classical (community-agnostic) node features used as baselines.
//!
//! | column  | definition |
//! |---------|------------|
//! | `lcc`   | local clustering coefficient |
//! | `bc`    | betweenness, Brandes, scaled by `2/((n−1)(n−2))` |
//! | `cc`    | closeness `(n−1)/Σ_u dist(v,u)` |
//! | `dc`    | degree centrality `deg(v)/(n−1)` |
//! | `ndc`   | mean `dc` of the neighbours |
//! | `ec`    | eigenvector centrality, unit max-norm |
//! | `eccen` | eccentricity `max_u dist(v,u)` |
//! | `core`  | coreness |
//!
//! The shortest-path features (`bc`, `cc`, `eccen`) share one breadth-first
//! search per source. [`PathPlan`] and [`PathAccumulator`] expose that loop
//! so callers can split the sources over threads and merge the partial sums.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{invalid, Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::{Graph, NodeId};
use crate::rng::seeded;

/// Column names in output order.
pub const CLASSICAL_FEATURES: [&str; 8] = ["lcc", "bc", "cc", "dc", "ndc", "ec", "eccen", "core"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classical {
    Lcc,
    Bc,
    Cc,
    Dc,
    Ndc,
    Ec,
    Eccen,
    Core,
}

impl Classical {
    pub const ALL: [Classical; 8] = [
        Classical::Lcc,
        Classical::Bc,
        Classical::Cc,
        Classical::Dc,
        Classical::Ndc,
        Classical::Ec,
        Classical::Eccen,
        Classical::Core,
    ];

    pub fn name(self) -> &'static str {
        CLASSICAL_FEATURES[self as usize]
    }

    pub fn from_name(name: &str) -> Option<Classical> {
        Classical::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Which classical features to compute, and how.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSpec {
    pub enabled: Vec<Classical>,
    /// Stop the eigenvector iteration once no entry moves by more than this.
    pub ec_tolerance: f64,
    pub ec_max_iter: usize,
    /// Evaluate `cc` and `eccen` inside each connected component instead of
    /// rejecting disconnected graphs.
    pub per_component: bool,
    /// Approximate `bc` from this many uniformly chosen sources, seeded.
    pub bc_sample: Option<(usize, u64)>,
}

impl Default for ClassicalSpec {
    fn default() -> Self {
        ClassicalSpec {
            enabled: Classical::ALL.to_vec(),
            ec_tolerance: 1e-10,
            ec_max_iter: 1000,
            per_component: false,
            bc_sample: None,
        }
    }
}

impl ClassicalSpec {
    pub fn only(features: &[Classical]) -> ClassicalSpec {
        ClassicalSpec {
            enabled: features.to_vec(),
            ..ClassicalSpec::default()
        }
    }

    fn has(&self, f: Classical) -> bool {
        self.enabled.contains(&f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled.is_empty() {
            return Err(invalid("enabled", "at least one classical feature is required"));
        }
        if !(self.ec_tolerance > 0.0) || self.ec_max_iter == 0 {
            return Err(invalid("ec", "tolerance and iteration limit must be positive"));
        }
        if let Some((0, _)) = self.bc_sample {
            return Err(invalid("bc_sample", "needs at least one source"));
        }
        Ok(())
    }

    /// Enabled features in output column order.
    pub fn columns(&self) -> Vec<Classical> {
        Classical::ALL.into_iter().filter(|&f| self.has(f)).collect()
    }
}

/// Local clustering coefficient: triangles through `v` over `deg(v)(deg(v)−1)/2`.
pub fn lcc(g: &Graph) -> Vec<f64> {
    let mut triangles = vec![0u64; g.num_nodes()];
    for (u, v) in g.edges() {
        let (a, b) = (g.neighbors(u), g.neighbors(v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    let w = a[i];
                    // Count each triangle once, from its two smallest nodes.
                    if w > v {
                        triangles[u as usize] += 1;
                        triangles[v as usize] += 1;
                        triangles[w as usize] += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    g.nodes()
        .map(|v| {
            let d = g.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                triangles[v as usize] as f64 / (d * (d - 1.0) / 2.0)
            }
        })
        .collect()
}

pub fn degree_centrality(g: &Graph) -> Vec<f64> {
    let scale = (g.num_nodes() as f64 - 1.0).max(1.0);
    g.nodes().map(|v| g.degree(v) as f64 / scale).collect()
}

/// Mean degree centrality of the neighbours.
pub fn neighbor_degree_centrality(g: &Graph) -> Vec<f64> {
    let dc = degree_centrality(g);
    g.nodes()
        .map(|v| {
            let nb = g.neighbors(v);
            nb.iter().map(|&u| dc[u as usize]).sum::<f64>() / nb.len() as f64
        })
        .collect()
}

/// Eigenvector centrality by power iteration on `A + I`, normalized so the
/// largest entry is 1. The shift keeps the iteration convergent on
/// bipartite graphs without changing the eigenvector.
pub fn eigenvector_centrality(g: &Graph, tolerance: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = g.num_nodes();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        for v in g.nodes() {
            next[v as usize] = x[v as usize] + g.neighbors(v).iter().map(|&u| x[u as usize]).sum::<f64>();
        }
        let top = next.iter().copied().fold(0.0, f64::max);
        let mut change: f64 = 0.0;
        for (a, b) in x.iter_mut().zip(&next) {
            let y = b / top;
            change = change.max((y - *a).abs());
            *a = y;
        }
        if change <= tolerance {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "eigenvector centrality",
        iterations: max_iter,
    })
}

/// Coreness by bucket peeling, `O(m)`.
pub fn coreness(g: &Graph) -> Vec<f64> {
    let n = g.num_nodes();
    let mut deg: Vec<usize> = g.nodes().map(|v| g.degree(v)).collect();
    let max = g.max_degree();
    let mut bin = vec![0usize; max + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 0..=max {
        bin[d + 1] += bin[d];
    }
    // `order` is sorted by current degree; `bin[d]` is where degree d starts.
    let mut pos = vec![0usize; n];
    let mut order = vec![0 as NodeId; n];
    let mut next = bin.clone();
    for v in 0..n {
        pos[v] = next[deg[v]];
        order[pos[v]] = v as NodeId;
        next[deg[v]] += 1;
    }
    for i in 0..n {
        let v = order[i] as usize;
        for &u in g.neighbors(v as NodeId) {
            let u = u as usize;
            if deg[u] > deg[v] {
                let du = deg[u];
                let first = bin[du];
                let w = order[first] as usize;
                if w != u {
                    order.swap(pos[u], first);
                    pos[w] = pos[u];
                    pos[u] = first;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as f64).collect()
}

/// Per-source partial results of the shortest-path features.
///
/// `bc` holds raw dependencies summed over the processed sources, each
/// unordered pair counted from both ends. `dist_sum`, `reached` and `eccen`
/// are filled only at the processed sources, so partial accumulators over
/// disjoint source sets merge by addition.
#[derive(Debug, Clone)]
pub struct PathAccumulator {
    pub bc: Vec<f64>,
    pub dist_sum: Vec<u64>,
    pub reached: Vec<u32>,
    pub eccen: Vec<u32>,
    dist: Vec<u32>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<NodeId>,
}

impl PathAccumulator {
    pub fn new(n: usize) -> PathAccumulator {
        PathAccumulator {
            bc: vec![0.0; n],
            dist_sum: vec![0; n],
            reached: vec![0; n],
            eccen: vec![0; n],
            dist: vec![u32::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
        }
    }

    /// One breadth-first search from `s`, with the Brandes back-propagation
    /// when `with_bc` is set.
    pub fn add_source(&mut self, g: &Graph, s: NodeId, with_bc: bool) {
        self.order.clear();
        self.dist[s as usize] = 0;
        self.sigma[s as usize] = 1.0;
        self.order.push(s);
        let mut head = 0;
        let mut sum = 0u64;
        let mut far = 0u32;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let dv = self.dist[v as usize];
            sum += dv as u64;
            far = dv;
            for &u in g.neighbors(v) {
                let du = &mut self.dist[u as usize];
                if *du == u32::MAX {
                    *du = dv + 1;
                    self.order.push(u);
                }
                if *du == dv + 1 {
                    self.sigma[u as usize] += self.sigma[v as usize];
                }
            }
        }
        self.dist_sum[s as usize] += sum;
        self.reached[s as usize] += self.order.len() as u32;
        self.eccen[s as usize] = self.eccen[s as usize].max(far);
        if with_bc {
            for &w in self.order.iter().rev() {
                let dw = self.dist[w as usize];
                let coeff = (1.0 + self.delta[w as usize]) / self.sigma[w as usize];
                for &v in g.neighbors(w) {
                    if self.dist[v as usize].wrapping_add(1) == dw {
                        self.delta[v as usize] += self.sigma[v as usize] * coeff;
                    }
                }
                if w != s {
                    self.bc[w as usize] += self.delta[w as usize];
                }
            }
        }
        for &v in &self.order {
            self.dist[v as usize] = u32::MAX;
            self.sigma[v as usize] = 0.0;
            self.delta[v as usize] = 0.0;
        }
    }

    /// Combines accumulators built over disjoint source sets.
    pub fn merge(mut self, other: &PathAccumulator) -> PathAccumulator {
        for (a, b) in self.bc.iter_mut().zip(&other.bc) {
            *a += b;
        }
        for (a, b) in self.dist_sum.iter_mut().zip(&other.dist_sum) {
            *a += b;
        }
        for (a, b) in self.reached.iter_mut().zip(&other.reached) {
            *a += b;
        }
        for (a, b) in self.eccen.iter_mut().zip(&other.eccen) {
            *a = (*a).max(*b);
        }
        self
    }
}

/// Which sources the shortest-path pass must visit.
#[derive(Debug, Clone)]
pub struct PathPlan {
    sources: Vec<NodeId>,
    /// `Some` under sampling: only these sources feed `bc`.
    pivots: Option<Vec<bool>>,
    bc_scale: f64,
    need_bc: bool,
}

impl PathPlan {
    /// Checks connectivity requirements and picks the sources.
    pub fn new(g: &Graph, spec: &ClassicalSpec) -> Result<PathPlan> {
        spec.validate()?;
        let n = g.num_nodes();
        let need_bc = spec.has(Classical::Bc);
        let need_dist = spec.has(Classical::Cc) || spec.has(Classical::Eccen);
        if need_dist && !spec.per_component {
            let (_, components) = g.connected_components();
            if components > 1 {
                let feature = if spec.has(Classical::Cc) { "cc" } else { "eccen" };
                return Err(Error::Disconnected { feature, components });
            }
        }
        let all: Vec<NodeId> = g.nodes().collect();
        let (sources, pivots, bc_scale) = match spec.bc_sample {
            Some((k, seed)) if need_bc && k < n => {
                let mut chosen = all.clone();
                chosen.shuffle(&mut seeded(seed));
                chosen.truncate(k);
                chosen.sort_unstable();
                let mut mask = vec![false; n];
                for &s in &chosen {
                    mask[s as usize] = true;
                }
                let sources = if need_dist { all } else { chosen };
                (sources, Some(mask), n as f64 / k as f64)
            }
            _ if need_bc || need_dist => (all, None, 1.0),
            _ => (Vec::new(), None, 1.0),
        };
        Ok(PathPlan {
            sources,
            pivots,
            bc_scale,
            need_bc,
        })
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    /// Processes `sources`, a subset of [`PathPlan::sources`].
    pub fn run(&self, g: &Graph, sources: &[NodeId], acc: &mut PathAccumulator) {
        for &s in sources {
            let with_bc = self.need_bc && self.pivots.as_ref().map_or(true, |m| m[s as usize]);
            acc.add_source(g, s, with_bc);
        }
    }
}

/// Assembles the enabled columns, given the shortest-path pass over every
/// source of `plan`.
pub fn assemble(g: &Graph, spec: &ClassicalSpec, plan: &PathPlan, paths: &PathAccumulator) -> Result<FeatureMatrix> {
    let n = g.num_nodes();
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    for f in spec.columns() {
        let values = match f {
            Classical::Lcc => lcc(g),
            Classical::Bc => {
                let pairs = (n as f64 - 1.0) * (n as f64 - 2.0);
                paths
                    .bc
                    .iter()
                    .map(|&b| if pairs > 0.0 { b * plan.bc_scale / pairs } else { 0.0 })
                    .collect()
            }
            Classical::Cc => (0..n)
                .map(|v| {
                    let total = paths.dist_sum[v];
                    if total == 0 {
                        0.0
                    } else {
                        (paths.reached[v] as f64 - 1.0) / total as f64
                    }
                })
                .collect(),
            Classical::Dc => degree_centrality(g),
            Classical::Ndc => neighbor_degree_centrality(g),
            Classical::Ec => eigenvector_centrality(g, spec.ec_tolerance, spec.ec_max_iter)?,
            Classical::Eccen => paths.eccen.iter().map(|&e| e as f64).collect(),
            Classical::Core => coreness(g),
        };
        columns.push((String::from(f.name()), values));
    }
    FeatureMatrix::from_columns(columns)
}

/// All enabled classical features, single-threaded.
pub fn compute(g: &Graph, spec: &ClassicalSpec) -> Result<FeatureMatrix> {
    let plan = PathPlan::new(g, spec)?;
    let mut acc = PathAccumulator::new(g.num_nodes());
    plan.run(g, plan.sources(), &mut acc);
    assemble(g, spec, &plan, &acc)
}
