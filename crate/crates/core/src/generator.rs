//! Seeded planted-partition benchmark graphs with outliers.
//!
//! Community sizes and degrees follow truncated discrete power laws. Each
//! community member sends `round((1 − ξ)·deg)` stubs into its own community
//! and the rest into a global pool; outliers send every stub into the global
//! pool. Stubs are paired uniformly at random inside each pool, the pairing is
//! simplified by degree-preserving rewiring, and whatever cannot be repaired
//! is dropped and reported in [`GenStats`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{edge_key, Graph, NodeId};
use crate::partition::Partition;
use crate::rng::{seeded, StdRng};

/// Rewiring attempts per loop or duplicate edge before it is dropped.
const REWIRE_ATTEMPTS: usize = 64;

/// Benchmark parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    /// Total node count, outliers included.
    pub n: usize,
    /// Number of outliers.
    pub s0: usize,
    /// Degree power-law exponent.
    pub gamma: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    /// Community-size power-law exponent.
    pub beta_sizes: f64,
    pub min_size: usize,
    pub max_size: usize,
    /// Share of each member's stubs sent outside its community.
    pub xi: f64,
    pub seed: u64,
}

impl GenSpec {
    /// 10 000 nodes with 1 000 outliers, degrees in `[5, 500]` with exponent
    /// 2.5, community sizes in `[50, 2000]` with exponent 1.5.
    pub fn outlier_benchmark(xi: f64, seed: u64) -> GenSpec {
        GenSpec {
            n: 10_000,
            s0: 1_000,
            gamma: 2.5,
            min_degree: 5,
            max_degree: 500,
            beta_sizes: 1.5,
            min_size: 50,
            max_size: 2_000,
            xi,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > NodeId::MAX as usize {
            return Err(invalid("n", format!("must lie in 1..={}", NodeId::MAX)));
        }
        if self.s0 >= self.n {
            return Err(invalid("s0", "must be smaller than n"));
        }
        if self.min_degree == 0 || self.min_degree > self.max_degree || self.max_degree >= self.n {
            return Err(invalid("degree bounds", "need 1 <= min_degree <= max_degree < n"));
        }
        if self.min_size == 0 || self.min_size > self.max_size || self.max_size > self.n - self.s0 {
            return Err(invalid("size bounds", "need 1 <= min_size <= max_size <= n - s0"));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(invalid("xi", "must lie in [0, 1]"));
        }
        if !self.gamma.is_finite() || !self.beta_sizes.is_finite() {
            return Err(invalid("exponents", "must be finite"));
        }
        Ok(())
    }
}

/// Bookkeeping of a generation run: targets, repairs and losses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenStats {
    /// Planted community sizes, before isolated nodes are removed.
    pub community_sizes: Vec<usize>,
    /// Nodes moved between communities because the last sampled size would
    /// have fallen below the minimum: either the short community is spread
    /// over the others or it is topped up from them.
    pub redistributed_nodes: usize,
    pub degree_sum: u64,
    pub internal_stubs: u64,
    pub external_stubs: u64,
    /// Internal stubs moved to the global pool because a community is too
    /// small to absorb them.
    pub capped_stubs: u64,
    /// Communities whose odd internal stub total was fixed by dropping one
    /// internal stub.
    pub parity_fixes: usize,
    /// Stubs removed to make stub pools even: one per parity fix plus at
    /// most one from the global pool.
    pub dropped_stubs: u64,
    pub rewired_edges: usize,
    pub dropped_internal_edges: usize,
    pub dropped_external_edges: usize,
    pub isolated_nodes: usize,
    pub isolated_outliers: usize,
}

#[derive(Debug, Clone)]
pub struct GenOutput {
    pub graph: Graph,
    /// Planted community per node, `None` for outliers.
    pub planted: Vec<Option<u32>>,
    /// 1 for outliers, 0 otherwise.
    pub labels: Vec<u8>,
    pub stats: GenStats,
}

impl GenOutput {
    /// Planted communities as a partition, each outlier on its own.
    pub fn partition(&self) -> Result<Partition> {
        Partition::from_optional(&self.graph, &self.planted)
    }
}

/// Discrete power law `P(k) ∝ k^(−exponent)` on `[low, high]`.
struct PowerLaw {
    low: usize,
    cumulative: Vec<f64>,
}

impl PowerLaw {
    fn new(exponent: f64, low: usize, high: usize) -> PowerLaw {
        let mut total = 0.0;
        let cumulative = (low..=high)
            .map(|k| {
                total += libm::pow(k as f64, -exponent);
                total
            })
            .collect();
        PowerLaw { low, cumulative }
    }

    fn sample(&self, rng: &mut StdRng) -> usize {
        let x = rng.gen::<f64>() * self.cumulative[self.cumulative.len() - 1];
        let i = self.cumulative.partition_point(|&c| c <= x);
        self.low + i.min(self.cumulative.len() - 1)
    }
}

/// Adds (`grow`) or removes one member at a time, round-robin, from the
/// communities still below (or above) `limit`, until `count` are moved.
fn spread(sizes: &mut [usize], mut count: usize, grow: bool, limit: usize) {
    while count > 0 {
        for s in sizes.iter_mut() {
            if count == 0 {
                break;
            }
            if grow && *s < limit {
                *s += 1;
                count -= 1;
            } else if !grow && *s > limit {
                *s -= 1;
                count -= 1;
            }
        }
    }
}

fn community_sizes(spec: &GenSpec, rng: &mut StdRng, stats: &mut GenStats) -> Result<Vec<usize>> {
    let law = PowerLaw::new(spec.beta_sizes, spec.min_size, spec.max_size);
    let target = spec.n - spec.s0;
    let mut sizes = Vec::new();
    let mut covered = 0;
    while covered < target {
        let s = law.sample(rng).min(target - covered);
        sizes.push(s);
        covered += s;
    }
    let last = sizes.len() - 1;
    let short = sizes[last];
    if short < spec.min_size {
        let head = &sizes[..last];
        let room: usize = head.iter().map(|&s| spec.max_size - s).sum();
        let slack: usize = head.iter().map(|&s| s - spec.min_size).sum();
        if room >= short {
            // Spread the short community's members over the others.
            sizes.pop();
            spread(&mut sizes, short, true, spec.max_size);
            stats.redistributed_nodes = short;
        } else if slack >= spec.min_size - short {
            // Grow it to the minimum with members taken from the others.
            let need = spec.min_size - short;
            spread(&mut sizes[..last], need, false, spec.min_size);
            sizes[last] = spec.min_size;
            stats.redistributed_nodes = need;
        } else {
            return Err(Error::Infeasible(format!(
                "{} community members cannot be split into sizes within [{}, {}]",
                target, spec.min_size, spec.max_size
            )));
        }
    }
    Ok(sizes)
}

/// Pairs consecutive stubs, then repairs loops and duplicates by swapping
/// endpoints with random accepted pairs. Returns the accepted pairs and the
/// number of rewired and dropped ones.
fn match_pool(stubs: &mut [NodeId], edges: &mut BTreeSet<u64>, rng: &mut StdRng) -> (Vec<(NodeId, NodeId)>, usize, usize) {
    stubs.shuffle(rng);
    let mut pairs: Vec<(NodeId, NodeId)> = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    let mut ok = vec![true; pairs.len()];
    let mut pending = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        if a == b || !edges.insert(edge_key(a, b)) {
            ok[i] = false;
            pending.push(i);
        }
    }
    let mut rewired = 0;
    for &i in &pending {
        let (a, b) = pairs[i];
        for _ in 0..REWIRE_ATTEMPTS {
            let j = rng.gen_range(0..pairs.len());
            if !ok[j] {
                continue;
            }
            let (c, d) = if rng.gen::<bool>() { pairs[j] } else { (pairs[j].1, pairs[j].0) };
            if a == c || b == d {
                continue;
            }
            let (e1, e2) = (edge_key(a, c), edge_key(b, d));
            if e1 == e2 || edges.contains(&e1) || edges.contains(&e2) {
                continue;
            }
            edges.remove(&edge_key(c, d));
            edges.insert(e1);
            edges.insert(e2);
            pairs[i] = (a, c);
            pairs[j] = (b, d);
            ok[i] = true;
            rewired += 1;
            break;
        }
    }
    let dropped = ok.iter().filter(|&&x| !x).count();
    let accepted = pairs.into_iter().zip(ok).filter(|&(_, k)| k).map(|(e, _)| e).collect();
    (accepted, rewired, dropped)
}

/// Generates a benchmark graph. Deterministic in `spec`.
///
/// Fails with [`Error::Infeasible`] when the size bounds cannot tile the
/// `n − s0` community members.
pub fn generate(spec: &GenSpec) -> Result<GenOutput> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let mut stats = GenStats::default();
    let sizes = community_sizes(spec, &mut rng, &mut stats)?;

    let mut planted: Vec<Option<u32>> = Vec::with_capacity(spec.n);
    for (c, &s) in sizes.iter().enumerate() {
        planted.extend(core::iter::repeat(Some(c as u32)).take(s));
    }
    planted.extend(core::iter::repeat(None).take(spec.s0));
    planted.shuffle(&mut rng);

    let law = PowerLaw::new(spec.gamma, spec.min_degree, spec.max_degree);
    let degree: Vec<usize> = (0..spec.n).map(|_| law.sample(&mut rng)).collect();
    stats.degree_sum = degree.iter().map(|&d| d as u64).sum();

    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); sizes.len()];
    let mut internal = vec![0usize; spec.n];
    let mut external = degree.clone();
    for (v, c) in planted.iter().enumerate() {
        if let Some(c) = *c {
            members[c as usize].push(v as NodeId);
            let want = libm::round((1.0 - spec.xi) * degree[v] as f64) as usize;
            let k = want.min(sizes[c as usize] - 1);
            stats.capped_stubs += (want - k) as u64;
            internal[v] = k;
            external[v] = degree[v] - k;
        }
    }
    for m in &members {
        if m.iter().map(|&v| internal[v as usize]).sum::<usize>() % 2 == 1 {
            let candidates: Vec<NodeId> = m.iter().copied().filter(|&v| internal[v as usize] > 0).collect();
            let v = candidates[rng.gen_range(0..candidates.len())] as usize;
            internal[v] -= 1;
            stats.parity_fixes += 1;
            stats.dropped_stubs += 1;
        }
    }
    let external_total: usize = external.iter().sum();
    if external_total % 2 == 1 {
        let mut r = rng.gen_range(0..external_total);
        for e in external.iter_mut() {
            if r < *e {
                *e -= 1;
                break;
            }
            r -= *e;
        }
        stats.dropped_stubs += 1;
    }
    stats.internal_stubs = internal.iter().map(|&k| k as u64).sum();
    stats.external_stubs = external.iter().map(|&k| k as u64).sum();

    let mut seen = BTreeSet::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity((stats.degree_sum / 2) as usize);
    for m in &members {
        let mut stubs: Vec<NodeId> = m
            .iter()
            .flat_map(|&v| core::iter::repeat(v).take(internal[v as usize]))
            .collect();
        let (accepted, rewired, dropped) = match_pool(&mut stubs, &mut seen, &mut rng);
        edges.extend(accepted);
        stats.rewired_edges += rewired;
        stats.dropped_internal_edges += dropped;
    }
    let mut stubs: Vec<NodeId> = (0..spec.n as NodeId)
        .flat_map(|v| core::iter::repeat(v).take(external[v as usize]))
        .collect();
    let (accepted, rewired, dropped) = match_pool(&mut stubs, &mut seen, &mut rng);
    edges.extend(accepted);
    stats.rewired_edges += rewired;
    stats.dropped_external_edges = dropped;

    let mut touched = vec![false; spec.n];
    for &(u, v) in &edges {
        touched[u as usize] = true;
        touched[v as usize] = true;
    }
    let mut remap = vec![NodeId::MAX; spec.n];
    let mut kept_planted = Vec::with_capacity(spec.n);
    for v in 0..spec.n {
        if touched[v] {
            remap[v] = kept_planted.len() as NodeId;
            kept_planted.push(planted[v]);
        } else {
            stats.isolated_nodes += 1;
            stats.isolated_outliers += usize::from(planted[v].is_none());
        }
    }
    for e in edges.iter_mut() {
        *e = (remap[e.0 as usize], remap[e.1 as usize]);
    }
    let (graph, report) = Graph::build(kept_planted.len(), &edges, None)?;
    debug_assert_eq!(report, Default::default());
    stats.community_sizes = sizes;
    let labels = kept_planted.iter().map(|c| u8::from(c.is_none())).collect();
    Ok(GenOutput {
        graph,
        planted: kept_planted,
        labels,
        stats,
    })
}
