//! Multi-restart modularity maximization.
//!
//! Each restart is a Louvain-style run: nodes are visited in random order and
//! moved greedily to the neighbouring community with the largest gain in
//! `q_λ`; once a sweep makes no move the communities are collapsed into
//! weighted super-nodes and the process repeats on the smaller graph. The
//! expanded result has every disconnected community split into its
//! components, which never lowers `q_λ`. The best of `R` restarts wins.
//!
//! A run first renames nodes by their position in a random visiting order and
//! then only ever breaks ties by these canonical indices. Running on a
//! relabelled copy of the graph with the correspondingly relabelled order
//! therefore reproduces the same communities.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;
use crate::quality::generalized_modularity;
use crate::rng::{derive_seed, seeded, StdRng};

/// Sweeps per level before giving up on convergence.
const MAX_SWEEPS: usize = 1_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    /// Resolution parameter λ of `q_λ`.
    pub lambda: f64,
    /// Independent runs; the best partition is kept.
    pub restarts: usize,
    pub seed: u64,
    pub max_levels: usize,
    /// Smallest gain that still counts as an improvement.
    pub min_gain: f64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            lambda: 1.0,
            restarts: 16,
            seed: 0,
            max_levels: 20,
            min_gain: 1e-12,
        }
    }
}

impl DetectConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid("lambda", "must be a positive finite number"));
        }
        if self.restarts == 0 {
            return Err(invalid("restarts", "must be at least 1"));
        }
        if self.max_levels == 0 {
            return Err(invalid("max_levels", "must be at least 1"));
        }
        if !(self.min_gain >= 0.0) {
            return Err(invalid("min_gain", "must be nonnegative"));
        }
        Ok(())
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub partition: Partition,
    /// `q_λ` of `partition`.
    pub quality: f64,
    /// `q_λ` after each aggregation level, computed on the aggregated graph.
    pub level_qualities: Vec<f64>,
    /// `q_λ` of the expanded partition before disconnected communities were split.
    pub quality_before_split: f64,
    pub split_communities: usize,
}

/// Best partition over all restarts.
#[derive(Debug, Clone)]
pub struct Detection {
    pub partition: Partition,
    pub quality: f64,
    /// Index of the winning restart.
    pub restart: usize,
    pub restart_qualities: Vec<f64>,
}

/// Visiting order drawn at the start of restart `restart`: `order[k]` is the
/// node that gets canonical index `k`.
pub fn initial_order(n: usize, cfg: &DetectConfig, restart: usize) -> Vec<NodeId> {
    let mut rng = seeded(derive_seed(cfg.seed, restart as u64));
    draw_order(n, &mut rng)
}

fn draw_order(n: usize, rng: &mut StdRng) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.shuffle(rng);
    order
}

/// Runs every restart sequentially and keeps the best.
pub fn detect(g: &Graph, cfg: &DetectConfig) -> Result<Detection> {
    cfg.validate()?;
    let runs = (0..cfg.restarts).map(|r| run_once(g, cfg, r, None).map(|res| (r, res)));
    select_best(runs)
}

/// Reduces restart outcomes to the one with the highest quality; equal
/// qualities go to the lowest restart index regardless of arrival order.
pub fn select_best<I>(runs: I) -> Result<Detection>
where
    I: IntoIterator<Item = Result<(usize, RunResult)>>,
{
    let mut qualities: Vec<(usize, f64)> = Vec::new();
    let mut best: Option<(usize, RunResult)> = None;
    for run in runs {
        let (r, res) = run?;
        qualities.push((r, res.quality));
        let better = match &best {
            None => true,
            Some((br, b)) => res.quality > b.quality || (res.quality == b.quality && r < *br),
        };
        if better {
            best = Some((r, res));
        }
    }
    let (restart, res) = best.ok_or(Error::NoCandidates)?;
    qualities.sort_by_key(|&(r, _)| r);
    Ok(Detection {
        partition: res.partition,
        quality: res.quality,
        restart,
        restart_qualities: qualities.into_iter().map(|(_, q)| q).collect(),
    })
}

/// The candidate with the highest `q_λ`, ties to the lowest index.
pub fn best_partition_of<'a>(g: &Graph, candidates: &'a [Partition], lambda: f64) -> Result<&'a Partition> {
    let mut best: Option<(f64, &Partition)> = None;
    for p in candidates {
        let q = generalized_modularity(g, p, lambda)?;
        if best.map_or(true, |(bq, _)| q > bq) {
            best = Some((q, p));
        }
    }
    best.map(|(_, p)| p).ok_or(Error::NoCandidates)
}

/// One restart. `order` overrides the random visiting order (the random
/// stream is consumed identically either way).
pub fn run_once(g: &Graph, cfg: &DetectConfig, restart: usize, order: Option<&[NodeId]>) -> Result<RunResult> {
    cfg.validate()?;
    let n = g.num_nodes();
    let mut rng = seeded(derive_seed(cfg.seed, restart as u64));
    let drawn = draw_order(n, &mut rng);
    let order = match order {
        Some(o) => {
            if o.len() != n {
                return Err(invalid("order", "length must equal the node count"));
            }
            o.to_vec()
        }
        None => drawn,
    };
    let mut canonical = vec![NodeId::MAX; n];
    for (k, &v) in order.iter().enumerate() {
        if v as usize >= n || canonical[v as usize] != NodeId::MAX {
            return Err(invalid("order", "not a permutation of the nodes"));
        }
        canonical[v as usize] = k as NodeId;
    }

    let m = g.num_edges() as f64;
    let mut level = LevelGraph::from_graph(g, &order, &canonical);
    // Super-node of every canonical node.
    let mut membership: Vec<u32> = (0..n as u32).collect();
    let mut level_qualities: Vec<f64> = Vec::new();

    for _ in 0..cfg.max_levels {
        let (communities, count, moved) = local_moving(&level, m, cfg, &mut rng);
        if !moved {
            break;
        }
        let q = level.quality(&communities, m, cfg.lambda);
        debug_assert!(
            level_qualities.last().map_or(true, |&prev| q >= prev - 1e-12),
            "quality dropped between levels"
        );
        level_qualities.push(q);
        for s in membership.iter_mut() {
            *s = communities[*s as usize];
        }
        level = level.aggregate(&communities, count);
        if count == 1 {
            break;
        }
    }

    let assignment: Vec<u32> = g.nodes().map(|v| membership[canonical[v as usize] as usize]).collect();
    let mut partition = Partition::from_assignment(g, &assignment)?;
    let quality_before_split = generalized_modularity(g, &partition, cfg.lambda)?;
    let split_communities = partition.split_disconnected(g);
    let quality = generalized_modularity(g, &partition, cfg.lambda)?;
    Ok(RunResult {
        partition,
        quality,
        level_qualities,
        quality_before_split,
        split_communities,
    })
}

/// Weighted graph of super-nodes. Edge weights and self-loops count
/// original edges; `strength` is the original volume.
struct LevelGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
    self_loops: Vec<u64>,
    strength: Vec<u64>,
}

impl LevelGraph {
    fn from_graph(g: &Graph, order: &[NodeId], canonical: &[NodeId]) -> LevelGraph {
        let n = g.num_nodes();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.num_edges());
        offsets.push(0);
        for &v in order {
            let start = targets.len();
            targets.extend(g.neighbors(v).iter().map(|&u| canonical[u as usize]));
            targets[start..].sort_unstable();
            offsets.push(targets.len());
        }
        let strength = order.iter().map(|&v| g.degree(v) as u64).collect();
        LevelGraph {
            weights: vec![1; targets.len()],
            offsets,
            targets,
            self_loops: vec![0; n],
            strength,
        }
    }

    fn len(&self) -> usize {
        self.strength.len()
    }

    fn arcs(&self, i: usize) -> impl Iterator<Item = (u32, u64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.targets[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    fn quality(&self, communities: &[u32], m: f64, lambda: f64) -> f64 {
        let count = communities.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut internal = vec![0u64; count];
        let mut volume = vec![0u64; count];
        for i in 0..self.len() {
            let c = communities[i] as usize;
            volume[c] += self.strength[i];
            internal[c] += 2 * self.self_loops[i];
            for (j, w) in self.arcs(i) {
                if communities[j as usize] as usize == c {
                    internal[c] += w;
                }
            }
        }
        let vol = 2.0 * m;
        let mut edge = 0.0;
        let mut tax = 0.0;
        for c in 0..count {
            edge += internal[c] as f64 / 2.0;
            let share = volume[c] as f64 / vol;
            tax += share * share;
        }
        edge / m - lambda * tax
    }

    fn aggregate(&self, communities: &[u32], count: usize) -> LevelGraph {
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); count];
        for (i, &c) in communities.iter().enumerate() {
            members[c as usize].push(i as u32);
        }
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut self_loops = vec![0u64; count];
        let mut strength = vec![0u64; count];
        let mut acc = vec![0u64; count];
        let mut touched: Vec<u32> = Vec::new();
        offsets.push(0);
        for c in 0..count {
            let mut internal_twice = 0u64;
            for &i in &members[c] {
                let i = i as usize;
                strength[c] += self.strength[i];
                self_loops[c] += self.self_loops[i];
                for (j, w) in self.arcs(i) {
                    let d = communities[j as usize];
                    if d as usize == c {
                        internal_twice += w;
                    } else {
                        if acc[d as usize] == 0 {
                            touched.push(d);
                        }
                        acc[d as usize] += w;
                    }
                }
            }
            self_loops[c] += internal_twice / 2;
            touched.sort_unstable();
            for &d in &touched {
                targets.push(d);
                weights.push(acc[d as usize]);
                acc[d as usize] = 0;
            }
            touched.clear();
            offsets.push(targets.len());
        }
        LevelGraph {
            offsets,
            targets,
            weights,
            self_loops,
            strength,
        }
    }
}

/// Greedy local moving from singletons. Returns communities renumbered by
/// first appearance, their count, and whether any node moved.
fn local_moving(level: &LevelGraph, m: f64, cfg: &DetectConfig, rng: &mut StdRng) -> (Vec<u32>, usize, bool) {
    let n = level.len();
    let mut comm: Vec<u32> = (0..n as u32).collect();
    let mut comm_volume: Vec<u64> = level.strength.clone();
    let mut link = vec![0u64; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let scale = cfg.lambda / (2.0 * m);
    let mut moved_any = false;

    for _ in 0..MAX_SWEEPS {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let i = i as usize;
            let own = comm[i];
            let k = level.strength[i];
            for (j, w) in level.arcs(i) {
                let c = comm[j as usize];
                if link[c as usize] == 0 {
                    touched.push(c);
                }
                link[c as usize] += w;
            }
            comm_volume[own as usize] -= k;
            let kf = k as f64;
            let score = |c: u32, link_c: u64| link_c as f64 - scale * kf * comm_volume[c as usize] as f64;
            let own_score = score(own, link[own as usize]);
            let mut best = own;
            let mut best_score = own_score;
            for &c in &touched {
                let s = score(c, link[c as usize]);
                if s > best_score || (s == best_score && c < best) {
                    best = c;
                    best_score = s;
                }
            }
            if best != own && (best_score - own_score) / m <= cfg.min_gain {
                best = own;
            }
            comm_volume[best as usize] += k;
            if best != own {
                comm[i] = best;
                moved = true;
            }
            for &c in &touched {
                link[c as usize] = 0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }

    let mut dense = vec![u32::MAX; n];
    let mut count = 0u32;
    for c in comm.iter_mut() {
        if dense[*c as usize] == u32::MAX {
            dense[*c as usize] = count;
            count += 1;
        }
        *c = dense[*c as usize];
    }
    (comm, count as usize, moved_any)
}
