//! Multi-threaded drivers over the core algorithms.
//!
//! Results do not depend on the number of threads: restarts are reduced by
//! quality and index, feature rows are independent, and shortest-path sums
//! are merged over a fixed chunking of the sources in a fixed order.

use rayon::prelude::*;

use commaware_core::classical::{self, ClassicalSpec, PathAccumulator, PathPlan};
use commaware_core::detect::{self, Detection};
use commaware_core::features::{CommunityFeatures, COMMUNITY_FEATURES};
use commaware_core::{DetectConfig, FeatureMatrix, Graph, NodeId, Partition, Result};

/// Number of source chunks in the shortest-path pass.
const PATH_CHUNKS: usize = 32;

/// Runs the detection restarts concurrently.
pub fn detect(g: &Graph, cfg: &DetectConfig) -> Result<Detection> {
    cfg.validate()?;
    let runs: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| detect::run_once(g, cfg, r, None).map(|res| (r, res)))
        .collect();
    detect::select_best(runs)
}

/// All thirteen community-aware features, rows computed concurrently.
pub fn community_features(g: &Graph, p: &Partition, lambda: f64) -> Result<FeatureMatrix> {
    let features = CommunityFeatures::new(g, p, lambda)?;
    let mut matrix = FeatureMatrix::zeros(&COMMUNITY_FEATURES, g.num_nodes());
    matrix
        .values_mut()
        .par_chunks_mut(COMMUNITY_FEATURES.len())
        .enumerate()
        .for_each_init(
            || features.scratch(),
            |scratch, (v, row)| features.fill_row(v as NodeId, scratch, row),
        );
    Ok(matrix)
}

/// The depth-one community-aware features.
pub fn depth1_features(g: &Graph, p: &Partition, lambda: f64) -> Result<FeatureMatrix> {
    let features = CommunityFeatures::new(g, p, lambda)?;
    let width = 9;
    let mut matrix = FeatureMatrix::zeros(&COMMUNITY_FEATURES[..width], g.num_nodes());
    matrix
        .values_mut()
        .par_chunks_mut(width)
        .enumerate()
        .for_each(|(v, row)| features.fill_depth1_row(v as NodeId, row));
    Ok(matrix)
}

/// Classical features with the breadth-first searches spread over threads.
pub fn classical_features(g: &Graph, spec: &ClassicalSpec) -> Result<FeatureMatrix> {
    let plan = PathPlan::new(g, spec)?;
    let n = g.num_nodes();
    let sources = plan.sources();
    let chunk = sources.len().div_ceil(PATH_CHUNKS).max(1);
    let partial: Vec<PathAccumulator> = sources
        .par_chunks(chunk)
        .map(|part| {
            let mut acc = PathAccumulator::new(n);
            plan.run(g, part, &mut acc);
            acc
        })
        .collect();
    let total = partial
        .iter()
        .fold(PathAccumulator::new(n), |acc, part| acc.merge(part));
    classical::assemble(g, spec, &plan, &total)
}
