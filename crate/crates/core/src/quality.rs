//! Partition quality: modularity, its resolution and outlier-regularized
//! variants, and the single-node move gains behind community association
//! strength.
//!
//! With `m` edges, `vol(V) = 2m`, community volumes `vol(A_i)` and internal
//! edge counts `e(A_i)`:
//!
//! ```text
//! q_λ(A)   = Σ e(A_i)/m − λ Σ (vol(A_i)/vol(V))²
//! q_λ,β(A) = Σ (e(A_i) + [|A_i|=1] β vol(A_i)/2) / (m + Z/2)
//!            − λ Σ (vol(A_i)(1 + [|A_i|=1] β) / (vol(V) + Z))²,   Z = β vol(O)
//! ```
//!
//! where `O` is the union of single-node communities.

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(invalid("lambda", "must be a positive finite number"))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid("beta", "must be a nonnegative finite number"))
    }
}

/// Newman–Girvan modularity.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    generalized_modularity(g, p, 1.0)
}

/// Modularity with resolution parameter `lambda` on the degree tax.
pub fn generalized_modularity(g: &Graph, p: &Partition, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    p.check_graph(g)?;
    let m = g.num_edges() as f64;
    let vol = g.total_volume() as f64;
    let mut edge = 0.0;
    let mut tax = 0.0;
    for c in 0..p.num_communities() as u32 {
        edge += p.internal_edges(c) as f64;
        let share = p.volume(c) as f64 / vol;
        tax += share * share;
    }
    Ok(edge / m - lambda * tax)
}

/// Exact regularized modularity `q_λ,β`.
pub fn regularized_modularity(g: &Graph, p: &Partition, lambda: f64, beta: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_beta(beta)?;
    p.check_graph(g)?;
    let m = g.num_edges() as f64;
    let vol = g.total_volume() as f64;
    let outlier_volume: u64 = (0..p.num_communities() as u32)
        .filter(|&c| p.size(c) == 1)
        .map(|c| p.volume(c))
        .sum();
    let z = beta * outlier_volume as f64;
    let mut edge = 0.0;
    let mut tax = 0.0;
    for c in 0..p.num_communities() as u32 {
        let bonus = if p.size(c) == 1 { beta } else { 0.0 };
        let vc = p.volume(c) as f64;
        edge += p.internal_edges(c) as f64 + bonus * vc / 2.0;
        let share = vc * (1.0 + bonus) / (vol + z);
        tax += share * share;
    }
    Ok(edge / (m + z / 2.0) - lambda * tax)
}

fn non_singleton_community(p: &Partition, v: NodeId) -> Result<u32> {
    if v as usize >= p.num_nodes() {
        return Err(Error::NodeOutOfRange {
            node: v as usize,
            n: p.num_nodes(),
        });
    }
    let c = p.community_of(v);
    if p.size(c) == 1 {
        return Err(Error::SingletonMove(v as usize));
    }
    Ok(c)
}

/// Change in the (approximated) edge contribution when `v` leaves its
/// community for a community of its own:
/// `(−2 deg_{A_i}(v) + β deg(v)) / vol(V)`.
///
/// The expression is linear in `β`, so any finite `β` is accepted; negative
/// values arise when evaluating it at a negative association strength.
pub fn move_gain_edge_contribution(g: &Graph, p: &Partition, v: NodeId, beta: f64) -> Result<f64> {
    if !beta.is_finite() {
        return Err(invalid("beta", "must be finite"));
    }
    p.check_graph(g)?;
    non_singleton_community(p, v)?;
    let internal = p.internal_degree(g, v) as f64;
    let deg = g.degree(v) as f64;
    Ok((-2.0 * internal + beta * deg) / g.total_volume() as f64)
}

/// Change in `λ Σ (vol(A_i)/vol(V))²` for the same move:
/// `−2λ (vol(A_i) deg(v) − deg(v)²) / vol(V)²`.
pub fn move_gain_degree_tax(g: &Graph, p: &Partition, v: NodeId, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    p.check_graph(g)?;
    let c = non_singleton_community(p, v)?;
    let deg = g.degree(v) as f64;
    let vol = g.total_volume() as f64;
    let vc = p.volume(c) as f64;
    Ok(-2.0 * lambda * (vc * deg - deg * deg) / (vol * vol))
}
