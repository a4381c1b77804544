use super::*;
use crate::graph::tests::{gnp, triangle, two_triangles};
use crate::quality::{move_gain_degree_tax, move_gain_edge_contribution};
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(seed: u64, max_l: u32) -> (Graph, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(30..120);
    let g = gnp(n, rng.gen_range(0.03..0.2), seed);
    let l = rng.gen_range(1..=max_l);
    let labels: Vec<u32> = (0..g.num_nodes()).map(|_| rng.gen_range(0..l)).collect();
    let p = Partition::from_assignment(&g, &labels).unwrap();
    (g, p)
}

/// Dense `n × ℓ` neighbour-count tally straight from the edge list.
fn dense_counts(g: &Graph, p: &Partition) -> Vec<Vec<f64>> {
    let mut counts = vec![vec![0.0; p.num_communities()]; g.num_nodes()];
    for (u, v) in g.edges() {
        counts[u as usize][p.community_of(v) as usize] += 1.0;
        counts[v as usize][p.community_of(u) as usize] += 1.0;
    }
    counts
}

fn dense_null(g: &Graph, p: &Partition) -> Vec<f64> {
    let vol = g.total_volume() as f64;
    p.members()
        .iter()
        .map(|a| g.volume(a).unwrap() as f64 / vol)
        .collect()
}

/// The four distances evaluated term by term over all ℓ communities.
fn dense_distances(q: &[f64], w: &[f64]) -> [f64; 4] {
    let l1 = q.iter().zip(w).map(|(p, w)| (p - w).abs()).sum();
    let l2 = libm::sqrt(q.iter().zip(w).map(|(p, w)| (p - w) * (p - w)).sum());
    let kl = q
        .iter()
        .zip(w)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, w)| p * libm::log(p / w))
        .sum();
    let hd = libm::sqrt(
        q.iter()
            .zip(w)
            .map(|(p, w)| libm::pow(libm::sqrt(*p) - libm::sqrt(*w), 2.0))
            .sum::<f64>(),
    ) / core::f64::consts::SQRT_2;
    [l1, l2, kl, hd]
}

fn as_array(d: Distances) -> [f64; 4] {
    [d.l1, d.l2, d.kl, d.hellinger]
}

fn dense_q1(counts: &[Vec<f64>], g: &Graph, v: NodeId) -> Vec<f64> {
    let d = g.degree(v) as f64;
    counts[v as usize].iter().map(|k| k / d).collect()
}

fn dense_q2(counts: &[Vec<f64>], g: &Graph, v: NodeId) -> Vec<f64> {
    let l = counts[0].len();
    let mut q = vec![0.0; l];
    for &u in g.neighbors(v) {
        for (i, x) in dense_q1(counts, g, u).iter().enumerate() {
            q[i] += x;
        }
    }
    let d = g.degree(v) as f64;
    q.iter().map(|x| x / d).collect()
}

/// 4-cycle split into two adjacent pairs: every node sees one neighbour in
/// each community, and both communities hold half of the volume.
fn balanced_cycle() -> (Graph, Partition) {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let p = Partition::from_assignment(&g, &[0, 0, 1, 1]).unwrap();
    (g, p)
}

#[test]
fn profile_examples() {
    let t = triangle();
    let whole = Partition::whole(&t);
    let prof = CommunityProfile::build(&t, &whole).unwrap();
    for v in t.nodes() {
        assert_eq!(prof.entries(v), &[(0, 2)]);
    }
    let g = two_triangles();
    let p = Partition::from_assignment(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
    let prof = CommunityProfile::build(&g, &p).unwrap();
    assert_eq!(prof.entries(2), &[(0, 2), (1, 1)]);
}

#[test]
fn profile_matches_dense_tally() {
    for seed in 0..30 {
        let (g, p) = random_instance(seed, 12);
        let prof = CommunityProfile::build(&g, &p).unwrap();
        let dense = dense_counts(&g, &p);
        for v in g.nodes() {
            for c in 0..p.num_communities() as u32 {
                assert_eq!(prof.count_in(v, c) as f64, dense[v as usize][c as usize]);
            }
            let total: u32 = prof.entries(v).iter().map(|&(_, k)| k).sum();
            assert_eq!(total as usize, g.degree(v));
            assert!(prof.entries(v).iter().all(|&(_, k)| k > 0));
        }
        let null_sum: f64 = prof.null().iter().sum();
        assert!((null_sum - 1.0).abs() < 1e-12);
        assert!(prof.null().iter().all(|&w| w > 0.0));
    }
}

#[test]
fn cada_examples() {
    // Star: centre 0 with leaves 1..=6; leaves split (3, 2, 1) over three communities.
    let g = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap();
    let p = Partition::from_assignment(&g, &[0, 0, 0, 0, 1, 1, 2]).unwrap();
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    assert_eq!(f.cada(0), 2.0);
    // All leaves in one community.
    let p = Partition::from_assignment(&g, &[0, 1, 1, 1, 1, 1, 1]).unwrap();
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    assert_eq!(f.cada(0), 1.0);
    // Every leaf in its own community.
    let p = Partition::singletons(&g);
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    assert_eq!(f.cada(0), 6.0);
}

#[test]
fn cada_norm_examples() {
    let t = triangle();
    let whole = Partition::whole(&t);
    let f = CommunityFeatures::new(&t, &whole, 1.0).unwrap();
    assert_eq!(f.cada_norm(0), 1.0);
    // Centre 0 of a 5-star together with leaves 1 and 2.
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    let p = Partition::from_assignment(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    assert!((f.cada_norm(0) - 0.4).abs() < 1e-15);
    // Own community is not the argmax here, so the reciprocal relation fails.
    assert!((f.cada_norm(0) - 1.0 / f.cada(0)).abs() > 0.1);
}

#[test]
fn cada_norm_is_reciprocal_when_own_community_is_argmax() {
    for seed in 0..20 {
        let (g, p) = random_instance(seed, 6);
        let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
        for v in g.nodes() {
            if f.profile().count_in(v, p.community_of(v)) == f.profile().max_count(v) {
                assert!((f.cada_norm(v) - 1.0 / f.cada(v)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn wmd_examples() {
    // Regular community: a 4-cycle.
    let (g, p) = balanced_cycle();
    let whole = Partition::whole(&g);
    let f = CommunityFeatures::new(&g, &whole, 1.0).unwrap();
    assert!(g.nodes().all(|v| f.wmd(v) == 0.0));
    // Path 0-1-2 as one community: internal degrees {1, 2, 1}.
    let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let path_whole = Partition::whole(&path);
    let f = CommunityFeatures::new(&path, &path_whole, 1.0).unwrap();
    assert!((f.wmd(1) - core::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((f.wmd(0) + core::f64::consts::SQRT_2 / 2.0).abs() < 1e-12);
    // A node at the community mean scores zero.
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    assert_eq!(f.wmd(0), 0.0);
    // Singletons have zero spread.
    let singles = Partition::singletons(&g);
    let f = CommunityFeatures::new(&g, &singles, 1.0).unwrap();
    assert!(g.nodes().all(|v| f.wmd(v) == 0.0));
}

#[test]
fn cpc_examples() {
    let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let whole = Partition::whole(&star);
    let f = CommunityFeatures::new(&star, &whole, 1.0).unwrap();
    assert_eq!(f.cpc(0), 0.0);
    let p = Partition::from_assignment(&star, &[0, 0, 1, 2, 3]).unwrap();
    let f = CommunityFeatures::new(&star, &p, 1.0).unwrap();
    assert!((f.cpc(0) - 0.75).abs() < 1e-15);
    let p = Partition::from_assignment(&star, &[0, 0, 0, 0, 1]).unwrap();
    let f = CommunityFeatures::new(&star, &p, 1.0).unwrap();
    assert!((f.cpc(0) - 0.375).abs() < 1e-15);
}

#[test]
fn cas_single_community() {
    let g = two_triangles();
    let whole = Partition::whole(&g);
    let f = CommunityFeatures::new(&g, &whole, 1.0).unwrap();
    for v in g.nodes() {
        let expected = 2.0 * g.degree(v) as f64 / g.total_volume() as f64;
        assert!((f.cas(v) - expected).abs() < 1e-15);
    }
}

#[test]
fn cas_zeroes_net_move_gain() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..50 {
        let (g, p) = random_instance(seed, 8);
        let lambda = rng.gen_range(0.25..3.0);
        let f = CommunityFeatures::new(&g, &p, lambda).unwrap();
        for v in g.nodes() {
            if p.size(p.community_of(v)) == 1 {
                continue;
            }
            let edge = move_gain_edge_contribution(&g, &p, v, f.cas(v)).unwrap();
            let tax = move_gain_degree_tax(&g, &p, v, lambda).unwrap();
            assert!((edge - tax).abs() < 1e-9);
        }
    }
}

#[test]
fn depth1_worked_example() {
    let d = sparse_distances([(0, 0.75), (1, 0.25)], &[0.5, 0.5], 0.5);
    assert!((d.l1 - 0.5).abs() < 1e-12);
    assert!((d.l2 - 0.353553390593).abs() < 1e-9);
    assert!((d.kl - 0.130812035941).abs() < 1e-9);
    assert!((d.hellinger - 0.184591911283).abs() < 1e-9);
}

#[test]
fn null_fixed_point() {
    let (g, p) = balanced_cycle();
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    let mut scratch = f.scratch();
    for v in g.nodes() {
        assert_eq!(as_array(f.depth1(v)), [0.0; 4]);
        assert_eq!(as_array(f.depth2(v, &mut scratch)), [0.0; 4]);
    }
}

#[test]
fn single_community_depth2_is_zero() {
    let g = gnp(30, 0.2, 6);
    let whole = Partition::whole(&g);
    let f = CommunityFeatures::new(&g, &whole, 1.0).unwrap();
    let mut scratch = f.scratch();
    for v in g.nodes() {
        assert_eq!(as_array(f.depth2(v, &mut scratch)), [0.0; 4]);
    }
}

#[test]
fn q2_examples() {
    let t = triangle();
    let whole = Partition::whole(&t);
    let f = CommunityFeatures::new(&t, &whole, 1.0).unwrap();
    let mut s = f.scratch();
    for v in t.nodes() {
        assert_eq!(f.q2_vector(v, &mut s), vec![(0, 1.0)]);
    }
    // Star centre in A₀, leaves elsewhere: every leaf sees only the centre.
    let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let p = Partition::from_assignment(&star, &[0, 1, 1, 2, 2]).unwrap();
    let f = CommunityFeatures::new(&star, &p, 1.0).unwrap();
    let mut s = f.scratch();
    assert_eq!(f.q2_vector(0, &mut s), vec![(0, 1.0)]);
}

#[test]
fn sparse_matches_dense_oracle() {
    for seed in 0..60 {
        let (g, p) = random_instance(seed, 50);
        let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
        let counts = dense_counts(&g, &p);
        let null = dense_null(&g, &p);
        let mut scratch = f.scratch();
        for v in g.nodes() {
            let q1 = dense_q1(&counts, &g, v);
            let q2 = dense_q2(&counts, &g, v);
            let s1 = as_array(f.depth1(v));
            let s2 = as_array(f.depth2(v, &mut scratch));
            let o1 = dense_distances(&q1, &null);
            let o2 = dense_distances(&q2, &null);
            for k in 0..4 {
                assert!((s1[k] - o1[k]).abs() < 1e-12, "depth1[{k}] {} vs {}", s1[k], o1[k]);
                assert!((s2[k] - o2[k]).abs() < 1e-12, "depth2[{k}] {} vs {}", s2[k], o2[k]);
            }
            let sparse_q2 = f.q2_vector(v, &mut scratch);
            let total: f64 = sparse_q2.iter().map(|&(_, x)| x).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (c, x) in sparse_q2 {
                assert!((x - q2[c as usize]).abs() < 1e-12);
            }
            let total: f64 = f.q1_vector(v).iter().map(|&(_, x)| x).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn feature_ranges() {
    for seed in 0..40 {
        let (g, p) = random_instance(seed + 100, 20);
        let m = compute_all(&g, &p, 1.0).unwrap();
        assert!(m.is_finite());
        let l = p.num_communities() as f64;
        let maxdeg = g.max_degree() as f64;
        for v in 0..g.num_nodes() {
            let r = m.row(v);
            assert!(r[0] >= 1.0 && r[0] <= maxdeg);
            assert!((0.0..=1.0).contains(&r[1]));
            assert!(r[3] >= -1e-15 && r[3] <= 1.0 - 1.0 / l + 1e-12);
            for base in [5, 9] {
                assert!(r[base] >= 0.0 && r[base] <= 2.0 + 1e-12);
                assert!(r[base + 1] >= 0.0);
                assert!(r[base + 2] >= 0.0);
                assert!((0.0..=1.0).contains(&r[base + 3]));
            }
        }
    }
}

#[test]
fn compute_all_matches_single_operations() {
    let (g, p) = random_instance(7, 10);
    let m = compute_all(&g, &p, 1.0).unwrap();
    assert_eq!(m.names(), &COMMUNITY_FEATURES.map(String::from));
    assert_eq!((m.num_rows(), m.num_cols()), (g.num_nodes(), 13));
    let f = CommunityFeatures::new(&g, &p, 1.0).unwrap();
    let mut s = f.scratch();
    for v in g.nodes() {
        let d1 = f.depth1(v);
        let d2 = f.depth2(v, &mut s);
        let expected = [
            f.cada(v),
            f.cada_norm(v),
            f.wmd(v),
            f.cpc(v),
            f.cas(v),
            d1.l1,
            d1.l2,
            d1.kl,
            d1.hellinger,
            d2.l1,
            d2.l2,
            d2.kl,
            d2.hellinger,
        ];
        assert_eq!(m.row(v as usize), &expected);
    }
    let d1 = compute_depth1(&g, &p, 1.0).unwrap();
    for v in 0..g.num_nodes() {
        assert_eq!(d1.row(v), &m.row(v)[..9]);
    }
}

#[test]
fn permutation_equivariance() {
    let (g, p) = random_instance(12, 9);
    let n = g.num_nodes();
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(3));
    let h = g.permuted(&perm).unwrap();
    let l = p.num_communities() as u32;
    let mut labels = vec![0u32; n];
    for v in g.nodes() {
        // Communities renamed in reverse as well.
        labels[perm[v as usize] as usize] = l - 1 - p.community_of(v);
    }
    let q = Partition::from_assignment(&h, &labels).unwrap();
    let a = compute_all(&g, &p, 1.0).unwrap();
    let b = compute_all(&h, &q, 1.0).unwrap();
    for v in 0..n {
        let (ra, rb) = (a.row(v), b.row(perm[v] as usize));
        for k in 0..13 {
            assert!((ra[k] - rb[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn singleton_members_are_well_defined() {
    let g = two_triangles();
    let p = Partition::from_assignment(&g, &[2, 0, 0, 1, 1, 1]).unwrap();
    let m = compute_all(&g, &p, 1.0).unwrap();
    assert!(m.is_finite());
    assert_eq!(m.get(0, 1), 0.0);
    // CAS for an outlier: 2(0 − (2 − 2)/14) = 0.
    assert_eq!(m.get(0, 4), 0.0);
}

#[test]
fn bad_lambda() {
    let g = triangle();
    assert!(CommunityFeatures::new(&g, &Partition::whole(&g), 0.0).is_err());
}
