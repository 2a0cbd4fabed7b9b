use dirassort::graph::{degrees, edge_degree_pairs, DependencyType, DirectedGraph, NodeId};
use dirassort::measures::{
    concordance_counts, kendall_tau, pearson, pearson_edge_form, rank_with_ties, spearman_average, spearman_uniform,
    variance_gap, TiePolicy,
};
use dirassort::{vertex_moment_sum, DegreeKind};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = DirectedGraph> {
    (2usize..12).prop_flat_map(|n| {
        prop::collection::vec((0..n as NodeId, 0..n as NodeId), 0..40)
            .prop_map(move |e| DirectedGraph::new(n, e).unwrap())
    })
}

fn permuted(g: &DirectedGraph, perm: &[usize]) -> DirectedGraph {
    let e = g.edges().iter().map(|&(s, t)| (perm[s as usize] as NodeId, perm[t as usize] as NodeId)).collect();
    DirectedGraph::new(g.node_count(), e).unwrap()
}

fn reversed(g: &DirectedGraph) -> DirectedGraph {
    DirectedGraph::new(g.node_count(), g.edges().iter().map(|&(s, t)| (t, s)).collect()).unwrap()
}

/// The order-free measures on one type; `None` where undefined.
fn stable_measures(g: &DirectedGraph, t: DependencyType) -> [Option<f64>; 3] {
    [
        pearson(g, t).ok().map(|v| v.value),
        spearman_average(g, t).ok().map(|v| v.value),
        kendall_tau(g, t).ok().map(|v| v.value),
    ]
}

fn same(a: [Option<f64>; 3], b: [Option<f64>; 3]) -> bool {
    a.iter().zip(&b).all(|(x, y)| match (x, y) {
        (Some(x), Some(y)) => (x - y).abs() < 1e-12,
        (None, None) => true,
        _ => false,
    })
}

proptest! {
    #[test]
    fn edge_sums_equal_vertex_sums(g in graph()) {
        let d = degrees(&g);
        for t in DependencyType::ALL {
            let p = edge_degree_pairs(&g, t);
            let sx: u64 = p.xs().iter().sum();
            let sy: u64 = p.ys().iter().sum();
            let (ap, aq) = if t.source == DegreeKind::Out { (2, 0) } else { (1, 1) };
            let (bp, bq) = if t.target == DegreeKind::Out { (1, 1) } else { (0, 2) };
            prop_assert_eq!(sx as u128, d.moment_exact(ap, aq));
            prop_assert_eq!(sy as u128, d.moment_exact(bp, bq));
            prop_assert_eq!(sx as f64, vertex_moment_sum(&d, ap as f64, aq as f64));
        }
    }

    #[test]
    fn pearson_forms_agree(g in graph()) {
        for t in DependencyType::ALL {
            let vertex = pearson(&g, t).map(|v| v.value);
            let edge = pearson_edge_form(&edge_degree_pairs(&g, t));
            match (vertex, edge) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b),
                (Err(_), Err(_)) => {}
                // near-zero variances may round differently in floating point
                (Err(_), Ok(_)) => prop_assert!(false, "vertex form undefined, edge form defined"),
                (Ok(v), Err(_)) => prop_assert!(false, "edge form undefined, vertex form {}", v),
            }
        }
    }

    #[test]
    fn values_lie_in_unit_interval(g in graph(), seed: u64) {
        for t in DependencyType::ALL {
            for v in stable_measures(&g, t).into_iter().flatten() {
                prop_assert!((-1.0..=1.0).contains(&v));
            }
            if let Ok(v) = spearman_uniform(&g, t, seed) {
                prop_assert!((-1.0..=1.0).contains(&v.value));
            }
        }
    }

    #[test]
    fn relabelling_nodes_changes_nothing(g in graph(), seed: u64) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.node_count()).collect();
        perm.shuffle(&mut dirassort::seeds::rng(seed, 0));
        let h = permuted(&g, &perm);
        for t in DependencyType::ALL {
            prop_assert!(same(stable_measures(&g, t), stable_measures(&h, t)));
        }
    }

    #[test]
    fn edge_order_changes_nothing(g in graph(), seed: u64) {
        use rand::seq::SliceRandom;
        let mut e = g.edges().to_vec();
        e.shuffle(&mut dirassort::seeds::rng(seed, 0));
        let h = DirectedGraph::new(g.node_count(), e).unwrap();
        for t in DependencyType::ALL {
            prop_assert!(same(stable_measures(&g, t), stable_measures(&h, t)));
        }
    }

    #[test]
    fn reversal_swaps_out_out_and_in_in(g in graph()) {
        let r = reversed(&g);
        for (t, u) in [
            (DependencyType::OUT_IN, DependencyType::OUT_IN),
            (DependencyType::IN_OUT, DependencyType::IN_OUT),
            (DependencyType::OUT_OUT, DependencyType::IN_IN),
        ] {
            prop_assert!(same(stable_measures(&g, t), stable_measures(&r, u)));
        }
    }
}

/// `k` edges `s_i → t_i` where `s_i` has in-degree `i` and `t_i` has
/// out-degree `perm[i-1]`, so both In/Out series are tie-free.
fn tie_free(perm: &[usize]) -> DirectedGraph {
    let k = perm.len();
    let mut edges = Vec::new();
    let mut next = 2 * k as NodeId;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    for i in 0..k {
        let (s, t) = (i as NodeId, (k + i) as NodeId);
        edges.push((s, t));
        for _ in 0..=i {
            edges.push((fresh(), s));
        }
        for _ in 0..perm[i] {
            edges.push((t, fresh()));
        }
    }
    let n = edges.iter().map(|e| e.0.max(e.1)).max().unwrap() as usize + 1;
    DirectedGraph::new(n, edges).unwrap()
}

fn in_out_on_core_edges(g: &DirectedGraph, k: usize) -> dirassort::PairSeries {
    let d = degrees(g);
    let pairs = g.edges()[..]
        .iter()
        .filter(|e| (e.0 as usize) < k && (e.1 as usize) < 2 * k)
        .map(|&(s, t)| (d.in_degree[s as usize], d.out_degree[t as usize]))
        .collect::<Vec<_>>();
    pairs.into()
}

proptest! {
    #[test]
    fn gap_matches_pairwise_sum(g in graph()) {
        let d = degrees(&g);
        for alpha in [DegreeKind::Out, DegreeKind::In] {
            for beta in [DegreeKind::Out, DegreeKind::In] {
                let (a, b) = (d.of_kind(alpha), d.of_kind(beta));
                let mut twice = 0u128;
                for v in 0..d.node_count() {
                    for w in 0..d.node_count() {
                        let diff = b[v].abs_diff(b[w]) as u128;
                        twice += a[v] as u128 * a[w] as u128 * diff * diff;
                    }
                }
                prop_assert_eq!(2 * variance_gap(&d, alpha, beta), twice);
            }
        }
        // the source-side series of out/beta types has the out-weighted gap
        for t in DependencyType::ALL {
            let zero = variance_gap(&d, DegreeKind::Out, t.source) == 0
                || variance_gap(&d, DegreeKind::In, t.target) == 0;
            prop_assert_eq!(zero && g.edge_count() > 0, matches!(pearson(&g, t), Err(dirassort::Error::ZeroVariance(_))));
        }
    }

    #[test]
    fn no_ties_means_no_policy_dependence(perm in Just((1..=12usize).collect::<Vec<_>>()).prop_shuffle(), seed: u64) {
        let g = tie_free(&perm);
        let k = perm.len();
        let p = in_out_on_core_edges(&g, k);
        prop_assert_eq!(p.len(), k);
        let (c, d) = concordance_counts(&p);
        prop_assert_eq!(c + d, (k * (k - 1) / 2) as u64);

        // Spearman of the permutation itself, from the classical d² formula
        let d2: f64 = perm.iter().enumerate().map(|(i, &y)| ((i + 1) as f64 - y as f64).powi(2)).sum();
        let kf = k as f64;
        let classical = 1.0 - 6.0 * d2 / (kf * (kf * kf - 1.0));
        let x = rank_with_ties(&p.xs(), TiePolicy::UniformRandom(seed));
        let y = rank_with_ties(&p.ys(), TiePolicy::UniformRandom(seed ^ 1));
        let avg_x = rank_with_ties(&p.xs(), TiePolicy::Average);
        let avg_y = rank_with_ties(&p.ys(), TiePolicy::Average);
        prop_assert_eq!(&x, &avg_x);
        prop_assert_eq!(&y, &avg_y);
        let dot: f64 = x.to_f64().iter().zip(y.to_f64()).map(|(a, b)| a * b).sum();
        let from_ranks = (12.0 * dot - 3.0 * kf * (kf + 1.0).powi(2)) / (kf * kf * kf - kf);
        prop_assert!((from_ranks - classical).abs() < 1e-12);
    }
}
