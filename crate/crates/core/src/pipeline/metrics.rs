use crate::error::{arg, Result};
use crate::graph::PartiallyDirectedGraph;
use crate::network::DiscreteBayesNet;

/// Skeleton comparison against a reference structure.
///
/// Both percentages are fractions of the reference edge count, so
/// `extra_pct` can exceed 1. With no reference edges the denominator is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructMetrics {
    pub missing_pct: f64,
    pub extra_pct: f64,
    pub n_true_edges: usize,
    pub n_learned_edges: usize,
    pub n_missing: usize,
    pub n_extra: usize,
}

/// Compares the skeleton of `learned` with that of the network's DAG.
pub fn structural_metrics(truth: &DiscreteBayesNet, learned: &PartiallyDirectedGraph) -> Result<StructMetrics> {
    structural_metrics_graphs(&truth.dag(), learned)
}

/// Same as [`structural_metrics`] with the reference given as a graph.
/// Orientation is ignored on both sides.
pub fn structural_metrics_graphs(truth: &PartiallyDirectedGraph, learned: &PartiallyDirectedGraph) -> Result<StructMetrics> {
    if truth.n() != learned.n() {
        return arg(format!("reference has {} nodes but learned graph has {}", truth.n(), learned.n()));
    }
    let t = truth.skeleton_edges();
    let l = learned.skeleton_edges();
    let n_missing = t.iter().filter(|&&(u, v)| !learned.adjacent(u, v)).count();
    let n_extra = l.iter().filter(|&&(u, v)| !truth.adjacent(u, v)).count();
    let denom = t.len().max(1) as f64;
    Ok(StructMetrics {
        missing_pct: n_missing as f64 / denom,
        extra_pct: n_extra as f64 / denom,
        n_true_edges: t.len(),
        n_learned_edges: l.len(),
        n_missing,
        n_extra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ug(n: usize, e: &[(usize, usize)]) -> PartiallyDirectedGraph {
        PartiallyDirectedGraph::from_undirected(n, e).unwrap()
    }

    #[test]
    fn counting_examples() {
        let t = PartiallyDirectedGraph::from_directed(3, &[(0, 1), (1, 2)]).unwrap();
        let m = structural_metrics_graphs(&t, &t).unwrap();
        assert_eq!((m.missing_pct, m.extra_pct), (0.0, 0.0));
        let m = structural_metrics_graphs(&t, &ug(3, &[(0, 1)])).unwrap();
        assert_eq!((m.missing_pct, m.extra_pct), (0.5, 0.0));
        let m = structural_metrics_graphs(&ug(3, &[(0, 1)]), &ug(3, &[(0, 1), (0, 2), (1, 2)])).unwrap();
        assert_eq!((m.missing_pct, m.extra_pct), (0.0, 2.0));
        assert!(structural_metrics_graphs(&t, &ug(4, &[])).is_err());
    }

    proptest! {
        #[test]
        fn relabelling_invariance(bits in proptest::collection::vec(any::<bool>(), 30), perm_seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let n = 6;
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let t: Vec<_> = pairs.iter().zip(&bits[..15]).filter(|p| *p.1).map(|p| *p.0).collect();
            let l: Vec<_> = pairs.iter().zip(&bits[15..]).filter(|p| *p.1).map(|p| *p.0).collect();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut crate::rng::seeded(perm_seed));
            let relabel = |es: &[(usize, usize)]| es.iter().map(|&(u, v)| (perm[u], perm[v])).collect::<Vec<_>>();
            let a = structural_metrics_graphs(&ug(n, &t), &ug(n, &l)).unwrap();
            let b = structural_metrics_graphs(&ug(n, &relabel(&t)), &ug(n, &relabel(&l))).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=1.0).contains(&a.missing_pct));
        }
    }
}
