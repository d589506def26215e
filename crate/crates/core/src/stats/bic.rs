use std::collections::HashMap;
use std::sync::RwLock;

use crate::data::CategoricalDataset;
use crate::error::{arg, Result};
use crate::graph::PartiallyDirectedGraph;

/// BIC of one node given a parent set. Higher is better.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalScore {
    pub node: usize,
    pub parents: Vec<usize>,
    pub value: f64,
}

/// Maximum-likelihood log-likelihood of `node` given `parents` minus
/// `ln(N) / 2` per free parameter, with `q (r - 1)` free parameters.
///
/// Cardinalities are taken from the dataset, so declared but unobserved
/// states still count towards the penalty.
pub fn bic_local(ds: &CategoricalDataset, node: usize, parents: &[usize]) -> Result<LocalScore> {
    let v = ds.n_vars();
    if node >= v || parents.iter().any(|&p| p >= v) {
        return arg("variable index out of range");
    }
    let mut parents = parents.to_vec();
    parents.sort_unstable();
    parents.dedup();
    if parents.contains(&node) {
        return arg(format!("node {node} cannot be its own parent"));
    }
    let mut loglik = 0.0;
    for (_, counts) in ds.grouped_counts(node, &parents)? {
        let nj: u64 = counts.iter().sum();
        let nj = nj as f64;
        for &njk in &counts {
            if njk > 0 {
                let njk = njk as f64;
                loglik += njk * (njk / nj).ln();
            }
        }
    }
    let q: f64 = parents.iter().map(|&p| ds.cardinality(p) as f64).product();
    let r = ds.cardinality(node) as f64;
    let penalty = (ds.n_rows() as f64).ln() / 2.0 * q * (r - 1.0);
    Ok(LocalScore { node, parents, value: loglik - penalty })
}

/// Sum of local scores of every node given its parents in the DAG `dag`.
pub fn total_bic(ds: &CategoricalDataset, dag: &PartiallyDirectedGraph) -> Result<f64> {
    check_dag(ds, dag)?;
    let mut total = 0.0;
    for v in 0..dag.n() {
        total += bic_local(ds, v, &dag.parents(v))?.value;
    }
    Ok(total)
}

fn check_dag(ds: &CategoricalDataset, dag: &PartiallyDirectedGraph) -> Result<()> {
    if dag.n() != ds.n_vars() {
        return arg(format!("graph has {} nodes but dataset has {} variables", dag.n(), ds.n_vars()));
    }
    if !dag.is_dag() {
        return Err(crate::Error::Structure("BIC needs an acyclic, fully directed graph".into()));
    }
    Ok(())
}

/// Memoised local scores for one dataset, shareable across threads.
pub struct ScoreCache<'a> {
    ds: &'a CategoricalDataset,
    scores: RwLock<HashMap<(usize, Vec<usize>), f64>>,
}

impl<'a> ScoreCache<'a> {
    pub fn new(ds: &'a CategoricalDataset) -> Self {
        Self { ds, scores: RwLock::new(HashMap::new()) }
    }

    pub fn dataset(&self) -> &'a CategoricalDataset {
        self.ds
    }

    /// Local score of `node` given the ascending, duplicate-free `parents`.
    pub fn score(&self, node: usize, parents: &[usize]) -> Result<f64> {
        debug_assert!(parents.windows(2).all(|w| w[0] < w[1]));
        let key = (node, parents.to_vec());
        if let Some(&s) = self.scores.read().unwrap().get(&key) {
            return Ok(s);
        }
        let s = bic_local(self.ds, node, parents)?.value;
        self.scores.write().unwrap().insert(key, s);
        Ok(s)
    }

    /// Same as [`total_bic`] but through the cache.
    pub fn total(&self, dag: &PartiallyDirectedGraph) -> Result<f64> {
        check_dag(self.ds, dag)?;
        let mut total = 0.0;
        for v in 0..dag.n() {
            total += self.score(v, &dag.parents(v))?;
        }
        Ok(total)
    }

    pub fn len(&self) -> usize {
        self.scores.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_dags;
    use crate::graph::immoralities;
    use crate::rng;
    use rand::Rng;

    fn random_ds(seed: u64, n: usize, cards: &[u32]) -> CategoricalDataset {
        let mut r = rng::seeded(seed);
        // correlated columns so parent sets matter
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|_| {
                let mut row: Vec<u32> = Vec::with_capacity(cards.len());
                for (v, &k) in cards.iter().enumerate() {
                    let c = if v > 0 && r.random_bool(0.6) { row[v - 1] % k } else { r.random_range(0..k) };
                    row.push(c);
                }
                row
            })
            .collect();
        let cols = (0..cards.len()).map(|v| rows.iter().map(|row| row[v]).collect()).collect();
        CategoricalDataset::new((0..cards.len()).map(|i| format!("V{i}")).collect(), cards.iter().map(|&k| k as usize).collect(), cols)
            .unwrap()
    }

    /// Log-likelihood by explicit per-configuration recounting.
    fn brute_force_bic(ds: &CategoricalDataset, node: usize, parents: &[usize]) -> f64 {
        let n = ds.n_rows();
        let mut configs: Vec<Vec<u32>> = (0..n).map(|i| parents.iter().map(|&p| ds.column(p)[i]).collect()).collect();
        configs.sort();
        configs.dedup();
        let mut ll = 0.0;
        for cfg in &configs {
            let rows: Vec<usize> = (0..n).filter(|&i| parents.iter().zip(cfg).all(|(&p, &c)| ds.column(p)[i] == c)).collect();
            for k in 0..ds.cardinality(node) as u32 {
                let njk = rows.iter().filter(|&&i| ds.column(node)[i] == k).count();
                if njk > 0 {
                    ll += njk as f64 * (njk as f64 / rows.len() as f64).ln();
                }
            }
        }
        let q: usize = parents.iter().map(|&p| ds.cardinality(p)).product();
        ll - (n as f64).ln() / 2.0 * (q * (ds.cardinality(node) - 1)) as f64
    }

    #[test]
    fn balanced_binary_node() {
        let ds = CategoricalDataset::from_rows(&[0, 0, 0, 0, 1, 1, 1, 1].map(|c| vec![c])).unwrap();
        let s = bic_local(&ds, 0, &[]).unwrap().value;
        assert!((s - (-9.5 * 2f64.ln())).abs() < 1e-12);
        assert!((s - -6.584898).abs() < 1e-6);
    }

    #[test]
    fn constant_column_scores_zero() {
        let ds = CategoricalDataset::from_rows(&[vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(bic_local(&ds, 0, &[]).unwrap().value, 0.0);
    }

    #[test]
    fn own_parent_rejected() {
        let ds = CategoricalDataset::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(bic_local(&ds, 0, &[0]).is_err());
    }

    #[test]
    fn matches_recount_oracle() {
        for seed in 0..10 {
            let ds = random_ds(seed, 120, &[2, 3, 3]);
            for (node, parents) in [(0, vec![1, 2]), (1, vec![0]), (2, vec![]), (2, vec![0, 1])] {
                let got = bic_local(&ds, node, &parents).unwrap().value;
                assert!((got - brute_force_bic(&ds, node, &parents)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn total_is_sum_of_locals() {
        let ds = random_ds(3, 200, &[2, 2, 3]);
        let empty = PartiallyDirectedGraph::new(3);
        let want: f64 = (0..3).map(|v| bic_local(&ds, v, &[]).unwrap().value).sum();
        assert_eq!(total_bic(&ds, &empty).unwrap(), want);
        let one = CategoricalDataset::from_rows(&[vec![0], vec![1], vec![1]]).unwrap();
        assert_eq!(total_bic(&one, &PartiallyDirectedGraph::new(1)).unwrap(), bic_local(&one, 0, &[]).unwrap().value);
        let mut cyclic = PartiallyDirectedGraph::new(3);
        cyclic.add_undirected(0, 1).unwrap();
        assert!(total_bic(&ds, &cyclic).is_err());
        let cache = ScoreCache::new(&ds);
        let chain = PartiallyDirectedGraph::from_directed(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(cache.total(&chain).unwrap(), total_bic(&ds, &chain).unwrap());
        assert_eq!(cache.len(), 3);
    }

    #[test]
    fn chains_in_opposite_directions_score_equally() {
        for seed in 0..20 {
            let ds = random_ds(100 + seed, 300, &[2, 3, 2]);
            let fwd = PartiallyDirectedGraph::from_directed(3, &[(0, 1), (1, 2)]).unwrap();
            let back = PartiallyDirectedGraph::from_directed(3, &[(2, 1), (1, 0)]).unwrap();
            let (a, b) = (total_bic(&ds, &fwd).unwrap(), total_bic(&ds, &back).unwrap());
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn score_equivalence_across_four_node_classes() {
        let dags = all_dags(4);
        let keys: Vec<_> = dags.iter().map(|d| (d.skeleton_edges(), immoralities(d))).collect();
        for seed in 0..20 {
            let ds = random_ds(900 + seed, 150, &[2, 2, 2, 2]);
            let scores: Vec<f64> = dags.iter().map(|d| total_bic(&ds, d).unwrap()).collect();
            for i in 0..dags.len() {
                for j in i + 1..dags.len() {
                    if keys[i] == keys[j] {
                        assert!((scores[i] - scores[j]).abs() < 1e-9);
                    }
                }
            }
        }
    }
}
