use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use rand_distr::{Distribution, Gamma};

use super::DiscreteBayesNet;
use crate::error::{arg, Result};
use crate::rng;

/// Structural parameters of a random network.
///
/// CPT rows are drawn from a symmetric Dirichlet with concentration
/// `0.5 * strength`: strength 1 gives peaked rows (strong dependence),
/// strength 5 nearly flat ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n_nodes: usize,
    pub max_in_degree: usize,
    pub max_states: usize,
    pub strength: u32,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n_nodes: usize, max_in_degree: usize, max_states: usize, strength: u32, seed: u64) -> Self {
        Self { n_nodes, max_in_degree, max_states, strength, seed }
    }

    pub fn dirichlet_alpha(&self) -> f64 {
        0.5 * self.strength as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return arg("synthetic network needs at least one node");
        }
        if self.max_in_degree == 0 {
            return arg("maximum in-degree must be positive");
        }
        if self.max_states < 2 {
            return arg("maximum state count must be at least 2");
        }
        if self.strength == 0 {
            return arg("strength must be positive");
        }
        Ok(())
    }

    /// `n,d,s,w` as used in benchmark specs.
    pub fn tuple_label(&self) -> String {
        format!("{},{},{},{}", self.n_nodes, self.max_in_degree, self.max_states, self.strength)
    }
}

/// A random network following `spec`; the same spec always yields the same
/// network.
///
/// Nodes are named `V0, V1, ...` and states `s0, s1, ...`. Under a random
/// topological order each node takes an in-degree uniform in
/// `0..=min(max_in_degree, #predecessors)` and that many distinct parents
/// uniformly among its predecessors.
pub fn gen_random_net(spec: &SyntheticSpec) -> Result<DiscreteBayesNet> {
    spec.validate()?;
    let n = spec.n_nodes;
    let mut r = rng::seeded(spec.seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let cards: Vec<usize> = (0..n).map(|_| r.random_range(2..=spec.max_states)).collect();
    let mut parents = vec![Vec::new(); n];
    for (pos, &v) in order.iter().enumerate() {
        let k = r.random_range(0..=spec.max_in_degree).min(pos);
        let mut ps: Vec<usize> = index::sample(&mut r, pos, k).into_iter().map(|i| order[i]).collect();
        ps.sort_unstable();
        parents[v] = ps;
    }
    let gamma = Gamma::new(spec.dirichlet_alpha(), 1.0).expect("positive shape");
    let mut cpts = Vec::with_capacity(n);
    for v in 0..n {
        let q: usize = parents[v].iter().map(|&p| cards[p]).product();
        let mut table = Vec::with_capacity(q * cards[v]);
        for _ in 0..q {
            let row = loop {
                let g: Vec<f64> = (0..cards[v]).map(|_| gamma.sample(&mut r)).collect();
                let s: f64 = g.iter().sum();
                if s > 0.0 && s.is_finite() {
                    break g.into_iter().map(|x| x / s).collect::<Vec<_>>();
                }
            };
            table.extend(row);
        }
        cpts.push(table);
    }
    let names = (0..n).map(|v| format!("V{v}")).collect();
    let states = cards.iter().map(|&k| (0..k).map(|s| format!("s{s}")).collect()).collect();
    DiscreteBayesNet::new(names, states, parents, cpts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{parse_bif, to_bif_string};

    #[test]
    fn single_node() {
        let net = gen_random_net(&SyntheticSpec::new(1, 2, 2, 1, 9)).unwrap();
        assert_eq!(net.n_nodes(), 1);
        assert_eq!(net.n_edges(), 0);
        assert_eq!(net.cardinality(0), 2);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(gen_random_net(&SyntheticSpec::new(0, 2, 2, 1, 0)).is_err());
        assert!(gen_random_net(&SyntheticSpec::new(5, 2, 1, 1, 0)).is_err());
        assert!(gen_random_net(&SyntheticSpec::new(5, 2, 2, 0, 0)).is_err());
    }

    #[test]
    fn respects_bounds() {
        for seed in 0..100 {
            let net = gen_random_net(&SyntheticSpec::new(20, 2, 2, 1, seed)).unwrap();
            assert!(net.max_in_degree() <= 2);
            assert!(net.cardinalities().iter().all(|&k| k == 2));
            let net = gen_random_net(&SyntheticSpec::new(60, 3, 4, 5, seed)).unwrap();
            assert!(net.dag().is_dag());
            assert!(net.max_in_degree() <= 3);
            assert!(net.cardinalities().iter().all(|&k| (2..=4).contains(&k)));
        }
    }

    #[test]
    fn acyclic_for_many_seeds() {
        for seed in 0..1000 {
            let net = gen_random_net(&SyntheticSpec::new(12, 3, 3, 2, seed)).unwrap();
            assert!(net.dag().is_dag());
        }
    }

    #[test]
    fn deterministic_and_round_trips() {
        let spec = SyntheticSpec::new(20, 2, 2, 1, 42);
        let net = gen_random_net(&spec).unwrap();
        assert_eq!(net, gen_random_net(&spec).unwrap());
        let back = parse_bif(&to_bif_string(&net, None).unwrap()).unwrap();
        assert_eq!(back.names(), net.names());
        for v in 0..net.n_nodes() {
            assert_eq!(back.parents(v), net.parents(v));
            for (a, b) in back.cpt(v).iter().zip(net.cpt(v)) {
                assert!((a - b).abs() <= 1e-9);
            }
        }
    }
}
