//! Discrete Bayesian networks: representation, BIF input/output, ancestral
//! sampling and random synthetic networks.

mod bif;
mod sample;
mod synth;

pub use bif::{parse_bif, read_bif, to_bif_string, write_bif};
pub use sample::forward_sample;
pub use synth::{gen_random_net, SyntheticSpec};

use crate::error::{arg, Error, Result};
use crate::graph::{find_cycle, Digraph, PartiallyDirectedGraph};

/// Tolerance on CPT row sums for a constructed network.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// A DAG over categorical variables with one conditional probability table
/// per node.
///
/// `cpts[v]` is row-major with one row per parent configuration and one
/// column per state of `v`. Parent configurations are enumerated in
/// mixed-radix order over `parents[v]` as declared, first parent most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBayesNet {
    names: Vec<String>,
    states: Vec<Vec<String>>,
    parents: Vec<Vec<usize>>,
    cpts: Vec<Vec<f64>>,
}

impl DiscreteBayesNet {
    pub fn new(names: Vec<String>, states: Vec<Vec<String>>, parents: Vec<Vec<usize>>, cpts: Vec<Vec<f64>>) -> Result<Self> {
        let n = names.len();
        if states.len() != n || parents.len() != n || cpts.len() != n {
            return arg("names, states, parents and cpts must have equal length");
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return arg(format!("variable names must be unique and non-empty (`{name}`)"));
            }
        }
        for v in 0..n {
            if states[v].is_empty() {
                return arg(format!("variable `{}` has no states", names[v]));
            }
            let mut ps = parents[v].clone();
            ps.sort_unstable();
            ps.dedup();
            if ps.len() != parents[v].len() || ps.iter().any(|&p| p >= n || p == v) {
                return arg(format!("invalid parent list for `{}`", names[v]));
            }
            let q: usize = parents[v].iter().map(|&p| states[p].len()).product();
            let r = states[v].len();
            if cpts[v].len() != q * r {
                return arg(format!("CPT of `{}` has {} entries, expected {}", names[v], cpts[v].len(), q * r));
            }
            for row in cpts[v].chunks(r) {
                if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                    return arg(format!("CPT of `{}` has a probability outside [0, 1]", names[v]));
                }
                let s: f64 = row.iter().sum();
                if (s - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return arg(format!("CPT row of `{}` sums to {s}", names[v]));
                }
            }
        }
        if let Some(cycle) = find_cycle(&Digraph::from_parents(&parents)?) {
            let path: Vec<&str> = cycle.iter().map(|&v| names[v].as_str()).collect();
            return Err(Error::Structure(format!("network structure contains the cycle {}", path.join(" -> "))));
        }
        Ok(Self { names, states, parents, cpts })
    }

    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn states(&self, v: usize) -> &[String] {
        &self.states[v]
    }

    pub fn cardinality(&self, v: usize) -> usize {
        self.states[v].len()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.states.iter().map(Vec::len).collect()
    }

    /// Parents of `v` in declaration order.
    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn cpt(&self, v: usize) -> &[f64] {
        &self.cpts[v]
    }

    /// CPT row of `v` for parent configuration index `config`.
    pub fn cpt_row(&self, v: usize, config: usize) -> &[f64] {
        let r = self.cardinality(v);
        &self.cpts[v][config * r..(config + 1) * r]
    }

    pub fn n_edges(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    pub fn max_in_degree(&self) -> usize {
        self.parents.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn dag(&self) -> PartiallyDirectedGraph {
        let mut g = PartiallyDirectedGraph::new(self.n_nodes());
        for (v, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                g.orient(p, v);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn validates_tables() {
        let ok = DiscreteBayesNet::new(
            s(&["A", "B"]),
            vec![s(&["0", "1"]), s(&["0", "1"])],
            vec![vec![], vec![0]],
            vec![vec![0.3, 0.7], vec![0.9, 0.1, 0.2, 0.8]],
        );
        let net = ok.unwrap();
        assert_eq!(net.n_edges(), 1);
        assert_eq!(net.cpt_row(1, 1), &[0.2, 0.8]);

        let short = DiscreteBayesNet::new(
            s(&["A", "B"]),
            vec![s(&["0", "1"]), s(&["0", "1"])],
            vec![vec![], vec![0]],
            vec![vec![0.3, 0.7], vec![0.9, 0.1]],
        );
        assert!(short.is_err());
        let bad_sum = DiscreteBayesNet::new(s(&["A"]), vec![s(&["0", "1"])], vec![vec![]], vec![vec![0.3, 0.6]]);
        assert!(bad_sum.is_err());
        let cyclic = DiscreteBayesNet::new(s(&["A", "B"]), vec![s(&["0"]), s(&["0"])], vec![vec![1], vec![0]], vec![vec![1.0], vec![1.0]]);
        assert!(matches!(cyclic, Err(Error::Structure(_))));
    }
}
