use rand::Rng as _;

use super::DiscreteBayesNet;
use crate::data::CategoricalDataset;
use crate::error::{arg, Error, Result};
use crate::rng;

/// Draws `n` rows by ancestral sampling, visiting nodes in topological order.
///
/// Column labels are the network's state names.
pub fn forward_sample(net: &DiscreteBayesNet, n: usize, seed: u64) -> Result<CategoricalDataset> {
    if n == 0 {
        return arg("sample size must be at least 1");
    }
    let order = net.dag().topological_order().ok_or_else(|| Error::Invariant("network DAG is cyclic".into()))?;
    let nv = net.n_nodes();
    let mut columns = vec![vec![0u32; n]; nv];
    let mut r = rng::seeded(seed);
    let mut row = vec![0u32; nv];
    for i in 0..n {
        for &v in &order {
            let mut config = 0;
            for &p in net.parents(v) {
                config = config * net.cardinality(p) + row[p] as usize;
            }
            row[v] = draw(net.cpt_row(v, config), r.random::<f64>());
            columns[v][i] = row[v];
        }
    }
    let labels = (0..nv).map(|v| net.states(v).to_vec()).collect();
    CategoricalDataset::with_labels(net.names().to_vec(), net.cardinalities(), columns, labels)
}

/// Inverse-CDF draw; rounding leftovers fall on the last state with mass.
fn draw(probs: &[f64], u: f64) -> u32 {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = k;
            if u < acc {
                return k as u32;
            }
        }
    }
    last as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn deterministic_cpts_force_rows() {
        let net = DiscreteBayesNet::new(
            names(&["A", "B"]),
            vec![names(&["0", "1"]), names(&["0", "1"])],
            vec![vec![], vec![0]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0, 0.0, 1.0]],
        )
        .unwrap();
        let ds = forward_sample(&net, 200, 3).unwrap();
        assert!((0..200).all(|i| ds.row(i) == vec![1, 1]));
        assert!(forward_sample(&net, 0, 3).is_err());
    }

    #[test]
    fn frequencies_and_determinism() {
        let net = DiscreteBayesNet::new(names(&["A"]), vec![names(&["0", "1"])], vec![vec![]], vec![vec![0.5, 0.5]]).unwrap();
        let ds = forward_sample(&net, 100_000, 11).unwrap();
        let ones = ds.column(0).iter().filter(|&&c| c == 1).count() as f64 / 1e5;
        assert!((ones - 0.5).abs() < 0.02);
        let small = forward_sample(&net, 10_000, 5).unwrap();
        let ones = small.column(0).iter().filter(|&&c| c == 1).count() as f64 / 1e4;
        assert!((ones - 0.5).abs() < 0.02);
        assert_eq!(small, forward_sample(&net, 10_000, 5).unwrap());
    }

    #[test]
    fn draw_skips_zero_mass() {
        assert_eq!(draw(&[0.0, 1.0, 0.0], 0.9999999), 1);
        assert_eq!(draw(&[0.5, 0.5, 0.0], 1.0), 1);
    }
}
