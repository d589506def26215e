//! Initial undirected skeleton: pairwise chi-square tests, the extended
//! maximal spanning graph, and a significance filter.

use rayon::prelude::*;

use crate::data::{contingency, CategoricalDataset};
use crate::error::{arg, Result};
use crate::graph::PartiallyDirectedGraph;
use crate::stats::chi_sq_test;

/// Marginal dependence between `u` and `v` (`u < v`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeight {
    pub u: usize,
    pub v: usize,
    /// The chi-square statistic.
    pub weight: f64,
    pub p_value: f64,
}

/// One marginal chi-square test per unordered pair, in lexicographic pair
/// order.
pub fn pairwise_tests(ds: &CategoricalDataset) -> Result<Vec<EdgeWeight>> {
    let n = ds.n_vars();
    if n < 2 {
        return arg("pairwise tests need at least two variables");
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs
        .into_par_iter()
        .map(|(u, v)| {
            let t = chi_sq_test(&contingency(ds, u, v, &[])?);
            Ok(EdgeWeight { u, v, weight: t.statistic, p_value: t.p_value })
        })
        .collect()
}

/// Dense symmetric lookup of `weights`; fails unless every pair over `n`
/// nodes appears exactly once.
fn weight_matrix(n: usize, weights: &[EdgeWeight]) -> Result<Vec<Option<EdgeWeight>>> {
    let mut m = vec![None; n * n];
    for w in weights {
        if w.u >= n || w.v >= n || w.u == w.v {
            return arg(format!("weight for invalid pair ({}, {})", w.u, w.v));
        }
        if w.weight.is_nan() || w.weight < 0.0 || !(0.0..=1.0).contains(&w.p_value) {
            return arg(format!("weight for ({}, {}) out of range", w.u, w.v));
        }
        if m[w.u * n + w.v].is_some() {
            return arg(format!("duplicate weight for pair ({}, {})", w.u, w.v));
        }
        m[w.u * n + w.v] = Some(*w);
        m[w.v * n + w.u] = Some(*w);
    }
    Ok(m)
}

/// The extended maximal spanning graph over `n` nodes.
///
/// Starting from the complete graph, edges are visited once each in
/// ascending weight order (ties by pair). Edge `{a, b}` is removed when some
/// `c` adjacent to both has `w(a,c) > w(a,b)` and `w(b,c) > w(a,b)`.
pub fn build_emsg(n: usize, weights: &[EdgeWeight]) -> Result<PartiallyDirectedGraph> {
    let m = weight_matrix(n, weights)?;
    if weights.len() != n * n.saturating_sub(1) / 2 {
        return arg(format!("expected weights for all {} pairs, got {}", n * n.saturating_sub(1) / 2, weights.len()));
    }
    let w = |a: usize, b: usize| m[a * n + b].expect("complete weights").weight;
    let mut order: Vec<&EdgeWeight> = weights.iter().collect();
    order.sort_by(|x, y| x.weight.total_cmp(&y.weight).then((x.u.min(x.v), x.u.max(x.v)).cmp(&(y.u.min(y.v), y.u.max(y.v)))));
    let mut g = PartiallyDirectedGraph::complete(n);
    for e in order {
        let (a, b, wab) = (e.u, e.v, e.weight);
        let dominated = (0..n).any(|c| c != a && c != b && g.adjacent(a, c) && g.adjacent(b, c) && w(a, c) > wab && w(b, c) > wab);
        if dominated {
            g.remove_edge(a, b);
        }
    }
    Ok(g)
}

/// Keeps the edges of `g` whose test has `p_value <= alpha`.
pub fn significance_filter(g: &PartiallyDirectedGraph, weights: &[EdgeWeight], alpha: f64) -> Result<PartiallyDirectedGraph> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return arg(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let n = g.n();
    let m = weight_matrix(n, weights)?;
    let mut out = g.clone();
    for (u, v) in g.skeleton_edges() {
        match m[u * n + v] {
            Some(w) if w.p_value <= alpha => {}
            Some(_) => out.remove_edge(u, v),
            None => return arg(format!("no weight for edge ({u}, {v})")),
        }
    }
    Ok(out)
}
