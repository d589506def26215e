//! Immoralities, Meek's orientation rules, DAG to CPDAG conversion and
//! consistent extensions.

use super::dsep::require_dag;
use super::PartiallyDirectedGraph;
use crate::error::{Error, Result};

/// `(u, w, v)` with `u -> v <- w`, `u < w`, and `u`, `w` non-adjacent.
pub fn immoralities(g: &PartiallyDirectedGraph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        let ps = g.parents(v);
        for (i, &u) in ps.iter().enumerate() {
            for &w in &ps[i + 1..] {
                if !g.adjacent(u, w) {
                    out.push((u, w, v));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The four orientation rules, each orienting an undirected edge `a -- b`
/// into `a -> b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeekRule {
    /// `c -> a -- b`, `c` and `b` non-adjacent.
    R1,
    /// `a -> c -> b`.
    R2,
    /// `a -- c -> b`, `a -- d -> b`, `c` and `d` non-adjacent.
    R3,
    /// `a -- c -> d -> b`, `c` and `b` non-adjacent, `a` adjacent to `d`.
    R4,
}

impl MeekRule {
    pub const ALL: [MeekRule; 4] = [MeekRule::R1, MeekRule::R2, MeekRule::R3, MeekRule::R4];

    fn fires(self, g: &PartiallyDirectedGraph, a: usize, b: usize) -> bool {
        let n = g.n();
        match self {
            MeekRule::R1 => (0..n).any(|c| g.has_directed(c, a) && c != b && !g.adjacent(c, b)),
            MeekRule::R2 => (0..n).any(|c| g.has_directed(a, c) && g.has_directed(c, b)),
            MeekRule::R3 => {
                let mids: Vec<usize> = (0..n).filter(|&c| g.has_undirected(a, c) && g.has_directed(c, b)).collect();
                mids.iter().enumerate().any(|(i, &c)| mids[i + 1..].iter().any(|&d| !g.adjacent(c, d)))
            }
            MeekRule::R4 => (0..n).any(|c| {
                g.has_undirected(a, c)
                    && c != b
                    && !g.adjacent(c, b)
                    && (0..n).any(|d| g.has_directed(c, d) && g.has_directed(d, b) && g.adjacent(a, d))
            }),
        }
    }
}

/// Closes `g` under Meek's rules R1 to R4.
///
/// Only undirected edges are ever oriented; no edge is removed or flipped.
/// Fails if the directed part of the input already contains a cycle.
pub fn apply_meek(g: &PartiallyDirectedGraph) -> Result<PartiallyDirectedGraph> {
    apply_meek_with_order(g, &MeekRule::ALL)
}

/// [`apply_meek`] with the rules tried in `order` on each sweep.
pub fn apply_meek_with_order(g: &PartiallyDirectedGraph, order: &[MeekRule]) -> Result<PartiallyDirectedGraph> {
    meek_sweeps(g, order, false)
}

fn meek_sweeps(g: &PartiallyDirectedGraph, order: &[MeekRule], reverse_edges: bool) -> Result<PartiallyDirectedGraph> {
    if g.topological_order().is_none() {
        return Err(Error::Structure("directed part of the graph contains a cycle".into()));
    }
    let mut g = g.clone();
    loop {
        let mut changed = false;
        for &rule in order {
            let mut edges = g.undirected_edges();
            if reverse_edges {
                edges.reverse();
            }
            for (u, v) in edges {
                if !g.has_undirected(u, v) {
                    continue;
                }
                if rule.fires(&g, u, v) {
                    g.orient(u, v);
                    changed = true;
                } else if rule.fires(&g, v, u) {
                    g.orient(v, u);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(g);
        }
    }
}

/// The CPDAG of the Markov equivalence class containing the DAG `g`.
///
/// Keeps the skeleton, orients immoralities as in `g`, and closes the result
/// under Meek's rules; everything still unoriented stays undirected.
pub fn cpdag_of(g: &PartiallyDirectedGraph) -> Result<PartiallyDirectedGraph> {
    require_dag(g)?;
    let mut out = g.skeleton();
    for (u, w, v) in immoralities(g) {
        out.orient(u, v);
        out.orient(w, v);
    }
    apply_meek(&out)
}

/// A DAG in the equivalence class described by the CPDAG `g`.
///
/// Repeatedly orients the lexicographically first undirected edge `u -- v`
/// as `u -> v` and re-closes under Meek's rules. Fails if the result is not
/// a DAG whose CPDAG is `g`, i.e. if `g` is not a valid CPDAG.
pub fn consistent_extension(g: &PartiallyDirectedGraph) -> Result<PartiallyDirectedGraph> {
    let mut out = apply_meek(g)?;
    while let Some(&(u, v)) = out.undirected_edges().first() {
        out.orient(u, v);
        out = apply_meek(&out)?;
    }
    if out.topological_order().is_none() {
        return Err(Error::Structure("graph admits no acyclic extension".into()));
    }
    if cpdag_of(&out)? != *g {
        return Err(Error::Structure("graph is not a CPDAG: extension changes its equivalence class".into()));
    }
    Ok(out)
}
