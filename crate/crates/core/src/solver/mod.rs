//! Exact score-based structure search over a restricted candidate space.
//!
//! Every node picks exactly one parent set from its [`ScoreTable`] entry so as
//! to maximise the summed score. Acyclicity is enforced lazily: whenever the
//! optimum contains directed cycles, each cycle's node set `C` becomes a cut
//! requiring at least one member of `C` to take a parent set disjoint from
//! `C`, and the problem is solved again.

mod bnb;

use std::fmt::Write as _;

use rayon::prelude::*;

pub use bnb::solve_ip;

use crate::data::CategoricalDataset;
use crate::error::{arg, Error, Result};
use crate::graph::{enumerate_cycles, Digraph, PartiallyDirectedGraph};
use crate::stats::ScoreCache;

/// Default number of parent sets a node may have before table construction
/// refuses to enumerate them.
pub const DEFAULT_CANDIDATE_BUDGET: usize = 1 << 20;
/// Cycles turned into cuts per solve round.
pub const CUTS_PER_ROUND: usize = 100;
/// Solve rounds allowed in [`solve_to_acyclic`].
pub const DEFAULT_MAX_SOLVE_ROUNDS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Ascending node indices.
    pub parents: Vec<usize>,
    pub score: f64,
}

/// Scored parent-set candidates for every node. Each node's list starts with
/// the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    candidates: Vec<Vec<Candidate>>,
}

impl ScoreTable {
    /// Validates and wraps explicit candidate lists. The empty set is moved to
    /// the front of each list; it must be present.
    pub fn new(mut candidates: Vec<Vec<Candidate>>) -> Result<Self> {
        let n = candidates.len();
        for (v, list) in candidates.iter_mut().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for c in list.iter() {
                if !c.parents.windows(2).all(|w| w[0] < w[1]) || c.parents.iter().any(|&p| p >= n || p == v) {
                    return arg(format!("invalid parent set {:?} for node {v}", c.parents));
                }
                if !c.score.is_finite() {
                    return arg(format!("non-finite score for node {v}"));
                }
                if !seen.insert(c.parents.clone()) {
                    return arg(format!("duplicate parent set {:?} for node {v}", c.parents));
                }
            }
            let Some(pos) = list.iter().position(|c| c.parents.is_empty()) else {
                return arg(format!("node {v} has no empty parent set"));
            };
            let empty = list.remove(pos);
            list.insert(0, empty);
        }
        Ok(Self { candidates })
    }

    pub fn n(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self, v: usize) -> &[Candidate] {
        &self.candidates[v]
    }

    pub fn total_candidates(&self) -> usize {
        self.candidates.iter().map(Vec::len).sum()
    }

    /// Plain-text listing of the model, one candidate or cut per line.
    pub fn dump(&self, cuts: &CutPool, names: Option<&[String]>) -> String {
        let name = |v: usize| names.map_or_else(|| v.to_string(), |ns| ns[v].clone());
        let set = |xs: &[usize]| xs.iter().map(|&x| name(x)).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        for (v, list) in self.candidates.iter().enumerate() {
            for c in list {
                let _ = writeln!(s, "score {} {{{}}} {:.10}", name(v), set(&c.parents), c.score);
            }
        }
        for cut in cuts.iter() {
            let _ = writeln!(s, "cut {{{}}}", set(cut));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// Largest parent set considered. `None` enumerates every subset of the
    /// neighbourhood, subject to `budget`.
    pub max_set_size: Option<usize>,
    pub budget: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self { max_set_size: None, budget: DEFAULT_CANDIDATE_BUDGET }
    }
}

/// Scores every subset of each node's neighbours in `ug`, ordered by size and
/// then lexicographically.
pub fn build_score_table(ds: &CategoricalDataset, ug: &PartiallyDirectedGraph, opts: &TableOptions) -> Result<ScoreTable> {
    build_score_table_cached(&ScoreCache::new(ds), ug, opts)
}

/// Like [`build_score_table`], reusing and filling `cache`.
pub fn build_score_table_cached(cache: &ScoreCache, ug: &PartiallyDirectedGraph, opts: &TableOptions) -> Result<ScoreTable> {
    let ds = cache.dataset();
    if ug.n() != ds.n_vars() {
        return arg(format!("graph has {} nodes but dataset has {} variables", ug.n(), ds.n_vars()));
    }
    let sets: Vec<Vec<Vec<usize>>> = (0..ug.n())
        .map(|v| {
            let nb = ug.neighbors(v);
            let k = opts.max_set_size.unwrap_or(nb.len()).min(nb.len());
            let count = subset_count(nb.len(), k);
            if opts.max_set_size.is_none() && count > opts.budget as u128 {
                return Err(Error::Resource(format!(
                    "node `{}` has {} neighbours, {count} parent sets exceed the budget of {}",
                    ds.names()[v],
                    nb.len(),
                    opts.budget
                )));
            }
            Ok(subsets_by_size(&nb, k))
        })
        .collect::<Result<_>>()?;
    let candidates = sets
        .into_par_iter()
        .enumerate()
        .map(|(v, sets)| {
            sets.into_iter().map(|parents| Ok(Candidate { score: cache.score(v, &parents)?, parents })).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreTable { candidates })
}

fn subset_count(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 0..=k {
        total += c;
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    total
}

fn subsets_by_size(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=max {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i]).collect());
            let Some(i) = (0..size).rev().find(|&i| idx[i] < items.len() - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Cycle cuts collected so far, each an ascending node set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CutPool {
    cuts: Vec<Vec<usize>>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the node set of `cycle`; returns `false` if it is already pooled.
    pub fn add(&mut self, cycle: &[usize]) -> Result<bool> {
        let mut c = cycle.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.len() < 2 {
            return arg("a cut needs at least two nodes");
        }
        if self.cuts.contains(&c) {
            return Ok(false);
        }
        self.cuts.push(c);
        Ok(true)
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.cuts.iter().map(Vec::as_slice)
    }

    pub(crate) fn as_slice(&self) -> &[Vec<usize>] {
        &self.cuts
    }
}

/// One chosen candidate index per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub choice: Vec<usize>,
    /// Chosen scores summed in node order.
    pub objective: f64,
}

impl Assignment {
    pub fn parents<'t>(&self, table: &'t ScoreTable) -> Vec<&'t [usize]> {
        self.choice.iter().enumerate().map(|(v, &k)| table.candidates(v)[k].parents.as_slice()).collect()
    }

    /// Whether every cut has a member whose chosen set avoids the cut.
    pub fn satisfies(&self, table: &ScoreTable, cut: &[usize]) -> bool {
        cut.iter().any(|&i| table.candidates(i)[self.choice[i]].parents.iter().all(|p| cut.binary_search(p).is_err()))
    }
}

pub(crate) fn objective_of(table: &ScoreTable, choice: &[usize]) -> f64 {
    let mut s = 0.0;
    for (v, &k) in choice.iter().enumerate() {
        s += table.candidates(v)[k].score;
    }
    s
}

#[derive(Debug, Clone)]
pub struct AcyclicSolution {
    pub dag: PartiallyDirectedGraph,
    pub assignment: Assignment,
    /// Number of times the integer program was solved.
    pub rounds: usize,
    pub cuts: CutPool,
}

/// Solves to the best acyclic assignment, adding up to
/// [`CUTS_PER_ROUND`] cycle cuts per round.
pub fn solve_to_acyclic(table: &ScoreTable) -> Result<AcyclicSolution> {
    solve_to_acyclic_from(table, CutPool::new(), DEFAULT_MAX_SOLVE_ROUNDS)
}

/// Like [`solve_to_acyclic`], starting from an existing pool. Cuts stay valid
/// for any table over the same nodes, so a pool can be carried across
/// problems.
pub fn solve_to_acyclic_from(table: &ScoreTable, mut cuts: CutPool, max_rounds: usize) -> Result<AcyclicSolution> {
    let mut hint: Option<Vec<usize>> = None;
    for round in 1..=max_rounds {
        let a = bnb::solve_ip_from(table, &cuts, hint.as_deref())?;
        let parents = a.parents(table);
        let g = Digraph::from_parents(&parents)?;
        let cycles = enumerate_cycles(&g, CUTS_PER_ROUND);
        if cycles.is_empty() {
            let dag = PartiallyDirectedGraph::from_parents(&parents.iter().map(|p| p.to_vec()).collect::<Vec<_>>())?;
            return Ok(AcyclicSolution { dag, assignment: a, rounds: round, cuts });
        }
        let mut added = 0;
        for c in &cycles {
            added += cuts.add(c)? as usize;
        }
        if added == 0 {
            return Err(Error::Invariant("solution violates a pooled cut".into()));
        }
        hint = Some(a.choice);
    }
    Err(Error::Resource(format!("no acyclic solution after {max_rounds} solve rounds")))
}

#[cfg(test)]
mod tests;
