use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;

use super::{Algorithm, LearnConfig, LearnResult};
use crate::data::{contingency, CategoricalDataset};
use crate::emsg::{build_emsg, pairwise_tests, significance_filter};
use crate::error::{arg, Result};
use crate::graph::{consistent_extension, cpdag_of, min_d_separator, PartiallyDirectedGraph};
use crate::solver::{build_score_table_cached, solve_to_acyclic_from, CutPool, TableOptions, DEFAULT_MAX_SOLVE_ROUNDS};
use crate::stats::{chi_sq_test, ScoreCache};

/// Conditional tests already run, keyed by pair and conditioning set.
#[derive(Debug, Clone, Default)]
pub struct TestCache {
    seen: HashSet<(usize, usize, Vec<usize>)>,
}

impl TestCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PassOutcome {
    pub ug: PartiallyDirectedGraph,
    /// Pairs joined in this pass, ascending.
    pub added: Vec<(usize, usize)>,
    /// Tests actually run, excluding cached ones.
    pub tests: usize,
}

/// One triangulation pass.
///
/// Every pair `a < b` that is non-adjacent in `cpdag` but shares a neighbour
/// there, and is not yet joined in `ug`, is tested for dependence given a
/// minimum d-separating set in a fixed extension of `cpdag`. Pairs that no
/// set separates are skipped. A rejected independence (`p <= alpha`) joins
/// the pair in the returned skeleton. Pair and separator combinations seen
/// in `cache` are not tested again.
pub fn triangulation_pass(
    ds: &CategoricalDataset,
    cpdag: &PartiallyDirectedGraph,
    ug: &PartiallyDirectedGraph,
    cfg: &LearnConfig,
    cache: &mut TestCache,
) -> Result<PassOutcome> {
    cfg.validate()?;
    let n = ds.n_vars();
    if cpdag.n() != n || ug.n() != n {
        return arg("graphs and dataset disagree on the number of variables");
    }
    let ext = consistent_extension(cpdag)?;
    let mut jobs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if cpdag.adjacent(a, b) || ug.adjacent(a, b) {
                continue;
            }
            if !(0..n).any(|c| cpdag.adjacent(a, c) && cpdag.adjacent(b, c)) {
                continue;
            }
            let Some(z) = min_d_separator(&ext, a, b)? else {
                continue;
            };
            if cache.seen.insert((a, b, z.clone())) {
                jobs.push((a, b, z));
            }
        }
    }
    let dependent: Vec<bool> =
        jobs.par_iter().map(|(a, b, z)| Ok(chi_sq_test(&contingency(ds, *a, *b, z)?).p_value <= cfg.alpha)).collect::<Result<_>>()?;
    let mut out = ug.clone();
    let mut added = Vec::new();
    for ((a, b, _), dep) in jobs.iter().zip(&dependent) {
        if *dep {
            out.add_undirected(*a, *b)?;
            added.push((*a, *b));
        }
    }
    Ok(PassOutcome { ug: out, added, tests: jobs.len() })
}

/// Learns a CPDAG with MEC-IP.
///
/// Pairwise tests, the extended maximal spanning graph and the significance
/// filter give an initial skeleton; the exact solver picks the best DAG
/// whose parent sets lie within it. Triangulation passes then grow the
/// skeleton and the solver reruns until a pass adds nothing or
/// `cfg.max_rounds` passes have run.
pub fn learn_mecip(ds: &CategoricalDataset, cfg: &LearnConfig) -> Result<LearnResult> {
    cfg.validate()?;
    if ds.n_vars() < 2 {
        return arg("structure learning needs at least two variables");
    }
    let start = Instant::now();
    let mut timings: Vec<(&'static str, f64)> = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, f64)>| {
        timings.push((name, clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };

    let weights = pairwise_tests(ds)?;
    lap("pairwise_tests", &mut timings);
    let emsg = build_emsg(ds.n_vars(), &weights)?;
    let mut ug = significance_filter(&emsg, &weights, cfg.alpha)?;
    lap("emsg", &mut timings);

    let cache = ScoreCache::new(ds);
    let opts = TableOptions { max_set_size: cfg.max_parents, budget: cfg.candidate_budget };
    let mut solve_time = 0.0;
    let mut solve = |ug: &PartiallyDirectedGraph, cuts: CutPool| {
        let t = Instant::now();
        let table = build_score_table_cached(&cache, ug, &opts)?;
        let sol = solve_to_acyclic_from(&table, cuts, DEFAULT_MAX_SOLVE_ROUNDS)?;
        solve_time += t.elapsed().as_secs_f64();
        Ok::<_, crate::Error>(sol)
    };
    let mut sol = solve(&ug, CutPool::new())?;
    let mut cpdag = cpdag_of(&sol.dag)?;
    let mut tri_time = 0.0;
    let mut tests = TestCache::new();
    let mut edges_added = Vec::new();
    for _ in 0..cfg.max_rounds {
        let t = Instant::now();
        let pass = triangulation_pass(ds, &cpdag, &ug, cfg, &mut tests)?;
        tri_time += t.elapsed().as_secs_f64();
        edges_added.push(pass.added.len());
        if pass.added.is_empty() {
            break;
        }
        ug = pass.ug;
        sol = solve(&ug, sol.cuts)?;
        cpdag = cpdag_of(&sol.dag)?;
    }
    timings.push(("solve", solve_time));
    timings.push(("triangulation", tri_time));
    timings.push(("total", start.elapsed().as_secs_f64()));
    Ok(LearnResult {
        algorithm: Algorithm::Mecip,
        cpdag,
        dag: sol.dag,
        bic: sol.assignment.objective,
        rounds: edges_added.len(),
        edges_added,
        timings,
    })
}
