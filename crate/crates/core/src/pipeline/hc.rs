use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rand::Rng as _;

use super::{Algorithm, LearnConfig, LearnResult};
use crate::data::CategoricalDataset;
use crate::error::{arg, Result};
use crate::graph::{cpdag_of, PartiallyDirectedGraph};
use crate::rng;
use crate::stats::ScoreCache;

/// Structures remembered by the tabu list.
pub const HC_TABU_LENGTH: usize = 100;
/// Consecutive moves without a new best score before the search stops.
pub const HC_PATIENCE: usize = 15;
const MAX_MOVES: usize = 100_000;

#[derive(Debug, Clone, Copy)]
enum Move {
    Add(usize, usize),
    Delete(usize, usize),
    Reverse(usize, usize),
}

struct State {
    parents: Vec<Vec<usize>>,
    local: Vec<f64>,
}

impl State {
    fn hash_with(&self, m: Move) -> u64 {
        let mut ps = self.parents.clone();
        apply(&mut ps, m);
        structure_hash(&ps)
    }

    fn total(&self) -> f64 {
        self.local.iter().sum()
    }
}

fn structure_hash(parents: &[Vec<usize>]) -> u64 {
    let mut h = DefaultHasher::new();
    parents.hash(&mut h);
    h.finish()
}

fn insert_sorted(xs: &mut Vec<usize>, x: usize) {
    if let Err(pos) = xs.binary_search(&x) {
        xs.insert(pos, x);
    }
}

fn remove(xs: &mut Vec<usize>, x: usize) {
    xs.retain(|&y| y != x);
}

fn apply(parents: &mut [Vec<usize>], m: Move) {
    match m {
        Move::Add(u, v) => insert_sorted(&mut parents[v], u),
        Move::Delete(u, v) => remove(&mut parents[v], u),
        Move::Reverse(u, v) => {
            remove(&mut parents[v], u);
            insert_sorted(&mut parents[u], v);
        }
    }
}

/// Whether a directed path leads from `from` to `to`, optionally ignoring the
/// edge `skip`.
fn reaches(parents: &[Vec<usize>], from: usize, to: usize, skip: Option<(usize, usize)>) -> bool {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    for (v, ps) in parents.iter().enumerate() {
        for &p in ps {
            if skip != Some((p, v)) {
                children[p].push(v);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        for &c in &children[x] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    false
}

fn reach_matrix(parents: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    for (v, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(v);
        }
    }
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for &c in &children[x] {
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Greedy hill climbing over DAGs with a tabu list.
///
/// From the empty graph, every step takes the best single-edge addition,
/// deletion or reversal whose resulting structure is not among the last
/// [`HC_TABU_LENGTH`] visited, even if it lowers the BIC. The search stops
/// after [`HC_PATIENCE`] steps without a new best score, or when no move is
/// allowed; the best DAG seen is returned. `cfg.seed` only breaks ties between
/// moves with exactly equal score change.
pub fn learn_hc_tabu(ds: &CategoricalDataset, cfg: &LearnConfig) -> Result<LearnResult> {
    cfg.validate()?;
    let n = ds.n_vars();
    if n < 2 {
        return arg("structure learning needs at least two variables");
    }
    let start = Instant::now();
    let cache = ScoreCache::new(ds);
    let mut r = rng::seeded(cfg.seed);
    let mut s = State { parents: vec![Vec::new(); n], local: Vec::with_capacity(n) };
    for v in 0..n {
        s.local.push(cache.score(v, &[])?);
    }
    let mut tabu: VecDeque<u64> = VecDeque::from([structure_hash(&s.parents)]);
    let mut best_parents = s.parents.clone();
    let mut best = s.total();
    let mut stale = 0;
    let mut moves = 0;
    let score_with = |v: usize, ps: &[usize]| cache.score(v, ps);

    while stale < HC_PATIENCE && moves < MAX_MOVES {
        let reach = reach_matrix(&s.parents);
        let mut options: Vec<(f64, Move)> = Vec::new();
        let mut top = f64::NEG_INFINITY;
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let m = if s.parents[v].contains(&u) {
                    let room = cfg.max_parents.is_none_or(|k| s.parents[u].len() < k);
                    if room && !reaches(&s.parents, u, v, Some((u, v))) {
                        let rev = Move::Reverse(u, v);
                        if !tabu.contains(&s.hash_with(rev)) {
                            let mut pv = s.parents[v].clone();
                            remove(&mut pv, u);
                            let mut pu = s.parents[u].clone();
                            insert_sorted(&mut pu, v);
                            let d = score_with(v, &pv)? - s.local[v] + score_with(u, &pu)? - s.local[u];
                            consider(&mut options, &mut top, d, rev);
                        }
                    }
                    Some(Move::Delete(u, v))
                } else if s.parents[u].contains(&v) || reach[v][u] || cfg.max_parents.is_some_and(|k| s.parents[v].len() >= k) {
                    None
                } else {
                    Some(Move::Add(u, v))
                };
                let Some(m) = m else { continue };
                if tabu.contains(&s.hash_with(m)) {
                    continue;
                }
                let mut pv = s.parents[v].clone();
                match m {
                    Move::Add(..) => insert_sorted(&mut pv, u),
                    _ => remove(&mut pv, u),
                }
                let d = score_with(v, &pv)? - s.local[v];
                consider(&mut options, &mut top, d, m);
            }
        }
        if options.is_empty() {
            break;
        }
        let (_, m) = options[if options.len() == 1 { 0 } else { r.random_range(0..options.len()) }];
        apply(&mut s.parents, m);
        match m {
            Move::Add(_, v) | Move::Delete(_, v) => s.local[v] = cache.score(v, &s.parents[v])?,
            Move::Reverse(u, v) => {
                s.local[v] = cache.score(v, &s.parents[v])?;
                s.local[u] = cache.score(u, &s.parents[u])?;
            }
        }
        tabu.push_back(structure_hash(&s.parents));
        if tabu.len() > HC_TABU_LENGTH {
            tabu.pop_front();
        }
        moves += 1;
        let total = s.total();
        if total > best + 1e-9 * best.abs().max(1.0) {
            best = total;
            best_parents = s.parents.clone();
            stale = 0;
        } else {
            stale += 1;
        }
    }
    let dag = PartiallyDirectedGraph::from_parents(&best_parents)?;
    let bic = cache.total(&dag)?;
    let cpdag = cpdag_of(&dag)?;
    let total = start.elapsed().as_secs_f64();
    Ok(LearnResult {
        algorithm: Algorithm::Hc,
        cpdag,
        dag,
        bic,
        rounds: moves,
        edges_added: Vec::new(),
        timings: vec![("search", total), ("total", total)],
    })
}

fn consider(options: &mut Vec<(f64, Move)>, top: &mut f64, d: f64, m: Move) {
    if d > *top {
        *top = d;
        options.clear();
    }
    if d == *top {
        options.push((d, m));
    }
}
