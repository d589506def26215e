//! Exact solution of the cut-constrained parent-set choice problem.
//!
//! Nodes that share cuts form independent components, each solved by
//! depth-first branch and bound over Pareto-reduced candidate lists. Two
//! bounds are combined. One adds each open node's best score and subtracts a
//! greedy packing of node-disjoint unsatisfied cuts, each charged the
//! cheapest loss any of its open members incurs by switching to a set that
//! avoids it. The other relaxes the unsatisfied cuts with multipliers tuned
//! by subgradient steps at the root and refined at every search node.
//!
//! The root tuning also repairs each relaxed solution into a feasible one,
//! which seeds the incumbent, and drops options whose relaxed bound cannot
//! reach it.
//!
//! Summation order changes the last bits of a total, so the search keeps
//! every assignment within a small relative tolerance of its optimum and
//! picks among them the one whose node-ordered sum is largest, then the one
//! with the lexicographically smallest choice vector.

use rayon::prelude::*;

use super::{objective_of, Assignment, CutPool, ScoreTable};
use crate::error::{arg, Error, Result};

const TIE_TOLERANCE: f64 = 1e-10;
const MAX_TIES_PER_COMPONENT: usize = 256;
const MAX_TIE_COMBINATIONS: usize = 4096;
const SUBGRADIENT_STEPS: usize = 3000;
const NODE_STEPS: usize = 8;

/// The best assignment satisfying every cut in `cuts`.
pub fn solve_ip(table: &ScoreTable, cuts: &CutPool) -> Result<Assignment> {
    solve_ip_from(table, cuts, None)
}

/// Like [`solve_ip`], with a candidate choice per node (possibly violating
/// cuts) used to seed the search with a feasible assignment.
pub(crate) fn solve_ip_from(table: &ScoreTable, cuts: &CutPool, hint: Option<&[usize]>) -> Result<Assignment> {
    let n = table.n();
    let cuts = cuts.as_slice();
    if cuts.iter().flatten().any(|&v| v >= n) {
        return arg("cut refers to a node outside the table");
    }
    // A cut is vacuous if some member has no candidate touching it.
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|v| {
            let mut m = vec![false; n];
            for c in table.candidates(v) {
                for &p in &c.parents {
                    m[p] = true;
                }
            }
            m
        })
        .collect();
    let active: Vec<&[usize]> = cuts.iter().filter(|c| c.iter().all(|&i| c.iter().any(|&j| reach[i][j]))).map(Vec::as_slice).collect();

    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let next = uf[y];
            uf[y] = r;
            y = next;
        }
        r
    }
    let mut in_cut = vec![false; n];
    for c in &active {
        for &v in c.iter() {
            in_cut[v] = true;
            let (a, b) = (find(&mut uf, c[0]), find(&mut uf, v));
            uf[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in (0..n).filter(|&v| in_cut[v]) {
        let r = find(&mut uf, v);
        groups.entry(r).or_default().push(v);
    }
    let components: Vec<Component> = groups
        .into_values()
        .map(|nodes| {
            let local: Vec<&[usize]> = active.iter().copied().filter(|c| nodes.binary_search(&c[0]).is_ok()).collect();
            Component::new(table, nodes, &local, hint)
        })
        .collect();
    let ties: Vec<Vec<Vec<usize>>> = components.par_iter().map(|c| c.solve()).collect::<Result<_>>()?;

    let mut base: Vec<usize> = (0..n).map(|v| best_free(table, v)).collect();
    let combos: usize = ties.iter().map(Vec::len).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX);
    if combos <= MAX_TIE_COMBINATIONS {
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut idx = vec![0usize; ties.len()];
        loop {
            let mut choice = base.clone();
            for (c, comp) in components.iter().enumerate() {
                for (&v, &k) in comp.nodes.iter().zip(&ties[c][idx[c]]) {
                    choice[v] = k;
                }
            }
            let value = objective_of(table, &choice);
            if best.as_ref().is_none_or(|(bv, bc)| value > *bv || (value == *bv && choice < *bc)) {
                best = Some((value, choice));
            }
            let Some(pos) = (0..idx.len()).rev().find(|&i| idx[i] + 1 < ties[i].len()) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|x| *x = 0);
        }
        base = best.expect("at least one combination").1;
    } else {
        for (c, comp) in components.iter().enumerate() {
            let pick = ties[c]
                .iter()
                .max_by(|a, b| comp.sum(table, a).total_cmp(&comp.sum(table, b)).then_with(|| b.cmp(a)))
                .expect("non-empty tie list");
            for (&v, &k) in comp.nodes.iter().zip(pick) {
                base[v] = k;
            }
        }
    }
    let objective = objective_of(table, &base);
    Ok(Assignment { choice: base, objective })
}

/// Highest-scoring candidate, lowest index on ties.
fn best_free(table: &ScoreTable, v: usize) -> usize {
    let mut best = 0;
    for (k, c) in table.candidates(v).iter().enumerate() {
        if c.score > table.candidates(v)[best].score {
            best = k;
        }
    }
    best
}

struct Opt {
    k: usize,
    score: f64,
    /// Indexed like the owning node's `cuts` list.
    avoids: Vec<bool>,
}

struct Component {
    /// Ascending node indices.
    nodes: Vec<usize>,
    /// Cut members as positions in `nodes`.
    cuts: Vec<Vec<usize>>,
    /// Per local node, the local cuts containing it.
    node_cuts: Vec<Vec<usize>>,
    opts: Vec<Vec<Opt>>,
    /// Per local node and position in `node_cuts`, the best score among
    /// options avoiding that cut.
    best_avoiding: Vec<Vec<f64>>,
    /// Local nodes in branching order.
    order: Vec<usize>,
    /// Multiplier per local cut.
    lambda: Vec<f64>,
    /// Score of the best feasible assignment found while tuning.
    incumbent: f64,
}

impl Component {
    fn new(table: &ScoreTable, nodes: Vec<usize>, cuts: &[&[usize]], hint: Option<&[usize]>) -> Self {
        let m = nodes.len();
        let local_cuts: Vec<Vec<usize>> = cuts.iter().map(|c| c.iter().map(|v| nodes.binary_search(v).unwrap()).collect()).collect();
        let mut node_cuts = vec![Vec::new(); m];
        for (ci, c) in local_cuts.iter().enumerate() {
            for &i in c {
                node_cuts[i].push(ci);
            }
        }
        let opts: Vec<Vec<Opt>> = (0..m).map(|i| pareto(table, nodes[i], &node_cuts[i], cuts)).collect();
        let mut c = Self {
            nodes,
            cuts: local_cuts,
            node_cuts,
            opts,
            best_avoiding: Vec::new(),
            order: Vec::new(),
            lambda: Vec::new(),
            incumbent: f64::NEG_INFINITY,
        };
        let (lambda, dual, mut incumbent) = c.tune_multipliers();
        if let Some(h) = hint {
            let mut pick: Vec<usize> = (0..m).map(|i| c.opts[i].iter().position(|o| o.k == h[c.nodes[i]]).unwrap_or(0)).collect();
            incumbent = incumbent.max(c.repair(&mut pick));
        }

        c.lambda = lambda;
        c.incumbent = incumbent;
        c.fix_options(dual);
        c.best_avoiding = (0..m)
            .map(|i| {
                (0..c.node_cuts[i].len())
                    .map(|j| c.opts[i].iter().filter(|o| o.avoids[j]).map(|o| o.score).fold(f64::NEG_INFINITY, f64::max))
                    .collect()
            })
            .collect();
        c.order = (0..m).collect();
        c.order.sort_by_key(|&i| (std::cmp::Reverse(c.node_cuts[i].len()), i));
        c
    }

    /// Drops options that cannot appear in any assignment within the tie
    /// tolerance of the incumbent, judged by the relaxed bound with the
    /// option forced.
    fn fix_options(&mut self, dual: f64) {
        if !self.incumbent.is_finite() || !dual.is_finite() {
            return;
        }
        let none = vec![0; self.cuts.len()];
        let floor = self.incumbent - 2.0 * TIE_TOLERANCE * self.incumbent.abs().max(1.0);
        for i in 0..self.nodes.len() {
            let rest = dual - self.relaxed_best(i, &self.lambda, &none).0;
            let lambda = &self.lambda;
            let cuts = &self.node_cuts[i];
            self.opts[i].retain(|o| {
                let bonus: f64 = cuts.iter().zip(&o.avoids).filter(|(_, &a)| a).map(|(&ci, _)| lambda[ci]).sum();
                rest + o.score + bonus >= floor
            });
        }
    }

    /// Makes `pick` satisfy every cut by moving, for each violated cut, the
    /// member that loses least to its best option avoiding that cut and
    /// everything it already avoided. Returns the resulting score.
    fn repair(&self, pick: &mut [usize]) -> f64 {
        loop {
            let violated = self.cuts.iter().enumerate().find(|(ci, members)| {
                members.iter().all(|&i| {
                    let j = self.node_cuts[i].iter().position(|x| x == ci).unwrap();
                    !self.opts[i][pick[i]].avoids[j]
                })
            });
            let Some((ci, members)) = violated else { break };
            let mut best: Option<(f64, usize, usize)> = None;
            for &i in members {
                let j = self.node_cuts[i].iter().position(|&x| x == ci).unwrap();
                let cur = &self.opts[i][pick[i]];
                let alt = self.opts[i].iter().position(|o| o.avoids[j] && o.avoids.iter().zip(&cur.avoids).all(|(&a, &b)| a || !b));
                if let Some(o) = alt {
                    let loss = cur.score - self.opts[i][o].score;
                    if best.is_none_or(|(l, _, _)| loss < l) {
                        best = Some((loss, i, o));
                    }
                }
            }
            match best {
                Some((_, i, o)) => pick[i] = o,
                None => return f64::NEG_INFINITY,
            }
        }
        self.polish(pick);
        pick.iter().enumerate().map(|(i, &o)| self.opts[i][o].score).sum()
    }

    /// First-improvement local search over single-node switches that keep
    /// every cut satisfied.
    fn polish(&self, pick: &mut [usize]) {
        let mut hits = vec![0usize; self.cuts.len()];
        for (i, &o) in pick.iter().enumerate() {
            for (j, &ci) in self.node_cuts[i].iter().enumerate() {
                hits[ci] += self.opts[i][o].avoids[j] as usize;
            }
        }
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..pick.len() {
                let cur = &self.opts[i][pick[i]];
                let better = self.opts[i]
                    .iter()
                    .take_while(|o| o.score > cur.score)
                    .position(|o| self.node_cuts[i].iter().enumerate().all(|(j, &ci)| o.avoids[j] || !cur.avoids[j] || hits[ci] > 1));
                if let Some(o) = better {
                    for (j, &ci) in self.node_cuts[i].iter().enumerate() {
                        hits[ci] -= cur.avoids[j] as usize;
                        hits[ci] += self.opts[i][o].avoids[j] as usize;
                    }
                    pick[i] = o;
                    improved = true;
                }
            }
        }
    }

    /// Best option of local node `i` with each unsatisfied cut it avoids
    /// rewarded by that cut's multiplier. Returns the value and option.
    fn relaxed_best(&self, i: usize, lambda: &[f64], satisfied: &[usize]) -> (f64, usize) {
        let cuts = &self.node_cuts[i];
        let max_bonus: f64 = cuts.iter().filter(|&&ci| satisfied[ci] == 0).map(|&ci| lambda[ci]).sum();
        let mut best = (f64::NEG_INFINITY, 0);
        for (o, opt) in self.opts[i].iter().enumerate() {
            if opt.score + max_bonus <= best.0 {
                break;
            }
            let mut v = opt.score;
            for (j, &ci) in cuts.iter().enumerate() {
                if opt.avoids[j] && satisfied[ci] == 0 {
                    v += lambda[ci];
                }
            }
            if v > best.0 {
                best = (v, o);
            }
        }
        best
    }

    /// Subgradient descent on the relaxed dual from zero multipliers, with
    /// each relaxed solution repaired into a feasible one. Returns the best
    /// multipliers, their dual value and the best feasible score.
    fn tune_multipliers(&self) -> (Vec<f64>, f64, f64) {
        let k = self.cuts.len();
        let m = self.nodes.len();
        let none = vec![0; k];
        let mut lambda = vec![0.0; k];
        let mut best_lambda = lambda.clone();
        let mut best_dual = f64::INFINITY;
        let mut incumbent = f64::NEG_INFINITY;
        let mut theta = 2.0;
        let mut stale = 0;
        let mut hits = vec![0usize; k];
        let mut pick = vec![0usize; m];
        for _ in 0..SUBGRADIENT_STEPS {
            hits.iter_mut().for_each(|h| *h = 0);
            let mut dual = -lambda.iter().sum::<f64>();
            for i in 0..m {
                let (v, o) = self.relaxed_best(i, &lambda, &none);
                dual += v;
                pick[i] = o;
                for (j, &ci) in self.node_cuts[i].iter().enumerate() {
                    if self.opts[i][o].avoids[j] {
                        hits[ci] += 1;
                    }
                }
            }
            incumbent = incumbent.max(self.repair(&mut pick));
            if dual < best_dual - 1e-12 * dual.abs().max(1.0) {
                best_dual = dual;
                best_lambda.clone_from(&lambda);
                stale = 0;
            } else {
                stale += 1;
                if stale >= 50 {
                    theta /= 2.0;
                    stale = 0;
                }
            }
            let grad: Vec<f64> = hits.iter().zip(&lambda).map(|(&h, &l)| if h == 0 || l > 0.0 { h as f64 - 1.0 } else { 0.0 }).collect();
            let norm: f64 = grad.iter().map(|g| g * g).sum();
            if norm == 0.0 || theta < 1e-6 || best_dual - incumbent <= TIE_TOLERANCE * incumbent.abs().max(1.0) {
                break;
            }
            let gap = (dual - incumbent).max(1e-9 * dual.abs().max(1.0));
            let step = theta * gap / norm;
            for (l, g) in lambda.iter_mut().zip(&grad) {
                *l = (*l - step * g).max(0.0);
            }
        }
        (best_lambda, best_dual, incumbent)
    }

    /// Component nodes' scores summed in node order.
    fn sum(&self, table: &ScoreTable, choice: &[usize]) -> f64 {
        let mut s = 0.0;
        for (&v, &k) in self.nodes.iter().zip(choice) {
            s += table.candidates(v)[k].score;
        }
        s
    }

    /// All near-optimal choice vectors (candidate index per component node).
    fn solve(&self) -> Result<Vec<Vec<usize>>> {
        let m = self.nodes.len();
        let mut suffix_best = vec![0.0; m + 1];
        for d in (0..m).rev() {
            suffix_best[d] = suffix_best[d + 1] + self.opts[self.order[d]][0].score;
        }
        let mut s = Search {
            c: self,
            suffix_best,
            pick: vec![usize::MAX; m],
            satisfied: vec![0; self.cuts.len()],
            open: self.cuts.iter().map(Vec::len).collect(),
            used: vec![false; m],
            best: self.incumbent,
            ties: Vec::new(),
            lambda: vec![self.lambda.clone(); m + 1],
        };
        s.dfs(0, 0.0);
        if s.ties.is_empty() {
            return Err(Error::Invariant("cut constraints admit no assignment".into()));
        }
        let mut out: Vec<Vec<usize>> =
            s.ties.into_iter().map(|(_, pick)| pick.iter().enumerate().map(|(i, &o)| self.opts[i][o].k).collect()).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Options of `v` not dominated by another that avoids a superset of the same
/// cuts with a higher score, or with an equal score, the same cuts and a
/// lower index. Sorted by score, best first, then by index.
fn pareto(table: &ScoreTable, v: usize, node_cuts: &[usize], cuts: &[&[usize]]) -> Vec<Opt> {
    let mut all: Vec<Opt> = table
        .candidates(v)
        .iter()
        .enumerate()
        .map(|(k, c)| Opt {
            k,
            score: c.score,
            avoids: node_cuts.iter().map(|&ci| c.parents.iter().all(|p| cuts[ci].binary_search(p).is_err())).collect(),
        })
        .collect();
    all.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.k.cmp(&b.k)));
    let mut kept: Vec<Opt> = Vec::new();
    let mut full_score = f64::NEG_INFINITY;
    for o in all {
        if o.score < full_score {
            break;
        }
        let dominated = kept.iter().any(|k| {
            let superset = k.avoids.iter().zip(&o.avoids).all(|(&a, &b)| a || !b);
            superset && (k.score > o.score || k.avoids == o.avoids)
        });
        if !dominated {
            if o.avoids.iter().all(|&a| a) {
                full_score = full_score.max(o.score);
            }
            kept.push(o);
        }
    }
    kept
}

struct Search<'a> {
    c: &'a Component,
    suffix_best: Vec<f64>,
    /// Option index per local node, `usize::MAX` while open.
    pick: Vec<usize>,
    satisfied: Vec<usize>,
    open: Vec<usize>,
    used: Vec<bool>,
    best: f64,
    ties: Vec<(f64, Vec<usize>)>,
    /// Multipliers tuned at each depth of the current path.
    lambda: Vec<Vec<f64>>,
}

impl Search<'_> {
    fn tolerance(&self) -> f64 {
        TIE_TOLERANCE * self.best.abs().max(1.0)
    }

    fn bound(&mut self, depth: usize, partial: f64) -> f64 {
        let c = self.c;
        let mut penalty = 0.0;
        self.used.iter_mut().for_each(|u| *u = false);
        for (ci, members) in c.cuts.iter().enumerate() {
            if self.satisfied[ci] > 0 {
                continue;
            }
            let mut pen = f64::INFINITY;
            let mut free = true;
            for &i in members {
                if self.pick[i] != usize::MAX {
                    continue;
                }
                if self.used[i] {
                    free = false;
                    break;
                }
                let j = c.node_cuts[i].iter().position(|&x| x == ci).unwrap();
                pen = pen.min(c.opts[i][0].score - c.best_avoiding[i][j]);
            }
            if free && pen > 0.0 && pen.is_finite() {
                penalty += pen;
                for &i in members {
                    if self.pick[i] == usize::MAX {
                        self.used[i] = true;
                    }
                }
            }
        }
        let packed = partial + self.suffix_best[depth] - penalty;
        let mut lambda = std::mem::take(&mut self.lambda[depth]);
        if depth > 0 {
            lambda.copy_from_slice(&self.lambda[depth - 1]);
        }
        let floor = self.best - self.tolerance();
        let mut best = packed;
        let mut hits = vec![0usize; c.cuts.len()];
        let mut theta = 1.0;
        for step in 0..=NODE_STEPS {
            hits.iter_mut().for_each(|h| *h = 0);
            let mut dual = partial;
            for (ci, l) in lambda.iter().enumerate() {
                if self.satisfied[ci] == 0 {
                    dual -= l;
                }
            }
            for &i in &c.order[depth..] {
                let (v, o) = c.relaxed_best(i, &lambda, &self.satisfied);
                dual += v;
                for (j, &ci) in c.node_cuts[i].iter().enumerate() {
                    hits[ci] += c.opts[i][o].avoids[j] as usize;
                }
            }
            if dual < best {
                best = dual;
            } else {
                theta /= 2.0;
            }
            if best < floor || step == NODE_STEPS || !self.best.is_finite() {
                break;
            }
            let mut norm = 0.0;
            for (ci, h) in hits.iter_mut().enumerate() {
                let g = if self.satisfied[ci] > 0 || (*h > 0 && lambda[ci] == 0.0) { 0.0 } else { *h as f64 - 1.0 };
                norm += g * g;
                *h = (g + 1.0) as usize;
            }
            if norm == 0.0 {
                break;
            }
            let t = theta * (dual - self.best).max(1e-9) / norm;
            for (ci, l) in lambda.iter_mut().enumerate() {
                let g = hits[ci] as f64 - 1.0;
                *l = (*l - t * g).max(0.0);
            }
        }
        self.lambda[depth] = lambda;
        best
    }

    fn dfs(&mut self, depth: usize, partial: f64) {
        let c = self.c;
        if depth == c.order.len() {
            self.record(partial);
            return;
        }
        let full = self.ties.len() >= MAX_TIES_PER_COMPONENT;
        let b = self.bound(depth, partial);
        let tol = self.tolerance();
        if (full && b <= self.best + tol) || b < self.best - tol {
            return;
        }
        let i = c.order[depth];
        for o in 0..c.opts[i].len() {
            let opt = &c.opts[i][o];
            let mut feasible = true;
            for (j, &ci) in c.node_cuts[i].iter().enumerate() {
                self.open[ci] -= 1;
                if opt.avoids[j] {
                    self.satisfied[ci] += 1;
                }
                if self.open[ci] == 0 && self.satisfied[ci] == 0 {
                    feasible = false;
                }
            }
            if feasible {
                self.pick[i] = o;
                self.dfs(depth + 1, partial + opt.score);
                self.pick[i] = usize::MAX;
            }
            for (j, &ci) in c.node_cuts[i].iter().enumerate() {
                self.open[ci] += 1;
                if opt.avoids[j] {
                    self.satisfied[ci] -= 1;
                }
            }
        }
    }

    fn record(&mut self, value: f64) {
        if value > self.best {
            self.best = value;
            let floor = self.best - self.tolerance();
            self.ties.retain(|(v, _)| *v >= floor);
        }
        if value >= self.best - self.tolerance() && self.ties.len() < MAX_TIES_PER_COMPONENT {
            self.ties.push((value, self.pick.clone()));
        }
    }
}
