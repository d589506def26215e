//! Directed cycle detection and elementary cycle enumeration.
//!
//! These work on [`Digraph`], a plain successor-list graph, because the
//! candidate structures produced by the solver may contain antiparallel
//! edges (`a -> b` and `b -> a`) that a [`PartiallyDirectedGraph`] cannot
//! represent.

use super::PartiallyDirectedGraph;
use crate::error::{arg, Error, Result};

/// A directed graph given by sorted, duplicate-free successor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self { succ: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Edges `p -> v` for every `p` in `parents[v]`.
    pub fn from_parents<S: AsRef<[usize]>>(parents: &[S]) -> Result<Self> {
        let mut g = Self::new(parents.len());
        for (v, ps) in parents.iter().enumerate() {
            for &p in ps.as_ref() {
                g.add_edge(p, v)?;
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.succ.len();
        if u >= n || v >= n {
            return arg(format!("node index out of range ({u}, {v}) for {n} nodes"));
        }
        if u == v {
            return arg(format!("self loop on node {u}"));
        }
        if let Err(pos) = self.succ[u].binary_search(&v) {
            self.succ[u].insert(pos, v);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }
}

impl TryFrom<&PartiallyDirectedGraph> for Digraph {
    type Error = Error;

    /// Fails when the graph has undirected edges.
    fn try_from(g: &PartiallyDirectedGraph) -> Result<Self> {
        if g.has_undirected_edges() {
            return arg("cycle search requires a graph with directed edges only");
        }
        Ok(Self { succ: (0..g.n()).map(|v| g.children(v)).collect() })
    }
}

/// One elementary directed cycle, or `None` if the graph is acyclic.
///
/// Depth-first search from the lowest-indexed node, successors in ascending
/// order. The cycle starts at the node the back edge returns to.
pub fn find_cycle(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.n();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut path: Vec<usize> = Vec::new();
    let mut cursor: Vec<usize> = Vec::new();
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        path.push(root);
        cursor.push(0);
        while let Some(&v) = path.last() {
            let i = cursor.last_mut().unwrap();
            if let Some(&c) = g.succ[v].get(*i) {
                *i += 1;
                match state[c] {
                    0 => {
                        state[c] = 1;
                        path.push(c);
                        cursor.push(0);
                    }
                    1 => {
                        let start = path.iter().position(|&x| x == c).unwrap();
                        return Some(path[start..].to_vec());
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                path.pop();
                cursor.pop();
            }
        }
    }
    None
}

/// Up to `limit` elementary cycles by Johnson's algorithm.
///
/// Each cycle starts at its smallest node. Cycles come in order of that start
/// node, then in depth-first order over ascending successors.
pub fn enumerate_cycles(g: &Digraph, limit: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut search = Johnson {
        succ: &g.succ,
        allowed: vec![false; n],
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        stack: Vec::new(),
        limit,
    };
    for s in 0..n {
        let comp = scc_containing(g, s);
        if comp.len() < 2 {
            continue;
        }
        for v in 0..n {
            search.allowed[v] = false;
            search.blocked[v] = false;
            search.blocked_by[v].clear();
        }
        for &v in &comp {
            search.allowed[v] = true;
        }
        search.circuit(s, s, &mut out);
        if out.len() >= limit {
            break;
        }
    }
    out
}

/// Strongly connected component of `s` within the subgraph of nodes `>= s`.
fn scc_containing(g: &Digraph, s: usize) -> Vec<usize> {
    let n = g.n();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in s..n {
        for &v in &g.succ[u] {
            if v >= s {
                pred[v].push(u);
            }
        }
    }
    let reach = |next: &dyn Fn(usize) -> Vec<usize>| {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for w in next(v) {
                if w >= s && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let fwd = reach(&|v| g.succ[v].clone());
    let bwd = reach(&|v| pred[v].clone());
    (s..n).filter(|&v| fwd[v] && bwd[v]).collect()
}

struct Johnson<'a> {
    succ: &'a [Vec<usize>],
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    limit: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        let mut work = vec![v];
        while let Some(u) = work.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                work.append(&mut self.blocked_by[u]);
            }
        }
    }

    fn circuit(&mut self, v: usize, s: usize, out: &mut Vec<Vec<usize>>) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in self.succ[v].iter() {
            if out.len() >= self.limit {
                // Leaves blocking state inconsistent, but the search ends here.
                self.stack.pop();
                return true;
            }
            if !self.allowed[w] {
                continue;
            }
            if w == s {
                out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s, out) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.succ[v].iter() {
                if self.allowed[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }
}
