//! Mixed graphs and the graph algorithms used by the learner.
//!
//! A single [`PartiallyDirectedGraph`] type carries undirected skeletons,
//! DAGs and CPDAGs; which of these a value is follows from its edges.

mod cpdag;
mod cycles;
mod dsep;
mod edgelist;
mod separator;

pub use cpdag::{apply_meek, apply_meek_with_order, consistent_extension, cpdag_of, immoralities, MeekRule};
pub use cycles::{enumerate_cycles, find_cycle, Digraph};
pub use dsep::d_separated;
pub use edgelist::parse_edge_list;
pub use separator::min_d_separator;

#[cfg(test)]
pub(crate) use cpdag::tests::all_dags;

use crate::error::{arg, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Mark {
    None,
    /// Row node points to column node.
    Out,
    /// Column node points to row node.
    In,
    Undirected,
}

/// A graph over nodes `0..n` with directed and undirected edges.
///
/// No self loops; every pair carries at most one edge, and `u -> v` never
/// coexists with `v -> u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartiallyDirectedGraph {
    n: usize,
    marks: Vec<Mark>,
}

impl std::fmt::Debug for PartiallyDirectedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PartiallyDirectedGraph")
            .field("n", &self.n)
            .field("directed", &self.directed_edges())
            .field("undirected", &self.undirected_edges())
            .finish()
    }
}

impl PartiallyDirectedGraph {
    pub fn new(n: usize) -> Self {
        Self { n, marks: vec![Mark::None; n * n] }
    }

    /// The complete undirected graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set(u, v, Mark::Undirected);
            }
        }
        g
    }

    pub fn from_directed(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_directed(u, v)?;
        }
        Ok(g)
    }

    pub fn from_undirected(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_undirected(u, v)?;
        }
        Ok(g)
    }

    /// A DAG whose node `v` has parents `parents[v]`.
    pub fn from_parents(parents: &[Vec<usize>]) -> Result<Self> {
        let mut g = Self::new(parents.len());
        for (v, ps) in parents.iter().enumerate() {
            for &p in ps {
                g.add_directed(p, v)?;
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn mark(&self, u: usize, v: usize) -> Mark {
        self.marks[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, m: Mark) {
        let back = match m {
            Mark::Out => Mark::In,
            Mark::In => Mark::Out,
            other => other,
        };
        self.marks[u * self.n + v] = m;
        self.marks[v * self.n + u] = back;
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return arg(format!("node index out of range ({u}, {v}) for {} nodes", self.n));
        }
        if u == v {
            return arg(format!("self loop on node {u}"));
        }
        Ok(())
    }

    /// Adds `u -> v`. Fails if the pair already carries an edge of another kind.
    pub fn add_directed(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        match self.mark(u, v) {
            Mark::None | Mark::Out => {
                self.set(u, v, Mark::Out);
                Ok(())
            }
            _ => arg(format!("pair ({u}, {v}) already carries a conflicting edge")),
        }
    }

    /// Adds `u -- v`. Fails if the pair is already joined by a directed edge.
    pub fn add_undirected(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        match self.mark(u, v) {
            Mark::None | Mark::Undirected => {
                self.set(u, v, Mark::Undirected);
                Ok(())
            }
            _ => arg(format!("pair ({u}, {v}) already carries a directed edge")),
        }
    }

    /// Replaces whatever joins `u` and `v` with `u -> v`.
    pub fn orient(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.set(u, v, Mark::Out);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.set(u, v, Mark::None);
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.mark(u, v) != Mark::None
    }

    pub fn has_directed(&self, u: usize, v: usize) -> bool {
        u != v && self.mark(u, v) == Mark::Out
    }

    pub fn has_undirected(&self, u: usize, v: usize) -> bool {
        u != v && self.mark(u, v) == Mark::Undirected
    }

    fn with_mark(&self, v: usize, m: Mark) -> impl Iterator<Item = usize> + '_ {
        let row = &self.marks[v * self.n..(v + 1) * self.n];
        row.iter().enumerate().filter(move |(_, &x)| x == m).map(|(u, _)| u)
    }

    /// Parents of `v`, ascending.
    pub fn parents(&self, v: usize) -> Vec<usize> {
        self.with_mark(v, Mark::In).collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.with_mark(v, Mark::Out).collect()
    }

    /// Nodes joined to `v` by an undirected edge.
    pub fn undirected_neighbors(&self, v: usize) -> Vec<usize> {
        self.with_mark(v, Mark::Undirected).collect()
    }

    /// Nodes adjacent to `v` by any edge, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let row = &self.marks[v * self.n..(v + 1) * self.n];
        row.iter().enumerate().filter(|(_, &x)| x != Mark::None).map(|(u, _)| u).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.marks[v * self.n..(v + 1) * self.n].iter().filter(|&&m| m != Mark::None).count()
    }

    /// Directed edges `(u, v)` in lexicographic order.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.mark(u, v) == Mark::Out {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Undirected edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.mark(u, v) == Mark::Undirected {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Adjacent pairs `(u, v)` with `u < v`, ignoring orientation.
    pub fn skeleton_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.mark(u, v) != Mark::None {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.marks.iter().filter(|&&m| m != Mark::None).count() / 2
    }

    /// The same adjacencies with every edge undirected.
    pub fn skeleton(&self) -> Self {
        let mut g = Self::new(self.n);
        for (u, v) in self.skeleton_edges() {
            g.set(u, v, Mark::Undirected);
        }
        g
    }

    pub fn has_undirected_edges(&self) -> bool {
        self.marks.contains(&Mark::Undirected)
    }

    pub fn has_directed_edges(&self) -> bool {
        self.marks.contains(&Mark::Out)
    }

    /// Directed only and acyclic.
    pub fn is_dag(&self) -> bool {
        !self.has_undirected_edges() && self.topological_order().is_some()
    }

    /// Topological order of the directed part (undirected edges ignored),
    /// smallest available index first. `None` if the directed part has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.with_mark(v, Mark::In).count()).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for c in self.with_mark(v, Mark::Out) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Nodes with a directed path to any node of `seeds`, seeds included.
    pub fn ancestors_of(&self, seeds: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        let mut stack: Vec<usize> = seeds.to_vec();
        while let Some(v) = stack.pop() {
            if !mask[v] {
                mask[v] = true;
                stack.extend(self.with_mark(v, Mark::In).filter(|&p| !mask[p]));
            }
        }
        mask
    }

    /// Renders one edge per line as `u -> v` or `u -- v`, using `names`.
    pub fn to_edge_list(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (u, v) in self.directed_edges() {
            s.push_str(&format!("{} -> {}\n", names[u], names[v]));
        }
        for (u, v) in self.undirected_edges() {
            s.push_str(&format!("{} -- {}\n", names[u], names[v]));
        }
        s
    }
}
