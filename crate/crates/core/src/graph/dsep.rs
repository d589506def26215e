//! d-separation by reachability.

use super::PartiallyDirectedGraph;
use crate::error::{arg, Error, Result};

pub(crate) fn require_dag(g: &PartiallyDirectedGraph) -> Result<()> {
    if g.has_undirected_edges() {
        return Err(Error::Structure("expected a DAG but found undirected edges".into()));
    }
    if g.topological_order().is_none() {
        return Err(Error::Structure("expected a DAG but found a directed cycle".into()));
    }
    Ok(())
}

/// Whether `x` and `y` are d-separated by `z` in the DAG `g`.
///
/// A path is blocked when it passes a non-collider that is in `z`, or a
/// collider that has neither itself nor a descendant in `z`. Evaluated with
/// the active-trail traversal over (node, direction) states rather than by
/// listing paths.
pub fn d_separated(g: &PartiallyDirectedGraph, x: usize, y: usize, z: &[usize]) -> Result<bool> {
    require_dag(g)?;
    d_separated_unchecked(g, x, y, z)
}

pub(crate) fn d_separated_unchecked(g: &PartiallyDirectedGraph, x: usize, y: usize, z: &[usize]) -> Result<bool> {
    let n = g.n();
    if x >= n || y >= n || z.iter().any(|&v| v >= n) {
        return arg("node index out of range");
    }
    if x == y {
        return arg("d-separation needs two distinct nodes");
    }
    if z.contains(&x) || z.contains(&y) {
        return arg("tested nodes may not be in the conditioning set");
    }
    let mut in_z = vec![false; n];
    for &v in z {
        in_z[v] = true;
    }
    // Colliders in z or with a descendant in z are exactly the ancestors of z.
    let opens_collider = g.ancestors_of(z);

    const UP: usize = 0; // entered from a child
    const DOWN: usize = 1; // entered from a parent
    let mut seen = vec![[false; 2]; n];
    let mut stack = vec![(x, UP)];
    while let Some((v, dir)) = stack.pop() {
        if seen[v][dir] {
            continue;
        }
        seen[v][dir] = true;
        if v == y {
            return Ok(false);
        }
        if dir == UP {
            if !in_z[v] {
                stack.extend(g.parents(v).into_iter().map(|p| (p, UP)));
                stack.extend(g.children(v).into_iter().map(|c| (c, DOWN)));
            }
        } else {
            if !in_z[v] {
                stack.extend(g.children(v).into_iter().map(|c| (c, DOWN)));
            }
            if opens_collider[v] {
                stack.extend(g.parents(v).into_iter().map(|p| (p, UP)));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rng;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// Explicit path criterion: enumerate every simple path in the skeleton
    /// and check whether any is active given `z`.
    pub(crate) fn brute_force_dsep(g: &PartiallyDirectedGraph, x: usize, y: usize, z: &[usize]) -> bool {
        let n = g.n();
        let descendants = |v: usize| {
            let mut seen = vec![false; n];
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                if !seen[u] {
                    seen[u] = true;
                    stack.extend(g.children(u));
                }
            }
            seen
        };
        let active = |path: &[usize]| {
            for w in path.windows(3) {
                let (a, b, c) = (w[0], w[1], w[2]);
                let collider = g.has_directed(a, b) && g.has_directed(c, b);
                if collider {
                    let d = descendants(b);
                    if !z.iter().any(|&s| d[s]) {
                        return false;
                    }
                } else if z.contains(&b) {
                    return false;
                }
            }
            true
        };
        fn walk(g: &PartiallyDirectedGraph, path: &mut Vec<usize>, y: usize, active: &dyn Fn(&[usize]) -> bool) -> bool {
            let v = *path.last().unwrap();
            if v == y {
                return active(path);
            }
            for w in g.neighbors(v) {
                if !path.contains(&w) {
                    path.push(w);
                    let hit = walk(g, path, y, active);
                    path.pop();
                    if hit {
                        return true;
                    }
                }
            }
            false
        }
        !walk(g, &mut vec![x], y, &active)
    }

    pub(crate) fn random_dag(seed: u64, n: usize, p: f64) -> PartiallyDirectedGraph {
        let mut r = rng::seeded(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let mut g = PartiallyDirectedGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if r.random_bool(p) {
                    g.add_directed(order[i], order[j]).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn textbook_cases() {
        let collider = PartiallyDirectedGraph::from_directed(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(d_separated(&collider, 0, 1, &[]).unwrap());
        assert!(!d_separated(&collider, 0, 1, &[2]).unwrap());
        let chain = PartiallyDirectedGraph::from_directed(3, &[(0, 2), (2, 1)]).unwrap();
        assert!(d_separated(&chain, 0, 1, &[2]).unwrap());
        assert!(!d_separated(&chain, 0, 1, &[]).unwrap());
        // collider opened through a descendant
        let g = PartiallyDirectedGraph::from_directed(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!d_separated(&g, 0, 1, &[3]).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let mut g = PartiallyDirectedGraph::new(3);
        g.add_undirected(0, 1).unwrap();
        assert!(d_separated(&g, 0, 2, &[]).is_err());
        let dag = PartiallyDirectedGraph::from_directed(3, &[(0, 1)]).unwrap();
        assert!(d_separated(&dag, 0, 0, &[]).is_err());
        assert!(d_separated(&dag, 0, 1, &[1]).is_err());
    }

    #[test]
    fn agrees_with_path_enumeration() {
        for seed in 0..60 {
            let n = 3 + (seed as usize % 4);
            let g = random_dag(seed, n, 0.45);
            for x in 0..n {
                for y in x + 1..n {
                    let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
                    for mask in 0u32..(1 << rest.len()) {
                        let z: Vec<usize> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                        assert_eq!(d_separated(&g, x, y, &z).unwrap(), brute_force_dsep(&g, x, y, &z), "seed {seed} {x} {y} {z:?}");
                    }
                }
            }
        }
    }
}
