//! Exact solvers for small instances, used to check the auctions.

use crate::error::{Error, Result};
use crate::graph::{BipartiteProblem, WeightedGraph};

/// Largest object count [`exact_assignment`] accepts.
pub const MAX_ASSIGNMENT_OBJECTS: usize = 16;
/// Largest edge count [`exact_bmatching`] accepts.
pub const MAX_BMATCHING_EDGES: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactAssignment {
    pub weight: f64,
    /// `(buyer, object)` pairs in ascending buyer order.
    pub matching: Vec<(usize, usize)>,
}

/// Maximum-cardinality matching of maximum weight among those, by exhaustive
/// search over the subsets of used objects.
pub fn exact_assignment(problem: &BipartiteProblem) -> Result<ExactAssignment> {
    let (n, m) = (problem.buyer_count(), problem.object_count());
    if m > MAX_ASSIGNMENT_OBJECTS {
        return Err(Error::InstanceTooLarge(format!("{m} objects (limit {MAX_ASSIGNMENT_OBJECTS})")));
    }
    let states = 1usize << m;
    // best[i][mask]: best (cardinality, weight) for buyers i.. with `mask` taken
    let mut best = vec![vec![(0usize, 0.0f64); states]; n + 1];
    let better = |a: (usize, f64), b: (usize, f64)| a.0 > b.0 || (a.0 == b.0 && a.1 > b.1);
    for i in (0..n).rev() {
        let (objects, weights) = problem.row(i);
        for mask in 0..states {
            let mut top = best[i + 1][mask];
            for (&o, &w) in objects.iter().zip(weights) {
                if mask & (1 << o) == 0 {
                    let (c, s) = best[i + 1][mask | (1 << o)];
                    let cand = (c + 1, s + w);
                    if better(cand, top) {
                        top = cand;
                    }
                }
            }
            best[i][mask] = top;
        }
    }

    let mut matching = Vec::new();
    let mut mask = 0usize;
    for i in 0..n {
        let target = best[i][mask];
        if best[i + 1][mask] == target {
            continue;
        }
        let (objects, weights) = problem.row(i);
        let (o, _) = objects
            .iter()
            .zip(weights)
            .find(|&(&o, &w)| {
                mask & (1 << o) == 0 && {
                    let (c, s) = best[i + 1][mask | (1 << o)];
                    (c + 1, s + w) == target
                }
            })
            .expect("optimum is reachable");
        matching.push((i, *o));
        mask |= 1 << o;
    }
    Ok(ExactAssignment { weight: best[0][0].1, matching })
}

/// Maximum total weight over edge subsets in which every node has degree at
/// most `b`. Directed graphs are read as undirected.
pub fn exact_bmatching(graph: &WeightedGraph, b: usize) -> Result<f64> {
    if b == 0 {
        return Err(Error::invalid("b must be at least 1"));
    }
    let graph = graph.to_undirected();
    let max_degree = (0..graph.node_count()).map(|i| graph.degree(i)).max().unwrap_or(0);
    if b >= max_degree {
        return Ok(graph.total_weight());
    }
    if graph.edge_count() > MAX_BMATCHING_EDGES {
        return Err(Error::InstanceTooLarge(format!("{} edges (limit {MAX_BMATCHING_EDGES})", graph.edge_count())));
    }
    let mut edges: Vec<(usize, usize, f64)> = graph.edges().iter().map(|e| (e.src, e.dst, e.weight)).collect();
    edges.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut suffix = vec![0.0; edges.len() + 1];
    for k in (0..edges.len()).rev() {
        suffix[k] = suffix[k + 1] + edges[k].2;
    }

    struct Search<'a> {
        edges: &'a [(usize, usize, f64)],
        suffix: &'a [f64],
        degree: Vec<usize>,
        b: usize,
        best: f64,
    }
    impl Search<'_> {
        fn go(&mut self, k: usize, total: f64) {
            if total > self.best {
                self.best = total;
            }
            if k == self.edges.len() || total + self.suffix[k] <= self.best {
                return;
            }
            let (i, j, w) = self.edges[k];
            if self.degree[i] < self.b && self.degree[j] < self.b {
                self.degree[i] += 1;
                self.degree[j] += 1;
                self.go(k + 1, total + w);
                self.degree[i] -= 1;
                self.degree[j] -= 1;
            }
            self.go(k + 1, total);
        }
    }
    let mut search = Search { edges: &edges, suffix: &suffix, degree: vec![0; graph.node_count()], b, best: 0.0 };
    search.go(0, 0.0);
    Ok(search.best)
}
