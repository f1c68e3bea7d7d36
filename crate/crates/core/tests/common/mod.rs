//! Reference solvers and instance builders for integration tests. None of
//! this calls into the library's own solvers.

#![allow(dead_code)]

use auction_graph::{BipartiteProblem, EdgeSelection, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense_problem(rows: &[Vec<f64>]) -> BipartiteProblem {
    BipartiteProblem::from_dense(rows).unwrap()
}

pub fn random_integer_matrix(n: usize, lo: u32, hi: u32, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| (0..n).map(|_| f64::from(r.random_range(lo..=hi))).collect()).collect()
}

pub fn random_real_matrix(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| (0..n).map(|_| r.random::<f64>()).collect()).collect()
}

/// Maximum-weight perfect assignment of a square matrix (Kuhn-Munkres with
/// potentials, O(n^3)).
pub fn hungarian_max(weights: &[Vec<f64>]) -> f64 {
    let n = weights.len();
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut owner = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| weights[owner[j] - 1][j - 1]).sum()
}

/// Maximum total weight of an undirected edge subset with every degree at
/// most `b`, by plain exhaustive enumeration.
pub fn brute_bmatching(graph: &WeightedGraph, b: usize) -> f64 {
    fn go(edges: &[(usize, usize, f64)], k: usize, deg: &mut [usize], b: usize, acc: f64, best: &mut f64) {
        if k == edges.len() {
            *best = best.max(acc);
            return;
        }
        let (u, v, w) = edges[k];
        go(edges, k + 1, deg, b, acc, best);
        if deg[u] < b && deg[v] < b {
            deg[u] += 1;
            deg[v] += 1;
            go(edges, k + 1, deg, b, acc + w, best);
            deg[u] -= 1;
            deg[v] -= 1;
        }
    }
    let edges: Vec<_> = graph.edges().iter().map(|e| (e.src, e.dst, e.weight)).collect();
    let mut deg = vec![0; graph.node_count()];
    let mut best = 0.0;
    go(&edges, 0, &mut deg, b, 0.0, &mut best);
    best
}

/// Shadow-objective weight halved: equals the undirected weight for a
/// symmetric selection.
pub fn half_weight(problem: &BipartiteProblem, selection: &EdgeSelection) -> f64 {
    selection.iter().map(|(i, j)| problem.weight(i, j).unwrap()).sum::<f64>() / 2.0
}

/// Undirected degree of every node in a symmetric selection.
pub fn projected_degrees(selection: &EdgeSelection) -> Vec<usize> {
    let mut deg = vec![0; selection.buyer_count()];
    for (i, j) in selection.undirected_pairs() {
        deg[i] += 1;
        deg[j] += 1;
    }
    deg
}

pub fn population_variance(values: &[usize]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<usize>() as f64 / n;
    values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n
}

/// Median of a small sample.
pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Ordinary least squares `y = a + c x`; returns `(a, c, r_squared)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let c = sxy / sxx;
    let a = my - c * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - a - c * xi).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|yi| (yi - my).powi(2)).sum();
    (a, c, 1.0 - ss_res / ss_tot)
}
