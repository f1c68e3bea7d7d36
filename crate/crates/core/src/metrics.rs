//! Quality metrics for a selection: weight, degree statistics, symmetry and
//! the epsilon-complementary-slackness residual of the auction prices.

use std::collections::BTreeMap;

use crate::auction::PriceState;
use crate::error::{Error, Result};
use crate::graph::{to_bipartite_shadow, BipartiteProblem, EdgeSelection, WeightedGraph};

/// How degrees are counted in [`MetricsReport`].
pub const DEGREE_CONVENTION: &str = "projected undirected edge counted once per endpoint";

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub node_count: usize,
    /// Undirected edges after projection.
    pub selected_edges: usize,
    pub total_selected_weight: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub degree_mean: f64,
    /// Population variance.
    pub degree_variance: f64,
    pub is_symmetric: bool,
    pub iterations: usize,
    pub wall_time_seconds: f64,
    pub epsilon_used: Option<f64>,
    pub cs_residual_max: Option<f64>,
    pub degree_target: Option<usize>,
    /// Nodes ending below `min(degree_target, original degree)`.
    pub degree_deficit_nodes: Option<usize>,
    /// Effective run parameters, echoed verbatim into the report.
    pub parameters: Vec<(String, String)>,
}

/// Run facts passed through to the report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunInfo {
    pub iterations: usize,
    pub wall_time_seconds: f64,
    pub epsilon: Option<f64>,
    pub degree_target: Option<usize>,
}

/// Largest epsilon-complementary-slackness violation over held pairs.
///
/// For a held pair `(i, j)` the residual is
/// `max(0, max_{k in adj(i), k not held by i} (a_ik - p_k) - (a_ij - paid_ij))`,
/// where `paid_ij` is the price `i` paid for `j`. With one object per buyer
/// this is `max_k (a_ik - p_k) - (a_ij - p_j)`.
pub fn cs_residual_max(problem: &BipartiteProblem, selection: &EdgeSelection, prices: &PriceState) -> f64 {
    let mut worst: f64 = 0.0;
    let mut held: Vec<usize> = Vec::new();
    let mut current = usize::MAX;
    let mut best_other = f64::NEG_INFINITY;
    for (i, j) in selection.iter() {
        if i != current {
            current = i;
            held.clear();
            held.extend(selection.objects_of(i));
            let (objects, weights) = problem.row(i);
            best_other = objects
                .iter()
                .zip(weights)
                .filter(|(o, _)| !held.contains(o))
                .map(|(&o, &w)| w - prices.price(o))
                .fold(f64::NEG_INFINITY, f64::max);
        }
        let Some(own) = prices.profit(problem, i, j) else { continue };
        worst = worst.max(best_other - own);
    }
    worst
}

/// Report for a selection over the shadow problem of `graph`.
pub fn evaluate(
    graph: &WeightedGraph,
    selection: &EdgeSelection,
    prices: Option<&PriceState>,
    run: &RunInfo,
) -> Result<MetricsReport> {
    let n = graph.node_count();
    if selection.buyer_count() != n || selection.object_count() != n {
        return Err(Error::invalid("selection does not match the graph's node count"));
    }
    let pairs = selection.undirected_pairs();
    let mut degree = vec![0usize; n];
    let mut total = 0.0;
    for &(i, j) in &pairs {
        let w = graph.weight(i, j).or_else(|| graph.weight(j, i)).ok_or(Error::MissingEdge(i, j))?;
        total += w;
        degree[i] += 1;
        degree[j] += 1;
    }
    let cs = match prices {
        Some(p) => Some(cs_residual_max(&to_bipartite_shadow(graph)?, selection, p)),
        None => None,
    };
    let deficit = run.degree_target.map(|b| (0..n).filter(|&i| degree[i] < b.min(graph.degree(i))).count());
    Ok(build(degree, pairs.len(), total, selection.is_symmetric(), cs, deficit, run))
}

/// Report for a selection over a plain bipartite problem. Degrees cover
/// buyers followed by objects; bipartite pairs are undirected edges, so the
/// selection always counts as symmetric.
pub fn evaluate_bipartite(
    problem: &BipartiteProblem,
    selection: &EdgeSelection,
    prices: Option<&PriceState>,
    run: &RunInfo,
) -> Result<MetricsReport> {
    selection.check_against(problem)?;
    let degree: Vec<usize> = selection.buyer_degrees().iter().chain(selection.object_degrees()).copied().collect();
    let total = problem.pair_weight(selection.iter());
    let cs = prices.map(|p| cs_residual_max(problem, selection, p));
    let deficit = run.degree_target.map(|b| {
        let buyers = (0..problem.buyer_count()).filter(|&i| selection.buyer_degree(i) < b.min(problem.degree(i)));
        buyers.count()
    });
    Ok(build(degree, selection.len(), total, true, cs, deficit, run))
}

fn build(
    degree: Vec<usize>,
    edges: usize,
    total: f64,
    symmetric: bool,
    cs: Option<f64>,
    deficit: Option<usize>,
    run: &RunInfo,
) -> MetricsReport {
    let n = degree.len();
    let mut histogram = BTreeMap::new();
    for &d in &degree {
        *histogram.entry(d).or_insert(0) += 1;
    }
    let mean = degree.iter().sum::<usize>() as f64 / n as f64;
    let variance = degree.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n as f64;
    MetricsReport {
        node_count: n,
        selected_edges: edges,
        total_selected_weight: total,
        degree_histogram: histogram,
        degree_mean: mean,
        degree_variance: variance,
        is_symmetric: symmetric,
        iterations: run.iterations,
        wall_time_seconds: run.wall_time_seconds,
        epsilon_used: run.epsilon,
        cs_residual_max: cs,
        degree_target: run.degree_target,
        degree_deficit_nodes: deficit,
        parameters: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::auction_assign;

    fn cycle(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, false, (0..n).map(|i| (i, (i + 1) % n, 1.0 + i as f64))).unwrap()
    }

    #[test]
    fn regular_selection_has_zero_variance() {
        let g = cycle(5);
        let mut sel = EdgeSelection::with_cap(5, 5, 2);
        for e in g.edges() {
            sel.insert(e.src, e.dst).unwrap();
            sel.insert(e.dst, e.src).unwrap();
        }
        let r = evaluate(&g, &sel, None, &RunInfo::default()).unwrap();
        assert_eq!(r.degree_variance, 0.0);
        assert_eq!(r.degree_histogram, BTreeMap::from([(2, 5)]));
        assert_eq!(r.total_selected_weight, 15.0);
        assert!(r.is_symmetric);
        assert_eq!(r.cs_residual_max, None);
    }

    #[test]
    fn empty_selection() {
        let g = cycle(4);
        let sel = EdgeSelection::with_cap(4, 4, 2);
        let r = evaluate(&g, &sel, None, &RunInfo { degree_target: Some(2), ..Default::default() }).unwrap();
        assert_eq!(r.total_selected_weight, 0.0);
        assert_eq!(r.degree_histogram, BTreeMap::from([(0, 4)]));
        assert_eq!(r.degree_deficit_nodes, Some(4));
    }

    #[test]
    fn one_sided_pick_is_not_symmetric() {
        let g = cycle(4);
        let mut sel = EdgeSelection::new(4, 4, Some(1), None);
        sel.insert(0, 1).unwrap();
        let r = evaluate(&g, &sel, None, &RunInfo::default()).unwrap();
        assert!(!r.is_symmetric);
        assert_eq!(r.selected_edges, 1);
        assert_eq!(r.degree_mean * 4.0, 2.0);
    }

    #[test]
    fn residual_of_terminated_auction_within_epsilon() {
        let rows: Vec<Vec<f64>> =
            (0..5).map(|i| (0..5).map(|j| ((3 * i + 7 * j) % 5) as f64 + 0.5).collect()).collect();
        let p = BipartiteProblem::from_dense(&rows).unwrap();
        let out = auction_assign(&p, 0.05, 10_000).unwrap();
        let r = evaluate_bipartite(&p, &out.selection, Some(&out.prices), &RunInfo::default()).unwrap();
        assert!(r.cs_residual_max.unwrap() <= 0.05 + 1e-12);
    }

    #[test]
    fn residual_detects_bad_assignment() {
        let p = BipartiteProblem::from_dense(&[vec![5.0, 1.0]]).unwrap();
        let mut sel = EdgeSelection::with_cap(1, 2, 1);
        sel.insert(0, 1).unwrap();
        let prices = PriceState::new(2, 0.1).unwrap();
        assert_eq!(cs_residual_max(&p, &sel, &prices), 4.0);
    }
}
