//! Degree-`b` graph construction.
//!
//! Two auction-based b-edge selections are provided: repeated single-edge
//! auctions with the selected edges removed after every round, and a
//! multi-bid auction where each buyer bids on its `b` best objects at once.
//! The greedy kNN baseline and its max/min symmetrizations live here too.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::auction::{
    auction_assign_with, check_epsilon, default_max_rounds, AuctionConfig, AuctionOutcome, PriceState,
};
use crate::bidding::{self, BidParams, Book, Holdings};
use crate::error::{Error, Result};
use crate::graph::{to_bipartite_shadow, BipartiteProblem, EdgeSelection, WeightedGraph};
use crate::metrics::cs_residual_max;
use crate::parallel::run_parallel_auction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// `max_ij a_ij / (4n)`
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AuctionRounds,
    AuctionMultibid,
    Knn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetrize {
    Percentile,
    Max,
    Min,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfitFloor {
    None,
    /// Minus the largest edge weight.
    Auto,
    Fixed(f64),
}

/// How partition workers are run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// One scoped thread per partition.
    #[default]
    Threads,
    /// All partitions multiplexed on the calling thread.
    Inline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyConfig {
    pub b: usize,
    pub epsilon: EpsilonPolicy,
    pub method: Method,
    pub symmetrize: Symmetrize,
    pub partitions: usize,
    /// Outer iteration limit; `None` derives it from the weights and epsilon.
    pub max_rounds: Option<usize>,
    pub profit_floor: ProfitFloor,
    pub execution: Execution,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        Self {
            b: 1,
            epsilon: EpsilonPolicy::Auto,
            method: Method::AuctionMultibid,
            symmetrize: Symmetrize::Percentile,
            partitions: 1,
            max_rounds: None,
            profit_floor: ProfitFloor::None,
            execution: Execution::Threads,
        }
    }
}

impl SparsifyConfig {
    pub fn new(b: usize, method: Method) -> Self {
        Self { b, method, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::invalid("b must be at least 1"));
        }
        if self.partitions == 0 {
            return Err(Error::invalid("partition count must be at least 1"));
        }
        if let EpsilonPolicy::Fixed(eps) = self.epsilon {
            check_epsilon(eps)?;
        }
        if let ProfitFloor::Fixed(f) = self.profit_floor {
            if !f.is_finite() {
                return Err(Error::invalid("profit floor must be finite"));
            }
        }
        Ok(())
    }

    pub fn resolve_epsilon(&self, problem: &BipartiteProblem) -> f64 {
        match self.epsilon {
            EpsilonPolicy::Auto => crate::auction::default_epsilon(problem),
            EpsilonPolicy::Fixed(eps) => eps,
        }
    }

    pub fn resolve_max_rounds(&self, problem: &BipartiteProblem, epsilon: f64) -> usize {
        self.max_rounds.unwrap_or_else(|| default_max_rounds(problem.max_weight(), epsilon))
    }

    pub fn resolve_profit_floor(&self, problem: &BipartiteProblem) -> Option<f64> {
        match self.profit_floor {
            ProfitFloor::None => None,
            ProfitFloor::Auto => Some(-problem.max_weight()),
            ProfitFloor::Fixed(f) => Some(f),
        }
    }
}

macro_rules! str_enum {
    ($ty:ty { $($variant:path => $name:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $name),+ })
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(Error::invalid(format!("unknown {} `{other}`", stringify!($ty)))),
                }
            }
        }
    };
}

str_enum!(Method {
    Method::AuctionRounds => "auction_rounds",
    Method::AuctionMultibid => "auction_multibid",
    Method::Knn => "knn",
});

str_enum!(Symmetrize {
    Symmetrize::Percentile => "percentile",
    Symmetrize::Max => "max",
    Symmetrize::Min => "min",
    Symmetrize::None => "none",
});

str_enum!(Execution {
    Execution::Threads => "threads",
    Execution::Inline => "inline",
});

impl fmt::Display for EpsilonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonPolicy::Auto => f.write_str("auto"),
            EpsilonPolicy::Fixed(eps) => write!(f, "{eps}"),
        }
    }
}

impl FromStr for EpsilonPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(EpsilonPolicy::Auto);
        }
        let eps: f64 = s.parse().map_err(|_| Error::invalid(format!("bad epsilon `{s}`")))?;
        check_epsilon(eps)?;
        Ok(EpsilonPolicy::Fixed(eps))
    }
}

impl fmt::Display for ProfitFloor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfitFloor::None => f.write_str("none"),
            ProfitFloor::Auto => f.write_str("auto"),
            ProfitFloor::Fixed(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ProfitFloor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ProfitFloor::None),
            "auto" => Ok(ProfitFloor::Auto),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(ProfitFloor::Fixed)
                .ok_or_else(|| Error::invalid(format!("bad profit floor `{other}`"))),
        }
    }
}

/// Per-node `min(k, degree)` heaviest neighbours, ties to the lower id.
/// The result caps only the picking side.
pub fn knn_select(graph: &WeightedGraph, k: usize) -> Result<EdgeSelection> {
    let n = graph.node_count();
    knn_rows(n, n, k, |i, row| row.extend(graph.neighbors(i).iter().map(|nb| (nb.node, nb.weight))))
}

/// [`knn_select`] for buyers of a bipartite problem.
pub fn knn_select_bipartite(problem: &BipartiteProblem, k: usize) -> Result<EdgeSelection> {
    knn_rows(problem.buyer_count(), problem.object_count(), k, |i, row| {
        let (objects, weights) = problem.row(i);
        row.extend(objects.iter().copied().zip(weights.iter().copied()));
    })
}

fn knn_rows<F>(rows: usize, cols: usize, k: usize, mut fill: F) -> Result<EdgeSelection>
where
    F: FnMut(usize, &mut Vec<(usize, f64)>),
{
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut selection = EdgeSelection::new(rows, cols, Some(k), None);
    let mut row = Vec::new();
    let by_weight = |a: &(usize, f64), b: &(usize, f64)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
    for i in 0..rows {
        row.clear();
        fill(i, &mut row);
        if row.len() > k {
            row.select_nth_unstable_by(k - 1, by_weight);
            row.truncate(k);
        }
        for &(j, _) in &row {
            selection.insert(i, j)?;
        }
    }
    Ok(selection)
}

/// Union of both directions. Degrees may exceed the original cap, so the
/// result is uncapped.
pub fn symmetrize_max(selection: &EdgeSelection) -> EdgeSelection {
    let mut out = EdgeSelection::new(selection.buyer_count(), selection.object_count(), None, None);
    for (i, j) in selection.iter() {
        out.insert(i, j).expect("uncapped");
        out.insert(j, i).expect("uncapped");
    }
    out
}

/// Pairs selected in both directions.
pub fn symmetrize_min(selection: &EdgeSelection) -> EdgeSelection {
    let cap = selection.buyer_cap();
    let mut out = EdgeSelection::new(selection.buyer_count(), selection.object_count(), cap, cap);
    for (i, j) in selection.iter() {
        if selection.contains(j, i) {
            out.insert(i, j).expect("intersection stays under the cap");
        }
    }
    out
}

/// Position of neighbour `j` in `i`'s incident edges sorted by descending
/// weight, ties by ascending neighbour id.
pub fn percentile_rank(graph: &WeightedGraph, i: usize, j: usize) -> Option<usize> {
    let w = graph.weight(i, j)?;
    Some(graph.neighbors(i).iter().filter(|nb| nb.weight > w || (nb.weight == w && nb.node < j)).count())
}

/// Symmetric selection that resolves one-directional picks by percentile.
///
/// Mutual picks are kept. One-directional picks `i -> j` are then visited in
/// ascending order of the rank of `j` among `i`'s incident edges (ties by the
/// `(min, max)` endpoint pair) and kept while both endpoints are under the
/// cap, so a pick with a smaller rank displaces a competing pick with a larger
/// one. Nodes that lose edges are not refilled.
pub fn percentile_repair(graph: &WeightedGraph, selection: &EdgeSelection) -> Result<EdgeSelection> {
    let n = graph.node_count();
    if selection.buyer_count() != n || selection.object_count() != n {
        return Err(Error::invalid("selection does not match the graph's node count"));
    }
    let cap =
        selection.buyer_cap().unwrap_or_else(|| selection.buyer_degrees().iter().copied().max().unwrap_or(0)).max(1);
    let mut out = EdgeSelection::with_cap(n, n, cap);
    let mut proposals = Vec::new();
    for (i, j) in selection.iter() {
        let rank = percentile_rank(graph, i, j).ok_or(Error::MissingEdge(i, j))?;
        if selection.contains(j, i) {
            if i < j {
                out.insert(i, j)?;
                out.insert(j, i)?;
            }
        } else {
            proposals.push((rank, i.min(j), i.max(j), i, j));
        }
    }
    proposals.sort_unstable();
    for (_, _, _, i, j) in proposals {
        if out.buyer_degree(i) < cap && out.buyer_degree(j) < cap {
            out.insert(i, j)?;
            out.insert(j, i)?;
        }
    }
    Ok(out)
}

/// Result of the repeated-assignment method.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundsOutcome {
    /// Symmetric selection over the shadow problem.
    pub selection: EdgeSelection,
    /// One auction per round, each over the problem left after removing
    /// earlier rounds' edges.
    pub rounds: Vec<AuctionOutcome>,
    pub epsilon: f64,
    /// Largest epsilon-complementary-slackness residual over all rounds.
    pub cs_residual_max: f64,
}

impl RoundsOutcome {
    pub fn iterations(&self) -> usize {
        self.rounds.iter().map(|r| r.rounds).sum()
    }
}

/// `ceil(b / 2)` single-edge auctions on a shadow problem. After each round the
/// selected edges (in both directions) leave the problem and their undirected
/// projections join the selection. Nodes left above `b` (odd `b`) lose their
/// lightest edges.
pub fn auction_b_rounds(problem: &BipartiteProblem, config: &SparsifyConfig) -> Result<RoundsOutcome> {
    config.validate()?;
    if !problem.is_shadow() || problem.buyer_count() != problem.object_count() {
        return Err(Error::invalid("auction_rounds needs a shadow problem of a unipartite graph"));
    }
    let n = problem.buyer_count();
    let b = config.b;
    let epsilon = config.resolve_epsilon(problem);
    let auction = AuctionConfig {
        epsilon,
        max_rounds: config.resolve_max_rounds(problem, epsilon),
        profit_floor: config.resolve_profit_floor(problem),
    };
    let round_config = SparsifyConfig { b: 1, epsilon: EpsilonPolicy::Fixed(epsilon), ..config.clone() };

    let mut remaining = problem.clone();
    let mut chosen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut rounds = Vec::new();
    let mut residual: f64 = 0.0;
    for _ in 0..b.div_ceil(2) {
        if remaining.edge_count() == 0 {
            break;
        }
        let outcome = if config.partitions > 1 {
            run_parallel_auction(&remaining, &round_config)?
        } else {
            auction_assign_with(&remaining, &auction, |_| {})?
        };
        residual = residual.max(cs_residual_max(&remaining, &outcome.selection, &outcome.prices));
        let mut removed = HashSet::new();
        for (i, j) in outcome.selection.iter() {
            chosen.insert((i.min(j), i.max(j)));
            removed.insert((i, j));
            removed.insert((j, i));
        }
        remaining = remaining.without_pairs(&removed);
        rounds.push(outcome);
    }

    let mut degree = vec![0usize; n];
    for &(i, j) in &chosen {
        degree[i] += 1;
        degree[j] += 1;
    }
    for node in 0..n {
        if degree[node] <= b {
            continue;
        }
        let mut incident: Vec<(f64, usize)> = chosen
            .iter()
            .filter_map(|&(i, j)| match (i == node, j == node) {
                (true, _) => Some(j),
                (_, true) => Some(i),
                _ => None,
            })
            .map(|other| (problem.weight(node, other).expect("chosen edge exists"), other))
            .collect();
        // lightest first, ties drop the higher neighbour id first
        incident.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        for (_, other) in incident.into_iter().take(degree[node] - b) {
            chosen.remove(&(node.min(other), node.max(other)));
            degree[node] -= 1;
            degree[other] -= 1;
        }
    }

    let mut selection = EdgeSelection::with_cap(n, n, b);
    for (i, j) in chosen {
        selection.insert(i, j)?;
        selection.insert(j, i)?;
    }
    Ok(RoundsOutcome { selection, rounds, epsilon, cs_residual_max: residual })
}

/// Serial multi-bid auction: every buyer short of `min(b, degree)` objects
/// bids in one step on as many of its most profitable non-held objects as it
/// is missing. Runs sweeps in ascending buyer order while prices keep
/// changing.
pub fn auction_multibid(problem: &BipartiteProblem, config: &SparsifyConfig) -> Result<AuctionOutcome> {
    config.validate()?;
    let epsilon = config.resolve_epsilon(problem);
    check_epsilon(epsilon)?;
    let max_rounds = config.resolve_max_rounds(problem, epsilon);
    let params = BidParams { b: config.b, epsilon, profit_floor: config.resolve_profit_floor(problem) };
    let buyers = problem.buyer_count();
    let mut holdings: Holdings = vec![Vec::new(); buyers];
    let mut book: Book = vec![Vec::new(); problem.object_count()];
    let mut prices = vec![0.0; problem.object_count()];
    let mut events = vec![0; problem.object_count()];
    let mut rounds = 0;

    let finish = |holdings: &Holdings, prices: Vec<f64>, rounds, events| AuctionOutcome {
        selection: bidding::to_selection(problem, params.b, holdings),
        prices: bidding::to_prices(prices, epsilon, holdings),
        rounds,
        assignment_events: events,
    };

    loop {
        let active = (0..buyers).any(|i| bidding::wants_more(problem, params.b, i, holdings[i].len()));
        if !active {
            break;
        }
        if rounds >= max_rounds {
            let partial = finish(&holdings, prices, rounds, events);
            return Err(Error::NonTermination { rounds, partial: Box::new(partial) });
        }
        rounds += 1;
        let before = prices.clone();
        bidding::sweep(problem, &params, 0..buyers, &mut holdings, &mut book, &mut prices, &mut events);
        if prices == before {
            break;
        }
    }
    Ok(finish(&holdings, prices, rounds, events))
}

/// End-to-end result of [`sparsify`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyOutcome {
    /// Final selection over the shadow problem of the input graph.
    pub selection: EdgeSelection,
    /// Selection before symmetrization.
    pub raw: EdgeSelection,
    pub prices: Option<PriceState>,
    pub iterations: usize,
    /// Resolved epsilon; `None` for kNN.
    pub epsilon: Option<f64>,
    pub cs_residual_max: Option<f64>,
}

/// Runs the configured method on an undirected graph.
pub fn sparsify(graph: &WeightedGraph, config: &SparsifyConfig) -> Result<SparsifyOutcome> {
    config.validate()?;
    if graph.is_directed() {
        return Err(Error::invalid("sparsify expects an undirected graph"));
    }
    let symmetrize = |raw: &EdgeSelection| -> Result<EdgeSelection> {
        Ok(match config.symmetrize {
            Symmetrize::Percentile => percentile_repair(graph, raw)?,
            Symmetrize::Max => symmetrize_max(raw),
            Symmetrize::Min => symmetrize_min(raw),
            Symmetrize::None => raw.clone(),
        })
    };
    match config.method {
        Method::Knn => {
            let raw = knn_select(graph, config.b)?;
            Ok(SparsifyOutcome {
                selection: symmetrize(&raw)?,
                raw,
                prices: None,
                iterations: 0,
                epsilon: None,
                cs_residual_max: None,
            })
        }
        Method::AuctionRounds => {
            let problem = to_bipartite_shadow(graph)?;
            let out = auction_b_rounds(&problem, config)?;
            Ok(SparsifyOutcome {
                iterations: out.iterations(),
                raw: out.selection.clone(),
                selection: out.selection,
                prices: out.rounds.last().map(|r| r.prices.clone()),
                epsilon: Some(out.epsilon),
                cs_residual_max: Some(out.cs_residual_max),
            })
        }
        Method::AuctionMultibid => {
            let problem = to_bipartite_shadow(graph)?;
            let out = if config.partitions > 1 {
                run_parallel_auction(&problem, config)?
            } else {
                auction_multibid(&problem, config)?
            };
            let residual = cs_residual_max(&problem, &out.selection, &out.prices);
            Ok(SparsifyOutcome {
                selection: symmetrize(&out.selection)?,
                raw: out.selection,
                iterations: out.rounds,
                epsilon: Some(out.prices.epsilon()),
                cs_residual_max: Some(residual),
                prices: Some(out.prices),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize, weight: impl Fn(usize, usize) -> f64) -> WeightedGraph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (i, j, weight(i, j)));
        WeightedGraph::new(n, false, edges.collect::<Vec<_>>()).unwrap()
    }

    fn pairs(sel: &EdgeSelection) -> Vec<(usize, usize)> {
        sel.iter().collect()
    }

    #[test]
    fn knn_picks_heaviest() {
        // node 0 with neighbours 1, 2, 3
        let g = WeightedGraph::new(4, false, [(0, 1, 0.9), (0, 2, 0.5), (0, 3, 0.7)]).unwrap();
        let sel = knn_select(&g, 2).unwrap();
        let row0: Vec<_> = sel.iter().filter(|p| p.0 == 0).map(|p| p.1).collect();
        assert_eq!(row0, vec![1, 3]);
    }

    #[test]
    fn knn_saturates() {
        let g = complete(4, |i, j| (i + j) as f64);
        let sel = knn_select(&g, 5).unwrap();
        assert_eq!(sel.len(), 12);
        assert!(sel.is_symmetric());
        assert!(matches!(knn_select(&g, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn symmetrize_one_sided_pick() {
        let mut sel = EdgeSelection::new(3, 3, Some(1), None);
        sel.insert(0, 1).unwrap();
        assert_eq!(pairs(&symmetrize_max(&sel)), vec![(0, 1), (1, 0)]);
        assert!(symmetrize_min(&sel).is_empty());
    }

    #[test]
    fn symmetrize_fixed_point() {
        let mut sel = EdgeSelection::new(3, 3, Some(2), None);
        for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            sel.insert(i, j).unwrap();
        }
        assert_eq!(pairs(&symmetrize_max(&sel)), pairs(&sel));
        assert_eq!(pairs(&symmetrize_min(&sel)), pairs(&sel));
    }

    #[test]
    fn percentile_keeps_consistent_selection() {
        let g = complete(4, |i, j| 1.0 / (1 + i + j) as f64);
        let mut sel = EdgeSelection::with_cap(4, 4, 1);
        for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            sel.insert(i, j).unwrap();
        }
        assert_eq!(percentile_repair(&g, &sel).unwrap(), sel);
    }

    #[test]
    fn percentile_prefers_smaller_rank() {
        // node 0 ranks 1 first; node 1 ranks 0 third behind 2 and 3.
        let g = WeightedGraph::new(
            4,
            false,
            [(0, 1, 0.5), (0, 2, 0.1), (0, 3, 0.1), (1, 2, 0.9), (1, 3, 0.8), (2, 3, 0.05)],
        )
        .unwrap();
        assert_eq!(percentile_rank(&g, 0, 1), Some(0));
        assert_eq!(percentile_rank(&g, 1, 0), Some(2));
        // b = 1: 0 picks 1, but 1 picked 3 (its rank-1 edge)
        let mut sel = EdgeSelection::with_cap(4, 4, 1);
        sel.insert(0, 1).unwrap();
        sel.insert(1, 3).unwrap();
        let out = percentile_repair(&g, &sel).unwrap();
        assert_eq!(pairs(&out), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn b_rounds_on_uniform_four_cycle_keeps_transpositions() {
        // ties go to the lowest object, so the single round pairs 0<->1 and
        // 2<->3; each transposition is one undirected edge
        let g = WeightedGraph::new(4, false, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
        let p = to_bipartite_shadow(&g).unwrap();
        let out = auction_b_rounds(&p, &SparsifyConfig::new(2, Method::AuctionRounds)).unwrap();
        assert_eq!(out.rounds.len(), 1);
        assert_eq!(pairs(&out.selection), vec![(0, 1), (1, 0), (2, 3), (3, 2)]);
    }

    #[test]
    fn b_rounds_with_b_one_trims_to_matching() {
        let g = complete(5, |i, j| ((i * 7 + j * 3) % 11) as f64 + 1.0);
        let p = to_bipartite_shadow(&g).unwrap();
        let out = auction_b_rounds(&p, &SparsifyConfig::new(1, Method::AuctionRounds)).unwrap();
        assert_eq!(out.rounds.len(), 1);
        assert!(out.selection.buyer_degrees().iter().all(|&d| d <= 1));
        assert!(out.selection.is_symmetric() && out.selection.audit());
    }

    #[test]
    fn b_rounds_saturates_small_complete_graph() {
        let g = complete(3, |i, j| (i + j) as f64);
        let p = to_bipartite_shadow(&g).unwrap();
        let out = auction_b_rounds(&p, &SparsifyConfig::new(6, Method::AuctionRounds)).unwrap();
        assert_eq!(out.selection.buyer_degrees(), &[2, 2, 2]);
    }

    #[test]
    fn b_rounds_rejects_plain_bipartite_problem() {
        let p = BipartiteProblem::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(auction_b_rounds(&p, &SparsifyConfig::new(2, Method::AuctionRounds)).is_err());
    }

    #[test]
    fn multibid_single_buyer_prices() {
        let p = BipartiteProblem::from_dense(&[vec![5.0, 3.0, 1.0]]).unwrap();
        let config =
            SparsifyConfig { epsilon: EpsilonPolicy::Fixed(0.1), ..SparsifyConfig::new(2, Method::AuctionMultibid) };
        let out = auction_multibid(&p, &config).unwrap();
        assert_eq!(pairs(&out.selection), vec![(0, 0), (0, 1)]);
        // both prices from the pre-bid profits (5, 3, 1)
        assert!((out.prices.price(1) - 2.1).abs() < 1e-12);
        assert!((out.prices.price(0) - 2.1).abs() < 1e-12);
        assert_eq!(out.prices.price(2), 0.0);
    }

    #[test]
    fn multibid_with_b_one_matches_assignment_auction() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| (0..6).map(|j| ((i * 5 + j * 7) % 13) as f64).collect()).collect();
        let p = BipartiteProblem::from_dense(&rows).unwrap();
        let config =
            SparsifyConfig { epsilon: EpsilonPolicy::Fixed(0.1), ..SparsifyConfig::new(1, Method::AuctionMultibid) };
        let multi = auction_multibid(&p, &config).unwrap();
        let single = crate::auction::auction_assign(&p, 0.1, 10_000).unwrap();
        assert_eq!(multi.selection, single.selection);
        assert_eq!(multi.prices.prices(), single.prices.prices());
    }

    #[test]
    fn config_strings_round_trip() {
        for m in [Method::AuctionRounds, Method::AuctionMultibid, Method::Knn] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        for s in [Symmetrize::Percentile, Symmetrize::Max, Symmetrize::Min, Symmetrize::None] {
            assert_eq!(s.to_string().parse::<Symmetrize>().unwrap(), s);
        }
        assert_eq!("auto".parse::<EpsilonPolicy>().unwrap(), EpsilonPolicy::Auto);
        assert_eq!("0.25".parse::<EpsilonPolicy>().unwrap(), EpsilonPolicy::Fixed(0.25));
        assert!("-1".parse::<EpsilonPolicy>().is_err());
        assert_eq!("-2.5".parse::<ProfitFloor>().unwrap(), ProfitFloor::Fixed(-2.5));
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SparsifyConfig::new(0, Method::Knn).validate().is_err());
        let c = SparsifyConfig { partitions: 0, ..SparsifyConfig::new(2, Method::Knn) };
        assert!(c.validate().is_err());
    }
}
