//! Single-edge auction for the linear assignment problem.
//!
//! Buyers bid for the adjacent object with the highest profit `a_ij - p_j`.
//! The winning bid raises the object's price by the gap between the best and
//! second-best profit plus `epsilon`, which rules out price wars between
//! buyers with tied profits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{BipartiteProblem, EdgeSelection};

/// Object prices plus the price each current holder paid.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceState {
    prices: Vec<f64>,
    epsilon: f64,
    paid: BTreeMap<(usize, usize), f64>,
}

impl PriceState {
    pub fn new(object_count: usize, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self { prices: vec![0.0; object_count], epsilon, paid: BTreeMap::new() })
    }

    pub(crate) fn from_parts(prices: Vec<f64>, epsilon: f64, paid: BTreeMap<(usize, usize), f64>) -> Self {
        Self { prices, epsilon, paid }
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn price(&self, object: usize) -> f64 {
        self.prices[object]
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Price paid by `buyer` for `object`; falls back to the current object
    /// price for pairs without a recorded bid.
    pub fn paid(&self, buyer: usize, object: usize) -> f64 {
        self.paid.get(&(buyer, object)).copied().unwrap_or(self.prices[object])
    }

    /// Implicit buyer profit `a_ij - p_j` for a held pair.
    pub fn profit(&self, problem: &BipartiteProblem, buyer: usize, object: usize) -> Option<f64> {
        problem.weight(buyer, object).map(|w| w - self.paid(buyer, object))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bid {
    pub buyer: usize,
    pub object: usize,
    /// Price increase: best minus second-best profit, plus epsilon.
    pub increment: f64,
    /// Best profit before the bid.
    pub profit: f64,
}

/// Best object for `buyer` at the current prices, or `None` when the buyer
/// has no adjacent objects.
///
/// Ties go to the lowest object id. A buyer with a single adjacent object
/// takes the second-best profit as 0, capped at the best profit so the
/// increment never drops below epsilon.
pub fn compute_bid(buyer: usize, problem: &BipartiteProblem, prices: &PriceState) -> Option<Bid> {
    let (objects, weights) = problem.row(buyer);
    let mut best: Option<(usize, f64)> = None;
    let mut second = f64::NEG_INFINITY;
    for (&object, &weight) in objects.iter().zip(weights) {
        let profit = weight - prices.prices[object];
        match best {
            Some((_, top)) if profit <= top => second = second.max(profit),
            Some((_, top)) => {
                second = top;
                best = Some((object, profit));
            }
            None => best = Some((object, profit)),
        }
    }
    let (object, profit) = best?;
    if objects.len() == 1 {
        second = profit.min(0.0);
    }
    Some(Bid { buyer, object, increment: profit - second + prices.epsilon, profit })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuctionConfig {
    pub epsilon: f64,
    pub max_rounds: usize,
    /// Buyers whose best profit falls below the floor stop bidding.
    pub profit_floor: Option<f64>,
}

impl AuctionConfig {
    /// Config with the default round limit for `problem`.
    pub fn for_problem(problem: &BipartiteProblem, epsilon: f64) -> Self {
        Self { epsilon, max_rounds: default_max_rounds(problem.max_weight(), epsilon), profit_floor: None }
    }
}

/// `max_ij a_ij / (4n)` with `n` the larger side; `1 / (4n)` when every
/// weight is zero.
pub fn default_epsilon(problem: &BipartiteProblem) -> f64 {
    let n = problem.buyer_count().max(problem.object_count()) as f64;
    let max = problem.max_weight();
    if max > 0.0 {
        max / (4.0 * n)
    } else {
        1.0 / (4.0 * n)
    }
}

/// `10 * (1 + ceil(max_weight / epsilon))`, ten times the per-object bound
/// on assignment events.
pub fn default_max_rounds(max_weight: f64, epsilon: f64) -> usize {
    let per_object = (max_weight / epsilon).ceil();
    if per_object.is_finite() && per_object < (usize::MAX / 20) as f64 {
        10 * (1 + per_object as usize)
    } else {
        usize::MAX
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("epsilon must be positive and finite, got {epsilon}")))
    }
}

/// Result of an auction run.
#[derive(Debug, Clone, PartialEq)]
pub struct AuctionOutcome {
    pub selection: EdgeSelection,
    pub prices: PriceState,
    /// Passes over the unmatched buyers (outer iterations for the b-edge
    /// and parallel variants).
    pub rounds: usize,
    /// How many times each object was won.
    pub assignment_events: Vec<usize>,
}

impl AuctionOutcome {
    pub fn total_weight(&self, problem: &BipartiteProblem) -> f64 {
        problem.pair_weight(self.selection.iter())
    }
}

/// One object changing hands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub buyer: usize,
    pub object: usize,
    pub evicted: Option<usize>,
    pub old_price: f64,
    pub new_price: f64,
}

pub fn auction_assign(problem: &BipartiteProblem, epsilon: f64, max_rounds: usize) -> Result<AuctionOutcome> {
    let config = AuctionConfig { epsilon, max_rounds, profit_floor: None };
    auction_assign_with(problem, &config, |_| {})
}

/// Gauss-Seidel auction: each round visits unmatched buyers in ascending id
/// order. Stops once every buyer with a nonempty adjacency is matched, a
/// round changes nothing, or `max_rounds` is reached (an error carrying the
/// partial result).
pub fn auction_assign_with<F>(
    problem: &BipartiteProblem,
    config: &AuctionConfig,
    mut observe: F,
) -> Result<AuctionOutcome>
where
    F: FnMut(&Assignment),
{
    let mut prices = PriceState::new(problem.object_count(), config.epsilon)?;
    let buyers = problem.buyer_count();
    let mut owner: Vec<Option<usize>> = vec![None; problem.object_count()];
    let mut holding: Vec<Option<usize>> = vec![None; buyers];
    let mut events = vec![0usize; problem.object_count()];
    let mut rounds = 0;

    let unmatched = |holding: &[Option<usize>], i: usize| holding[i].is_none() && problem.degree(i) > 0;

    let finish = |holding: &[Option<usize>], prices: PriceState, rounds, events| {
        let mut selection = EdgeSelection::with_cap(buyers, problem.object_count(), 1);
        let mut paid = BTreeMap::new();
        for (i, held) in holding.iter().enumerate() {
            if let Some(j) = *held {
                selection.insert(i, j).expect("one object per buyer");
                paid.insert((i, j), prices.prices[j]);
            }
        }
        let prices = PriceState { paid, ..prices };
        AuctionOutcome { selection, prices, rounds, assignment_events: events }
    };

    loop {
        if !(0..buyers).any(|i| unmatched(&holding, i)) {
            break;
        }
        if rounds >= config.max_rounds {
            let partial = finish(&holding, prices, rounds, events);
            return Err(Error::NonTermination { rounds, partial: Box::new(partial) });
        }
        rounds += 1;
        let mut changed = false;
        for i in 0..buyers {
            if !unmatched(&holding, i) {
                continue;
            }
            let Some(bid) = compute_bid(i, problem, &prices) else { continue };
            if config.profit_floor.is_some_and(|floor| bid.profit < floor) {
                continue;
            }
            let j = bid.object;
            let old_price = prices.prices[j];
            prices.prices[j] = old_price + bid.increment;
            let evicted = owner[j].replace(i);
            if let Some(k) = evicted {
                holding[k] = None;
            }
            holding[i] = Some(j);
            events[j] += 1;
            changed = true;
            observe(&Assignment { buyer: i, object: j, evicted, old_price, new_price: prices.prices[j] });
        }
        if !changed {
            break;
        }
    }
    Ok(finish(&holding, prices, rounds, events))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prices(values: &[f64], epsilon: f64) -> PriceState {
        PriceState::from_parts(values.to_vec(), epsilon, BTreeMap::new())
    }

    #[test]
    fn bid_uses_best_minus_second_plus_epsilon() {
        let p = BipartiteProblem::from_dense(&[vec![7.0, 4.0, 3.0]]).unwrap();
        let bid = compute_bid(0, &p, &prices(&[2.0, 1.0, 1.0], 0.1)).unwrap();
        assert_eq!(bid.object, 0);
        assert!((bid.increment - 2.1).abs() < 1e-12);
    }

    #[test]
    fn tied_profits_still_raise_price_by_epsilon() {
        let p = BipartiteProblem::from_dense(&[vec![1.0, 1.0]]).unwrap();
        let bid = compute_bid(0, &p, &prices(&[0.0, 0.0], 0.1)).unwrap();
        assert_eq!(bid.object, 0);
        assert!((bid.increment - 0.1).abs() < 1e-12);
    }

    #[test]
    fn isolated_buyer_has_no_bid() {
        let p = BipartiteProblem::new(2, 2, [(1, 0, 1.0)]).unwrap();
        assert!(compute_bid(0, &p, &prices(&[0.0, 0.0], 0.1)).is_none());
    }

    #[test]
    fn single_object_bid_takes_second_best_as_zero() {
        let p = BipartiteProblem::new(1, 2, [(0, 1, 3.0)]).unwrap();
        let bid = compute_bid(0, &p, &prices(&[0.0, 1.0], 0.5)).unwrap();
        assert_eq!(bid.object, 1);
        assert!((bid.increment - 2.5).abs() < 1e-12);
        // negative profit: increment stays at epsilon
        let bid = compute_bid(0, &p, &prices(&[0.0, 5.0], 0.5)).unwrap();
        assert!((bid.increment - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_reaches_diagonal() {
        let p = BipartiteProblem::from_dense(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let out = auction_assign(&p, 0.01, 1000).unwrap();
        assert_eq!(out.selection.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert_eq!(out.total_weight(&p), 4.0);
    }

    #[test]
    fn diagonal_only_is_identity() {
        let p = BipartiteProblem::new(3, 3, (0..3).map(|i| (i, i, 1.0))).unwrap();
        let out = auction_assign(&p, 0.1, 100).unwrap();
        assert_eq!(out.selection.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(out.rounds, 1);
    }

    #[test]
    fn infeasible_without_floor_reports_partial_result() {
        // two buyers share a single object
        let p = BipartiteProblem::new(2, 1, [(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        match auction_assign(&p, 0.1, 50) {
            Err(Error::NonTermination { rounds, partial }) => {
                assert_eq!(rounds, 50);
                assert_eq!(partial.selection.len(), 1);
                assert!(partial.selection.audit());
            }
            other => panic!("expected non-termination, got {other:?}"),
        }
    }

    #[test]
    fn profit_floor_lets_infeasible_instances_stop() {
        let p = BipartiteProblem::new(2, 1, [(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        let config = AuctionConfig { epsilon: 0.1, max_rounds: 1000, profit_floor: Some(-1.0) };
        let out = auction_assign_with(&p, &config, |_| {}).unwrap();
        assert_eq!(out.selection.len(), 1);
        assert!(out.rounds < 1000);
    }

    #[test]
    fn rejects_bad_epsilon() {
        let p = BipartiteProblem::from_dense(&[vec![1.0]]).unwrap();
        assert!(matches!(auction_assign(&p, 0.0, 10), Err(Error::InvalidArgument(_))));
        assert!(matches!(auction_assign(&p, f64::NAN, 10), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn default_epsilon_and_rounds() {
        let p = BipartiteProblem::from_dense(&[vec![2.0, 1.0], vec![1.0, 4.0]]).unwrap();
        assert_eq!(default_epsilon(&p), 0.5);
        assert_eq!(default_max_rounds(4.0, 0.5), 90);
        let zero = BipartiteProblem::from_dense(&[vec![0.0, 0.0]]).unwrap();
        assert_eq!(default_epsilon(&zero), 0.125);
    }
}
