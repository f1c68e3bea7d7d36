//! Multi-object bidding sweep shared by the serial and partitioned b-edge
//! auctions.
//!
//! A buyer that holds `h < min(b, degree)` objects bids at once on the
//! `d = min(b, degree) - h` most profitable objects it does not hold yet.
//! Object `j_t` is repriced to `p_{j_t} + (profit_t - profit_{t+1}) + epsilon`,
//! all profits taken over non-held objects at the prices seen before the bid.
//! Held objects are kept until another buyer evicts them. Each object keeps
//! at most `b` holders; a new holder pushes out the lowest bid.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::auction::PriceState;
use crate::graph::{BipartiteProblem, EdgeSelection};

#[derive(Debug, Clone, Copy)]
pub(crate) struct BidParams {
    pub b: usize,
    pub epsilon: f64,
    pub profit_floor: Option<f64>,
}

/// Held `(object, bid)` pairs per buyer.
pub(crate) type Holdings = Vec<Vec<(usize, f64)>>;
/// Holders `(buyer, bid)` per object.
pub(crate) type Book = Vec<Vec<(usize, f64)>>;

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct SweepStats {
    pub bids: usize,
}

pub(crate) fn wants_more(problem: &BipartiteProblem, b: usize, buyer: usize, held: usize) -> bool {
    held < b.min(problem.degree(buyer))
}

/// Top `count` objects by profit outside `held`, ties to the lower object id.
/// Returns `(object, profit)` in descending profit order.
pub(crate) fn top_profits(
    problem: &BipartiteProblem,
    buyer: usize,
    prices: &[f64],
    count: usize,
    held: &[(usize, f64)],
    out: &mut Vec<(usize, f64)>,
) {
    out.clear();
    let (objects, weights) = problem.row(buyer);
    for (&object, &weight) in objects.iter().zip(weights) {
        if held.iter().any(|&(o, _)| o == object) {
            continue;
        }
        let profit = weight - prices[object];
        if out.len() == count && out.last().is_some_and(|&(_, p)| profit <= p) {
            continue;
        }
        // objects arrive in ascending id order, so equal profits stay behind
        let pos = out.partition_point(|&(_, p)| p >= profit);
        if out.len() == count {
            out.pop();
        }
        out.insert(pos, (object, profit));
    }
}

/// One Gauss-Seidel pass over `buyers`. `holdings` is indexed by
/// `buyer - buyers.start`; `book` only lists holders from the same range.
pub(crate) fn sweep(
    problem: &BipartiteProblem,
    params: &BidParams,
    buyers: Range<usize>,
    holdings: &mut [Vec<(usize, f64)>],
    book: &mut Book,
    prices: &mut [f64],
    events: &mut [usize],
) -> SweepStats {
    let b = params.b;
    let offset = buyers.start;
    let mut stats = SweepStats::default();
    let mut top = Vec::with_capacity(b + 1);
    let mut raised = Vec::with_capacity(b);

    for buyer in buyers {
        let held = holdings[buyer - offset].len();
        if !wants_more(problem, b, buyer, held) {
            continue;
        }
        let deficit = b.min(problem.degree(buyer)) - held;
        top_profits(problem, buyer, prices, deficit + 1, &holdings[buyer - offset], &mut top);
        let Some(&(_, best)) = top.first() else { continue };
        if params.profit_floor.is_some_and(|floor| best < floor) {
            continue;
        }
        let count = deficit.min(top.len());
        raised.clear();
        for t in 0..count {
            let (object, profit) = top[t];
            let next = match top.get(t + 1) {
                Some(&(_, p)) => p,
                None => profit.min(0.0),
            };
            raised.push((object, prices[object] + (profit - next + params.epsilon)));
        }

        for &(object, price) in &raised {
            prices[object] = price;
            events[object] += 1;
            holdings[buyer - offset].push((object, price));
            let holders = &mut book[object];
            holders.push((buyer, price));
            if holders.len() > b {
                let victim = lowest_bid(holders);
                let (loser, _) = holders.swap_remove(victim);
                holdings[loser - offset].retain(|&(o, _)| o != object);
            }
        }
        stats.bids += 1;
    }
    stats
}

/// Index of the weakest holder: lowest bid, ties to the higher buyer id.
pub(crate) fn lowest_bid(holders: &[(usize, f64)]) -> usize {
    let mut victim = 0;
    for (k, &(buyer, bid)) in holders.iter().enumerate().skip(1) {
        let (vb, vbid) = holders[victim];
        if bid < vbid || (bid == vbid && buyer > vb) {
            victim = k;
        }
    }
    victim
}

pub(crate) fn to_selection(problem: &BipartiteProblem, b: usize, holdings: &Holdings) -> EdgeSelection {
    let mut selection = EdgeSelection::with_cap(problem.buyer_count(), problem.object_count(), b);
    for (buyer, held) in holdings.iter().enumerate() {
        for &(object, _) in held {
            selection.insert(buyer, object).expect("holdings respect the cap");
        }
    }
    selection
}

pub(crate) fn to_prices(prices: Vec<f64>, epsilon: f64, holdings: &Holdings) -> PriceState {
    let paid: BTreeMap<_, _> = holdings
        .iter()
        .enumerate()
        .flat_map(|(buyer, held)| held.iter().map(move |&(object, bid)| ((buyer, object), bid)))
        .collect();
    PriceState::from_parts(prices, epsilon, paid)
}
