//! Row-partitioned auction with bulk-synchronous price synchronization.
//!
//! Buyers are split into `L` contiguous ranges. In every outer iteration each
//! partition runs one bidding sweep over its own buyers against a private
//! copy of the prices. At the barrier a single reducer sets every price to the
//! element-wise maximum of the partition copies and resolves objects that
//! ended up with more than `b` holders across partitions: the `b` highest bids
//! stay (ties to the lower buyer id), the rest become active again.

use std::ops::Range;

use crate::auction::{check_epsilon, AuctionOutcome};
use crate::bidding::{self, BidParams, Book, Holdings};
use crate::error::{Error, Result};
use crate::graph::{BipartiteProblem, EdgeSelection};
use crate::sparsify::{Execution, SparsifyConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    ranges: Vec<Range<usize>>,
    edge_counts: Vec<usize>,
}

impl PartitionPlan {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    /// Edges owned by each partition (edges of its buyers).
    pub fn edge_counts(&self) -> &[usize] {
        &self.edge_counts
    }

    pub fn partition_of(&self, buyer: usize) -> Option<usize> {
        self.ranges.iter().position(|r| r.contains(&buyer))
    }
}

/// Contiguous buyer ranges whose sizes differ by at most one; larger ranges
/// come first.
pub fn partition_rows(problem: &BipartiteProblem, parts: usize) -> Result<PartitionPlan> {
    let n = problem.buyer_count();
    if parts == 0 {
        return Err(Error::invalid("partition count must be at least 1"));
    }
    if parts > n {
        return Err(Error::invalid(format!("{parts} partitions for {n} buyers")));
    }
    let (base, extra) = (n / parts, n % parts);
    let mut ranges = Vec::with_capacity(parts);
    let mut start = 0;
    for l in 0..parts {
        let len = base + usize::from(l < extra);
        ranges.push(start..start + len);
        start += len;
    }
    let edge_counts = ranges.iter().map(|r| r.clone().map(|i| problem.degree(i)).sum()).collect();
    Ok(PartitionPlan { ranges, edge_counts })
}

/// State visible to a post-barrier hook.
pub struct BarrierView<'a> {
    pub iteration: usize,
    pub prices: &'a [f64],
    problem: &'a BipartiteProblem,
    workers: &'a [Worker],
}

impl BarrierView<'_> {
    /// Uncapped snapshot of all current holdings.
    pub fn selection(&self) -> EdgeSelection {
        snapshot(self.problem, self.workers)
    }
}

struct Worker {
    range: Range<usize>,
    holdings: Holdings,
    book: Book,
    prices: Vec<f64>,
    events: Vec<usize>,
}

impl Worker {
    fn wants_more(&self, problem: &BipartiteProblem, b: usize) -> bool {
        self.range.clone().any(|i| bidding::wants_more(problem, b, i, self.holdings[i - self.range.start].len()))
    }

    fn sweep(&mut self, problem: &BipartiteProblem, params: &BidParams) {
        bidding::sweep(
            problem,
            params,
            self.range.clone(),
            &mut self.holdings,
            &mut self.book,
            &mut self.prices,
            &mut self.events,
        );
    }
}

pub fn run_parallel_auction(problem: &BipartiteProblem, config: &SparsifyConfig) -> Result<AuctionOutcome> {
    run_parallel_auction_observed(problem, config, |_| {})
}

/// [`run_parallel_auction`] calling `hook` after every barrier.
pub fn run_parallel_auction_observed<F>(
    problem: &BipartiteProblem,
    config: &SparsifyConfig,
    mut hook: F,
) -> Result<AuctionOutcome>
where
    F: FnMut(&BarrierView<'_>),
{
    config.validate()?;
    let plan = partition_rows(problem, config.partitions)?;
    let epsilon = config.resolve_epsilon(problem);
    check_epsilon(epsilon)?;
    let max_rounds = config.resolve_max_rounds(problem, epsilon);
    let params = BidParams { b: config.b, epsilon, profit_floor: config.resolve_profit_floor(problem) };
    let objects = problem.object_count();

    let mut workers: Vec<Worker> = plan
        .ranges()
        .iter()
        .map(|r| Worker {
            range: r.clone(),
            holdings: vec![Vec::new(); r.len()],
            book: vec![Vec::new(); objects],
            prices: vec![0.0; objects],
            events: vec![0; objects],
        })
        .collect();
    let mut prices = vec![0.0; objects];
    let mut iterations = 0;
    let mut merged: Vec<(f64, usize, usize)> = Vec::new();

    loop {
        if !workers.iter().any(|w| w.wants_more(problem, params.b)) {
            break;
        }
        if iterations >= max_rounds {
            let partial = finish(problem, &params, &workers, prices, iterations);
            return Err(Error::NonTermination { rounds: iterations, partial: Box::new(partial) });
        }
        iterations += 1;

        for w in &mut workers {
            w.prices.copy_from_slice(&prices);
        }
        match config.execution {
            Execution::Inline => workers.iter_mut().for_each(|w| w.sweep(problem, &params)),
            Execution::Threads if workers.len() == 1 => workers[0].sweep(problem, &params),
            Execution::Threads => std::thread::scope(|s| {
                for w in workers.iter_mut() {
                    s.spawn(|| w.sweep(problem, &params));
                }
            }),
        }

        // barrier: price max-reduction, then global conflict resolution
        let mut changed = false;
        for (j, p) in prices.iter_mut().enumerate() {
            let top = workers.iter().map(|w| w.prices[j]).fold(*p, f64::max);
            if top != *p {
                *p = top;
                changed = true;
            }
        }
        if workers.len() > 1 {
            for j in 0..objects {
                let total: usize = workers.iter().map(|w| w.book[j].len()).sum();
                if total <= params.b {
                    continue;
                }
                merged.clear();
                for (l, w) in workers.iter().enumerate() {
                    merged.extend(w.book[j].iter().map(|&(buyer, bid)| (bid, buyer, l)));
                }
                merged.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                for &(_, buyer, l) in &merged[params.b..] {
                    let w = &mut workers[l];
                    w.book[j].retain(|&(h, _)| h != buyer);
                    w.holdings[buyer - w.range.start].retain(|&(o, _)| o != j);
                }
            }
        }

        hook(&BarrierView { iteration: iterations, prices: &prices, problem, workers: &workers });

        if !changed {
            break;
        }
    }
    Ok(finish(problem, &params, &workers, prices, iterations))
}

fn all_holdings(workers: &[Worker]) -> Holdings {
    workers.iter().flat_map(|w| w.holdings.iter().cloned()).collect()
}

fn snapshot(problem: &BipartiteProblem, workers: &[Worker]) -> EdgeSelection {
    let mut selection = EdgeSelection::new(problem.buyer_count(), problem.object_count(), None, None);
    for w in workers {
        for (k, held) in w.holdings.iter().enumerate() {
            for &(object, _) in held {
                selection.insert(w.range.start + k, object).expect("uncapped");
            }
        }
    }
    selection
}

fn finish(
    problem: &BipartiteProblem,
    params: &BidParams,
    workers: &[Worker],
    prices: Vec<f64>,
    rounds: usize,
) -> AuctionOutcome {
    let holdings = all_holdings(workers);
    let mut events = vec![0; problem.object_count()];
    for w in workers {
        for (total, e) in events.iter_mut().zip(&w.events) {
            *total += e;
        }
    }
    AuctionOutcome {
        selection: bidding::to_selection(problem, params.b, &holdings),
        prices: bidding::to_prices(prices, params.epsilon, &holdings),
        rounds,
        assignment_events: events,
    }
}
