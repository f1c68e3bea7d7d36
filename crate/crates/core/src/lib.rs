//! Sparse, nearly b-regular subgraphs from dense weighted graphs.
//!
//! A unipartite graph is converted to an assignment problem between its nodes
//! and their shadow copies. Auction algorithms then pick up to `b` edges per
//! node, either by repeated single-edge auctions or by letting every buyer bid
//! on `b` objects at once, optionally split over row partitions that
//! synchronize prices by element-wise maximum. Exact exhaustive solvers for
//! small instances and a kNN baseline are included for comparison.
//!
//! ```
//! use auction_graph::{gen_uniform_unipartite, sparsify, Method, SparsifyConfig};
//!
//! let graph = gen_uniform_unipartite(30, 7).unwrap();
//! let out = sparsify(&graph, &SparsifyConfig::new(4, Method::AuctionMultibid)).unwrap();
//! assert!(out.selection.is_symmetric());
//! assert!(out.selection.buyer_degrees().iter().all(|&d| d <= 4));
//! ```

pub mod auction;
mod bidding;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod parallel;
pub mod sparsify;

pub use auction::{
    auction_assign, auction_assign_with, compute_bid, default_epsilon, default_max_rounds, AuctionConfig,
    AuctionOutcome, Bid, PriceState,
};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use graph::{apply_selection, to_bipartite_shadow, BipartiteProblem, Edge, EdgeSelection, WeightedGraph};
pub use io::{
    build_gaussian_adjacency, gen_two_moons, gen_uniform_bipartite, gen_uniform_unipartite, load_matrix_market,
    save_edge_list, save_report, FeatureMatrix,
};
pub use metrics::{cs_residual_max, evaluate, evaluate_bipartite, MetricsReport, RunInfo};
pub use oracle::{exact_assignment, exact_bmatching, ExactAssignment};
pub use parallel::{partition_rows, run_parallel_auction, run_parallel_auction_observed, PartitionPlan};
pub use sparsify::{
    auction_b_rounds, auction_multibid, knn_select, knn_select_bipartite, percentile_repair, sparsify, symmetrize_max,
    symmetrize_min, EpsilonPolicy, Execution, Method, ProfitFloor, RoundsOutcome, SparsifyConfig, SparsifyOutcome,
    Symmetrize,
};
