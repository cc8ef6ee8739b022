//! Recombination ensembles on precinct adjacency graphs: districting
//! metrics, ensemble-derived geometric targets, and the price of enforcing
//! them, including one-party belief deviations.

pub mod analysis;
pub mod deviation;
pub mod districting;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod gridgen;
pub mod metrics;
pub mod recom;

pub use analysis::{
    ensemble_targets, evaluate, mark_gt, price_of_fairness_report, write_records_csv, Beliefs, EnsembleRecord, Optima,
    PriceOfFairness, SeatTarget, NO_GT_OBSERVED,
};
pub use deviation::{
    apply_deviation, deviate_votes, deviation_report, deviation_sweep, scenario_seed, write_sweep_csv, Deviation, DeviationMode, SweepRow,
};
pub use districting::Districting;
pub use enumerate::{enumerate_districtings, for_each_districting};
pub use error::{ChainError, DistrictingError, EnumerationError, GraphError};
pub use graph::{Edge, GraphInstance, Node, NodeId, Votes};
pub use gridgen::{grid, GridSpec, Pattern, TRUTH_DATASET};
pub use metrics::{competitive_count, efficiency_gap, polsby_popper, seats, Compactness};
pub use recom::{recom_step, run_chain, run_chain_from, seed_districting, ChainRun, RNG_ALGORITHM};
