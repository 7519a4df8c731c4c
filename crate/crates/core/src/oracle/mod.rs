//! Exact reference solvers, independent of the auction implementation.

mod brute;
mod flow;

use thiserror::Error;

pub use brute::{brute_force_optimum, MAX_ENUMERATION};
pub use flow::{min_cost_flow_optimum, network_from_instance, FlowNetwork};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance admits {combinations} candidate maps, above the enumeration limit {limit}")]
    TooLarge { combinations: u128, limit: u64 },
    #[error("no feasible assignment exists")]
    Infeasible,
    #[error("{0}")]
    Instance(#[from] crate::instance::InstanceError),
}
