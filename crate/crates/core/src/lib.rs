//! Client association for 60 GHz access networks.
//!
//! The crate models a line (or grid) of millimeter-wave access points serving
//! single-antenna clients, turns a placement into an integer benefit matrix
//! (benefit = achievable rate over demanded rate), and solves the resulting
//! multi-assignment problem with a two-phase auction: a forward phase in which
//! access points bid for clients, followed by a reverse phase in which the
//! remaining clients bid for access points. The solution carries an
//! epsilon-complementary-slackness certificate that proves optimality whenever
//! epsilon < 1/m and benefits are integers.
//!
//! Independent exact oracles (exhaustive enumeration and a successive
//! shortest-path min-cost-flow solver) and two association baselines (strongest
//! signal, uniform random) support cross-checking and experiments.

pub mod assignment;
pub mod auction;
pub mod baselines;
pub mod channel;
pub mod instance;
pub mod oracle;
pub mod record;
pub mod scenario;

pub use assignment::Assignment;
pub use auction::{
    check_epsilon_cs, dual_objective, dual_objective_scaled, forward_auction, reverse_auction,
    solve, solve_traced, AuctionConfig, AuctionError, CsReport, ForwardAuction, Phase, PriceState,
    ReverseAuction, SolveResult, TieBreak, TraceEvent,
};
pub use baselines::{random_association, rssi_association, BaselineError};
pub use channel::{
    achievable_rate, dbm_per_mhz_to_w_per_hz, dbm_to_w, snr_at_distance, snr_db_at_distance,
    solve_cell_radius, w_to_dbm, ChannelError, RadioParams,
};
pub use instance::{Instance, InstanceError};
pub use oracle::{brute_force_optimum, min_cost_flow_optimum, FlowNetwork, OracleError};
pub use record::{CertStatus, CertificateSummary, Method, RunRecord};
pub use scenario::{
    generate_scenario, generate_scenario_with, GeneratorConfig, Layout, Scenario, ScenarioError,
};

pub type Epsilon = num_rational::Ratio<i64>;
