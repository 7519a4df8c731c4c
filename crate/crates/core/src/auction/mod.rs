//! Two-phase auction solver for the multi-assignment problem.
//!
//! Phase one is a forward auction: unassigned access points bid for their
//! most profitable in-range client, raising client prices until every access
//! point holds exactly one client. Phase two freezes the profit cap `lambda`
//! at the highest access-point profit and runs a reverse auction: unassigned
//! clients bid for access points, raising profits toward the cap until every
//! client is placed. Both phases preserve epsilon-complementary slackness, so
//! with integer benefits and `epsilon < 1/m` the final assignment is provably
//! optimal.
//!
//! All price arithmetic is exact: values live on an integer grid of
//! `1/den`-ths of a benefit unit, where `den` is the reduced denominator of
//! epsilon, so certificate equalities never suffer float drift.

mod cs;
mod forward;
mod reverse;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::Assignment;
use crate::instance::Instance;
use crate::record::{CertStatus, CertificateSummary, Method, RunRecord};
use crate::Epsilon;

pub use cs::{check_epsilon_cs, dual_objective, dual_objective_scaled, CsReport};
pub use forward::ForwardAuction;
pub use reverse::ReverseAuction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Forward,
    Reverse,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::Forward => write!(f, "forward"),
            Phase::Reverse => write!(f, "reverse"),
        }
    }
}

#[derive(Debug, Error)]
pub enum AuctionError {
    #[error(
        "{phase} phase exceeded {limit} bids; the coverage sets may admit no feasible assignment"
    )]
    IterationLimit { phase: Phase, limit: u64 },
    #[error("invalid epsilon: {0}")]
    BadEpsilon(String),
    #[error("invalid start state: {0}")]
    BadStart(String),
    #[error("state does not match the instance: {0}")]
    DimensionMismatch(String),
    #[error("assignment pair ({ap}, {client}) is outside the coverage sets")]
    PairOutsideCoverage { ap: usize, client: usize },
    #[error("benefit scale overflow: {0}")]
    Overflow(String),
}

/// Candidate selection rule when several choices share the best value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    HighestIndex,
}

impl TieBreak {
    fn replaces(self, candidate: i64, incumbent: i64) -> bool {
        match self {
            TieBreak::LowestIndex => candidate > incumbent,
            TieBreak::HighestIndex => candidate >= incumbent,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuctionConfig {
    /// Bid increment; optimality is certified when `epsilon < 1/m`.
    pub epsilon: Epsilon,
    /// Per-phase bid budget; 0 selects an automatic bound.
    pub max_iterations: u64,
    pub tie_break: TieBreak,
    /// Price cap offset for access points with a single in-range client,
    /// in benefit units. Defaults to the benefit span plus epsilon.
    pub max_price_increment: Option<Epsilon>,
}

impl AuctionConfig {
    pub fn new(epsilon: Epsilon) -> Self {
        AuctionConfig {
            epsilon,
            max_iterations: 0,
            tie_break: TieBreak::LowestIndex,
            max_price_increment: None,
        }
    }

    /// Configuration with `epsilon = 1/(m+1)`, the largest value that still
    /// certifies optimality for integer benefits.
    pub fn default_for(ap_count: usize) -> Self {
        AuctionConfig::new(Epsilon::new(1, ap_count as i64 + 1))
    }

    /// True when this epsilon makes a passing certificate a proof of
    /// optimality (`epsilon < 1/m` with integer benefits).
    pub fn certificate_eligible(&self, ap_count: usize) -> bool {
        self.epsilon < Epsilon::new(1, ap_count as i64)
    }

    fn validate(&self) -> Result<(), AuctionError> {
        if self.epsilon <= Epsilon::new(0, 1) {
            return Err(AuctionError::BadEpsilon(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if let Some(cap) = self.max_price_increment {
            if cap <= Epsilon::new(0, 1) {
                return Err(AuctionError::BadEpsilon(format!(
                    "max_price_increment must be positive, got {cap}"
                )));
            }
        }
        Ok(())
    }

    /// Bid budget a phase runs under: `max_iterations` when set, otherwise
    /// `10 * n * b_max / epsilon` with a floor of `100 * (n + m + 1)`.
    pub fn iteration_budget(&self, instance: &Instance) -> u64 {
        if self.max_iterations > 0 {
            return self.max_iterations;
        }
        let n = instance.client_count() as u128;
        let m = instance.ap_count() as u128;
        let b_max = instance.max_benefit().max(0) as u128;
        let bound = 10
            * n
            * b_max
                .saturating_mul(*self.epsilon.denom() as u128)
                .div_euclid((*self.epsilon.numer()).max(1) as u128);
        bound.max(100 * (n + m + 1)).min(u64::MAX as u128) as u64
    }
}

/// Dual variables of a solver state: access-point profits `pi`, client prices
/// `p`, and the profit cap `lambda`, all stored as integer numerators over a
/// common denominator `den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriceState {
    pub pi_scaled: Vec<i64>,
    pub p_scaled: Vec<i64>,
    pub lambda_scaled: i64,
    pub den: i64,
}

impl PriceState {
    pub fn zero(ap_count: usize, client_count: usize) -> Self {
        PriceState {
            pi_scaled: vec![0; ap_count],
            p_scaled: vec![0; client_count],
            lambda_scaled: 0,
            den: 1,
        }
    }

    /// State from whole-benefit-unit prices.
    pub fn from_integer_prices(pi: Vec<i64>, p: Vec<i64>, lambda: i64) -> Self {
        PriceState {
            pi_scaled: pi,
            p_scaled: p,
            lambda_scaled: lambda,
            den: 1,
        }
    }

    pub fn pi(&self, ap: usize) -> Epsilon {
        Epsilon::new(self.pi_scaled[ap], self.den)
    }

    pub fn p(&self, client: usize) -> Epsilon {
        Epsilon::new(self.p_scaled[client], self.den)
    }

    pub fn lambda(&self) -> Epsilon {
        Epsilon::new(self.lambda_scaled, self.den)
    }

    pub fn pi_f64(&self, ap: usize) -> f64 {
        self.pi_scaled[ap] as f64 / self.den as f64
    }

    pub fn p_f64(&self, client: usize) -> f64 {
        self.p_scaled[client] as f64 / self.den as f64
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda_scaled as f64 / self.den as f64
    }

    /// Exact change of denominator; fails unless `new_den` is a multiple.
    fn rescaled(&self, new_den: i64) -> Result<PriceState, AuctionError> {
        if new_den % self.den != 0 {
            return Err(AuctionError::Overflow(format!(
                "cannot rescale prices from denominator {} to {new_den}",
                self.den
            )));
        }
        let factor = new_den / self.den;
        let scale = |v: &i64| v.checked_mul(factor);
        let pi_scaled: Option<Vec<i64>> = self.pi_scaled.iter().map(scale).collect();
        let p_scaled: Option<Vec<i64>> = self.p_scaled.iter().map(scale).collect();
        match (pi_scaled, p_scaled, self.lambda_scaled.checked_mul(factor)) {
            (Some(pi_scaled), Some(p_scaled), Some(lambda_scaled)) => Ok(PriceState {
                pi_scaled,
                p_scaled,
                lambda_scaled,
                den: new_den,
            }),
            _ => Err(AuctionError::Overflow(
                "price rescale exceeds the integer range".into(),
            )),
        }
    }
}

/// One bid. `target_level_scaled` is the value the bid pushed the target to:
/// the client's new price in the forward phase, the access point's new profit
/// in the reverse phase. `delta_scaled` is the increase. Scaled values are
/// numerators over the solver denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub phase: Phase,
    pub iteration: u64,
    pub actor: usize,
    pub target: usize,
    pub target_level_scaled: i64,
    pub delta_scaled: i64,
    pub evicted: Option<usize>,
}

/// Counts collected by a finished phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseOutcome {
    pub assignment: Assignment,
    pub prices: PriceState,
    pub iterations: u64,
    pub bids_per_actor: Vec<u64>,
}

/// Runs the forward phase from the empty assignment and zero prices.
pub fn forward_auction(
    instance: &Instance,
    config: &AuctionConfig,
) -> Result<PhaseOutcome, AuctionError> {
    let mut phase = ForwardAuction::new(instance, config)?;
    phase.run()?;
    Ok(phase.into_outcome())
}

/// Runs the reverse phase from a forward-phase result (every access point
/// holding exactly one client, `lambda` frozen at the top profit).
pub fn reverse_auction(
    instance: &Instance,
    config: &AuctionConfig,
    assignment: &Assignment,
    prices: &PriceState,
) -> Result<PhaseOutcome, AuctionError> {
    let mut phase = ReverseAuction::new(instance, config, assignment, prices)?;
    phase.run()?;
    Ok(phase.into_outcome())
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub assignment: Assignment,
    pub prices: PriceState,
    pub cs_report: CsReport,
    pub record: RunRecord,
    pub bids_per_ap: Vec<u64>,
    pub bids_per_client: Vec<u64>,
}

/// Forward phase, profit-cap freeze, reverse phase, certificate.
pub fn solve(instance: &Instance, config: &AuctionConfig) -> Result<SolveResult, AuctionError> {
    solve_traced(instance, config, &mut |_| {})
}

/// As [`solve`], invoking `on_event` after every bid of both phases.
pub fn solve_traced(
    instance: &Instance,
    config: &AuctionConfig,
    on_event: &mut dyn FnMut(&TraceEvent),
) -> Result<SolveResult, AuctionError> {
    let started = Instant::now();

    let mut fwd = ForwardAuction::new(instance, config)?;
    while let Some(event) = fwd.step()? {
        on_event(&event);
    }
    let fwd_outcome = fwd.into_outcome();

    let mut rev = ReverseAuction::new(
        instance,
        config,
        &fwd_outcome.assignment,
        &fwd_outcome.prices,
    )?;
    while let Some(event) = rev.step()? {
        on_event(&event);
    }
    let rev_outcome = rev.into_outcome();

    let assignment = rev_outcome.assignment;
    let prices = rev_outcome.prices;
    let cs_report = check_epsilon_cs(instance, &assignment, &prices, config.epsilon)?;
    let total_benefit_scaled = instance
        .total_benefit(&assignment)
        .map_err(|_| AuctionError::DimensionMismatch("assignment left the coverage sets".into()))?;

    let eligible = config.certificate_eligible(instance.ap_count());
    let certificate = CertificateSummary {
        cs_a: CertStatus::from_pass(cs_report.pass_a()),
        cs_b: CertStatus::from_pass(cs_report.pass_b()),
        cs_c: CertStatus::from_pass(cs_report.pass_c()),
    };
    let record = RunRecord {
        method: Method::Auction,
        m: instance.ap_count(),
        n: instance.client_count(),
        seed: None,
        epsilon: Some(*config.epsilon.numer() as f64 / *config.epsilon.denom() as f64),
        epsilon_exact: Some(format!(
            "{}/{}",
            config.epsilon.numer(),
            config.epsilon.denom()
        )),
        scale_k: instance.scale_k(),
        total_benefit_scaled,
        total_benefit: instance.descale(total_benefit_scaled),
        iterations_fwd: fwd_outcome.iterations,
        iterations_rev: rev_outcome.iterations,
        bids_total: fwd_outcome.iterations + rev_outcome.iterations,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        feasible: assignment.is_feasible(),
        certified: eligible && cs_report.passes(),
        certificate: Some(certificate),
    };

    Ok(SolveResult {
        assignment,
        prices,
        cs_report,
        record,
        bids_per_ap: fwd_outcome.bids_per_actor,
        bids_per_client: rev_outcome.bids_per_actor,
    })
}

/// Exact arithmetic workspace shared by the two phases: epsilon and the cap
/// brought onto the common integer grid.
pub(crate) struct ScaledArithmetic {
    pub den: i64,
    pub eps: i64,
    pub cap: i64,
    pub max_iterations: u64,
}

impl ScaledArithmetic {
    pub fn prepare(
        instance: &Instance,
        config: &AuctionConfig,
        start_den: i64,
    ) -> Result<Self, AuctionError> {
        config.validate()?;
        let eps_den = *config.epsilon.denom();
        let den = num_integer::lcm(eps_den, start_den);
        let b_max = instance.max_benefit();
        let headroom = den
            .checked_mul(b_max + 1)
            .filter(|v| *v <= 1 << 44)
            .ok_or_else(|| {
                AuctionError::Overflow(format!(
                    "epsilon denominator {den} is too fine for benefits up to {b_max}"
                ))
            })?;
        let _ = headroom;
        let eps = config
            .epsilon
            .numer()
            .checked_mul(den / eps_den)
            .ok_or_else(|| AuctionError::Overflow("epsilon numerator overflow".into()))?;
        let cap = match config.max_price_increment {
            // Floor to the price grid; any positive finite cap is sound.
            Some(cap) => {
                ((*cap.numer() as i128 * den as i128) / *cap.denom() as i128).max(1) as i64
            }
            None => (b_max - instance.min_benefit())
                .checked_mul(den)
                .and_then(|v| v.checked_add(eps))
                .ok_or_else(|| AuctionError::Overflow("price cap overflow".into()))?,
        };
        Ok(ScaledArithmetic {
            den,
            eps,
            cap,
            max_iterations: config.iteration_budget(instance),
        })
    }

    pub fn benefit_scaled(&self, instance: &Instance, ap: usize, client: usize) -> Option<i64> {
        instance.benefit(ap, client).map(|b| b * self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_epsilon_is_certificate_eligible() {
        for m in 1..20 {
            let config = AuctionConfig::default_for(m);
            assert_eq!(config.epsilon, Epsilon::new(1, m as i64 + 1));
            assert!(config.certificate_eligible(m));
        }
        let config = AuctionConfig::new(Epsilon::new(1, 3));
        assert!(!config.certificate_eligible(3));
        assert!(config.certificate_eligible(2));
    }

    #[test]
    fn zero_and_negative_epsilon_are_rejected() {
        let inst = Instance::from_dense(vec![vec![1, 2]]).unwrap();
        for eps in [Epsilon::new(0, 1), Epsilon::new(-1, 2)] {
            let config = AuctionConfig::new(eps);
            assert!(matches!(
                solve(&inst, &config),
                Err(AuctionError::BadEpsilon(_))
            ));
        }
    }

    #[test]
    fn price_state_accessors_descale() {
        let prices = PriceState {
            pi_scaled: vec![38, 33],
            p_scaled: vec![12, 12, 2],
            lambda_scaled: 38,
            den: 5,
        };
        assert_eq!(prices.pi(0), Epsilon::new(38, 5));
        assert_eq!(prices.p_f64(2), 0.4);
        assert_eq!(prices.lambda_f64(), 7.6);
    }

    #[test]
    fn rescale_is_exact_or_fails() {
        let prices = PriceState::from_integer_prices(vec![8, 7], vec![2, 2, 0], 8);
        let scaled = prices.rescaled(5).unwrap();
        assert_eq!(scaled.pi_scaled, vec![40, 35]);
        assert_eq!(scaled.lambda_scaled, 40);
        assert!(scaled.rescaled(7).is_err());
    }

    #[test]
    fn automatic_iteration_bound_scales_with_instance() {
        let inst = Instance::from_dense(vec![vec![100, 3, 8], vec![2, 9, 7]]).unwrap();
        let config = AuctionConfig::default_for(2);
        // 10 * n * b_max / epsilon = 10 * 3 * 100 * 3.
        assert_eq!(config.iteration_budget(&inst), 9000);
        let zero = Instance::from_dense(vec![vec![0, 0]]).unwrap();
        assert!(config.iteration_budget(&zero) >= 100);
        let pinned = AuctionConfig {
            max_iterations: 17,
            ..config
        };
        assert_eq!(pinned.iteration_budget(&inst), 17);
    }

    #[test]
    fn epsilon_too_fine_for_benefit_scale_errors() {
        let inst = Instance::from_dense(vec![vec![i64::MAX / 1000, 1]]).unwrap();
        let config = AuctionConfig::new(Epsilon::new(1, 1_000_000));
        assert!(matches!(
            solve(&inst, &config),
            Err(AuctionError::Overflow(_))
        ));
    }
}
