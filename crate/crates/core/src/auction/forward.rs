//! Forward phase: access points bid for clients.

use std::collections::VecDeque;

use crate::assignment::Assignment;
use crate::instance::Instance;

use super::{
    AuctionConfig, AuctionError, Phase, PhaseOutcome, PriceState, ScaledArithmetic, TieBreak,
    TraceEvent,
};

/// Single-stepped forward auction.
///
/// Unassigned access points bid in first-in-first-out order. A bid claims the
/// access point's most profitable in-range client and raises that client's
/// price so the runner-up profit is matched up to epsilon; the displaced
/// access point, if any, rejoins the queue. The phase ends with every access
/// point holding exactly one client.
pub struct ForwardAuction<'a> {
    instance: &'a Instance,
    arith: ScaledArithmetic,
    tie_break: TieBreak,
    p: Vec<i64>,
    holder: Vec<Option<usize>>,
    held: Vec<Option<usize>>,
    queue: VecDeque<usize>,
    iterations: u64,
    bids_per_actor: Vec<u64>,
}

impl<'a> ForwardAuction<'a> {
    /// Starts from the empty assignment and all-zero prices.
    pub fn new(instance: &'a Instance, config: &AuctionConfig) -> Result<Self, AuctionError> {
        let arith = ScaledArithmetic::prepare(instance, config, 1)?;
        Ok(ForwardAuction {
            instance,
            arith,
            tie_break: config.tie_break,
            p: vec![0; instance.client_count()],
            holder: vec![None; instance.client_count()],
            held: vec![None; instance.ap_count()],
            queue: (0..instance.ap_count()).collect(),
            iterations: 0,
            bids_per_actor: vec![0; instance.ap_count()],
        })
    }

    /// Starts from a partial matching and existing prices. Every access point
    /// may hold at most one client, every assigned pair must lie in coverage
    /// and be within epsilon of that access point's best profit.
    pub fn with_start(
        instance: &'a Instance,
        config: &AuctionConfig,
        assignment: &Assignment,
        prices: &PriceState,
    ) -> Result<Self, AuctionError> {
        if assignment.ap_count() != instance.ap_count()
            || assignment.client_count() != instance.client_count()
            || prices.pi_scaled.len() != instance.ap_count()
            || prices.p_scaled.len() != instance.client_count()
        {
            return Err(AuctionError::DimensionMismatch(format!(
                "instance is {}x{}",
                instance.ap_count(),
                instance.client_count()
            )));
        }
        let arith = ScaledArithmetic::prepare(instance, config, prices.den)?;
        let prices = prices.rescaled(arith.den)?;

        let mut held = vec![None; instance.ap_count()];
        let mut holder = vec![None; instance.client_count()];
        for (ap, client) in assignment.pairs() {
            if instance.benefit(ap, client).is_none() {
                return Err(AuctionError::PairOutsideCoverage { ap, client });
            }
            if held[ap].is_some() {
                return Err(AuctionError::BadStart(format!(
                    "access point {ap} holds more than one client"
                )));
            }
            held[ap] = Some(client);
            holder[client] = Some(ap);
        }

        let p = prices.p_scaled;
        for (ap, client) in held.iter().enumerate() {
            let Some(client) = *client else { continue };
            let profit = arith.benefit_scaled(instance, ap, client).unwrap() - p[client];
            let best = instance
                .clients_in_range(ap)
                .iter()
                .map(|&j| arith.benefit_scaled(instance, ap, j).unwrap() - p[j])
                .max()
                .unwrap();
            if profit < best - arith.eps {
                return Err(AuctionError::BadStart(format!(
                    "assigned pair ({ap}, {client}) is more than epsilon below the best profit"
                )));
            }
        }

        let queue = (0..instance.ap_count())
            .filter(|&ap| held[ap].is_none())
            .collect();
        Ok(ForwardAuction {
            instance,
            arith,
            tie_break: config.tie_break,
            p,
            holder,
            held,
            queue,
            iterations: 0,
            bids_per_actor: vec![0; instance.ap_count()],
        })
    }

    pub fn is_done(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn den(&self) -> i64 {
        self.arith.den
    }

    pub fn epsilon_scaled(&self) -> i64 {
        self.arith.eps
    }

    /// Performs one bid; `None` once every access point holds a client.
    pub fn step(&mut self) -> Result<Option<TraceEvent>, AuctionError> {
        if self.queue.is_empty() {
            return Ok(None);
        }
        if self.iterations >= self.arith.max_iterations {
            return Err(AuctionError::IterationLimit {
                phase: Phase::Forward,
                limit: self.arith.max_iterations,
            });
        }
        let ap = self.queue.pop_front().unwrap();
        self.iterations += 1;
        self.bids_per_actor[ap] += 1;

        let mut best_value = i64::MIN;
        let mut best_client = usize::MAX;
        let mut runner_up: Option<i64> = None;
        for &client in self.instance.clients_in_range(ap) {
            let value = self
                .arith
                .benefit_scaled(self.instance, ap, client)
                .unwrap()
                .checked_sub(self.p[client])
                .ok_or_else(|| AuctionError::Overflow("profit scan overflow".into()))?;
            if best_client == usize::MAX {
                best_value = value;
                best_client = client;
            } else if self.tie_break.replaces(value, best_value) {
                runner_up = Some(best_value);
                best_value = value;
                best_client = client;
            } else {
                runner_up = Some(runner_up.map_or(value, |r| r.max(value)));
            }
        }

        let bid_base = self
            .arith
            .benefit_scaled(self.instance, ap, best_client)
            .unwrap();
        let new_price = match runner_up {
            Some(runner_up) => bid_base
                .checked_sub(runner_up)
                .and_then(|v| v.checked_add(self.arith.eps)),
            // Lone candidate: no runner-up exists to meter the raise, so cap
            // it; the floor keeps every bid a strict price increase.
            None => bid_base
                .checked_add(self.arith.cap)
                .map(|v| v.max(self.p[best_client] + self.arith.eps)),
        }
        .ok_or_else(|| AuctionError::Overflow("bid price overflow".into()))?;
        let delta = new_price - self.p[best_client];
        debug_assert!(delta >= self.arith.eps);

        let evicted = self.holder[best_client];
        if let Some(previous) = evicted {
            self.held[previous] = None;
            self.queue.push_back(previous);
        }
        self.holder[best_client] = Some(ap);
        self.held[ap] = Some(best_client);
        self.p[best_client] = new_price;

        Ok(Some(TraceEvent {
            phase: Phase::Forward,
            iteration: self.iterations,
            actor: ap,
            target: best_client,
            target_level_scaled: new_price,
            delta_scaled: delta,
            evicted,
        }))
    }

    pub fn run(&mut self) -> Result<(), AuctionError> {
        while self.step()?.is_some() {}
        Ok(())
    }

    pub fn assignment(&self) -> Assignment {
        Assignment::from_pairs(
            self.instance.ap_count(),
            self.instance.client_count(),
            self.held
                .iter()
                .enumerate()
                .filter_map(|(ap, client)| client.map(|c| (ap, c))),
        )
    }

    /// Prices with profits materialized: an assigned access point earns its
    /// assigned profit, an unassigned one its best available profit, and the
    /// cap sits at the maximum.
    pub fn price_state(&self) -> PriceState {
        let pi_scaled: Vec<i64> = (0..self.instance.ap_count())
            .map(|ap| match self.held[ap] {
                Some(client) => {
                    self.arith
                        .benefit_scaled(self.instance, ap, client)
                        .unwrap()
                        - self.p[client]
                }
                None => self
                    .instance
                    .clients_in_range(ap)
                    .iter()
                    .map(|&j| self.arith.benefit_scaled(self.instance, ap, j).unwrap() - self.p[j])
                    .max()
                    .unwrap(),
            })
            .collect();
        let lambda_scaled = pi_scaled.iter().copied().max().unwrap_or(0);
        PriceState {
            pi_scaled,
            p_scaled: self.p.clone(),
            lambda_scaled,
            den: self.arith.den,
        }
    }

    pub fn into_outcome(self) -> PhaseOutcome {
        PhaseOutcome {
            assignment: self.assignment(),
            prices: self.price_state(),
            iterations: self.iterations,
            bids_per_actor: self.bids_per_actor,
        }
    }
}
