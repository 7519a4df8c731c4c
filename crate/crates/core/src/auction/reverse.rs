//! Reverse phase: leftover clients bid for access points.

use std::collections::VecDeque;

use crate::assignment::Assignment;
use crate::instance::Instance;

use super::{
    AuctionConfig, AuctionError, Phase, PhaseOutcome, PriceState, ScaledArithmetic, TieBreak,
    TraceEvent,
};

/// Single-stepped reverse auction.
///
/// Starts from a forward-phase result: every access point holds exactly one
/// client and the profit cap `lambda` is frozen at the top profit. Unassigned
/// clients bid in first-in-first-out order for the access point offering the
/// best value, raising its profit by `delta` but never past the cap. A bid
/// with positive `delta` displaces the single client the access point held;
/// a bid at the cap joins the access point's bundle without displacement, so
/// only capped access points ever serve more than one client.
pub struct ReverseAuction<'a> {
    instance: &'a Instance,
    arith: ScaledArithmetic,
    tie_break: TieBreak,
    p: Vec<i64>,
    pi: Vec<i64>,
    lambda: i64,
    holder: Vec<Option<usize>>,
    clients_of: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    iterations: u64,
    bids_per_actor: Vec<u64>,
}

impl<'a> ReverseAuction<'a> {
    pub fn new(
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

        let max_pi = prices.pi_scaled.iter().copied().max().unwrap_or(0);
        if prices.lambda_scaled != max_pi {
            return Err(AuctionError::BadStart(format!(
                "profit cap {} is not the maximum profit {max_pi}",
                prices.lambda_scaled
            )));
        }
        let mut clients_of = vec![Vec::new(); instance.ap_count()];
        let mut holder = vec![None; instance.client_count()];
        for (ap, client) in assignment.pairs() {
            let Some(benefit) = instance.benefit(ap, client) else {
                return Err(AuctionError::PairOutsideCoverage { ap, client });
            };
            if prices.pi_scaled[ap] + prices.p_scaled[client] != benefit * arith.den {
                return Err(AuctionError::BadStart(format!(
                    "pair ({ap}, {client}) does not split its benefit between profit and price"
                )));
            }
            clients_of[ap].push(client);
            holder[client] = Some(ap);
        }
        if let Some(ap) = clients_of.iter().position(|c| c.len() != 1) {
            return Err(AuctionError::BadStart(format!(
                "access point {ap} must hold exactly one client, holds {}",
                clients_of[ap].len()
            )));
        }

        let queue = (0..instance.client_count())
            .filter(|&j| holder[j].is_none())
            .collect();
        Ok(ReverseAuction {
            instance,
            arith,
            tie_break: config.tie_break,
            p: prices.p_scaled,
            pi: prices.pi_scaled,
            lambda: prices.lambda_scaled,
            holder,
            clients_of,
            queue,
            iterations: 0,
            bids_per_actor: vec![0; instance.client_count()],
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

    pub fn lambda_scaled(&self) -> i64 {
        self.lambda
    }

    /// Performs one bid; `None` once every client is assigned.
    pub fn step(&mut self) -> Result<Option<TraceEvent>, AuctionError> {
        if self.queue.is_empty() {
            return Ok(None);
        }
        if self.iterations >= self.arith.max_iterations {
            return Err(AuctionError::IterationLimit {
                phase: Phase::Reverse,
                limit: self.arith.max_iterations,
            });
        }
        let client = self.queue.pop_front().unwrap();
        self.iterations += 1;
        self.bids_per_actor[client] += 1;

        let mut best_value = i64::MIN;
        let mut best_ap = usize::MAX;
        let mut runner_up: Option<i64> = None;
        for &ap in self.instance.aps_in_range(client) {
            let value = self
                .arith
                .benefit_scaled(self.instance, ap, client)
                .unwrap()
                .checked_sub(self.pi[ap])
                .ok_or_else(|| AuctionError::Overflow("value scan overflow".into()))?;
            if best_ap == usize::MAX {
                best_value = value;
                best_ap = ap;
            } else if self.tie_break.replaces(value, best_value) {
                runner_up = Some(best_value);
                best_value = value;
                best_ap = ap;
            } else {
                runner_up = Some(runner_up.map_or(value, |r| r.max(value)));
            }
        }

        let slack = self.lambda - self.pi[best_ap];
        debug_assert!(slack >= 0);
        let delta = match runner_up {
            Some(runner_up) => slack.min(best_value - runner_up + self.arith.eps),
            // A lone reachable access point takes the full slack to the cap.
            None => slack,
        };
        debug_assert!(delta >= 0);

        let mut evicted = None;
        if delta > 0 {
            // A profit strictly under the cap means the access point never
            // took a capped join, so it holds exactly its forward-phase
            // client; displacing it cannot empty a bundle.
            debug_assert_eq!(self.clients_of[best_ap].len(), 1);
            let displaced = self.clients_of[best_ap][0];
            self.clients_of[best_ap].clear();
            self.holder[displaced] = None;
            self.queue.push_back(displaced);
            evicted = Some(displaced);
        }
        self.p[client] = best_value - delta;
        self.pi[best_ap] += delta;
        let bundle = &mut self.clients_of[best_ap];
        let at = bundle.partition_point(|&c| c < client);
        bundle.insert(at, client);
        self.holder[client] = Some(best_ap);

        Ok(Some(TraceEvent {
            phase: Phase::Reverse,
            iteration: self.iterations,
            actor: client,
            target: best_ap,
            target_level_scaled: self.pi[best_ap],
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
            self.holder
                .iter()
                .enumerate()
                .filter_map(|(client, ap)| ap.map(|a| (a, client))),
        )
    }

    pub fn price_state(&self) -> PriceState {
        PriceState {
            pi_scaled: self.pi.clone(),
            p_scaled: self.p.clone(),
            lambda_scaled: self.lambda,
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
