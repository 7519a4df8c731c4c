//! Assignment-problem instances: integer benefits plus coverage sets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::Assignment;
use crate::channel::achievable_rate;
use crate::scenario::Scenario;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("client {client} is outside every coverage disc")]
    UncoverableClient { client: usize },
    #[error("access point {ap} covers no client")]
    EmptyAccessPoint { ap: usize },
    #[error("{n} clients cannot cover {m} access points")]
    TooFewClients { m: usize, n: usize },
    #[error("benefit for pair ({ap}, {client}) is negative or out of range")]
    BadBenefit { ap: usize, client: usize },
    #[error("scale factor must be a positive integer, got {0}")]
    BadScale(i64),
    #[error("pair ({ap}, {client}) is outside the coverage sets")]
    PairOutsideCoverage { ap: usize, client: usize },
    #[error("{0}")]
    Channel(#[from] crate::channel::ChannelError),
}

/// An instance of the multi-assignment problem.
///
/// `benefits[i][j]` holds the integer-scaled benefit of serving client `j`
/// from access point `i`, or `None` when the pair is out of range. Benefits
/// derived from a scenario are `round(scale_k * rate / demand)`, so dividing a
/// total by `scale_k` recovers the rate-over-demand axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    benefits: Vec<Vec<Option<i64>>>,
    in_range_clients: Vec<Vec<usize>>,
    in_range_aps: Vec<Vec<usize>>,
    scale_k: i64,
}

impl Instance {
    /// Builds an instance from an explicit benefit matrix (rows are access
    /// points). `None` marks out-of-range pairs.
    pub fn new(benefits: Vec<Vec<Option<i64>>>, scale_k: i64) -> Result<Self, InstanceError> {
        if scale_k <= 0 {
            return Err(InstanceError::BadScale(scale_k));
        }
        let m = benefits.len();
        let n = benefits.first().map_or(0, |row| row.len());
        if n < m {
            return Err(InstanceError::TooFewClients { m, n });
        }
        let mut in_range_clients = vec![Vec::new(); m];
        let mut in_range_aps = vec![Vec::new(); n];
        for (i, row) in benefits.iter().enumerate() {
            if row.len() != n {
                return Err(InstanceError::TooFewClients { m, n: row.len() });
            }
            for (j, entry) in row.iter().enumerate() {
                if let Some(b) = entry {
                    if *b < 0 {
                        return Err(InstanceError::BadBenefit { ap: i, client: j });
                    }
                    in_range_clients[i].push(j);
                    in_range_aps[j].push(i);
                }
            }
        }
        for (i, set) in in_range_clients.iter().enumerate() {
            if set.is_empty() {
                return Err(InstanceError::EmptyAccessPoint { ap: i });
            }
        }
        for (j, set) in in_range_aps.iter().enumerate() {
            if set.is_empty() {
                return Err(InstanceError::UncoverableClient { client: j });
            }
        }
        Ok(Instance {
            benefits,
            in_range_clients,
            in_range_aps,
            scale_k,
        })
    }

    /// Full-coverage instance from a dense matrix, with unit scale.
    pub fn from_dense(rows: Vec<Vec<i64>>) -> Result<Self, InstanceError> {
        let benefits = rows
            .into_iter()
            .map(|row| row.into_iter().map(Some).collect())
            .collect();
        Instance::new(benefits, 1)
    }

    /// Builds the benefit matrix of a scenario.
    ///
    /// A pair is in range when the distance is at most the cell radius; its
    /// benefit is `round(scale_k * achievable_rate / demand)`. A client at the
    /// exact access-point position sits in the flat SNR segment.
    pub fn from_scenario(scenario: &Scenario, scale_k: i64) -> Result<Self, InstanceError> {
        if scale_k <= 0 {
            return Err(InstanceError::BadScale(scale_k));
        }
        let m = scenario.ap_count();
        let n = scenario.client_count();
        if n < m {
            return Err(InstanceError::TooFewClients { m, n });
        }
        let radius = scenario.cell_radius_m;
        let mut benefits = vec![vec![None; n]; m];
        for (i, row) in benefits.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let d = scenario.distance(i, j);
                if d <= radius {
                    let rate = achievable_rate(&scenario.radio, d.max(f64::MIN_POSITIVE))?;
                    let scaled = (scale_k as f64 * rate / scenario.demands_bps[j]).round();
                    if !scaled.is_finite() || scaled < 0.0 || scaled > i64::MAX as f64 / 4.0 {
                        return Err(InstanceError::BadBenefit { ap: i, client: j });
                    }
                    *cell = Some(scaled as i64);
                }
            }
        }
        for client in 0..n {
            if benefits.iter().all(|row| row[client].is_none()) {
                return Err(InstanceError::UncoverableClient { client });
            }
        }
        Instance::new(benefits, scale_k)
    }

    pub fn ap_count(&self) -> usize {
        self.benefits.len()
    }

    pub fn client_count(&self) -> usize {
        self.in_range_aps.len()
    }

    pub fn scale_k(&self) -> i64 {
        self.scale_k
    }

    pub fn benefit(&self, ap: usize, client: usize) -> Option<i64> {
        self.benefits[ap][client]
    }

    /// Clients in range of `ap`, ascending.
    pub fn clients_in_range(&self, ap: usize) -> &[usize] {
        &self.in_range_clients[ap]
    }

    /// Access points in range of `client`, ascending.
    pub fn aps_in_range(&self, client: usize) -> &[usize] {
        &self.in_range_aps[client]
    }

    pub fn max_benefit(&self) -> i64 {
        self.benefits
            .iter()
            .flatten()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn min_benefit(&self) -> i64 {
        self.benefits
            .iter()
            .flatten()
            .flatten()
            .copied()
            .min()
            .unwrap_or(0)
    }

    /// Sum of benefits over the assignment's pairs, on the scaled axis.
    pub fn total_benefit(&self, assignment: &Assignment) -> Result<i64, InstanceError> {
        let mut total: i64 = 0;
        for (ap, client) in assignment.pairs() {
            let b = self
                .benefit(ap, client)
                .ok_or(InstanceError::PairOutsideCoverage { ap, client })?;
            total += b;
        }
        Ok(total)
    }

    /// Converts a scaled total back to the rate-over-demand axis.
    pub fn descale(&self, scaled: i64) -> f64 {
        scaled as f64 / self.scale_k as f64
    }

    /// Sum over clients of their best in-range benefit. Any assignment that
    /// gives each client one access point is bounded by this value.
    pub fn per_client_upper_bound(&self) -> i64 {
        (0..self.client_count())
            .map(|j| {
                self.in_range_aps[j]
                    .iter()
                    .filter_map(|&i| self.benefit(i, j))
                    .max()
                    .unwrap_or(0)
            })
            .sum()
    }

    /// Multiplies every benefit by a positive integer factor.
    pub fn scaled_benefits(&self, factor: i64) -> Result<Self, InstanceError> {
        if factor <= 0 {
            return Err(InstanceError::BadScale(factor));
        }
        let benefits = self
            .benefits
            .iter()
            .map(|row| row.iter().map(|b| b.map(|v| v * factor)).collect())
            .collect();
        Instance::new(benefits, self.scale_k * factor)
    }
}
