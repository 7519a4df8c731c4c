//! Association baselines the auction is measured against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::assignment::Assignment;
use crate::instance::Instance;
use crate::scenario::Scenario;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("scenario and instance disagree: {0}")]
    Mismatch(String),
}

/// Strongest-signal rule: every client attaches to its nearest in-range
/// access point, ties to the lowest index. Signal strength decreases with
/// distance, so nearest is strongest. The result can leave an access point
/// with no clients; callers must inspect [`Assignment::is_feasible`].
pub fn rssi_association(
    scenario: &Scenario,
    instance: &Instance,
) -> Result<Assignment, BaselineError> {
    if scenario.ap_count() != instance.ap_count()
        || scenario.client_count() != instance.client_count()
    {
        return Err(BaselineError::Mismatch(format!(
            "scenario is {}x{}, instance is {}x{}",
            scenario.ap_count(),
            scenario.client_count(),
            instance.ap_count(),
            instance.client_count()
        )));
    }
    let mut assignment = Assignment::empty(instance.ap_count(), instance.client_count());
    for client in 0..instance.client_count() {
        let nearest = instance
            .aps_in_range(client)
            .iter()
            .copied()
            .min_by(|&a, &b| {
                scenario
                    .distance(a, client)
                    .total_cmp(&scenario.distance(b, client))
            })
            .expect("every client has an in-range access point");
        assignment.assign(nearest, client);
    }
    Ok(assignment)
}

/// Uniform rule: every client attaches to an in-range access point drawn
/// uniformly at random. Deterministic in `seed`. Feasibility is not
/// guaranteed.
pub fn random_association(instance: &Instance, seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = Assignment::empty(instance.ap_count(), instance.client_count());
    for client in 0..instance.client_count() {
        let candidates = instance.aps_in_range(client);
        let pick = candidates[rng.gen_range(0..candidates.len())];
        assignment.assign(pick, client);
    }
    assignment
}
