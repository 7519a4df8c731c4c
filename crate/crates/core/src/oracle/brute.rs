//! Exhaustive enumeration over all client-to-access-point maps.

use crate::assignment::Assignment;
use crate::instance::Instance;

use super::OracleError;

/// Upper bound on the number of candidate maps the enumerator will visit.
pub const MAX_ENUMERATION: u64 = 10_000_000;

/// Finds the maximum-benefit feasible assignment by trying every map from
/// clients to in-range access points and keeping the best one that leaves no
/// access point empty. Ties resolve to the lexicographically smallest vector
/// of per-client choices, so the result is deterministic.
pub fn brute_force_optimum(instance: &Instance) -> Result<(Assignment, i64), OracleError> {
    let m = instance.ap_count();
    let n = instance.client_count();

    let mut combinations: u128 = 1;
    for j in 0..n {
        combinations = combinations.saturating_mul(instance.aps_in_range(j).len() as u128);
        if combinations > MAX_ENUMERATION as u128 {
            return Err(OracleError::TooLarge {
                combinations,
                limit: MAX_ENUMERATION,
            });
        }
    }

    // Odometer over per-client choice indices; the last digit moves fastest,
    // so maps are visited in lexicographic order of the choice vector.
    let mut digit = vec![0usize; n];
    let mut load = vec![0usize; m];
    let mut total: i64 = 0;
    let mut empty_aps = m;
    for j in 0..n {
        let ap = instance.aps_in_range(j)[0];
        if load[ap] == 0 {
            empty_aps -= 1;
        }
        load[ap] += 1;
        total += instance.benefit(ap, j).unwrap();
    }

    let mut best: Option<(i64, Vec<usize>)> = None;
    loop {
        if empty_aps == 0 && best.as_ref().is_none_or(|(value, _)| total > *value) {
            best = Some((total, digit.clone()));
        }

        // Advance the odometer.
        let mut j = n;
        loop {
            if j == 0 {
                let (value, digits) = best.ok_or(OracleError::Infeasible)?;
                let pairs = digits
                    .iter()
                    .enumerate()
                    .map(|(client, &choice)| (instance.aps_in_range(client)[choice], client));
                return Ok((Assignment::from_pairs(m, n, pairs), value));
            }
            j -= 1;
            let choices = instance.aps_in_range(j);
            let old_ap = choices[digit[j]];
            total -= instance.benefit(old_ap, j).unwrap();
            load[old_ap] -= 1;
            if load[old_ap] == 0 {
                empty_aps += 1;
            }
            digit[j] += 1;
            if digit[j] < choices.len() {
                let new_ap = choices[digit[j]];
                if load[new_ap] == 0 {
                    empty_aps -= 1;
                }
                load[new_ap] += 1;
                total += instance.benefit(new_ap, j).unwrap();
                break;
            }
            digit[j] = 0;
            let new_ap = choices[0];
            if load[new_ap] == 0 {
                empty_aps -= 1;
            }
            load[new_ap] += 1;
            total += instance.benefit(new_ap, j).unwrap();
        }
    }
}
