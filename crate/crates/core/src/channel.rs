//! Free-space channel model for 60 GHz access links.
//!
//! Links follow a two-segment power law: the SNR is flat up to a reference
//! distance `d0` and decays as `(d/d0)^-eta` beyond it. With transmit power
//! `P`, combined antenna gain `G`, wavelength `lambda`, noise spectral density
//! `N0`, interference density `I`, and system bandwidth `W`, the reference SNR
//! is
//!
//! ```text
//! SNR(d <= d0) = P * G * lambda^2 / (16 * pi^2 * (N0 + I) * W)
//! ```
//!
//! and the achievable rate is `W * log2(1 + SNR(d))`. All quantities are SI
//! (watts, meters, hertz); dBm conversions happen at the configuration
//! boundary via the helpers below.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("distance must be positive and finite, got {0}")]
    BadDistance(f64),
    #[error("target SNR {target_db:.3} dB exceeds the reference SNR {reference_db:.3} dB at d0")]
    InfeasibleRadius { target_db: f64, reference_db: f64 },
    #[error("invalid radio parameters: {0}")]
    BadParams(String),
}

/// Physical-layer parameters of an access link.
///
/// Defaults model a 60 GHz deployment: 1200 MHz of bandwidth, 0.1 mW transmit
/// power, -134 dBm/MHz noise density, 5 mm wavelength, 1 m reference distance,
/// and a square-law decay. Antenna gains default to the flat-top pattern
/// (unit gain inside the beam) and interference to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub noise_psd_w_per_hz: f64,
    pub wavelength_m: f64,
    pub d0_m: f64,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub interference_w_per_hz: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub tx_gain: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub rx_gain: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

fn one() -> f64 {
    1.0
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            bandwidth_hz: 1200e6,
            tx_power_w: 0.1e-3,
            noise_psd_w_per_hz: dbm_per_mhz_to_w_per_hz(-134.0),
            wavelength_m: 5e-3,
            d0_m: 1.0,
            eta: 2.0,
            interference_w_per_hz: 0.0,
            tx_gain: 1.0,
            rx_gain: 1.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let positive = [
            ("bandwidth_hz", self.bandwidth_hz),
            ("tx_power_w", self.tx_power_w),
            ("noise_psd_w_per_hz", self.noise_psd_w_per_hz),
            ("wavelength_m", self.wavelength_m),
            ("d0_m", self.d0_m),
            ("eta", self.eta),
            ("tx_gain", self.tx_gain),
            ("rx_gain", self.rx_gain),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(ChannelError::BadParams(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.interference_w_per_hz < 0.0 || !self.interference_w_per_hz.is_finite() {
            return Err(ChannelError::BadParams(format!(
                "interference_w_per_hz must be non-negative, got {}",
                self.interference_w_per_hz
            )));
        }
        Ok(())
    }

    /// SNR of the flat segment (any distance at or below `d0`).
    pub fn reference_snr(&self) -> f64 {
        self.tx_power_w * self.tx_gain * self.rx_gain * self.wavelength_m.powi(2)
            / (16.0
                * PI.powi(2)
                * (self.noise_psd_w_per_hz + self.interference_w_per_hz)
                * self.bandwidth_hz)
    }
}

pub fn dbm_to_w(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn w_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

pub fn dbm_per_mhz_to_w_per_hz(dbm_per_mhz: f64) -> f64 {
    dbm_to_w(dbm_per_mhz) / 1e6
}

/// Linear SNR at distance `d` meters.
pub fn snr_at_distance(params: &RadioParams, d: f64) -> Result<f64, ChannelError> {
    if !d.is_finite() || d <= 0.0 {
        return Err(ChannelError::BadDistance(d));
    }
    let snr0 = params.reference_snr();
    if d <= params.d0_m {
        Ok(snr0)
    } else {
        Ok(snr0 * (d / params.d0_m).powf(-params.eta))
    }
}

pub fn snr_db_at_distance(params: &RadioParams, d: f64) -> Result<f64, ChannelError> {
    Ok(10.0 * snr_at_distance(params, d)?.log10())
}

/// Shannon rate `W * log2(1 + SNR(d))` in bit/s.
pub fn achievable_rate(params: &RadioParams, d: f64) -> Result<f64, ChannelError> {
    Ok(params.bandwidth_hz * (1.0 + snr_at_distance(params, d)?).log2())
}

/// Largest distance at which the link still reaches `target_snr_db`.
///
/// Inverts the decay segment in closed form:
/// `r = d0 * (SNR(d0) / target)^(1/eta)`. Fails when the target exceeds the
/// reference SNR, since no distance in the decay segment can reach it.
pub fn solve_cell_radius(params: &RadioParams, target_snr_db: f64) -> Result<f64, ChannelError> {
    let snr0 = params.reference_snr();
    let target = 10f64.powf(target_snr_db / 10.0);
    // Relative slack absorbs the dB round trip when the target equals the
    // reference SNR.
    if target > snr0 * (1.0 + 1e-12) {
        return Err(ChannelError::InfeasibleRadius {
            target_db: target_snr_db,
            reference_db: 10.0 * snr0.log10(),
        });
    }
    Ok((params.d0_m * (snr0 / target).powf(1.0 / params.eta)).max(params.d0_m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, rel: f64) {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            err <= rel,
            "expected {expected}, got {actual} (relative error {err:.3e})"
        );
    }

    #[test]
    fn default_noise_density_matches_dbm_per_mhz() {
        // -134 dBm/MHz = 10^(-13.4) mW spread over 1 MHz.
        assert_close(RadioParams::default().noise_psd_w_per_hz, 3.98107e-23, 1e-5);
    }

    #[test]
    fn reference_snr_of_default_link() {
        let params = RadioParams::default();
        let snr = snr_at_distance(&params, params.d0_m).unwrap();
        assert_close(snr, 331.3897, 1e-5);
        assert_close(snr_db_at_distance(&params, 1.0).unwrap(), 25.2034, 1e-5);
    }

    #[test]
    fn snr_is_flat_inside_reference_distance() {
        let params = RadioParams::default();
        let at_d0 = snr_at_distance(&params, params.d0_m).unwrap();
        assert_eq!(snr_at_distance(&params, 0.25).unwrap(), at_d0);
        assert_eq!(snr_at_distance(&params, 1e-9).unwrap(), at_d0);
    }

    #[test]
    fn square_law_quarters_snr_at_double_distance() {
        let params = RadioParams::default();
        let at_d0 = snr_at_distance(&params, 1.0).unwrap();
        let at_2d0 = snr_at_distance(&params, 2.0).unwrap();
        assert_close(at_2d0, at_d0 / 4.0, 1e-12);
    }

    #[test]
    fn snr_rejects_non_positive_distance() {
        let params = RadioParams::default();
        assert!(matches!(
            snr_at_distance(&params, 0.0),
            Err(ChannelError::BadDistance(_))
        ));
        assert!(matches!(
            snr_at_distance(&params, -3.0),
            Err(ChannelError::BadDistance(_))
        ));
        assert!(snr_at_distance(&params, f64::NAN).is_err());
    }

    #[test]
    fn snr_monotone_non_increasing_in_distance() {
        let params = RadioParams::default();
        let mut last = f64::INFINITY;
        for step in 1..200 {
            let d = step as f64 * 0.05;
            let snr = snr_at_distance(&params, d).unwrap();
            assert!(snr <= last, "SNR increased at d = {d}");
            last = snr;
        }
    }

    #[test]
    fn cell_radius_at_10_db_target() {
        let r = solve_cell_radius(&RadioParams::default(), 10.0).unwrap();
        assert_close(r, 5.756646, 1e-6);
        // The radius is exactly the point where the decay segment hits the target.
        let snr_db = snr_db_at_distance(&RadioParams::default(), r).unwrap();
        assert!((snr_db - 10.0).abs() < 1e-9);
    }

    #[test]
    fn cell_radius_matches_log_domain_inversion() {
        let params = RadioParams::default();
        let reference_db = 10.0 * params.reference_snr().log10();
        let expected = params.d0_m * 10f64.powf((reference_db - 10.0) / (10.0 * params.eta));
        assert_close(solve_cell_radius(&params, 10.0).unwrap(), expected, 1e-12);
    }

    #[test]
    fn cell_radius_boundary_and_infeasible_targets() {
        let params = RadioParams::default();
        let reference_db = 10.0 * params.reference_snr().log10();
        assert_close(
            solve_cell_radius(&params, reference_db).unwrap(),
            1.0,
            1e-12,
        );
        assert!(matches!(
            solve_cell_radius(&params, reference_db + 0.1),
            Err(ChannelError::InfeasibleRadius { .. })
        ));
    }

    #[test]
    fn steeper_decay_shrinks_the_cell() {
        let mut params = RadioParams::default();
        let r2 = solve_cell_radius(&params, 10.0).unwrap();
        params.eta = 4.0;
        let r4 = solve_cell_radius(&params, 10.0).unwrap();
        assert_close(r4, 2.399301, 1e-6);
        assert!(r4 < r2);
    }

    #[test]
    fn rate_of_default_link_at_reference_distance() {
        let rate = achievable_rate(&RadioParams::default(), 1.0).unwrap();
        assert_close(rate, 1.005208e10, 1e-6);
    }

    #[test]
    fn rate_equals_bandwidth_at_unit_snr() {
        let params = RadioParams::default();
        // Distance where the decayed SNR reaches exactly 1.
        let d = params.d0_m * params.reference_snr().powf(1.0 / params.eta);
        let rate = achievable_rate(&params, d).unwrap();
        assert_close(rate, params.bandwidth_hz, 1e-9);
    }

    #[test]
    fn rate_is_zero_without_transmit_power() {
        let params = RadioParams {
            tx_power_w: 0.0,
            ..RadioParams::default()
        };
        assert_eq!(achievable_rate(&params, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn rate_monotone_in_distance_and_power() {
        let params = RadioParams::default();
        let mut last = f64::INFINITY;
        for step in 1..100 {
            let d = step as f64 * 0.1;
            let rate = achievable_rate(&params, d).unwrap();
            assert!(rate <= last);
            last = rate;
        }
        let boosted = RadioParams {
            tx_power_w: params.tx_power_w * 2.0,
            ..params
        };
        for d in [0.5, 2.0, 5.0] {
            assert!(achievable_rate(&boosted, d).unwrap() > achievable_rate(&params, d).unwrap());
        }
    }

    #[test]
    fn validate_flags_bad_fields() {
        let mut params = RadioParams::default();
        assert!(params.validate().is_ok());
        params.eta = 0.0;
        assert!(params.validate().is_err());
        params = RadioParams::default();
        params.interference_w_per_hz = -1.0;
        assert!(params.validate().is_err());
    }

    #[test]
    fn dbm_conversions_round_trip() {
        assert_close(dbm_to_w(0.0), 1e-3, 1e-12);
        assert_close(w_to_dbm(dbm_to_w(-17.3)), -17.3, 1e-12);
        assert_close(dbm_per_mhz_to_w_per_hz(-134.0), 3.98107e-23, 1e-5);
    }
}
