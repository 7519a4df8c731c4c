//! Serializable summaries of solver and baseline runs.

use serde::{Deserialize, Serialize};

/// Association method a record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auction,
    Bruteforce,
    Flow,
    Rssi,
    Random,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Auction,
        Method::Bruteforce,
        Method::Flow,
        Method::Rssi,
        Method::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Auction => "auction",
            Method::Bruteforce => "bruteforce",
            Method::Flow => "flow",
            Method::Rssi => "rssi",
            Method::Random => "random",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// Tri-state result of one certificate condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Pass,
    Fail,
    NotChecked,
}

impl CertStatus {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            CertStatus::Pass
        } else {
            CertStatus::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub cs_a: CertStatus,
    pub cs_b: CertStatus,
    pub cs_c: CertStatus,
}

impl CertificateSummary {
    pub fn all_pass(&self) -> bool {
        [self.cs_a, self.cs_b, self.cs_c]
            .iter()
            .all(|s| *s == CertStatus::Pass)
    }
}

/// One solver or baseline run. Benefit totals are reported both on the
/// integer grid (`total_benefit_scaled`, units of `1/scale_k`) and in rate
///-per-demand units (`total_benefit`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: Method,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_exact: Option<String>,
    pub scale_k: i64,
    pub total_benefit_scaled: i64,
    pub total_benefit: f64,
    pub iterations_fwd: u64,
    pub iterations_rev: u64,
    pub bids_total: u64,
    pub wall_time_ms: f64,
    pub feasible: bool,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
}

impl RunRecord {
    /// Record for a method that carries no prices and no certificate.
    pub fn for_baseline(
        method: Method,
        m: usize,
        n: usize,
        scale_k: i64,
        total_benefit_scaled: i64,
        feasible: bool,
        wall_time_ms: f64,
    ) -> Self {
        RunRecord {
            method,
            m,
            n,
            seed: None,
            epsilon: None,
            epsilon_exact: None,
            scale_k,
            total_benefit_scaled,
            total_benefit: total_benefit_scaled as f64 / scale_k as f64,
            iterations_fwd: 0,
            iterations_rev: 0,
            bids_total: 0,
            wall_time_ms,
            feasible,
            certified: false,
            certificate: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for method in Method::ALL {
            assert_eq!(method.name().parse::<Method>().unwrap(), method);
            let json = serde_json::to_string(&method).unwrap();
            assert_eq!(json, format!("\"{method}\""));
        }
        assert!("nearest".parse::<Method>().is_err());
    }

    #[test]
    fn cert_status_uses_snake_case() {
        assert_eq!(
            serde_json::to_string(&CertStatus::NotChecked).unwrap(),
            "\"not_checked\""
        );
        assert_eq!(CertStatus::from_pass(true), CertStatus::Pass);
        assert_eq!(CertStatus::from_pass(false), CertStatus::Fail);
    }

    #[test]
    fn baseline_record_omits_solver_only_fields() {
        let record = RunRecord::for_baseline(Method::Rssi, 2, 5, 1000, 12345, true, 0.03);
        let json = serde_json::to_value(&record).unwrap();
        assert!(json.get("epsilon").is_none());
        assert!(json.get("certificate").is_none());
        assert_eq!(json["method"], "rssi");
        assert_eq!(json["total_benefit"], 12.345);
        assert!(!json["certified"].as_bool().unwrap());
    }

    #[test]
    fn full_record_round_trips_through_json() {
        let record = RunRecord {
            method: Method::Auction,
            m: 2,
            n: 3,
            seed: Some(7),
            epsilon: Some(1.0 / 3.0),
            epsilon_exact: Some("1/3".into()),
            scale_k: 1,
            total_benefit_scaled: 27,
            total_benefit: 27.0,
            iterations_fwd: 2,
            iterations_rev: 1,
            bids_total: 3,
            wall_time_ms: 0.4,
            feasible: true,
            certified: true,
            certificate: Some(CertificateSummary {
                cs_a: CertStatus::Pass,
                cs_b: CertStatus::Pass,
                cs_c: CertStatus::Pass,
            }),
        };
        let json = serde_json::to_string_pretty(&record).unwrap();
        let back: RunRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
        assert!(back.certificate.unwrap().all_pass());
    }
}
