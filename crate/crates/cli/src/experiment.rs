use std::io::Write;

use mmwave_assoc::{generate_scenario, Epsilon, Instance, Method};

use crate::epsilon::parse_epsilon;
use crate::solve::{instance_failure, run_method};
use crate::{ExperimentArgs, Failure};

pub const CSV_HEADER: &str =
    "experiment,point_m,point_n,method,seed,epsilon,total_benefit,wall_time_ms,feasible,certified";

/// Decouples the random baseline's draw stream from the placement stream,
/// which is seeded with the plain scenario seed.
const ASSOC_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    BenefitVsClients,
    BenefitVsAps,
    RuntimeVsSize,
}

impl ExperimentName {
    fn name(self) -> &'static str {
        match self {
            ExperimentName::BenefitVsClients => "benefit_vs_clients",
            ExperimentName::BenefitVsAps => "benefit_vs_aps",
            ExperimentName::RuntimeVsSize => "runtime_vs_size",
        }
    }
}

impl std::fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExperimentName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            ExperimentName::BenefitVsClients,
            ExperimentName::BenefitVsAps,
            ExperimentName::RuntimeVsSize,
        ]
        .into_iter()
        .find(|e| e.name() == s)
        .ok_or_else(|| {
            format!("unknown experiment {s:?}; use benefit_vs_clients, benefit_vs_aps, or runtime_vs_size")
        })
    }
}

pub fn run(args: ExperimentArgs) -> Result<(), Failure> {
    let seeds = parse_seeds(&args.seeds)?;
    if seeds.is_empty() {
        return Err(Failure::config("no seeds to run"));
    }
    let user_epsilon = args.epsilon.as_deref().map(parse_epsilon).transpose()?;

    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(out, "{CSV_HEADER}")?;

    match args.name {
        ExperimentName::BenefitVsClients => {
            let m = args.m.unwrap_or(10);
            let ns = parse_sweep(args.sweep.as_deref().unwrap_or("10:100:10"))?;
            let points: Vec<(usize, usize)> = ns.into_iter().map(|n| (m, n)).collect();
            run_benefit(&args, &points, &seeds, user_epsilon, &mut out)?;
        }
        ExperimentName::BenefitVsAps => {
            let n = args.n.unwrap_or(100);
            let ms = parse_sweep(args.sweep.as_deref().unwrap_or("2:10:1"))?;
            let points: Vec<(usize, usize)> = ms.into_iter().map(|m| (m, n)).collect();
            run_benefit(&args, &points, &seeds, user_epsilon, &mut out)?;
        }
        ExperimentName::RuntimeVsSize => {
            if args.method.is_some_and(|m| m != Method::Auction) {
                return Err(Failure::config(
                    "runtime_vs_size sweeps the auction bid increment; --method does not apply",
                ));
            }
            let points = match args.pairs.as_deref() {
                Some(text) => parse_pairs(text)?,
                None => vec![(2, 20), (4, 40), (6, 60), (8, 80), (10, 100)],
            };
            run_runtime(&args, &points, &seeds, user_epsilon, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_benefit(
    args: &ExperimentArgs,
    points: &[(usize, usize)],
    seeds: &[u64],
    user_epsilon: Option<Epsilon>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let methods = match args.method {
        Some(method) => vec![method],
        None => vec![Method::Auction, Method::Rssi, Method::Random],
    };
    if methods.contains(&Method::Auction) {
        if let Some(eps) = user_epsilon {
            for &(m, _) in points {
                require_certifiable(eps, m)?;
            }
        }
    }

    for &(m, n) in points {
        let epsilon = user_epsilon.unwrap_or_else(|| Epsilon::new(1, m as i64 + 1));
        for &method in &methods {
            for &seed in seeds {
                let row = run_point(args, m, n, seed, method, epsilon)?;
                write_row(out, args.name, &row)?;
            }
        }
    }
    Ok(())
}

fn run_runtime(
    args: &ExperimentArgs,
    points: &[(usize, usize)],
    seeds: &[u64],
    user_epsilon: Option<Epsilon>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    for &(m, n) in points {
        let epsilons = match user_epsilon {
            Some(eps) => vec![eps],
            None => {
                let m = m as i64;
                vec![
                    Epsilon::new(1, m + 1),
                    Epsilon::new(1, 2 * m),
                    Epsilon::new(1, 4 * m),
                ]
            }
        };
        for epsilon in epsilons {
            require_certifiable(epsilon, m)?;
            for &seed in seeds {
                let row = run_point(args, m, n, seed, Method::Auction, epsilon)?;
                write_row(out, args.name, &row)?;
            }
        }
    }
    Ok(())
}

struct Row {
    m: usize,
    n: usize,
    method: Method,
    seed: u64,
    epsilon: Option<Epsilon>,
    total_benefit: f64,
    wall_time_ms: f64,
    feasible: bool,
    certified: bool,
}

fn run_point(
    args: &ExperimentArgs,
    m: usize,
    n: usize,
    seed: u64,
    method: Method,
    epsilon: Epsilon,
) -> Result<Row, Failure> {
    let scenario = generate_scenario(m, n, seed).map_err(crate::generate::scenario_failure)?;
    let instance = Instance::from_scenario(&scenario, args.scale_k).map_err(instance_failure)?;
    let outcome = run_method(
        &scenario,
        &instance,
        method,
        epsilon,
        seed ^ ASSOC_SEED_SALT,
        None,
    )?;
    Ok(Row {
        m,
        n,
        method,
        seed,
        epsilon: (method == Method::Auction).then_some(epsilon),
        total_benefit: outcome.record.total_benefit,
        wall_time_ms: outcome.record.wall_time_ms,
        feasible: outcome.record.feasible,
        certified: outcome.record.certified,
    })
}

fn write_row(out: &mut dyn Write, name: ExperimentName, row: &Row) -> Result<(), Failure> {
    let epsilon = row.epsilon.map_or(String::new(), |e| {
        (*e.numer() as f64 / *e.denom() as f64).to_string()
    });
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        name,
        row.m,
        row.n,
        row.method,
        row.seed,
        epsilon,
        row.total_benefit,
        row.wall_time_ms,
        row.feasible,
        row.certified
    )?;
    Ok(())
}

fn require_certifiable(epsilon: Epsilon, m: usize) -> Result<(), Failure> {
    if epsilon >= Epsilon::new(1, m as i64) {
        return Err(Failure::config(format!(
            "epsilon {}/{} is not below 1/{m}; certified auction runs need epsilon < 1/m",
            epsilon.numer(),
            epsilon.denom()
        )));
    }
    Ok(())
}

/// "20" runs seeds 0..19; "3,5,8" runs exactly those; "7," is the one-seed list.
fn parse_seeds(text: &str) -> Result<Vec<u64>, Failure> {
    let text = text.trim();
    let bad = || Failure::config(format!("cannot parse seeds {text:?}"));
    if text.contains(',') {
        return text
            .split(',')
            .filter(|part| !part.trim().is_empty())
            .map(|part| part.trim().parse::<u64>().map_err(|_| bad()))
            .collect();
    }
    let count: u64 = text.parse().map_err(|_| bad())?;
    Ok((0..count).collect())
}

/// Inclusive "start:end[:step]".
fn parse_sweep(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::config(format!("cannot parse sweep {text:?}; use start:end[:step]"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(bad());
    }
    let start: usize = parts[0].trim().parse().map_err(|_| bad())?;
    let end: usize = parts[1].trim().parse().map_err(|_| bad())?;
    let step: usize = match parts.get(2) {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => 1,
    };
    if step == 0 || start == 0 || end < start {
        return Err(bad());
    }
    Ok((start..=end).step_by(step).collect())
}

/// "2x20,4x40" as (access points, clients) sizes.
fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, Failure> {
    let bad = || Failure::config(format!("cannot parse pairs {text:?}; use mxn,mxn,..."));
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (m, n) = part.trim().split_once('x').ok_or_else(bad)?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if m == 0 || n < m {
                return Err(bad());
            }
            Ok((m, n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_names_round_trip() {
        for name in ["benefit_vs_clients", "benefit_vs_aps", "runtime_vs_size"] {
            let parsed: ExperimentName = name.parse().unwrap();
            assert_eq!(parsed.to_string(), name);
        }
        assert!("benefit-vs-clients".parse::<ExperimentName>().is_err());
    }

    #[test]
    fn seeds_accept_counts_and_lists() {
        assert_eq!(parse_seeds("3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seeds("3,5,8").unwrap(), vec![3, 5, 8]);
        assert_eq!(parse_seeds("7,").unwrap(), vec![7]);
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn sweeps_are_inclusive_ranges() {
        assert_eq!(parse_sweep("10:30:10").unwrap(), vec![10, 20, 30]);
        assert_eq!(parse_sweep("2:4").unwrap(), vec![2, 3, 4]);
        assert!(parse_sweep("4:2").is_err());
        assert!(parse_sweep("1:5:0").is_err());
        assert!(parse_sweep("5").is_err());
    }

    #[test]
    fn pairs_parse_sizes() {
        assert_eq!(parse_pairs("2x20,4x40").unwrap(), vec![(2, 20), (4, 40)]);
        assert!(parse_pairs("20x2").is_err());
        assert!(parse_pairs("2-20").is_err());
    }

    #[test]
    fn coarse_epsilon_is_rejected_for_certified_runs() {
        assert!(require_certifiable(Epsilon::new(1, 11), 10).is_ok());
        assert!(require_certifiable(Epsilon::new(1, 10), 10).is_err());
        assert!(require_certifiable(Epsilon::new(1, 2), 10).is_err());
    }
}
