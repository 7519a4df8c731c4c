use std::io::Write;
use std::time::Instant;

use mmwave_assoc::{
    brute_force_optimum, min_cost_flow_optimum, random_association, rssi_association, solve_traced,
    Assignment, AuctionConfig, AuctionError, Epsilon, Instance, InstanceError, Method, OracleError,
    PriceState, RunRecord, Scenario, TraceEvent,
};

use crate::epsilon::parse_epsilon;
use crate::runfile::RunFile;
use crate::{Failure, SolveArgs};

pub fn run(args: SolveArgs) -> Result<(), Failure> {
    let scenario = Scenario::load(&args.scenario).map_err(crate::generate::scenario_failure)?;
    let instance = Instance::from_scenario(&scenario, args.scale_k).map_err(instance_failure)?;
    let epsilon = match &args.epsilon {
        Some(text) => parse_epsilon(text)?,
        None => AuctionConfig::default_for(instance.ap_count()).epsilon,
    };

    if args.trace.is_some() && args.method != Method::Auction {
        return Err(Failure::config(
            "--trace applies only to the auction method",
        ));
    }
    let mut trace_rows: Vec<TraceEvent> = Vec::new();
    let outcome = run_method(
        &scenario,
        &instance,
        args.method,
        epsilon,
        args.seed,
        Some(&mut trace_rows),
    )?;

    if let Some(path) = &args.trace {
        write_trace(path, &trace_rows, &outcome)?;
    }

    let mut record_json = serde_json::to_string_pretty(&outcome.record)?;
    record_json.push('\n');
    print!("{record_json}");

    if let Some(path) = &args.out {
        let run = RunFile {
            record: outcome.record.clone(),
            scenario,
            assignment: outcome.assignment.pairs(),
            prices: outcome.prices.clone(),
        };
        run.save(path)?;
    }

    if args.method == Method::Auction && !outcome.record.certified {
        return Err(Failure::certificate(
            "auction finished without an optimality certificate",
        ));
    }
    Ok(())
}

/// One method's result, with prices kept only when the method produces them.
pub struct MethodOutcome {
    pub record: RunRecord,
    pub assignment: Assignment,
    pub prices: Option<PriceState>,
}

/// Runs one association method on a built instance. The recorded wall time
/// covers the solver call alone. `assoc_seed` feeds the random baseline; the
/// scenario seed, not this one, goes into auction and oracle records.
pub fn run_method(
    scenario: &Scenario,
    instance: &Instance,
    method: Method,
    epsilon: Epsilon,
    assoc_seed: u64,
    trace: Option<&mut Vec<TraceEvent>>,
) -> Result<MethodOutcome, Failure> {
    match method {
        Method::Auction => {
            let config = AuctionConfig::new(epsilon);
            let result = match trace {
                Some(rows) => solve_traced(instance, &config, &mut |event| rows.push(*event)),
                None => solve_traced(instance, &config, &mut |_| {}),
            }
            .map_err(auction_failure)?;
            let mut record = result.record;
            record.seed = Some(scenario.seed);
            Ok(MethodOutcome {
                record,
                assignment: result.assignment,
                prices: Some(result.prices),
            })
        }
        Method::Bruteforce | Method::Flow => {
            let started = Instant::now();
            let (assignment, total) = if method == Method::Bruteforce {
                brute_force_optimum(instance).map_err(oracle_failure)?
            } else {
                min_cost_flow_optimum(instance).map_err(oracle_failure)?
            };
            let wall = started.elapsed().as_secs_f64() * 1e3;
            let mut record = RunRecord::for_baseline(
                method,
                instance.ap_count(),
                instance.client_count(),
                instance.scale_k(),
                total,
                assignment.is_feasible(),
                wall,
            );
            record.seed = Some(scenario.seed);
            Ok(MethodOutcome {
                record,
                assignment,
                prices: None,
            })
        }
        Method::Rssi => {
            let started = Instant::now();
            let assignment = rssi_association(scenario, instance)?;
            let wall = started.elapsed().as_secs_f64() * 1e3;
            let total = instance
                .total_benefit(&assignment)
                .map_err(instance_failure)?;
            let mut record = RunRecord::for_baseline(
                method,
                instance.ap_count(),
                instance.client_count(),
                instance.scale_k(),
                total,
                assignment.is_feasible(),
                wall,
            );
            record.seed = Some(scenario.seed);
            Ok(MethodOutcome {
                record,
                assignment,
                prices: None,
            })
        }
        Method::Random => {
            let started = Instant::now();
            let assignment = random_association(instance, assoc_seed);
            let wall = started.elapsed().as_secs_f64() * 1e3;
            let total = instance
                .total_benefit(&assignment)
                .map_err(instance_failure)?;
            let mut record = RunRecord::for_baseline(
                method,
                instance.ap_count(),
                instance.client_count(),
                instance.scale_k(),
                total,
                assignment.is_feasible(),
                wall,
            );
            record.seed = Some(assoc_seed);
            Ok(MethodOutcome {
                record,
                assignment,
                prices: None,
            })
        }
    }
}

fn write_trace(
    path: &std::path::Path,
    rows: &[TraceEvent],
    outcome: &MethodOutcome,
) -> Result<(), Failure> {
    let den = outcome.prices.as_ref().map_or(1, |p| p.den) as f64;
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "phase,iteration,actor,target,level,delta,evicted")?;
    for row in rows {
        let evicted = row.evicted.map_or(String::new(), |e| e.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.phase,
            row.iteration,
            row.actor,
            row.target,
            row.target_level_scaled as f64 / den,
            row.delta_scaled as f64 / den,
            evicted
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn auction_failure(err: AuctionError) -> Failure {
    match err {
        AuctionError::IterationLimit { .. } => Failure::infeasible(err.to_string()),
        _ => Failure::config(err.to_string()),
    }
}

pub fn oracle_failure(err: OracleError) -> Failure {
    match err {
        OracleError::TooLarge { .. } | OracleError::Infeasible => {
            Failure::infeasible(err.to_string())
        }
        OracleError::Instance(inner) => instance_failure(inner),
    }
}

pub fn instance_failure(err: InstanceError) -> Failure {
    match err {
        InstanceError::UncoverableClient { .. }
        | InstanceError::EmptyAccessPoint { .. }
        | InstanceError::TooFewClients { .. } => Failure::infeasible(err.to_string()),
        _ => Failure::config(err.to_string()),
    }
}
