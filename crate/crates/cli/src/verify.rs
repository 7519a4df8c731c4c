use mmwave_assoc::{check_epsilon_cs, Assignment, AuctionConfig, Instance, Method};

use crate::epsilon::parse_epsilon;
use crate::runfile::RunFile;
use crate::solve::instance_failure;
use crate::{Failure, VerifyArgs};

pub fn run(args: VerifyArgs) -> Result<(), Failure> {
    let run = RunFile::load(&args.run)?;
    if run.record.method != Method::Auction {
        return Err(Failure::config(format!(
            "run used method {}; only auction runs carry a certificate",
            run.record.method
        )));
    }
    let prices = run
        .prices
        .as_ref()
        .ok_or_else(|| Failure::config("run file has no prices to check"))?;
    let epsilon_text = run
        .record
        .epsilon_exact
        .as_deref()
        .ok_or_else(|| Failure::config("run file has no exact epsilon"))?;
    let epsilon = parse_epsilon(epsilon_text)?;

    run.scenario
        .validate()
        .map_err(crate::generate::scenario_failure)?;
    let instance =
        Instance::from_scenario(&run.scenario, run.record.scale_k).map_err(instance_failure)?;
    let assignment = Assignment::from_pairs(
        instance.ap_count(),
        instance.client_count(),
        run.assignment.iter().copied(),
    );

    let total = instance
        .total_benefit(&assignment)
        .map_err(instance_failure)?;
    if total != run.record.total_benefit_scaled {
        return Err(Failure::certificate(format!(
            "stored total {} does not match the recomputed total {total}",
            run.record.total_benefit_scaled
        )));
    }
    if !assignment.is_feasible() {
        return Err(Failure::certificate(
            "stored assignment leaves a client or an access point unserved",
        ));
    }

    let report = check_epsilon_cs(&instance, &assignment, prices, epsilon)
        .map_err(|e| Failure::config(e.to_string()))?;
    let eligible = AuctionConfig::new(epsilon).certificate_eligible(instance.ap_count());
    println!(
        "pair levels: {}",
        if report.pass_a() { "pass" } else { "fail" }
    );
    println!(
        "assigned splits: {}",
        if report.pass_b() { "pass" } else { "fail" }
    );
    println!(
        "multi-client profits: {}",
        if report.pass_c() { "pass" } else { "fail" }
    );
    println!(
        "epsilon {} {} 1/m",
        epsilon_text,
        if eligible { "<" } else { ">=" }
    );

    if report.passes() && eligible {
        println!("certificate PASS: the assignment is optimal");
        Ok(())
    } else if report.passes() {
        Err(Failure::certificate(
            "conditions hold but epsilon is too coarse to prove optimality",
        ))
    } else {
        Err(Failure::certificate(format!(
            "{} pair, {} split, {} profit violations",
            report.violations_a.len(),
            report.violations_b.len(),
            report.violations_c.len()
        )))
    }
}
