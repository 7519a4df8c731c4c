use mmwave_assoc::{generate_scenario_with, GeneratorConfig, Layout, ScenarioError};

use crate::{Failure, GenerateArgs};

pub fn run(args: GenerateArgs) -> Result<(), Failure> {
    let mut config = GeneratorConfig::new(args.m, args.n, args.seed);
    if let Some(path) = &args.radio_config {
        let text = std::fs::read_to_string(path)?;
        config.radio = serde_json::from_str(&text)?;
    }
    if let Some(eta) = args.eta {
        config.radio.eta = eta;
    }
    if args.grid {
        config.layout = Layout::Grid;
    }
    if let Some(floor) = args.demand_floor_bps {
        config.demand_floor_bps = floor;
    }

    let scenario = generate_scenario_with(&config).map_err(scenario_failure)?;
    match &args.out {
        Some(path) => scenario.save(path).map_err(scenario_failure)?,
        None => println!("{}", scenario.to_json().map_err(scenario_failure)?),
    }
    Ok(())
}

pub fn scenario_failure(err: ScenarioError) -> Failure {
    match err {
        ScenarioError::PlacementExhausted { .. } => Failure::infeasible(err.to_string()),
        _ => Failure::config(err.to_string()),
    }
}
