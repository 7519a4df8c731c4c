//! Deployment scenarios: access-point layout, client placement, demands.
//!
//! A scenario pins everything the instance builder needs: radio parameters,
//! coordinates for access points and clients, per-client demanded rates, and
//! the cell radius that defines coverage. Generation is deterministic given a
//! seed and always yields a solvable placement (every access point covers at
//! least one client and a full client-distinct cover of the access points
//! exists), redrawing client positions from the same stream until it does.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{solve_cell_radius, ChannelError, RadioParams};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("invalid generator configuration: {0}")]
    BadConfig(String),
    #[error("no solvable placement found after {attempts} redraws")]
    PlacementExhausted { attempts: u32 },
    #[error("scenario is inconsistent: {0}")]
    Inconsistent(String),
    #[error("failed to read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse scenario: {0}")]
    Parse(#[from] serde_json::Error),
}

/// A concrete deployment: positions, demands, and the radio that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub radio: RadioParams,
    pub aps: Vec<[f64; 2]>,
    pub clients: Vec<[f64; 2]>,
    pub demands_bps: Vec<f64>,
    pub cell_radius_m: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn ap_count(&self) -> usize {
        self.aps.len()
    }

    pub fn client_count(&self) -> usize {
        self.clients.len()
    }

    pub fn distance(&self, ap: usize, client: usize) -> f64 {
        let [ax, ay] = self.aps[ap];
        let [cx, cy] = self.clients[client];
        ((ax - cx).powi(2) + (ay - cy).powi(2)).sqrt()
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.radio.validate()?;
        if self.aps.is_empty() {
            return Err(ScenarioError::Inconsistent("no access points".into()));
        }
        if self.clients.len() < self.aps.len() {
            return Err(ScenarioError::Inconsistent(format!(
                "{} clients cannot cover {} access points",
                self.clients.len(),
                self.aps.len()
            )));
        }
        if self.demands_bps.len() != self.clients.len() {
            return Err(ScenarioError::Inconsistent(format!(
                "{} demands for {} clients",
                self.demands_bps.len(),
                self.clients.len()
            )));
        }
        if self.demands_bps.iter().any(|q| !q.is_finite() || *q <= 0.0) {
            return Err(ScenarioError::Inconsistent(
                "demands must be strictly positive".into(),
            ));
        }
        if !self.cell_radius_m.is_finite() || self.cell_radius_m <= 0.0 {
            return Err(ScenarioError::Inconsistent(format!(
                "cell radius must be positive, got {}",
                self.cell_radius_m
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, ScenarioError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<(), ScenarioError> {
        let mut body = self.to_json()?;
        body.push('\n');
        std::fs::write(path, body)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, ScenarioError> {
        let body = std::fs::read_to_string(path)?;
        let scenario: Scenario = serde_json::from_str(&body)?;
        scenario.validate()?;
        Ok(scenario)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Access points on a straight line, one spacing apart.
    Line,
    /// Access points on a near-square grid, one spacing apart in each axis.
    Grid,
}

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub ap_count: usize,
    pub client_count: usize,
    pub seed: u64,
    pub radio: RadioParams,
    pub layout: Layout,
    /// Edge-of-cell SNR that defines the coverage radius.
    pub target_snr_db: f64,
    /// Access-point spacing as a multiple of the cell radius.
    pub spacing_factor: f64,
    pub demand_max_bps: f64,
    /// Demands below this floor are redrawn.
    pub demand_floor_bps: f64,
    /// Redraw budget for the solvable-placement loop.
    pub max_placement_attempts: u32,
}

impl GeneratorConfig {
    pub fn new(ap_count: usize, client_count: usize, seed: u64) -> Self {
        GeneratorConfig {
            ap_count,
            client_count,
            seed,
            radio: RadioParams::default(),
            layout: Layout::Line,
            target_snr_db: 10.0,
            spacing_factor: 1.1,
            demand_max_bps: 100e6,
            demand_floor_bps: 1e6,
            max_placement_attempts: 100_000,
        }
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if self.ap_count == 0 {
            return Err(ScenarioError::BadConfig(
                "ap_count must be at least 1".into(),
            ));
        }
        if self.client_count < self.ap_count {
            return Err(ScenarioError::BadConfig(format!(
                "client_count {} must be at least ap_count {}",
                self.client_count, self.ap_count
            )));
        }
        if !self.spacing_factor.is_finite() || self.spacing_factor <= 0.0 {
            return Err(ScenarioError::BadConfig(
                "spacing_factor must be positive".into(),
            ));
        }
        if !self.demand_floor_bps.is_finite()
            || self.demand_floor_bps <= 0.0
            || !self.demand_max_bps.is_finite()
            || self.demand_max_bps <= self.demand_floor_bps
        {
            return Err(ScenarioError::BadConfig(format!(
                "demand range [{}, {}] is empty or has a non-positive floor",
                self.demand_floor_bps, self.demand_max_bps
            )));
        }
        self.radio.validate()?;
        Ok(())
    }
}

/// Generates a scenario with default radio parameters and line layout.
pub fn generate_scenario(
    ap_count: usize,
    client_count: usize,
    seed: u64,
) -> Result<Scenario, ScenarioError> {
    generate_scenario_with(&GeneratorConfig::new(ap_count, client_count, seed))
}

/// Generates a scenario from an explicit configuration.
///
/// Clients are drawn uniformly over the union of the coverage discs by
/// rejection from the bounding box. A draw is kept only if the induced
/// coverage sets admit a solvable association (every access point can be
/// matched to a distinct in-range client); otherwise all client positions are
/// redrawn from the same seeded stream.
pub fn generate_scenario_with(config: &GeneratorConfig) -> Result<Scenario, ScenarioError> {
    config.validate()?;
    let radius = solve_cell_radius(&config.radio, config.target_snr_db)?;
    let spacing = config.spacing_factor * radius;
    let aps = place_aps(config.ap_count, config.layout, spacing);

    let min_x = aps.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min) - radius;
    let max_x = aps.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max) + radius;
    let min_y = aps.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min) - radius;
    let max_y = aps.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max) + radius;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut clients = Vec::with_capacity(config.client_count);
    let mut attempts = 0;
    loop {
        attempts += 1;
        if attempts > config.max_placement_attempts {
            return Err(ScenarioError::PlacementExhausted {
                attempts: config.max_placement_attempts,
            });
        }
        clients.clear();
        while clients.len() < config.client_count {
            let x = rng.gen_range(min_x..=max_x);
            let y = rng.gen_range(min_y..=max_y);
            let covered = aps
                .iter()
                .any(|&[ax, ay]| (ax - x).powi(2) + (ay - y).powi(2) <= radius * radius);
            if covered {
                clients.push([x, y]);
            }
        }
        if placement_is_solvable(&aps, &clients, radius) {
            break;
        }
    }

    let mut demands_bps = Vec::with_capacity(config.client_count);
    for _ in 0..config.client_count {
        let mut q = rng.gen_range(0.0..config.demand_max_bps);
        while q < config.demand_floor_bps {
            q = rng.gen_range(0.0..config.demand_max_bps);
        }
        demands_bps.push(q);
    }

    Ok(Scenario {
        radio: config.radio,
        aps,
        clients,
        demands_bps,
        cell_radius_m: radius,
        seed: config.seed,
    })
}

fn place_aps(count: usize, layout: Layout, spacing: f64) -> Vec<[f64; 2]> {
    match layout {
        Layout::Line => (0..count).map(|i| [i as f64 * spacing, 0.0]).collect(),
        Layout::Grid => {
            let cols = (count as f64).sqrt().ceil() as usize;
            (0..count)
                .map(|i| [(i % cols) as f64 * spacing, (i / cols) as f64 * spacing])
                .collect()
        }
    }
}

/// True when every access point covers a client and the coverage graph admits
/// a matching that saturates the access points (so each one can hold a
/// distinct client while the rest attach anywhere in range).
fn placement_is_solvable(aps: &[[f64; 2]], clients: &[[f64; 2]], radius: f64) -> bool {
    let in_range: Vec<Vec<usize>> = aps
        .iter()
        .map(|&[ax, ay]| {
            clients
                .iter()
                .enumerate()
                .filter(|(_, &[cx, cy])| (ax - cx).powi(2) + (ay - cy).powi(2) <= radius * radius)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    if in_range.iter().any(|set| set.is_empty()) {
        return false;
    }
    ap_saturating_matching(&in_range, clients.len())
}

fn ap_saturating_matching(in_range: &[Vec<usize>], client_count: usize) -> bool {
    fn augment(
        ap: usize,
        in_range: &[Vec<usize>],
        holder: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &client in &in_range[ap] {
            if visited[client] {
                continue;
            }
            visited[client] = true;
            let current = holder[client];
            match current {
                None => {
                    holder[client] = Some(ap);
                    return true;
                }
                Some(other) if augment(other, in_range, holder, visited) => {
                    holder[client] = Some(ap);
                    return true;
                }
                _ => {}
            }
        }
        false
    }

    let mut holder = vec![None; client_count];
    for ap in 0..in_range.len() {
        let mut visited = vec![false; client_count];
        if !augment(ap, in_range, &mut holder, &mut visited) {
            return false;
        }
    }
    true
}
