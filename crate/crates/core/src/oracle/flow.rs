//! Min-cost-flow formulation of the multi-assignment problem.
//!
//! The instance maps to a flow network with one node per access point, one
//! per client, and a distribution node that absorbs the surplus: clients
//! demand one unit each, access points supply one unit each, and the
//! distribution node supplies the remaining `n - m` units through zero-cost
//! arcs into the access points. Serving arcs carry cost `-benefit`, so a
//! min-cost flow of value `n` is a maximum-benefit feasible assignment.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::assignment::Assignment;
use crate::instance::Instance;

use super::OracleError;

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    capacity: i64,
    cost: i64,
}

/// Residual network with per-node supplies.
///
/// Arcs are stored in twin pairs: arc `2k` is the forward direction and arc
/// `2k + 1` its residual reverse, so pushing flow on one frees capacity on
/// the other.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<usize>>,
    supplies: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(node_count: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); node_count],
            supplies: vec![0; node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn set_supply(&mut self, node: usize, supply: i64) {
        self.supplies[node] = supply;
    }

    pub fn supply(&self, node: usize) -> i64 {
        self.supplies[node]
    }

    /// Adds a forward arc and its zero-capacity residual twin; returns the
    /// forward arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: i64, cost: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, capacity, cost });
        self.adjacency[from].push(id);
        self.arcs.push(Arc {
            to: from,
            capacity: 0,
            cost: -cost,
        });
        self.adjacency[to].push(id + 1);
        id
    }

    /// Flow currently on the forward arc `id` (twin's residual capacity).
    pub fn flow(&self, id: usize) -> i64 {
        self.arcs[id ^ 1].capacity
    }

    /// Net outflow minus supply per node; all zeros for a valid circulation.
    pub fn conservation_residuals(&self) -> Vec<i64> {
        let mut net = vec![0i64; self.node_count()];
        for (id, arc) in self.arcs.iter().enumerate().step_by(2) {
            let from = self.arcs[id ^ 1].to;
            let f = self.flow(id);
            net[from] += f;
            net[arc.to] -= f;
        }
        net.iter()
            .zip(&self.supplies)
            .map(|(out, supply)| out - supply)
            .collect()
    }

    /// Sends every unit of supply to the demand nodes along successive
    /// shortest paths. Returns the total cost, or `None` if some supply
    /// cannot reach a demand; in that case the stored flows are untouched.
    pub fn solve(&mut self) -> Option<i64> {
        let n = self.node_count();
        let source = n;
        let sink = n + 1;
        let mut arcs = self.arcs.clone();
        let mut adjacency = self.adjacency.clone();
        adjacency.push(Vec::new());
        adjacency.push(Vec::new());

        fn add(
            arcs: &mut Vec<Arc>,
            adjacency: &mut [Vec<usize>],
            from: usize,
            to: usize,
            capacity: i64,
            cost: i64,
        ) {
            let id = arcs.len();
            arcs.push(Arc { to, capacity, cost });
            adjacency[from].push(id);
            arcs.push(Arc {
                to: from,
                capacity: 0,
                cost: -cost,
            });
            adjacency[to].push(id + 1);
        }

        let mut required: i64 = 0;
        for node in 0..n {
            let supply = self.supplies[node];
            if supply > 0 {
                add(&mut arcs, &mut adjacency, source, node, supply, 0);
                required += supply;
            } else if supply < 0 {
                add(&mut arcs, &mut adjacency, node, sink, -supply, 0);
            }
        }

        // Initial potentials via Bellman-Ford over the residual graph; serving
        // arcs have negative costs, so plain Dijkstra cannot start cold.
        let node_total = n + 2;
        let mut potential = vec![0i64; node_total];
        for _ in 0..node_total {
            let mut changed = false;
            for from in 0..node_total {
                if potential[from] >= INF {
                    continue;
                }
                for &id in &adjacency[from] {
                    let arc = &arcs[id];
                    if arc.capacity > 0 && potential[from] + arc.cost < potential[arc.to] {
                        potential[arc.to] = potential[from] + arc.cost;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let mut total_cost: i64 = 0;
        let mut sent: i64 = 0;
        while sent < required {
            // Dijkstra on reduced costs from the super source.
            let mut dist = vec![INF; node_total];
            let mut parent_arc = vec![usize::MAX; node_total];
            let mut heap = BinaryHeap::new();
            dist[source] = 0;
            heap.push(Reverse((0i64, source)));
            while let Some(Reverse((d, node))) = heap.pop() {
                if d > dist[node] {
                    continue;
                }
                for &id in &adjacency[node] {
                    let arc = &arcs[id];
                    if arc.capacity <= 0 {
                        continue;
                    }
                    let reduced = arc.cost + potential[node] - potential[arc.to];
                    debug_assert!(reduced >= 0, "negative reduced cost after relabel");
                    if d + reduced < dist[arc.to] {
                        dist[arc.to] = d + reduced;
                        parent_arc[arc.to] = id;
                        heap.push(Reverse((dist[arc.to], arc.to)));
                    }
                }
            }
            if dist[sink] >= INF {
                return None;
            }
            // Capping the shift at dist[sink] keeps reduced costs of arcs
            // touching unreached nodes non-negative.
            for node in 0..node_total {
                potential[node] += dist[node].min(dist[sink]);
            }

            // Bottleneck along the shortest path, then augment.
            let mut bottleneck = required - sent;
            let mut node = sink;
            while node != source {
                let id = parent_arc[node];
                bottleneck = bottleneck.min(arcs[id].capacity);
                node = arcs[id ^ 1].to;
            }
            let mut node = sink;
            while node != source {
                let id = parent_arc[node];
                arcs[id].capacity -= bottleneck;
                arcs[id ^ 1].capacity += bottleneck;
                total_cost += bottleneck * arcs[id].cost;
                node = arcs[id ^ 1].to;
            }
            sent += bottleneck;
        }

        for (stored, solved) in self.arcs.iter_mut().zip(&arcs) {
            stored.capacity = solved.capacity;
        }
        Some(total_cost)
    }
}

/// Node ids of the conversion: distribution node, then access points, then
/// clients.
fn distribution_node() -> usize {
    0
}

fn ap_node(ap: usize) -> usize {
    1 + ap
}

fn client_node(m: usize, client: usize) -> usize {
    1 + m + client
}

/// Builds the flow network for an instance.
pub fn network_from_instance(instance: &Instance) -> FlowNetwork {
    let m = instance.ap_count();
    let n = instance.client_count();
    let mut network = FlowNetwork::new(1 + m + n);
    network.set_supply(distribution_node(), (n - m) as i64);
    for i in 0..m {
        network.set_supply(ap_node(i), 1);
        network.add_arc(distribution_node(), ap_node(i), (n - m) as i64, 0);
    }
    for j in 0..n {
        network.set_supply(client_node(m, j), -1);
        for &i in instance.aps_in_range(j) {
            network.add_arc(
                ap_node(i),
                client_node(m, j),
                1,
                -instance.benefit(i, j).unwrap(),
            );
        }
    }
    network
}

/// Exact optimum via min-cost flow. Independent of the auction solver: no
/// prices, no bidding, just shortest-path augmentation on the converted
/// network.
pub fn min_cost_flow_optimum(instance: &Instance) -> Result<(Assignment, i64), OracleError> {
    let m = instance.ap_count();
    let n = instance.client_count();
    let mut network = network_from_instance(instance);
    let serving_arcs_start = 2 * m;
    let total_cost = network.solve().ok_or(OracleError::Infeasible)?;

    let mut assignment = Assignment::empty(m, n);
    let mut arc_id = serving_arcs_start;
    for j in 0..n {
        for &i in instance.aps_in_range(j) {
            if network.flow(arc_id) > 0 {
                assignment.assign(i, j);
            }
            arc_id += 2;
        }
    }
    debug_assert!(assignment.is_feasible());
    Ok((assignment, -total_cost))
}
