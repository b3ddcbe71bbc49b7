//! Equal-cost shortest-path routing and per-probe route tracing.
//!
//! For each destination a breadth-first search (run from the destination)
//! yields hop distances and, per node, the set of neighbors strictly closer
//! to the destination — the equal-cost next-hop set. Nodes designated as
//! load balancers pick uniformly among their next hops on every trace;
//! every other node always forwards to its minimum-id next hop, so all
//! route variability is attributable to load balancing and rewiring.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::topology::{Graph, NodeId};

/// Per-destination distance labels and next-hop sets on a fixed graph.
///
/// Next hops are stored per destination in compressed form: node `u`'s next
/// hops toward destination `d` are a slice of the destination's target
/// array, sorted ascending. Immutable after construction.
#[derive(Debug, Clone)]
pub struct RoutingState {
    destinations: Vec<NodeId>,
    tables: Vec<DestTable>,
}

#[derive(Debug, Clone)]
struct DestTable {
    dist: Vec<u32>,
    // CSR layout: next hops of node u are targets[offsets[u]..offsets[u+1]].
    offsets: Vec<u32>,
    targets: Vec<NodeId>,
}

impl RoutingState {
    /// Destinations this state was computed for, ascending.
    pub fn destinations(&self) -> &[NodeId] {
        &self.destinations
    }

    fn table(&self, destination: NodeId) -> Result<&DestTable> {
        let idx = self.destinations.binary_search(&destination).map_err(|_| {
            Error::invalid(format!("destination {destination} not in routing state"))
        })?;
        Ok(&self.tables[idx])
    }

    /// Hop distance from `node` to `destination`.
    pub fn distance(&self, destination: NodeId, node: NodeId) -> Result<u32> {
        Ok(self.table(destination)?.dist[node as usize])
    }

    /// Equal-cost next hops of `node` toward `destination`, sorted ascending.
    /// Empty exactly for the destination itself.
    pub fn next_hops(&self, destination: NodeId, node: NodeId) -> Result<&[NodeId]> {
        let t = self.table(destination)?;
        let u = node as usize;
        Ok(&t.targets[t.offsets[u] as usize..t.offsets[u + 1] as usize])
    }

    /// The deterministic choice of non-load-balancing nodes: the minimum-id
    /// next hop.
    pub fn fixed_choice(&self, destination: NodeId, node: NodeId) -> Result<NodeId> {
        let hops = self.next_hops(destination, node)?;
        hops.first()
            .copied()
            .ok_or_else(|| Error::invalid(format!("node {node} is the destination; no next hop")))
    }
}

/// Compute distances and equal-cost next-hop sets for every destination.
/// Purely deterministic; one BFS per destination.
pub fn compute_routing_state(g: &Graph, destinations: &[NodeId]) -> Result<RoutingState> {
    if destinations.is_empty() {
        return Err(Error::invalid("destination set is empty".to_string()));
    }
    let n = g.node_count();
    let mut dests = destinations.to_vec();
    dests.sort_unstable();
    dests.dedup();
    for &d in &dests {
        if d >= n {
            return Err(Error::invalid(format!("destination {d} outside [0, {n})")));
        }
    }
    let tables = dests.iter().map(|&d| build_table(g, d)).collect();
    Ok(RoutingState {
        destinations: dests,
        tables,
    })
}

fn build_table(g: &Graph, destination: NodeId) -> DestTable {
    let n = g.node_count() as usize;
    let mut dist = vec![u32::MAX; n];
    dist[destination as usize] = 0;
    let mut queue = VecDeque::with_capacity(n);
    queue.push_back(destination);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in g.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    // The graph is connected, so every node got a finite distance.
    debug_assert!(dist.iter().all(|&d| d != u32::MAX));

    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for u in 0..n as u32 {
        let du = dist[u as usize];
        if du != 0 {
            // neighbors are sorted, so each next-hop slice is sorted too
            for &v in g.neighbors(u) {
                if dist[v as usize] + 1 == du {
                    targets.push(v);
                }
            }
        }
        offsets.push(targets.len() as u32);
    }
    DestTable {
        dist,
        offsets,
        targets,
    }
}

/// Which nodes forward probes over several equal-cost next hops.
#[derive(Debug, Clone)]
pub struct LoadBalancerSet {
    flags: Vec<bool>,
    fraction: f64,
    seed: u64,
}

impl LoadBalancerSet {
    pub fn is_balancer(&self, node: NodeId) -> bool {
        self.flags[node as usize]
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn node_count(&self) -> usize {
        self.flags.len()
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Flag each node independently as a load balancer with probability
/// `fraction`; deterministic per `(n, fraction, seed)`.
pub fn designate_load_balancers(n: u32, fraction: f64, seed: u64) -> Result<LoadBalancerSet> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::invalid(format!(
            "load-balancer fraction {fraction} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flags = (0..n).map(|_| rng.random_bool(fraction)).collect();
    Ok(LoadBalancerSet {
        flags,
        fraction,
        seed,
    })
}

/// One measured route from the monitor to a destination.
///
/// Consecutive nodes are adjacent, distances strictly decrease along it,
/// and its hop count equals the monitor's BFS distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    nodes: Vec<NodeId>,
}

impl Route {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of hops (edges) on the route.
    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Trace a single route from `monitor` to `destination`.
///
/// At each node the next hop toward the destination is the fixed minimum-id
/// choice, unless the node is a load balancer, in which case it is sampled
/// uniformly from the equal-cost set using `rng`. Terminates in exactly
/// `distance(monitor)` steps.
pub fn trace_route(
    state: &RoutingState,
    lbs: &LoadBalancerSet,
    monitor: NodeId,
    destination: NodeId,
    rng: &mut impl Rng,
) -> Result<Route> {
    if monitor == destination {
        return Err(Error::invalid(format!(
            "monitor and destination are both node {monitor}"
        )));
    }
    let expected_hops = state.distance(destination, monitor)? as usize;
    let mut nodes = Vec::with_capacity(expected_hops + 1);
    let mut current = monitor;
    nodes.push(current);
    while current != destination {
        let hops = state.next_hops(destination, current)?;
        current = if lbs.is_balancer(current) {
            hops[rng.random_range(0..hops.len())]
        } else {
            hops[0]
        };
        nodes.push(current);
    }
    debug_assert_eq!(nodes.len(), expected_hops + 1);
    Ok(Route { nodes })
}
