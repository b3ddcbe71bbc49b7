//! Ego-centered tree measurement and the round loop.
//!
//! One `tracetree` round traces a route to every destination and merges the
//! routes into a single tree rooted at the monitor: each route is scanned
//! backward from the destination and grafted below the first node already in
//! the tree, mirroring how the real tool stops probing at already-seen
//! interfaces. The radar loop repeats rounds, applying rewiring events at
//! round boundaries and recomputing routes afterwards.

use std::collections::BTreeMap;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::rng;
use crate::routing::{
    compute_routing_state, designate_load_balancers, trace_route, LoadBalancerSet, RoutingState,
};
use crate::topology::{generate_random_graph, Graph, NodeId, RewireEvent};

/// One round's measured tree: a parent map rooted at the monitor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgoView {
    round_index: u32,
    monitor: NodeId,
    /// child -> parent; the monitor has no entry.
    parent: BTreeMap<NodeId, NodeId>,
}

impl EgoView {
    /// Wrap a parent map as a view. The map is trusted to be a tree rooted
    /// at `monitor`; use [`EgoView::validate`] when it is not.
    pub fn new(round_index: u32, monitor: NodeId, parent: BTreeMap<NodeId, NodeId>) -> Self {
        EgoView {
            round_index,
            monitor,
            parent,
        }
    }

    pub fn round_index(&self) -> u32 {
        self.round_index
    }

    pub fn monitor(&self) -> NodeId {
        self.monitor
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node == self.monitor || self.parent.contains_key(&node)
    }

    pub fn parent_of(&self, node: NodeId) -> Option<NodeId> {
        self.parent.get(&node).copied()
    }

    /// Number of observed nodes, monitor included.
    pub fn node_count(&self) -> usize {
        self.parent.len() + 1
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len()
    }

    /// Observed nodes in ascending id order.
    pub fn nodes_sorted(&self) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = self.parent.keys().copied().collect();
        if let Err(pos) = nodes.binary_search(&self.monitor) {
            nodes.insert(pos, self.monitor);
        }
        nodes
    }

    /// Tree edges as `(parent, child)`, in ascending child order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.parent.iter().map(|(&child, &parent)| (parent, child))
    }

    /// Same tree content, ignoring the round index.
    pub fn tree_eq(&self, other: &EgoView) -> bool {
        self.monitor == other.monitor && self.parent == other.parent
    }

    /// Check that the parent map is a single tree rooted at the monitor.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.parent.contains_key(&self.monitor) {
            return Err(format!("monitor {} has a parent", self.monitor));
        }
        let limit = self.parent.len() + 1;
        for &child in self.parent.keys() {
            let mut node = child;
            let mut steps = 0;
            while node != self.monitor {
                node = match self.parent.get(&node) {
                    Some(&p) => p,
                    None => return Err(format!("node {node} does not reach the monitor")),
                };
                steps += 1;
                if steps > limit {
                    return Err(format!("cycle on the parent chain of node {child}"));
                }
            }
        }
        Ok(())
    }

    fn with_capacity(round_index: u32, monitor: NodeId) -> Self {
        EgoView {
            round_index,
            monitor,
            parent: BTreeMap::new(),
        }
    }

    /// Graft the tail of a monitor-rooted route below its first node that is
    /// already in the tree.
    fn graft_route(&mut self, route: &[NodeId]) {
        debug_assert_eq!(route[0], self.monitor);
        let mut start = route.len() - 1;
        if self.contains(route[start]) {
            return;
        }
        while !self.contains(route[start - 1]) {
            start -= 1;
        }
        for i in start..route.len() {
            self.parent.insert(route[i], route[i - 1]);
        }
    }
}

/// Measure one tracetree round.
///
/// Destinations are traced in ascending id order; each trace draws from its
/// own `(round, destination)` substream of `master_seed`, so per-destination
/// routes do not depend on evaluation order.
pub fn tracetree_round(
    g: &Graph,
    state: &RoutingState,
    lbs: &LoadBalancerSet,
    monitor: NodeId,
    destinations: &[NodeId],
    master_seed: u64,
    round_index: u32,
) -> Result<EgoView> {
    if destinations.is_empty() {
        return Err(Error::invalid("destination set is empty".to_string()));
    }
    let mut order = destinations.to_vec();
    order.sort_unstable();
    order.dedup();

    let mut view = EgoView::with_capacity(round_index, monitor);
    for &dest in &order {
        let mut trace_rng = rng::stream(
            master_seed,
            rng::DOMAIN_TRACE,
            rng::trace_index(round_index, dest),
        );
        let route = trace_route(state, lbs, monitor, dest, &mut trace_rng)?;
        view.graft_route(route.nodes());
    }
    debug_assert!(order.iter().all(|&d| view.contains(d)));
    debug_assert!(view.edges().all(|(p, c)| g.has_edge(p, c)));
    debug_assert!(view.validate().is_ok());
    Ok(view)
}

/// Everything one experiment run produces.
#[derive(Debug, Clone)]
pub struct RoundSeries {
    pub monitor: NodeId,
    /// Fixed destination set, ascending.
    pub destinations: Vec<NodeId>,
    pub round_period_s: u64,
    pub config: ExperimentConfig,
    /// Views with consecutive round indices starting at 0.
    pub views: Vec<EgoView>,
    /// All rewiring events, in application order.
    pub rewire_log: Vec<RewireEvent>,
}

/// Incremental driver for the radar loop; [`radar_run`] wraps it.
///
/// Exposes the evolving graph so callers can validate each round's view
/// against the topology it was measured on.
pub struct RadarSimulation {
    config: ExperimentConfig,
    graph: Graph,
    lbs: LoadBalancerSet,
    monitor: NodeId,
    destinations: Vec<NodeId>,
    state: RoutingState,
    next_round: u32,
}

impl RadarSimulation {
    /// Generate the substrate, load-balancer set, monitor and destinations
    /// from the config's master seed.
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let master = config.seed;
        let graph = generate_random_graph(
            config.n,
            config.m,
            rng::derive_seed(master, rng::DOMAIN_GRAPH, 0),
        )?;
        let lbs = designate_load_balancers(
            config.n,
            config.lb_fraction,
            rng::derive_seed(master, rng::DOMAIN_LOAD_BALANCERS, 0),
        )?;
        let mut endpoint_rng = rng::stream(master, rng::DOMAIN_ENDPOINTS, 0);
        let picks = sample_distinct(config.n, config.num_destinations + 1, &mut endpoint_rng);
        let monitor = picks[0];
        let mut destinations = picks[1..].to_vec();
        destinations.sort_unstable();
        let state = compute_routing_state(&graph, &destinations)?;
        Ok(RadarSimulation {
            config: config.clone(),
            graph,
            lbs,
            monitor,
            destinations,
            state,
            next_round: 0,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn monitor(&self) -> NodeId {
        self.monitor
    }

    pub fn destinations(&self) -> &[NodeId] {
        &self.destinations
    }

    pub fn load_balancers(&self) -> &LoadBalancerSet {
        &self.lbs
    }

    pub fn routing_state(&self) -> &RoutingState {
        &self.state
    }

    pub fn rounds_done(&self) -> u32 {
        self.next_round
    }

    /// Advance one round: apply this boundary's rewirings (none before round
    /// 0), reconverge routing, and measure. Returns the view plus the events
    /// applied before it.
    pub fn step(&mut self) -> Result<(EgoView, Vec<RewireEvent>)> {
        let round = self.next_round;
        let mut events = Vec::new();
        if round > 0 && self.config.rewires_per_round > 0 {
            let mut rewire_rng = rng::stream(self.config.seed, rng::DOMAIN_REWIRE, round as u64);
            for _ in 0..self.config.rewires_per_round {
                let event = self
                    .graph
                    .rewire_in_place(&mut rewire_rng, round)
                    .map_err(|e| Error::RoundFailed {
                        round,
                        source: Box::new(e),
                    })?;
                events.push(event);
            }
            // instantaneous reconvergence before the next measurement
            self.state = compute_routing_state(&self.graph, &self.destinations)?;
        }
        let view = tracetree_round(
            &self.graph,
            &self.state,
            &self.lbs,
            self.monitor,
            &self.destinations,
            self.config.seed,
            round,
        )
        .map_err(|e| Error::RoundFailed {
            round,
            source: Box::new(e),
        })?;
        self.next_round = round + 1;
        Ok((view, events))
    }
}

/// Run the full radar experiment described by `config`. Deterministic:
/// identical configs give identical series.
pub fn radar_run(config: &ExperimentConfig) -> Result<RoundSeries> {
    let mut sim = RadarSimulation::new(config)?;
    let mut views = Vec::with_capacity(config.rounds as usize);
    let mut rewire_log = Vec::new();
    for _ in 0..config.rounds {
        let (view, events) = sim.step()?;
        views.push(view);
        rewire_log.extend(events);
    }
    Ok(RoundSeries {
        monitor: sim.monitor,
        destinations: sim.destinations.clone(),
        round_period_s: config.round_period_s,
        config: config.clone(),
        views,
        rewire_log,
    })
}

/// `k` distinct node ids via a partial Fisher-Yates shuffle.
fn sample_distinct(n: u32, k: u32, rng: &mut impl rand::Rng) -> Vec<NodeId> {
    debug_assert!(k <= n);
    let mut pool: Vec<NodeId> = (0..n).collect();
    for i in 0..k as usize {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(k as usize);
    pool
}
