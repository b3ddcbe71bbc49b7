//! Random-graph substrate and inter-round rewiring.
//!
//! The routing substrate is a connected simple undirected graph with a fixed
//! node and edge count. Between measurement rounds the topology evolves by
//! single-edge rewiring: one existing edge is removed and one absent node
//! pair is added, keeping the graph connected.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::{self, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense node identifier in `[0, node_count)`.
pub type NodeId = u32;

/// Redraw budget when sampling a connected graph by rejection.
pub const GENERATION_ATTEMPTS: u32 = 1000;
/// Retry budget for finding a connectivity-preserving rewiring move.
pub const REWIRE_ATTEMPTS: u32 = 1000;

/// Normalize an unordered node pair to `(min, max)`.
pub fn edge_key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// One atomic topology change: `removed` was an edge, `added` was not.
///
/// `round_index` is the measurement round before which the change applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewireEvent {
    pub round_index: u32,
    pub removed: (NodeId, NodeId),
    pub added: (NodeId, NodeId),
}

/// Connected simple undirected graph over nodes `0..node_count`.
#[derive(Debug, Clone)]
pub struct Graph {
    n: u32,
    /// Normalized `(u, v)` pairs, `u < v`, in insertion order.
    edges: Vec<(NodeId, NodeId)>,
    /// Position of each edge in `edges`; used for O(1) membership and removal.
    index: HashMap<(NodeId, NodeId), usize>,
    /// Per-node neighbor lists, sorted ascending.
    adj: Vec<Vec<NodeId>>,
}

impl Graph {
    fn with_capacity(n: u32, m: usize) -> Self {
        Graph {
            n,
            edges: Vec::with_capacity(m),
            index: HashMap::with_capacity(m),
            adj: vec![Vec::new(); n as usize],
        }
    }

    /// Build a graph from an explicit edge list, enforcing all invariants
    /// (valid ids, no self-loops, no duplicates, connected).
    pub fn from_edges(n: u32, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        if n < 2 {
            return Err(Error::invalid(format!("node count must be >= 2, got {n}")));
        }
        let mut g = Graph::with_capacity(n, edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) references a node outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            if !g.insert_edge(edge_key(u, v)) {
                return Err(Error::invalid(format!("duplicate edge ({u}, {v})")));
            }
        }
        if !g.is_connected() {
            return Err(Error::invalid("graph is not connected".to_string()));
        }
        Ok(g)
    }

    pub fn node_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.index.contains_key(&edge_key(u, v))
    }

    /// Neighbors of `u`, sorted ascending.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u as usize]
    }

    /// Edges in insertion order (normalized pairs).
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    /// Edge list sorted ascending by `(u, v)`.
    pub fn edges_sorted(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = self.edges.clone();
        out.sort_unstable();
        out
    }

    /// Debug dump: one `<u> <v>` line per edge, `u < v`, ascending.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (u, v) in self.edges_sorted() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n as usize];
        self.reachable_count(0, &mut seen) == self.n as usize
    }

    fn reachable_count(&self, start: NodeId, seen: &mut [bool]) -> usize {
        let mut queue = VecDeque::new();
        seen[start as usize] = true;
        queue.push_back(start);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    }

    /// Inserts a normalized edge; false if it was already present.
    fn insert_edge(&mut self, e: (NodeId, NodeId)) -> bool {
        if self.index.contains_key(&e) {
            return false;
        }
        self.index.insert(e, self.edges.len());
        self.edges.push(e);
        let (u, v) = e;
        let au = &mut self.adj[u as usize];
        au.insert(au.binary_search(&v).unwrap_err(), v);
        let av = &mut self.adj[v as usize];
        av.insert(av.binary_search(&u).unwrap_err(), u);
        true
    }

    fn remove_edge(&mut self, e: (NodeId, NodeId)) {
        let pos = self.index.remove(&e).expect("edge must exist");
        self.edges.swap_remove(pos);
        if pos < self.edges.len() {
            self.index.insert(self.edges[pos], pos);
        }
        let (u, v) = e;
        let au = &mut self.adj[u as usize];
        au.remove(au.binary_search(&v).unwrap());
        let av = &mut self.adj[v as usize];
        av.remove(av.binary_search(&u).unwrap());
    }

    fn max_pairs(&self) -> u64 {
        pair_count(self.n)
    }

    /// Uniform currently-absent node pair, or None if the graph is complete.
    ///
    /// Rejection sampling first; near-complete graphs fall back to
    /// enumerating the absent pairs so the draw stays uniform.
    fn sample_absent_pair(&self, rng: &mut impl Rng) -> Option<(NodeId, NodeId)> {
        if self.edges.len() as u64 >= self.max_pairs() {
            return None;
        }
        for _ in 0..1000 {
            let p = sample_pair(self.n, rng);
            if !self.index.contains_key(&p) {
                return Some(p);
            }
        }
        let mut absent = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.index.contains_key(&(u, v)) {
                    absent.push((u, v));
                }
            }
        }
        Some(absent[rng.random_range(0..absent.len())])
    }

    /// One rewiring move in place; see [`rewire_step`] for the contract.
    pub(crate) fn rewire_in_place(
        &mut self,
        rng: &mut impl Rng,
        round_index: u32,
    ) -> Result<RewireEvent> {
        if self.edges.len() as u64 >= self.max_pairs() {
            return Err(Error::invalid(
                "graph is complete; no absent pair to add".to_string(),
            ));
        }
        for _ in 0..REWIRE_ATTEMPTS {
            let removed = self.edges[rng.random_range(0..self.edges.len())];
            let added = self
                .sample_absent_pair(rng)
                .expect("non-complete graph has an absent pair");
            self.remove_edge(removed);
            self.insert_edge(added);
            if self.is_connected() {
                return Ok(RewireEvent {
                    round_index,
                    removed,
                    added,
                });
            }
            self.remove_edge(added);
            self.insert_edge(removed);
        }
        Err(Error::RewireExhausted {
            attempts: REWIRE_ATTEMPTS,
        })
    }

    /// Component id per node (ids assigned in ascending order of each
    /// component's smallest node) and the component count.
    fn components(&self) -> (Vec<u32>, u32) {
        const UNSEEN: u32 = u32::MAX;
        let mut comp = vec![UNSEEN; self.n as usize];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if comp[start as usize] != UNSEEN {
                continue;
            }
            comp[start as usize] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u as usize] {
                    if comp[v as usize] == UNSEEN {
                        comp[v as usize] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        (comp, next)
    }

    /// Bridge edges (normalized), found with an iterative lowlink DFS.
    fn bridge_edges(&self) -> HashSet<(NodeId, NodeId)> {
        let n = self.n as usize;
        let mut disc = vec![u32::MAX; n];
        let mut low = vec![u32::MAX; n];
        let mut timer = 0u32;
        let mut bridges = HashSet::new();
        // Stack entries: (node, parent, next adjacency index to visit).
        let mut stack: Vec<(u32, u32, usize)> = Vec::new();
        for root in 0..self.n {
            if disc[root as usize] != u32::MAX {
                continue;
            }
            disc[root as usize] = timer;
            low[root as usize] = timer;
            timer += 1;
            stack.push((root, u32::MAX, 0));
            while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
                let ui = u as usize;
                if *idx < self.adj[ui].len() {
                    let v = self.adj[ui][*idx];
                    *idx += 1;
                    if v == parent {
                        continue;
                    }
                    let vi = v as usize;
                    if disc[vi] == u32::MAX {
                        disc[vi] = timer;
                        low[vi] = timer;
                        timer += 1;
                        stack.push((v, u, 0));
                    } else {
                        low[ui] = low[ui].min(disc[vi]);
                    }
                } else {
                    stack.pop();
                    if parent != u32::MAX {
                        let pi = parent as usize;
                        low[pi] = low[pi].min(low[ui]);
                        if low[ui] > disc[pi] {
                            bridges.insert(edge_key(parent, u));
                        }
                    }
                }
            }
        }
        bridges
    }

    /// Make a disconnected graph connected while keeping node and edge
    /// counts: repeatedly relocate a non-bridge edge into a cross-component
    /// position. Any graph with `m >= n - 1` edges and several components
    /// has a cycle somewhere, so a movable edge always exists.
    fn repair_connectivity(&mut self, rng: &mut impl Rng) {
        loop {
            let (comp, count) = self.components();
            if count == 1 {
                return;
            }
            let bridges = self.bridge_edges();
            let movable: Vec<(NodeId, NodeId)> = self
                .edges
                .iter()
                .copied()
                .filter(|e| !bridges.contains(e))
                .collect();
            let removed = movable[rng.random_range(0..movable.len())];
            let left: Vec<NodeId> = (0..self.n).filter(|&v| comp[v as usize] == 0).collect();
            let right: Vec<NodeId> = (0..self.n).filter(|&v| comp[v as usize] == 1).collect();
            let x = left[rng.random_range(0..left.len())];
            let y = right[rng.random_range(0..right.len())];
            self.remove_edge(removed);
            self.insert_edge(edge_key(x, y));
        }
    }
}

fn pair_count(n: u32) -> u64 {
    n as u64 * (n as u64 - 1) / 2
}

/// Uniform unordered node pair, normalized.
fn sample_pair(n: u32, rng: &mut impl Rng) -> (NodeId, NodeId) {
    loop {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            return edge_key(u, v);
        }
    }
}

/// Draw a uniform random edge set of size `m` (no connectivity condition).
fn draw_edge_set(n: u32, m: u64, rng: &mut impl Rng) -> Graph {
    let max = pair_count(n);
    let mut g = Graph::with_capacity(n, m as usize);
    if m > max / 2 {
        // Dense case: draw the complement instead, then take what is left,
        // in ascending pair order.
        let mut excluded: HashSet<(NodeId, NodeId)> = HashSet::new();
        while (excluded.len() as u64) < max - m {
            excluded.insert(sample_pair(n, rng));
        }
        for u in 0..n {
            for v in (u + 1)..n {
                if !excluded.contains(&(u, v)) {
                    g.insert_edge((u, v));
                }
            }
        }
    } else {
        while (g.edge_count() as u64) < m {
            g.insert_edge(sample_pair(n, rng));
        }
    }
    g
}

/// Generate a connected simple graph with exactly `n` nodes and `m` edges,
/// deterministic in `seed`.
///
/// Edge sets are drawn uniformly at random and redrawn until connected, up
/// to [`GENERATION_ATTEMPTS`] times. Sparse parameter choices can make the
/// connectivity condition astronomically rare, so when the redraw budget is
/// exhausted the last draw is repaired by relocating cycle edges across
/// components, which preserves the exact node and edge counts.
pub fn generate_random_graph(n: u32, m: u64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid(format!("node count must be >= 2, got {n}")));
    }
    let max = pair_count(n);
    if m < n as u64 - 1 || m > max {
        return Err(Error::invalid(format!(
            "edge count {m} outside [{}, {max}] for {n} nodes",
            n - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_ATTEMPTS {
        let g = draw_edge_set(n, m, &mut rng);
        if g.is_connected() {
            return Ok(g);
        }
    }
    let mut g = draw_edge_set(n, m, &mut rng);
    g.repair_connectivity(&mut rng);
    Ok(g)
}

/// Remove one uniformly chosen edge and add one uniformly chosen absent
/// pair, rejecting moves that disconnect the graph (up to
/// [`REWIRE_ATTEMPTS`] resamples). Node and edge counts are unchanged.
///
/// Errors if the graph is complete (no absent pair exists) or if every
/// sampled move within the budget disconnected the graph.
pub fn rewire_step(
    g: &Graph,
    rng: &mut impl Rng,
    round_index: u32,
) -> Result<(Graph, RewireEvent)> {
    let mut out = g.clone();
    let event = out.rewire_in_place(rng, round_index)?;
    Ok((out, event))
}
