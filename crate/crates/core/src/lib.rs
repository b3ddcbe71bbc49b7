//! Simulation of the short-term dynamics of a routing topology as seen from a
//! single vantage point.
//!
//! The crate builds a connected random graph, routes over it with equal-cost
//! shortest paths, and repeatedly measures an ego-centered routing tree from
//! one monitor to a fixed destination set, the way the `tracetree`/`radar`
//! measurement pair does on the real network. Two mechanisms drive the
//! observed dynamics:
//!
//! * *load balancing* — a configurable fraction of nodes forward each probe
//!   along a uniformly chosen equal-cost next hop,
//! * *routing changes* — between measurement rounds, random single-edge
//!   rewirings alter the shortest paths while preserving node count, edge
//!   count and connectivity.
//!
//! [`measurement::radar_run`] produces a [`RoundSeries`] of per-round trees,
//! [`metrics::compute_metrics`] turns any series (simulated or parsed from an
//! archive via [`ingest`]) into churn statistics, and
//! [`metrics::compare_curves`] quantifies how close two series behave.
//!
//! Everything is deterministic given an [`ExperimentConfig`]: all randomness
//! is derived from the single master seed through labeled substreams.

pub mod config;
pub mod error;
pub mod ingest;
pub mod measurement;
pub mod metrics;
pub mod rng;
pub mod routing;
pub mod topology;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use measurement::{EgoView, RadarSimulation, RoundSeries};
pub use metrics::{CurveDistance, CurveField, MetricsReport};
pub use routing::{LoadBalancerSet, Route, RoutingState};
pub use topology::{Graph, NodeId, RewireEvent};
