//! Bounded-confidence opinion dynamics on scale-free networks.
//!
//! Agents hold two opinions in `[0, 1]` (welfare and security). Each turn the
//! broadcast media push one message to TeleViewers through a tolerance gate,
//! experts push a competing message to WiseAgents without a gate, and then
//! every agent gossips with a random neighbor. [`scenarios`] encodes four
//! sweep batteries over population splits and tolerance.

pub mod dynamics;
pub mod engine;
pub mod graph;
pub mod reporting;
pub mod scenarios;
pub mod seed;

pub use dynamics::{
    bcm_update_scalar, expert_update, media_update, peer_update, Agent, Message, OpinionPair, Role, UpdateParams,
};
pub use engine::{
    aggregate, init_state, population_means, run_replication, step, ConfigError, Means, PopulationMeans,
    ScenarioConfig, SimulationState, TimeSeries,
};
pub use graph::{degree_exponent_estimate, generate_scale_free, Graph, GraphError, GraphParams, NodeId};
pub use scenarios::{run_sweep, scenario_grid, CellResult, ResultSet, SweepError, SweepGrid};
