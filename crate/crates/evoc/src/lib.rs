//! EVOC: an agent-based model of cultural evolution.
//!
//! Agents on a grid hold ideas for actions (six body parts, each stationary,
//! up, or down), invent variations biased by detected trends, imitate fitter
//! neighbors, and adopt a candidate only after mentally simulating its
//! fitness. The world supports toroidal or bounded topology, variable
//! density, semi-permeable (possibly eroding) borders, and broadcasting
//! agents visible to the whole population. The experiment harness runs
//! seeded replicate batches and emits plotter-ready CSV.

pub mod action;
pub mod cognition;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod fitness;
pub mod manifest;
pub mod metrics;
pub mod world;

pub use action::{Action, ActionId, BodyPart, Idea, PartState, ACTION_COUNT};
pub use cognition::{compute_trends, select_imitation_target, AgentState, TrendActivations};
pub use engine::{run, RunLog, SimConfig, Simulation};
pub use error::ConfigError;
pub use fitness::{evaluate, fitness_combined, fitness_f1, fitness_f2, NeedConfig, NeedMode};
pub use manifest::{parse_manifest, preset, ManifestOverrides, RunManifest};
pub use metrics::{aggregate, convergence_iteration, diversity, mean_fitness, MetricsFrame};
pub use world::{Border, BroadcasterConfig, Topology, World, WorldConfig};
