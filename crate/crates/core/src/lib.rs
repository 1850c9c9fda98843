//! Evolutionary price of anarchy of the virus inoculation game.
//!
//! Build a [`Graph`], pick a [`CostVector`] and a [`DynamicsSpec`], then
//! either simulate the dynamics ([`dynamics::simulate`]) or, for cliques and
//! stars, solve the exact chain ([`metrics::analyze_exact`]).

pub mod chain;
pub mod cli;

pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod payoffs;
pub mod states;

pub use dynamics::{DynamicsKind, DynamicsSpec, SimulationOptions, SimulationResult};
pub use equilibria::{enumerate_nash, is_nash, EquilibriumReport};
pub use error::{Error, Result};
pub use graph::{Configuration, Graph, Topology};
pub use metrics::EPoAReport;
pub use payoffs::{sweep_costs, CostVector, NodeCosts};
pub use states::{StateKey, StateSpace};
