//! Evolutionary update rules with mutation: Moran death-birth, Moran
//! birth-death and pairwise comparison (imitation).
//!
//! Each step first flips a `μ`-coin. On heads one uniformly chosen node
//! redraws its strategy from a fair coin (so it may keep its strategy). On
//! tails the selection rule of the chosen process runs. At most one node
//! changes per step.
//!
//! All randomness goes through [`Chooser`], so a step can be driven by an RNG
//! ([`RngChooser`]) or have its full outcome distribution enumerated
//! ([`kernel::step_distribution`]).

pub mod kernel;
mod simulate;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Configuration, Graph, Topology};
use crate::payoffs::NodeCosts;

pub use simulate::{replica_rng, simulate, simulate_replicas, InitialState, SimulationOptions, SimulationResult, Visit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicsKind {
    MoranDb,
    MoranBd,
    Pairwise,
}

impl DynamicsKind {
    pub const ALL: [DynamicsKind; 3] = [DynamicsKind::MoranDb, DynamicsKind::MoranBd, DynamicsKind::Pairwise];

    pub fn name(&self) -> &'static str {
        match self {
            DynamicsKind::MoranDb => "moran-db",
            DynamicsKind::MoranBd => "moran-bd",
            DynamicsKind::Pairwise => "pairwise",
        }
    }
}

impl fmt::Display for DynamicsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DynamicsKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moran-db" | "db" => Ok(DynamicsKind::MoranDb),
            "moran-bd" | "bd" => Ok(DynamicsKind::MoranBd),
            "pairwise" | "pc" => Ok(DynamicsKind::Pairwise),
            other => Err(Error::InvalidParameter(format!("unknown dynamics {other:?}"))),
        }
    }
}

/// Process kind and its parameters.
///
/// `selection_strength` only affects pairwise comparison and
/// `fitness_exponent` only the Moran kinds. `self_replacement` applies to
/// clique topologies: the focal node is then also a candidate neighbor, which
/// gives the standard well-mixed transition probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSpec {
    pub kind: DynamicsKind,
    pub mutation_rate: f64,
    pub selection_strength: f64,
    pub fitness_exponent: f64,
    pub self_replacement: bool,
}

impl DynamicsSpec {
    pub fn new(kind: DynamicsKind) -> DynamicsSpec {
        DynamicsSpec {
            kind,
            mutation_rate: 0.001,
            selection_strength: 1.0,
            fitness_exponent: 1.0,
            self_replacement: true,
        }
    }

    pub fn with_mutation(mut self, mu: f64) -> DynamicsSpec {
        self.mutation_rate = mu;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> DynamicsSpec {
        self.selection_strength = beta;
        self
    }

    pub fn with_fitness_exponent(mut self, s: f64) -> DynamicsSpec {
        self.fitness_exponent = s;
        self
    }

    pub fn with_self_replacement(mut self, allowed: bool) -> DynamicsSpec {
        self.self_replacement = allowed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidParameter(format!(
                "mutation rate must lie in [0, 1), got {}",
                self.mutation_rate
            )));
        }
        if !(self.selection_strength >= 0.0 && self.selection_strength.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "selection strength must be a finite nonnegative number, got {}",
                self.selection_strength
            )));
        }
        if !(self.fitness_exponent > 0.0 && self.fitness_exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fitness exponent must be positive, got {}",
                self.fitness_exponent
            )));
        }
        Ok(())
    }

    fn includes_self(&self, g: &Graph) -> bool {
        self.self_replacement && matches!(g.topology(), Topology::Clique(_))
    }
}

/// Exponential fitness `e^{s π}` of a (nonpositive) payoff.
pub fn fitness(payoff: f64, s: f64) -> f64 {
    (s * payoff).exp()
}

/// Fermi adoption probability `1 / (1 + e^{-β (π' - π)})` for a learner with
/// payoff `own` looking at a role model with payoff `model`.
pub fn imitation_probability(own: f64, model: f64, beta: f64) -> f64 {
    1.0 / (1.0 + (-beta * (model - own)).exp())
}

/// Source of the random decisions taken inside a step.
pub trait Chooser {
    /// `true` with probability `p`.
    fn bernoulli(&mut self, p: f64) -> bool;
    /// Uniform index in `0..n`, `n > 0`.
    fn uniform(&mut self, n: usize) -> usize;
    /// Index drawn proportionally to `weights` (nonnegative, positive sum).
    fn weighted(&mut self, weights: &[f64]) -> usize;
}

pub struct RngChooser<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> Chooser for RngChooser<'_, R> {
    fn bernoulli(&mut self, p: f64) -> bool {
        self.0.random::<f64>() < p
    }

    fn uniform(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    fn weighted(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut target = self.0.random::<f64>() * total;
        for (i, &w) in weights.iter().enumerate() {
            if target < w {
                return i;
            }
            target -= w;
        }
        // Rounding left a sliver past the last bucket.
        weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// No strategy changed.
    Unchanged,
    /// The node at this index switched strategy.
    Changed(usize),
    /// The selected node has no neighbors; nothing happened.
    Isolated,
}

/// One update of `spec.kind`. `costs` must be the expected costs of `config`.
pub fn step<C: Chooser + ?Sized>(
    g: &Graph,
    config: &mut Configuration,
    costs: &NodeCosts,
    spec: &DynamicsSpec,
    chooser: &mut C,
) -> StepOutcome {
    match spec.kind {
        DynamicsKind::MoranDb => step_moran_db(g, config, costs, spec, chooser),
        DynamicsKind::MoranBd => step_moran_bd(g, config, costs, spec, chooser),
        DynamicsKind::Pairwise => step_pairwise(g, config, costs, spec, chooser),
    }
}

fn mutate<C: Chooser + ?Sized>(config: &mut Configuration, chooser: &mut C) -> StepOutcome {
    let node = chooser.uniform(config.len());
    let strategy = chooser.bernoulli(0.5);
    assign(config, node, strategy)
}

fn assign(config: &mut Configuration, node: usize, strategy: bool) -> StepOutcome {
    if config.is_inoculated(node) == strategy {
        StepOutcome::Unchanged
    } else {
        config.set(node, strategy);
        StepOutcome::Changed(node)
    }
}

fn candidates(g: &Graph, focal: usize, spec: &DynamicsSpec) -> Vec<usize> {
    let mut out = g.neighbors(focal).to_vec();
    if spec.includes_self(g) {
        out.push(focal);
    }
    out
}

/// Fitness weights of `nodes`, rescaled by the best payoff among them so the
/// largest weight is 1. The rescaling cancels in every selection probability.
pub fn selection_weights(nodes: &[usize], costs: &NodeCosts, s: f64) -> Vec<f64> {
    let cheapest = nodes.iter().map(|&v| costs.node(v)).fold(f64::INFINITY, f64::min);
    nodes.iter().map(|&v| fitness(cheapest - costs.node(v), s)).collect()
}

/// Death-birth: a uniformly chosen node dies and copies a neighbor picked
/// proportionally to fitness.
pub fn step_moran_db<C: Chooser + ?Sized>(
    g: &Graph,
    config: &mut Configuration,
    costs: &NodeCosts,
    spec: &DynamicsSpec,
    chooser: &mut C,
) -> StepOutcome {
    if chooser.bernoulli(spec.mutation_rate) {
        return mutate(config, chooser);
    }
    let dying = chooser.uniform(g.node_count());
    let pool = candidates(g, dying, spec);
    if pool.is_empty() {
        return StepOutcome::Isolated;
    }
    let weights = selection_weights(&pool, costs, spec.fitness_exponent);
    let parent = pool[chooser.weighted(&weights)];
    let strategy = config.is_inoculated(parent);
    assign(config, dying, strategy)
}

/// Birth-death: a node picked proportionally to fitness (population-wide)
/// overwrites a uniformly chosen neighbor.
pub fn step_moran_bd<C: Chooser + ?Sized>(
    g: &Graph,
    config: &mut Configuration,
    costs: &NodeCosts,
    spec: &DynamicsSpec,
    chooser: &mut C,
) -> StepOutcome {
    if chooser.bernoulli(spec.mutation_rate) {
        return mutate(config, chooser);
    }
    let everyone: Vec<usize> = (0..g.node_count()).collect();
    let weights = selection_weights(&everyone, costs, spec.fitness_exponent);
    let parent = chooser.weighted(&weights);
    let pool = candidates(g, parent, spec);
    if pool.is_empty() {
        return StepOutcome::Isolated;
    }
    let child = pool[chooser.uniform(pool.len())];
    let strategy = config.is_inoculated(parent);
    assign(config, child, strategy)
}

/// Pairwise comparison: a uniform learner looks at a uniform neighbor and
/// adopts its strategy with the Fermi probability of the payoff difference.
pub fn step_pairwise<C: Chooser + ?Sized>(
    g: &Graph,
    config: &mut Configuration,
    costs: &NodeCosts,
    spec: &DynamicsSpec,
    chooser: &mut C,
) -> StepOutcome {
    if chooser.bernoulli(spec.mutation_rate) {
        return mutate(config, chooser);
    }
    let learner = chooser.uniform(g.node_count());
    let pool = candidates(g, learner, spec);
    if pool.is_empty() {
        return StepOutcome::Isolated;
    }
    let model = pool[chooser.uniform(pool.len())];
    if config.is_inoculated(model) == config.is_inoculated(learner) {
        return StepOutcome::Unchanged;
    }
    // Payoffs are negated costs.
    let rho = imitation_probability(-costs.node(learner), -costs.node(model), spec.selection_strength);
    if chooser.bernoulli(rho) {
        let strategy = config.is_inoculated(model);
        assign(config, learner, strategy)
    } else {
        StepOutcome::Unchanged
    }
}
