use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{step, DynamicsSpec, RngChooser, StepOutcome};
use crate::error::{Error, Result};
use crate::graph::{Configuration, Graph};
use crate::payoffs::{CostVector, NodeCosts, Sweeper};
use crate::states::{StateKey, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    AllInsecure,
    AllInoculated,
    /// Each node inoculated independently with probability 1/2.
    #[default]
    Uniform,
    Given(Configuration),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions {
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub initial: InitialState,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions { steps: 500_000, burn_in: 0, seed: 0, initial: InitialState::Uniform }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub count: u64,
    pub social_cost: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    /// Post-burn-in visit counts per state, tallied after every step.
    pub visits: BTreeMap<StateKey, Visit>,
    /// Time-averaged social cost over the counted steps.
    pub average_social_cost: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    /// Steps whose selected node had no neighbors.
    pub isolated_steps: u64,
}

impl SimulationResult {
    pub fn frequency(&self, key: &StateKey) -> f64 {
        self.visits.get(key).map_or(0.0, |v| v.count as f64 / self.steps as f64)
    }

    /// Visit-weighted mean of the per-state social costs.
    pub fn visit_weighted_cost(&self) -> f64 {
        let total: f64 = self.visits.values().map(|v| v.count as f64 * v.social_cost).sum();
        total / self.steps as f64
    }

    /// State with the most visits; ties go to the first in key order.
    pub fn most_visited(&self) -> Option<&StateKey> {
        self.visits
            .iter()
            .rev()
            .max_by_key(|(_, v)| v.count)
            .map(|(k, _)| k)
    }
}

/// RNG of replica `index`: stream `index` of the ChaCha8 generator seeded
/// with `seed`. Replica 0 is the plain seeded generator.
pub fn replica_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn initial_configuration<R: Rng>(n: usize, initial: &InitialState, rng: &mut R) -> Configuration {
    match initial {
        InitialState::AllInsecure => Configuration::all_insecure(n),
        InitialState::AllInoculated => Configuration::all_inoculated(n),
        InitialState::Uniform => Configuration::new((0..n).map(|_| rng.random::<bool>()).collect()),
        InitialState::Given(c) => c.clone(),
    }
}

/// Runs the chain for `burn_in + steps` steps and tallies the last `steps`.
pub fn simulate(g: &Graph, ct: &CostVector, spec: &DynamicsSpec, opts: &SimulationOptions) -> Result<SimulationResult> {
    run(g, ct, spec, opts, 0)
}

/// Runs `replicas` independent chains in parallel on separate RNG streams
/// and pools them. Returns the per-replica results and the pooled one.
pub fn simulate_replicas(
    g: &Graph,
    ct: &CostVector,
    spec: &DynamicsSpec,
    opts: &SimulationOptions,
    replicas: u64,
) -> Result<(Vec<SimulationResult>, SimulationResult)> {
    if replicas == 0 {
        return Err(Error::InvalidParameter("replicas must be at least 1".into()));
    }
    let runs: Vec<SimulationResult> = (0..replicas)
        .into_par_iter()
        .map(|r| run(g, ct, spec, opts, r))
        .collect::<Result<_>>()?;
    let mut pooled = SimulationResult {
        visits: BTreeMap::new(),
        average_social_cost: 0.0,
        steps: 0,
        burn_in: opts.burn_in,
        seed: opts.seed,
        isolated_steps: 0,
    };
    let mut weighted = 0.0;
    for r in &runs {
        for (key, visit) in &r.visits {
            pooled
                .visits
                .entry(key.clone())
                .and_modify(|v| v.count += visit.count)
                .or_insert(*visit);
        }
        pooled.steps += r.steps;
        pooled.isolated_steps += r.isolated_steps;
        weighted += r.average_social_cost * r.steps as f64;
    }
    pooled.average_social_cost = weighted / pooled.steps as f64;
    Ok((runs, pooled))
}

fn run(g: &Graph, ct: &CostVector, spec: &DynamicsSpec, opts: &SimulationOptions, stream: u64) -> Result<SimulationResult> {
    spec.validate()?;
    if opts.steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let n = g.node_count();
    let space = StateSpace::for_graph(g);
    let mut rng = replica_rng(opts.seed, stream);
    let mut config = initial_configuration(n, &opts.initial, &mut rng);
    g.check(&config)?;

    let mut sweeper = Sweeper::default();
    let mut costs = NodeCosts::default();
    sweeper.costs_into(g, &config, ct, &mut costs);
    let mut key = space.key(&config);

    let mut visits: BTreeMap<StateKey, Visit> = BTreeMap::new();
    let mut social_sum = 0.0;
    let mut run_length = 0u64;
    let mut isolated_steps = 0u64;
    let mut flush = |key: &StateKey, cost: f64, length: u64, sum: &mut f64| {
        if length > 0 {
            visits
                .entry(key.clone())
                .or_insert(Visit { count: 0, social_cost: cost })
                .count += length;
            *sum += length as f64 * cost;
        }
    };

    for t in 0..opts.burn_in + opts.steps {
        let outcome = step(g, &mut config, &costs, spec, &mut RngChooser(&mut rng));
        match outcome {
            StepOutcome::Changed(_) => {
                flush(&key, costs.social, run_length, &mut social_sum);
                run_length = 0;
                sweeper.costs_into(g, &config, ct, &mut costs);
                key = space.key(&config);
            }
            StepOutcome::Isolated => isolated_steps += u64::from(t >= opts.burn_in),
            StepOutcome::Unchanged => {}
        }
        if t >= opts.burn_in {
            run_length += 1;
        }
    }
    flush(&key, costs.social, run_length, &mut social_sum);

    Ok(SimulationResult {
        visits,
        average_social_cost: social_sum / opts.steps as f64,
        steps: opts.steps,
        burn_in: opts.burn_in,
        seed: opts.seed,
        isolated_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DynamicsKind;

    fn ct() -> CostVector {
        CostVector::new(2.0, 1.0).unwrap()
    }

    fn opts(steps: u64, seed: u64) -> SimulationOptions {
        SimulationOptions { steps, burn_in: 100, seed, initial: InitialState::Uniform }
    }

    #[test]
    fn counts_add_up_and_average_matches() {
        let g = Graph::star(8).unwrap();
        for kind in DynamicsKind::ALL {
            let spec = DynamicsSpec::new(kind).with_mutation(0.05);
            let r = simulate(&g, &ct(), &spec, &opts(20_000, 4)).unwrap();
            assert_eq!(r.visits.values().map(|v| v.count).sum::<u64>(), 20_000);
            assert!((r.average_social_cost - r.visit_weighted_cost()).abs() < 1e-9);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let g = Graph::cycle(7).unwrap();
        let spec = DynamicsSpec::new(DynamicsKind::MoranBd).with_mutation(0.02);
        let a = simulate(&g, &ct(), &spec, &opts(5_000, 11)).unwrap();
        let b = simulate(&g, &ct(), &spec, &opts(5_000, 11)).unwrap();
        assert_eq!(a.visits, b.visits);
        assert_eq!(a.average_social_cost, b.average_social_cost);
        let c = simulate(&g, &ct(), &spec, &opts(5_000, 12)).unwrap();
        assert_ne!(a.visits, c.visits);
    }

    #[test]
    fn replica_zero_is_the_plain_run() {
        let g = Graph::clique(6).unwrap();
        let spec = DynamicsSpec::new(DynamicsKind::Pairwise).with_mutation(0.01);
        let single = simulate(&g, &ct(), &spec, &opts(3_000, 2)).unwrap();
        let (runs, pooled) = simulate_replicas(&g, &ct(), &spec, &opts(3_000, 2), 3).unwrap();
        assert_eq!(runs[0].visits, single.visits);
        assert_eq!(pooled.steps, 9_000);
        assert!((pooled.average_social_cost - pooled.visit_weighted_cost()).abs() < 1e-9);
    }

    #[test]
    fn rejects_zero_steps() {
        let g = Graph::clique(4).unwrap();
        let spec = DynamicsSpec::new(DynamicsKind::Pairwise);
        assert!(simulate(&g, &ct(), &spec, &opts(0, 1)).is_err());
    }

    #[test]
    fn isolated_steps_are_counted() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let spec = DynamicsSpec::new(DynamicsKind::MoranDb).with_mutation(0.0);
        let r = simulate(&g, &ct(), &spec, &opts(4_000, 3)).unwrap();
        assert!(r.isolated_steps > 800 && r.isolated_steps < 1_200);
    }
}
