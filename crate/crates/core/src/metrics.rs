//! Average social cost, evolutionary price of anarchy and distribution
//! comparisons.

use std::cmp::Ordering;

use serde::Serialize;

use crate::chain::{clique_matrix, star_matrix, stationary, StationaryDistribution, TransitionMatrix};
use crate::dynamics::{simulate_replicas, DynamicsSpec, SimulationOptions, SimulationResult};
use crate::equilibria::{enumerate_nash, EquilibriumReport, DEFAULT_BRUTE_FORCE_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{Graph, Topology};
use crate::payoffs::{clique_state_costs, star_state_costs, CostVector};
use crate::states::StateKey;

/// `Ŝ = x · R`.
pub fn average_social_cost(x: &[f64], costs: &[f64]) -> Result<f64> {
    if x.len() != costs.len() {
        return Err(Error::LengthMismatch { expected: costs.len(), got: x.len() });
    }
    Ok(x.iter().zip(costs).map(|(p, r)| p * r).sum())
}

/// `ePoA = Ŝ / Ω` with costs taken as positive.
pub fn epoa(s_hat: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("optimum cost must be positive, got {omega}")));
    }
    Ok(s_hat / omega)
}

/// States by decreasing probability, ties broken by state order.
pub fn abundance_ranking(dist: &StationaryDistribution) -> Vec<(StateKey, f64)> {
    let mut ranked: Vec<(StateKey, f64)> = dist.states.iter().cloned().zip(dist.x.iter().copied()).collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then_with(|| a.0.cmp(&b.0)));
    ranked
}

/// Total variation distance `½ Σ |a - b|`.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Exact,
    Simulated,
}

#[derive(Debug, Clone, Serialize)]
pub struct EPoAReport {
    pub source: Source,
    pub topology: Topology,
    pub nodes: usize,
    pub infection_cost: f64,
    pub inoculation_cost: f64,
    pub dynamics: DynamicsSpec,
    pub steps: Option<u64>,
    pub burn_in: Option<u64>,
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    #[serde(rename = "S_hat")]
    pub s_hat: f64,
    pub omega: f64,
    pub poa: f64,
    pub epoa: f64,
    pub epoa_over_poa: f64,
    pub worst_nash_cost: f64,
    pub optimum: StateKey,
    pub most_abundant: StateKey,
    pub residual: Option<f64>,
}

impl EPoAReport {
    fn new(
        source: Source,
        g: &Graph,
        ct: &CostVector,
        spec: &DynamicsSpec,
        eq: &EquilibriumReport,
        s_hat: f64,
        most_abundant: StateKey,
    ) -> Result<EPoAReport> {
        let omega = eq.optimum_cost;
        let value = epoa(s_hat, omega)?;
        Ok(EPoAReport {
            source,
            topology: g.topology(),
            nodes: g.node_count(),
            infection_cost: ct.infection(),
            inoculation_cost: ct.inoculation(),
            dynamics: *spec,
            steps: None,
            burn_in: None,
            seed: None,
            replicas: None,
            s_hat,
            omega,
            poa: eq.poa,
            epoa: value,
            epoa_over_poa: value / eq.poa,
            worst_nash_cost: eq.worst_nash_cost,
            optimum: eq.optimum.clone(),
            most_abundant,
            residual: None,
        })
    }
}

/// Exact chain of a clique or star topology.
pub fn exact_matrix(topology: Topology, ct: &CostVector, spec: &DynamicsSpec) -> Result<TransitionMatrix> {
    match topology {
        Topology::Clique(n) => clique_matrix(n, ct, spec),
        Topology::Star(n) => star_matrix(n, ct, spec),
        other => Err(Error::Unsupported(format!(
            "exact analysis supports clique and star only, not {}; use simulate instead",
            other.name()
        ))),
    }
}

/// Per-state social costs in the order of [`exact_matrix`] states.
pub fn exact_state_costs(topology: Topology, ct: &CostVector) -> Result<Vec<f64>> {
    match topology {
        Topology::Clique(n) => Ok(clique_state_costs(n, ct)),
        Topology::Star(n) => Ok(star_state_costs(n, ct)),
        other => Err(Error::Unsupported(format!("no closed-form state costs for {}", other.name()))),
    }
}

pub struct ExactAnalysis {
    pub matrix: TransitionMatrix,
    pub distribution: StationaryDistribution,
    pub equilibria: EquilibriumReport,
    pub report: EPoAReport,
}

/// Stationary distribution and ePoA of a clique or star chain.
pub fn analyze_exact(g: &Graph, ct: &CostVector, spec: &DynamicsSpec) -> Result<ExactAnalysis> {
    let matrix = exact_matrix(g.topology(), ct, spec)?;
    let distribution = stationary(&matrix)?;
    let costs = exact_state_costs(g.topology(), ct)?;
    let s_hat = average_social_cost(&distribution.x, &costs)?;
    let equilibria = enumerate_nash(g, ct, DEFAULT_BRUTE_FORCE_LIMIT)?;
    let mut report = EPoAReport::new(Source::Exact, g, ct, spec, &equilibria, s_hat, distribution.argmax().clone())?;
    report.residual = Some(distribution.residual);
    Ok(ExactAnalysis { matrix, distribution, equilibria, report })
}

pub struct SimulatedAnalysis {
    pub replicas: Vec<SimulationResult>,
    pub pooled: SimulationResult,
    pub equilibria: EquilibriumReport,
    pub report: EPoAReport,
}

/// Monte Carlo ePoA over `replicas` pooled runs.
pub fn analyze_simulated(
    g: &Graph,
    ct: &CostVector,
    spec: &DynamicsSpec,
    opts: &SimulationOptions,
    replicas: u64,
) -> Result<SimulatedAnalysis> {
    let equilibria = enumerate_nash(g, ct, DEFAULT_BRUTE_FORCE_LIMIT)?;
    let (runs, pooled) = simulate_replicas(g, ct, spec, opts, replicas)?;
    let top = pooled.most_visited().cloned().expect("at least one step was tallied");
    let mut report = EPoAReport::new(Source::Simulated, g, ct, spec, &equilibria, pooled.average_social_cost, top)?;
    report.steps = Some(opts.steps);
    report.burn_in = Some(opts.burn_in);
    report.seed = Some(opts.seed);
    report.replicas = Some(replicas);
    Ok(SimulatedAnalysis { replicas: runs, pooled, equilibria, report })
}

/// Empirical frequencies laid out over `states`; unlisted visits are ignored.
pub fn empirical_over(states: &[StateKey], result: &SimulationResult) -> Vec<f64> {
    states.iter().map(|k| result.frequency(k)).collect()
}
