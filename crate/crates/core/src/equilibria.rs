//! Pure Nash equilibria, social optimum and the static price of anarchy.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Components, Configuration, Graph, Topology};
use crate::payoffs::{sweep_costs, CostVector, Sweeper, NodeCosts};
use crate::states::{cycle_states, CycleState, StateKey, StateSpace};

/// Default node limit for exhaustive enumeration over `2^N` configurations.
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

/// Component-size characterization of pure equilibria:
/// (a) no attack component is larger than `t = V N / I`, and
/// (b) re-inserting any inoculated node yields a component of size at least `t`.
pub fn is_nash(g: &Graph, config: &Configuration, ct: &CostVector) -> Result<bool> {
    let components = g.attack_components(config)?;
    Ok(nash_from_components(g, config, ct, &components))
}

fn nash_from_components(g: &Graph, config: &Configuration, ct: &CostVector, components: &Components) -> bool {
    // Compare size * I against V * N so integer thresholds stay exact.
    let budget = ct.inoculation() * g.node_count() as f64;
    let weight = |size: usize| size as f64 * ct.infection();
    if components.sizes().iter().any(|&s| weight(s) > budget) {
        return false;
    }
    let mut touched = Vec::new();
    (0..g.node_count()).filter(|&j| config.is_inoculated(j)).all(|j| {
        touched.clear();
        touched.extend(g.neighbors(j).iter().filter_map(|&u| components.component_of(u)));
        touched.sort_unstable();
        touched.dedup();
        let merged = 1 + touched.iter().map(|&c| components.sizes()[c]).sum::<usize>();
        weight(merged) >= budget
    })
}

/// Best-response check: no single node can strictly lower its own expected
/// cost by switching strategy. Ties count as equilibrium.
pub fn is_nash_best_response(g: &Graph, config: &Configuration, ct: &CostVector) -> Result<bool> {
    let base = sweep_costs(g, config, ct)?;
    let eps = 1e-12 * ct.infection();
    let mut deviated = config.clone();
    for v in 0..g.node_count() {
        deviated.flip(v);
        let after = sweep_costs(g, &deviated, ct)?;
        deviated.flip(v);
        if after.node(v) < base.node(v) - eps {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    /// Nash states (compressed for named topologies), canonical order.
    pub nash: Vec<StateKey>,
    pub worst_nash: StateKey,
    pub worst_nash_cost: f64,
    pub optimum: StateKey,
    pub optimum_cost: f64,
    pub poa: f64,
    pub threshold: f64,
    /// False when only the worst equilibrium was located (large cycles).
    pub complete: bool,
}

/// Finds all pure Nash equilibria, the worst one, the optimum and the PoA.
///
/// Clique, star and two-block topologies are enumerated over their compressed
/// states. Cycles up to `limit` nodes and custom graphs are brute-forced over
/// all `2^N` configurations; larger cycles fall back to a dynamic program
/// that finds only the worst equilibrium.
pub fn enumerate_nash(g: &Graph, ct: &CostVector, limit: usize) -> Result<EquilibriumReport> {
    let space = StateSpace::for_graph(g);
    let n = g.node_count();
    let threshold = ct.threshold(n);
    match g.topology() {
        Topology::Clique(_) | Topology::Star(_) | Topology::TwoClique(_) | Topology::TwoStar(_) => {
            let states = space.states().expect("named spaces are enumerable");
            let evaluated: Vec<(StateKey, f64, bool)> = states
                .into_par_iter()
                .map(|key| {
                    let c = space.representative(&key);
                    let cost = sweep_costs(g, &c, ct).expect("representative fits").social;
                    let nash = is_nash(g, &c, ct).expect("representative fits");
                    (key, cost, nash)
                })
                .collect();
            let optimum = argmin(evaluated.iter().map(|(k, c, _)| (k.clone(), *c)));
            let nash: Vec<_> = evaluated.iter().filter(|e| e.2).map(|(k, c, _)| (k.clone(), *c)).collect();
            finish(nash, optimum, threshold, true)
        }
        Topology::Cycle(_) if n <= limit => {
            let nash = brute_force_nash(g, ct, &space)?;
            let optimum = argmin(cycle_states(n).into_iter().map(|s| {
                let cost = cycle_state_cost(&s, ct);
                (StateKey::Cycle(s), cost)
            }));
            finish(nash, optimum, threshold, true)
        }
        Topology::Cycle(_) => {
            let worst = worst_cycle_nash(n, ct).ok_or_else(|| {
                Error::Numerical(format!("no pure equilibrium found on a {n}-cycle"))
            })?;
            let cost = cycle_state_cost(&worst, ct);
            finish(vec![(StateKey::Cycle(worst), cost)], cycle_optimum(n, ct), threshold, false)
        }
        Topology::Custom => {
            if n > limit {
                return Err(Error::TooLarge { nodes: n, limit });
            }
            let nash = brute_force_nash(g, ct, &space)?;
            let costs: Vec<(StateKey, f64)> = (0..1u64 << n)
                .into_par_iter()
                .map(|mask| {
                    let c = Configuration::from_mask(mask, n);
                    let cost = sweep_costs(g, &c, ct).expect("sizes match").social;
                    (StateKey::Raw(c), cost)
                })
                .collect();
            finish(nash, argmin(costs.into_iter()), threshold, true)
        }
    }
}

fn finish(
    mut nash: Vec<(StateKey, f64)>,
    optimum: (StateKey, f64),
    threshold: f64,
    complete: bool,
) -> Result<EquilibriumReport> {
    nash.sort_by(|a, b| a.0.cmp(&b.0));
    let (worst_nash, worst_nash_cost) = nash
        .iter()
        .fold(None::<&(StateKey, f64)>, |best, cand| match best {
            Some(b) if b.1 >= cand.1 => Some(b),
            _ => Some(cand),
        })
        .cloned()
        .ok_or_else(|| Error::Numerical("no pure Nash equilibrium found".into()))?;
    let (optimum, optimum_cost) = optimum;
    Ok(EquilibriumReport {
        nash: nash.into_iter().map(|(k, _)| k).collect(),
        worst_nash,
        worst_nash_cost,
        optimum,
        optimum_cost,
        poa: worst_nash_cost / optimum_cost,
        threshold,
        complete,
    })
}

/// Lowest cost, ties broken by the earliest state.
fn argmin(items: impl Iterator<Item = (StateKey, f64)>) -> (StateKey, f64) {
    items
        .reduce(|best, cand| if cand.1 < best.1 || (cand.1 == best.1 && cand.0 < best.0) { cand } else { best })
        .expect("state space is never empty")
}

/// Nash states found by checking every configuration, with their costs.
fn brute_force_nash(g: &Graph, ct: &CostVector, space: &StateSpace) -> Result<Vec<(StateKey, f64)>> {
    let n = g.node_count();
    if n > 63 {
        return Err(Error::TooLarge { nodes: n, limit: 63 });
    }
    let found: BTreeSet<(StateKey, u64)> = (0..1u64 << n)
        .into_par_iter()
        .fold(
            || (BTreeSet::new(), Sweeper::default(), NodeCosts::default()),
            |(mut acc, mut sweeper, mut costs), mask| {
                let c = Configuration::from_mask(mask, n);
                sweeper.costs_into(g, &c, ct, &mut costs);
                if nash_from_components(g, &c, ct, sweeper.components()) {
                    acc.insert((space.key(&c), costs.social.to_bits()));
                }
                (acc, sweeper, costs)
            },
        )
        .map(|(acc, _, _)| acc)
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut out: Vec<(StateKey, f64)> = Vec::new();
    for (key, bits) in found {
        if out.last().map(|(k, _)| k) != Some(&key) {
            out.push((key, f64::from_bits(bits)));
        }
    }
    Ok(out)
}

/// Social cost of a cycle state: inoculated nodes pay `V`, a gap of length
/// `g` contributes `g * g * I / N`.
pub fn cycle_state_cost(state: &CycleState, ct: &CostVector) -> f64 {
    let n = state.node_count() as f64;
    let squares: usize = state.parts().iter().map(|g| g * g).sum();
    state.inoculated() as f64 * ct.inoculation() + squares as f64 * ct.infection() / n
}

/// Cheapest cycle state: for each inoculated count the insecure nodes are
/// split into gaps as evenly as possible.
fn cycle_optimum(n: usize, ct: &CostVector) -> (StateKey, f64) {
    argmin((0..=n).map(|i| {
        let state = if i == 0 {
            CycleState::from_parts(n, 0, &[n])
        } else {
            let (q, r) = ((n - i) / i, (n - i) % i);
            let parts: Vec<usize> = (0..i).map(|k| q + usize::from(k < r)).filter(|&p| p > 0).collect();
            CycleState::from_parts(n, i, &parts)
        };
        let cost = cycle_state_cost(&state, ct);
        (StateKey::Cycle(state), cost)
    }))
}

/// Most expensive Nash configuration on an `n`-cycle.
///
/// A ring with `i >= 2` inoculated nodes is a cyclic sequence of gaps
/// `g_0..g_{i-1}`. It is Nash iff every gap is at most `t` and every pair of
/// cyclically adjacent gaps satisfies `g_k + g_{k+1} + 1 >= t`. The program
/// runs over (first gap, previous gap, insecure nodes used) and maximizes the
/// sum of squared gaps for each inoculated count.
fn worst_cycle_nash(n: usize, ct: &CostVector) -> Option<CycleState> {
    let budget = ct.inoculation() * n as f64;
    let fits = |size: usize| size as f64 * ct.infection() <= budget;
    let reaches = |size: usize| size as f64 * ct.infection() >= budget;
    let max_gap = (0..=n).take_while(|&g| fits(g)).last().unwrap_or(0);

    let mut best: Option<(f64, CycleState)> = None;
    let mut consider = |state: CycleState| {
        let cost = cycle_state_cost(&state, ct);
        if best.as_ref().is_none_or(|(c, _)| cost > *c) {
            best = Some((cost, state));
        }
    };

    // One inoculated node: its re-insertion restores the whole ring.
    if fits(n - 1) && reaches(n) {
        consider(CycleState::from_parts(n, 1, &[n - 1]));
    }
    if reaches(1) {
        consider(CycleState::from_parts(n, n, &[]));
    }

    // score[len][prev][used]: best sum of squares over partial gap sequences
    // starting at `first`, with `len` gaps, last gap `prev`, `used` insecure
    // nodes. `back` stores the gap before `prev` for reconstruction.
    let width = max_gap + 1;
    for first in 0..width {
        let mut score = vec![vec![vec![None::<usize>; n + 1]; width]; n + 1];
        let mut back = vec![vec![vec![0usize; n + 1]; width]; n + 1];
        score[1][first][first] = Some(first * first);
        for len in 1..n {
            for prev in 0..width {
                for used in 0..=n {
                    let Some(s) = score[len][prev][used] else { continue };
                    if len >= 2 && used + len == n && reaches(prev + first + 1) {
                        let mut gaps = Vec::with_capacity(len);
                        let (mut l, mut p, mut u) = (len, prev, used);
                        while l >= 1 {
                            gaps.push(p);
                            let before = back[l][p][u];
                            u -= p;
                            p = before;
                            l -= 1;
                        }
                        let parts: Vec<usize> = gaps.into_iter().filter(|&g| g > 0).collect();
                        consider(CycleState::from_parts(n, len, &parts));
                    }
                    for gap in 0..width {
                        let total = used + gap;
                        if total + len + 1 > n || !reaches(prev + gap + 1) {
                            continue;
                        }
                        let cand = s + gap * gap;
                        if score[len + 1][gap][total].is_none_or(|old| cand > old) {
                            score[len + 1][gap][total] = Some(cand);
                            back[len + 1][gap][total] = prev;
                        }
                    }
                }
            }
        }
    }
    best.map(|(_, s)| s)
}
