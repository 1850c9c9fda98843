//! Realized and expected costs of the inoculation game.
//!
//! Costs are nonnegative throughout the crate. The payoff seen by the
//! evolutionary dynamics is the negated cost; that conversion happens only in
//! [`crate::dynamics`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Components, Configuration, Graph};

/// Realized cost vector `[I, V, L = 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostVector {
    infection: f64,
    inoculation: f64,
}

impl CostVector {
    pub fn new(infection: f64, inoculation: f64) -> Result<CostVector> {
        let valid = infection.is_finite() && inoculation.is_finite() && inoculation > 0.0;
        if !valid || infection <= inoculation {
            return Err(Error::InvalidCosts { infection, inoculation });
        }
        Ok(CostVector { infection, inoculation })
    }

    /// Cost `I` paid by an infected node.
    pub fn infection(&self) -> f64 {
        self.infection
    }

    /// Cost `V` paid by an inoculated node.
    pub fn inoculation(&self) -> f64 {
        self.inoculation
    }

    /// Cost of an insecure node the virus never reaches. Always zero.
    pub fn loss(&self) -> f64 {
        0.0
    }

    /// Nash threshold `t = V N / I` on the largest tolerable attack component.
    pub fn threshold(&self, n: usize) -> f64 {
        self.inoculation * n as f64 / self.infection
    }
}

/// Expected cost per node for one configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeCosts {
    pub expected: Vec<f64>,
    pub social: f64,
}

impl NodeCosts {
    pub fn node(&self, v: usize) -> f64 {
        self.expected[v]
    }
}

/// Deterministic sweep: the virus starts once at every node.
///
/// An inoculated node pays `V`. An insecure node is infected exactly by the
/// starts inside its own attack component, so it pays `I * |component| / N`.
pub fn sweep_costs(g: &Graph, config: &Configuration, ct: &CostVector) -> Result<NodeCosts> {
    g.check(config)?;
    let mut sweeper = Sweeper::default();
    let mut out = NodeCosts::default();
    sweeper.costs_into(g, config, ct, &mut out);
    Ok(out)
}

/// Monte Carlo variant of [`sweep_costs`]: `trials` viruses start at
/// uniformly random nodes.
pub fn randomized_sweep_costs<R: Rng + ?Sized>(
    g: &Graph,
    config: &Configuration,
    ct: &CostVector,
    trials: usize,
    rng: &mut R,
) -> Result<NodeCosts> {
    g.check(config)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = g.node_count();
    let components = g.attack_components(config)?;
    let mut hits = vec![0u64; components.count()];
    for _ in 0..trials {
        let start = rng.random_range(0..n);
        if let Some(c) = components.component_of(start) {
            hits[c] += 1;
        }
    }
    let expected: Vec<f64> = (0..n)
        .map(|v| match components.component_of(v) {
            None => ct.inoculation(),
            Some(c) => ct.infection() * hits[c] as f64 / trials as f64,
        })
        .collect();
    let social = expected.iter().sum();
    Ok(NodeCosts { expected, social })
}

/// Reusable buffers for repeated sweeps over one graph.
#[derive(Debug, Default, Clone)]
pub struct Sweeper {
    components: Components,
}

impl Sweeper {
    /// Caller guarantees `config` matches `g`.
    pub fn costs_into(&mut self, g: &Graph, config: &Configuration, ct: &CostVector, out: &mut NodeCosts) {
        let n = g.node_count();
        self.components.fill(g, config);
        out.expected.clear();
        out.expected.extend((0..n).map(|v| {
            if config.is_inoculated(v) {
                ct.inoculation()
            } else {
                ct.infection() * self.components.size_of(v) as f64 / n as f64
            }
        }));
        out.social = out.expected.iter().sum();
    }

    pub fn components(&self) -> &Components {
        &self.components
    }
}

/// Social cost of the clique state with `i` inoculated nodes, `i = 0..=n`:
/// `R_i = i V + (n - i)^2 I / n`.
pub fn clique_state_costs(n: usize, ct: &CostVector) -> Vec<f64> {
    let nf = n as f64;
    (0..=n)
        .map(|i| {
            let insecure = (n - i) as f64;
            i as f64 * ct.inoculation() + insecure * insecure * ct.infection() / nf
        })
        .collect()
}

/// Social cost of every star state `(hub, leaves)`, hub-insecure block first
/// (`index = hub * n + leaves`).
pub fn star_state_costs(n: usize, ct: &CostVector) -> Vec<f64> {
    let nf = n as f64;
    let (v, i) = (ct.inoculation(), ct.infection());
    let insecure_hub = (0..n).map(|l| {
        let big = (n - l) as f64;
        l as f64 * v + big * big * i / nf
    });
    let inoculated_hub = (0..n).map(|l| (l + 1) as f64 * v + (n - l - 1) as f64 * i / nf);
    insecure_hub.chain(inoculated_hub).collect()
}
