//! Exact one-step outcome distributions by exhaustive enumeration of every
//! random decision a step can take.

use std::collections::HashMap;

use super::{step, Chooser, DynamicsSpec};
use crate::error::Result;
use crate::graph::{Configuration, Graph};
use crate::payoffs::{sweep_costs, CostVector};

/// Replays a fixed prefix of choices and then takes the first branch of every
/// later decision, recording the probability of the path taken.
struct Scripted<'a> {
    script: &'a [usize],
    trail: Vec<(usize, usize)>,
    probability: f64,
}

impl Scripted<'_> {
    fn pick(&mut self, branches: usize) -> usize {
        let k = self.script.get(self.trail.len()).copied().unwrap_or(0);
        self.trail.push((k, branches));
        k
    }
}

impl Chooser for Scripted<'_> {
    fn bernoulli(&mut self, p: f64) -> bool {
        let heads = self.pick(2) == 0;
        self.probability *= if heads { p } else { 1.0 - p };
        heads
    }

    fn uniform(&mut self, n: usize) -> usize {
        let k = self.pick(n);
        self.probability /= n as f64;
        k
    }

    fn weighted(&mut self, weights: &[f64]) -> usize {
        let k = self.pick(weights.len());
        self.probability *= weights[k] / weights.iter().sum::<f64>();
        k
    }
}

/// Every configuration reachable from `config` in one step, with its exact
/// probability. Outcomes are sorted by configuration; probabilities sum to 1.
pub fn step_distribution(
    g: &Graph,
    config: &Configuration,
    ct: &CostVector,
    spec: &DynamicsSpec,
) -> Result<Vec<(Configuration, f64)>> {
    spec.validate()?;
    let costs = sweep_costs(g, config, ct)?;
    let mut outcomes: HashMap<Configuration, f64> = HashMap::new();
    let mut script: Vec<usize> = Vec::new();
    loop {
        let mut chooser = Scripted { script: &script, trail: Vec::new(), probability: 1.0 };
        let mut next = config.clone();
        step(g, &mut next, &costs, spec, &mut chooser);
        if chooser.probability > 0.0 {
            *outcomes.entry(next).or_insert(0.0) += chooser.probability;
        }
        let mut trail = chooser.trail;
        let advanced = loop {
            match trail.pop() {
                Some((k, branches)) if k + 1 < branches => {
                    script = trail.iter().map(|t| t.0).collect();
                    script.push(k + 1);
                    break true;
                }
                Some(_) => continue,
                None => break false,
            }
        };
        if !advanced {
            break;
        }
    }
    let mut out: Vec<_> = outcomes.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{imitation_probability, DynamicsKind};

    fn ct() -> CostVector {
        CostVector::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn probabilities_sum_to_one() {
        let graphs = [Graph::clique(5).unwrap(), Graph::star(5).unwrap(), Graph::cycle(5).unwrap()];
        for g in &graphs {
            for kind in DynamicsKind::ALL {
                for self_replacement in [true, false] {
                    let spec = DynamicsSpec::new(kind).with_mutation(0.1).with_self_replacement(self_replacement);
                    for mask in [0u64, 0b00101, 0b11011, 0b11111] {
                        let c = Configuration::from_mask(mask, 5);
                        let dist = step_distribution(g, &c, &ct(), &spec).unwrap();
                        let total: f64 = dist.iter().map(|d| d.1).sum();
                        assert!((total - 1.0).abs() < 1e-12, "{g:?} {kind} {c}: {total}");
                        for (next, _) in &dist {
                            let diff = (0..5).filter(|&v| next.is_inoculated(v) != c.is_inoculated(v)).count();
                            assert!(diff <= 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_only_from_uniform_state() {
        let g = Graph::cycle(4).unwrap();
        let spec = DynamicsSpec::new(DynamicsKind::Pairwise).with_mutation(0.2);
        let dist = step_distribution(&g, &Configuration::all_insecure(4), &ct(), &spec).unwrap();
        assert_eq!(dist.len(), 5);
        for (c, p) in &dist {
            let expected = if c.inoculated_count() == 0 { 0.9 } else { 0.025 };
            assert!((p - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn pairwise_two_nodes() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let spec = DynamicsSpec::new(DynamicsKind::Pairwise).with_mutation(0.0);
        let c: Configuration = "10".parse().unwrap();
        // Node 0 pays V = 1, node 1 pays I * 1 / 2 = 1: a coin flip either way.
        let dist = step_distribution(&g, &c, &ct(), &spec).unwrap();
        let rho = imitation_probability(-1.0, -1.0, 1.0);
        let get = |s: &str| dist.iter().find(|d| d.0.to_string() == s).map_or(0.0, |d| d.1);
        assert!((get("00") - 0.5 * rho).abs() < 1e-15);
        assert!((get("11") - 0.5 * rho).abs() < 1e-15);
        assert!((get("10") - (1.0 - rho)).abs() < 1e-15);
    }
}
