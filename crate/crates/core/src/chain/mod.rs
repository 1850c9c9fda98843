//! Exact Markov chains over the compressed clique and star state spaces.

mod diagnostics;
mod stationary;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::{imitation_probability, DynamicsKind, DynamicsSpec};
use crate::error::{Error, Result};
use crate::payoffs::CostVector;
use crate::states::{StateKey, StateSpace};

pub use crate::states::{cycle_state_count, cycle_states};
pub use diagnostics::{star_diagnostics, StarRatioDiagnostics, StarRatioRow};
pub use stationary::{
    birth_death_stationary, stationary, stationary_with, SolveMethod, StationaryDistribution, DIRECT_SOLVE_LIMIT,
};

/// Row-stochastic matrix over an ordered list of states, stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    states: Vec<StateKey>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl TransitionMatrix {
    /// Builds a matrix from off-diagonal entries per row; each diagonal entry
    /// is the remaining mass.
    pub fn from_off_diagonal(states: Vec<StateKey>, off: Vec<Vec<(usize, f64)>>) -> Result<TransitionMatrix> {
        let mut rows = Vec::with_capacity(off.len());
        for (i, mut row) in off.into_iter().enumerate() {
            row.retain(|&(j, p)| j != i && p != 0.0);
            let leaving: f64 = row.iter().map(|e| e.1).sum();
            if row.iter().any(|e| !(e.1 >= 0.0)) || leaving > 1.0 + 1e-12 {
                return Err(Error::Numerical(format!("row {} of the transition matrix is not stochastic", states[i])));
            }
            row.push((i, (1.0 - leaving).max(0.0)));
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
        Ok(TransitionMatrix { states, rows })
    }

    pub fn states(&self) -> &[StateKey] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map_or(0.0, |k| self.rows[i][k].1)
    }

    pub fn position(&self, key: &StateKey) -> Option<usize> {
        self.states.iter().position(|s| s == key)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                m[(i, j)] = p;
            }
        }
        m
    }

    /// `x P` for a row vector `x`.
    pub fn left_multiply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                out[j] += x[i] * p;
            }
        }
        out
    }

    /// Largest deviation of a row sum from 1.
    pub fn max_row_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| (row.iter().map(|e| e.1).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Whether every state reaches every other through positive entries.
    pub fn is_irreducible(&self) -> bool {
        let n = self.len();
        let mut reverse = vec![Vec::new(); n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                if p > 0.0 && i != j {
                    reverse[j].push(i);
                }
            }
        }
        let forward: Vec<Vec<usize>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().filter(|e| e.1 > 0.0 && e.0 != i).map(|e| e.0).collect())
            .collect();
        reaches_all(&forward) && reaches_all(&reverse)
    }
}

fn reaches_all(adjacency: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One row of matrix entries as a serializable record.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixEntry {
    pub from: String,
    pub to: String,
    pub probability: f64,
}

impl TransitionMatrix {
    pub fn entries(&self) -> impl Iterator<Item = MatrixEntry> + '_ {
        self.rows.iter().enumerate().flat_map(move |(i, row)| {
            row.iter().map(move |&(j, p)| MatrixEntry {
                from: self.states[i].to_string(),
                to: self.states[j].to_string(),
                probability: p,
            })
        })
    }
}

fn logistic(x: f64) -> f64 {
    imitation_probability(0.0, x, 1.0)
}

fn check_size(topology: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::TooSmall { topology, what: "N", min, got: n });
    }
    Ok(())
}

/// Tridiagonal chain over `i = 0..=n` inoculated nodes.
pub fn clique_matrix(n: usize, ct: &CostVector, spec: &DynamicsSpec) -> Result<TransitionMatrix> {
    check_size("clique", n, 2)?;
    spec.validate()?;
    let nf = n as f64;
    let mu = spec.mutation_rate;
    let s = spec.fitness_exponent;
    let beta = spec.selection_strength;
    // Size of the candidate pool around a focal node, and how many of the
    // focal node's own type it contains besides the focal node itself.
    let (pool, self_in_pool) = if spec.self_replacement { (nf, 1.0) } else { (nf - 1.0, 0.0) };
    let states = StateSpace::Clique(n).states().expect("clique space is enumerable");
    let mut off = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let fi = i as f64;
        let fd = (n - i) as f64;
        let cost_c = ct.inoculation();
        let cost_d = fd * ct.infection() / nf;
        let cheapest = cost_c.min(cost_d);
        let f_c = (-s * (cost_c - cheapest)).exp();
        let f_d = (-s * (cost_d - cheapest)).exp();
        let (up, down) = match spec.kind {
            DynamicsKind::MoranDb => {
                let up = if i < n {
                    fd / nf * fi * f_c / (fi * f_c + (fd - 1.0 + self_in_pool) * f_d)
                } else {
                    0.0
                };
                let down = if i > 0 {
                    fi / nf * fd * f_d / ((fi - 1.0 + self_in_pool) * f_c + fd * f_d)
                } else {
                    0.0
                };
                (up, down)
            }
            DynamicsKind::MoranBd => {
                let total = fi * f_c + fd * f_d;
                (fi * f_c / total * fd / pool, fd * f_d / total * fi / pool)
            }
            DynamicsKind::Pairwise => (
                fd / nf * fi / pool * logistic(beta * (cost_d - cost_c)),
                fi / nf * fd / pool * logistic(beta * (cost_c - cost_d)),
            ),
        };
        let mut row = Vec::with_capacity(2);
        if i < n {
            row.push((i + 1, fd / nf * mu / 2.0 + (1.0 - mu) * nan_to_zero(up)));
        }
        if i > 0 {
            row.push((i - 1, fi / nf * mu / 2.0 + (1.0 - mu) * nan_to_zero(down)));
        }
        off.push(row);
    }
    TransitionMatrix::from_off_diagonal(states, off)
}

// 0 * f / 0 only arises on boundary terms whose prefactor is zero.
fn nan_to_zero(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x
    }
}

/// Chain over the `2n` star states `(hub, leaves)`, hub-insecure block first.
pub fn star_matrix(n: usize, ct: &CostVector, spec: &DynamicsSpec) -> Result<TransitionMatrix> {
    check_size("star", n, 3)?;
    spec.validate()?;
    let nf = n as f64;
    let leaves_total = nf - 1.0;
    let mu = spec.mutation_rate;
    let s = spec.fitness_exponent;
    let beta = spec.selection_strength;
    let (v, big_i) = (ct.inoculation(), ct.infection());
    let index = |hub: usize, l: usize| hub * n + l;
    let states = StateSpace::Star(n).states().expect("star space is enumerable");
    let mut off = vec![Vec::new(); 2 * n];
    for hub in 0..2 {
        for l in 0..n {
            let fl = l as f64;
            let insecure_leaves = (n - 1 - l) as f64;
            // Costs of the hub, an inoculated leaf and an insecure leaf.
            let (c_hub, c_c, c_d) = if hub == 0 {
                let big = (n - l) as f64 * big_i / nf;
                (big, v, big)
            } else {
                (v, v, big_i / nf)
            };
            let cheapest = c_hub.min(c_c).min(c_d);
            let f = |c: f64| (-s * (c - cheapest)).exp();
            let (f_hub, f_c, f_d) = (f(c_hub), f(c_c), f(c_d));

            // Selection terms: hub switch, leaf gain, leaf loss.
            let (switch, gain, loss) = match (spec.kind, hub) {
                (DynamicsKind::MoranDb, 0) => {
                    let pool = fl * f_c + insecure_leaves * f_d;
                    (fl * f_c / pool / nf, 0.0, fl / nf)
                }
                (DynamicsKind::MoranDb, _) => {
                    let pool = fl * f_c + insecure_leaves * f_d;
                    (insecure_leaves * f_d / pool / nf, insecure_leaves / nf, 0.0)
                }
                (DynamicsKind::MoranBd, 0) => {
                    let total = f_hub + fl * f_c + insecure_leaves * f_d;
                    (fl * f_c / total, 0.0, f_hub / total * fl / leaves_total)
                }
                (DynamicsKind::MoranBd, _) => {
                    let total = f_hub + fl * f_c + insecure_leaves * f_d;
                    (insecure_leaves * f_d / total, f_hub / total * insecure_leaves / leaves_total, 0.0)
                }
                (DynamicsKind::Pairwise, 0) => (
                    fl / nf / leaves_total * logistic(beta * (c_hub - c_c)),
                    0.0,
                    fl / nf * logistic(beta * (c_c - c_hub)),
                ),
                (DynamicsKind::Pairwise, _) => (
                    insecure_leaves / nf / leaves_total * logistic(beta * (c_hub - c_d)),
                    insecure_leaves / nf * logistic(beta * (c_d - c_hub)),
                    0.0,
                ),
            };
            let row = &mut off[index(hub, l)];
            row.push((index(1 - hub, l), mu / (2.0 * nf) + (1.0 - mu) * nan_to_zero(switch)));
            if l + 1 < n {
                row.push((index(hub, l + 1), mu / 2.0 * insecure_leaves / nf + (1.0 - mu) * gain));
            }
            if l > 0 {
                row.push((index(hub, l - 1), mu / 2.0 * fl / nf + (1.0 - mu) * loss));
            }
        }
    }
    TransitionMatrix::from_off_diagonal(states, off)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(i: f64, v: f64) -> CostVector {
        CostVector::new(i, v).unwrap()
    }

    fn spec(kind: DynamicsKind) -> DynamicsSpec {
        DynamicsSpec::new(kind)
    }

    #[test]
    fn clique_rows_are_stochastic_and_tridiagonal() {
        for kind in DynamicsKind::ALL {
            for self_replacement in [true, false] {
                let p = clique_matrix(30, &ct(2.0, 1.0), &spec(kind).with_self_replacement(self_replacement)).unwrap();
                assert_eq!(p.len(), 31);
                assert!(p.max_row_error() < 1e-12);
                for i in 0..31 {
                    assert!(p.row(i).iter().all(|&(j, x)| x >= 0.0 && j.abs_diff(i) <= 1));
                }
            }
        }
    }

    #[test]
    fn clique_zero_row_is_mutation_only() {
        for kind in DynamicsKind::ALL {
            let p = clique_matrix(30, &ct(2.0, 1.0), &spec(kind)).unwrap();
            assert!((p.get(0, 1) - 0.0005).abs() < 1e-15);
            assert!((p.get(30, 29) - 0.0005).abs() < 1e-15);
        }
    }

    #[test]
    fn clique_equal_fitness_balances_moran() {
        for kind in [DynamicsKind::MoranDb, DynamicsKind::MoranBd] {
            let p = clique_matrix(30, &ct(2.0, 1.0), &spec(kind).with_mutation(0.0)).unwrap();
            assert!((p.get(15, 16) / p.get(15, 14) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn star_rows_and_zero_pattern() {
        let n = 20;
        for kind in DynamicsKind::ALL {
            let p = star_matrix(n, &ct(2.0, 1.0), &spec(kind)).unwrap();
            assert_eq!(p.len(), 2 * n);
            assert!(p.max_row_error() < 1e-12);
            let q = star_matrix(n, &ct(2.0, 1.0), &spec(kind).with_mutation(0.0)).unwrap();
            for l in 1..n {
                assert_eq!(q.get(n + l, n + l - 1), 0.0);
                assert_eq!(q.get(l - 1, l), 0.0);
            }
            assert_eq!(q.get(0, 0), 1.0);
            assert!(!q.is_irreducible());
            assert!(p.is_irreducible());
        }
    }

    #[test]
    fn rejects_small_sizes() {
        assert!(clique_matrix(1, &ct(2.0, 1.0), &spec(DynamicsKind::Pairwise)).is_err());
        assert!(star_matrix(2, &ct(2.0, 1.0), &spec(DynamicsKind::Pairwise)).is_err());
    }

    #[test]
    fn dense_matches_sparse() {
        let p = star_matrix(5, &ct(3.0, 1.0), &spec(DynamicsKind::MoranBd)).unwrap();
        let d = p.to_dense();
        for i in 0..p.len() {
            for j in 0..p.len() {
                assert_eq!(d[(i, j)], p.get(i, j));
            }
        }
        assert_eq!(p.entries().count(), p.rows.iter().map(Vec::len).sum::<usize>());
    }
}
