use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::TransitionMatrix;
use crate::error::{Error, Result};
use crate::states::StateKey;

/// Chains up to this many states are solved directly.
pub const DIRECT_SOLVE_LIMIT: usize = 5000;

const POWER_TOLERANCE: f64 = 1e-13;
const POWER_MAX_ITERATIONS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    DirectSolve,
    PowerIteration,
    Empirical,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryDistribution {
    #[serde(skip)]
    pub states: Vec<StateKey>,
    pub x: Vec<f64>,
    /// `max |x P - x|`; zero for empirical distributions.
    pub residual: f64,
    pub method: SolveMethod,
}

impl StationaryDistribution {
    pub fn probability(&self, key: &StateKey) -> f64 {
        self.states.iter().position(|s| s == key).map_or(0.0, |i| self.x[i])
    }

    /// State of highest probability; ties go to the earliest state.
    pub fn argmax(&self) -> &StateKey {
        let mut best = 0;
        for (i, &p) in self.x.iter().enumerate() {
            if p > self.x[best] {
                best = i;
            }
        }
        &self.states[best]
    }

    pub fn max(&self) -> f64 {
        self.x.iter().copied().fold(0.0, f64::max)
    }

    /// Empirical distribution over `states` from visit counts.
    pub fn from_counts(states: Vec<StateKey>, counts: &[u64]) -> Result<StationaryDistribution> {
        if states.len() != counts.len() {
            return Err(Error::LengthMismatch { expected: states.len(), got: counts.len() });
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidParameter("no visits recorded".into()));
        }
        let x = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(StationaryDistribution { states, x, residual: 0.0, method: SolveMethod::Empirical })
    }
}

/// Unique stationary distribution, by direct solve up to
/// [`DIRECT_SOLVE_LIMIT`] states and power iteration beyond.
pub fn stationary(p: &TransitionMatrix) -> Result<StationaryDistribution> {
    let method = if p.len() <= DIRECT_SOLVE_LIMIT { SolveMethod::DirectSolve } else { SolveMethod::PowerIteration };
    stationary_with(p, method)
}

pub fn stationary_with(p: &TransitionMatrix, method: SolveMethod) -> Result<StationaryDistribution> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("empty transition matrix".into()));
    }
    if !p.is_irreducible() {
        return Err(Error::Reducible(
            "the chain is reducible (is the mutation rate zero?)".into(),
        ));
    }
    let raw = match method {
        SolveMethod::DirectSolve => direct(p)?,
        SolveMethod::PowerIteration => power(p)?,
        SolveMethod::Empirical => {
            return Err(Error::InvalidParameter("empirical distributions come from simulation".into()))
        }
    };
    let x = normalize(raw)?;
    let residual = residual(p, &x);
    Ok(StationaryDistribution { states: p.states().to_vec(), x, residual, method })
}

fn direct(p: &TransitionMatrix) -> Result<Vec<f64>> {
    let n = p.len();
    let mut a: DMatrix<f64> = p.to_dense().transpose() - DMatrix::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    a.lu()
        .solve(&b)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::Numerical("singular system".into()))
}

fn power(p: &TransitionMatrix) -> Result<Vec<f64>> {
    let n = p.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..POWER_MAX_ITERATIONS {
        let next = p.left_multiply(&x);
        let change = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        if change < POWER_TOLERANCE {
            return Ok(x);
        }
    }
    Err(Error::Numerical(format!("power iteration did not converge in {POWER_MAX_ITERATIONS} iterations")))
}

fn normalize(mut x: Vec<f64>) -> Result<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite entries in the solution".into()));
    }
    if x.iter().any(|&v| v < -1e-9) {
        return Err(Error::Numerical("solution has significantly negative entries".into()));
    }
    for v in &mut x {
        *v = v.max(0.0);
    }
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return Err(Error::Numerical("solution sums to zero".into()));
    }
    for v in &mut x {
        *v /= total;
    }
    Ok(x)
}

fn residual(p: &TransitionMatrix, x: &[f64]) -> f64 {
    p.left_multiply(x).iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Stationary distribution of a birth-death chain from the product formula
/// `x[i+1] / x[i] = P[i][i+1] / P[i+1][i]`, computed in log space.
pub fn birth_death_stationary(p: &TransitionMatrix) -> Result<StationaryDistribution> {
    let n = p.len();
    for i in 0..n {
        if p.row(i).iter().any(|&(j, v)| v > 0.0 && j.abs_diff(i) > 1) {
            return Err(Error::Unsupported("matrix is not tridiagonal".into()));
        }
    }
    let mut log_x = vec![0.0; n];
    for i in 0..n - 1 {
        let (up, down) = (p.get(i, i + 1), p.get(i + 1, i));
        if up <= 0.0 || down <= 0.0 {
            return Err(Error::Reducible(format!("no two-way transition between states {i} and {}", i + 1)));
        }
        log_x[i + 1] = log_x[i] + up.ln() - down.ln();
    }
    let top = log_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x = normalize(log_x.iter().map(|l| (l - top).exp()).collect())?;
    let residual = residual(p, &x);
    Ok(StationaryDistribution { states: p.states().to_vec(), x, residual, method: SolveMethod::DirectSolve })
}
