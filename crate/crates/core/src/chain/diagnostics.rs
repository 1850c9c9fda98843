use serde::Serialize;

use super::star_matrix;
use crate::dynamics::DynamicsSpec;
use crate::error::Result;
use crate::payoffs::CostVector;
use crate::states::StateKey;

/// Selection-only transition ratios at distance `i` from `(0, n - t)`, i.e.
/// at leaf count `l = n - t - i`.
///
/// With `u = P[(0,l) -> (0,l-1)]`, `q = P[(1,l) -> (1,l+1)]`,
/// `r = P[(0,l) -> (1,l)]` and `s = P[(1,l) -> (0,l)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarRatioRow {
    pub distance: usize,
    pub leaves: usize,
    pub r_over_u: Option<f64>,
    pub s_over_q: Option<f64>,
    pub u_over_q: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarRatioDiagnostics {
    pub n: usize,
    /// `floor(V N / I)`.
    pub threshold: usize,
    pub rows: Vec<StarRatioRow>,
    /// Least distance with `r / u >= 1`.
    pub crit1: Option<usize>,
    /// Least distance with `u / q <= 1`.
    pub crit2: Option<usize>,
    /// The two hub-switching pairs around `crit2`.
    pub sink_pairs: Vec<[StateKey; 2]>,
}

fn ratio(a: f64, b: f64) -> Option<f64> {
    (b > 0.0).then(|| a / b)
}

/// Ratios read off the mutation-free star matrix of `spec.kind`.
pub fn star_diagnostics(n: usize, ct: &CostVector, spec: &DynamicsSpec) -> Result<StarRatioDiagnostics> {
    let p = star_matrix(n, ct, &spec.with_mutation(0.0))?;
    let threshold = ct.threshold(n).floor() as usize;
    let top = n.saturating_sub(threshold);
    let idx = |hub: usize, l: usize| hub * n + l;
    let mut rows = Vec::new();
    for i in 0..top {
        let l = top - i;
        if l >= n {
            continue;
        }
        let u = p.get(idx(0, l), idx(0, l - 1));
        let r = p.get(idx(0, l), idx(1, l));
        let s = p.get(idx(1, l), idx(0, l));
        let q = if l + 1 < n { p.get(idx(1, l), idx(1, l + 1)) } else { 0.0 };
        rows.push(StarRatioRow {
            distance: i,
            leaves: l,
            r_over_u: ratio(r, u),
            s_over_q: ratio(s, q),
            u_over_q: ratio(u, q),
        });
    }
    let crit1 = rows.iter().find(|r| r.r_over_u.is_some_and(|x| x >= 1.0)).map(|r| r.distance);
    let crit2 = rows.iter().find(|r| r.u_over_q.is_some_and(|x| x <= 1.0)).map(|r| r.distance);
    let sink_pairs = crit2
        .map(|c| {
            let l = top - c;
            let pair = |l: usize| [StateKey::Star { hub: false, leaves: l }, StateKey::Star { hub: true, leaves: l }];
            let mut pairs = vec![pair(l)];
            if l > 0 {
                pairs.push(pair(l - 1));
            }
            pairs
        })
        .unwrap_or_default();
    Ok(StarRatioDiagnostics { n, threshold, rows, crit1, crit2, sink_pairs })
}
