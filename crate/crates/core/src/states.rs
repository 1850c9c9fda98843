//! Compressed state encodings for the symmetric topologies.
//!
//! * clique: number of inoculated nodes `i`
//! * star: `(hub, leaves)` with `hub` the hub strategy and `leaves` the
//!   inoculated leaf count
//! * two-clique / two-star: `(a, b, c, d)` with `a`, `c` the hub strategies
//!   and `b`, `d` the inoculated non-hub counts on each side
//! * cycle: the number of inoculated nodes plus the multiset of insecure gap
//!   lengths between consecutive inoculated nodes
//! * custom graphs: the raw configuration

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::graph::{Configuration, Graph, Topology};

/// Raw configurations are only enumerated up to this many nodes.
pub const RAW_ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateKey {
    Clique { inoculated: usize },
    Star { hub: bool, leaves: usize },
    TwoBlock { hub_a: bool, side_a: usize, hub_b: bool, side_b: usize },
    Cycle(CycleState),
    Raw(Configuration),
}

impl serde::Serialize for StateKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateKey::Clique { inoculated } => write!(f, "{inoculated}"),
            StateKey::Star { hub, leaves } => write!(f, "({},{leaves})", *hub as u8),
            StateKey::TwoBlock { hub_a, side_a, hub_b, side_b } => {
                write!(f, "({},{side_a},{},{side_b})", *hub_a as u8, *hub_b as u8)
            }
            StateKey::Cycle(s) => s.fmt(f),
            StateKey::Raw(c) => c.fmt(f),
        }
    }
}

/// Cycle state: inoculated count and gap-size histogram.
///
/// `gap_counts[k - 1]` is the number of maximal insecure runs of length `k`.
/// The all-insecure ring is stored as a single run of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleState {
    inoculated: usize,
    gap_counts: Vec<usize>,
}

impl CycleState {
    pub fn new(inoculated: usize, gap_counts: Vec<usize>) -> CycleState {
        CycleState { inoculated, gap_counts }
    }

    /// Builds the state from a partition of the insecure nodes (any order).
    pub fn from_parts(n: usize, inoculated: usize, parts: &[usize]) -> CycleState {
        let mut gap_counts = vec![0; n];
        for &p in parts {
            gap_counts[p - 1] += 1;
        }
        CycleState { inoculated, gap_counts }
    }

    pub fn node_count(&self) -> usize {
        self.gap_counts.len()
    }

    pub fn inoculated(&self) -> usize {
        self.inoculated
    }

    pub fn gap_counts(&self) -> &[usize] {
        &self.gap_counts
    }

    /// Nonzero gap lengths, largest first.
    pub fn parts(&self) -> Vec<usize> {
        let mut parts = Vec::new();
        for (k, &count) in self.gap_counts.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(k + 1, count));
        }
        parts
    }

    /// The `[i, c1, ..., cN]` vector form.
    pub fn as_vector(&self) -> Vec<usize> {
        std::iter::once(self.inoculated).chain(self.gap_counts.iter().copied()).collect()
    }

    /// Canonical ring: each nonzero gap (largest first) follows an inoculated
    /// node, then the remaining inoculated nodes sit next to each other.
    pub fn representative(&self) -> Configuration {
        let n = self.node_count();
        if self.inoculated == 0 {
            return Configuration::all_insecure(n);
        }
        let mut bits = Vec::with_capacity(n);
        let parts = self.parts();
        for g in 0..self.inoculated {
            bits.push(true);
            let gap = parts.get(g).copied().unwrap_or(0);
            bits.extend(std::iter::repeat_n(false, gap));
        }
        Configuration::new(bits)
    }

    /// Encodes a ring configuration (node `v` adjacent to `v ± 1 mod n`).
    pub fn encode(config: &Configuration) -> CycleState {
        let n = config.len();
        let mut gap_counts = vec![0; n];
        let inoculated = config.inoculated_count();
        let Some(first) = (0..n).find(|&v| config.is_inoculated(v)) else {
            gap_counts[n - 1] = 1;
            return CycleState { inoculated: 0, gap_counts };
        };
        let mut run = 0;
        for step in 1..=n {
            if config.is_inoculated((first + step) % n) {
                if run > 0 {
                    gap_counts[run - 1] += 1;
                }
                run = 0;
            } else {
                run += 1;
            }
        }
        CycleState { inoculated, gap_counts }
    }
}

impl Ord for CycleState {
    /// By inoculated count, then partition length, then parts (largest first).
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.parts(), other.parts());
        self.inoculated
            .cmp(&other.inoculated)
            .then(a.len().cmp(&b.len()))
            .then_with(|| a.cmp(&b))
            .then_with(|| self.gap_counts.len().cmp(&other.gap_counts.len()))
    }
}

impl PartialOrd for CycleState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CycleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.as_vector().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", v.join(","))
    }
}

/// Partitions of `total` into at most `max_parts` parts, each listed largest
/// part first; ordered by length, then lexicographically.
pub fn partitions_at_most(total: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, max_parts, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Number of partitions of `x` into exactly `k` parts.
pub fn partitions_exact_count(x: usize, k: usize) -> u128 {
    // p(x, k) = p(x - 1, k - 1) + p(x - k, k)
    let mut table = vec![vec![0u128; k + 1]; x + 1];
    table[0][0] = 1;
    for xx in 1..=x {
        for kk in 1..=k.min(xx) {
            table[xx][kk] = table[xx - 1][kk - 1] + table[xx - kk][kk];
        }
    }
    table[x][k]
}

/// Closed-form count of cycle states: `2 + sum_{i=1}^{n-1} sum_{k=1}^{i} p_k(n - i)`.
pub fn cycle_state_count(n: usize) -> u128 {
    2 + (1..n)
        .map(|i| (1..=i).map(|k| partitions_exact_count(n - i, k)).sum::<u128>())
        .sum::<u128>()
}

/// All cycle states for a ring of `n` nodes, in canonical order.
pub fn cycle_states(n: usize) -> Vec<CycleState> {
    let mut states = vec![CycleState::encode(&Configuration::all_insecure(n))];
    for i in 1..n {
        states.extend(partitions_at_most(n - i, i).iter().map(|p| CycleState::from_parts(n, i, p)));
    }
    states.push(CycleState::from_parts(n, n, &[]));
    states
}

/// Compressed state space of a graph, chosen from its topology tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSpace {
    Clique(usize),
    Star(usize),
    TwoBlock(usize),
    Cycle(usize),
    Raw(usize),
}

impl StateSpace {
    pub fn for_graph(g: &Graph) -> StateSpace {
        match g.topology() {
            Topology::Clique(n) => StateSpace::Clique(n),
            Topology::Star(n) => StateSpace::Star(n),
            Topology::TwoClique(m) | Topology::TwoStar(m) => StateSpace::TwoBlock(m),
            Topology::Cycle(n) => StateSpace::Cycle(n),
            Topology::Custom => StateSpace::Raw(g.node_count()),
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            StateSpace::Clique(n) | StateSpace::Star(n) | StateSpace::Cycle(n) | StateSpace::Raw(n) => n,
            StateSpace::TwoBlock(m) => 2 * m,
        }
    }

    /// Number of states, if it fits in a `usize`.
    pub fn len(&self) -> Option<usize> {
        match *self {
            StateSpace::Clique(n) => Some(n + 1),
            StateSpace::Star(n) => Some(2 * n),
            StateSpace::TwoBlock(m) => Some(4 * m * m),
            StateSpace::Cycle(n) => usize::try_from(cycle_state_count(n)).ok(),
            StateSpace::Raw(n) => 1usize.checked_shl(n as u32),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn key(&self, c: &Configuration) -> StateKey {
        match *self {
            StateSpace::Clique(_) => StateKey::Clique { inoculated: c.inoculated_count() },
            StateSpace::Star(n) => StateKey::Star {
                hub: c.is_inoculated(0),
                leaves: (1..n).filter(|&v| c.is_inoculated(v)).count(),
            },
            StateSpace::TwoBlock(m) => StateKey::TwoBlock {
                hub_a: c.is_inoculated(0),
                side_a: (1..m).filter(|&v| c.is_inoculated(v)).count(),
                hub_b: c.is_inoculated(m),
                side_b: (m + 1..2 * m).filter(|&v| c.is_inoculated(v)).count(),
            },
            StateSpace::Cycle(_) => StateKey::Cycle(CycleState::encode(c)),
            StateSpace::Raw(_) => StateKey::Raw(c.clone()),
        }
    }

    /// A configuration that encodes to `key`.
    pub fn representative(&self, key: &StateKey) -> Configuration {
        let n = self.node_count();
        match (*self, key) {
            (StateSpace::Clique(_), StateKey::Clique { inoculated }) => {
                Configuration::new((0..n).map(|v| v < *inoculated).collect())
            }
            (StateSpace::Star(_), StateKey::Star { hub, leaves }) => {
                Configuration::new((0..n).map(|v| if v == 0 { *hub } else { v <= *leaves }).collect())
            }
            (StateSpace::TwoBlock(m), StateKey::TwoBlock { hub_a, side_a, hub_b, side_b }) => {
                Configuration::new(
                    (0..n)
                        .map(|v| match v {
                            0 => *hub_a,
                            v if v < m => v <= *side_a,
                            v if v == m => *hub_b,
                            v => v - m <= *side_b,
                        })
                        .collect(),
                )
            }
            (StateSpace::Cycle(_), StateKey::Cycle(s)) => s.representative(),
            (StateSpace::Raw(_), StateKey::Raw(c)) => c.clone(),
            (space, key) => panic!("state {key} does not belong to {space:?}"),
        }
    }

    /// Position of `key` in [`StateSpace::states`] order, for the spaces with
    /// closed-form indexing.
    pub fn index_of(&self, key: &StateKey) -> Option<usize> {
        match (*self, key) {
            (StateSpace::Clique(_), StateKey::Clique { inoculated }) => Some(*inoculated),
            (StateSpace::Star(n), StateKey::Star { hub, leaves }) => Some(*hub as usize * n + leaves),
            (StateSpace::TwoBlock(m), StateKey::TwoBlock { hub_a, side_a, hub_b, side_b }) => {
                Some(((*hub_a as usize * m + side_a) * 2 + *hub_b as usize) * m + side_b)
            }
            _ => None,
        }
    }

    /// Every state in canonical order. `None` for raw spaces above
    /// [`RAW_ENUMERATION_LIMIT`] nodes.
    pub fn states(&self) -> Option<Vec<StateKey>> {
        Some(match *self {
            StateSpace::Clique(n) => (0..=n).map(|i| StateKey::Clique { inoculated: i }).collect(),
            StateSpace::Star(n) => [false, true]
                .into_iter()
                .flat_map(|hub| (0..n).map(move |leaves| StateKey::Star { hub, leaves }))
                .collect(),
            StateSpace::TwoBlock(m) => {
                let mut out = Vec::with_capacity(4 * m * m);
                for hub_a in [false, true] {
                    for side_a in 0..m {
                        for hub_b in [false, true] {
                            for side_b in 0..m {
                                out.push(StateKey::TwoBlock { hub_a, side_a, hub_b, side_b });
                            }
                        }
                    }
                }
                out
            }
            StateSpace::Cycle(n) => cycle_states(n).into_iter().map(StateKey::Cycle).collect(),
            StateSpace::Raw(n) if n <= RAW_ENUMERATION_LIMIT => (0..1u64 << n)
                .map(|mask| StateKey::Raw(Configuration::from_mask(mask, n)))
                .collect(),
            StateSpace::Raw(_) => return None,
        })
    }
}

/// Lookup from state key to position in an explicit state list.
#[derive(Debug, Clone)]
pub struct StateIndex {
    keys: Vec<StateKey>,
    positions: HashMap<StateKey, usize>,
}

impl StateIndex {
    pub fn new(keys: Vec<StateKey>) -> StateIndex {
        let positions = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        StateIndex { keys, positions }
    }

    pub fn position(&self, key: &StateKey) -> Option<usize> {
        self.positions.get(key).copied()
    }

    pub fn keys(&self) -> &[StateKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn six_ring_state_count() {
        assert_eq!(cycle_states(6).len(), 12);
        assert_eq!(cycle_state_count(6), 12);
    }

    #[test]
    fn encodes_worked_example() {
        let c: Configuration = "010111".parse().unwrap();
        assert_eq!(CycleState::encode(&c).as_vector(), vec![4, 2, 0, 0, 0, 0, 0]);
        for rotated in ["101011", "110101", "111010"] {
            let c: Configuration = rotated.parse().unwrap();
            assert_eq!(CycleState::encode(&c).as_vector(), vec![4, 2, 0, 0, 0, 0, 0]);
        }
    }

    #[test]
    fn extremal_cycle_states() {
        let states = cycle_states(5);
        assert_eq!(states.first().unwrap().inoculated(), 0);
        assert_eq!(states.last().unwrap().as_vector(), vec![5, 0, 0, 0, 0, 0]);
        assert_eq!(states.first().unwrap().parts(), vec![5]);
    }

    #[test]
    fn cycle_order_is_sorted_and_unique() {
        for n in 3..=9 {
            let states = cycle_states(n);
            assert!(states.windows(2).all(|w| w[0] < w[1]), "n = {n}");
        }
    }

    #[test]
    fn decode_then_encode_is_identity() {
        for n in 3..=10 {
            for s in cycle_states(n) {
                assert_eq!(CycleState::encode(&s.representative()), s);
            }
        }
    }

    #[test]
    fn brute_force_counts_match() {
        for n in 3..=12 {
            let distinct: BTreeSet<_> = (0..1u64 << n)
                .map(|m| CycleState::encode(&Configuration::from_mask(m, n)))
                .collect();
            assert_eq!(distinct.len() as u128, cycle_state_count(n), "n = {n}");
            assert_eq!(distinct.len(), cycle_states(n).len(), "n = {n}");
        }
    }

    #[test]
    fn partition_counts() {
        // p(5) = 7 split by number of parts: 1, 2, 2, 1, 1
        let by_k: Vec<u128> = (1..=5).map(|k| partitions_exact_count(5, k)).collect();
        assert_eq!(by_k, vec![1, 2, 2, 1, 1]);
        assert_eq!(partitions_at_most(4, 2), vec![vec![4], vec![2, 2], vec![3, 1]]);
    }

    #[test]
    fn representatives_round_trip() {
        let spaces = [StateSpace::Clique(5), StateSpace::Star(5), StateSpace::TwoBlock(4), StateSpace::Cycle(6), StateSpace::Raw(4)];
        for space in spaces {
            let states = space.states().unwrap();
            assert_eq!(Some(states.len()), space.len());
            for (i, key) in states.iter().enumerate() {
                let c = space.representative(key);
                assert_eq!(c.len(), space.node_count());
                assert_eq!(&space.key(&c), key);
                if let Some(idx) = space.index_of(key) {
                    assert_eq!(idx, i);
                }
            }
        }
    }

    #[test]
    fn star_labels() {
        let k = StateKey::Star { hub: true, leaves: 0 };
        assert_eq!(k.to_string(), "(1,0)");
        let k = StateKey::TwoBlock { hub_a: true, side_a: 0, hub_b: true, side_b: 0 };
        assert_eq!(k.to_string(), "(1,0,1,0)");
    }
}
