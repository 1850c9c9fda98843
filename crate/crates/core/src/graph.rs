//! Network topologies and attack-graph components.
//!
//! Named topologies put their hubs at the lowest node ids (star hub at 0,
//! two-block hubs at 0 and `m`) so that compressed state encodings are pure
//! functions of counts.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Topology tag with its construction parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "kebab-case")]
pub enum Topology {
    /// Complete graph on `n` nodes.
    Clique(usize),
    /// Hub 0 joined to leaves `1..n`.
    Star(usize),
    /// Two cliques of `m` nodes each, hubs 0 and `m` joined by an edge.
    TwoClique(usize),
    /// Two stars of `m` nodes each, hubs 0 and `m` joined by an edge.
    TwoStar(usize),
    /// Ring on `n` nodes.
    Cycle(usize),
    Custom,
}

impl Topology {
    pub fn name(&self) -> &'static str {
        match self {
            Topology::Clique(_) => "clique",
            Topology::Star(_) => "star",
            Topology::TwoClique(_) => "two-clique",
            Topology::TwoStar(_) => "two-star",
            Topology::Cycle(_) => "cycle",
            Topology::Custom => "custom",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Clique(n) | Topology::Star(n) | Topology::Cycle(n) => {
                write!(f, "{}({n})", self.name())
            }
            Topology::TwoClique(m) | Topology::TwoStar(m) => write!(f, "{}({m}+{m})", self.name()),
            Topology::Custom => f.write_str("custom"),
        }
    }
}

/// Undirected simple graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    topology: Topology,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a named topology. `Custom` has no parameters; use [`Graph::from_edges`].
    pub fn build(topology: Topology) -> Result<Graph> {
        match topology {
            Topology::Clique(n) => Graph::clique(n),
            Topology::Star(n) => Graph::star(n),
            Topology::TwoClique(m) => Graph::two_clique(m),
            Topology::TwoStar(m) => Graph::two_star(m),
            Topology::Cycle(n) => Graph::cycle(n),
            Topology::Custom => Err(Error::InvalidParameter(
                "custom graphs are built from an edge list".into(),
            )),
        }
    }

    pub fn clique(n: usize) -> Result<Graph> {
        check_min("clique", "nodes", 2, n)?;
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        push_clique(&mut edges, 0, n);
        Ok(Graph::assemble(Topology::Clique(n), n, &edges))
    }

    pub fn star(n: usize) -> Result<Graph> {
        check_min("star", "nodes", 2, n)?;
        let edges: Vec<_> = (1..n).map(|leaf| (0, leaf)).collect();
        Ok(Graph::assemble(Topology::Star(n), n, &edges))
    }

    pub fn two_clique(m: usize) -> Result<Graph> {
        check_min("two-clique", "nodes per side", 3, m)?;
        let mut edges = Vec::new();
        push_clique(&mut edges, 0, m);
        push_clique(&mut edges, m, m);
        edges.push((0, m));
        Ok(Graph::assemble(Topology::TwoClique(m), 2 * m, &edges))
    }

    pub fn two_star(m: usize) -> Result<Graph> {
        check_min("two-star", "nodes per side", 3, m)?;
        let mut edges: Vec<_> = (1..m).map(|leaf| (0, leaf)).collect();
        edges.extend((m + 1..2 * m).map(|leaf| (m, leaf)));
        edges.push((0, m));
        Ok(Graph::assemble(Topology::TwoStar(m), 2 * m, &edges))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        // n = 2 would need a doubled edge.
        check_min("cycle", "nodes", 3, n)?;
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Ok(Graph::assemble(Topology::Cycle(n), n, &edges))
    }

    /// Custom graph from 0-based edges. Rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EdgeList("graph needs at least one node".into()));
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EdgeList(format!("edge {u} {v} out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::EdgeList(format!("self-loop at node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::EdgeList(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(Graph::assemble(Topology::Custom, n, edges))
    }

    /// Parses the edge-list text format: first line `N`, then one `u v` pair
    /// per line. Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::EdgeList("missing node count".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::EdgeList(format!("bad node count {header:?}")))?;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse().ok()).ok_or_else(|| {
                    Error::EdgeList(format!("line {}: expected `u v`, got {line:?}", lineno + 1))
                })
            };
            let u = parse(parts.next())?;
            let v = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::EdgeList(format!("line {}: trailing tokens", lineno + 1)));
            }
            edges.push((u, v));
        }
        Graph::from_edges(n, &edges)
    }

    fn assemble(topology: Topology, n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { topology, adjacency, edge_count: edges.len() }
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Connected components of the attack graph (insecure nodes only).
    pub fn attack_components(&self, config: &Configuration) -> Result<Components> {
        self.check(config)?;
        let mut components = Components::default();
        components.fill(self, config);
        Ok(components)
    }

    pub(crate) fn check(&self, config: &Configuration) -> Result<()> {
        if config.len() != self.node_count() {
            return Err(Error::LengthMismatch { expected: self.node_count(), got: config.len() });
        }
        Ok(())
    }
}

fn check_min(topology: &'static str, what: &'static str, min: usize, got: usize) -> Result<()> {
    if got < min {
        return Err(Error::TooSmall { topology, what, min, got });
    }
    Ok(())
}

fn push_clique(edges: &mut Vec<(usize, usize)>, offset: usize, n: usize) {
    for u in 0..n {
        for v in u + 1..n {
            edges.push((offset + u, offset + v));
        }
    }
}

/// Pure-strategy profile: `true` means the node is inoculated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Configuration(Vec<bool>);

impl Configuration {
    pub fn new(bits: Vec<bool>) -> Configuration {
        Configuration(bits)
    }

    pub fn all_insecure(n: usize) -> Configuration {
        Configuration(vec![false; n])
    }

    pub fn all_inoculated(n: usize) -> Configuration {
        Configuration(vec![true; n])
    }

    /// Bit `i` of `mask` is node `i`.
    pub fn from_mask(mask: u64, n: usize) -> Configuration {
        assert!(n <= 64, "mask holds at most 64 nodes");
        Configuration((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.0.len() <= 64).then(|| {
            self.0.iter().enumerate().fold(0u64, |m, (i, &b)| m | (b as u64) << i)
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_inoculated(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, inoculated: bool) {
        self.0[v] = inoculated;
    }

    pub fn flip(&mut self, v: usize) {
        self.0[v] = !self.0[v];
    }

    pub fn inoculated_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// Parses a `0`/`1` string, node 0 first.
    fn from_str(s: &str) -> Result<Configuration> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!("bad configuration digit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }
}

impl From<Configuration> for String {
    fn from(c: Configuration) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Configuration {
    type Error = Error;

    fn try_from(s: String) -> Result<Configuration> {
        s.parse()
    }
}

/// Attack-graph components. Inoculated nodes carry no component.
#[derive(Debug, Clone, Default)]
pub struct Components {
    label: Vec<Option<usize>>,
    sizes: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Components {
    /// Recomputes in place, reusing buffers.
    pub(crate) fn fill(&mut self, g: &Graph, config: &Configuration) {
        let n = g.node_count();
        self.label.clear();
        self.label.resize(n, None);
        self.sizes.clear();
        for start in 0..n {
            if config.is_inoculated(start) || self.label[start].is_some() {
                continue;
            }
            let id = self.sizes.len();
            let mut size = 0;
            self.label[start] = Some(id);
            self.queue.push_back(start);
            while let Some(u) = self.queue.pop_front() {
                size += 1;
                for &v in g.neighbors(u) {
                    if !config.is_inoculated(v) && self.label[v].is_none() {
                        self.label[v] = Some(id);
                        self.queue.push_back(v);
                    }
                }
            }
            self.sizes.push(size);
        }
    }

    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.label[v]
    }

    /// Size of `v`'s component, 0 for inoculated nodes.
    pub fn size_of(&self, v: usize) -> usize {
        self.label[v].map_or(0, |c| self.sizes[c])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Node sets, one per component, in label order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.sizes.len()];
        for (v, label) in self.label.iter().enumerate() {
            if let Some(c) = label {
                out[*c].push(v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_edges_and_degrees() {
        let g = Graph::clique(4).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!((0..4).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn star_degrees() {
        let g = Graph::star(5).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(0), 4);
        assert!((1..5).all(|v| g.degree(v) == 1));
    }

    #[test]
    fn two_star_hubs() {
        let g = Graph::two_star(10).unwrap();
        assert_eq!(g.node_count(), 20);
        assert!(g.has_edge(0, 10));
        assert_eq!(g.degree(0), 10);
        assert_eq!(g.degree(10), 10);
        assert_eq!(g.edge_count(), 19);
    }

    #[test]
    fn two_clique_shape() {
        let g = Graph::two_clique(4).unwrap();
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 6 + 6 + 1);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.degree(1), 3);
    }

    #[test]
    fn cycle_degrees() {
        let g = Graph::cycle(7).unwrap();
        assert!((0..7).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn size_minimums_are_named() {
        let err = Graph::two_star(2).unwrap_err();
        assert!(err.to_string().contains("nodes per side >= 3"), "{err}");
        assert!(Graph::clique(1).is_err());
        assert!(Graph::cycle(2).is_err());
    }

    #[test]
    fn clique_minus_one_node() {
        let g = Graph::clique(4).unwrap();
        let c: Configuration = "1000".parse().unwrap();
        let comps = g.attack_components(&c).unwrap();
        assert_eq!(comps.sizes(), &[3]);
    }

    #[test]
    fn star_with_only_hub_inoculated() {
        let g = Graph::star(20).unwrap();
        let mut c = Configuration::all_insecure(20);
        c.set(0, true);
        let comps = g.attack_components(&c).unwrap();
        assert_eq!(comps.count(), 19);
        assert!(comps.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn cycle_two_gaps() {
        let g = Graph::cycle(6).unwrap();
        let c: Configuration = "010111".parse().unwrap();
        let comps = g.attack_components(&c).unwrap();
        assert_eq!(comps.members(), vec![vec![0], vec![2]]);
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = Graph::clique(4).unwrap();
        assert!(matches!(
            g.attack_components(&Configuration::all_insecure(3)),
            Err(Error::LengthMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::parse_edge_list("4\n0 1\n1 2 # path\n\n2 3\n").unwrap();
        assert_eq!(g.topology(), Topology::Custom);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(Graph::parse_edge_list("3\n0 0\n").is_err());
        assert!(Graph::parse_edge_list("3\n0 1\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("3\n0 5\n").is_err());
        assert!(Graph::parse_edge_list("3\n0 x\n").is_err());
    }

    #[test]
    fn mask_roundtrip() {
        let c: Configuration = "0101".parse().unwrap();
        assert_eq!(c.to_mask(), Some(0b1010));
        assert_eq!(Configuration::from_mask(0b1010, 4), c);
    }
}
