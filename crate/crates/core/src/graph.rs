//! Scale-free interaction network built by preferential attachment.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Index of a node (and of the agent living on it).
pub type NodeId = usize;

/// Minimum number of tail nodes required by [`degree_exponent_estimate`].
pub const MIN_TAIL_NODES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid graph parameters: {0}")]
    InvalidParams(String),
    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("insufficient tail: {found} nodes with degree >= {k_min}, need at least {MIN_TAIL_NODES}")]
    InsufficientTail { found: usize, k_min: usize },
    #[error("invalid edge list: {0}")]
    InvalidEdgeList(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GraphParams {
    pub n: usize,
    /// Edges added by each node joining after the seed core.
    pub m_attach: usize,
    pub seed: u64,
}

impl GraphParams {
    pub const DEFAULT_M_ATTACH: usize = 2;

    pub fn new(n: usize, m_attach: usize, seed: u64) -> Self {
        Self { n, m_attach, seed }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.n == 0 {
            return Err(GraphError::InvalidParams("n must be positive".into()));
        }
        if self.m_attach == 0 {
            return Err(GraphError::InvalidParams("m_attach must be positive".into()));
        }
        if self.m_attach >= self.n {
            return Err(GraphError::InvalidParams(format!(
                "m_attach ({}) must be smaller than n ({})",
                self.m_attach, self.n
            )));
        }
        Ok(())
    }

    /// Edge count produced by [`generate_scale_free`]: a complete core on
    /// `m_attach + 1` nodes plus `m_attach` edges for every later node.
    pub fn expected_edge_count(&self) -> usize {
        let core = self.m_attach + 1;
        core * (core - 1) / 2 + (self.n - core) * self.m_attach
    }
}

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Graph with `node_count` nodes and no edges.
    pub fn empty(node_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); node_count],
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(node_count);
        for &(u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(GraphError::InvalidEdgeList(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(GraphError::InvalidEdgeList(format!("self-loop on {u}")));
            }
            if g.adjacency[u].contains(&v) {
                return Err(GraphError::InvalidEdgeList(format!("duplicate edge ({u}, {v})")));
            }
            g.adjacency[u].push(v);
            g.adjacency[v].push(u);
        }
        for list in &mut g.adjacency {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId], GraphError> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::NodeOutOfRange {
                node: v,
                node_count: self.node_count(),
            })
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Number of connected components (breadth-first scan).
    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = Vec::new();
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push(start);
            while let Some(u) = queue.pop() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Edge list text: one `u v` line per edge, `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the format written by [`Graph::to_edge_list`]. Blank lines and
    /// `#` comments are skipped.
    pub fn from_edge_list(node_count: usize, text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<NodeId, GraphError> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    GraphError::InvalidEdgeList(format!("line {}: expected `u v`", i + 1))
                })
            };
            let u = parse(parts.next())?;
            let v = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(GraphError::InvalidEdgeList(format!(
                    "line {}: trailing fields",
                    i + 1
                )));
            }
            edges.push((u, v));
        }
        Self::from_edges(node_count, &edges)
    }
}

/// Barabási–Albert growth: a complete core on `m_attach + 1` nodes, then each
/// new node links to `m_attach` distinct existing nodes chosen with
/// probability proportional to their degree.
pub fn generate_scale_free(params: GraphParams) -> Result<Graph, GraphError> {
    params.validate()?;
    let GraphParams { n, m_attach, seed } = params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    // Every edge contributes both endpoints, so a uniform draw from this list
    // picks a node with probability degree / (2 * edges).
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * params.expected_edge_count());

    let core = m_attach + 1;
    for u in 0..core {
        for v in (u + 1)..core {
            adjacency[u].push(v);
            adjacency[v].push(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    let mut targets: Vec<NodeId> = Vec::with_capacity(m_attach);
    for new in core..n {
        targets.clear();
        while targets.len() < m_attach {
            let candidate = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&candidate) {
                targets.push(candidate);
            }
        }
        for &t in &targets {
            adjacency[new].push(t);
            adjacency[t].push(new);
            endpoints.push(new);
            endpoints.push(t);
        }
    }

    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph { adjacency })
}

/// Continuous maximum-likelihood tail exponent with the half-integer
/// correction for discrete data:
/// `1 + M / sum(ln(k / (k_min - 0.5)))` over the `M` degrees `>= k_min`.
pub fn exponent_from_degrees(degrees: &[usize], k_min: usize) -> Result<f64, GraphError> {
    if k_min == 0 {
        return Err(GraphError::InvalidParams("k_min must be positive".into()));
    }
    let shift = k_min as f64 - 0.5;
    let (count, log_sum) = degrees
        .iter()
        .filter(|&&k| k >= k_min)
        .fold((0usize, 0.0f64), |(c, s), &k| (c + 1, s + (k as f64 / shift).ln()));
    if count < MIN_TAIL_NODES {
        return Err(GraphError::InsufficientTail { found: count, k_min });
    }
    Ok(1.0 + count as f64 / log_sum)
}

/// Power-law exponent of the degree tail of `g`.
pub fn degree_exponent_estimate(g: &Graph, k_min: usize) -> Result<f64, GraphError> {
    exponent_from_degrees(&g.degrees(), k_min)
}
