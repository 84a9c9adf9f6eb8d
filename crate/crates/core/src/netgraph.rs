//! Net spillover networks and PageRank centrality.
//!
//! A positive net-pairwise entry `c_ij` (row `i` receives from column `j`)
//! becomes the directed edge `j -> i`: risk flows from the net transmitter
//! of the pair to the net receiver. PageRank mass follows edge direction,
//! so high scores mark net absorbers of spillovers.

use serde::{Deserialize, Serialize};

use crate::connect::{ConnectednessTable, NetPairwiseMatrix};
use crate::error::NetworkError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Transmitter,
    Receiver,
}

impl Role {
    pub fn of(net_pct: f64) -> Self {
        if net_pct > 0.0 {
            Role::Transmitter
        } else {
            Role::Receiver
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Transmitter => "transmitter",
            Role::Receiver => "receiver",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub net_pct: f64,
    pub role: Role,
}

/// Directed edge between node indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpilloverNetwork {
    pub nodes: Vec<Node>,
    /// Sorted by (source, target).
    pub edges: Vec<Edge>,
}

impl SpilloverNetwork {
    pub fn outgoing(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == node)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Edges as `(source id, target id, weight)`.
    pub fn edge_list(&self) -> Vec<(&str, &str, f64)> {
        self.edges
            .iter()
            .map(|e| (self.nodes[e.source].id.as_str(), self.nodes[e.target].id.as_str(), e.weight_pct))
            .collect()
    }
}

pub fn build_network(npm: &NetPairwiseMatrix, table: &ConnectednessTable) -> Result<SpilloverNetwork, NetworkError> {
    if npm.series_ids != table.series_ids() {
        return Err(NetworkError::IdMismatch);
    }
    let n = npm.series_ids.len();
    let nodes = npm
        .series_ids
        .iter()
        .zip(table.net_pct.iter())
        .map(|(id, &net)| Node {
            id: id.clone(),
            net_pct: net,
            role: Role::of(net),
        })
        .collect();
    let mut edges = Vec::new();
    for source in 0..n {
        for target in 0..n {
            let w = npm.values[(target, source)];
            if source != target && w > 0.0 {
                edges.push(Edge {
                    source,
                    target,
                    weight_pct: w,
                });
            }
        }
    }
    Ok(SpilloverNetwork { nodes, edges })
}

/// Keeps, for every node, only its heaviest outgoing edge. Equal weights go
/// to the lexicographically smaller target id.
pub fn max_out_subgraph(net: &SpilloverNetwork) -> SpilloverNetwork {
    let mut edges: Vec<Edge> = (0..net.nodes.len())
        .filter_map(|u| {
            net.outgoing(u).copied().reduce(|best, e| {
                if e.weight_pct > best.weight_pct
                    || (e.weight_pct == best.weight_pct && net.nodes[e.target].id < net.nodes[best.target].id)
                {
                    e
                } else {
                    best
                }
            })
        })
        .collect();
    edges.sort_by_key(|e| (e.source, e.target));
    SpilloverNetwork {
        nodes: net.nodes.clone(),
        edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PageRankConfig {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-12,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRankScores {
    /// Aligned with the network's nodes.
    pub scores: Vec<f64>,
    pub damping: f64,
    pub iterations_used: usize,
}

impl PageRankScores {
    /// `(node id, score)` pairs, highest first; ties by id.
    pub fn ranking(&self, net: &SpilloverNetwork) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = net
            .nodes
            .iter()
            .map(|n| n.id.clone())
            .zip(self.scores.iter().copied())
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

/// Weighted PageRank by power iteration.
///
/// Each node passes `damping` of its score along its outgoing edges in
/// proportion to their weights; nodes without outgoing edges spread it
/// uniformly. The remaining `1 - damping` teleports uniformly. Iteration
/// stops when the L1 change falls below `tol`.
pub fn pagerank(net: &SpilloverNetwork, damping: f64, tol: f64, max_iter: usize) -> Result<PageRankScores, NetworkError> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(NetworkError::InvalidDamping(damping));
    }
    if !(tol > 0.0) {
        return Err(NetworkError::InvalidTolerance(tol));
    }
    let n = net.nodes.len();
    if n == 0 {
        return Ok(PageRankScores {
            scores: Vec::new(),
            damping,
            iterations_used: 0,
        });
    }
    let mut out_weight = vec![0.0; n];
    for e in &net.edges {
        out_weight[e.source] += e.weight_pct;
    }
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=max_iter {
        let dangling: f64 = (0..n).filter(|&u| out_weight[u] <= 0.0).map(|u| rank[u]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        next.iter_mut().for_each(|v| *v = base);
        for e in &net.edges {
            next[e.target] += damping * rank[e.source] * e.weight_pct / out_weight[e.source];
        }
        let mass: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= mass);
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < tol {
            return Ok(PageRankScores {
                scores: rank,
                damping,
                iterations_used: iter,
            });
        }
    }
    Err(NetworkError::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

pub fn pagerank_with(net: &SpilloverNetwork, config: &PageRankConfig) -> Result<PageRankScores, NetworkError> {
    pagerank(net, config.damping, config.tol, config.max_iter)
}
