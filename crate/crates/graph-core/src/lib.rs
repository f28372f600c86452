//! Simple undirected graphs with 1-based vertices, their maximum cliques,
//! the three graph families used by the clique-labelling game, and the
//! G0/G1/G2 structural conditions.

mod cliques;
mod conditions;
mod families;

pub use cliques::{enumerate_maximum_cliques, CliqueSet};
pub use conditions::{check_conditions, check_conditions_with_cap, Conditions, G2_DEFAULT_CAP};
pub use families::{gen_disconnected, gen_nncc, gen_paley, is_prime, FamilyParams};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid edge ({0}, {1}) for a graph of order {2}")]
    InvalidEdge(usize, usize, usize),
    #[error("invalid clique set: {0}")]
    InvalidCliques(String),
}

/// Undirected simple graph on vertices `1..=order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn empty(order: usize) -> Self {
        Graph {
            order,
            adj: vec![vec![false; order]; order],
        }
    }

    pub fn complete(order: usize) -> Self {
        let mut g = Graph::empty(order);
        for u in 1..=order {
            for v in (u + 1)..=order {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(order);
        for &(u, v) in edges {
            if u == v || u == 0 || v == 0 || u > order || v > order {
                return Err(GraphError::InvalidEdge(u, v, order));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.adj[u - 1][v - 1] = true;
        self.adj[v - 1][u - 1] = true;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.order
    }

    /// Adjacency test on 1-based vertices. A vertex is never adjacent to itself.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u - 1][v - 1]
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.vertices().filter(|&u| self.has_edge(v, u)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].iter().filter(|&&b| b).count()
    }

    pub fn common_neighbours(&self, u: usize, v: usize) -> usize {
        (0..self.order)
            .filter(|&w| self.adj[u - 1][w] && self.adj[v - 1][w])
            .count()
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.order {
            for v in (u + 1)..=self.order {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.order);
        for u in 1..=self.order {
            for v in (u + 1)..=self.order {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    /// 0/1 adjacency matrix, 0-based.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        self.adj
            .iter()
            .map(|row| row.iter().map(|&b| b as u8).collect())
            .collect()
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let mut seen = vec![false; self.order];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for w in 0..self.order {
                if self.adj[u][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Standard complement; an involution.
pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(order={}, edges={:?})", self.order, self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    order: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            order: self.order,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(raw.order, &edges).map_err(serde::de::Error::custom)
    }
}
