use crate::{Graph, GraphError};
use serde::{Deserialize, Serialize};

/// The ordered maximum cliques `C_1..C_n` of a graph, all of size `omega`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSet {
    pub omega: usize,
    pub cliques: Vec<Vec<usize>>,
}

impl CliqueSet {
    /// Validates a hand-written clique list against its host graph.
    pub fn new(g: &Graph, mut cliques: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let omega = match cliques.first() {
            Some(c) => c.len(),
            None => return Err(GraphError::InvalidCliques("no cliques".into())),
        };
        for c in cliques.iter_mut() {
            c.sort_unstable();
            if c.len() != omega {
                return Err(GraphError::InvalidCliques(format!(
                    "clique {c:?} has size {} but omega = {omega}",
                    c.len()
                )));
            }
            if c.iter().any(|&v| v == 0 || v > g.order()) || !g.is_clique(c) {
                return Err(GraphError::InvalidCliques(format!("{c:?} is not a clique")));
            }
            let extendable = g
                .vertices()
                .any(|w| !c.contains(&w) && c.iter().all(|&v| g.has_edge(v, w)));
            if extendable {
                return Err(GraphError::InvalidCliques(format!("{c:?} is not maximal")));
            }
        }
        Ok(CliqueSet { omega, cliques })
    }

    pub fn count(&self) -> usize {
        self.cliques.len()
    }

    /// Vertex list of clique `x` (1-based).
    pub fn clique(&self, x: usize) -> &[usize] {
        &self.cliques[x - 1]
    }

    /// Vertex coloured 1 by label `a` of clique `x`.
    pub fn vertex(&self, x: usize, a: usize) -> usize {
        self.cliques[x - 1][a]
    }

    pub fn position(&self, x: usize, v: usize) -> Option<usize> {
        self.cliques[x - 1].iter().position(|&w| w == v)
    }

    pub fn covered_vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.cliques.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

type Set = u128;

fn bits(s: Set) -> impl Iterator<Item = usize> {
    let mut s = s;
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

fn bron_kerbosch(nbr: &[Set], r: Set, mut p: Set, mut x: Set, out: &mut Vec<Set>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| (nbr[u] & p).count_ones())
        .unwrap();
    for v in bits(p & !nbr[pivot]) {
        let bit = 1u128 << v;
        bron_kerbosch(nbr, r | bit, p & nbr[v], x & nbr[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// All maximum cliques, each ascending, sorted lexicographically.
pub fn enumerate_maximum_cliques(g: &Graph) -> Result<CliqueSet, GraphError> {
    let n = g.order();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if n > 128 {
        return Err(GraphError::InvalidParams(format!(
            "clique enumeration supports at most 128 vertices, got {n}"
        )));
    }
    let nbr: Vec<Set> = (1..=n)
        .map(|u| {
            g.vertices()
                .filter(|&v| g.has_edge(u, v))
                .fold(0, |acc, v| acc | (1u128 << (v - 1)))
        })
        .collect();
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut maximal = Vec::new();
    bron_kerbosch(&nbr, 0, all, 0, &mut maximal);
    let omega = maximal.iter().map(|c| c.count_ones()).max().unwrap_or(0) as usize;
    let mut cliques: Vec<Vec<usize>> = maximal
        .into_iter()
        .filter(|c| c.count_ones() as usize == omega)
        .map(|c| bits(c).map(|i| i + 1).collect())
        .collect();
    cliques.sort();
    Ok(CliqueSet { omega, cliques })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_one_clique() {
        let cs = enumerate_maximum_cliques(&Graph::complete(3)).unwrap();
        assert_eq!(cs.omega, 3);
        assert_eq!(cs.cliques, vec![vec![1, 2, 3]]);
    }

    #[test]
    fn single_vertex() {
        let cs = enumerate_maximum_cliques(&Graph::empty(1)).unwrap();
        assert_eq!(cs.omega, 1);
        assert_eq!(cs.cliques, vec![vec![1]]);
    }

    #[test]
    fn empty_graph_is_error() {
        assert_eq!(
            enumerate_maximum_cliques(&Graph::empty(0)),
            Err(GraphError::EmptyGraph)
        );
    }

    #[test]
    fn new_rejects_non_maximal() {
        let g = Graph::complete(3);
        assert!(CliqueSet::new(&g, vec![vec![1, 2]]).is_err());
        assert!(CliqueSet::new(&g, vec![vec![3, 2, 1]]).is_ok());
    }
}
