use crate::{Graph, GraphError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    Disconnected { n: usize, omega: usize },
    Nncc { n: usize, omega: usize, r: usize },
    Paley { q: usize },
}

impl FamilyParams {
    pub fn build(&self) -> Result<Graph, GraphError> {
        match *self {
            FamilyParams::Disconnected { n, omega } => gen_disconnected(n, omega),
            FamilyParams::Nncc { n, omega, r } => gen_nncc(n, omega, r),
            FamilyParams::Paley { q } => gen_paley(q),
        }
    }
}

/// `n` vertex-disjoint copies of `K_omega`; vertex `i` of clique `k` is `(k-1)*omega + i`.
pub fn gen_disconnected(n: usize, omega: usize) -> Result<Graph, GraphError> {
    if n < 1 || omega < 2 {
        return Err(GraphError::InvalidParams(format!(
            "disconnected needs n >= 1 and omega >= 2 (got n={n}, omega={omega})"
        )));
    }
    let mut edges = Vec::new();
    for k in 0..n {
        for i in 1..=omega {
            for j in (i + 1)..=omega {
                edges.push((k * omega + i, k * omega + j));
            }
        }
    }
    Graph::from_edges(n * omega, &edges)
}

/// A chain of `n` cliques of size `omega` where consecutive cliques share `r` vertices.
pub fn gen_nncc(n: usize, omega: usize, r: usize) -> Result<Graph, GraphError> {
    if n < 1 || omega < 2 || r < 1 || 2 * r >= omega {
        return Err(GraphError::InvalidParams(format!(
            "nncc needs n >= 1 and 1 <= r < omega/2 (got n={n}, omega={omega}, r={r})"
        )));
    }
    let step = omega - r;
    let order = n * step + r;
    let mut edges = Vec::new();
    for k in 0..n {
        let base = k * step;
        for i in 1..=omega {
            for j in (i + 1)..=omega {
                edges.push((base + i, base + j));
            }
        }
    }
    Graph::from_edges(order, &edges)
}

pub fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley graph over `Z_q`; vertex `i` stands for the field element `i - 1`.
pub fn gen_paley(q: usize) -> Result<Graph, GraphError> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(GraphError::InvalidParams(format!(
            "paley needs a prime q = 1 mod 4 (got {q})"
        )));
    }
    let mut residue = vec![false; q];
    for x in 1..q {
        residue[x * x % q] = true;
    }
    let mut edges = Vec::new();
    for i in 0..q {
        for j in (i + 1)..q {
            if residue[(j - i) % q] {
                edges.push((i + 1, j + 1));
            }
        }
    }
    Graph::from_edges(q, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nncc_order() {
        assert_eq!(gen_nncc(3, 5, 2).unwrap().order(), 11);
        assert_eq!(gen_nncc(2, 3, 1).unwrap().order(), 5);
        assert!(gen_nncc(2, 4, 2).is_err());
        assert!(gen_nncc(2, 3, 0).is_err());
    }

    #[test]
    fn paley_rejects_bad_q() {
        for q in [9, 7, 15, 3, 1, 0] {
            assert!(gen_paley(q).is_err(), "{q}");
        }
    }

    #[test]
    fn disconnected_sizes() {
        let g = gen_disconnected(4, 2).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.edges(), vec![(1, 2), (3, 4), (5, 6), (7, 8)]);
        assert!(gen_disconnected(0, 2).is_err());
        assert!(gen_disconnected(2, 1).is_err());
    }
}
