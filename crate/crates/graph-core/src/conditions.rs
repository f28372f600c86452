use crate::{CliqueSet, Graph};
use serde::{Deserialize, Serialize};

pub const G2_DEFAULT_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    #[serde(rename = "G0")]
    pub g0: bool,
    #[serde(rename = "G1")]
    pub g1: bool,
    /// `|V| - kappa(complement)`; `None` above the search cap.
    #[serde(rename = "G2")]
    pub g2: Option<usize>,
}

pub fn check_conditions(g: &Graph, cliques: &CliqueSet) -> Conditions {
    check_conditions_with_cap(g, cliques, G2_DEFAULT_CAP)
}

pub fn check_conditions_with_cap(g: &Graph, cliques: &CliqueSet, cap: usize) -> Conditions {
    let g2 = if g.order() <= cap.min(31) {
        Some(g.order() - vertex_connectivity(&g.complement()))
    } else {
        None
    };
    Conditions {
        g0: g0(g, cliques),
        g1: g1(g, cliques),
        g2,
    }
}

fn g0(g: &Graph, cliques: &CliqueSet) -> bool {
    cliques.covered_vertices().len() == g.order()
}

fn g1(g: &Graph, cliques: &CliqueSet) -> bool {
    let n = g.order();
    let mut together = vec![vec![false; n + 1]; n + 1];
    for c in &cliques.cliques {
        for &u in c {
            for &v in c {
                together[u][v] = true;
            }
        }
    }
    let nbr: Vec<u128> = (0..=n)
        .map(|u| {
            if u == 0 {
                0
            } else {
                g.neighbours(u).iter().fold(0, |acc, &v| acc | 1u128 << v)
            }
        })
        .collect();
    let in_some: Vec<bool> = (0..=n).map(|v| together[v][v]).collect();
    for v in 1..=n {
        for w in (v + 1)..=n {
            if !in_some[v] || !in_some[w] || together[v][w] {
                continue;
            }
            let witness = (nbr[v] ^ nbr[w]) & !(1u128 << v) & !(1u128 << w);
            if witness == 0 {
                return false;
            }
        }
    }
    true
}

/// Minimum number of vertices whose removal leaves a disconnected graph on
/// at least two vertices; `|V| - 1` when no removal disconnects.
fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.order();
    if n <= 1 {
        return 0;
    }
    let nbr: Vec<u32> = (1..=n)
        .map(|u| g.neighbours(u).iter().fold(0, |acc, &v| acc | 1u32 << (v - 1)))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for s in 0..=(n - 2) {
        let mut removed: u32 = (1u32 << s) - 1;
        loop {
            if !connected(&nbr, full & !removed) {
                return s;
            }
            if s == 0 {
                break;
            }
            // next subset of the same size (Gosper's hack)
            let c = removed & removed.wrapping_neg();
            let r = removed + c;
            removed = (((r ^ removed) >> 2) / c) | r;
            if removed > full {
                break;
            }
        }
    }
    n - 1
}

fn connected(nbr: &[u32], alive: u32) -> bool {
    if alive == 0 {
        return true;
    }
    let start = alive & alive.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let i = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= nbr[i];
        }
        next &= alive & !seen;
        seen |= next;
        frontier = next;
    }
    seen == alive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{enumerate_maximum_cliques, gen_disconnected};

    #[test]
    fn connectivity_small_cases() {
        assert_eq!(vertex_connectivity(&Graph::complete(5)), 4);
        assert_eq!(vertex_connectivity(&Graph::empty(3)), 0);
        // path 1-2-3: removing the middle vertex disconnects
        let p = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(vertex_connectivity(&p), 1);
    }

    #[test]
    fn disconnected_family_has_k_equal_omega() {
        for (n, w) in [(2, 2), (3, 2), (2, 3), (4, 3)] {
            let g = gen_disconnected(n, w).unwrap();
            let cs = enumerate_maximum_cliques(&g).unwrap();
            assert_eq!(check_conditions(&g, &cs).g2, Some(w));
        }
    }

    #[test]
    fn g2_not_computed_above_cap() {
        let g = gen_disconnected(9, 2).unwrap();
        let cs = enumerate_maximum_cliques(&g).unwrap();
        assert_eq!(check_conditions(&g, &cs).g2, None);
        assert_eq!(check_conditions_with_cap(&g, &cs, 18).g2, Some(2));
    }
}
