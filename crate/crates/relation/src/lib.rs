//! Clique labels, binary colourings and the relation `R` of admissible
//! tuples `(C_x, a, C_y, b)` induced by consistent pairwise labelling.

mod infer;

pub use infer::{infer_graph, Inferred};

use graph_core::{CliqueSet, Graph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("label {a} out of range for a clique of size {omega}")]
    LabelOutOfRange { a: usize, omega: usize },
    #[error("colouring must assign 1 to exactly one vertex of the clique")]
    BadColouring,
    #[error("tuple {0:?} out of range")]
    TupleOutOfRange(Tuple),
    #[error("inconsistent relation: {0}")]
    InconsistentRelation(String),
}

/// `(C_x, a, C_y, b)` with 1-based clique indices and 0-based labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct Tuple {
    pub x: usize,
    pub a: usize,
    pub y: usize,
    pub b: usize,
}

impl Tuple {
    pub const fn new(x: usize, a: usize, y: usize, b: usize) -> Self {
        Tuple { x, a, y, b }
    }

    pub fn mirror(self) -> Self {
        Tuple::new(self.y, self.b, self.x, self.a)
    }
}

impl From<[usize; 4]> for Tuple {
    fn from(t: [usize; 4]) -> Self {
        Tuple::new(t[0], t[1], t[2], t[3])
    }
}

impl From<Tuple> for [usize; 4] {
    fn from(t: Tuple) -> Self {
        [t.x, t.a, t.y, t.b]
    }
}

/// Clique label `(C_x, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueLabel {
    pub x: usize,
    pub a: usize,
}

/// A 0/1 assignment on one clique's vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryColouring {
    pub assignment: Vec<(usize, u8)>,
}

impl BinaryColouring {
    pub fn colour(&self, v: usize) -> Option<u8> {
        self.assignment.iter().find(|(w, _)| *w == v).map(|&(_, c)| c)
    }
}

pub fn label_to_colouring(clique: &[usize], a: usize) -> Result<BinaryColouring, RelationError> {
    if a >= clique.len() {
        return Err(RelationError::LabelOutOfRange { a, omega: clique.len() });
    }
    Ok(BinaryColouring {
        assignment: clique
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, (i == a) as u8))
            .collect(),
    })
}

pub fn colouring_to_label(clique: &[usize], f: &BinaryColouring) -> Result<usize, RelationError> {
    let ones: Vec<usize> = clique
        .iter()
        .enumerate()
        .filter(|(_, &v)| f.colour(v) == Some(1))
        .map(|(i, _)| i)
        .collect();
    let all_defined = clique.iter().all(|&v| f.colour(v).is_some());
    match ones.as_slice() {
        [a] if all_defined => Ok(*a),
        _ => Err(RelationError::BadColouring),
    }
}

/// Rules 1 and 2 of consistent labelling for cliques `x`, `y` (1-based).
pub fn consistent(g: &Graph, cliques: &CliqueSet, x: usize, a: usize, y: usize, b: usize) -> bool {
    let cx = cliques.clique(x);
    let cy = cliques.clique(y);
    let fx = label_to_colouring(cx, a).expect("label in range");
    let fy = label_to_colouring(cy, b).expect("label in range");
    // rule 1: shared vertices coloured identically
    for &v in cx {
        if let Some(c) = fy.colour(v) {
            if fx.colour(v) != Some(c) {
                return false;
            }
        }
    }
    // rule 2: no edge joins two vertices coloured 1
    let u = cx[a];
    let w = cy[b];
    !(u != w && g.has_edge(u, w))
}

/// The relation as an ordered tuple set, plus a per-`(x, a, y)` bitmask of valid labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    omega: usize,
    tuples: BTreeSet<Tuple>,
    valid: Vec<u64>,
}

impl Relation {
    pub fn from_tuples<I: IntoIterator<Item = Tuple>>(
        n: usize,
        omega: usize,
        tuples: I,
    ) -> Result<Self, RelationError> {
        assert!(omega <= 64, "labels are stored in 64-bit masks");
        let mut set = BTreeSet::new();
        let mut valid = vec![0u64; n * omega * n];
        for t in tuples {
            if t.x == 0 || t.y == 0 || t.x > n || t.y > n || t.a >= omega || t.b >= omega {
                return Err(RelationError::TupleOutOfRange(t));
            }
            valid[((t.x - 1) * omega + t.a) * n + t.y - 1] |= 1 << t.b;
            set.insert(t);
        }
        Ok(Relation { n, omega, tuples: set, valid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    /// Cardinality `Gamma`.
    pub fn gamma(&self) -> usize {
        self.tuples.len()
    }

    pub fn contains(&self, t: Tuple) -> bool {
        self.valid_mask(t.x, t.a, t.y) >> t.b & 1 == 1
    }

    pub fn tuples(&self) -> impl Iterator<Item = Tuple> + '_ {
        self.tuples.iter().copied()
    }

    pub fn valid_mask(&self, x: usize, a: usize, y: usize) -> u64 {
        self.valid[((x - 1) * self.omega + a) * self.n + y - 1]
    }

    /// Labels `b` with `(x, a, y, b)` in the relation, ascending.
    pub fn valid(&self, x: usize, a: usize, y: usize) -> Vec<usize> {
        let m = self.valid_mask(x, a, y);
        (0..self.omega).filter(|b| m >> b & 1 == 1).collect()
    }

    /// `eta`: the largest number of valid outputs for a single input pair.
    pub fn eta(&self) -> usize {
        self.valid.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// All `(x, a)` row labels in lexicographic order.
    pub fn inputs(&self) -> impl Iterator<Item = CliqueLabel> + '_ {
        (1..=self.n).flat_map(move |x| (0..self.omega).map(move |a| CliqueLabel { x, a }))
    }

    /// Row/column index of `(x, a)` in an `n*omega` table.
    pub fn index(&self, x: usize, a: usize) -> usize {
        (x - 1) * self.omega + a
    }

    pub fn is_total(&self) -> bool {
        self.valid.iter().all(|&m| m != 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.tuples.iter().all(|t| self.contains(t.mirror()))
    }

    pub fn has_diagonal_determinism(&self) -> bool {
        (1..=self.n).all(|x| (0..self.omega).all(|a| self.valid_mask(x, a, x) == 1 << a))
    }
}

pub fn build_relation(g: &Graph, cliques: &CliqueSet) -> Relation {
    let n = cliques.count();
    let w = cliques.omega;
    let mut tuples = Vec::new();
    for x in 1..=n {
        for a in 0..w {
            for y in 1..=n {
                for b in 0..w {
                    if consistent(g, cliques, x, a, y, b) {
                        tuples.push(Tuple::new(x, a, y, b));
                    }
                }
            }
        }
    }
    Relation::from_tuples(n, w, tuples).expect("indices in range by construction")
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    n: usize,
    omega: usize,
    tuples: Vec<Tuple>,
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RelationJson {
            n: self.n,
            omega: self.omega,
            tuples: self.tuples().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RelationJson::deserialize(d)?;
        Relation::from_tuples(raw.n, raw.omega, raw.tuples).map_err(serde::de::Error::custom)
    }
}
