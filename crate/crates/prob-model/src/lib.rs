//! Tables of conditional probabilities `P(b | C_x, a, C_y)`, the T0/T1/T2
//! conditions and the payoff `min_{R} P(b | x, a, y)`.
//!
//! Classical tables use exact `Rational64` entries; quantum tables use `f64`
//! with an explicit zero tolerance.

mod entry;

pub use entry::{Entry, DEFAULT_TOL};
pub use num_rational::Rational64;

use graph_core::{CliqueSet, Graph};
use relation::{Relation, Tuple};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProbError {
    #[error("table is {tn}x{tw} but relation is {rn}x{rw}")]
    DimensionMismatch { tn: usize, tw: usize, rn: usize, rw: usize },
    #[error("T0 violated at {0:?}")]
    T0Violated(Tuple),
    #[error("malformed table: {0}")]
    Malformed(String),
}

/// `(n*omega) x (n*omega)` table; row `(C_x, a)`, column `(C_y, b)`, both
/// ordered lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable<T> {
    n: usize,
    omega: usize,
    entries: Vec<T>,
}

pub type ExactTable = ProbTable<Rational64>;
pub type FloatTable = ProbTable<f64>;

impl<T: Entry> ProbTable<T> {
    pub fn zeros(n: usize, omega: usize) -> Self {
        let side = n * omega;
        ProbTable { n, omega, entries: vec![T::zero(); side * side] }
    }

    pub fn from_fn(n: usize, omega: usize, mut f: impl FnMut(Tuple) -> T) -> Self {
        let mut t = Self::zeros(n, omega);
        for x in 1..=n {
            for a in 0..omega {
                for y in 1..=n {
                    for b in 0..omega {
                        let v = f(Tuple::new(x, a, y, b));
                        t.set(Tuple::new(x, a, y, b), v);
                    }
                }
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn side(&self) -> usize {
        self.n * self.omega
    }

    fn offset(&self, t: Tuple) -> usize {
        let r = (t.x - 1) * self.omega + t.a;
        let c = (t.y - 1) * self.omega + t.b;
        r * self.side() + c
    }

    pub fn get(&self, t: Tuple) -> &T {
        &self.entries[self.offset(t)]
    }

    pub fn set(&mut self, t: Tuple, v: T) {
        let o = self.offset(t);
        self.entries[o] = v;
    }

    /// Row `(x, a)` as a slice of `n*omega` entries.
    pub fn row(&self, x: usize, a: usize) -> &[T] {
        let r = (x - 1) * self.omega + a;
        &self.entries[r * self.side()..(r + 1) * self.side()]
    }

    /// Every `(row, C_y)` block sums to one and entries lie in `[0, 1]`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        let w = self.omega;
        self.entries.chunks(w).all(|block| {
            let s = block.iter().fold(T::zero(), |acc, e| acc.add(e));
            s.approx_eq(&T::one(), tol)
                && block.iter().all(|e| e.to_f64() >= -tol && e.to_f64() <= 1.0 + tol)
        })
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> ProbTable<U> {
        ProbTable { n: self.n, omega: self.omega, entries: self.entries.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> FloatTable {
        self.map(|e| e.to_f64())
    }

    /// Convex combination `sum_i w_i T_i`.
    pub fn mix(parts: &[(&ProbTable<T>, T)]) -> Self {
        let (first, _) = parts.first().expect("at least one table");
        let mut out = Self::zeros(first.n, first.omega);
        for (t, w) in parts {
            assert_eq!((t.n, t.omega), (first.n, first.omega));
            for (o, e) in out.entries.iter_mut().zip(&t.entries) {
                *o = o.add(&e.mul(w));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let side = self.side();
        let rows: Vec<Value> = self
            .entries
            .chunks(side)
            .map(|r| Value::Array(r.iter().map(|e| e.to_json()).collect()))
            .collect();
        json!({ "n": self.n, "omega": self.omega, "kind": T::KIND, "rows": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self, ProbError> {
        let bad = |m: &str| ProbError::Malformed(m.to_string());
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let omega = v["omega"].as_u64().ok_or_else(|| bad("missing omega"))? as usize;
        let rows = v["rows"].as_array().ok_or_else(|| bad("missing rows"))?;
        let side = n * omega;
        if rows.len() != side {
            return Err(bad("wrong row count"));
        }
        let mut entries = Vec::with_capacity(side * side);
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("row is not an array"))?;
            if r.len() != side {
                return Err(bad("wrong column count"));
            }
            for e in r {
                entries.push(T::from_json(e).ok_or_else(|| bad("bad entry"))?);
            }
        }
        Ok(ProbTable { n, omega, entries })
    }
}

impl ExactTable {
    /// The free entries set to `1/|valid|` ("all * equal" pattern).
    pub fn uniform_on_relation(rel: &Relation) -> Self {
        Self::from_fn(rel.n(), rel.omega(), |t| {
            if rel.contains(t) {
                Rational64::new(1, rel.valid_mask(t.x, t.a, t.y).count_ones() as i64)
            } else {
                Rational64::from_integer(0)
            }
        })
    }
}

fn check_dims<T>(t: &ProbTable<T>, rel: &Relation) -> Result<(), ProbError> {
    if t.n != rel.n() || t.omega != rel.omega() {
        return Err(ProbError::DimensionMismatch {
            tn: t.n,
            tw: t.omega,
            rn: rel.n(),
            rw: rel.omega(),
        });
    }
    Ok(())
}

fn all_tuples(n: usize, w: usize) -> impl Iterator<Item = Tuple> {
    (1..=n).flat_map(move |x| {
        (0..w).flat_map(move |a| (1..=n).flat_map(move |y| (0..w).map(move |b| Tuple::new(x, a, y, b))))
    })
}

/// Outcome of a zero/nonzero table check with the offending tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub violations: Vec<Tuple>,
}

impl Check {
    fn from(violations: Vec<Tuple>) -> Self {
        Check { ok: violations.is_empty(), violations }
    }
}

/// T0: every out-of-relation entry is zero.
pub fn check_t0<T: Entry>(t: &ProbTable<T>, rel: &Relation) -> Result<Check, ProbError> {
    check_t0_tol(t, rel, DEFAULT_TOL)
}

pub fn check_t0_tol<T: Entry>(t: &ProbTable<T>, rel: &Relation, tol: f64) -> Result<Check, ProbError> {
    check_dims(t, rel)?;
    Ok(Check::from(
        all_tuples(t.n, t.omega)
            .filter(|&tp| !rel.contains(tp) && !t.get(tp).is_zero_tol(tol))
            .collect(),
    ))
}

/// T1: every in-relation entry is positive.
pub fn check_t1<T: Entry>(t: &ProbTable<T>, rel: &Relation) -> Result<Check, ProbError> {
    check_t1_tol(t, rel, DEFAULT_TOL)
}

pub fn check_t1_tol<T: Entry>(t: &ProbTable<T>, rel: &Relation, tol: f64) -> Result<Check, ProbError> {
    check_dims(t, rel)?;
    Ok(Check::from(rel.tuples().filter(|&tp| t.get(tp).is_zero_tol(tol)).collect()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PayoffReport<T> {
    pub value: T,
    /// First tuple (in relation order) attaining the minimum.
    pub witness: Tuple,
    pub eta: usize,
    /// Algebraic upper bound `1/eta`.
    pub bound: Rational64,
    pub t0: bool,
}

pub fn payoff<T: Entry>(t: &ProbTable<T>, rel: &Relation) -> Result<PayoffReport<T>, ProbError> {
    payoff_tol(t, rel, DEFAULT_TOL)
}

pub fn payoff_tol<T: Entry>(
    t: &ProbTable<T>,
    rel: &Relation,
    tol: f64,
) -> Result<PayoffReport<T>, ProbError> {
    check_dims(t, rel)?;
    let mut best: Option<(T, Tuple)> = None;
    for tp in rel.tuples() {
        let v = t.get(tp);
        if best.as_ref().is_none_or(|(b, _)| v < b) {
            best = Some((v.clone(), tp));
        }
    }
    let (value, witness) = best.ok_or_else(|| ProbError::Malformed("empty relation".into()))?;
    let eta = rel.eta();
    Ok(PayoffReport {
        value,
        witness,
        eta,
        bound: Rational64::new(1, eta as i64),
        t0: check_t0_tol(t, rel, tol)?.ok,
    })
}

/// T2: the payoff equals `1/eta` (exactly for rationals, within `tol` for floats).
pub fn check_t2<T: Entry>(t: &ProbTable<T>, rel: &Relation) -> Result<bool, ProbError> {
    check_t2_tol(t, rel, DEFAULT_TOL)
}

pub fn check_t2_tol<T: Entry>(t: &ProbTable<T>, rel: &Relation, tol: f64) -> Result<bool, ProbError> {
    let p = payoff_tol(t, rel, tol)?;
    Ok(p.value.approx_eq(&T::from_ratio(1, p.eta as i64), tol))
}

/// Table with rows merged by the vertex they colour.
#[derive(Debug, Clone, PartialEq)]
pub struct Compressed<T> {
    /// One row of `n*omega` entries per message.
    pub rows: Vec<Vec<T>>,
    /// Vertex behind each message.
    pub message_vertex: Vec<usize>,
    /// `row_message[(x-1)*omega + a]` is the message row `(x, a)` maps to.
    pub row_message: Vec<usize>,
}

/// Merges rows whose colourings select the same vertex; each merged row keeps
/// the entries of its first representative.
pub fn compress_rows<T: Entry>(
    t: &ProbTable<T>,
    g: &Graph,
    cliques: &CliqueSet,
    rel: &Relation,
) -> Result<Compressed<T>, ProbError> {
    let t0 = check_t0(t, rel)?;
    if let Some(&v) = t0.violations.first() {
        return Err(ProbError::T0Violated(v));
    }
    if cliques.count() != t.n || cliques.omega != t.omega {
        return Err(ProbError::DimensionMismatch {
            tn: t.n,
            tw: t.omega,
            rn: cliques.count(),
            rw: cliques.omega,
        });
    }
    let mut out = Compressed { rows: Vec::new(), message_vertex: Vec::new(), row_message: Vec::new() };
    let mut by_vertex = vec![None; g.order() + 1];
    for x in 1..=t.n {
        for a in 0..t.omega {
            let v = cliques.vertex(x, a);
            let m = *by_vertex[v].get_or_insert_with(|| {
                out.rows.push(t.row(x, a).to_vec());
                out.message_vertex.push(v);
                out.rows.len() - 1
            });
            out.row_message.push(m);
        }
    }
    Ok(out)
}
