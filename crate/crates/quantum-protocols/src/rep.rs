use crate::{QuantumError, C64, REP_TOL};
use graph_core::Graph;
use nalgebra::DVector;
use serde_json::{json, Map, Value};

/// Unit vectors in `C^d`, one per vertex; `vectors[v - 1]` belongs to `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalRepresentation {
    pub d: usize,
    pub vectors: Vec<DVector<C64>>,
}

impl OrthogonalRepresentation {
    pub fn new(d: usize, vectors: Vec<DVector<C64>>) -> Result<Self, QuantumError> {
        if let Some(i) = vectors.iter().position(|v| v.len() != d) {
            return Err(QuantumError::InvalidParams(format!(
                "vector for vertex {} has length {}, expected {d}",
                i + 1,
                vectors[i].len()
            )));
        }
        Ok(OrthogonalRepresentation { d, vectors })
    }

    /// Column `v - 1` of a `d x |V|` matrix becomes the vector of `v`.
    pub fn from_columns(m: &nalgebra::DMatrix<C64>) -> Self {
        OrthogonalRepresentation {
            d: m.nrows(),
            vectors: m.column_iter().map(|c| c.into_owned()).collect(),
        }
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_columns(&self.vectors)
    }

    pub fn order(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, v: usize) -> &DVector<C64> {
        &self.vectors[v - 1]
    }

    pub fn inner(&self, u: usize, v: usize) -> C64 {
        self.vector(u).dotc(self.vector(v))
    }

    /// `|<u, v>|^2`
    pub fn overlap(&self, u: usize, v: usize) -> f64 {
        self.inner(u, v).norm_sqr()
    }

    pub fn gram(&self) -> nalgebra::DMatrix<C64> {
        let m = self.to_matrix();
        m.adjoint() * m
    }

    pub fn to_json(&self) -> Value {
        let mut vs = Map::new();
        for (i, v) in self.vectors.iter().enumerate() {
            vs.insert(
                (i + 1).to_string(),
                Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect()),
            );
        }
        json!({ "d": self.d, "vectors": vs })
    }

    pub fn from_json(v: &Value) -> Result<Self, QuantumError> {
        let bad = |m: &str| QuantumError::Malformed(m.to_string());
        let d = v["d"].as_u64().ok_or_else(|| bad("missing d"))? as usize;
        let obj = v["vectors"].as_object().ok_or_else(|| bad("missing vectors"))?;
        let mut slots: Vec<Option<DVector<C64>>> = vec![None; obj.len()];
        for (k, amps) in obj {
            let idx: usize = k.parse().map_err(|_| bad("vertex keys must be integers"))?;
            if idx == 0 || idx > slots.len() {
                return Err(bad("vertex keys must be 1..=|V|"));
            }
            let amps = amps.as_array().ok_or_else(|| bad("vector must be an array"))?;
            let zs: Option<Vec<C64>> = amps
                .iter()
                .map(|p| Some(C64::new(p.get(0)?.as_f64()?, p.get(1)?.as_f64()?)))
                .collect();
            slots[idx - 1] = Some(DVector::from_vec(zs.ok_or_else(|| bad("amplitudes are [re, im]"))?));
        }
        let vectors: Option<Vec<_>> = slots.into_iter().collect();
        Self::new(d, vectors.ok_or_else(|| bad("duplicate vertex keys"))?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Number of vectors differs from the graph order.
    Coverage { vectors: usize, order: usize },
    NotUnit { v: usize, norm: f64 },
    /// Adjacent pair with nonzero inner product.
    NotOrthogonal { u: usize, v: usize, overlap: f64 },
    /// Non-adjacent pair with zero inner product.
    NotFaithful { u: usize, v: usize },
    /// Non-adjacent pair mapped to the same ray.
    Duplicate { u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl Verification {
    /// Unit norms and orthogonality on edges hold; faithfulness may not.
    pub fn is_orthogonal(&self) -> bool {
        self.violations.iter().all(|v| {
            matches!(v, Violation::NotFaithful { .. } | Violation::Duplicate { .. })
        })
    }

    pub fn is_faithful(&self) -> bool {
        self.ok
    }
}

pub fn verify_for(rep: &OrthogonalRepresentation, g: &Graph) -> Verification {
    verify_for_tol(rep, g, REP_TOL)
}

pub fn verify_for_tol(rep: &OrthogonalRepresentation, g: &Graph, tol: f64) -> Verification {
    let mut out = Vec::new();
    if rep.order() != g.order() {
        out.push(Violation::Coverage { vectors: rep.order(), order: g.order() });
        return Verification { ok: false, violations: out };
    }
    for v in g.vertices() {
        let norm = rep.vector(v).norm();
        if (norm - 1.0).abs() > tol {
            out.push(Violation::NotUnit { v, norm });
        }
    }
    for u in g.vertices() {
        for v in (u + 1)..=g.order() {
            let ip = rep.inner(u, v).norm();
            if g.has_edge(u, v) {
                if ip >= tol {
                    out.push(Violation::NotOrthogonal { u, v, overlap: ip * ip });
                }
            } else if ip <= tol {
                out.push(Violation::NotFaithful { u, v });
            } else if ip >= 1.0 - tol {
                out.push(Violation::Duplicate { u, v });
            }
        }
    }
    Verification { ok: out.is_empty(), violations: out }
}

/// Smallest `|<u, v>|^2` over non-adjacent distinct pairs; 1 if there are none.
pub fn representation_payoff(rep: &OrthogonalRepresentation, g: &Graph) -> f64 {
    let mut best = 1.0f64;
    for u in g.vertices() {
        for v in (u + 1)..=g.order() {
            if !g.has_edge(u, v) {
                best = best.min(rep.overlap(u, v));
            }
        }
    }
    best
}
