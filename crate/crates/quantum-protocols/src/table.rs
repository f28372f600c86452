use crate::rep::{verify_for_tol, OrthogonalRepresentation};
use crate::{QuantumError, REP_TOL};
use graph_core::{CliqueSet, Graph};
use prob_model::{check_t0, Entry, FloatTable, ProbError, ProbTable};
use relation::{Relation, Tuple};
use std::fmt;

/// Alice prepares the vector of her selected vertex; Bob measures in the
/// basis spanned by his clique's vectors.
#[derive(Debug, Clone)]
pub struct QuantumStrategy {
    pub rep: OrthogonalRepresentation,
    pub cliques: CliqueSet,
    pub faithful: bool,
}

impl QuantumStrategy {
    /// Requires unit vectors orthogonal on every edge; faithfulness is recorded.
    pub fn new(rep: OrthogonalRepresentation, g: &Graph, cliques: CliqueSet) -> Result<Self, QuantumError> {
        Self::with_tol(rep, g, cliques, REP_TOL)
    }

    pub fn with_tol(
        rep: OrthogonalRepresentation,
        g: &Graph,
        cliques: CliqueSet,
        tol: f64,
    ) -> Result<Self, QuantumError> {
        let check = verify_for_tol(&rep, g, tol);
        if !check.is_orthogonal() {
            return Err(QuantumError::Unverified(format!("{:?}", check.violations)));
        }
        Ok(QuantumStrategy { rep, cliques, faithful: check.ok })
    }
}

/// Born-rule table `|<v(C_x, a), v(C_y, b)>|^2`.
///
/// When `d > omega` Bob's clique vectors do not span the space; the
/// leftover mass goes to the valid label with the largest Born weight
/// (lowest label on ties within `1e-12`).
pub fn quantum_table(s: &QuantumStrategy, rel: &Relation) -> Result<FloatTable, QuantumError> {
    let cs = &s.cliques;
    if cs.count() != rel.n() || cs.omega != rel.omega() {
        return Err(ProbError::DimensionMismatch { tn: cs.count(), tw: cs.omega, rn: rel.n(), rw: rel.omega() }
            .into());
    }
    let w = rel.omega();
    let mut t = ProbTable::zeros(rel.n(), w);
    for x in 1..=rel.n() {
        for a in 0..w {
            let u = cs.vertex(x, a);
            for y in 1..=rel.n() {
                let born: Vec<f64> = (0..w).map(|b| s.rep.overlap(u, cs.vertex(y, b))).collect();
                let residual = (1.0 - born.iter().sum::<f64>()).max(0.0);
                let mut target = None::<usize>;
                for b in rel.valid(x, a, y) {
                    if target.is_none_or(|t| born[b] > born[t] + 1e-12) {
                        target = Some(b);
                    }
                }
                for (b, p) in born.iter().enumerate() {
                    let extra = if Some(b) == target { residual } else { 0.0 };
                    t.set(Tuple::new(x, a, y, b), p + extra);
                }
            }
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessClaim {
    AtLeast(usize),
    NoClaim,
}

impl fmt::Display for WitnessClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessClaim::AtLeast(w) => write!(f, "operational dimension >= {w}"),
            WitnessClaim::NoClaim => write!(f, "no claim"),
        }
    }
}

/// A black-box table meeting T0 certifies a communicated system of
/// dimension at least `omega`.
pub fn dimension_witness<T: Entry>(
    table: &ProbTable<T>,
    rel: &Relation,
    omega: usize,
) -> Result<WitnessClaim, ProbError> {
    Ok(if check_t0(table, rel)?.ok { WitnessClaim::AtLeast(omega) } else { WitnessClaim::NoClaim })
}
