use crate::construct::is_disjoint_cliques;
use crate::{QuantumError, C64, REP_TOL};
use graph_core::{enumerate_maximum_cliques, is_prime, Graph};
use nalgebra::DVector;
use prob_model::{payoff, FloatTable};
use relation::Relation;
use std::f64::consts::PI;

type Basis = Vec<DVector<C64>>;

/// A complete set of mutually unbiased bases, standard basis first.
///
/// `d = 2` gives Z, X, Y; an odd prime `d` gives the `d + 1` quadratic-phase
/// bases; `d = 1` the single trivial basis. Other dimensions return `None`.
pub fn mub_bases(d: usize) -> Option<Vec<Basis>> {
    let std: Basis = (0..d)
        .map(|i| DVector::from_fn(d, |k, _| C64::new((k == i) as u8 as f64, 0.0)))
        .collect();
    match d {
        0 => None,
        1 => Some(vec![std]),
        2 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let v = |a: C64, b: C64| DVector::from_vec(vec![a, b]);
            let (one, i) = (C64::new(h, 0.0), C64::new(0.0, h));
            Some(vec![
                std,
                vec![v(one, one), v(one, -one)],
                vec![v(one, i), v(one, -i)],
            ])
        }
        p if is_prime(p) => {
            let norm = 1.0 / (p as f64).sqrt();
            let mut out = vec![std];
            for a in 0..p {
                out.push(
                    (0..p)
                        .map(|b| {
                            DVector::from_fn(p, |j, _| {
                                let phase = 2.0 * PI * ((a * j * j + b * j) % p) as f64 / p as f64;
                                C64::from_polar(norm, phase)
                            })
                        })
                        .collect(),
                );
            }
            Some(out)
        }
        _ => None,
    }
}

fn check_orthonormal(b: &Basis, d: usize, tol: f64) -> Result<(), QuantumError> {
    if b.len() != d || b.iter().any(|v| v.len() != d) {
        return Err(QuantumError::NotOrthonormal(format!("expected {d} vectors of length {d}")));
    }
    for i in 0..d {
        for j in 0..d {
            let want = if i == j { 1.0 } else { 0.0 };
            if (b[i].dotc(&b[j]).norm() - want).abs() > tol {
                return Err(QuantumError::NotOrthonormal(format!("entries {i}, {j}")));
            }
        }
    }
    Ok(())
}

/// Whether every pair of bases is mutually unbiased.
pub fn check_mub(bases: &[Basis], d: usize) -> Result<bool, QuantumError> {
    check_mub_tol(bases, d, REP_TOL)
}

pub fn check_mub_tol(bases: &[Basis], d: usize, tol: f64) -> Result<bool, QuantumError> {
    for b in bases {
        check_orthonormal(b, d, tol)?;
    }
    let target = 1.0 / d as f64;
    for (i, b1) in bases.iter().enumerate() {
        for b2 in &bases[i + 1..] {
            for u in b1 {
                for v in b2 {
                    if (u.dotc(v).norm_sqr() - target).abs() > tol {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MubCertificate {
    pub detected: bool,
    pub payoff: f64,
    /// `1 / eta`, equal to `1 / omega` whenever there are two or more cliques.
    pub target: f64,
}

/// On a disjoint union of cliques, a table from an `omega`-dimensional
/// strategy reaching payoff `1 / eta` must come from mutually unbiased
/// measurement bases.
pub fn mub_certificate(
    table: &FloatTable,
    rel: &Relation,
    g: &Graph,
) -> Result<MubCertificate, QuantumError> {
    let cs = enumerate_maximum_cliques(g).map_err(|e| QuantumError::WrongFamily(e.to_string()))?;
    if !is_disjoint_cliques(g, &cs) || cs.count() != rel.n() || cs.omega != rel.omega() {
        return Err(QuantumError::WrongFamily("expected a disjoint union of the relation's cliques".into()));
    }
    let p = payoff(table, rel)?;
    let target = 1.0 / p.eta as f64;
    Ok(MubCertificate { detected: (p.value - target).abs() <= REP_TOL, payoff: p.value, target })
}
