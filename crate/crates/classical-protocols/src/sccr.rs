use crate::strategy::one_hot;
use crate::{ClassicalError, DeterministicStrategy};
use graph_core::{check_conditions, CliqueSet, Graph};
use num_rational::Rational64;
use num_traits::Zero;
use relation::Relation;

/// Protocol where Alice sends the selected vertex, Bob answers uniformly
/// over the labels valid for it.
pub fn sccr_protocol(
    g: &Graph,
    cliques: &CliqueSet,
    rel: &Relation,
) -> Result<DeterministicStrategy, ClassicalError> {
    let c = check_conditions(g, cliques);
    if !c.g0 || !c.g1 {
        return Err(ClassicalError::ConditionsFail(format!("G0={} G1={}", c.g0, c.g1)));
    }
    let (n, w) = (cliques.count(), cliques.omega);
    let m = g.order();
    let mut encoder = vec![0; n * w];
    let mut decoder = vec![vec![one_hot(w, 0); n]; m];
    for x in 1..=n {
        for a in 0..w {
            let msg = cliques.vertex(x, a) - 1;
            encoder[(x - 1) * w + a] = msg;
            for y in 1..=n {
                let valid = rel.valid(x, a, y);
                let p = Rational64::new(1, valid.len() as i64);
                let mut dist = vec![Rational64::zero(); w];
                for b in valid {
                    dist[b] = p;
                }
                decoder[msg][y - 1] = dist;
            }
        }
    }
    Ok(DeterministicStrategy { n, omega: w, m, encoder, decoder })
}
