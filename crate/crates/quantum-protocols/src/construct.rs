use crate::linalg::{project_out, project_to_constraints, random_matrix};
use crate::mub::mub_bases;
use crate::rep::{verify_for, OrthogonalRepresentation};
use crate::{QuantumError, C64};
use graph_core::{CliqueSet, Graph};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CONSTRUCT_SEED: u64 = 0x0f0e_0d0c;
const FALLBACK_ATTEMPTS: u64 = 16;

/// Graph is exactly the vertex-disjoint union of the given cliques.
pub fn is_disjoint_cliques(g: &Graph, cs: &CliqueSet) -> bool {
    let mut seen = vec![false; g.order() + 1];
    for c in &cs.cliques {
        for &v in c {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    seen[1..].iter().all(|&s| s)
        && g.edge_count() == cs.count() * cs.omega * (cs.omega.saturating_sub(1)) / 2
}

/// `D R` with `D = diag(e^{i j phi})`, `phi` the golden angle, and `R` a
/// product of Givens rotations over every coordinate pair with irrational
/// angles.
pub fn generic_unitary(d: usize) -> DMatrix<C64> {
    let phi = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut r = DMatrix::<C64>::identity(d, d);
    let mut k = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            k += 1.0;
            let (s, c) = (phi * k + 2f64.sqrt()).sin_cos();
            let mut giv = DMatrix::<C64>::identity(d, d);
            giv[(i, i)] = C64::new(c, 0.0);
            giv[(i, j)] = C64::new(-s, 0.0);
            giv[(j, i)] = C64::new(s, 0.0);
            giv[(j, j)] = C64::new(c, 0.0);
            r = giv * r;
        }
    }
    let diag = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::from_polar(1.0, phi * i as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    diag * r
}

fn disjoint_family(g: &Graph, cs: &CliqueSet, d: usize) -> OrthogonalRepresentation {
    let mut vectors = vec![DVector::zeros(d); g.order()];
    match mub_bases(d).filter(|b| b.len() >= cs.count()) {
        Some(bases) => {
            for (k, c) in cs.cliques.iter().enumerate() {
                for (a, &v) in c.iter().enumerate() {
                    vectors[v - 1] = bases[k][a].clone();
                }
            }
        }
        None => {
            let u = generic_unitary(d);
            let mut pow = DMatrix::<C64>::identity(d, d);
            for c in &cs.cliques {
                for (a, &v) in c.iter().enumerate() {
                    vectors[v - 1] = pow.column(a).clone_owned();
                }
                pow = &u * pow;
            }
        }
    }
    OrthogonalRepresentation { d, vectors }
}

/// Vertices clique by clique, then any vertex outside every clique.
fn greedy_order(g: &Graph, cs: &CliqueSet) -> Vec<usize> {
    let mut seen = vec![false; g.order() + 1];
    let mut order = Vec::new();
    for &v in cs.cliques.iter().flatten().chain(g.vertices().collect::<Vec<_>>().iter()) {
        if !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    }
    order
}

/// Random vectors made orthogonal to their already placed neighbours.
fn greedy(g: &Graph, cs: &CliqueSet, d: usize) -> Option<OrthogonalRepresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(CONSTRUCT_SEED);
    let raw = random_matrix(&mut rng, d, g.order());
    let mut vectors: Vec<Option<DVector<C64>>> = vec![None; g.order()];
    for v in greedy_order(g, cs) {
        let placed: Vec<DVector<C64>> =
            g.neighbours(v).iter().filter_map(|&u| vectors[u - 1].clone()).collect();
        let w = project_out(&raw.column(v - 1).clone_owned(), &placed);
        let n = w.norm();
        if n < 1e-6 {
            return None;
        }
        vectors[v - 1] = Some(w.unscale(n));
    }
    Some(OrthogonalRepresentation { d, vectors: vectors.into_iter().collect::<Option<_>>()? })
}

/// 0-based edge list.
pub(crate) fn edges0(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().into_iter().map(|(u, v)| (u - 1, v - 1)).collect()
}

pub(crate) fn repaired_random(
    g: &Graph,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Option<OrthogonalRepresentation> {
    let mut x = random_matrix(rng, d, g.order());
    project_to_constraints(&mut x, &edges0(g), 60).then(|| OrthogonalRepresentation::from_columns(&x))
}

/// A faithful orthogonal representation of `g` in `C^d`.
///
/// Disjoint cliques take mutually unbiased bases when enough exist and
/// powers of [`generic_unitary`] otherwise. Other graphs are built greedily,
/// each new vector orthogonal to its placed neighbours. If that does not
/// verify, random starts are projected onto the constraints. Only verified
/// representations are returned.
pub fn construct_for(g: &Graph, cs: &CliqueSet, d: usize) -> Result<OrthogonalRepresentation, QuantumError> {
    if d < cs.omega {
        return Err(QuantumError::InvalidParams(format!("d = {d} is below omega = {}", cs.omega)));
    }
    let first = if is_disjoint_cliques(g, cs) {
        Some(disjoint_family(g, cs, d))
    } else {
        greedy(g, cs, d)
    };
    if let Some(rep) = first.filter(|r| verify_for(r, g).ok) {
        return Ok(rep);
    }
    for attempt in 0..FALLBACK_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(CONSTRUCT_SEED);
        rng.set_stream(attempt + 1);
        if let Some(rep) = repaired_random(g, d, &mut rng).filter(|r| verify_for(r, g).ok) {
            return Ok(rep);
        }
    }
    Err(QuantumError::ConstructionFailed(format!(
        "no faithful representation found in dimension {d}"
    )))
}
