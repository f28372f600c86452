use crate::{CliqueLabel, Relation, RelationError, Tuple};
use graph_core::{CliqueSet, Graph};

/// Graph recovered from a relation, with the `(clique, label)` pairs behind each vertex.
#[derive(Debug, Clone)]
pub struct Inferred {
    pub graph: Graph,
    pub cliques: CliqueSet,
    /// `classes[v - 1]` lists the inputs that colour vertex `v`.
    pub classes: Vec<Vec<CliqueLabel>>,
}

impl Inferred {
    pub fn vertex_of(&self, x: usize, a: usize) -> usize {
        self.cliques.vertex(x, a)
    }
}

fn err(msg: String) -> RelationError {
    RelationError::InconsistentRelation(msg)
}

/// Rebuilds the orthogonality graph from the relation alone.
///
/// Two inputs name the same vertex iff their rows of valid-label sets agree
/// for every `C_y`; vertices are numbered by first occurrence.
pub fn infer_graph(rel: &Relation) -> Result<Inferred, RelationError> {
    let (n, w) = (rel.n(), rel.omega());
    if !rel.is_total() {
        return Err(err("some input pair has no valid output".into()));
    }
    if !rel.has_diagonal_determinism() {
        return Err(err("diagonal block is not deterministic".into()));
    }
    let signature = |x: usize, a: usize| -> Vec<u64> {
        (1..=n).map(|y| rel.valid_mask(x, a, y)).collect()
    };

    let mut sigs: Vec<Vec<u64>> = Vec::new();
    let mut classes: Vec<Vec<CliqueLabel>> = Vec::new();
    let mut vertex = vec![vec![0usize; w]; n];
    for x in 1..=n {
        for a in 0..w {
            let s = signature(x, a);
            let id = match sigs.iter().position(|t| *t == s) {
                Some(i) => i,
                None => {
                    sigs.push(s);
                    classes.push(Vec::new());
                    sigs.len() - 1
                }
            };
            if classes[id].iter().any(|l| l.x == x) {
                return Err(err(format!("two labels of clique {x} collapse to one vertex")));
            }
            classes[id].push(CliqueLabel { x, a });
            vertex[x - 1][a] = id + 1;
        }
    }

    let order = classes.len();
    let mut same_clique = vec![vec![false; order + 1]; order + 1];
    for row in &vertex {
        for &u in row {
            for &v in row {
                same_clique[u][v] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for u in 1..=order {
        for v in (u + 1)..=order {
            if same_clique[u][v] {
                edges.push((u, v));
                continue;
            }
            let mut verdict: Option<bool> = None;
            for p in &classes[u - 1] {
                for s in &classes[v - 1] {
                    let excluded = !rel.contains(Tuple::new(p.x, p.a, s.x, s.a));
                    if verdict.is_some_and(|e| e != excluded) {
                        return Err(err(format!("representatives of {u} and {v} disagree")));
                    }
                    verdict = Some(excluded);
                }
            }
            if verdict == Some(true) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(order, &edges).expect("vertices in range");
    // inferred cliques keep label order, so they are not necessarily ascending
    let cliques = CliqueSet { omega: w, cliques: vertex };
    Ok(Inferred { graph, cliques, classes })
}
