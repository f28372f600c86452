use crate::{ClassicalError, DeterministicStrategy, DEFAULT_NODE_CAP};
use relation::{Relation, Tuple};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// All permutations of `0..omega` in the order of their 0/1 block matrices
/// (row by row, lexicographic).
pub fn permutation_order(omega: usize) -> Vec<Vec<usize>> {
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..omega).collect();
    heap_permute(&mut p, omega, &mut perms);
    let key = |p: &Vec<usize>| -> Vec<u8> {
        p.iter().flat_map(|&img| (0..omega).map(move |c| (c == img) as u8)).collect()
    };
    perms.sort_by_key(key);
    perms
}

fn heap_permute(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(p, k - 1, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        p.swap(j, k - 1);
    }
}

/// Whether `sigma_y` is compatible with every already fixed `sigma_x`.
fn compatible(rel: &Relation, fixed: &[Vec<usize>], cand: &[usize]) -> bool {
    let y = fixed.len() + 1;
    fixed.iter().enumerate().all(|(xi, px)| {
        let x = xi + 1;
        (0..cand.len()).all(|msg| {
            rel.contains(Tuple::new(x, px[msg], y, cand[msg]))
                && rel.contains(Tuple::new(y, cand[msg], x, px[msg]))
        })
    })
}

struct Search<'a> {
    rel: &'a Relation,
    order: &'a [Vec<usize>],
    nodes: usize,
    cap: usize,
}

impl Search<'_> {
    /// Depth-first extension of `fixed`; `visit` returns false to stop.
    fn run(
        &mut self,
        fixed: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
    ) -> Result<bool, ClassicalError> {
        if fixed.len() == self.rel.n() {
            return Ok(visit(fixed));
        }
        for p in self.order {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(ClassicalError::CapExceeded(format!(
                    "permutation search visited more than {} nodes",
                    self.cap
                )));
            }
            if compatible(self.rel, fixed, p) {
                fixed.push(p.clone());
                let go_on = self.run(fixed, visit)?;
                fixed.pop();
                if !go_on {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// First compatible tuple of permutations with `sigma_1 = id`.
pub fn ccr_perms(rel: &Relation) -> Result<Vec<Vec<usize>>, ClassicalError> {
    let order = permutation_order(rel.omega());
    let mut s = Search { rel, order: &order, nodes: 0, cap: DEFAULT_NODE_CAP };
    let mut found = None;
    let mut fixed = vec![(0..rel.omega()).collect::<Vec<_>>()];
    s.run(&mut fixed, &mut |p| {
        found = Some(p.to_vec());
        false
    })?;
    found.ok_or_else(|| {
        ClassicalError::SearchExhausted("no omega-message T0 strategy exists".into())
    })
}

/// Deterministic strategy with `omega` messages satisfying T0.
pub fn ccr_protocol(rel: &Relation) -> Result<DeterministicStrategy, ClassicalError> {
    Ok(DeterministicStrategy::from_perms(&ccr_perms(rel)?))
}

fn enumerate_under(
    rel: &Relation,
    order: &[Vec<usize>],
    prefix: Vec<Vec<usize>>,
    cap: usize,
) -> Result<Vec<Vec<Vec<usize>>>, ClassicalError> {
    let mut s = Search { rel, order, nodes: 0, cap };
    let mut out = Vec::new();
    let mut fixed = prefix;
    s.run(&mut fixed, &mut |p| {
        out.push(p.to_vec());
        true
    })?;
    Ok(out)
}

fn second_level(rel: &Relation, order: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let id: Vec<usize> = (0..rel.omega()).collect();
    if rel.n() == 1 {
        return vec![vec![id]];
    }
    order
        .iter()
        .filter(|p| compatible(rel, std::slice::from_ref(&id), p))
        .map(|p| vec![id.clone(), p.clone()])
        .collect()
}

pub fn enumerate_t0_perms_seq(rel: &Relation, cap: usize) -> Result<Vec<Vec<Vec<usize>>>, ClassicalError> {
    let order = permutation_order(rel.omega());
    let mut out = Vec::new();
    for prefix in second_level(rel, &order) {
        out.extend(enumerate_under(rel, &order, prefix, cap)?);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
pub fn enumerate_t0_perms_par(rel: &Relation, cap: usize) -> Result<Vec<Vec<Vec<usize>>>, ClassicalError> {
    let order = permutation_order(rel.omega());
    let parts: Result<Vec<_>, _> = second_level(rel, &order)
        .into_par_iter()
        .map(|prefix| enumerate_under(rel, &order, prefix, cap))
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

/// Every T0 permutation tuple with `sigma_1 = id`, in search order.
pub fn enumerate_t0_perms(rel: &Relation, cap: usize) -> Result<Vec<Vec<Vec<usize>>>, ClassicalError> {
    #[cfg(feature = "parallel")]
    {
        enumerate_t0_perms_par(rel, cap)
    }
    #[cfg(not(feature = "parallel"))]
    {
        enumerate_t0_perms_seq(rel, cap)
    }
}

/// All deterministic `m = omega` strategies satisfying T0, one per distinct table.
///
/// With `omega` messages each clique is encoded bijectively and the diagonal
/// block forces the decoder, so such strategies are exactly the compatible
/// permutation tuples normalised by `sigma_1 = id`.
pub fn enumerate_t0_strategies(
    rel: &Relation,
    m: usize,
    cap: usize,
) -> Result<Vec<DeterministicStrategy>, ClassicalError> {
    if m != rel.omega() {
        return Err(ClassicalError::InvalidParams(format!(
            "enumeration needs m = omega = {} (got {m})",
            rel.omega()
        )));
    }
    Ok(enumerate_t0_perms(rel, cap)?
        .iter()
        .map(|p| DeterministicStrategy::from_perms(p))
        .collect())
}
