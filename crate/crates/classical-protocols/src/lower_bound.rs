//! Exhaustive support-level search for `m`-message protocols meeting T0 and T1.
//!
//! Only supports matter for T0/T1, so a protocol is a nonempty message set
//! per input plus, per `(message, C_y)`, the set of labels Bob may output.
//! The largest T0-safe output set is the intersection of the valid sets of
//! every input using that message, which is also the best choice for T1.

use crate::ClassicalError;
use graph_core::Graph;
use relation::Relation;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const DEFAULT_VERTEX_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderModel {
    /// One message per input.
    Deterministic,
    /// Private-coin encoder: a set of messages per input.
    Randomized,
}

#[derive(Clone)]
struct State {
    /// message sets chosen so far, one bitmask per input
    chosen: Vec<u32>,
    /// `inter[msg * n + y]`: intersection of valid masks of the message's users
    inter: Vec<u64>,
    used: usize,
}

struct Problem {
    n: usize,
    omega: usize,
    m: usize,
    model: EncoderModel,
    /// `valid[input * n + y]`
    valid: Vec<u64>,
}

impl Problem {
    fn new(rel: &Relation, m: usize, model: EncoderModel) -> Self {
        let (n, w) = (rel.n(), rel.omega());
        let mut valid = Vec::with_capacity(n * w * n);
        for x in 1..=n {
            for a in 0..w {
                for y in 1..=n {
                    valid.push(rel.valid_mask(x, a, y));
                }
            }
        }
        Problem { n, omega: w, m, model, valid }
    }

    fn inputs(&self) -> usize {
        self.n * self.omega
    }

    fn start(&self) -> State {
        State { chosen: Vec::new(), inter: vec![u64::MAX; self.m * self.n], used: 0 }
    }

    /// Canonical candidate message sets for the next input: any subset of the
    /// used messages plus a (possibly empty) run of the lowest unused ones.
    fn candidates(&self, s: &State) -> Vec<u32> {
        let mut out = Vec::new();
        let old_full = (1u32 << s.used) - 1;
        for fresh in 0..=(self.m - s.used) {
            let fresh_mask = ((1u32 << fresh) - 1) << s.used;
            let mut sub = old_full;
            loop {
                let set = sub | fresh_mask;
                let ok = match self.model {
                    EncoderModel::Deterministic => set.count_ones() == 1,
                    EncoderModel::Randomized => set != 0,
                };
                if ok {
                    out.push(set);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & old_full;
            }
        }
        out
    }

    fn apply(&self, s: &State, set: u32) -> Option<State> {
        let i = s.chosen.len();
        let clique = i / self.omega;
        for j in clique * self.omega..i {
            if s.chosen[j] & set != 0 {
                return None;
            }
        }
        let mut t = s.clone();
        for msg in 0..self.m {
            if set >> msg & 1 == 1 {
                for y in 0..self.n {
                    let k = msg * self.n + y;
                    t.inter[k] &= self.valid[i * self.n + y];
                    if t.inter[k] == 0 {
                        return None;
                    }
                }
            }
        }
        t.used = t.used.max(32 - set.leading_zeros() as usize);
        t.chosen.push(set);
        // coverage can only get worse as intersections shrink
        for (j, &sj) in t.chosen.iter().enumerate() {
            for y in 0..self.n {
                let mut cover = 0u64;
                for msg in 0..self.m {
                    if sj >> msg & 1 == 1 {
                        cover |= t.inter[msg * self.n + y];
                    }
                }
                if cover != self.valid[j * self.n + y] {
                    return None;
                }
            }
        }
        Some(t)
    }

    fn solve(&self, s: State) -> Option<Vec<u32>> {
        if s.chosen.len() == self.inputs() {
            return Some(s.chosen);
        }
        self.candidates(&s)
            .into_iter()
            .filter_map(|set| self.apply(&s, set))
            .find_map(|t| self.solve(t))
    }

    fn frontier(&self, depth: usize) -> Vec<State> {
        let mut level = vec![self.start()];
        for _ in 0..depth.min(self.inputs()) {
            level = level
                .iter()
                .flat_map(|s| {
                    self.candidates(s).into_iter().filter_map(move |set| self.apply(s, set))
                })
                .collect();
        }
        level
    }
}

fn guard(g: &Graph, rel: &Relation, m: usize, cap: usize) -> Result<(), ClassicalError> {
    if g.order() > cap {
        return Err(ClassicalError::CapExceeded(format!(
            "exhaustive lower-bound search limited to |V| <= {cap}"
        )));
    }
    if m == 0 || m > 31 {
        return Err(ClassicalError::InvalidParams(format!("message count {m} out of range")));
    }
    if rel.omega() > 64 {
        return Err(ClassicalError::InvalidParams("omega too large".into()));
    }
    Ok(())
}

pub fn find_protocol_seq(
    g: &Graph,
    rel: &Relation,
    m: usize,
    model: EncoderModel,
    cap: usize,
) -> Result<Option<Vec<u32>>, ClassicalError> {
    guard(g, rel, m, cap)?;
    let p = Problem::new(rel, m, model);
    Ok(p.solve(p.start()))
}

#[cfg(feature = "parallel")]
pub fn find_protocol_par(
    g: &Graph,
    rel: &Relation,
    m: usize,
    model: EncoderModel,
    cap: usize,
) -> Result<Option<Vec<u32>>, ClassicalError> {
    guard(g, rel, m, cap)?;
    let p = Problem::new(rel, m, model);
    Ok(p.frontier(2).into_par_iter().find_map_first(|s| p.solve(s)))
}

/// Message sets per input (bit `i` = message `i`) of some `m`-message
/// protocol meeting T0 and T1, or `None` if none exists.
pub fn find_protocol(
    g: &Graph,
    rel: &Relation,
    m: usize,
    model: EncoderModel,
    cap: usize,
) -> Result<Option<Vec<u32>>, ClassicalError> {
    #[cfg(feature = "parallel")]
    {
        find_protocol_par(g, rel, m, model, cap)
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_protocol_seq(g, rel, m, model, cap)
    }
}

/// True iff no `m`-message protocol (with randomized decoding) meets T0 and T1.
pub fn verify_classical_lower_bound(
    g: &Graph,
    rel: &Relation,
    m: usize,
    model: EncoderModel,
) -> Result<bool, ClassicalError> {
    Ok(find_protocol(g, rel, m, model, DEFAULT_VERTEX_CAP)?.is_none())
}
