use crate::ccr::{ccr_perms, enumerate_t0_perms};
use crate::oa::{find_oa, min_oa_rows_capped, DEFAULT_OA_CAP};
use crate::{ClassicalError, DeterministicStrategy, PublicCoinMixture, DEFAULT_NODE_CAP};
use prob_model::check_t1;
use relation::Relation;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

type Perms = Vec<Vec<usize>>;

fn mixture_of(perms: &[Perms]) -> PublicCoinMixture {
    PublicCoinMixture::uniform(perms.iter().map(|p| DeterministicStrategy::from_perms(p)).collect())
}

/// Per in-relation tuple, whether the permutation strategy outputs it.
fn hits(rel: &Relation, p: &Perms) -> Vec<bool> {
    rel.tuples()
        .map(|t| {
            let msg = p[t.x - 1].iter().position(|&l| l == t.a).unwrap();
            p[t.y - 1][msg] == t.b
        })
        .collect()
}

/// Public-coin mixture meeting T0 and T1.
///
/// Starts from the CCR strategy and, for each clique `C_i` with `i >= 2`,
/// adds the first T0 strategy that differs from it only on `C_i`. Tuples
/// still missing after that are covered greedily.
pub fn mixture_for_t1(rel: &Relation) -> Result<PublicCoinMixture, ClassicalError> {
    let base = ccr_perms(rel)?;
    let all = enumerate_t0_perms(rel, DEFAULT_NODE_CAP)?;
    let mut chosen = vec![base.clone()];
    for i in 1..rel.n() {
        let flip = all.iter().find(|p| {
            p[i] != base[i] && (0..rel.n()).all(|j| j == i || p[j] == base[j])
        });
        if let Some(p) = flip {
            chosen.push(p.clone());
        }
    }
    let mut covered: Vec<bool> = hits(rel, &base);
    for p in &chosen[1..] {
        for (c, h) in covered.iter_mut().zip(hits(rel, p)) {
            *c |= h;
        }
    }
    while covered.iter().any(|c| !c) {
        let best = all
            .iter()
            .map(|p| {
                let gain = hits(rel, p).iter().zip(&covered).filter(|(h, c)| **h && !**c).count();
                (gain, p)
            })
            .filter(|(gain, _)| *gain > 0)
            .fold(None, |acc: Option<(usize, &Perms)>, (g, p)| match acc {
                Some((bg, _)) if bg >= g => acc,
                _ => Some((g, p)),
            });
        let Some((_, p)) = best else {
            return Err(ClassicalError::SearchExhausted(
                "T0 strategies cannot cover the relation".into(),
            ));
        };
        for (c, h) in covered.iter_mut().zip(hits(rel, p)) {
            *c |= h;
        }
        chosen.push(p.clone());
    }
    let mix = mixture_of(&chosen);
    debug_assert!(check_t1(&mix.table(), rel).map(|c| c.ok).unwrap_or(false));
    Ok(mix)
}

#[derive(Debug, Clone)]
pub struct T2Mixture {
    pub mixture: PublicCoinMixture,
    /// `T_{n-1}` (2 for `n = 2`) when the strategies have binary structure.
    pub oa_lower_bound: Option<usize>,
    pub via_oa: bool,
}

/// Choices of `sigma_j` per clique when every clique admits exactly two and
/// all combinations occur.
fn binary_options(n: usize, all: &[Perms]) -> Option<Vec<[Vec<usize>; 2]>> {
    let mut opts = Vec::new();
    for j in 1..n {
        let mut seen: Vec<&Vec<usize>> = Vec::new();
        for p in all {
            if !seen.contains(&&p[j]) {
                seen.push(&p[j]);
            }
        }
        if seen.len() != 2 {
            return None;
        }
        opts.push([seen[0].clone(), seen[1].clone()]);
    }
    (all.len() == 1 << (n - 1)).then_some(opts)
}

fn is_t2(rel: &Relation, tables: &[Vec<bool>], pick: &[usize]) -> bool {
    let n_pick = pick.len();
    let eta = rel.eta();
    if !n_pick.is_multiple_of(eta) {
        return false;
    }
    (0..rel.gamma()).all(|t| pick.iter().filter(|&&i| tables[i][t]).count() * eta >= n_pick)
        && (0..rel.gamma()).any(|t| pick.iter().filter(|&&i| tables[i][t]).count() * eta == n_pick)
}

/// Smallest uniform multiset of T0 strategies meeting T2, via OA rows when
/// the strategies are binary, otherwise by increasing-size search.
pub fn mixture_for_t2(rel: &Relation) -> Result<T2Mixture, ClassicalError> {
    let all = enumerate_t0_perms(rel, DEFAULT_NODE_CAP)?;
    if all.is_empty() {
        return Err(ClassicalError::SearchExhausted("no T0 strategy".into()));
    }
    let n = rel.n();
    if n == 1 {
        return Ok(T2Mixture { mixture: mixture_of(&all[..1]), oa_lower_bound: None, via_oa: false });
    }
    if let Some(opts) = binary_options(n, &all) {
        let k = n - 1;
        let t_k = min_oa_rows_capped(k, DEFAULT_OA_CAP)?;
        let arr = find_oa(t_k, k).expect("T_k rows admit an array");
        let id: Vec<usize> = (0..rel.omega()).collect();
        let picks: Vec<Perms> = arr
            .rows
            .iter()
            .map(|row| {
                std::iter::once(id.clone())
                    .chain(row.iter().zip(&opts).map(|(&bit, o)| o[bit as usize].clone()))
                    .collect()
            })
            .collect();
        let tables: Vec<Vec<bool>> = picks.iter().map(|p| hits(rel, p)).collect();
        let idx: Vec<usize> = (0..picks.len()).collect();
        if is_t2(rel, &tables, &idx) {
            return Ok(T2Mixture {
                mixture: mixture_of(&picks),
                oa_lower_bound: Some(t_k),
                via_oa: true,
            });
        }
        let found = mixture_for_t2_generic(rel, &all, DEFAULT_GENERIC_CAP)?;
        return Ok(T2Mixture { mixture: found, oa_lower_bound: Some(t_k), via_oa: false });
    }
    let found = mixture_for_t2_generic(rel, &all, DEFAULT_GENERIC_CAP)?;
    Ok(T2Mixture { mixture: found, oa_lower_bound: None, via_oa: false })
}

pub const DEFAULT_GENERIC_CAP: u64 = 5_000_000;

fn multisets(s: usize, size: usize) -> u64 {
    // C(s + size - 1, size)
    let mut acc: u64 = 1;
    for i in 0..size as u64 {
        acc = acc.saturating_mul(s as u64 + i) / (i + 1);
    }
    acc
}

fn search_from(rel: &Relation, tables: &[Vec<bool>], pick: &mut Vec<usize>, size: usize) -> bool {
    if pick.len() == size {
        return is_t2(rel, tables, pick);
    }
    let from = *pick.last().unwrap_or(&0);
    for i in from..tables.len() {
        pick.push(i);
        if search_from(rel, tables, pick, size) {
            return true;
        }
        pick.pop();
    }
    false
}

fn first_of_size(rel: &Relation, tables: &[Vec<bool>], size: usize) -> Option<Vec<usize>> {
    let run = |first: usize| {
        let mut pick = vec![first];
        search_from(rel, tables, &mut pick, size).then_some(pick)
    };
    #[cfg(feature = "parallel")]
    {
        (0..tables.len()).into_par_iter().find_map_first(run)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..tables.len()).find_map(run)
    }
}

/// Increasing-size search over uniform multisets of the given strategies.
pub fn mixture_for_t2_generic(
    rel: &Relation,
    all: &[Perms],
    cap: u64,
) -> Result<PublicCoinMixture, ClassicalError> {
    let tables: Vec<Vec<bool>> = all.iter().map(|p| hits(rel, p)).collect();
    for size in 1.. {
        if multisets(all.len(), size) > cap {
            return Err(ClassicalError::CapExceeded(format!(
                "no T2 mixture with at most {} strategies within the search cap",
                size - 1
            )));
        }
        if let Some(pick) = first_of_size(rel, &tables, size) {
            let chosen: Vec<Perms> = pick.iter().map(|&i| all[i].clone()).collect();
            return Ok(mixture_of(&chosen));
        }
    }
    unreachable!()
}
