//! Prepare-and-measure rounds with uniform inputs, the reconstructor that
//! reads the relation off the observed tuples, and exact and Monte-Carlo
//! probabilities that reconstruction succeeds after `k` rounds.

use prob_model::{check_t0, Entry, ProbError, ProbTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relation::{infer_graph, Inferred, Relation, Tuple};
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Recorded in every log so runs can be replayed bit for bit.
pub const GENERATOR: &str = "rand_chacha::ChaCha8Rng seed_from_u64(seed) + set_stream(stream)";
/// Largest relation handled by the inclusion-exclusion sum.
pub const GAMMA_CAP: usize = 20;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("table rows do not sum to 1")]
    NotNormalized,
    #[error("table puts mass outside the relation")]
    NotT0,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("empty log")]
    EmptyLog,
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Per-row cumulative distributions of a normalized table.
#[derive(Debug, Clone)]
pub struct Sampler {
    n: usize,
    omega: usize,
    cumulative: Vec<Vec<f64>>,
}

impl Sampler {
    pub fn new<T: Entry>(table: &ProbTable<T>) -> Result<Self, SimError> {
        if !table.is_normalized(1e-9) {
            return Err(SimError::NotNormalized);
        }
        let (n, omega) = (table.n(), table.omega());
        let mut cumulative = Vec::with_capacity(n * omega * n);
        for x in 1..=n {
            for a in 0..omega {
                let row = table.row(x, a);
                for y in 0..n {
                    let mut acc = 0.0;
                    cumulative.push(
                        row[y * omega..(y + 1) * omega]
                            .iter()
                            .map(|p| {
                                acc += p.to_f64();
                                acc
                            })
                            .collect(),
                    );
                }
            }
        }
        Ok(Sampler { n, omega, cumulative })
    }

    /// Uniform `(C_x, a, C_y)`, then `b` from the table row.
    pub fn round<R: Rng>(&self, rng: &mut R) -> Tuple {
        let x = rng.random_range(1..=self.n);
        let a = rng.random_range(0..self.omega);
        let y = rng.random_range(1..=self.n);
        let cum = &self.cumulative[((x - 1) * self.omega + a) * self.n + y - 1];
        let u: f64 = rng.random::<f64>() * cum[self.omega - 1];
        let b = cum.iter().position(|&c| u < c).unwrap_or(self.omega - 1);
        Tuple::new(x, a, y, b)
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLog {
    pub n: usize,
    pub omega: usize,
    pub seed: u64,
    pub stream: u64,
    pub generator: &'static str,
    pub rounds: Vec<Tuple>,
}

#[derive(Serialize)]
struct CsvRound {
    round: usize,
    x: usize,
    a: usize,
    y: usize,
    b: usize,
}

impl RunLog {
    pub fn k(&self) -> usize {
        self.rounds.len()
    }

    /// Columns `round,x,a,y,b`, rounds numbered from 1.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SimError> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        wr.write_record(["round", "x", "a", "y", "b"])?;
        for (i, t) in self.rounds.iter().enumerate() {
            wr.serialize(CsvRound { round: i + 1, x: t.x, a: t.a, y: t.y, b: t.b })?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn simulate_rounds<T: Entry>(table: &ProbTable<T>, k: usize, seed: u64) -> Result<RunLog, SimError> {
    simulate_rounds_stream(table, k, seed, 0)
}

pub fn simulate_rounds_stream<T: Entry>(
    table: &ProbTable<T>,
    k: usize,
    seed: u64,
    stream: u64,
) -> Result<RunLog, SimError> {
    let s = Sampler::new(table)?;
    let mut rng = trial_rng(seed, stream);
    Ok(RunLog {
        n: table.n(),
        omega: table.omega(),
        seed,
        stream,
        generator: GENERATOR,
        rounds: (0..k).map(|_| s.round(&mut rng)).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    /// Support of the observed tuples.
    pub estimate: Relation,
    /// Every `(C_x, a, C_y)` occurred at least once.
    pub inputs_covered: bool,
    pub success: bool,
    /// Graph read off the estimate when it is total.
    pub inferred: Option<Inferred>,
}

/// Success means the observed support equals `truth` and every input
/// triple was seen.
pub fn reconstruct(log: &RunLog, truth: &Relation) -> Result<ReconstructionResult, SimError> {
    if log.rounds.is_empty() {
        return Err(SimError::EmptyLog);
    }
    let estimate = Relation::from_tuples(log.n, log.omega, log.rounds.iter().copied())
        .map_err(|e| ProbError::Malformed(e.to_string()))?;
    let inputs_covered = estimate.is_total();
    let success = inputs_covered && estimate == *truth;
    let inferred = if inputs_covered { infer_graph(&estimate).ok() } else { None };
    Ok(ReconstructionResult { estimate, inputs_covered, success, inferred })
}

/// Per-round probability of each in-relation tuple: `P(b|x,a,y) / (n^2 omega)`.
fn tuple_probs<T: Entry>(table: &ProbTable<T>, rel: &Relation) -> Vec<f64> {
    let scale = (rel.n() * rel.n() * rel.omega()) as f64;
    rel.tuples().map(|t| table.get(t).to_f64() / scale).collect()
}

/// Probability that `k` rounds show every tuple of `rel`, by inclusion-exclusion
/// `sum_S (-1)^|S| (1 - p(S))^k` over subsets of the relation.
pub fn success_prob_exact<T: Entry>(table: &ProbTable<T>, rel: &Relation, k: u64) -> Result<f64, SimError> {
    if rel.gamma() > GAMMA_CAP {
        return Err(SimError::CapExceeded(format!(
            "relation has {} tuples, limit {GAMMA_CAP}",
            rel.gamma()
        )));
    }
    if !check_t0(table, rel)?.ok {
        return Err(SimError::NotT0);
    }
    if rel.tuples().any(|t| table.get(t).is_zero_tol(prob_model::DEFAULT_TOL)) {
        return Ok(0.0);
    }
    let p = tuple_probs(table, rel);
    let g = p.len();
    let mut sums = vec![0.0f64; 1 << g];
    let mut total = 0.0;
    for mask in 0usize..(1 << g) {
        if mask > 0 {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + p[low];
        }
        let term = (1.0 - sums[mask]).max(0.0).powi(k.min(i32::MAX as u64) as i32);
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub trials: usize,
    pub successes: usize,
    pub p: f64,
    /// `sqrt(p (1 - p) / trials)` from the estimate itself.
    pub stderr: f64,
}

fn one_trial(s: &Sampler, rel: &Relation, k: u64, seed: u64, trial: u64) -> bool {
    let mut rng = trial_rng(seed, trial);
    let (n, w) = (rel.n(), rel.omega());
    let idx = |t: Tuple| (((t.x - 1) * w + t.a) * n + t.y - 1) * w + t.b;
    let mut seen = vec![false; n * w * n * w];
    let mut missing = rel.gamma();
    let mut stray = false;
    for _ in 0..k {
        let t = s.round(&mut rng);
        let i = idx(t);
        if !seen[i] {
            seen[i] = true;
            if rel.contains(t) {
                missing -= 1;
            } else {
                stray = true;
            }
        }
    }
    // a total relation is fully seen only if every input triple was seen
    missing == 0 && !stray && rel.is_total()
}

fn estimate(trials: usize, successes: usize) -> McEstimate {
    let p = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
    let stderr = if trials == 0 { 0.0 } else { (p * (1.0 - p) / trials as f64).sqrt() };
    McEstimate { trials, successes, p, stderr }
}

/// Fraction of `trials` independent `k`-round runs that reconstruct `rel`.
/// Trial `i` draws from stream `i` of `seed`.
pub fn success_prob_mc<T: Entry>(
    table: &ProbTable<T>,
    rel: &Relation,
    k: u64,
    trials: usize,
    seed: u64,
) -> Result<McEstimate, SimError> {
    #[cfg(feature = "parallel")]
    {
        success_prob_mc_par(table, rel, k, trials, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        success_prob_mc_seq(table, rel, k, trials, seed)
    }
}

pub fn success_prob_mc_seq<T: Entry>(
    table: &ProbTable<T>,
    rel: &Relation,
    k: u64,
    trials: usize,
    seed: u64,
) -> Result<McEstimate, SimError> {
    let s = Sampler::new(table)?;
    let hits = (0..trials as u64).filter(|&i| one_trial(&s, rel, k, seed, i)).count();
    Ok(estimate(trials, hits))
}

#[cfg(feature = "parallel")]
pub fn success_prob_mc_par<T: Entry>(
    table: &ProbTable<T>,
    rel: &Relation,
    k: u64,
    trials: usize,
    seed: u64,
) -> Result<McEstimate, SimError> {
    let s = Sampler::new(table)?;
    let hits = (0..trials as u64).into_par_iter().filter(|&i| one_trial(&s, rel, k, seed, i)).count();
    Ok(estimate(trials, hits))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub k: u64,
    pub p_exact: f64,
    pub p_mc: Option<f64>,
    pub stderr: Option<f64>,
}

/// Exact success probability over `k_grid`, with a Monte-Carlo column when
/// `trials > 0`.
pub fn payoff_vs_rounds_report<T: Entry>(
    table: &ProbTable<T>,
    rel: &Relation,
    k_grid: &[u64],
    trials: usize,
    seed: u64,
) -> Result<Vec<ReportRow>, SimError> {
    k_grid
        .iter()
        .map(|&k| {
            let p_exact = success_prob_exact(table, rel, k)?;
            let mc = if trials > 0 { Some(success_prob_mc(table, rel, k, trials, seed)?) } else { None };
            Ok(ReportRow {
                k,
                p_exact,
                p_mc: mc.as_ref().map(|m| m.p),
                stderr: mc.as_ref().map(|m| m.stderr),
            })
        })
        .collect()
}

/// Columns `k,P_exact,P_mc,stderr`; the last two are empty without trials.
pub fn write_report_csv<W: Write>(rows: &[ReportRow], w: W) -> Result<(), SimError> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(["k", "P_exact", "P_mc", "stderr"])?;
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}
