use crate::construct::{edges0, is_disjoint_cliques};
use crate::linalg::{orthonormalize_columns, project_to_constraints, random_matrix};
use crate::rep::{representation_payoff, verify_for_tol, OrthogonalRepresentation};
use crate::{QuantumError, C64, REP_TOL};
use graph_core::{CliqueSet, Graph};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Verification tolerance for returned representations.
    pub tol: f64,
    /// Stage ends once a step gains less than `conv * tau`.
    pub conv: f64,
    pub max_iter: usize,
    pub tau_start: f64,
    pub tau_end: f64,
    pub anneal: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            restarts: 32,
            seed: 0,
            tol: REP_TOL,
            conv: 1e-8,
            max_iter: 400,
            tau_start: 0.05,
            tau_end: 1e-9,
            anneal: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub rep: OrthogonalRepresentation,
    /// Best min non-edge overlap found; a lower bound on the optimum.
    pub payoff: f64,
    pub best_restart: usize,
    /// `None` where a restart never produced a verified representation.
    pub restart_payoffs: Vec<Option<f64>>,
}

enum Mode {
    /// Graph is a disjoint union of cliques: each clique is a point on a
    /// complex Stiefel manifold.
    Stiefel(Vec<Vec<usize>>),
    /// Unit columns orthogonal on the listed edges.
    Constrained(Vec<(usize, usize)>),
}

struct Problem<'a> {
    g: &'a Graph,
    d: usize,
    pairs: Vec<(usize, usize)>,
    mode: Mode,
}

impl Problem<'_> {
    fn retract(&self, x: &mut DMatrix<C64>) -> bool {
        match &self.mode {
            Mode::Stiefel(cliques) => cliques.iter().all(|c| orthonormalize_columns(x, c)),
            Mode::Constrained(edges) => project_to_constraints(x, edges, 30),
        }
    }

    fn overlaps(&self, x: &DMatrix<C64>) -> Vec<f64> {
        self.pairs.iter().map(|&(u, v)| x.column(u).dotc(&x.column(v)).norm_sqr()).collect()
    }

    fn objective(&self, x: &DMatrix<C64>, tau: f64) -> f64 {
        softmin(&self.overlaps(x), tau).0
    }

    /// Ascent direction of the softmin, projected on the Stiefel tangent
    /// space in the clique case.
    fn gradient(&self, x: &DMatrix<C64>, tau: f64) -> DMatrix<C64> {
        let f = self.overlaps(x);
        let (_, w) = softmin(&f, tau);
        let mut gr = DMatrix::<C64>::zeros(x.nrows(), x.ncols());
        for (&(u, v), &wi) in self.pairs.iter().zip(&w) {
            if wi == 0.0 {
                continue;
            }
            let s = x.column(u).dotc(&x.column(v));
            let xu = x.column(u).clone_owned();
            let xv = x.column(v).clone_owned();
            let mut cu = gr.column_mut(u);
            cu += xv * (s.conj() * 2.0 * wi);
            let mut cv = gr.column_mut(v);
            cv += xu * (s * 2.0 * wi);
        }
        if let Mode::Stiefel(cliques) = &self.mode {
            for c in cliques {
                let vk = x.select_columns(c);
                let gk = gr.select_columns(c);
                let a = vk.adjoint() * &gk;
                let sym = (&a + a.adjoint()) * C64::new(0.5, 0.0);
                let tangent = &gk - &vk * sym;
                for (i, &col) in c.iter().enumerate() {
                    gr.set_column(col, &tangent.column(i));
                }
            }
        }
        gr
    }

    fn evaluate(&self, x: &DMatrix<C64>, tol: f64) -> Option<(OrthogonalRepresentation, f64)> {
        let rep = OrthogonalRepresentation::from_columns(x);
        verify_for_tol(&rep, self.g, tol).ok.then(|| {
            let p = representation_payoff(&rep, self.g);
            (rep, p)
        })
    }
}

/// Smooth minimum `-tau log sum exp(-f/tau)` and its weights.
fn softmin(f: &[f64], tau: f64) -> (f64, Vec<f64>) {
    let m = f.iter().cloned().fold(f64::INFINITY, f64::min);
    if !m.is_finite() {
        return (1.0, vec![0.0; f.len()]);
    }
    let e: Vec<f64> = f.iter().map(|&v| (-(v - m) / tau).exp()).collect();
    let z: f64 = e.iter().sum();
    (m - tau * z.ln(), e.iter().map(|v| v / z).collect())
}

fn run_restart(p: &Problem, opts: &OptimizeOptions, restart: usize) -> Option<(OrthogonalRepresentation, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let mut x = random_matrix(&mut rng, p.d, p.g.order());
    if !p.retract(&mut x) {
        return None;
    }
    let mut best = p.evaluate(&x, opts.tol);
    let consider = |x: &DMatrix<C64>, best: &mut Option<(OrthogonalRepresentation, f64)>| {
        if let Some(c) = p.evaluate(x, opts.tol) {
            if best.as_ref().is_none_or(|b| c.1 > b.1) {
                *best = Some(c);
            }
        }
    };
    let mut tau = opts.tau_start;
    let mut step = 0.5;
    while tau >= opts.tau_end {
        let mut val = p.objective(&x, tau);
        for _ in 0..opts.max_iter {
            let gr = p.gradient(&x, tau);
            let gn2 = gr.norm_squared();
            if gn2 < 1e-30 {
                break;
            }
            let mut accepted = None;
            while step > 1e-14 {
                let mut xn = &x + &gr * C64::new(step, 0.0);
                if p.retract(&mut xn) {
                    let vn = p.objective(&xn, tau);
                    if vn >= val + 1e-4 * step * gn2 {
                        accepted = Some((xn, vn));
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some((xn, vn)) = accepted else {
                step = 0.5;
                break;
            };
            let gain = vn - val;
            x = xn;
            val = vn;
            step = (step * 2.0).min(1.0);
            if gain < opts.conv * tau {
                break;
            }
        }
        consider(&x, &mut best);
        tau *= opts.anneal;
    }
    best
}

fn problem<'a>(g: &'a Graph, cs: &CliqueSet, d: usize) -> Result<Problem<'a>, QuantumError> {
    if d < cs.omega {
        return Err(QuantumError::InvalidParams(format!("d = {d} is below omega = {}", cs.omega)));
    }
    let mut pairs = Vec::new();
    for u in 1..=g.order() {
        for v in (u + 1)..=g.order() {
            if !g.has_edge(u, v) {
                pairs.push((u - 1, v - 1));
            }
        }
    }
    let mode = if is_disjoint_cliques(g, cs) {
        Mode::Stiefel(cs.cliques.iter().map(|c| c.iter().map(|v| v - 1).collect()).collect())
    } else {
        Mode::Constrained(edges0(g))
    };
    Ok(Problem { g, d, pairs, mode })
}

fn select(
    results: Vec<Option<(OrthogonalRepresentation, f64)>>,
) -> Result<OptimizeResult, QuantumError> {
    let restart_payoffs: Vec<Option<f64>> = results.iter().map(|r| r.as_ref().map(|r| r.1)).collect();
    let mut best: Option<(usize, OrthogonalRepresentation, f64)> = None;
    for (i, r) in results.into_iter().enumerate() {
        if let Some((rep, p)) = r {
            if best.as_ref().is_none_or(|b| p > b.2) {
                best = Some((i, rep, p));
            }
        }
    }
    let (best_restart, rep, payoff) = best.ok_or(QuantumError::NoFaithfulStart)?;
    Ok(OptimizeResult { rep, payoff, best_restart, restart_payoffs })
}

/// Local maximisation of the smallest non-edge overlap over faithful
/// representations in `C^d`, by annealed softmin ascent from
/// `opts.restarts` seeded random starts. The best verified result wins,
/// lowest restart index on ties.
pub fn optimize_payoff(
    g: &Graph,
    cs: &CliqueSet,
    d: usize,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult, QuantumError> {
    #[cfg(feature = "parallel")]
    {
        optimize_payoff_par(g, cs, d, opts)
    }
    #[cfg(not(feature = "parallel"))]
    {
        optimize_payoff_seq(g, cs, d, opts)
    }
}

pub fn optimize_payoff_seq(
    g: &Graph,
    cs: &CliqueSet,
    d: usize,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult, QuantumError> {
    let p = problem(g, cs, d)?;
    select((0..opts.restarts).map(|r| run_restart(&p, opts, r)).collect())
}

#[cfg(feature = "parallel")]
pub fn optimize_payoff_par(
    g: &Graph,
    cs: &CliqueSet,
    d: usize,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult, QuantumError> {
    let p = problem(g, cs, d)?;
    select((0..opts.restarts).into_par_iter().map(|r| run_restart(&p, opts, r)).collect())
}
