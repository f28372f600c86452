//! Paley graphs over prime fields: character matrix identities, spectra,
//! the optimal Gram matrix and the vectors it factors into.

use graph_core::{enumerate_maximum_cliques, gen_paley, is_prime, Graph};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use prob_model::payoff;
use quantum_protocols::{
    quantum_table, verify_for, Complex, OrthogonalRepresentation, QuantumError, QuantumStrategy, C64,
};
use relation::build_relation;
use std::collections::BTreeSet;
use thiserror::Error;

/// Eigenvalue agreement.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// Eigenvalues above this count towards the rank.
pub const RANK_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PaleyError {
    #[error("q = {0} is not prime")]
    NotPrime(usize),
    #[error("q = {0} is not 1 mod 4")]
    NotOneModFour(usize),
    #[error("Gram matrix has eigenvalue {0} below -1e-9")]
    NotPsd(f64),
    #[error("theta cross-check failed: sqrt q = {sqrt_q}, entry sum / q = {from_sum}")]
    ThetaMismatch { sqrt_q: f64, from_sum: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

fn check_q(q: usize) -> Result<(), PaleyError> {
    if !is_prime(q) {
        return Err(PaleyError::NotPrime(q));
    }
    if q % 4 != 1 {
        return Err(PaleyError::NotOneModFour(q));
    }
    Ok(())
}

/// `{x^2 mod q : 1 <= x < q}`
pub fn quadratic_residues(q: usize) -> Result<BTreeSet<usize>, PaleyError> {
    if !is_prime(q) {
        return Err(PaleyError::NotPrime(q));
    }
    Ok((1..q).map(|x| x * x % q).collect())
}

/// Quadratic character of `x` modulo `q`.
pub fn chi(x: i64, q: usize, residues: &BTreeSet<usize>) -> i64 {
    let r = x.rem_euclid(q as i64) as usize;
    if r == 0 {
        0
    } else if residues.contains(&r) {
        1
    } else {
        -1
    }
}

/// `K[k][l] = chi(k - l)` over `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterMatrix {
    pub q: usize,
    pub k: Vec<Vec<i64>>,
}

pub fn character_matrix(q: usize) -> Result<CharacterMatrix, PaleyError> {
    check_q(q)?;
    let res = quadratic_residues(q)?;
    let k = (0..q)
        .map(|i| (0..q).map(|j| chi(i as i64 - j as i64, q, &res)).collect())
        .collect();
    Ok(CharacterMatrix { q, k })
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

fn int_adjacency(g: &Graph) -> Vec<Vec<i64>> {
    g.adjacency_matrix().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

/// `K^2 = qI - J` in integers.
pub fn verify_k_squared(q: usize) -> Result<bool, PaleyError> {
    let k = character_matrix(q)?.k;
    let sq = int_mul(&k, &k);
    Ok((0..q).all(|i| (0..q).all(|j| sq[i][j] == if i == j { q as i64 - 1 } else { -1 })))
}

/// `2A = K + J - I` for the generated graph.
pub fn verify_adjacency_from_k(q: usize) -> Result<bool, PaleyError> {
    let k = character_matrix(q)?.k;
    let a = int_adjacency(&gen_paley(q).map_err(|_| PaleyError::NotOneModFour(q))?);
    Ok((0..q).all(|i| (0..q).all(|j| 2 * a[i][j] == k[i][j] + 1 - (i == j) as i64)))
}

/// `A^2 = ((q-1)/4)(J + I) - A` in integers.
pub fn verify_a_squared(q: usize) -> Result<bool, PaleyError> {
    check_q(q)?;
    let a = int_adjacency(&gen_paley(q).map_err(|_| PaleyError::NotOneModFour(q))?);
    let sq = int_mul(&a, &a);
    let c = (q as i64 - 1) / 4;
    Ok((0..q).all(|i| (0..q).all(|j| sq[i][j] == c * (1 + (i == j) as i64) - a[i][j])))
}

fn descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Adjacency eigenvalues, largest first.
pub fn adjacency_spectrum(q: usize) -> Result<Vec<f64>, PaleyError> {
    check_q(q)?;
    let g = gen_paley(q).map_err(|_| PaleyError::NotOneModFour(q))?;
    let a = DMatrix::from_fn(q, q, |i, j| g.has_edge(i + 1, j + 1) as u8 as f64);
    Ok(descending(SymmetricEigen::new(a).eigenvalues.iter().copied().collect()))
}

/// `(q-1)/2` once, then `(-1 +- sqrt q)/2` each `(q-1)/2` times.
pub fn expected_adjacency_spectrum(q: usize) -> Vec<f64> {
    let (s, m) = ((q as f64).sqrt(), (q - 1) / 2);
    let mut v = vec![(q as f64 - 1.0) / 2.0];
    v.extend(std::iter::repeat_n((s - 1.0) / 2.0, m));
    v.extend(std::iter::repeat_n((-1.0 - s) / 2.0, m));
    descending(v)
}

/// `sqrt q` once, `2 sqrt q / (1 + sqrt q)` and `0` each `(q-1)/2` times.
pub fn expected_gram_spectrum(q: usize) -> Vec<f64> {
    let (s, m) = ((q as f64).sqrt(), (q - 1) / 2);
    let mut v = vec![s];
    v.extend(std::iter::repeat_n(2.0 * s / (1.0 + s), m));
    v.extend(std::iter::repeat_n(0.0, m));
    descending(v)
}

/// Elementwise agreement of two sorted spectra.
pub fn spectra_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// `I + (2 / (sqrt q + 1)) A(complement)`
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalGram {
    pub q: usize,
    pub m: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub gram: OptimalGram,
    /// Largest first.
    pub spectrum: Vec<f64>,
    pub rank: usize,
    pub entry_sum: f64,
}

/// Off-diagonal value at non-adjacent pairs.
pub fn cross_overlap(q: usize) -> f64 {
    2.0 / ((q as f64).sqrt() + 1.0)
}

pub fn gram_opt(q: usize) -> Result<GramReport, PaleyError> {
    check_q(q)?;
    let g = gen_paley(q).map_err(|_| PaleyError::NotOneModFour(q))?;
    let c = cross_overlap(q);
    let m = DMatrix::from_fn(q, q, |i, j| {
        if i == j {
            1.0
        } else if g.has_edge(i + 1, j + 1) {
            0.0
        } else {
            c
        }
    });
    let spectrum = descending(SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect());
    let rank = spectrum.iter().filter(|&&l| l > RANK_TOL).count();
    let entry_sum = m.sum();
    Ok(GramReport { gram: OptimalGram { q, m }, spectrum, rank, entry_sum })
}

/// Rows of `U diag(sqrt lambda)` over the eigenpairs above the rank
/// threshold, as vectors in `C^rank`.
pub fn extract_vectors(gram: &OptimalGram) -> Result<OrthogonalRepresentation, PaleyError> {
    let eig = SymmetricEigen::new(gram.m.clone());
    if let Some(&neg) = eig.eigenvalues.iter().find(|&&l| l < -1e-9) {
        return Err(PaleyError::NotPsd(neg));
    }
    let keep: Vec<usize> = (0..gram.q).filter(|&i| eig.eigenvalues[i] > RANK_TOL).collect();
    let vectors = (0..gram.q)
        .map(|v| {
            DVector::from_iterator(
                keep.len(),
                keep.iter().map(|&i| {
                    Complex::new(eig.eigenvectors[(v, i)] * eig.eigenvalues[i].sqrt(), 0.0)
                }),
            )
        })
        .collect();
    Ok(OrthogonalRepresentation::new(keep.len(), vectors)?)
}

/// `theta = sqrt q`, cross-checked against `(1/q) * sum of M_opt entries`.
pub fn theta_paley(q: usize) -> Result<f64, PaleyError> {
    let rep = gram_opt(q)?;
    let sqrt_q = (q as f64).sqrt();
    let from_sum = rep.entry_sum / q as f64;
    if (sqrt_q - from_sum).abs() > RANK_TOL {
        return Err(PaleyError::ThetaMismatch { sqrt_q, from_sum });
    }
    Ok(sqrt_q)
}

/// `f_j[k] = e^{2 pi i jk/q} / sqrt q`.
pub fn fourier_vector(q: usize, j: usize) -> DVector<C64> {
    let s = 1.0 / (q as f64).sqrt();
    DVector::from_fn(q, |k, _| {
        C64::from_polar(s, 2.0 * std::f64::consts::PI * ((j * k) % q) as f64 / q as f64)
    })
}

/// Eigenvalue of `M_opt` on each Fourier vector, or `None` where
/// `M f_j` is not parallel to `f_j` within [`SPECTRUM_TOL`].
pub fn fourier_eigenvalues(gram: &OptimalGram) -> Vec<Option<f64>> {
    let m = gram.m.map(|x| Complex::new(x, 0.0));
    (0..gram.q)
        .map(|j| {
            let f = fourier_vector(gram.q, j);
            let mf = &m * &f;
            let lambda = f.dotc(&mf);
            let resid = (&mf - &f * lambda).norm();
            (resid <= SPECTRUM_TOL && lambda.im.abs() <= SPECTRUM_TOL).then_some(lambda.re)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaleyAnalysis {
    pub q: usize,
    pub degree: usize,
    pub spectrum: Vec<f64>,
    pub theta: f64,
    pub rank: usize,
    /// Payoff of the quantum strategy built on the extracted vectors.
    pub payoff: f64,
    pub faithful: bool,
}

pub fn analyze(q: usize) -> Result<PaleyAnalysis, PaleyError> {
    check_q(q)?;
    let g = gen_paley(q).map_err(|_| PaleyError::NotOneModFour(q))?;
    let report = gram_opt(q)?;
    let rep = extract_vectors(&report.gram)?;
    let faithful = verify_for(&rep, &g).ok;
    let cs = enumerate_maximum_cliques(&g).map_err(|e| QuantumError::InvalidParams(e.to_string()))?;
    let rel = build_relation(&g, &cs);
    let strategy = QuantumStrategy::new(rep, &g, cs)?;
    let table = quantum_table(&strategy, &rel)?;
    let payoff = payoff(&table, &rel).map_err(QuantumError::from)?.value;
    Ok(PaleyAnalysis {
        q,
        degree: g.degree(1),
        spectrum: adjacency_spectrum(q)?,
        theta: theta_paley(q)?,
        rank: report.rank,
        payoff,
        faithful,
    })
}
