//! Orthogonal representations of graphs and the qudit strategy built on
//! them: construction, verification, Born-rule tables, payoff optimisation,
//! mutually unbiased bases and the equatorial (RSP) protocol.

mod construct;
mod linalg;
mod mub;
mod optimize;
mod rep;
mod rsp;
mod table;

pub use construct::{construct_for, generic_unitary, is_disjoint_cliques};
pub use mub::{check_mub, check_mub_tol, mub_bases, mub_certificate, MubCertificate};
pub use optimize::{optimize_payoff, optimize_payoff_seq, OptimizeOptions, OptimizeResult};
#[cfg(feature = "parallel")]
pub use optimize::optimize_payoff_par;
pub use rep::{
    representation_payoff, verify_for, verify_for_tol, OrthogonalRepresentation, Verification,
    Violation,
};
pub use rsp::{equatorial_basis, rsp_payoff, rsp_payoff_from_states, EquatorialEnsemble, RspReport};
pub use table::{dimension_witness, quantum_table, QuantumStrategy, WitnessClaim};

pub use nalgebra::{Complex, DMatrix, DVector};

/// Complex amplitude.
pub type C64 = Complex<f64>;

/// Orthogonality and faithfulness threshold on `|<u, v>|`.
pub const REP_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("no faithful starting representation found")]
    NoFaithfulStart,
    #[error("basis is not orthonormal: {0}")]
    NotOrthonormal(String),
    #[error("wrong graph family: {0}")]
    WrongFamily(String),
    #[error("representation fails verification: {0}")]
    Unverified(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Prob(#[from] prob_model::ProbError),
}
