//! Classical one-way protocols for the clique-labelling relation: the
//! `omega`-message CCR strategy, the `|V|`-message S-CCR strategy, exhaustive
//! lower-bound checks, public-coin mixtures and binary orthogonal arrays.
//!
//! Searches run on rayon with the default `parallel` feature; every
//! parallel entry point has a `_seq` twin and results are merged in a fixed
//! order, so both builds return identical values.

mod ccr;
mod lower_bound;
mod mixture;
mod oa;
mod sccr;
mod strategy;

pub use ccr::{
    ccr_perms, ccr_protocol, enumerate_t0_perms, enumerate_t0_perms_seq, enumerate_t0_strategies,
    permutation_order,
};
#[cfg(feature = "parallel")]
pub use ccr::enumerate_t0_perms_par;
pub use lower_bound::{
    find_protocol, find_protocol_seq, verify_classical_lower_bound, EncoderModel,
    DEFAULT_VERTEX_CAP,
};
#[cfg(feature = "parallel")]
pub use lower_bound::find_protocol_par;
pub use mixture::{
    mixture_for_t1, mixture_for_t2, mixture_for_t2_generic, T2Mixture, DEFAULT_GENERIC_CAP,
};
pub use oa::{find_oa, is_orthogonal_array, min_oa_rows, min_oa_rows_capped, BinaryArray, DEFAULT_OA_CAP};
pub use sccr::sccr_protocol;
pub use strategy::{DeterministicStrategy, PublicCoinMixture};

use thiserror::Error;

/// Node budget for permutation backtracking.
pub const DEFAULT_NODE_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("graph conditions fail: {0}")]
    ConditionsFail(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
