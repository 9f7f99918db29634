//! Non-asymptotic converse and achievability bounds for the q-ary erasure
//! channel (QEC) and the binary symmetric channel (BSC).
//!
//! The converse bounds reveal the number of channel errors in a block to
//! encoder and decoder and lower-bound the error probability of every state
//! whose capacity falls short of the code rate. The crate also carries the
//! BEC meta-converse, the DT and RCU achievability bounds, a zero-error
//! variable-length stop-feedback bound, exact ML error probabilities of small
//! codes, and a bisection solver that turns any of these into rate curves.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod achievability;
pub mod bound;
pub mod channels;
pub mod converse;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod solver;
pub mod vlsf;

pub use achievability::{dt_bound_bec, rcu_bound_bsc};
pub use bound::{BoundId, BoundResult, StateTerm, DEFAULT_WOLFOWITZ_A};
pub use channels::{state_capacity, state_pmf, unsupported_states, ChannelSpec, CodePoint, StateRange};
pub use converse::{
    converse_epsilon_lb, converse_epsilon_lb_with_terms, meta_converse_bec, per_state_error_lb, PerStateStrategy,
};
pub use error::{Error, Result};
pub use numerics::{binomial_pmf, log_binomial, negbinomial_pmf, stable_sum, LogValue};
pub use oracle::{exact_eps_bsc, exact_eps_qec, rs_code, Codebook, ExactError};
pub use solver::{
    curve_point, evaluate_bound, invert_rate, run_curve, run_vlsf_curve, BracketSide, CurvePoint, CurveRequest,
    VlsfRow,
};
pub use vlsf::{packet_success_prob, vlsf_blocklength_lb, VlsfPoint, VlsfResult};
