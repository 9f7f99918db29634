use thiserror::Error;

/// Errors raised by the bound kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// A per-state bound was requested for a state the code rate does not exceed.
    #[error("state s={s} is supported at logqM={logqm} (capacity {capacity})")]
    SupportedState { s: u32, logqm: f64, capacity: f64 },

    /// A bound id that does not apply to the requested channel.
    #[error("bound `{bound}` is not defined for channel {channel}")]
    BoundChannelMismatch {
        bound: &'static str,
        channel: &'static str,
    },

    /// A code construction failed.
    #[error("construction error: {0}")]
    Construction(&'static str),

    /// Rate bisection observed a bound that is not nondecreasing in logqM.
    #[error(
        "non-monotone bound: eps({lo})={eps_lo}, eps({mid})={eps_mid}, eps({hi})={eps_hi}"
    )]
    NonMonotone {
        lo: f64,
        mid: f64,
        hi: f64,
        eps_lo: f64,
        eps_mid: f64,
        eps_hi: f64,
    },

    /// A bound evaluated to something that is not a probability.
    #[error("bound value {0} is not a probability")]
    NotAProbability(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
