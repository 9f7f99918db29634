//! Auxiliary-channel converse.
//!
//! Any `(n, M, ε)` code satisfies
//!
//! ```text
//! ε ≥ Σ_{s : C_s < log_q M} P(S = s) · P(error | S = s)
//! ```
//!
//! where `S` is the error-count state and `C_s` the capacity of the channel
//! with the state revealed. Two lower bounds on `P(error | S = s)` are
//! provided:
//!
//! * [`PerStateStrategy::Structural`] uses the exact structure of the state:
//!   `1 - q^(n - s - nR)` for the QEC and `1 - 2^(n - nR) / C(n, s)` for the BSC.
//! * [`PerStateStrategy::Wolfowitz`] uses the strong converse
//!   `1 - 4A / x² - e^(-x/2)` with `x = (nR - C_s)` in nats and auxiliary
//!   blocklength one.
//!
//! Per-state values are clamped at zero. Terms are summed from the largest
//! state down through [`stable_sum`].

use alloc::vec::Vec;

use crate::bound::{BoundId, BoundResult, StateTerm};
use crate::channels::{ln_choose, state_capacity, state_pmf, unsupported_states, ChannelSpec, CodePoint};
use crate::error::{Error, Result};
use crate::numerics::{stable_sum, LogValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerStateStrategy {
    Structural,
    Wolfowitz { a: f64 },
}

impl PerStateStrategy {
    pub fn wolfowitz(a: f64) -> Result<PerStateStrategy> {
        if a > 0.0 && a.is_finite() {
            Ok(PerStateStrategy::Wolfowitz { a })
        } else {
            Err(Error::Domain("Wolfowitz constant A must be positive and finite"))
        }
    }

    fn bound_id(&self, ch: &ChannelSpec) -> BoundId {
        match (ch, *self) {
            (ChannelSpec::Qec { .. }, PerStateStrategy::Structural) => BoundId::Thm2,
            (ChannelSpec::Qec { .. }, PerStateStrategy::Wolfowitz { a }) => BoundId::Thm3 { a },
            (ChannelSpec::Bsc { .. }, PerStateStrategy::Structural) => BoundId::Thm4,
            (ChannelSpec::Bsc { .. }, PerStateStrategy::Wolfowitz { a }) => BoundId::Thm5 { a },
        }
    }
}

/// `nR - C_s` in nats.
fn rate_gap_nats(ch: &ChannelSpec, n: u32, s: u32, logqm: f64) -> f64 {
    match ch {
        ChannelSpec::Qec { .. } => (logqm - (n - s) as f64) * ch.ln_q(),
        ChannelSpec::Bsc { .. } => (logqm - n as f64) * core::f64::consts::LN_2 + ln_choose(n, s),
    }
}

fn per_state_unchecked(ch: &ChannelSpec, n: u32, s: u32, logqm: f64, strat: PerStateStrategy) -> f64 {
    let gap = rate_gap_nats(ch, n, s, logqm);
    if !(gap > 0.0) {
        return 0.0;
    }
    let v = match strat {
        PerStateStrategy::Structural => -libm::expm1(-gap),
        PerStateStrategy::Wolfowitz { a } => 1.0 - 4.0 * a / (gap * gap) - libm::exp(-0.5 * gap),
    };
    v.clamp(0.0, 1.0)
}

/// Lower bound on `P(error | S = s)` for a state the rate does not fit into.
pub fn per_state_error_lb(
    ch: &ChannelSpec,
    n: u32,
    s: u32,
    logqm: f64,
    strat: PerStateStrategy,
) -> Result<f64> {
    let point = CodePoint::new(n, logqm)?;
    if s > n {
        return Err(Error::Domain("state s must satisfy s <= n"));
    }
    if !unsupported_states(ch, &point).contains(s) {
        return Err(Error::SupportedState {
            s,
            logqm,
            capacity: state_capacity(ch, n, s)?,
        });
    }
    Ok(per_state_unchecked(ch, n, s, logqm, strat))
}

fn converse_sum(
    ch: &ChannelSpec,
    point: &CodePoint,
    strat: PerStateStrategy,
    keep_terms: bool,
) -> Result<BoundResult> {
    let n = point.n;
    let states = unsupported_states(ch, point);
    let mut terms = Vec::with_capacity(states.len());
    let mut diag = keep_terms.then(|| Vec::with_capacity(states.len()));
    for s in states.iter_desc() {
        let pmf = state_pmf(ch, n, s)?;
        let lb = per_state_unchecked(ch, n, s, point.logqm, strat);
        let term = pmf * LogValue::from_ln(libm::log(lb));
        terms.push(term);
        if let Some(d) = diag.as_mut() {
            d.push(StateTerm {
                s,
                pmf,
                per_state_lb: lb,
                term,
            });
        }
    }
    Ok(BoundResult {
        bound: strat.bound_id(ch),
        log_epsilon: stable_sum(terms),
        per_state_terms: diag,
    })
}

/// Converse lower bound on the average error probability at `point`.
pub fn converse_epsilon_lb(ch: &ChannelSpec, point: &CodePoint, strat: PerStateStrategy) -> Result<BoundResult> {
    converse_sum(ch, point, strat, false)
}

/// Like [`converse_epsilon_lb`] but keeps every state's term.
pub fn converse_epsilon_lb_with_terms(
    ch: &ChannelSpec,
    point: &CodePoint,
    strat: PerStateStrategy,
) -> Result<BoundResult> {
    converse_sum(ch, point, strat, true)
}

/// Meta-converse for the BEC with `m` codewords:
///
/// ```text
/// Σ_{l = ⌊n - log2 M⌋ + 1}^{n} C(n,l) δ^l (1-δ)^(n-l) (1 - 2^(n-l) / M)
/// ```
pub fn meta_converse_bec(n: u32, m: f64, delta: f64) -> Result<BoundResult> {
    if !(m >= 1.0) || m.is_infinite() {
        return Err(Error::Domain("meta-converse requires a finite M >= 1"));
    }
    let ch = ChannelSpec::bec(delta)?;
    let ln_m = libm::log(m);
    let first = libm::floor(n as f64 - libm::log2(m)) + 1.0;
    let first = if first < 0.0 { 0 } else { first as u32 };
    let mut terms = Vec::new();
    for l in (first..=n).rev() {
        let ln_ratio = (n - l) as f64 * core::f64::consts::LN_2 - ln_m;
        let factor = LogValue::from_ln(ln_ratio).complement();
        terms.push(state_pmf(&ch, n, l)? * factor);
    }
    Ok(BoundResult {
        bound: BoundId::Meta,
        log_epsilon: stable_sum(terms),
        per_state_terms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qec(q: u32, d: f64) -> ChannelSpec {
        ChannelSpec::qec(q, d).unwrap()
    }

    fn bsc(d: f64) -> ChannelSpec {
        ChannelSpec::bsc(d).unwrap()
    }

    fn pt(n: u32, logqm: f64) -> CodePoint {
        CodePoint::new(n, logqm).unwrap()
    }

    #[test]
    fn per_state_examples() {
        let v = per_state_error_lb(&qec(2, 0.5), 2, 2, 1.0, PerStateStrategy::Structural).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let v = per_state_error_lb(&bsc(0.1), 4, 2, 2.0, PerStateStrategy::Structural).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let w = PerStateStrategy::wolfowitz(0.01).unwrap();
        let v = per_state_error_lb(&qec(2, 0.5), 2, 1, 2.0, w).unwrap();
        let ln2 = core::f64::consts::LN_2;
        let want = 1.0 - 0.04 / (ln2 * ln2) - libm::exp(-ln2 / 2.0);
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.2096).abs() < 1e-4);
    }

    #[test]
    fn per_state_rejects_supported_state() {
        let err = per_state_error_lb(&qec(2, 0.5), 2, 1, 1.0, PerStateStrategy::Structural);
        assert!(matches!(err, Err(Error::SupportedState { s: 1, .. })));
        let err = per_state_error_lb(&bsc(0.1), 4, 0, 2.0, PerStateStrategy::Structural);
        assert!(matches!(err, Err(Error::SupportedState { .. })));
        assert!(PerStateStrategy::wolfowitz(0.0).is_err());
        assert!(PerStateStrategy::wolfowitz(f64::NAN).is_err());
    }

    #[test]
    fn wolfowitz_clamps_near_capacity() {
        // x = 0.1 nats: 1 - 4A/0.01 - e^-0.05 < 0
        let w = PerStateStrategy::wolfowitz(0.25).unwrap();
        let v = per_state_error_lb(&qec(2, 0.5), 10, 5, 5.0 + 0.1 / core::f64::consts::LN_2, w).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn converse_examples() {
        let r = converse_epsilon_lb(&qec(2, 0.5), &pt(2, 1.0), PerStateStrategy::Structural).unwrap();
        assert!((r.epsilon() - 0.125).abs() < 1e-15);
        assert_eq!(r.bound, BoundId::Thm2);

        let r = converse_epsilon_lb(&bsc(0.1), &pt(4, 2.0), PerStateStrategy::Structural).unwrap();
        assert!((r.epsilon() - 0.0162).abs() < 1e-15);

        let r = converse_epsilon_lb_with_terms(&bsc(0.05), &pt(7, 4.0), PerStateStrategy::Structural).unwrap();
        let terms = r.per_state_terms.as_ref().unwrap();
        assert_eq!(terms.iter().map(|t| t.s).collect::<Vec<_>>(), [5, 4, 3, 2]);
        // hand sum over s = 2..5
        let mut want = 0.0;
        for (s, c) in [(2, 21.0), (3, 35.0), (4, 35.0), (5, 21.0)] {
            want += c * 0.05f64.powi(s) * 0.95f64.powi(7 - s) * (1.0 - 8.0 / c);
        }
        assert!((r.epsilon() - want).abs() < 1e-15);
        assert!((r.epsilon() - 0.028046).abs() < 1e-6);
    }

    #[test]
    fn empty_state_set_gives_zero() {
        let r = converse_epsilon_lb(&bsc(0.1), &pt(3, 1.0), PerStateStrategy::Structural).unwrap();
        assert_eq!(r.epsilon(), 0.0);
        let r = converse_epsilon_lb(&qec(3, 0.1), &pt(3, 0.0), PerStateStrategy::Structural).unwrap();
        assert!(r.log_epsilon.is_zero());
    }

    #[test]
    fn meta_converse_examples() {
        assert!((meta_converse_bec(2, 2.0, 0.5).unwrap().epsilon() - 0.125).abs() < 1e-15);
        assert_eq!(meta_converse_bec(1, 1.0, 0.5).unwrap().epsilon(), 0.0);
        let meta = meta_converse_bec(10, 32.0, 0.5).unwrap();
        let thm2 = converse_epsilon_lb(&qec(2, 0.5), &pt(10, 5.0), PerStateStrategy::Structural).unwrap();
        assert!((meta.log_epsilon.ln() - thm2.log_epsilon.ln()).abs() < 1e-13);
        assert!(meta_converse_bec(10, 0.5, 0.5).is_err());
    }

    #[test]
    fn degenerate_channels() {
        let r = converse_epsilon_lb(&qec(2, 0.0), &pt(8, 8.0), PerStateStrategy::Structural).unwrap();
        assert_eq!(r.epsilon(), 0.0);
        let r = converse_epsilon_lb(&qec(2, 1.0), &pt(8, 1.0), PerStateStrategy::Structural).unwrap();
        assert!((r.epsilon() - 0.5).abs() < 1e-15);
        let r = converse_epsilon_lb(&bsc(1.0), &pt(8, 4.0), PerStateStrategy::Structural).unwrap();
        assert!(!r.epsilon().is_nan());
    }
}
