//! Random-coding achievability bounds evaluated with equiprobable inputs.
//!
//! * DT on the BEC: after `e` erasures the information density is `n - e`
//!   bits, so `E[exp{-[i - log((M-1)/2)]^+}]` becomes a single binomial sum.
//! * RCU on the BSC: after `t` flips, an independent codeword is at least as
//!   likely as the transmitted one iff it lies within distance `t` of the
//!   output (for δ < ½), which has probability `2^-n Σ_{k≤t} C(n,k)`.

use alloc::vec::Vec;

use crate::bound::{BoundId, BoundResult};
use crate::error::{Error, Result};
use crate::numerics::{binomial_pmf, log_add, log_binomial, stable_sum, LogValue};

fn check_args(m: f64, delta: f64) -> Result<()> {
    if !(m >= 1.0) || m.is_infinite() {
        return Err(Error::Domain("achievability bounds require a finite M >= 1"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain("delta must lie in [0, 1]"));
    }
    Ok(())
}

/// `ln min{1, e^x}`.
fn cap_at_one(x: f64) -> LogValue {
    LogValue::from_ln(x.min(0.0))
}

/// DT bound for the BEC with `m` codewords.
pub fn dt_bound_bec(n: u32, m: f64, delta: f64) -> Result<BoundResult> {
    check_args(m, delta)?;
    let ln_half_m1 = libm::log((m - 1.0) / 2.0);
    let ln2 = core::f64::consts::LN_2;
    let mut terms = Vec::with_capacity(n as usize + 1);
    for e in (0..=n).rev() {
        let pmf = binomial_pmf(n as u64, e as u64, delta)?;
        terms.push(pmf * cap_at_one(ln_half_m1 - (n - e) as f64 * ln2));
    }
    Ok(BoundResult {
        bound: BoundId::Dt,
        log_epsilon: stable_sum(terms),
        per_state_terms: None,
    })
}

/// RCU bound for the BSC with `m` codewords.
pub fn rcu_bound_bsc(n: u32, m: f64, delta: f64) -> Result<BoundResult> {
    check_args(m, delta)?;
    let ln_m1 = libm::log(m - 1.0);
    let ln_space = n as f64 * core::f64::consts::LN_2;
    let nn = n as u64;

    // ln Σ_{k≤t} C(n,k) for t = 0..=n, or the upper tail when δ > ½.
    let mut cumulative = Vec::with_capacity(n as usize + 1);
    let mut acc = LogValue::ZERO;
    if delta <= 0.5 {
        for k in 0..=nn {
            acc = log_add(acc, log_binomial(nn, k)?);
            cumulative.push(acc);
        }
    } else {
        cumulative.resize(n as usize + 1, LogValue::ZERO);
        for k in (0..=nn).rev() {
            acc = log_add(acc, log_binomial(nn, k)?);
            cumulative[k as usize] = acc;
        }
    }

    let mut terms = Vec::with_capacity(n as usize + 1);
    for t in (0..=n).rev() {
        let pmf = binomial_pmf(nn, t as u64, delta)?;
        let inner = if delta == 0.5 {
            0.0
        } else {
            cumulative[t as usize].ln() - ln_space
        };
        terms.push(pmf * cap_at_one(ln_m1 + inner));
    }
    Ok(BoundResult {
        bound: BoundId::Rcu,
        log_epsilon: stable_sum(terms),
        per_state_terms: None,
    })
}
