//! Channel models, the error-count state distribution of the auxiliary
//! channel, and per-state capacities.
//!
//! A channel state is the number `s` of erroneous transmissions (erasures for
//! the QEC, flips for the BSC) in one block of `n` uses. It is
//! Binomial(`n`, δ) for both channels. Revealing `s` to encoder and decoder
//! leaves a channel whose capacity over the block is
//!
//! * QEC: `n - s` q-ary symbols,
//! * BSC: `n - log2 C(n, s)` bits.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{binomial_pmf, log_binomial, LogValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    /// q-ary erasure channel: the correct symbol with probability `1 - delta`,
    /// an erasure otherwise.
    Qec { q: u32, delta: f64 },
    /// Binary symmetric channel with crossover probability `delta`.
    Bsc { delta: f64 },
}

impl ChannelSpec {
    pub fn qec(q: u32, delta: f64) -> Result<ChannelSpec> {
        if q < 2 {
            return Err(Error::Domain("QEC alphabet size must be at least 2"));
        }
        check_delta(delta)?;
        Ok(ChannelSpec::Qec { q, delta })
    }

    pub fn bec(delta: f64) -> Result<ChannelSpec> {
        ChannelSpec::qec(2, delta)
    }

    pub fn bsc(delta: f64) -> Result<ChannelSpec> {
        check_delta(delta)?;
        Ok(ChannelSpec::Bsc { delta })
    }

    pub fn q(&self) -> u32 {
        match *self {
            ChannelSpec::Qec { q, .. } => q,
            ChannelSpec::Bsc { .. } => 2,
        }
    }

    pub fn delta(&self) -> f64 {
        match *self {
            ChannelSpec::Qec { delta, .. } | ChannelSpec::Bsc { delta } => delta,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ChannelSpec::Qec { .. } => "qec",
            ChannelSpec::Bsc { .. } => "bsc",
        }
    }

    /// Natural log of the alphabet size, i.e. nats per message symbol.
    pub fn ln_q(&self) -> f64 {
        libm::log(self.q() as f64)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::Domain("channel parameter delta must lie in [0, 1]"))
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChannelSpec::Qec { q, delta } => write!(f, "qec:q={},delta={}", q, delta),
            ChannelSpec::Bsc { delta } => write!(f, "bsc:delta={}", delta),
        }
    }
}

/// Parses `qec:q=Q,delta=D` and `bsc:delta=D`.
impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<ChannelSpec> {
        let (kind, params) = s
            .split_once(':')
            .ok_or(Error::Domain("channel spec must look like `qec:q=Q,delta=D` or `bsc:delta=D`"))?;
        let mut q = None;
        let mut delta = None;
        for kv in params.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or(Error::Domain("channel parameter must be key=value"))?;
            match key.trim() {
                "q" => {
                    q = Some(
                        value
                            .trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Domain("invalid alphabet size q"))?,
                    )
                }
                "delta" => {
                    delta = Some(
                        value
                            .trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Domain("invalid delta"))?,
                    )
                }
                _ => return Err(Error::Domain("unknown channel parameter")),
            }
        }
        let delta = delta.ok_or(Error::Domain("channel spec is missing delta"))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "qec" | "bec" => ChannelSpec::qec(q.unwrap_or(2), delta),
            "bsc" => match q {
                None | Some(2) => ChannelSpec::bsc(delta),
                Some(_) => Err(Error::Domain("BSC is binary; q must be 2")),
            },
            _ => Err(Error::Domain("unknown channel kind")),
        }
    }
}

/// One bound evaluation point: blocklength `n` and message size `logqm = log_q M`
/// (the aggregate rate `nR`, in channel-alphabet symbols).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodePoint {
    pub n: u32,
    pub logqm: f64,
    pub eps_target: f64,
}

impl CodePoint {
    pub fn new(n: u32, logqm: f64) -> Result<CodePoint> {
        CodePoint::with_target(n, logqm, 0.0)
    }

    pub fn with_target(n: u32, logqm: f64, eps_target: f64) -> Result<CodePoint> {
        if n == 0 {
            return Err(Error::Domain("blocklength must be at least 1"));
        }
        if !(0.0..=n as f64).contains(&logqm) {
            return Err(Error::Domain("logqM must lie in [0, n]"));
        }
        if !(0.0..=1.0).contains(&eps_target) {
            return Err(Error::Domain("target error probability must lie in [0, 1]"));
        }
        Ok(CodePoint {
            n,
            logqm,
            eps_target,
        })
    }

    pub fn rate(&self) -> f64 {
        self.logqm / self.n as f64
    }
}

/// A contiguous, possibly empty, range of channel states `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateRange {
    pub lo: u32,
    pub hi: u32,
}

impl StateRange {
    pub const EMPTY: StateRange = StateRange { lo: 1, hi: 0 };

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, s: u32) -> bool {
        self.lo <= s && s <= self.hi
    }

    /// States from the largest down.
    pub fn iter_desc(&self) -> impl Iterator<Item = u32> + Clone {
        let (lo, hi) = (self.lo, self.hi);
        (lo..=hi).rev().filter(move |_| lo <= hi)
    }
}

/// `ln P(S = s)`, with S ~ Binomial(n, δ).
pub fn state_pmf(ch: &ChannelSpec, n: u32, s: u32) -> Result<LogValue> {
    binomial_pmf(n as u64, s as u64, ch.delta())
}

/// Capacity of the auxiliary channel in state `s`: q-ary symbols for the QEC,
/// bits for the BSC.
pub fn state_capacity(ch: &ChannelSpec, n: u32, s: u32) -> Result<f64> {
    if s > n {
        return Err(Error::Domain("state s must satisfy s <= n"));
    }
    Ok(match ch {
        ChannelSpec::Qec { .. } => (n - s) as f64,
        ChannelSpec::Bsc { .. } => {
            n as f64 - log_binomial(n as u64, s as u64)?.ln() / core::f64::consts::LN_2
        }
    })
}

/// States whose capacity is strictly below `logqm`. Ties count as supported.
pub fn unsupported_states(ch: &ChannelSpec, point: &CodePoint) -> StateRange {
    let n = point.n;
    match ch {
        ChannelSpec::Qec { .. } => {
            // n - s < nR  <=>  s >= n - ceil(nR) + 1
            let c = libm::ceil(point.logqm) as u32;
            if c == 0 {
                StateRange::EMPTY
            } else {
                StateRange { lo: n - c + 1, hi: n }
            }
        }
        ChannelSpec::Bsc { .. } => {
            // log C(n,s) > (n - nR) ln 2; C(n,s) is unimodal and symmetric.
            let threshold = (n as f64 - point.logqm) * core::f64::consts::LN_2;
            (0..=n / 2)
                .find(|&s| ln_choose(n, s) > threshold)
                .map_or(StateRange::EMPTY, |lo| StateRange { lo, hi: n - lo })
        }
    }
}

pub(crate) fn ln_choose(n: u32, s: u32) -> f64 {
    log_binomial(n as u64, s as u64)
        .expect("s <= n <= u32::MAX checked by caller")
        .ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_channel_strings() {
        assert_eq!(
            "qec:q=5,delta=0.3".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Qec { q: 5, delta: 0.3 }
        );
        assert_eq!(
            "bsc:delta=0.05".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Bsc { delta: 0.05 }
        );
        assert!("bsc:q=3,delta=0.1".parse::<ChannelSpec>().is_err());
        assert!("qec:q=1,delta=0.1".parse::<ChannelSpec>().is_err());
        assert!("qec:q=2,delta=1.1".parse::<ChannelSpec>().is_err());
        assert!("awgn:delta=0.1".parse::<ChannelSpec>().is_err());
        assert!("qec:q=2".parse::<ChannelSpec>().is_err());
        let ch = ChannelSpec::qec(7, 0.25).unwrap();
        assert_eq!(ch.to_string().parse::<ChannelSpec>().unwrap(), ch);
    }

    #[test]
    fn code_point_validation() {
        assert!(CodePoint::new(0, 0.0).is_err());
        assert!(CodePoint::new(4, 4.5).is_err());
        assert!(CodePoint::new(4, -0.1).is_err());
        assert!(CodePoint::new(4, 4.0).is_ok());
    }

    #[test]
    fn state_pmf_examples() {
        let qec = ChannelSpec::bec(0.5).unwrap();
        assert!((state_pmf(&qec, 2, 1).unwrap().to_linear() - 0.5).abs() < 1e-15);
        let clean = ChannelSpec::bsc(0.0).unwrap();
        assert_eq!(state_pmf(&clean, 10, 0).unwrap().ln(), 0.0);
        let bsc = ChannelSpec::bsc(0.05).unwrap();
        let want = 21.0 * 0.0025 * 0.95f64.powi(5);
        assert!((state_pmf(&bsc, 7, 2).unwrap().to_linear() - want).abs() < 1e-15);
    }

    #[test]
    fn state_capacity_examples() {
        let qec = ChannelSpec::qec(3, 0.1).unwrap();
        assert_eq!(state_capacity(&qec, 10, 3).unwrap(), 7.0);
        let bsc = ChannelSpec::bsc(0.1).unwrap();
        assert_eq!(state_capacity(&bsc, 4, 0).unwrap(), 4.0);
        assert!((state_capacity(&bsc, 4, 2).unwrap() - 1.415_037_499_278_844).abs() < 1e-12);
        assert!(state_capacity(&bsc, 4, 5).is_err());
    }

    #[test]
    fn unsupported_state_examples() {
        let qec = ChannelSpec::bec(0.5).unwrap();
        let r = unsupported_states(&qec, &CodePoint::new(2, 1.0).unwrap());
        assert_eq!(r, StateRange { lo: 2, hi: 2 });
        assert!(unsupported_states(&qec, &CodePoint::new(2, 0.0).unwrap()).is_empty());

        let bsc = ChannelSpec::bsc(0.1).unwrap();
        assert!(unsupported_states(&bsc, &CodePoint::new(3, 1.0).unwrap()).is_empty());
        let r = unsupported_states(&bsc, &CodePoint::new(7, 4.0).unwrap());
        assert_eq!(r, StateRange { lo: 2, hi: 5 });
        assert_eq!(r.iter_desc().collect::<alloc::vec::Vec<_>>(), [5, 4, 3, 2]);
        assert_eq!(StateRange::EMPTY.iter_desc().count(), 0);
    }

    #[test]
    fn unsupported_states_match_capacity_definition() {
        let channels = [ChannelSpec::qec(3, 0.2).unwrap(), ChannelSpec::bsc(0.2).unwrap()];
        for ch in &channels {
            for n in 1..=64u32 {
                for step in 0..=(4 * n) {
                    let logqm = step as f64 * 0.25 + if step % 3 == 1 { 0.013 } else { 0.0 };
                    let Ok(point) = CodePoint::new(n, logqm) else { continue };
                    let set = unsupported_states(ch, &point);
                    for s in 0..=n {
                        let cap = state_capacity(ch, n, s).unwrap();
                        let by_def = match ch {
                            ChannelSpec::Qec { .. } => cap < logqm,
                            // compare in the same log domain used internally
                            ChannelSpec::Bsc { .. } => {
                                ln_choose(n, s) > (n as f64 - logqm) * core::f64::consts::LN_2
                            }
                        };
                        assert_eq!(set.contains(s), by_def, "{ch} n={n} logqm={logqm} s={s}");
                    }
                    if let ChannelSpec::Bsc { .. } = ch {
                        if !set.is_empty() {
                            assert_eq!(set.lo, n - set.hi);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_states_grow_with_rate() {
        for ch in [ChannelSpec::qec(2, 0.3).unwrap(), ChannelSpec::bsc(0.3).unwrap()] {
            for n in [1u32, 5, 17, 64] {
                let mut prev = StateRange::EMPTY;
                for i in 0..=200 {
                    let logqm = n as f64 * i as f64 / 200.0;
                    let cur = unsupported_states(&ch, &CodePoint::new(n, logqm).unwrap());
                    if !prev.is_empty() {
                        assert!(cur.lo <= prev.lo && cur.hi >= prev.hi);
                    }
                    prev = cur;
                }
            }
        }
    }
}
