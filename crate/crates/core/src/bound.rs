use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::LogValue;

/// Default Wolfowitz constant used when none is given.
pub const DEFAULT_WOLFOWITZ_A: f64 = 0.25;

/// Identifies one of the bounds this crate evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundId {
    /// QEC converse with the structural per-state bound.
    Thm2,
    /// QEC converse with the Wolfowitz per-state bound.
    Thm3 { a: f64 },
    /// BSC converse with the structural per-state bound.
    Thm4,
    /// BSC converse with the Wolfowitz per-state bound.
    Thm5 { a: f64 },
    /// Meta-converse for the BEC.
    Meta,
    /// Dependence-testing achievability bound for the BEC.
    Dt,
    /// Random-coding-union achievability bound for the BSC.
    Rcu,
}

impl BoundId {
    pub fn name(&self) -> &'static str {
        match self {
            BoundId::Thm2 => "thm2",
            BoundId::Thm3 { .. } => "thm3",
            BoundId::Thm4 => "thm4",
            BoundId::Thm5 { .. } => "thm5",
            BoundId::Meta => "meta",
            BoundId::Dt => "dt",
            BoundId::Rcu => "rcu",
        }
    }

    /// Converse bounds lower-bound ε; achievability bounds upper-bound it.
    pub fn is_converse(&self) -> bool {
        !matches!(self, BoundId::Dt | BoundId::Rcu)
    }

    pub fn wolfowitz_a(&self) -> Option<f64> {
        match *self {
            BoundId::Thm3 { a } | BoundId::Thm5 { a } => Some(a),
            _ => None,
        }
    }

    /// Parses `thm2`, `thm3`, `thm3(0.1)`, ... using `default_a` for a bare
    /// `thm3`/`thm5`.
    pub fn parse_with_default(s: &str, default_a: f64) -> Result<BoundId> {
        let s = s.trim().to_ascii_lowercase();
        let (name, a) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or(Error::Domain("unterminated bound parameter"))?;
                let inner = inner.trim();
                let inner = inner.strip_prefix("a=").unwrap_or(inner);
                let a = inner
                    .parse::<f64>()
                    .map_err(|_| Error::Domain("invalid Wolfowitz constant"))?;
                (name.trim().into(), Some(a))
            }
            None => (s, None),
        };
        let wolfowitz = |a: Option<f64>| -> Result<f64> {
            let a = a.unwrap_or(default_a);
            if a > 0.0 && a.is_finite() {
                Ok(a)
            } else {
                Err(Error::Domain("Wolfowitz constant A must be positive and finite"))
            }
        };
        let id = match name.as_str() {
            "thm2" => BoundId::Thm2,
            "thm3" => BoundId::Thm3 { a: wolfowitz(a)? },
            "thm4" => BoundId::Thm4,
            "thm5" => BoundId::Thm5 { a: wolfowitz(a)? },
            "meta" => BoundId::Meta,
            "dt" => BoundId::Dt,
            "rcu" => BoundId::Rcu,
            _ => return Err(Error::Domain("unknown bound id")),
        };
        if a.is_some() && id.wolfowitz_a().is_none() {
            return Err(Error::Domain("only thm3 and thm5 take a parameter"));
        }
        Ok(id)
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoundId> {
        BoundId::parse_with_default(s, DEFAULT_WOLFOWITZ_A)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.wolfowitz_a() {
            Some(a) => write!(f, "{}({})", self.name(), a),
            None => f.write_str(self.name()),
        }
    }
}

/// One state's contribution to a converse sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateTerm {
    pub s: u32,
    pub pmf: LogValue,
    pub per_state_lb: f64,
    pub term: LogValue,
}

/// Value of a bound at one code point.
///
/// For converse bounds the value is a lower bound on the average error
/// probability of any code, for achievability bounds an upper bound on the
/// error probability of the best code.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub bound: BoundId,
    pub log_epsilon: LogValue,
    pub per_state_terms: Option<Vec<StateTerm>>,
}

impl BoundResult {
    pub fn epsilon(&self) -> f64 {
        self.log_epsilon.to_linear().min(1.0)
    }
}
