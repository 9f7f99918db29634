//! Turning ε-bounds into rate-versus-blocklength curves.
//!
//! Every bound here is nondecreasing in `logqM`, so the largest message size
//! meeting a target error probability is found by bisection on the real
//! `logqM ∈ [0, n]`. Converse curves report the upper end of the final
//! bracket (no code can do better), achievability curves the lower end (a
//! code is guaranteed to exist).

use alloc::vec::Vec;

use crate::achievability::{dt_bound_bec, rcu_bound_bsc};
use crate::bound::{BoundId, BoundResult};
use crate::channels::{ChannelSpec, CodePoint};
use crate::converse::{converse_epsilon_lb, meta_converse_bec, PerStateStrategy};
use crate::error::{Error, Result};
use crate::vlsf::{vlsf_blocklength_lb, VlsfPoint, VlsfResult};

pub const DEFAULT_RATE_TOLERANCE: f64 = 1e-9;
pub const MAX_BISECTION_STEPS: u32 = 64;

/// Evaluates `bound` on `ch` at `(n, logqm)`.
pub fn evaluate_bound(ch: &ChannelSpec, bound: BoundId, n: u32, logqm: f64) -> Result<BoundResult> {
    let point = CodePoint::new(n, logqm)?;
    let mismatch = || Error::BoundChannelMismatch {
        bound: bound.name(),
        channel: ch.kind(),
    };
    match (bound, ch) {
        (BoundId::Thm2, ChannelSpec::Qec { .. }) | (BoundId::Thm4, ChannelSpec::Bsc { .. }) => {
            converse_epsilon_lb(ch, &point, PerStateStrategy::Structural)
        }
        (BoundId::Thm3 { a }, ChannelSpec::Qec { .. }) | (BoundId::Thm5 { a }, ChannelSpec::Bsc { .. }) => {
            converse_epsilon_lb(ch, &point, PerStateStrategy::wolfowitz(a)?)
        }
        (BoundId::Meta, ChannelSpec::Qec { q: 2, delta }) => meta_converse_bec(n, libm::exp2(logqm), *delta),
        (BoundId::Dt, ChannelSpec::Qec { q: 2, delta }) => dt_bound_bec(n, libm::exp2(logqm), *delta),
        (BoundId::Rcu, ChannelSpec::Bsc { delta }) => rcu_bound_bsc(n, libm::exp2(logqm), *delta),
        _ => Err(mismatch()),
    }
}

/// Which end of the final bisection bracket to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketSide {
    /// Largest `logqM` verified to meet the target.
    Lower,
    /// Smallest `logqM` verified to miss it.
    Upper,
}

/// Largest `logqM ∈ [0, n]` with `bound(logqM) ≤ eps_target`, to absolute
/// tolerance `tol`.
///
/// Returns 0 when even `logqM = 0` misses the target and `n` when the whole
/// range meets it. Fails with [`Error::NonMonotone`] if a midpoint falls
/// outside the values at the bracket ends.
pub fn invert_rate<F>(mut bound: F, n: u32, eps_target: f64, tol: f64, side: BracketSide) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::Domain("rate tolerance must be positive"));
    }
    let mut eval = |x: f64| -> Result<f64> {
        let v = bound(x)?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(Error::NotAProbability(v))
        }
    };
    let (mut lo, mut hi) = (0.0, n as f64);
    let mut eps_lo = eval(lo)?;
    if eps_lo > eps_target {
        return Ok(0.0);
    }
    let mut eps_hi = eval(hi)?;
    if eps_hi <= eps_target {
        return Ok(hi);
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let eps_mid = eval(mid)?;
        let slack = 1e-12 * eps_hi;
        if eps_mid + slack < eps_lo || eps_mid > eps_hi + slack {
            return Err(Error::NonMonotone {
                lo,
                mid,
                hi,
                eps_lo,
                eps_mid,
                eps_hi,
            });
        }
        if eps_mid <= eps_target {
            lo = mid;
            eps_lo = eps_mid;
        } else {
            hi = mid;
            eps_hi = eps_mid;
        }
    }
    Ok(match side {
        BracketSide::Lower => lo,
        BracketSide::Upper => hi,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRequest {
    pub channel: ChannelSpec,
    pub eps_target: f64,
    pub n_grid: Vec<u32>,
    pub bounds: Vec<BoundId>,
    pub rate_tolerance: f64,
}

impl CurveRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_target > 0.0 && self.eps_target <= 1.0) {
            return Err(Error::Domain("eps target must lie in (0, 1]"));
        }
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            return Err(Error::Domain("n grid must be nonempty and positive"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("n grid must be strictly ascending"));
        }
        if self.bounds.is_empty() {
            return Err(Error::Domain("at least one bound is required"));
        }
        if !(self.rate_tolerance > 0.0) {
            return Err(Error::Domain("rate tolerance must be positive"));
        }
        for &b in &self.bounds {
            evaluate_bound(&self.channel, b, 1, 0.0)?;
        }
        Ok(())
    }

    /// `(n, bound)` pairs in output order: by `n`, then by bound.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, BoundId)> + '_ {
        self.n_grid
            .iter()
            .flat_map(move |&n| self.bounds.iter().map(move |&b| (n, b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub n: u32,
    pub bound: BoundId,
    /// Symbols (QEC) or bits (BSC) per channel use.
    pub rate: f64,
    pub logqm: f64,
}

/// Rate of `bound` at blocklength `n` for the request's channel and target.
pub fn curve_point(req: &CurveRequest, n: u32, bound: BoundId) -> Result<CurvePoint> {
    let side = if bound.is_converse() {
        BracketSide::Upper
    } else {
        BracketSide::Lower
    };
    let ch = req.channel;
    let logqm = invert_rate(
        |x| Ok(evaluate_bound(&ch, bound, n, x)?.epsilon()),
        n,
        req.eps_target,
        req.rate_tolerance,
        side,
    )?;
    Ok(CurvePoint {
        n,
        bound,
        rate: logqm / n as f64,
        logqm,
    })
}

/// All curve points of `req`, sequentially, in [`CurveRequest::pairs`] order.
pub fn run_curve(req: &CurveRequest) -> Result<Vec<CurvePoint>> {
    req.validate()?;
    req.pairs().map(|(n, b)| curve_point(req, n, b)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VlsfRow {
    pub point: VlsfPoint,
    pub result: VlsfResult,
}

impl VlsfRow {
    /// Message symbols per average channel use.
    pub fn rate(&self) -> f64 {
        self.point.k / self.result.la_lb
    }
}

/// Average-blocklength bound for each `k` in `k_grid`.
pub fn run_vlsf_curve(k_grid: &[f64], n: u32, delta: f64, q: u32, tol: f64) -> Result<Vec<VlsfRow>> {
    k_grid
        .iter()
        .map(|&k| {
            let point = VlsfPoint::new(n, k, delta, q)?;
            Ok(VlsfRow {
                point,
                result: vlsf_blocklength_lb(&point, tol)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thm2_root(eps: f64) -> f64 {
        // QEC q=2, δ=½, n=2 on (1, 2]: ε = ½(1 - 2^(1-x)) + ¼(1 - 2^-x) = ¾ - (5/4) 2^-x
        -libm::log2((0.75 - eps) / 1.25)
    }

    #[test]
    fn inverts_small_qec_point() {
        let ch = ChannelSpec::bec(0.5).unwrap();
        let f = |x| Ok(evaluate_bound(&ch, BoundId::Thm2, 2, x)?.epsilon());
        let x = invert_rate(f, 2, 0.2, 1e-12, BracketSide::Upper).unwrap();
        assert!(x > 1.0 && x < 2.0);
        assert!((x - thm2_root(0.2)).abs() < 1e-11);
        assert!((x / 2.0 - 0.592_2).abs() < 1e-3);
    }

    #[test]
    fn full_target_gives_full_rate() {
        for ch in [ChannelSpec::bec(0.3).unwrap(), ChannelSpec::bsc(0.2).unwrap()] {
            let b = if matches!(ch, ChannelSpec::Qec { .. }) { BoundId::Thm2 } else { BoundId::Thm4 };
            let f = |x| Ok(evaluate_bound(&ch, b, 9, x)?.epsilon());
            assert_eq!(invert_rate(f, 9, 1.0, 1e-9, BracketSide::Upper).unwrap(), 9.0);
        }
    }

    #[test]
    fn admits_hamming_size_on_bsc() {
        let ch = ChannelSpec::bsc(0.05).unwrap();
        let f = |x| Ok(evaluate_bound(&ch, BoundId::Thm4, 7, x)?.epsilon());
        let x = invert_rate(f, 7, 0.0444, 1e-9, BracketSide::Lower).unwrap();
        assert!(x >= 4.0);
    }

    #[test]
    fn unreachable_target_gives_zero() {
        let f = |_x: f64| Ok(0.5);
        assert_eq!(invert_rate(f, 10, 0.1, 1e-9, BracketSide::Lower).unwrap(), 0.0);
    }

    #[test]
    fn detects_non_monotone_bound() {
        // dips below its left value in the middle
        let f = |x: f64| Ok(if x < 4.0 { 0.1 } else if x < 6.0 { 0.0 } else { 0.9 });
        let err = invert_rate(f, 10, 0.5, 1e-9, BracketSide::Lower).unwrap_err();
        assert!(matches!(err, Error::NonMonotone { .. }));
        let g = |_x: f64| Ok(1.5);
        assert!(matches!(
            invert_rate(g, 10, 0.5, 1e-9, BracketSide::Lower),
            Err(Error::NotAProbability(_))
        ));
    }

    #[test]
    fn rejects_mismatched_bounds() {
        let bsc = ChannelSpec::bsc(0.1).unwrap();
        assert!(matches!(
            evaluate_bound(&bsc, BoundId::Thm2, 4, 1.0),
            Err(Error::BoundChannelMismatch { .. })
        ));
        let qec3 = ChannelSpec::qec(3, 0.1).unwrap();
        assert!(evaluate_bound(&qec3, BoundId::Meta, 4, 1.0).is_err());
        assert!(evaluate_bound(&qec3, BoundId::Dt, 4, 1.0).is_err());
        assert!(evaluate_bound(&qec3, BoundId::Thm3 { a: 0.1 }, 4, 1.0).is_ok());
    }

    #[test]
    fn request_validation() {
        let req = CurveRequest {
            channel: ChannelSpec::bec(0.5).unwrap(),
            eps_target: 1e-3,
            n_grid: alloc::vec![10, 20],
            bounds: alloc::vec![BoundId::Thm2, BoundId::Dt],
            rate_tolerance: 1e-9,
        };
        assert!(req.validate().is_ok());
        assert_eq!(
            req.pairs().collect::<Vec<_>>(),
            [(10, BoundId::Thm2), (10, BoundId::Dt), (20, BoundId::Thm2), (20, BoundId::Dt)]
        );
        let mut bad = req.clone();
        bad.n_grid = alloc::vec![20, 10];
        assert!(bad.validate().is_err());
        let mut bad = req.clone();
        bad.bounds = alloc::vec![BoundId::Rcu];
        assert!(bad.validate().is_err());
        let mut bad = req;
        bad.eps_target = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn vlsf_rows() {
        let rows = run_vlsf_curve(&[1.0, 2.0, 3.0], 1, 0.5, 2, 1e-12).unwrap();
        assert_eq!(rows.len(), 3);
        assert!((rows[2].result.la_lb - 6.0).abs() < 1e-9);
        assert!((rows[2].rate() - 0.5).abs() < 1e-9);
    }
}
