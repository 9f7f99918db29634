//! Log-domain scalar kernels shared by every bound.
//!
//! All probability masses are carried as [`LogValue`]s (natural log, with
//! negative infinity standing for an exact zero) and every sum goes through
//! [`stable_sum`], so accuracy policy lives in one place.
//!
//! [`stable_sum`] shifts all terms by their maximum, exponentiates, and adds
//! them with Neumaier's compensated summation. The result is accurate to a
//! few ulps regardless of the number of terms, which is what the binomial
//! normalisation checks at `n = 2000` rely on.

use core::fmt;
use core::ops::Mul;

use crate::error::{Error, Result};

/// Largest `n` for which [`log_binomial`] uses exact integer arithmetic.
pub const EXACT_BINOMIAL_MAX_N: u64 = 60;

/// Largest `n` accepted by [`log_binomial`].
pub const LOG_BINOMIAL_MAX_N: u64 = 1_000_000;

/// A nonnegative quantity stored as its natural logarithm.
///
/// `-inf` encodes an exact zero. NaN is never produced by the kernels in this
/// module.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// Wraps a natural-log value. `ln` must not be NaN.
    pub fn from_ln(ln: f64) -> LogValue {
        debug_assert!(!ln.is_nan(), "LogValue from NaN");
        LogValue(ln)
    }

    /// Converts a nonnegative linear value.
    pub fn from_linear(x: f64) -> Result<LogValue> {
        if !(x >= 0.0) || x.is_infinite() {
            return Err(Error::Domain("LogValue requires a finite nonnegative value"));
        }
        Ok(LogValue(libm::log(x)))
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn to_linear(self) -> f64 {
        libm::exp(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `ln(1 - x)` for this value `x ≤ 1`; values above one are clamped to zero.
    pub fn complement(self) -> LogValue {
        if self.0 >= 0.0 {
            LogValue::ZERO
        } else {
            LogValue(log1m_exp(self.0))
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            LogValue::ZERO
        } else {
            LogValue(self.0 + rhs.0)
        }
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogValue(ln={})", self.0)
    }
}

/// `ln(1 - e^x)` for `x ≤ 0`.
pub fn log1m_exp(x: f64) -> f64 {
    if x >= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x > -core::f64::consts::LN_2 {
        libm::log(-libm::expm1(x))
    } else {
        libm::log1p(-libm::exp(x))
    }
}

/// `ln(e^a + e^b)`.
pub fn log_add(a: LogValue, b: LogValue) -> LogValue {
    let (hi, lo) = if a.0 >= b.0 { (a.0, b.0) } else { (b.0, a.0) };
    if lo == f64::NEG_INFINITY {
        return LogValue(hi);
    }
    LogValue(hi + libm::log1p(libm::exp(lo - hi)))
}

/// `ln Σ exp(term)` with max-shift and compensated accumulation.
pub fn stable_sum<I>(terms: I) -> LogValue
where
    I: IntoIterator<Item = LogValue>,
    I::IntoIter: Clone,
{
    let iter = terms.into_iter();
    let max = iter
        .clone()
        .map(LogValue::ln)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return LogValue::ZERO;
    }
    if max == f64::INFINITY {
        return LogValue(f64::INFINITY);
    }
    let mut sum = NeumaierSum::default();
    for t in iter {
        sum.add(libm::exp(t.0 - max));
    }
    LogValue(max + libm::log(sum.total()))
}

/// Neumaier (improved Kahan–Babuška) running sum in linear domain.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    carry: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `ln C(n, k)`.
///
/// Exact integer evaluation for `n ≤ 60`. Above that, a short multiplicative
/// product when `min(k, n-k) < 16`, otherwise Stirling's series for the three
/// factorials with the leading `x ln x` terms recombined so that nothing
/// cancels catastrophically.
pub fn log_binomial(n: u64, k: u64) -> Result<LogValue> {
    if k > n {
        return Err(Error::Domain("log_binomial requires k <= n"));
    }
    if n > LOG_BINOMIAL_MAX_N {
        return Err(Error::Domain("log_binomial requires n <= 1e6"));
    }
    Ok(LogValue(ln_choose(n, k)))
}

fn ln_choose(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_MAX_N {
        return libm::log(exact_choose(n, k) as f64);
    }
    if k < 16 {
        let mut prod = 1.0f64;
        for i in 1..=k {
            prod = prod * ((n - k + i) as f64) / (i as f64);
        }
        return libm::log(prod);
    }
    let (nf, kf) = (n as f64, k as f64);
    let rest = nf - kf;
    // n ln n - k ln k - (n-k) ln(n-k) = k ln(n/k) - (n-k) ln(1 - k/n)
    let main = kf * libm::log(nf / kf) - rest * libm::log1p(-kf / nf);
    let half = 0.5 * libm::log(nf / (2.0 * core::f64::consts::PI * kf * rest));
    main + half + stirling_correction(nf) - stirling_correction(kf) - stirling_correction(rest)
}

fn exact_choose(n: u64, k: u64) -> u128 {
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        c = c * (n as u128 - k as u128 + i) / i;
    }
    c
}

/// `ln m! - (m ln m - m + ½ ln 2πm)`, valid for `m ≥ 16`.
fn stirling_correction(m: f64) -> f64 {
    let inv = 1.0 / m;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        - inv2
            * (1.0 / 360.0
                - inv2
                    * (1.0 / 1260.0
                        - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0 - inv2 * (691.0 / 360360.0))))))
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain("probability outside [0, 1]"))
    }
}

/// `s · ln p`, with `0 · ln 0 = 0`.
fn xlogy(s: u64, ln_p: f64) -> f64 {
    if s == 0 {
        0.0
    } else {
        s as f64 * ln_p
    }
}

/// `ln[ C(n,s) p^s (1-p)^(n-s) ]`.
pub fn binomial_pmf(n: u64, s: u64, p: f64) -> Result<LogValue> {
    if s > n {
        return Err(Error::Domain("binomial_pmf requires s <= n"));
    }
    check_probability(p)?;
    let ln_q = libm::log1p(-p);
    let ln_p = libm::log(p);
    let v = xlogy(s, ln_p) + xlogy(n - s, ln_q);
    if v == f64::NEG_INFINITY {
        return Ok(LogValue::ZERO);
    }
    Ok(LogValue(log_binomial(n, s)?.0 + v))
}

/// `ln[ C(j-1, k-1) δ^(j-k) (1-δ)^k ]`: probability that the `k`-th unerased
/// symbol arrives at position `j`.
pub fn negbinomial_pmf(j: u64, k_ceil: u64, delta: f64) -> Result<LogValue> {
    if k_ceil == 0 {
        return Err(Error::Domain("negbinomial_pmf requires k >= 1"));
    }
    if j < k_ceil {
        return Err(Error::Domain("negbinomial_pmf requires j >= k"));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain("negbinomial_pmf requires delta in [0, 1)"));
    }
    let v = xlogy(j - k_ceil, libm::log(delta)) + xlogy(k_ceil, libm::log1p(-delta));
    if v == f64::NEG_INFINITY {
        return Ok(LogValue::ZERO);
    }
    Ok(LogValue(log_binomial(j - 1, k_ceil - 1)?.0 + v))
}
