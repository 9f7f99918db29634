//! Zero-error variable-length stop-feedback coding over the QEC.
//!
//! Symbols are sent in packets of `n`; after each packet the receiver either
//! stops or asks for more. With zero error the decoder cannot stop before it
//! has seen `⌈k⌉` unerased symbols, so the index `J` of the `⌈k⌉`-th unerased
//! symbol is negative binomial and the number of packets is `⌈J / n⌉`. The
//! average blocklength is therefore at least `n · E[⌈J / n⌉]`.

use crate::error::{Error, Result};
use crate::numerics::{binomial_pmf, negbinomial_pmf, stable_sum, LogValue, NeumaierSum};

/// Parameters of a VLSF code: packet size `n`, message size `k` in q-ary
/// symbols, erasure probability `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VlsfPoint {
    pub n: u32,
    pub k: f64,
    pub delta: f64,
    /// Alphabet size. Only used for labelling.
    pub q: u32,
}

impl VlsfPoint {
    pub fn new(n: u32, k: f64, delta: f64, q: u32) -> Result<VlsfPoint> {
        if n == 0 {
            return Err(Error::Domain("packet size n must be at least 1"));
        }
        if !(k > 0.0) || k.is_infinite() {
            return Err(Error::Domain("message size k must be positive and finite"));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Domain("erasure probability must lie in [0, 1)"));
        }
        if q < 2 {
            return Err(Error::Domain("alphabet size must be at least 2"));
        }
        Ok(VlsfPoint { n, k, delta, q })
    }

    pub fn k_ceil(&self) -> u64 {
        libm::ceil(self.k) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VlsfResult {
    /// Lower bound on the average blocklength in channel uses.
    pub la_lb: f64,
    /// Number of packets summed.
    pub m_max: u64,
    /// Probability that decoding needs more than `m_max` packets.
    pub tail_mass: f64,
}

/// Probability that decoding completes during packet `m` (1-based).
pub fn packet_success_prob(m: u64, pt: &VlsfPoint) -> Result<LogValue> {
    if m == 0 {
        return Err(Error::Domain("packet index starts at 1"));
    }
    let n = pt.n as u64;
    let kc = pt.k_ceil();
    let first = ((m - 1) * n + 1).max(kc);
    let last = m * n;
    if first > last {
        return Ok(LogValue::ZERO);
    }
    let mut terms = alloc::vec::Vec::with_capacity((last - first + 1) as usize);
    for j in first..=last {
        terms.push(negbinomial_pmf(j, kc, pt.delta)?);
    }
    Ok(stable_sum(terms))
}

/// `P(J > m n)`: fewer than `⌈k⌉` unerased symbols among the first `m n`.
fn tail_after(m: u64, pt: &VlsfPoint) -> Result<f64> {
    let trials = m * pt.n as u64;
    let kc = pt.k_ceil();
    if trials < kc {
        return Ok(1.0);
    }
    let success = 1.0 - pt.delta;
    let mut sum = NeumaierSum::default();
    for i in 0..kc {
        sum.add(binomial_pmf(trials, i, success)?.to_linear());
    }
    Ok(sum.total().clamp(0.0, 1.0))
}

/// Lower bound on the average blocklength, truncated once the remaining
/// probability mass is at most `tol`. Dropped terms are nonnegative, so the
/// truncated value is still a lower bound.
pub fn vlsf_blocklength_lb(pt: &VlsfPoint, tol: f64) -> Result<VlsfResult> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain("truncation tolerance must lie in (0, 1)"));
    }
    let mut expected_packets = NeumaierSum::default();
    let mut m = 0u64;
    let tail_mass = loop {
        m += 1;
        let p = packet_success_prob(m, pt)?.to_linear();
        expected_packets.add(m as f64 * p);
        let tail = tail_after(m, pt)?;
        if tail <= tol {
            break tail;
        }
    };
    Ok(VlsfResult {
        la_lb: pt.n as f64 * expected_packets.total(),
        m_max: m,
        tail_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: u32, k: f64, delta: f64) -> VlsfPoint {
        VlsfPoint::new(n, k, delta, 2).unwrap()
    }

    #[test]
    fn packet_examples() {
        let p = point(2, 1.0, 0.5);
        assert!((packet_success_prob(1, &p).unwrap().to_linear() - 0.75).abs() < 1e-15);
        assert!((packet_success_prob(2, &p).unwrap().to_linear() - 0.1875).abs() < 1e-15);
        let clean = point(1, 1.0, 0.0);
        assert_eq!(packet_success_prob(1, &clean).unwrap().to_linear(), 1.0);
        assert!(packet_success_prob(2, &clean).unwrap().is_zero());
        // k = 5 cannot finish in the first packet of 2
        assert!(packet_success_prob(1, &point(2, 5.0, 0.5)).unwrap().is_zero());
        assert!(packet_success_prob(0, &p).is_err());
    }

    #[test]
    fn blocklength_examples() {
        let r = vlsf_blocklength_lb(&point(1, 3.0, 0.5), 1e-12).unwrap();
        assert!(r.la_lb <= 6.0 && r.la_lb > 6.0 - 1e-9);
        let r = vlsf_blocklength_lb(&point(2, 1.0, 0.5), 1e-12).unwrap();
        assert!((r.la_lb - 8.0 / 3.0).abs() < 1e-9);
        let r = vlsf_blocklength_lb(&point(1, 2.0, 0.0), 1e-12).unwrap();
        assert_eq!(r.la_lb, 2.0);
        assert_eq!(r.m_max, 2);
        assert_eq!(r.tail_mass, 0.0);
    }

    #[test]
    fn fractional_k_uses_ceiling() {
        let a = vlsf_blocklength_lb(&point(3, 4.2, 0.3), 1e-13).unwrap();
        let b = vlsf_blocklength_lb(&point(3, 5.0, 0.3), 1e-13).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(VlsfPoint::new(0, 1.0, 0.5, 2).is_err());
        assert!(VlsfPoint::new(1, 0.0, 0.5, 2).is_err());
        assert!(VlsfPoint::new(1, 1.0, 1.0, 2).is_err());
        assert!(vlsf_blocklength_lb(&point(1, 1.0, 0.5), 0.0).is_err());
    }

    #[test]
    fn truncated_mass_is_within_tolerance() {
        for (n, k, d) in [(1, 1.0, 0.9), (4, 17.0, 0.5), (7, 3.0, 0.1), (16, 64.0, 0.8)] {
            let pt = point(n, k, d);
            let tol = 1e-10;
            let r = vlsf_blocklength_lb(&pt, tol).unwrap();
            let mut mass = NeumaierSum::default();
            for m in 1..=r.m_max {
                mass.add(packet_success_prob(m, &pt).unwrap().to_linear());
            }
            assert!(r.tail_mass <= tol);
            assert!((mass.total() + r.tail_mass - 1.0).abs() < 1e-12);
        }
    }
}
