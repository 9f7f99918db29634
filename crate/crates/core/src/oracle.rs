//! Exact maximum-likelihood error probability of explicit small codes.
//!
//! Both channels are handled by enumeration, with uniform tie-breaking over
//! the most likely codewords. The result is kept as an exact weight profile:
//!
//! ```text
//! ε(δ) = Σ_w δ^w (1-δ)^(n-w) · numerators[w] / M
//! ```
//!
//! with integer numerators, so MDS codes can be compared against the converse
//! without rounding noise beyond the final polynomial evaluation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;

/// Largest blocklength accepted by the enumerating oracles.
pub const MAX_ORACLE_N: usize = 24;

/// Largest number of codewords [`rs_code`] and [`Codebook::full_space`] build.
pub const MAX_CODEWORDS: u64 = 1 << 24;

/// `M` distinct words of length `n` over `{0, .., q-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    q: u32,
    n: usize,
    symbols: Vec<u8>,
}

impl Codebook {
    pub fn new(q: u32, words: Vec<Vec<u8>>) -> Result<Codebook> {
        let n = words.first().map(Vec::len).ok_or(Error::Construction("codebook is empty"))?;
        let mut symbols = Vec::with_capacity(n * words.len());
        for w in &words {
            if w.len() != n {
                return Err(Error::Construction("codewords have different lengths"));
            }
            symbols.extend_from_slice(w);
        }
        Codebook::from_symbols(q, n, symbols)
    }

    fn from_symbols(q: u32, n: usize, symbols: Vec<u8>) -> Result<Codebook> {
        if !(2..=256).contains(&q) {
            return Err(Error::Construction("alphabet size must lie in 2..=256"));
        }
        if n == 0 {
            return Err(Error::Construction("blocklength must be at least 1"));
        }
        if symbols.iter().any(|&x| x as u32 >= q) {
            return Err(Error::Construction("symbol out of alphabet"));
        }
        let code = Codebook { q, n, symbols };
        let mut sorted: Vec<&[u8]> = code.words().collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Construction("codewords must be distinct"));
        }
        Ok(code)
    }

    /// `{i i ... i : i < q}`.
    pub fn repetition(q: u32, n: usize) -> Result<Codebook> {
        let words = (0..q).map(|i| vec![i as u8; n]).collect();
        Codebook::new(q, words)
    }

    /// Every word of length `n`.
    pub fn full_space(q: u32, n: usize) -> Result<Codebook> {
        let count = checked_pow(q as u64, n).filter(|&c| c <= MAX_CODEWORDS);
        let count = count.ok_or(Error::Construction("full space is too large"))?;
        let mut symbols = Vec::with_capacity(count as usize * n);
        for idx in 0..count {
            push_base_q(&mut symbols, idx, q as u64, n);
        }
        Codebook::from_symbols(q, n, symbols)
    }

    /// The binary [7, 4] Hamming code.
    pub fn hamming74() -> Codebook {
        let mut words = Vec::with_capacity(16);
        for m in 0u8..16 {
            let d = [m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1];
            let p1 = d[0] ^ d[1] ^ d[3];
            let p2 = d[0] ^ d[2] ^ d[3];
            let p3 = d[1] ^ d[2] ^ d[3];
            words.push(vec![p1, p2, d[0], p3, d[1], d[2], d[3]]);
        }
        Codebook::new(2, words).expect("Hamming codewords are distinct")
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.symbols.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn words(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.symbols.chunks_exact(self.n)
    }

    /// `log_q M`.
    pub fn log_q_size(&self) -> f64 {
        libm::log(self.len() as f64) / libm::log(self.q as f64)
    }

    /// Minimum Hamming distance; `None` for a single codeword.
    pub fn min_distance(&self) -> Option<usize> {
        let mut best = None;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let d = hamming(self.word(i), self.word(j));
                best = Some(best.map_or(d, |b: usize| b.min(d)));
            }
        }
        best
    }
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn push_base_q(out: &mut Vec<u8>, mut idx: u64, q: u64, len: usize) {
    for _ in 0..len {
        out.push((idx % q) as u8);
        idx /= q;
    }
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Reed–Solomon evaluation code over the prime field `GF(q)`: all polynomials
/// of degree below `k` evaluated at `0, 1, .., n-1`.
pub fn rs_code(q: u32, n: usize, k: usize) -> Result<Codebook> {
    if !is_prime(q) || q > 256 {
        return Err(Error::Construction("Reed-Solomon codes need a prime q <= 256"));
    }
    if k == 0 || k > n || n > q as usize {
        return Err(Error::Construction("Reed-Solomon codes need 1 <= k <= n <= q"));
    }
    let count = checked_pow(q as u64, k)
        .filter(|&c| c <= MAX_CODEWORDS)
        .ok_or(Error::Construction("Reed-Solomon code is too large"))?;
    let q64 = q as u64;
    let mut coeffs = Vec::with_capacity(k);
    let mut symbols = Vec::with_capacity(count as usize * n);
    for idx in 0..count {
        coeffs.clear();
        push_base_q(&mut coeffs, idx, q64, k);
        for x in 0..n as u64 {
            // Horner
            let v = coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % q64);
            symbols.push(v as u8);
        }
    }
    Codebook::from_symbols(q, n, symbols)
}

/// Exact ML error probability as a weight profile over error counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactError {
    /// Evaluated error probability.
    pub epsilon: f64,
    /// `numerators[w] / denominator` is the summed conditional error over all
    /// error patterns of weight `w`.
    pub numerators: Vec<u64>,
    pub denominator: u64,
}

impl ExactError {
    fn from_profile(numerators: Vec<u64>, denominator: u64, delta: f64) -> ExactError {
        let n = numerators.len() as i32 - 1;
        let mut sum = NeumaierSum::default();
        for (w, &num) in numerators.iter().enumerate() {
            if num == 0 {
                continue;
            }
            let w = w as i32;
            sum.add(libm::pow(delta, w as f64) * libm::pow(1.0 - delta, (n - w) as f64) * num as f64);
        }
        ExactError {
            epsilon: (sum.total() / denominator as f64).clamp(0.0, 1.0),
            numerators,
            denominator,
        }
    }
}

fn check_oracle_args(code: &Codebook, delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain("delta must lie in [0, 1]"));
    }
    if code.n() > MAX_ORACLE_N {
        return Err(Error::Domain("oracle enumeration supports n <= 24"));
    }
    Ok(())
}

/// Exact average ML error probability over the QEC.
///
/// For an erasure pattern `E`, codewords that agree off `E` are
/// indistinguishable, so with uniform tie-breaking the success probability is
/// (number of distinct projections) / M.
pub fn exact_eps_qec(code: &Codebook, delta: f64) -> Result<ExactError> {
    check_oracle_args(code, delta)?;
    let n = code.n();
    let m = code.len() as u64;
    let q = code.q() as u128;
    if (n as f64) * libm::log2(q as f64) > 128.0 {
        return Err(Error::Domain("q^n does not fit the projection key"));
    }
    let mut binom = vec![0u64; n + 1];
    let mut groups = vec![0u64; n + 1];
    let mut keys: Vec<u128> = Vec::with_capacity(code.len());
    for erased in 0u32..(1u32 << n) {
        keys.clear();
        keys.extend(code.words().map(|w| {
            w.iter()
                .enumerate()
                .filter(|(i, _)| erased & (1 << i) == 0)
                .fold(0u128, |acc, (_, &x)| acc * q + x as u128)
        }));
        keys.sort_unstable();
        keys.dedup();
        let e = erased.count_ones() as usize;
        binom[e] += 1;
        groups[e] += keys.len() as u64;
    }
    let numerators = binom.iter().zip(&groups).map(|(&b, &g)| b * m - g).collect();
    Ok(ExactError::from_profile(numerators, m, delta))
}

/// Exact average ML error probability over the BSC.
///
/// `P(correct) = (1/M) Σ_y max_c P(y | c)`; for δ ≤ ½ the maximiser is a
/// nearest codeword, above ½ a farthest one.
pub fn exact_eps_bsc(code: &Codebook, delta: f64) -> Result<ExactError> {
    if code.q() != 2 {
        return Err(Error::Domain("BSC oracle needs a binary code"));
    }
    check_oracle_args(code, delta)?;
    let n = code.n();
    let m = code.len() as u64;
    let packed: Vec<u32> = code
        .words()
        .map(|w| w.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | ((b as u32) << i)))
        .collect();
    let nearest = delta <= 0.5;
    // best[d] = number of outputs whose most likely codeword is at distance d
    let mut best = vec![0u64; n + 1];
    for y in 0u32..(1u32 << n) {
        let dists = packed.iter().map(|&c| (c ^ y).count_ones());
        let d = if nearest { dists.min() } else { dists.max() };
        best[d.expect("codebook is nonempty") as usize] += 1;
    }
    let mut binom = vec![1u64; n + 1];
    for w in 1..=n {
        binom[w] = binom[w - 1] * (n - w + 1) as u64 / w as u64;
    }
    let numerators = binom.iter().zip(&best).map(|(&b, &a)| b * m - a).collect();
    Ok(ExactError::from_profile(numerators, m, delta))
}
