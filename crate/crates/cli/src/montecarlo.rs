//! Seeded Monte-Carlo evaluation of the generic DT and RCU expectations.
//!
//! Nothing here uses the closed-form specialisations in `fbbounds_core`: the
//! channel is an arbitrary transition matrix, inputs are drawn uniformly,
//! and information densities are computed from the matrix directly. For RCU
//! the inner probability `P[i(X̄;Y) ≥ i(X;Y) | X, Y]` is computed exactly by
//! enumerating every `X̄` (memoised per output and threshold), so only the
//! outer expectation is sampled.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fbbounds_core::ChannelSpec;

/// Likelihood ties are resolved with this slack on log-probabilities.
const TIE_SLACK: f64 = 1e-9;

/// A discrete memoryless channel given by its transition matrix.
#[derive(Debug, Clone)]
pub struct Dmc {
    /// `rows[x][y] = P(y | x)`.
    rows: Vec<Vec<f64>>,
    /// `ln P(y)` under uniform inputs.
    ln_output: Vec<f64>,
}

impl Dmc {
    pub fn new(rows: Vec<Vec<f64>>) -> Dmc {
        let outputs = rows[0].len();
        let inputs = rows.len() as f64;
        let ln_output = (0..outputs)
            .map(|y| (rows.iter().map(|r| r[y]).sum::<f64>() / inputs).ln())
            .collect();
        Dmc { rows, ln_output }
    }

    /// BEC with outputs `{0, 1, erasure}` or BSC.
    pub fn from_spec(ch: &ChannelSpec) -> Dmc {
        match *ch {
            ChannelSpec::Qec { q, delta } => {
                let q = q as usize;
                let rows = (0..q)
                    .map(|x| {
                        let mut r = vec![0.0; q + 1];
                        r[x] = 1.0 - delta;
                        r[q] = delta;
                        r
                    })
                    .collect();
                Dmc::new(rows)
            }
            ChannelSpec::Bsc { delta } => Dmc::new(vec![vec![1.0 - delta, delta], vec![delta, 1.0 - delta]]),
        }
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    fn sample_output<R: Rng>(&self, x: usize, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let row = &self.rows[x];
        let mut acc = 0.0;
        for (y, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return y;
            }
        }
        row.iter().rposition(|&p| p > 0.0).expect("row has mass")
    }

    fn ln_likelihood(&self, x: &[usize], y: &[usize]) -> f64 {
        x.iter().zip(y).map(|(&a, &b)| self.rows[a][b].ln()).sum()
    }

    /// Information density in bits.
    fn info_density_bits(&self, x: &[usize], y: &[usize]) -> f64 {
        let ln_out: f64 = y.iter().map(|&b| self.ln_output[b]).sum();
        (self.ln_likelihood(x, y) - ln_out) / std::f64::consts::LN_2
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl Estimate {
    /// `|mean - value|` in standard errors.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if self.std_err == 0.0 {
            if d == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            d / self.std_err
        }
    }
}

#[derive(Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    fn finish(&self) -> Estimate {
        let var = if self.count > 1 { self.m2 / (self.count - 1) as f64 } else { 0.0 };
        Estimate {
            mean: self.mean,
            std_err: (var / self.count as f64).sqrt(),
            samples: self.count,
        }
    }
}

fn draw<R: Rng>(dmc: &Dmc, n: usize, rng: &mut R, x: &mut Vec<usize>, y: &mut Vec<usize>) {
    x.clear();
    y.clear();
    for _ in 0..n {
        let a = rng.gen_range(0..dmc.inputs());
        x.push(a);
        y.push(dmc.sample_output(a, rng));
    }
}

/// `E[2^{-[i(X;Y) - log2((M-1)/2)]^+}]` with uniform inputs.
pub fn mc_dt(dmc: &Dmc, n: usize, m: f64, samples: u64, seed: u64) -> Estimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_half = ((m - 1.0) / 2.0).log2();
    let (mut x, mut y) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut acc = Welford::default();
    for _ in 0..samples {
        draw(dmc, n, &mut rng, &mut x, &mut y);
        let excess = (dmc.info_density_bits(&x, &y) - log_half).max(0.0);
        acc.push((-excess).exp2());
    }
    acc.finish()
}

/// `E[min{1, (M-1) P[i(X̄;Y) ≥ i(X;Y) | X, Y]}]` with uniform inputs.
pub fn mc_rcu(dmc: &Dmc, n: usize, m: f64, samples: u64, seed: u64) -> Estimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = (dmc.inputs() as u64).pow(n as u32);
    let mut cache: HashMap<(Vec<usize>, i64), f64> = HashMap::new();
    let (mut x, mut y) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut xbar = vec![0usize; n];
    let mut acc = Welford::default();
    for _ in 0..samples {
        draw(dmc, n, &mut rng, &mut x, &mut y);
        // P(y) is common to both densities, so compare likelihoods
        let threshold = dmc.ln_likelihood(&x, &y);
        let key = (y.clone(), (threshold / TIE_SLACK).round() as i64);
        let inner = *cache.entry(key).or_insert_with(|| {
            let mut hits = 0u64;
            for idx in 0..candidates {
                let mut rest = idx;
                for slot in xbar.iter_mut() {
                    *slot = (rest % dmc.inputs() as u64) as usize;
                    rest /= dmc.inputs() as u64;
                }
                if dmc.ln_likelihood(&xbar, &y) >= threshold - TIE_SLACK {
                    hits += 1;
                }
            }
            hits as f64 / candidates as f64
        });
        acc.push(((m - 1.0) * inner).min(1.0));
    }
    acc.finish()
}
