use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use fbbounds_core::{
    converse_epsilon_lb_with_terms, evaluate_bound, exact_eps_bsc, exact_eps_qec, rs_code, run_vlsf_curve, BoundId,
    ChannelSpec, Codebook, CodePoint, CurveRequest, PerStateStrategy, DEFAULT_WOLFOWITZ_A,
};

use crate::codewords::read_codebook;
use crate::csv::{bound_params, g12, write_curve, write_terms, write_vlsf};
use crate::error::{CliError, Result};
use crate::montecarlo::{mc_dt, mc_rcu, Dmc};
use crate::run_curve_parallel;

/// Finite-blocklength converse and achievability bounds for the QEC and BSC.
#[derive(Debug, Parser)]
#[command(name = "fbbounds", version)]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound at one (n, logqM) point.
    Point {
        /// `qec:q=Q,delta=D` or `bsc:delta=D`.
        #[arg(long)]
        channel: ChannelSpec,
        #[arg(long)]
        n: u32,
        /// Message size in channel-alphabet symbols (log_q M).
        #[arg(long = "logqM")]
        logqm: f64,
        /// thm2, thm3, thm4, thm5, meta, dt or rcu.
        #[arg(long)]
        bound: String,
        /// Wolfowitz constant for thm3/thm5.
        #[arg(long = "A", default_value_t = DEFAULT_WOLFOWITZ_A)]
        a: f64,
        /// Write per-state converse terms to this CSV file.
        #[arg(long)]
        terms: Option<PathBuf>,
    },
    /// Rate-versus-blocklength curves at a target error probability.
    Curve {
        #[arg(long)]
        channel: ChannelSpec,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 10)]
        nmin: u32,
        #[arg(long, default_value_t = 500)]
        nmax: u32,
        #[arg(long, default_value_t = 10)]
        nstep: u32,
        /// Comma-separated bound ids; `thm3(0.1)` overrides --A per bound.
        #[arg(long)]
        bounds: String,
        #[arg(long = "A", default_value_t = DEFAULT_WOLFOWITZ_A)]
        a: f64,
        /// Absolute bisection tolerance on logqM.
        #[arg(long, default_value_t = fbbounds_core::solver::DEFAULT_RATE_TOLERANCE)]
        tol: f64,
        /// Output CSV, `-` for stdout.
        #[arg(long)]
        out: PathBuf,
    },
    /// Average-blocklength bound for zero-error stop-feedback codes on the QEC.
    Vlsf {
        /// Packet size in symbols.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 1.0)]
        kmin: f64,
        #[arg(long, default_value_t = 200.0)]
        kmax: f64,
        #[arg(long, default_value_t = 1.0)]
        kstep: f64,
        /// Truncation tolerance on the remaining probability mass.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact ML error probability of an explicit code.
    Oracle {
        /// rep, rs, hamming74, full or file:PATH.
        #[arg(long)]
        family: String,
        #[arg(long)]
        channel: ChannelSpec,
        /// Blocklength for rep, rs and full.
        #[arg(long)]
        n: Option<usize>,
        /// Dimension for rs.
        #[arg(long)]
        k: Option<usize>,
        /// Bound to evaluate at the code's (n, log_q M).
        #[arg(long)]
        compare: Option<String>,
        #[arg(long = "A", default_value_t = DEFAULT_WOLFOWITZ_A)]
        a: f64,
    },
    /// Monte-Carlo check of the DT (BEC) or RCU (BSC) closed form.
    Validate {
        #[arg(long)]
        channel: ChannelSpec,
        #[arg(long)]
        n: u32,
        #[arg(long = "logqM")]
        logqm: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Allowed deviation in standard errors.
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
    },
}

fn open_out(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Box::new(BufWriter::new(file)))
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Splits `thm2,thm3(0.1),dt` into bound ids.
pub fn parse_bound_list(list: &str, default_a: f64) -> Result<Vec<BoundId>> {
    let ids: Vec<BoundId> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| BoundId::parse_with_default(s, default_a))
        .collect::<fbbounds_core::Result<_>>()?;
    if ids.is_empty() {
        return Err(CliError::Usage("--bounds is empty".into()));
    }
    Ok(ids)
}

/// `start, start + step, ..` up to `end` inclusive.
pub fn real_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) {
        return Err(CliError::Usage("grid needs step > 0 and max >= min".into()));
    }
    let count = ((end - start) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Point {
            channel,
            n,
            logqm,
            bound,
            a,
            terms,
        } => {
            let id = BoundId::parse_with_default(bound, *a)?;
            let result = evaluate_bound(channel, id, *n, *logqm)?;
            let mut out = io::stdout().lock();
            writeln!(out, "bound,n,logqM,epsilon,ln_epsilon,params").map_err(io_err(Path::new("-")))?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                id.name(),
                n,
                g12(*logqm),
                g12(result.epsilon()),
                g12(result.log_epsilon.ln()),
                bound_params(&id)
            )
            .map_err(io_err(Path::new("-")))?;
            if let Some(path) = terms {
                let strat = match id {
                    BoundId::Thm2 | BoundId::Thm4 => PerStateStrategy::Structural,
                    BoundId::Thm3 { a } | BoundId::Thm5 { a } => PerStateStrategy::wolfowitz(a)?,
                    _ => return Err(CliError::Usage("--terms needs a converse bound thm2..thm5".into())),
                };
                let detailed = converse_epsilon_lb_with_terms(channel, &CodePoint::new(*n, *logqm)?, strat)?;
                let rows = detailed.per_state_terms.unwrap_or_default();
                write_terms(open_out(path)?, &rows).map_err(io_err(path))?;
            }
            Ok(())
        }
        Command::Curve {
            channel,
            eps,
            nmin,
            nmax,
            nstep,
            bounds,
            a,
            tol,
            out,
        } => {
            if *nstep == 0 || nmin > nmax {
                return Err(CliError::Usage("n grid needs nstep > 0 and nmin <= nmax".into()));
            }
            let req = CurveRequest {
                channel: *channel,
                eps_target: *eps,
                n_grid: (*nmin..=*nmax).step_by(*nstep as usize).collect(),
                bounds: parse_bound_list(bounds, *a)?,
                rate_tolerance: *tol,
            };
            let points = run_curve_parallel(&req)?;
            write_curve(open_out(out)?, &points).map_err(io_err(out))
        }
        Command::Vlsf {
            n,
            delta,
            q,
            kmin,
            kmax,
            kstep,
            tol,
            out,
        } => {
            let grid = real_grid(*kmin, *kmax, *kstep)?;
            let rows = run_vlsf_curve(&grid, *n, *delta, *q, *tol)?;
            write_vlsf(open_out(out)?, &rows).map_err(io_err(out))
        }
        Command::Oracle {
            family,
            channel,
            n,
            k,
            compare,
            a,
        } => {
            let code = build_family(family, channel.q(), *n, *k)?;
            let exact = match channel {
                ChannelSpec::Qec { delta, .. } => exact_eps_qec(&code, *delta)?,
                ChannelSpec::Bsc { delta } => exact_eps_bsc(&code, *delta)?,
            };
            let logqm = code.log_q_size();
            let mut header = String::from("family,q,n,M,logqM,delta,epsilon");
            let mut row = format!(
                "{},{},{},{},{},{},{}",
                family,
                code.q(),
                code.n(),
                code.len(),
                g12(logqm),
                g12(channel.delta()),
                g12(exact.epsilon)
            );
            if let Some(b) = compare {
                let id = BoundId::parse_with_default(b, *a)?;
                let nn = code.n() as u32;
                let value = evaluate_bound(channel, id, nn, logqm.min(nn as f64))?;
                header.push_str(",bound,bound_epsilon,params");
                row.push_str(&format!(",{},{},{}", id.name(), g12(value.epsilon()), bound_params(&id)));
            }
            let mut out = io::stdout().lock();
            writeln!(out, "{header}\n{row}").map_err(io_err(Path::new("-")))
        }
        Command::Validate {
            channel,
            n,
            logqm,
            samples,
            sigmas,
        } => {
            let m = logqm.exp2();
            let (id, closed) = match channel {
                ChannelSpec::Qec { q: 2, .. } => (BoundId::Dt, evaluate_bound(channel, BoundId::Dt, *n, *logqm)?),
                ChannelSpec::Bsc { .. } => (BoundId::Rcu, evaluate_bound(channel, BoundId::Rcu, *n, *logqm)?),
                _ => return Err(CliError::Usage("validate supports the BEC (DT) and the BSC (RCU)".into())),
            };
            if *n > 16 {
                return Err(CliError::Usage("validate enumerates inputs; use n <= 16".into()));
            }
            let dmc = Dmc::from_spec(channel);
            let est = match id {
                BoundId::Dt => mc_dt(&dmc, *n as usize, m, *samples, cli.seed),
                _ => mc_rcu(&dmc, *n as usize, m, *samples, cli.seed),
            };
            let z = est.z_score(closed.epsilon());
            let mut out = io::stdout().lock();
            writeln!(out, "bound,n,logqM,delta,closed_form,mc_mean,mc_std_err,z,samples,seed")
                .and_then(|_| {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{}",
                        id.name(),
                        n,
                        g12(*logqm),
                        g12(channel.delta()),
                        g12(closed.epsilon()),
                        g12(est.mean),
                        g12(est.std_err),
                        g12(z),
                        est.samples,
                        cli.seed
                    )
                })
                .map_err(io_err(Path::new("-")))?;
            if z > *sigmas {
                return Err(CliError::Validation(format!(
                    "{} closed form {} is {z:.2} standard errors from the Monte-Carlo mean {}",
                    id.name(),
                    closed.epsilon(),
                    est.mean
                )));
            }
            Ok(())
        }
    }
}

/// Builds one of the named code families over `GF(q)`.
pub fn build_family(family: &str, q: u32, n: Option<usize>, k: Option<usize>) -> Result<Codebook> {
    let need = |v: Option<usize>, what: &str| v.ok_or_else(|| CliError::Usage(format!("family `{family}` needs --{what}")));
    let code = match family {
        "rep" => Codebook::repetition(q, need(n, "n")?)?,
        "rs" => rs_code(q, need(n, "n")?, need(k, "k")?)?,
        "hamming74" => {
            if q != 2 {
                return Err(CliError::Usage("hamming74 is binary".into()));
            }
            Codebook::hamming74()
        }
        "full" => Codebook::full_space(q, need(n, "n")?)?,
        other => match other.strip_prefix("file:") {
            Some(path) => read_codebook(Path::new(path), q)?,
            None => return Err(CliError::Usage(format!("unknown code family `{other}`"))),
        },
    };
    Ok(code)
}
