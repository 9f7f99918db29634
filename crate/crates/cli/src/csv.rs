//! CSV output. Floats use `%.12g` formatting with a '.' decimal separator.

use std::io::{self, Write};

use fbbounds_core::{BoundId, CurvePoint, StateTerm, VlsfRow};

pub const CURVE_HEADER: &str = "n,bound,rate,logqM,params";
pub const VLSF_HEADER: &str = "k,n,delta,la_lb,rate,m_max,tail_mass";
pub const TERMS_HEADER: &str = "s,pmf,per_state_lb,term";

/// Formats `x` like C's `%.{sig}g`.
pub fn format_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g12(x: f64) -> String {
    format_g(x, 12)
}

/// The `params` column: `A=<value>` for Wolfowitz bounds, empty otherwise.
pub fn bound_params(b: &BoundId) -> String {
    b.wolfowitz_a().map(|a| format!("A={}", g12(a))).unwrap_or_default()
}

pub fn write_curve<W: Write>(mut out: W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.n,
            p.bound.name(),
            g12(p.rate),
            g12(p.logqm),
            bound_params(&p.bound)
        )?;
    }
    out.flush()
}

pub fn write_vlsf<W: Write>(mut out: W, rows: &[VlsfRow]) -> io::Result<()> {
    writeln!(out, "{VLSF_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g12(r.point.k),
            r.point.n,
            g12(r.point.delta),
            g12(r.result.la_lb),
            g12(r.rate()),
            r.result.m_max,
            g12(r.result.tail_mass)
        )?;
    }
    out.flush()
}

pub fn write_terms<W: Write>(mut out: W, terms: &[StateTerm]) -> io::Result<()> {
    writeln!(out, "{TERMS_HEADER}")?;
    for t in terms {
        writeln!(
            out,
            "{},{},{},{}",
            t.s,
            g12(t.pmf.to_linear()),
            g12(t.per_state_lb),
            g12(t.term.to_linear())
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (2.0 / 3.0, "0.666666666667"),
            (8.0 / 3.0, "2.66666666667"),
            (123456.0, "123456"),
            (1e-3, "0.001"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (123_456_789_012.0, "123456789012"),
            (1_234_567_890_123.0, "1.23456789012e+12"),
            (-0.028046, "-0.028046"),
            (1e300, "1e+300"),
            (9.9999999999995e-5, "0.0001"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g(x, 12), want, "{x}");
        }
    }

    #[test]
    fn curve_rows() {
        let pts = [
            CurvePoint { n: 10, bound: BoundId::Thm2, rate: 0.1, logqm: 1.0 },
            CurvePoint { n: 10, bound: BoundId::Thm3 { a: 0.25 }, rate: 0.25, logqm: 2.5 },
        ];
        let mut buf = Vec::new();
        write_curve(&mut buf, &pts).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,bound,rate,logqM,params\n10,thm2,0.1,1,\n10,thm3,0.25,2.5,A=0.25\n"
        );
    }
}
