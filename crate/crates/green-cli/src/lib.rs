//! Argument parsing and rendering for the `green` command.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use cyclic_green::{Error, GreenContext, GreenElement};
use serde::Serialize;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const CAP: i32 = 3;
    pub const IO: i32 = 4;
}

/// Maps an engine error to an exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => exit::CAP,
        Error::Io(_) => exit::IO,
        Error::CacheFormat(_) | Error::CacheMismatch(_) | Error::ReportFormat(_) | Error::Inconsistent(_) => exit::FAIL,
        _ => exit::INVALID,
    }
}

/// Parses "7", "1..8" or "1..=8" into an inclusive range. "a..b" includes b.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid number {t:?} in range {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        None => {
            let v = num(s)?;
            (v, v)
        }
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "pretty" => Ok(Format::Pretty),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}; expected pretty, json or csv")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    AdamsLambda,
    AdamsS,
    LambdaPower,
    SPower,
    Tensor,
    Heller,
    Restrict,
    Induce,
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Op, String> {
        Ok(match s {
            "adams-lambda" => Op::AdamsLambda,
            "adams-s" => Op::AdamsS,
            "lambda-power" => Op::LambdaPower,
            "s-power" => Op::SPower,
            "tensor" => Op::Tensor,
            "heller" => Op::Heller,
            "restrict" => Op::Restrict,
            "induce" => Op::Induce,
            other => return Err(format!("unknown operation {other:?}")),
        })
    }
}

impl Op {
    /// Whether the operation reads `n` (for tensor, the second factor `s` instead).
    pub fn uses_n(self) -> bool {
        !matches!(self, Op::Restrict | Op::Induce | Op::Tensor)
    }
}

/// Evaluates one operation. For `tensor`, `n` is ignored and `s` is the second factor.
pub fn evaluate(ctx: &GreenContext, op: Op, n: Option<usize>, r: usize, s: Option<usize>) -> Result<GreenElement, Error> {
    let need_n = || n.ok_or_else(|| Error::OutOfRange(format!("{op:?} needs --n")));
    let check_r = |r: usize, q: usize| {
        if r == 0 || r > q {
            Err(Error::OutOfRange(format!("--r {r} must lie in 1..={q}")))
        } else {
            Ok(())
        }
    };
    match op {
        Op::AdamsLambda => {
            check_r(r, ctx.q())?;
            ctx.adams_lambda_fast(need_n()?, &ctx.basis(r)?)
        }
        Op::AdamsS => {
            check_r(r, ctx.q())?;
            ctx.adams_s_fast(need_n()?, &ctx.basis(r)?)
        }
        Op::LambdaPower => ctx.lambda_power(r, need_n()?),
        Op::SPower => ctx.s_power(r, need_n()?),
        Op::Tensor => {
            let s = s.ok_or_else(|| Error::OutOfRange("tensor needs --s".into()))?;
            ctx.tensor_basis(r, s)
        }
        Op::Heller => {
            check_r(r, ctx.q())?;
            ctx.heller(&ctx.basis(r)?, need_n()?)
        }
        Op::Restrict => {
            check_r(r, ctx.q())?;
            ctx.restrict(&ctx.basis(r)?)
        }
        Op::Induce => {
            let child = ctx.child()?;
            check_r(r, child.q())?;
            ctx.induce(&child.basis(r)?)
        }
    }
}

#[derive(Serialize)]
struct JsonElement<'a> {
    coeffs: &'a [i64],
    dim: i128,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    n: usize,
    r: usize,
    coeffs: &'a [i64],
    dim: i128,
}

fn csv_header(q: usize, prefix: &str) -> String {
    let cols: Vec<String> = (1..=q).map(|i| format!("V{i}")).collect();
    format!("{prefix}{}", cols.join(","))
}

fn csv_coeffs(a: &GreenElement) -> String {
    a.coeffs().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Renders a single element, ending with a newline.
pub fn render_element(a: &GreenElement, format: Format) -> String {
    match format {
        Format::Pretty => format!("{a}\n"),
        Format::Json => {
            let j = JsonElement { coeffs: a.coeffs(), dim: a.dimension() };
            serde_json::to_string(&j).expect("plain data") + "\n"
        }
        Format::Csv => format!("{}\n{}\n", csv_header(a.coeffs().len(), ""), csv_coeffs(a)),
    }
}

/// Renders table rows (n, r, value) in the given order.
pub fn render_table(rows: &[(usize, usize, GreenElement)], q: usize, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Pretty => {
            for (n, r, a) in rows {
                let _ = writeln!(out, "n={n} r={r}: {a}");
            }
        }
        Format::Json => {
            let js: Vec<JsonRow> = rows.iter().map(|(n, r, a)| JsonRow { n: *n, r: *r, coeffs: a.coeffs(), dim: a.dimension() }).collect();
            out = serde_json::to_string(&js).expect("plain data") + "\n";
        }
        Format::Csv => {
            let _ = writeln!(out, "{}", csv_header(q, "n,r,"));
            for (n, r, a) in rows {
                let _ = writeln!(out, "{n},{r},{}", csv_coeffs(a));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..8").unwrap(), 1..=8);
        assert_eq!(parse_range("1..=8").unwrap(), 1..=8);
        assert_eq!(parse_range(" 4 ").unwrap(), 4..=4);
        assert_eq!(parse_range("0..0").unwrap(), 0..=0);
        for bad in ["", "..", "3..1", "a..2", "1...2", "-1..2", "1..2..3"] {
            assert!(parse_range(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn renderings_agree() {
        let ctx = GreenContext::new(2, 2).unwrap();
        let a = ctx.element(vec![-4, 4, 0, 0]).unwrap();
        assert_eq!(render_element(&a, Format::Pretty), "-4*V1 + 4*V2\n");
        assert_eq!(render_element(&a, Format::Json), "{\"coeffs\":[-4,4,0,0],\"dim\":4}\n");
        assert_eq!(render_element(&a, Format::Csv), "V1,V2,V3,V4\n-4,4,0,0\n");
    }

    #[test]
    fn evaluation_examples() {
        let c9 = GreenContext::new(3, 2).unwrap();
        assert_eq!(evaluate(&c9, Op::AdamsLambda, Some(6), 9, None).unwrap().to_string(), "3*V3");
        let c4 = GreenContext::new(2, 2).unwrap();
        assert_eq!(evaluate(&c4, Op::Heller, Some(1), 3, None).unwrap().to_string(), "V1");
        assert_eq!(evaluate(&c4, Op::Tensor, None, 2, Some(2)).unwrap().to_string(), "2*V2");
        assert_eq!(evaluate(&c4, Op::Induce, None, 2, None).unwrap().to_string(), "V4");
        assert!(evaluate(&c4, Op::Induce, None, 3, None).is_err());
        assert!(evaluate(&c4, Op::AdamsLambda, None, 1, None).is_err());
        assert!(evaluate(&c4, Op::AdamsLambda, Some(1), 5, None).is_err());
    }
}
