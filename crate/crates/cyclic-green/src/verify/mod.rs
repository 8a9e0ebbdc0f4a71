//! Verification suites comparing the symbolic engine with the oracle and
//! with the closed-form statements about Adams operations.
//!
//! Periodicity checks only ever call the raw recursions, never the
//! period-reduced fast paths.

mod report;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::greenring::GreenContext;

pub use report::{CheckResult, ContextInfo, ElementView, Status, Summary, VerificationReport, Witness};
pub use suites::{minimal_period, Which};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Ring,
    Powers,
    Adams,
    Periodicity,
    Symonds,
    Conversion,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Ring, Suite::Powers, Suite::Adams, Suite::Periodicity, Suite::Symonds, Suite::Conversion];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ring => "ring",
            Suite::Powers => "powers",
            Suite::Adams => "adams",
            Suite::Periodicity => "periodicity",
            Suite::Symonds => "symonds",
            Suite::Conversion => "conversion",
        }
    }

    /// Parses a comma-separated list; "all" selects every suite. Duplicates
    /// are dropped and the result follows the canonical order.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::OutOfRange("no suites selected".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "ring" => Ok(Suite::Ring),
            "powers" => Ok(Suite::Powers),
            "adams" => Ok(Suite::Adams),
            "periodicity" => Ok(Suite::Periodicity),
            "symonds" => Ok(Suite::Symonds),
            "conversion" | "thm62" => Ok(Suite::Conversion),
            other => Err(Error::OutOfRange(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ranges and seed for a verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest Adams degree in the periodicity and Adams suites; default 4q.
    pub n_max: Option<usize>,
    /// Largest degree compared against the symmetric-power recursion; default 12.
    pub conversion_n_max: Option<usize>,
    /// Largest degree n for which S^n(V_q) is compared with the oracle;
    /// default `n_max`. The comparison stops at the first degree over the cap.
    pub regular_n_max: Option<usize>,
    pub seed: u64,
    /// Record wall-clock times. Off by default so reports are reproducible byte for byte.
    pub timings: bool,
}

pub const DEFAULT_CONVERSION_N_MAX: usize = 12;

impl VerifyConfig {
    pub fn n_max(&self, q: usize) -> usize {
        self.n_max.unwrap_or(4 * q)
    }

    pub fn regular_n_max(&self, q: usize) -> usize {
        self.regular_n_max.unwrap_or(self.n_max(q))
    }

    pub fn conversion_n_max(&self) -> usize {
        self.conversion_n_max.or(self.n_max).unwrap_or(DEFAULT_CONVERSION_N_MAX)
    }
}

/// Runs the selected suites, in canonical order, against one context.
pub fn run(ctx: &GreenContext, suites: &[Suite], cfg: &VerifyConfig) -> VerificationReport {
    let start = Instant::now();
    let mut rec = report::Recorder::new(cfg.timings);
    let mut sorted = suites.to_vec();
    sorted.sort();
    sorted.dedup();
    for s in &sorted {
        match s {
            Suite::Ring => suites::ring(ctx, cfg, &mut rec),
            Suite::Powers => suites::powers(ctx, cfg, &mut rec),
            Suite::Adams => suites::adams(ctx, cfg, &mut rec),
            Suite::Periodicity => suites::periodicity(ctx, cfg, &mut rec),
            Suite::Symonds => suites::symonds(ctx, &mut rec),
            Suite::Conversion => suites::conversion(ctx, cfg, &mut rec),
        }
    }
    let suite = if sorted == Suite::ALL { "all".to_string() } else { sorted.iter().map(|s| s.name()).collect::<Vec<_>>().join(",") };
    let o = ctx.order();
    VerificationReport {
        context: ContextInfo {
            p: o.p,
            e: o.e,
            q: o.q,
            dim_cap: ctx.dim_cap(),
            seed: cfg.seed,
            n_max: cfg.n_max(o.q),
            conversion_n_max: cfg.conversion_n_max(),
        },
        suite,
        summary: rec.summary(),
        checks: rec.checks,
        wall_time_ms: cfg.timings.then(|| start.elapsed().as_millis() as u64),
    }
}
