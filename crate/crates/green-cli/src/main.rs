use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cyclic_green::greenring::{CacheFile, DEFAULT_DIM_CAP, DEFAULT_SAMPLE_FRACTION};
use cyclic_green::verify::{self, Status, Suite, VerifyConfig};
use cyclic_green::{Error, GreenContext};
use green_cli::{evaluate, exit, exit_code, parse_range, render_element, render_table, Format, Op};

#[derive(Parser)]
#[command(name = "green", version, about = "Green ring of a cyclic p-group: powers, Adams operations and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ContextArgs {
    /// The prime p.
    #[arg(long)]
    p: u32,
    /// The exponent e, so that q = p^e.
    #[arg(long)]
    e: u32,
    /// Largest matrix dimension the oracle may build.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
    /// Cache file; loaded (with sampled revalidation) and updated when given.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Seed for randomized checks and cache sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single element.
    Compute {
        op: Op,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value = "pretty")]
        format: Format,
    },
    /// Emit one row per (n, r); for tensor, n is the second factor.
    Table {
        op: Op,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, value_parser = parse_range)]
        n: Option<std::ops::RangeInclusive<usize>>,
        #[arg(long, value_parser = parse_range)]
        r: std::ops::RangeInclusive<usize>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Comma-separated: ring, powers, adams, periodicity, symonds, conversion (alias thm62), all.
        #[arg(long, default_value = "all")]
        suites: String,
        #[arg(long)]
        n_max: Option<usize>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Manage the on-disk cache.
    Cache {
        action: CacheAction,
        #[command(flatten)]
        ctx: ContextArgs,
        /// Largest symmetric power degree precomputed by build; default q.
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CacheAction {
    Build,
    Validate,
    Clear,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: exit::INVALID, message: message.into() }
}

fn context(args: &ContextArgs) -> Result<GreenContext, Failure> {
    let ctx = GreenContext::with_cap(args.p, args.e, args.dim_cap)?;
    if args.dim_cap < ctx.q() * ctx.q() {
        return Err(invalid(format!("--dim-cap must be at least q^2 = {}", ctx.q() * ctx.q())));
    }
    Ok(ctx)
}

fn cache_path(args: &ContextArgs) -> PathBuf {
    args.cache.clone().unwrap_or_else(|| PathBuf::from(format!("green-cache-p{}-e{}.json", args.p, args.e)))
}

fn load_cache(ctx: &GreenContext, args: &ContextArgs) -> Result<(), Failure> {
    match &args.cache {
        Some(path) if path.exists() => {
            ctx.load_cache(&CacheFile::read(path)?, DEFAULT_SAMPLE_FRACTION, args.seed)?;
            Ok(())
        }
        _ => Ok(()),
    }
}

fn save_cache(ctx: &GreenContext, args: &ContextArgs) -> Result<(), Failure> {
    if let Some(path) = &args.cache {
        ctx.export_cache().write(path)?;
    }
    Ok(())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(e).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Compute { op, ctx: args, n, r, s, format } => {
            let ctx = context(&args)?;
            load_cache(&ctx, &args)?;
            let value = evaluate(&ctx, op, n, r, s)?;
            save_cache(&ctx, &args)?;
            print!("{}", render_element(&value, format));
            Ok(exit::OK)
        }
        Command::Table { op, ctx: args, n, r, format } => {
            let ctx = context(&args)?;
            load_cache(&ctx, &args)?;
            let n = match (n, op) {
                (Some(n), _) => n,
                (None, Op::Restrict | Op::Induce) => 0..=0,
                (None, _) => return Err(invalid("table needs --n")),
            };
            let mut rows = Vec::new();
            for nv in n {
                for rv in r.clone() {
                    let (n_arg, s_arg) = if op == Op::Tensor { (None, Some(nv)) } else { (Some(nv), None) };
                    rows.push((nv, rv, evaluate(&ctx, op, n_arg, rv, s_arg)?));
                }
            }
            save_cache(&ctx, &args)?;
            let q = rows.first().map_or(ctx.q(), |row| row.2.coeffs().len());
            print!("{}", render_table(&rows, q, format));
            Ok(exit::OK)
        }
        Command::Verify { ctx: args, suites, n_max, out, timings } => {
            let ctx = context(&args)?;
            load_cache(&ctx, &args)?;
            let suites = Suite::parse_list(&suites).map_err(|e| invalid(e.to_string()))?;
            let cfg = VerifyConfig { n_max, seed: args.seed, timings, ..VerifyConfig::default() };
            let report = verify::run(&ctx, &suites, &cfg);
            write_out(out.as_deref(), &(report.to_json() + "\n"))?;
            save_cache(&ctx, &args)?;
            let s = report.summary;
            let mut line = format!("{} suite={}: {} pass, {} fail, {} skipped_cap", ctx.order(), report.suite, s.pass, s.fail, s.skipped_cap);
            for (id, label) in [("periodicity/lambda-minimal", "λ"), ("periodicity/s-minimal", "σ")] {
                if let Some(d) = report.check(id).and_then(|c| c.detail.as_deref()).and_then(|d| d.strip_prefix("minimal period ")) {
                    line += &format!("; {label}={d}");
                }
            }
            eprintln!("{line}");
            match report.checks.iter().find(|c| c.status == Status::Fail) {
                None => Ok(exit::OK),
                Some(c) => {
                    eprintln!("first failure: {}", c.check_id);
                    if let Some(w) = &c.witness {
                        eprintln!("  n={:?} r={:?}", w.n, w.r);
                        eprintln!("  expected {} {:?}", w.expected.rendered, w.expected.coeffs);
                        eprintln!("  actual   {} {:?}", w.actual.rendered, w.actual.coeffs);
                    }
                    if let Some(d) = &c.detail {
                        eprintln!("  {d}");
                    }
                    Ok(exit::FAIL)
                }
            }
        }
        Command::Cache { action, ctx: args, n_max } => {
            let path = cache_path(&args);
            match action {
                CacheAction::Build => {
                    let ctx = context(&args)?;
                    let skipped = ctx.build_cache(n_max.unwrap_or(ctx.q()))?;
                    ctx.export_cache().write(&path)?;
                    eprintln!("wrote {} ({skipped} symmetric powers over the cap)", path.display());
                    Ok(exit::OK)
                }
                CacheAction::Validate => {
                    let ctx = context(&args)?;
                    let file = CacheFile::read(&path)?;
                    let report = ctx.validate_cache(&file, 1.0, args.seed)?;
                    if report.ok() {
                        eprintln!("ok: {} entries, {} checked, {} over the cap", report.entries, report.checked, report.skipped_cap);
                        Ok(exit::OK)
                    } else {
                        for m in &report.mismatches {
                            eprintln!("mismatch: {m}");
                        }
                        Ok(exit::FAIL)
                    }
                }
                CacheAction::Clear => {
                    match std::fs::remove_file(&path) {
                        Ok(()) => eprintln!("removed {}", path.display()),
                        Err(e) if e.kind() == std::io::ErrorKind::NotFound => eprintln!("no cache at {}", path.display()),
                        Err(e) => return Err(Error::Io(e).into()),
                    }
                    Ok(exit::OK)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
