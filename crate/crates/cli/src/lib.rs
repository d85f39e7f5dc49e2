//! Command-line front end: `generate`, `verify` and `selftest`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gqtab_core::numerics::{DEFAULT_COSINE_DIGITS, DEFAULT_LOG_DIGITS, DEFAULT_OUTPUT_DIGITS};
use gqtab_core::tableio::TABLE_DIGITS;
use gqtab_core::{Kernel, PrecisionPolicy};

pub mod generate;
pub mod selftest;
pub mod verify;

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// A table failed verification or a fixture failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Stabilization, resource or I/O failure while generating.
pub const EXIT_GENERATION_FAILED: i32 = 2;
/// Bad command line.
pub const EXIT_USAGE: i32 = 3;

/// Largest m accepted without `--allow-large-m`.
pub const DEFAULT_MAX_M: u32 = 3;
/// Default ceiling on N.
pub const DEFAULT_MAX_N: usize = 128;

#[derive(Debug, Parser)]
#[command(name = "gqtab", version, about = "Gaussian quadrature tables for (-log x)^m on [0,1] and cos(pi x/2) on [-1,1]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute rules and write one table file per N.
    Generate(GenerateArgs),
    /// Re-check table files: order, positivity, total mass, moment exactness.
    Verify(VerifyArgs),
    /// Run the built-in fixture battery, one JSON line per fixture.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Log,
    Cosine,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kernel: KernelArg,
    /// Power of −log x; required with `--kernel log`.
    #[arg(long)]
    pub m: Option<u32>,
    /// Node count, `N` or an inclusive span `A..B`.
    #[arg(long, value_parser = parse_span)]
    pub n: (usize, usize),
    /// Digits that must agree between precisions (at least 30).
    #[arg(long, default_value_t = DEFAULT_OUTPUT_DIGITS)]
    pub digits: u32,
    /// Initial working precision [default: 270 for log, 650 for cosine].
    #[arg(long)]
    pub working_digits: Option<u32>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads; ignored by sequential builds.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Accept m above 3.
    #[arg(long)]
    pub allow_large_m: bool,
    /// Ceiling on N.
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub max_n: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Table files or directories holding them.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Required relative agreement, in digits.
    #[arg(long, default_value_t = verify::DEFAULT_TOLERANCE_DIGITS)]
    pub tolerance: u32,
}

/// `N` or `A..B`.
pub fn parse_span(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid node count {t:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b)?)),
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
    }
}

/// A validated generation request.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub kernel: Kernel,
    pub ns: Vec<usize>,
    pub policy: PrecisionPolicy,
    pub out_dir: PathBuf,
    pub jobs: Option<usize>,
}

impl GenerateArgs {
    pub fn job_spec(&self) -> Result<JobSpec, String> {
        let kernel = match (self.kernel, self.m) {
            (KernelArg::Log, None) => return Err("--kernel log needs --m".into()),
            (KernelArg::Log, Some(m)) => {
                if m > DEFAULT_MAX_M && !self.allow_large_m {
                    return Err(format!("m = {m} exceeds {DEFAULT_MAX_M}; pass --allow-large-m"));
                }
                Kernel::log(m).map_err(|e| e.to_string())?
            }
            (KernelArg::Cosine, Some(_)) => return Err("--m only applies to --kernel log".into()),
            (KernelArg::Cosine, None) => Kernel::Cosine,
        };
        let (lo, hi) = self.n;
        if lo == 0 || lo > hi || hi > self.max_n {
            return Err(format!("need 1 <= N_low <= N_high <= {}, got {lo}..{hi}", self.max_n));
        }
        if self.digits < TABLE_DIGITS {
            return Err(format!("--digits must be at least {TABLE_DIGITS}, the printed width"));
        }
        if self.jobs == Some(0) {
            return Err("--jobs must be positive".into());
        }
        let initial = self.working_digits.unwrap_or(match kernel {
            Kernel::LogPower(_) => DEFAULT_LOG_DIGITS,
            Kernel::Cosine => DEFAULT_COSINE_DIGITS,
        });
        let policy = PrecisionPolicy::with_defaults(initial, self.digits).map_err(|e| e.to_string())?;
        Ok(JobSpec {
            kernel,
            ns: (lo..=hi).collect(),
            policy,
            out_dir: self.out_dir.clone(),
            jobs: self.jobs,
        })
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match cli.command {
        Command::Generate(args) => match args.job_spec() {
            Ok(spec) => generate::run(&spec, out, err),
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                EXIT_USAGE
            }
        },
        Command::Verify(args) => verify::run(&args.paths, args.tolerance, out, err),
        Command::Selftest => selftest::run(out),
    }
}
