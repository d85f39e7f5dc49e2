//! `verify`: re-parse tables and check them against the kernel's moments.

use std::io::Write;
use std::path::{Path, PathBuf};

use gqtab_core::moments::total_mass;
use gqtab_core::tableio::{parse_table, PARSED_DIGITS};
use gqtab_core::{BigNum, Kernel, MomentSequence, QuadratureRule};

use crate::{EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

pub const DEFAULT_TOLERANCE_DIGITS: u32 = 28;

/// Largest relative deviations found in one table, as log10.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    pub mass: f64,
    pub moments: f64,
}

fn log10_or_floor(v: &BigNum) -> f64 {
    if v.is_zero() {
        f64::NEG_INFINITY
    } else {
        v.log10_abs()
    }
}

/// Relative residuals of Σw against μ₀ and of Σ w x^k against μ_k,
/// k = 0..2N−1.
///
/// A moment residual is |Σ w_i x_i^k − μ_k| divided by Σ |w_i x_i^k|, the
/// scale at which rounding the printed values perturbs the sum; the
/// perturbation of x_i^k grows with k, so the residual is further divided
/// by k + 1.
pub fn residuals(rule: &QuadratureRule) -> Result<Residuals, String> {
    let kernel = rule.kernel();
    let d = PARSED_DIGITS;
    let n = rule.len();
    let mu = MomentSequence::for_kernel(kernel, 2 * n - 1, d).map_err(|e| e.to_string())?;
    let mass = total_mass(kernel, d).map_err(|e| e.to_string())?;
    let sum_w = rule.weights().iter().fold(BigNum::zero(d), |acc, w| &acc + w);
    let mass_res = log10_or_floor(&(&(&sum_w - &mass) / &mass));

    let mut powers: Vec<BigNum> = vec![BigNum::one(d); n];
    let mut worst = f64::NEG_INFINITY;
    for (k, mu_k) in mu.values().iter().enumerate() {
        let mut sum = BigNum::zero(d);
        let mut scale = BigNum::zero(d);
        for ((p, w), x) in powers.iter_mut().zip(rule.weights()).zip(rule.nodes()) {
            if k > 0 {
                *p = &*p * x;
            }
            let term = w * &*p;
            scale = &scale + &term.abs();
            sum = &sum + &term;
        }
        let rel = &(&(&sum - mu_k) / &scale) / &BigNum::from_i64(k as i64 + 1, d);
        worst = worst.max(log10_or_floor(&rel));
    }
    Ok(Residuals {
        mass: mass_res,
        moments: worst,
    })
}

/// Verdict for one file.
#[derive(Debug)]
pub struct FileReport {
    pub path: PathBuf,
    pub outcome: Result<Residuals, String>,
}

impl FileReport {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Parse and check one table whose kernel and N come from its file name.
pub fn verify_file(path: &Path, tolerance_digits: u32) -> FileReport {
    let outcome = check_file(path, tolerance_digits);
    FileReport {
        path: path.to_path_buf(),
        outcome,
    }
}

fn check_file(path: &Path, tolerance_digits: u32) -> Result<Residuals, String> {
    let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
    let (kernel, n) = Kernel::from_table_stem(stem).ok_or_else(|| format!("{stem:?} is not a table name"))?;
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let rule = parse_table(&text, kernel, n).map_err(|e| e.to_string())?;
    let r = residuals(&rule)?;
    let limit = -f64::from(tolerance_digits);
    if r.mass > limit {
        return Err(format!("sum of weights off by 10^{:.1} relative", r.mass));
    }
    if r.moments > limit {
        return Err(format!("moment residual 10^{:.1} exceeds 10^{limit}", r.moments));
    }
    Ok(r)
}

/// Files to check under `paths`; directories contribute their table-named
/// entries in name order.
pub fn collect(paths: &[PathBuf]) -> Result<Vec<PathBuf>, String> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| format!("{}: {e}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| {
                    f.is_file()
                        && f.file_name()
                            .and_then(|s| s.to_str())
                            .and_then(Kernel::from_table_stem)
                            .is_some()
                })
                .collect();
            found.sort();
            files.extend(found);
        } else if p.exists() {
            files.push(p.clone());
        } else {
            return Err(format!("{}: no such file or directory", p.display()));
        }
    }
    Ok(files)
}

pub fn run(paths: &[PathBuf], tolerance_digits: u32, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let files = match collect(paths) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut failed = 0;
    for f in &files {
        let report = verify_file(f, tolerance_digits);
        match &report.outcome {
            Ok(r) => {
                let _ = writeln!(out, "PASS  {}  max moment residual 10^{:.1}", f.display(), r.moments);
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(out, "FAIL  {}  {e}", f.display());
            }
        }
    }
    let _ = writeln!(out, "{} passed, {failed} failed", files.len() - failed);
    if failed == 0 && !files.is_empty() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
