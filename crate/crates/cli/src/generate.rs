//! `generate`: compute rules for a span of N and write them atomically.

use std::io::Write;
use std::path::Path;

use gqtab_core::rulegen::generate_rules;
use gqtab_core::tableio::render_table;
use gqtab_core::{QuadError, QuadratureRule};

use crate::{JobSpec, EXIT_GENERATION_FAILED, EXIT_OK};

/// Outcome for one table file.
#[derive(Debug)]
pub struct Written {
    pub stem: String,
    pub outcome: Result<(u32, u32), String>,
}

/// Compute every rule of `spec` and write the files; no report output.
pub fn generate(spec: &JobSpec) -> Result<Vec<Written>, QuadError> {
    let rules = with_threads(spec.jobs, || generate_rules(spec.kernel, &spec.ns, &spec.policy))?;
    Ok(rules
        .into_iter()
        .map(|(n, rule)| {
            let stem = spec.kernel.table_stem(n);
            let outcome = rule
                .map_err(|e| e.to_string())
                .and_then(|r| write_rule(&spec.out_dir, &stem, &r).map(|()| (r.working_digits(), r.retries())));
            Written { stem, outcome }
        })
        .collect())
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs.and_then(|j| rayon::ThreadPoolBuilder::new().num_threads(j).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R: Send>(_jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

/// Write through a temporary file in the target directory, then rename.
fn write_rule(dir: &Path, stem: &str, rule: &QuadratureRule) -> Result<(), String> {
    let text = render_table(rule).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    tmp.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    tmp.persist(dir.join(stem)).map_err(|e| e.to_string())?;
    Ok(())
}

pub fn run(spec: &JobSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let written = match generate(spec) {
        Ok(w) => w,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_GENERATION_FAILED;
        }
    };
    let mut failed = 0;
    for w in &written {
        match &w.outcome {
            Ok((digits, retries)) => {
                let _ = writeln!(out, "ok      {:<14} working digits {digits:>5}  retries {retries}", w.stem);
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(out, "FAILED  {:<14} {e}", w.stem);
            }
        }
    }
    let _ = writeln!(
        out,
        "{} written, {failed} failed, output in {}",
        written.len() - failed,
        spec.out_dir.display()
    );
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_GENERATION_FAILED
    }
}
