//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! The full N = 3..128 matrix is generated once and shared by criteria
//! 5, 7, 8, 9 and 10. Set GQTAB_SEED to pick a different file sample.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use gqtab::verify::verify_file;
use gqtab_core::moments::{cosine_moment, cosine_moment_hypergeometric};
use gqtab_core::numerics::{DEFAULT_COSINE_DIGITS, DEFAULT_LOG_DIGITS};
use gqtab_core::orthopoly::{generic_low_degree, RecurrenceTable};
use gqtab_core::rulegen::{apply_rule, generate_rule, generate_rules};
use gqtab_core::tableio::{parse_table, render_table};
use gqtab_core::{BigNum, Kernel, PrecisionPolicy, QuadratureRule, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;

type Outcome = Result<String, String>;

const KERNELS: [Kernel; 4] = [
    Kernel::LogPower(1),
    Kernel::LogPower(2),
    Kernel::LogPower(3),
    Kernel::Cosine,
];
const N_LOW: usize = 3;
const N_HIGH: usize = 128;

fn default_policy(kernel: Kernel) -> PrecisionPolicy {
    let digits = match kernel {
        Kernel::LogPower(_) => DEFAULT_LOG_DIGITS,
        Kernel::Cosine => DEFAULT_COSINE_DIGITS,
    };
    PrecisionPolicy::with_defaults(digits, 30).unwrap()
}

fn q(n: &str, d: &str) -> Rational {
    Rational::new(n.parse().unwrap(), d.parse().unwrap())
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn log10(v: &BigNum) -> f64 {
    if v.is_zero() {
        f64::NEG_INFINITY
    } else {
        v.log10_abs()
    }
}

// ---------------------------------------------------------------- oracles

/// π by the Gauss–Legendre AGM iteration.
fn agm_pi(digits: u32) -> BigNum {
    let d = digits + 20;
    let two = BigNum::from_i64(2, d);
    let mut a = BigNum::one(d);
    let mut b = (&a / &two).sqrt().unwrap();
    let mut t = &a / &BigNum::from_i64(4, d);
    let mut p = BigNum::one(d);
    for _ in 0..(f64::from(digits)).log2().ceil() as usize + 3 {
        let next = &(&a + &b) / &two;
        b = (&a * &b).sqrt().unwrap();
        let diff = &a - &next;
        t = &t - &(&p * &(&diff * &diff));
        p = &p * &two;
        a = next;
    }
    let s = &a + &b;
    (&(&s * &s) / &(&BigNum::from_i64(4, d) * &t)).with_digits(digits)
}

/// μ_k for the log kernel, m!/(k+1)^{m+1}, in rationals.
fn log_moment_oracle(k: usize, m: u32) -> Rational {
    let fact: i64 = (1..=i64::from(m)).product();
    Rational::new(BigInt::from(fact), BigInt::from(k + 1).pow(m + 1))
}

/// Even cosine moments 0, 2, .., max_k by termwise integration of the
/// Taylor series of cos(πx/2): μ_{2m} = 2 Σ_j (−1)^j (π/2)^{2j} / ((2j)! (2m+2j+1)).
fn cosine_moments_oracle(max_k: usize, digits: u32) -> Vec<BigNum> {
    let d = digits + 20;
    let half_pi = &agm_pi(d) / &BigNum::from_i64(2, d);
    let h2 = &half_pi * &half_pi;
    let floor = -f64::from(d) - 5.0;
    let mut coeffs = vec![BigNum::one(d)];
    for j in 1i64.. {
        let c = -(&(&coeffs[j as usize - 1] * &h2) / &BigNum::from_i64((2 * j - 1) * (2 * j), d));
        let small = log10(&c) < floor;
        coeffs.push(c);
        if small {
            break;
        }
    }
    (0..=max_k)
        .map(|k| {
            if k % 2 == 1 {
                return BigNum::zero(digits);
            }
            let sum = coeffs.iter().enumerate().fold(BigNum::zero(d), |acc, (j, c)| {
                &acc + &(c / &BigNum::from_i64((k + 2 * j + 1) as i64, d))
            });
            (&sum * &BigNum::from_i64(2, d)).with_digits(digits)
        })
        .collect()
}

fn moments_oracle(kernel: Kernel, max_k: usize, digits: u32) -> Vec<BigNum> {
    match kernel {
        Kernel::LogPower(m) => (0..=max_k)
            .map(|k| BigNum::from_rational(&log_moment_oracle(k, m), digits))
            .collect(),
        Kernel::Cosine => cosine_moments_oracle(max_k, digits),
    }
}

/// max_{k ≤ 2N−1} |Σ w x^k − μ_k| / max(1, μ₀), as log10.
fn exactness(rule: &QuadratureRule) -> f64 {
    let d = rule.working_digits();
    let n = rule.len();
    let mu = moments_oracle(rule.kernel(), 2 * n - 1, d);
    let scale = mu[0].clone().max(BigNum::one(d));
    let mut powers = rule.weights().to_vec();
    let mut worst = f64::NEG_INFINITY;
    for mu_k in &mu {
        let sum = powers.iter().fold(BigNum::zero(d), |a, t| &a + t);
        worst = worst.max(log10(&(&(&sum - mu_k) / &scale)));
        for (p, x) in powers.iter_mut().zip(rule.nodes()) {
            *p = &*p * x;
        }
    }
    worst
}

// ---------------------------------------------------------------- criteria

fn c1_exact_polynomials() -> Outcome {
    // (m, n) -> coefficients x^0 .. x^{n−1}
    let table: [(u32, usize, Vec<Rational>); 9] = [
        (1, 1, vec![q("-1", "4")]),
        (1, 2, vec![q("17", "252"), q("-5", "7")]),
        (1, 3, vec![q("-4679", "258800"), q("5751", "16175"), q("-3105", "2588")]),
        (2, 1, vec![q("-1", "8")]),
        (2, 2, vec![q("217", "7992"), q("-19", "37")]),
        (2, 3, vec![q("-1568083", "242168000"), q("5619807", "26487125"), q("-1632663", "1695176")]),
        (3, 1, vec![q("-1", "16")]),
        (3, 2, vec![q("493", "45360"), q("-13", "35")]),
        (3, 3, vec![
            q("-19126701359", "8326748000000"),
            q("4147011999", "32526359375"),
            q("-129197997", "166534960"),
        ]),
    ];
    let mut checked = 0;
    for (m, n, want) in table {
        let t = RecurrenceTable::exact(Kernel::LogPower(m), n).map_err(|e| e.to_string())?;
        let p = t.polynomial(n).map_err(|e| e.to_string())?;
        let got = p.coeffs();
        if got.len() != n + 1 || got[n] != int(1) {
            return Err(format!("p_{{{n},{m}}} is not monic of degree {n}"));
        }
        for (j, w) in want.iter().enumerate() {
            if &got[j] != w {
                return Err(format!("p_{{{n},{m}}} x^{j}: got {}, expected {w}", got[j]));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} coefficients equal"))
}

fn c2_generic_forms() -> Outcome {
    for m in 1..=8u32 {
        let (p1, p2) = generic_low_degree(m).map_err(|e| e.to_string())?;
        let t = RecurrenceTable::exact(Kernel::LogPower(m), 2).map_err(|e| e.to_string())?;
        let (r1, r2) = (t.polynomial(1).map_err(|e| e.to_string())?, t.polynomial(2).map_err(|e| e.to_string())?);
        if r1 != p1 || r2 != p2 {
            return Err(format!("m = {m}: recurrence differs from the closed form"));
        }
        // p_1 = x − 2^{−1−m}
        if p1.coeffs()[0] != -Rational::new(1.into(), BigInt::from(2).pow(m + 1)) {
            return Err(format!("m = {m}: p_1 constant {}", p1.coeffs()[0]));
        }
        // p_2 from the 2×2 orthogonality system: c1 μ1 + c0 μ0 = −μ2, c1 μ2 + c0 μ1 = −μ3
        let mu: Vec<Rational> = (0..4).map(|k| log_moment_oracle(k, m)).collect();
        let det = &mu[1] * &mu[1] - &mu[0] * &mu[2];
        let c1 = (-&mu[2] * &mu[1] + &mu[0] * &mu[3]) / &det;
        let c0 = (-&mu[1] * &mu[3] + &mu[2] * &mu[2]) / &det;
        if p2.coeffs()[1] != c1 || p2.coeffs()[0] != c0 {
            return Err(format!("m = {m}: p_2 disagrees with the orthogonality system"));
        }
    }
    Ok("m = 1..8 equal".into())
}

fn c3_cosine_polynomials() -> Outcome {
    let d = 200;
    let pi = agm_pi(d + 20);
    let w = pi.digits();
    let c = |v: i64| BigNum::from_i64(v, w);
    let p2 = &pi * &pi;
    let p4 = &p2 * &p2;
    let p6 = &p4 * &p2;
    let expected: [(usize, Vec<BigNum>); 3] = [
        (2, vec![&c(8) / &p2 - c(1), c(0), c(1)]),
        (3, vec![
            c(0),
            -(&(&(&p4 - &(&c(48) * &p2)) + &c(384)) / &(&(&p2 - &c(8)) * &p2)),
            c(0),
            c(1),
        ]),
        (4, vec![
            &(&(&(&p6 - &(&c(114) * &p4)) + &(&c(1728) * &p2)) - &c(6912)) / &(&p4 * &(&p2 - &c(10))),
            c(0),
            -(&(&c(2) * &(&(&p4 - &(&c(78) * &p2)) + &c(672))) / &(&p2 * &(&p2 - &c(10)))),
            c(0),
            c(1),
        ]),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (n, want) in expected {
        let t = RecurrenceTable::at_precision(Kernel::Cosine, n, d).map_err(|e| e.to_string())?;
        let got = t.polynomial(n).map_err(|e| e.to_string())?;
        for (j, (g, e)) in got.coeffs().iter().zip(&want).enumerate() {
            let err = if e.is_zero() { log10(g) } else { log10(&(&(g - e) / e)) };
            if err >= -150.0 {
                return Err(format!("p_{n} x^{j}: error 10^{err:.1}"));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!("worst coefficient error 10^{worst:.1}"))
}

fn c4_moment_forms() -> Outcome {
    let d = 200;
    let mut worst = f64::NEG_INFINITY;
    for k in (0..=64).step_by(2) {
        let a = cosine_moment(k, d).map_err(|e| e.to_string())?;
        let b = cosine_moment_hypergeometric(k, d).map_err(|e| e.to_string())?;
        let err = log10(&(&(&a - &b) / &b));
        if err >= -f64::from(d - 5) {
            return Err(format!("k = {k}: relative difference 10^{err:.1}"));
        }
        worst = worst.max(err);
    }
    Ok(format!("even k <= 64 at {d} digits, worst 10^{worst:.1}"))
}

fn c5_exactness(rules: &[(Kernel, usize, &QuadratureRule)]) -> Outcome {
    let mut notes = Vec::new();
    for &(kernel, n, rule) in rules {
        let r = exactness(rule);
        let limit = -f64::from(rule.working_digits() - 10);
        if r >= limit {
            return Err(format!("{kernel} N={n}: 10^{r:.1} at {} digits", rule.working_digits()));
        }
        notes.push((r - limit).max(-99.0));
    }
    let margin = notes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(format!("{} rules, smallest margin {:.1} digits", rules.len(), -margin))
}

fn c6_exponential(rule: &QuadratureRule) -> Outcome {
    // Σ_{n≥0} 1/(n!(n+1)²) in rationals, tail below 10^-70
    let mut sum = int(0);
    let mut fact = BigInt::from(1);
    let bound = Rational::new(1.into(), BigInt::from(10).pow(70));
    for n in 0u32.. {
        if n > 0 {
            fact *= n;
        }
        let term = Rational::new(1.into(), &fact * BigInt::from((n + 1) * (n + 1)));
        sum += &term;
        if term < bound {
            break;
        }
    }
    let want = BigNum::from_rational(&sum, 60);
    let d = rule.working_digits();
    let exp = |x: &BigNum| -> Result<BigNum, String> {
        let (mut term, mut acc) = (BigNum::one(d), BigNum::one(d));
        for k in 1..400 {
            term = &(&term * x) / &BigNum::from_i64(k, d);
            acc = &acc + &term;
            if log10(&term) < -f64::from(d) - 5.0 {
                break;
            }
        }
        Ok(acc)
    };
    let got = apply_rule(rule, exp).map_err(|e| e.to_string())?.with_digits(60);
    let err = log10(&(&(&got - &want) / &want));
    if err < -25.0 {
        Ok(format!("relative error 10^{err:.1}"))
    } else {
        Err(format!("relative error 10^{err:.1}"))
    }
}

fn c7_stability(rules: &[(Kernel, usize, &QuadratureRule)]) -> Outcome {
    for &(kernel, n, rule) in rules {
        let before = render_table(rule).map_err(|e| e.to_string())?;
        let higher = rule.working_digits().div_ceil(2) * 3;
        let policy = PrecisionPolicy::with_defaults(higher, 30).map_err(|e| e.to_string())?;
        let again = generate_rule(kernel, n, &policy).map_err(|e| e.to_string())?;
        if render_table(&again).map_err(|e| e.to_string())? != before {
            return Err(format!("{kernel} N={n} changes between {} and {} digits", rule.working_digits(), again.working_digits()));
        }
    }
    Ok(format!("{} tables unchanged at 3/2 precision", rules.len()))
}

type Matrix = BTreeMap<(u32, usize), QuadratureRule>;

fn key(kernel: Kernel) -> u32 {
    match kernel {
        Kernel::LogPower(m) => m,
        Kernel::Cosine => 0,
    }
}

fn c8_full_range(dir: &Path, matrix: &mut Matrix) -> Outcome {
    let ns: Vec<usize> = (N_LOW..=N_HIGH).collect();
    let mut retries = 0;
    for kernel in KERNELS {
        let started = Instant::now();
        let rules = generate_rules(kernel, &ns, &default_policy(kernel)).map_err(|e| format!("{kernel}: {e}"))?;
        for (n, rule) in rules {
            let rule = rule.map_err(|e| format!("{kernel} N={n}: {e}"))?;
            let text = render_table(&rule).map_err(|e| e.to_string())?;
            std::fs::write(dir.join(kernel.table_stem(n)), text).map_err(|e| e.to_string())?;
            retries += rule.retries();
            matrix.insert((key(kernel), n), rule);
        }
        eprintln!("  generated {kernel} N={N_LOW}..{N_HIGH} in {:.0?}", started.elapsed());
    }
    Ok(format!("{} tables, {retries} escalations beyond the first comparison", matrix.len()))
}

fn c9_round_trip(dir: &Path, matrix: &Matrix, seed: u64) -> Outcome {
    let mut stems: Vec<(Kernel, usize)> = matrix
        .keys()
        .map(|&(k, n)| (if k == 0 { Kernel::Cosine } else { Kernel::LogPower(k) }, n))
        .collect();
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    stems.shuffle(&mut rng);
    stems.truncate(20);
    if stems.len() < 20 {
        return Err(format!("only {} generated files", stems.len()));
    }
    for (kernel, n) in &stems {
        let path = dir.join(kernel.table_stem(*n));
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let parsed = parse_table(&text, *kernel, *n).map_err(|e| format!("{}: {e}", path.display()))?;
        if render_table(&parsed).map_err(|e| e.to_string())? != text {
            return Err(format!("{} does not re-render identically", path.display()));
        }
        let report = verify_file(&path, gqtab::verify::DEFAULT_TOLERANCE_DIGITS);
        if let Err(e) = report.outcome {
            return Err(format!("verify {}: {e}", path.display()));
        }
    }
    Ok(format!("20 files (seed {seed}) byte-identical and verified"))
}

fn c10_properties(matrix: &Matrix) -> Outcome {
    let tol = BigNum::from_rational(&Rational::new(1.into(), BigInt::from(10).pow(30)), 60);
    let mut symmetric = 0;
    for ((k, n), rule) in matrix {
        if !rule.weights().iter().all(BigNum::is_positive) {
            return Err(format!("kernel {k} N={n}: non-positive weight"));
        }
        if *k == 0 {
            let (x, w) = (rule.nodes(), rule.weights());
            for i in 0..*n {
                let j = n - 1 - i;
                if (&x[i] + &x[j]).abs() > tol || (&(&w[i] - &w[j]) / &w[i]).abs() > tol {
                    return Err(format!("cosine N={n}: pair {i}/{j} not symmetric"));
                }
            }
            symmetric += 1;
        }
        if *n < 33 {
            if let Some(next) = matrix.get(&(*k, n + 1)) {
                let (small, big) = (rule.nodes(), next.nodes());
                for (i, x) in small.iter().enumerate() {
                    if !(big[i] < *x && *x < big[i + 1]) {
                        return Err(format!("kernel {k}: N={n} node {i} does not interlace with N={}", n + 1));
                    }
                }
            }
        }
    }
    Ok(format!("{} rules positive, {symmetric} cosine rules symmetric, interlacing for N <= 33", matrix.len()))
}

// ---------------------------------------------------------------- driver

struct Report {
    failed: usize,
}

impl Report {
    fn record(&mut self, id: u32, title: &str, started: Instant, outcome: Outcome) {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {id:>2}  {title}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL  criterion {id:>2}  {title}: {detail} ({secs:.1}s)");
            }
        }
    }
}

fn main() {
    let seed = std::env::var("GQTAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_260_101);
    let mut report = Report { failed: 0 };

    let t = Instant::now();
    report.record(1, "exact log polynomials", t, c1_exact_polynomials());
    let t = Instant::now();
    report.record(2, "generic p_1, p_2", t, c2_generic_forms());
    let t = Instant::now();
    report.record(3, "cosine polynomials in pi", t, c3_cosine_polynomials());
    let t = Instant::now();
    report.record(4, "cosine moment forms agree", t, c4_moment_forms());

    let t = Instant::now();
    let desk: Vec<(Kernel, usize, QuadratureRule)> = KERNELS
        .iter()
        .flat_map(|&k| {
            generate_rules(k, &[4, 8, 16, 32], &default_policy(k))
                .unwrap()
                .into_iter()
                .map(move |(n, r)| (k, n, r.unwrap()))
        })
        .collect();
    let refs: Vec<_> = desk.iter().map(|(k, n, r)| (*k, *n, r)).collect();
    report.record(5, "exactness at N = 4, 8, 16, 32", t, c5_exactness(&refs));

    let t = Instant::now();
    let log16 = &desk.iter().find(|(k, n, _)| *k == Kernel::LogPower(1) && *n == 16).unwrap().2;
    report.record(6, "exp against series oracle", t, c6_exponential(log16));

    let t = Instant::now();
    let at32: Vec<_> = refs
        .iter()
        .filter(|(k, n, _)| *n == 32 && matches!(k, Kernel::LogPower(2) | Kernel::Cosine))
        .cloned()
        .collect();
    report.record(7, "stable at 3/2 precision, N = 32", t, c7_stability(&at32));

    let dir = tempfile::tempdir().expect("temporary directory");
    let mut matrix = Matrix::new();
    let t = Instant::now();
    let generated = c8_full_range(dir.path(), &mut matrix);
    let spot = generated.and_then(|summary| {
        let picks: Vec<_> = KERNELS
            .iter()
            .flat_map(|&k| [64, N_HIGH].map(|n| (k, n, &matrix[&(key(k), n)])))
            .collect();
        let e = c5_exactness(&picks)?;
        let s = c7_stability(&picks)?;
        Ok(format!("{summary}; N = 64, 128: {e}; {s}"))
    });
    report.record(8, "full matrix N = 3..128", t, spot);

    let t = Instant::now();
    report.record(9, "round trip of 20 random files", t, c9_round_trip(dir.path(), &matrix, seed));
    let t = Instant::now();
    report.record(10, "symmetry, positivity, interlacing", t, c10_properties(&matrix));

    println!("{} of 10 criteria passed", 10 - report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
