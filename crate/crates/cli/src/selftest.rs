//! `selftest`: printed closed forms checked against the library, one JSON
//! object per line.

use std::io::Write;

use gqtab_core::moments::{cosine_moment, cosine_moment_hypergeometric, log_moment, total_mass};
use gqtab_core::numerics::{pi_to_precision, ratio};
use gqtab_core::orthopoly::{generic_low_degree, RecurrenceTable};
use gqtab_core::{BigNum, Kernel, Rational};

use crate::{EXIT_CHECK_FAILED, EXIT_OK};

type Check = fn() -> Result<(), String>;

fn frac(n: &str, d: &str) -> Rational {
    Rational::new(n.parse().unwrap(), d.parse().unwrap())
}

/// Coefficient `j` of the exact p_{n,m}.
fn log_coefficient(m: u32, n: usize, j: usize) -> Result<Rational, String> {
    let t = RecurrenceTable::exact(Kernel::LogPower(m), n).map_err(|e| e.to_string())?;
    let p = t.polynomial(n).map_err(|e| e.to_string())?;
    Ok(p.coeffs()[j].clone())
}

fn expect_coefficient(m: u32, n: usize, j: usize, want: Rational) -> Result<(), String> {
    let got = log_coefficient(m, n, j)?;
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got}, expected {want}"))
    }
}

fn close(got: &BigNum, want: &BigNum, digits: u32) -> Result<(), String> {
    let rel = (&(got - want) / want).abs();
    if rel.is_zero() || rel.log10_abs() < -f64::from(digits) {
        Ok(())
    } else {
        Err(format!("got {}, expected {}", got.to_sci_string(digits + 2), want.to_sci_string(digits + 2)))
    }
}

/// Cosine p_n coefficients against closed forms in π at 200 digits.
fn cosine_coefficients(n: usize, want: impl Fn(&BigNum) -> Vec<(usize, BigNum)>) -> Result<(), String> {
    let d = 200;
    let t = RecurrenceTable::at_precision(Kernel::Cosine, n, d).map_err(|e| e.to_string())?;
    let p = t.polynomial(n).map_err(|e| e.to_string())?;
    let pi = pi_to_precision(d).map_err(|e| e.to_string())?;
    for (j, w) in want(&pi) {
        close(&p.coeffs()[j], &w, 150).map_err(|e| format!("coefficient {j}: {e}"))?;
    }
    Ok(())
}

const FIXTURES: &[(&str, Check)] = &[
    ("p_{1,1} = x - 1/4", || expect_coefficient(1, 1, 0, ratio(-1, 4))),
    ("p_{2,1} linear coefficient", || expect_coefficient(1, 2, 1, ratio(-5, 7))),
    ("p_{2,1} constant term", || expect_coefficient(1, 2, 0, ratio(17, 252))),
    ("p_{3,1} quadratic coefficient", || expect_coefficient(1, 3, 2, ratio(-3105, 2588))),
    ("p_{3,1} linear coefficient", || expect_coefficient(1, 3, 1, ratio(5751, 16175))),
    ("p_{3,1} constant term", || expect_coefficient(1, 3, 0, ratio(-4679, 258800))),
    ("p_{1,2} = x - 1/8", || expect_coefficient(2, 1, 0, ratio(-1, 8))),
    ("p_{2,2} linear coefficient", || expect_coefficient(2, 2, 1, ratio(-19, 37))),
    ("p_{2,2} constant term", || expect_coefficient(2, 2, 0, ratio(217, 7992))),
    ("p_{3,2} quadratic coefficient", || expect_coefficient(2, 3, 2, frac("-1632663", "1695176"))),
    ("p_{3,2} linear coefficient", || expect_coefficient(2, 3, 1, frac("5619807", "26487125"))),
    ("p_{3,2} constant term", || expect_coefficient(2, 3, 0, frac("-1568083", "242168000"))),
    ("p_{1,3} = x - 1/16", || expect_coefficient(3, 1, 0, ratio(-1, 16))),
    ("p_{2,3} linear coefficient", || expect_coefficient(3, 2, 1, ratio(-13, 35))),
    ("p_{2,3} constant term", || expect_coefficient(3, 2, 0, ratio(493, 45360))),
    ("p_{3,3} quadratic coefficient", || expect_coefficient(3, 3, 2, frac("-129197997", "166534960"))),
    ("p_{3,3} linear coefficient", || expect_coefficient(3, 3, 1, frac("4147011999", "32526359375"))),
    ("p_{3,3} constant term", || expect_coefficient(3, 3, 0, frac("-19126701359", "8326748000000"))),
    ("generic p_{1,m}, p_{2,m} for m = 1..8", || {
        for m in 1..=8 {
            let (p1, p2) = generic_low_degree(m).map_err(|e| e.to_string())?;
            let t = RecurrenceTable::exact(Kernel::LogPower(m), 2).map_err(|e| e.to_string())?;
            if t.polynomial(1).map_err(|e| e.to_string())? != p1 || t.polynomial(2).map_err(|e| e.to_string())? != p2 {
                return Err(format!("m = {m} differs from the closed form"));
            }
        }
        Ok(())
    }),
    ("log moment m!/(n+1)^(m+1)", || {
        for (n, m, want) in [(0, 1, ratio(1, 1)), (3, 1, ratio(1, 16)), (1, 2, ratio(1, 4)), (2, 3, ratio(6, 81))] {
            if log_moment(n, m) != want {
                return Err(format!("mu_{{{n},{m}}} = {}, expected {want}", log_moment(n, m)));
            }
        }
        Ok(())
    }),
    ("cosine mu_0 = 4/pi at 50 digits", || {
        let d = 50;
        let pi = pi_to_precision(d + 10).map_err(|e| e.to_string())?;
        let want = &BigNum::from_i64(4, d + 10) / &pi;
        close(&cosine_moment(0, d).map_err(|e| e.to_string())?, &want, d)?;
        close(&total_mass(Kernel::Cosine, d).map_err(|e| e.to_string())?, &want, d)
    }),
    ("cosine moments match the 3F0 form, k <= 64", || {
        let d = 100;
        for k in (0..=64).step_by(2) {
            let a = cosine_moment(k, d).map_err(|e| e.to_string())?;
            let b = cosine_moment_hypergeometric(k, d).map_err(|e| e.to_string())?;
            close(&a, &b, d - 5).map_err(|e| format!("k = {k}: {e}"))?;
        }
        Ok(())
    }),
    ("cosine p_2 = x^2 - 1 + 8/pi^2", || {
        cosine_coefficients(2, |pi| {
            let d = pi.digits();
            let c = &BigNum::from_i64(8, d) / &(pi * pi) - BigNum::one(d);
            vec![(0, c)]
        })
    }),
    ("cosine p_3 linear coefficient", || {
        cosine_coefficients(3, |pi| {
            let d = pi.digits();
            let p2 = pi * pi;
            let num = &(&(&p2 * &p2) - &(&BigNum::from_i64(48, d) * &p2)) + &BigNum::from_i64(384, d);
            let den = &(&p2 - &BigNum::from_i64(8, d)) * &p2;
            vec![(1, -(&num / &den))]
        })
    }),
    ("cosine p_4 coefficients", || {
        cosine_coefficients(4, |pi| {
            let d = pi.digits();
            let c = |v: i64| BigNum::from_i64(v, d);
            let p2 = pi * pi;
            let p4 = &p2 * &p2;
            let p6 = &p4 * &p2;
            let x2 = -(&(&c(2) * &(&(&p4 - &(&c(78) * &p2)) + &c(672))) / &(&p2 * &(&p2 - &c(10))));
            let num = &(&(&p6 - &(&c(114) * &p4)) + &(&c(1728) * &p2)) - &c(6912);
            let x0 = &num / &(&p4 * &(&p2 - &c(10)));
            vec![(2, x2), (0, x0)]
        })
    }),
];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(name, _)| *name).collect()
}

/// Run every fixture, printing one JSON line each.
pub fn run(out: &mut dyn Write) -> i32 {
    let mut failed = 0;
    for (name, check) in FIXTURES {
        let result = check();
        failed += usize::from(result.is_err());
        let line = serde_json::json!({
            "fixture": name,
            "pass": result.is_ok(),
            "detail": result.err(),
        });
        let _ = writeln!(out, "{line}");
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
