//! Zeros of the orthogonal family by interlacing ascent.
//!
//! The zeros of p_k together with the interval endpoints bracket exactly one
//! zero of p_{k+1} each. Every bracket is solved by Newton's method with a
//! bisection fallback, evaluating p_{k+1} through the recurrence.

use crate::error::{QuadError, Result};
use crate::numerics::{bits_for_digits, BigNum};
use crate::orthopoly::RecurrenceTable;
use crate::par;

/// Precision of the interlacing sweep; requested degrees are then refined.
pub const TRACE_DIGITS: u32 = 60;

/// Zeros of p_n, ascending. For symmetric kernels the middle zero of an
/// odd-degree polynomial is exactly 0 and the others come in exact ± pairs.
pub fn find_roots(table: &RecurrenceTable<BigNum>, n: usize, digits: u32) -> Result<Vec<BigNum>> {
    let mut out = None;
    ascend(table, n, digits, |k| k == n, |_, roots| {
        out = Some(roots.to_vec());
        Ok(())
    })?;
    Ok(out.expect("ascent reaches the final degree"))
}

/// Run the ascent to degree `n` and hand the ascending zeros of every p_k
/// with `wanted(k)` to `visit`, accurate to `digits`. The sweep itself runs at
/// [`TRACE_DIGITS`]; an error from `visit` stops it.
pub fn ascend(
    table: &RecurrenceTable<BigNum>,
    n: usize,
    digits: u32,
    wanted: impl Fn(usize) -> bool,
    mut visit: impl FnMut(usize, &[BigNum]) -> Result<()>,
) -> Result<()> {
    if n == 0 {
        return Err(QuadError::contract("root finding needs degree >= 1"));
    }
    if n > table.max_degree() + 1 {
        return Err(QuadError::contract(format!(
            "degree {n} exceeds the recurrence table (max {})",
            table.max_degree() + 1
        )));
    }
    if let Some(k) = table.b().iter().skip(1).position(|b| !b.is_positive()) {
        return Err(QuadError::precision(format!("b_{} is not positive", k + 1)));
    }
    let ladder = Ladder::new(table, digits);
    let trace = ladder.coarse();
    let trace_digits = ladder.levels[0].0;
    let symmetric = table.kernel().is_symmetric();
    let (lo, hi) = table.kernel().interval();
    let lo = if symmetric { BigNum::zero(trace_digits) } else { BigNum::from_i64(lo, trace_digits) };
    let hi = BigNum::from_i64(hi, trace_digits);

    // symmetric kernels track the nonnegative half only
    let mut coarse: Vec<BigNum> = Vec::new();
    for k in 1..=n {
        let mut ends = Vec::with_capacity(coarse.len() + 2);
        ends.push(lo.clone());
        ends.extend(coarse.iter().cloned());
        ends.push(hi.clone());
        // odd k: zero is a root and sits left of the first bracket
        let skip = usize::from(symmetric && k % 2 == 1);
        let brackets: Vec<(BigNum, BigNum)> = ends
            .windows(2)
            .skip(skip)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        coarse = par::map(&brackets, |(a, b)| polish(trace, k, a, b, None, trace_digits))
            .into_iter()
            .collect::<Result<_>>()?;
        if !wanted(k) {
            continue;
        }
        let fine: Vec<BigNum> = if trace_digits == digits {
            coarse.clone()
        } else {
            let jobs: Vec<_> = brackets.iter().zip(&coarse).collect();
            par::map(&jobs, |((a, b), x)| ladder.refine(k, a, b, x))
                .into_iter()
                .collect::<Result<_>>()?
        };
        if symmetric {
            let mut all: Vec<BigNum> = fine.iter().rev().map(|x| -x).collect();
            if k % 2 == 1 {
                all.push(BigNum::zero(digits));
            }
            all.extend(fine);
            visit(k, &all)?;
        } else {
            visit(k, &fine)?;
        }
    }
    Ok(())
}

/// The table rounded to doubling precisions, ending at the full one.
struct Ladder<'a> {
    levels: Vec<(u32, std::borrow::Cow<'a, RecurrenceTable<BigNum>>)>,
}

impl<'a> Ladder<'a> {
    fn new(table: &'a RecurrenceTable<BigNum>, digits: u32) -> Self {
        let mut levels = Vec::new();
        let mut d = digits.min(TRACE_DIGITS);
        while d < digits {
            levels.push((d, std::borrow::Cow::Owned(table.map(|v| v.with_digits(d)))));
            d *= 2;
        }
        levels.push((digits, std::borrow::Cow::Borrowed(table)));
        Ladder { levels }
    }

    fn coarse(&self) -> &RecurrenceTable<BigNum> {
        &self.levels[0].1
    }

    /// One Newton step per intermediate level, then the full polish.
    fn refine(&self, k: usize, lo: &BigNum, hi: &BigNum, x: &BigNum) -> Result<BigNum> {
        let mut x = x.clone();
        let (last, middle) = self.levels[1..].split_last().expect("at least two levels");
        for (d, table) in middle {
            let xd = x.with_digits(*d);
            let (f, df) = table.eval_with_derivative(k, &xd);
            if df.is_zero() {
                break;
            }
            let cand = &xd - &(&f / &df);
            if &cand <= lo || &cand >= hi {
                break;
            }
            x = cand;
        }
        let (digits, table) = last;
        polish(table, k, &lo.with_digits(*digits), &hi.with_digits(*digits), Some(x.with_digits(*digits)), *digits)
    }
}

/// Newton iteration cap: 4⌈log₂ digits⌉ + 20.
pub fn newton_cap(digits: u32) -> u32 {
    4 * (32 - (digits.max(2) - 1).leading_zeros()) + 20
}

/// The single zero of p_k strictly inside (lo, hi), starting from `start` or
/// the midpoint.
fn polish(
    table: &RecurrenceTable<BigNum>,
    k: usize,
    lo: &BigNum,
    hi: &BigNum,
    start: Option<BigNum>,
    digits: u32,
) -> Result<BigNum> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let sign_lo = table.eval(k, &lo).signum();
    let sign_hi = table.eval(k, &hi).signum();
    if sign_lo == 0 || sign_hi == 0 || sign_lo == sign_hi {
        return Err(QuadError::precision(format!(
            "no sign change of p_{k} on its interlacing bracket"
        )));
    }
    let two = BigNum::from_i64(2, digits);
    let width = &hi - &lo;
    let tol = &width * &BigNum::parse(&format!("1e-{}", digits.saturating_sub(5)), digits).unwrap();
    // bisection has no quadratic finish, so it runs to the full precision
    let fine = &width * &BigNum::parse(&format!("1e-{digits}"), digits).unwrap();
    let cap = newton_cap(digits);
    let bisect_cap = bits_for_digits(digits) as u32 + 16;
    let (mut newton_steps, mut bisections) = (0u32, 0u32);
    let mut x = match start {
        Some(x) if x > lo && x < hi => x,
        _ => &(&lo + &hi) / &two,
    };
    loop {
        let (f, df) = table.eval_with_derivative(k, &x);
        if f.is_zero() {
            return Ok(x);
        }
        if f.signum() == sign_lo {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let newton = if df.is_zero() {
            None
        } else {
            let step = &f / &df;
            let cand = &x - &step;
            if cand > lo && cand < hi {
                Some((cand, step))
            } else {
                // rounding noise can push a converged step just past an end
                let end = if cand <= lo { &lo } else { &hi };
                if (&cand - end).abs() <= tol {
                    return Ok(end.clone());
                }
                None
            }
        };
        match newton {
            Some((cand, step)) => {
                newton_steps += 1;
                if step.abs() <= tol {
                    return Ok(cand);
                }
                if newton_steps > cap {
                    return Err(QuadError::precision(format!(
                        "Newton iteration for p_{k} did not settle within {cap} steps"
                    )));
                }
                x = cand;
            }
            None => {
                bisections += 1;
                x = &(&lo + &hi) / &two;
                if &hi - &lo <= fine || x == lo || x == hi {
                    return Ok(x);
                }
                if bisections > bisect_cap {
                    return Err(QuadError::precision(format!("bisection for p_{k} stalled")));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Kernel;
    use crate::numerics::{pi_to_precision, ratio};

    #[test]
    fn log_m1_degree_one() {
        let t = RecurrenceTable::at_precision(Kernel::LogPower(1), 1, 60).unwrap();
        let r = find_roots(&t, 1, 60).unwrap();
        assert_eq!(r, vec![BigNum::from_rational(&ratio(1, 4), 60)]);
    }

    #[test]
    fn log_m1_quadratic_formula() {
        let d = 80;
        let t = RecurrenceTable::at_precision(Kernel::LogPower(1), 2, d).unwrap();
        let r = find_roots(&t, 2, d).unwrap();
        // (5/7 ± √(25/49 − 17/63)) / 2
        let s = BigNum::from_rational(&(ratio(25, 49) - ratio(17, 63)), d + 10).sqrt().unwrap();
        let c = BigNum::from_rational(&ratio(5, 7), d + 10);
        let two = BigNum::from_i64(2, d + 10);
        let expect = [&(&c - &s) / &two, &(&c + &s) / &two];
        for (x, e) in r.iter().zip(&expect) {
            assert!((x - e).abs().log10_abs() < -f64::from(d - 3));
        }
    }

    #[test]
    fn cosine_degree_three() {
        let d = 100;
        let t = RecurrenceTable::at_precision(Kernel::Cosine, 3, d).unwrap();
        let r = find_roots(&t, 3, d).unwrap();
        assert!(r[1].is_zero());
        assert_eq!(r[0], -&r[2]);
        // r² = (π⁴ − 48π² + 384) / ((π² − 8) π²)
        let pi = pi_to_precision(d + 10).unwrap();
        let p2 = &pi * &pi;
        let num = &(&(&p2 * &p2) - &(&BigNum::from_i64(48, d + 10) * &p2)) + &BigNum::from_i64(384, d + 10);
        let den = &(&p2 - &BigNum::from_i64(8, d + 10)) * &p2;
        let rr = (&num / &den).sqrt().unwrap();
        assert!((&r[2] - &rr).abs().log10_abs() < -f64::from(d - 10));
    }

    #[test]
    fn cap_formula() {
        assert_eq!(newton_cap(270), 4 * 9 + 20);
        assert_eq!(newton_cap(256), 4 * 8 + 20);
        assert_eq!(newton_cap(650), 4 * 10 + 20);
    }

    #[test]
    fn degree_beyond_table_is_rejected() {
        let t = RecurrenceTable::at_precision(Kernel::LogPower(1), 2, 40).unwrap();
        assert!(find_roots(&t, 3, 40).is_ok());
        assert!(find_roots(&t, 4, 40).is_err());
        assert!(find_roots(&t, 0, 40).is_err());
    }
}
