//! Moment sequences of the two weight functions.
//!
//! The logarithmic moments are exact rationals. The cosine moments are
//! alternating sums with heavy cancellation; each is evaluated with enough
//! guard digits to cover the gap between its largest term and a lower bound
//! on the result, then rounded to the requested precision.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{QuadError, Result};
use crate::numerics::{
    factorial, falling_factorial, log10_abs_estimate, pi_to_precision, pochhammer, ratio, BigNum,
    Rational,
};
use crate::par;

/// Weight function of the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// (-log x)^m on [0, 1]
    LogPower(u32),
    /// cos(πx/2) on [-1, 1]
    Cosine,
}

impl Kernel {
    pub fn log(m: u32) -> Result<Kernel> {
        if m == 0 {
            return Err(QuadError::contract("logarithmic kernel needs m >= 1"));
        }
        Ok(Kernel::LogPower(m))
    }

    /// Integration interval as exact endpoints.
    pub fn interval(&self) -> (i64, i64) {
        match self {
            Kernel::LogPower(_) => (0, 1),
            Kernel::Cosine => (-1, 1),
        }
    }

    /// Even weight on a symmetric interval.
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Kernel::Cosine)
    }

    /// File stem for an `n`-node table: `log_N_m` or `cosine_N`.
    pub fn table_stem(&self, n: usize) -> String {
        match self {
            Kernel::LogPower(m) => format!("log_{n}_{m}"),
            Kernel::Cosine => format!("cosine_{n}"),
        }
    }

    /// Inverse of [`Kernel::table_stem`].
    pub fn from_table_stem(stem: &str) -> Option<(Kernel, usize)> {
        let parts: Vec<&str> = stem.split('_').collect();
        match parts.as_slice() {
            ["log", n, m] => {
                let m: u32 = m.parse().ok()?;
                Some((Kernel::log(m).ok()?, n.parse().ok()?))
            }
            ["cosine", n] => Some((Kernel::Cosine, n.parse().ok()?)),
            _ => None,
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::LogPower(m) => write!(f, "(-log x)^{m}"),
            Kernel::Cosine => f.write_str("cos(pi x/2)"),
        }
    }
}

/// ∫₀¹ xⁿ (−log x)^m dx = m!/(n+1)^{m+1}.
pub fn log_moment(n: u32, m: u32) -> Rational {
    let den = num_traits::pow(BigInt::from(n) + 1, (m + 1) as usize);
    Rational::new(factorial(m), den)
}

fn log10_bigint(v: &BigInt) -> f64 {
    log10_abs_estimate(&Rational::from_integer(v.clone()))
}

fn guard_digits(spread: f64) -> u32 {
    spread.max(0.0).ceil() as u32 + 5
}

/// ∫₀^{π/2} x^m cos x dx from the repeated partial-integration sum.
pub fn cos_power_integral(m: u32, digits: u32) -> Result<BigNum> {
    // largest term ≤ m!(π/2)^m · (m/2 + 2) terms; result ≥ (π/2)^{m+1}/((m+1)(m+2))
    let mf = f64::from(m);
    let spread = log10_bigint(&factorial(m)) + ((mf + 1.0) * (mf + 2.0) * (mf / 2.0 + 2.0)).log10();
    let work = digits + guard_digits(spread);
    let half_pi = &pi_to_precision(work)? / &BigNum::from_i64(2, work);
    let half = m / 2;
    let mut sum = BigNum::zero(work);
    for k in 0..=half {
        let coef = BigNum::from_bigint(&falling_factorial(m, 2 * k), work);
        let term = &coef * &half_pi.powi(m - 2 * k);
        sum = if k % 2 == 0 { &sum + &term } else { &sum - &term };
    }
    // (-1)^{⌊m/2⌋} m! (2⌊m/2⌋ − m)
    let mut tail = factorial(m) * (2 * i64::from(half) - i64::from(m));
    if half % 2 == 1 {
        tail = -tail;
    }
    sum = &sum + &BigNum::from_bigint(&tail, work);
    Ok(sum.with_digits(digits))
}

fn require_even(two_m: u32) -> Result<u32> {
    if two_m % 2 != 0 {
        return Err(QuadError::contract(format!(
            "cosine moment {two_m} is odd; odd moments vanish and are not evaluated"
        )));
    }
    Ok(two_m / 2)
}

/// μ_{2m} = ∫₋₁¹ x^{2m} cos(πx/2) dx = 2(2m)! Σ_k (−1)^k (2/π)^{2k+1} / (2m−2k)!.
pub fn cosine_moment(two_m: u32, digits: u32) -> Result<BigNum> {
    let m = require_even(two_m)?;
    // terms ≤ 2(2m)!(2/π); result ≥ 2/((2m+1)(2m+2))
    let n = f64::from(two_m);
    let spread = log10_bigint(&factorial(two_m)) + ((n + 1.0) * (n + 2.0) * (f64::from(m) + 1.0)).log10();
    let work = digits + guard_digits(spread);
    let two_over_pi = &BigNum::from_i64(2, work) / &pi_to_precision(work)?;
    let ratio_sq = &two_over_pi * &two_over_pi;
    let mut power = two_over_pi.clone();
    let mut sum = BigNum::zero(work);
    for k in 0..=m {
        let coef = BigNum::from_bigint(&(falling_factorial(two_m, 2 * k) * 2), work);
        let term = &coef * &power;
        sum = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        power = &power * &ratio_sq;
    }
    Ok(sum.with_digits(digits))
}

/// μ_{2m} = (4/π) ₃F₀(½−m, −m, 1; ; −16/π²), the terminating hypergeometric form.
pub fn cosine_moment_hypergeometric(two_m: u32, digits: u32) -> Result<BigNum> {
    let m = require_even(two_m)?;
    let a = ratio(1, 2) - Rational::from_integer(m.into());
    let b = -Rational::from_integer(m.into());
    let minus_16 = Rational::from_integer((-16).into());
    // (1)_k / k! cancels
    let coefs: Vec<Rational> = (0..=m)
        .map(|k| pochhammer(&a, k) * pochhammer(&b, k) * num_traits::pow(minus_16.clone(), k as usize))
        .collect();
    let log_pi = std::f64::consts::PI.log10();
    let largest = coefs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| log10_abs_estimate(c) - 2.0 * k as f64 * log_pi)
        .fold(0.0, f64::max);
    // the series itself is μ·π/4 ≥ (π/4)·2/((2m+1)(2m+2))
    let n = f64::from(two_m);
    let floor = (std::f64::consts::PI / 2.0 / ((n + 1.0) * (n + 2.0))).log10();
    let work = digits + guard_digits(largest - floor + (f64::from(m) + 1.0).log10() + 1.0);
    let pi = pi_to_precision(work)?;
    let inv_pi_sq = (&pi * &pi).recip();
    let mut power = BigNum::one(work);
    let mut sum = BigNum::zero(work);
    for c in &coefs {
        sum = &sum + &(&BigNum::from_rational(c, work) * &power);
        power = &power * &inv_pi_sq;
    }
    let scaled = &(&BigNum::from_i64(4, work) / &pi) * &sum;
    Ok(scaled.with_digits(digits))
}

/// μ_0..μ_K of one kernel.
#[derive(Debug, Clone)]
pub struct MomentSequence<S> {
    kernel: Kernel,
    values: Vec<S>,
}

impl<S> MomentSequence<S> {
    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    /// Highest available index K.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Result<&S> {
        self.values.get(k).ok_or_else(|| {
            QuadError::contract(format!(
                "moment {k} requested but only 0..={} available",
                self.max_index()
            ))
        })
    }
}

impl MomentSequence<Rational> {
    /// Exact μ_0..μ_K of (−log x)^m.
    pub fn log_exact(m: u32, max_index: usize) -> Result<Self> {
        let kernel = Kernel::log(m)?;
        let values = (0..=max_index as u32).map(|n| log_moment(n, m)).collect();
        Ok(MomentSequence { kernel, values })
    }
}

impl MomentSequence<BigNum> {
    /// μ_0..μ_K of cos(πx/2); odd entries are exact zeros.
    pub fn cosine(max_index: usize, digits: u32) -> Result<Self> {
        let evens: Vec<u32> = (0..=max_index as u32).step_by(2).collect();
        let even_values = par::map(&evens, |&k| cosine_moment(k, digits))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let values = (0..=max_index)
            .map(|k| {
                if k % 2 == 0 {
                    even_values[k / 2].clone()
                } else {
                    BigNum::zero(digits)
                }
            })
            .collect();
        Ok(MomentSequence {
            kernel: Kernel::Cosine,
            values,
        })
    }

    /// Any kernel's moments rounded to `digits`.
    pub fn for_kernel(kernel: Kernel, max_index: usize, digits: u32) -> Result<Self> {
        match kernel {
            Kernel::LogPower(m) => {
                let exact = MomentSequence::log_exact(m, max_index)?;
                Ok(MomentSequence {
                    kernel,
                    values: exact.values.iter().map(|v| BigNum::from_rational(v, digits)).collect(),
                })
            }
            Kernel::Cosine => MomentSequence::cosine(max_index, digits),
        }
    }
}

impl<S> MomentSequence<S> {
    /// Build a sequence from precomputed values.
    pub fn from_values(kernel: Kernel, values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(QuadError::contract("empty moment sequence"));
        }
        Ok(MomentSequence { kernel, values })
    }
}

/// μ_0 of the kernel at `digits`.
pub fn total_mass(kernel: Kernel, digits: u32) -> Result<BigNum> {
    match kernel {
        Kernel::LogPower(m) => Ok(BigNum::from_bigint(&factorial(m), digits)),
        Kernel::Cosine => {
            let pi = pi_to_precision(digits + 5)?;
            Ok((&BigNum::from_i64(4, digits + 5) / &pi).with_digits(digits))
        }
    }
}
