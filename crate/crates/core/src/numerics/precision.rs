//! Precision escalation and digit stabilization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::rational::{ratio, Rational};
use super::BigNum;
use crate::error::{QuadError, Result};
use crate::par;

/// Working precisions, escalation schedule and output width for one computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionPolicy {
    initial_digits: u32,
    growth_factor: Rational,
    max_digits: u32,
    output_digits: u32,
}

pub const DEFAULT_OUTPUT_DIGITS: u32 = 30;
pub const DEFAULT_LOG_DIGITS: u32 = 270;
pub const DEFAULT_COSINE_DIGITS: u32 = 650;
pub const DEFAULT_MAX_DIGITS: u32 = 4000;

impl PrecisionPolicy {
    pub fn new(
        initial_digits: u32,
        growth_factor: Rational,
        max_digits: u32,
        output_digits: u32,
    ) -> Result<Self> {
        if output_digits == 0 {
            return Err(QuadError::contract("output digits must be positive"));
        }
        if initial_digits < output_digits + 20 {
            return Err(QuadError::contract(format!(
                "initial precision {initial_digits} must exceed output digits {output_digits} by at least 20"
            )));
        }
        if growth_factor <= Rational::one() {
            return Err(QuadError::contract("growth factor must exceed 1"));
        }
        if max_digits <= initial_digits {
            return Err(QuadError::contract(format!(
                "max digits {max_digits} leaves no room to escalate from {initial_digits}"
            )));
        }
        Ok(PrecisionPolicy {
            initial_digits,
            growth_factor,
            max_digits,
            output_digits,
        })
    }

    /// 3/2 growth, 4000-digit ceiling.
    pub fn with_defaults(initial_digits: u32, output_digits: u32) -> Result<Self> {
        PrecisionPolicy::new(
            initial_digits,
            ratio(3, 2),
            DEFAULT_MAX_DIGITS.max(initial_digits * 2),
            output_digits,
        )
    }

    pub fn initial_digits(&self) -> u32 {
        self.initial_digits
    }

    pub fn growth_factor(&self) -> &Rational {
        &self.growth_factor
    }

    pub fn max_digits(&self) -> u32 {
        self.max_digits
    }

    pub fn output_digits(&self) -> u32 {
        self.output_digits
    }

    /// Next precision after `digits`: ⌈digits·growth⌉ clamped to `max_digits`.
    pub fn escalate(&self, digits: u32) -> Option<u32> {
        if digits >= self.max_digits {
            return None;
        }
        let scaled = &self.growth_factor * BigInt::from(digits);
        let next = scaled.numer().div_ceil(scaled.denom());
        let next: u32 = next.try_into().unwrap_or(u32::MAX);
        Some(next.max(digits + 1).min(self.max_digits))
    }

    /// The full escalation sequence, starting at `initial_digits`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![self.initial_digits];
        while let Some(next) = self.escalate(*out.last().unwrap()) {
            out.push(next);
        }
        out
    }
}

/// Values whose printed form is what stabilization certifies.
pub trait Rendered {
    fn rendered(&self, digits: u32) -> Vec<String>;
}

impl Rendered for Vec<BigNum> {
    fn rendered(&self, digits: u32) -> Vec<String> {
        self.iter().map(|v| v.to_sci_string(digits)).collect()
    }
}

/// A result certified unchanged between two consecutive working precisions.
#[derive(Debug, Clone)]
pub struct Stabilized<T> {
    pub value: T,
    /// Precision of the accepted (higher) run.
    pub working_digits: u32,
    /// Escalations beyond the first comparison.
    pub retries: u32,
}

fn first_mismatch(a: &[String], b: &[String]) -> Option<usize> {
    if a.len() != b.len() {
        return Some(a.len().min(b.len()));
    }
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// Run `compute` at successive precisions of `policy` until two consecutive
/// runs render identically at `output_digits`; returns the higher run.
///
/// A [`QuadError::PrecisionLoss`] from `compute` counts as disagreement.
pub fn stabilized<T, F>(policy: &PrecisionPolicy, compute: F) -> Result<Stabilized<T>>
where
    T: Rendered + Send,
    F: Fn(u32) -> Result<T> + Sync,
{
    let schedule = policy.schedule();
    let out = policy.output_digits;
    let run = |digits: u32| -> Result<Option<(T, Vec<String>)>> {
        match compute(digits) {
            Ok(v) => {
                let r = v.rendered(out);
                Ok(Some((v, r)))
            }
            Err(QuadError::PrecisionLoss(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let (first, second) = par::join(|| run(schedule[0]), || run(schedule[1]));
    let mut prev = first?;
    let mut cur = second?;
    let mut mismatch = 0usize;
    for (step, &digits) in schedule.iter().enumerate().skip(1) {
        if step > 1 {
            prev = cur.take();
            cur = run(digits)?;
        }
        if let (Some((_, a)), Some((_, b))) = (&prev, &cur) {
            match first_mismatch(a, b) {
                None => {
                    let (value, _) = cur.unwrap();
                    return Ok(Stabilized {
                        value,
                        working_digits: digits,
                        retries: (step - 1) as u32,
                    });
                }
                Some(i) => mismatch = i,
            }
        }
    }
    Err(QuadError::StabilizationFailure {
        index: mismatch,
        digits: *schedule.last().unwrap(),
    })
}
