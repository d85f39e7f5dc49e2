//! π from Machin's arctangent formula, correctly rounded.

use num_bigint::BigInt;
use num_traits::One;

use super::bignum::{bits_for_digits, BigNum};
use super::MAX_SUPPORTED_DIGITS;
use crate::error::{QuadError, Result};

/// Fixed-point `arctan(1/x) * 2^frac_bits`, truncated term by term.
/// Returns the sum and the number of terms; each term is off by less than 3 units.
fn arctan_inv(x: u32, frac_bits: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(u64::from(x) * u64::from(x));
    let mut power = (BigInt::one() << frac_bits) / x;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &x2;
        if power.bits() == 0 {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    (sum, k)
}

/// π rounded to nearest at `digits` significant digits.
pub fn pi_to_precision(digits: u32) -> Result<BigNum> {
    if digits == 0 {
        return Err(QuadError::contract("pi requested with zero digits"));
    }
    if digits > MAX_SUPPORTED_DIGITS {
        return Err(QuadError::ResourceLimit {
            requested: digits,
            limit: MAX_SUPPORTED_DIGITS,
        });
    }
    let bits = bits_for_digits(digits);
    let mut guard = 32u64;
    loop {
        let frac = bits + guard;
        let (a, ta) = arctan_inv(5, frac);
        let (b, tb) = arctan_inv(239, frac);
        let approx = a * 16 - b * 4;
        // 16 * (3 per term + tail) + 4 * (3 per term + tail)
        let err = BigInt::from(16 * (3 * ta + 2) + 4 * (3 * tb + 2));
        let lo = BigNum::from_ratio(&(&approx - &err), &(BigInt::one() << frac), digits);
        let hi = BigNum::from_ratio(&(&approx + &err), &(BigInt::one() << frac), digits);
        if lo == hi {
            return Ok(lo);
        }
        guard *= 2;
    }
}
