//! Binary floating point numbers of arbitrary precision.
//!
//! A [`BigNum`] stores `mantissa * 2^exponent` with the mantissa held to a
//! fixed number of bits derived from the value's decimal precision tag.
//! Every arithmetic result is correctly rounded (nearest, ties to even) at
//! the larger precision of the operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QuadError, Result};

/// Mantissa width in bits for a precision of `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u64 {
    // ceil(digits * log2(10)) plus four guard bits
    (u64::from(digits) * 3_321_928_095).div_ceil(1_000_000_000) + 4
}

#[derive(Clone)]
pub struct BigNum {
    // zero, or exactly `bits_for_digits(digits)` bits long
    mant: BigInt,
    exp: i64,
    digits: u32,
}

fn pow10(k: u32) -> BigUint {
    num_traits::pow(BigUint::from(10u32), k as usize)
}

/// Round `mag * 2^exp` to `bits` bits, nearest-even. Returns the normalized
/// magnitude and exponent.
fn round_mag(mag: BigUint, exp: i64, bits: u64) -> (BigUint, i64) {
    let len = mag.bits();
    match len.cmp(&bits) {
        Ordering::Equal => (mag, exp),
        Ordering::Less => {
            let shift = bits - len;
            (mag << shift, exp - shift as i64)
        }
        Ordering::Greater => {
            let mut shift = len - bits;
            let half = mag.bit(shift - 1);
            let rest = mag.trailing_zeros().map_or(false, |tz| tz < shift - 1);
            let mut q = &mag >> shift;
            if half && (rest || q.bit(0)) {
                q += 1u32;
                if q.bits() > bits {
                    q >>= 1;
                    shift += 1;
                }
            }
            (q, exp + shift as i64)
        }
    }
}

impl BigNum {
    fn from_parts(sign: Sign, mag: BigUint, exp: i64, digits: u32) -> Self {
        if mag.is_zero() {
            return BigNum::zero(digits);
        }
        let (mag, exp) = round_mag(mag, exp, bits_for_digits(digits));
        BigNum {
            mant: BigInt::from_biguint(sign, mag),
            exp,
            digits,
        }
    }

    /// Round an exact `mant * 2^exp` to `digits`.
    fn round_exact(mant: BigInt, exp: i64, digits: u32) -> Self {
        let (sign, mag) = mant.into_parts();
        BigNum::from_parts(sign, mag, exp, digits)
    }

    pub fn zero(digits: u32) -> Self {
        BigNum {
            mant: BigInt::zero(),
            exp: 0,
            digits: digits.max(1),
        }
    }

    pub fn one(digits: u32) -> Self {
        BigNum::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        BigNum::from_bigint(&BigInt::from(v), digits)
    }

    pub fn from_bigint(v: &BigInt, digits: u32) -> Self {
        BigNum::round_exact(v.clone(), 0, digits.max(1))
    }

    /// Correctly rounded quotient `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, digits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let digits = digits.max(1);
        if num.is_zero() {
            return BigNum::zero(digits);
        }
        let sign = if num.sign() == den.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        quotient(sign, num.magnitude(), 0, den.magnitude(), 0, digits)
    }

    pub fn from_rational(r: &BigRational, digits: u32) -> Self {
        BigNum::from_ratio(r.numer(), r.denom(), digits)
    }

    /// Parse a decimal literal (`-1.25`, `3e-4`, `2.5e+01`), correctly rounded.
    pub fn parse(s: &str, digits: u32) -> Option<Self> {
        parse_decimal(s).map(|r| BigNum::from_rational(&r, digits))
    }

    /// Exact rational value of this number.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(
                self.mant.clone(),
                BigInt::one() << self.exp.unsigned_abs(),
            )
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Same value re-rounded (or zero-padded) to `digits`.
    pub fn with_digits(&self, digits: u32) -> Self {
        BigNum::round_exact(self.mant.clone(), self.exp, digits.max(1))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        BigNum {
            mant: self.mant.abs(),
            exp: self.exp,
            digits: self.digits,
        }
    }

    /// floor(log2 |x|) + 1; the position just above the leading bit.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn add_impl(&self, rhs: &BigNum, negate_rhs: bool) -> BigNum {
        let digits = self.digits.max(rhs.digits);
        let rhs_mant = if negate_rhs {
            -&rhs.mant
        } else {
            rhs.mant.clone()
        };
        if self.is_zero() {
            return BigNum::round_exact(rhs_mant, rhs.exp, digits);
        }
        if rhs.is_zero() {
            return BigNum::round_exact(self.mant.clone(), self.exp, digits);
        }
        let bits = bits_for_digits(digits) as i64;
        let (hi, hi_mant, lo, lo_mant) = if self.top() >= rhs.top() {
            (self, self.mant.clone(), rhs, rhs_mant)
        } else {
            (rhs, rhs_mant, self, self.mant.clone())
        };
        // Common exponent: three bits below the result's rounding position at
        // most, so that a truncated low operand can be summarized by a sticky bit.
        let e = hi.exp.min(lo.exp).max(hi.top() - bits - 3);
        let h = hi_mant << (hi.exp - e) as u64;
        let (l, inexact) = if lo.exp >= e {
            (lo_mant << (lo.exp - e) as u64, false)
        } else {
            let shift = (e - lo.exp) as u64;
            let inexact = lo
                .mant
                .magnitude()
                .trailing_zeros()
                .map_or(false, |tz| tz < shift);
            (lo_mant >> shift, inexact)
        };
        let mut s = h + l;
        let mut e = e;
        if inexact {
            // floor shift: true sum lies strictly inside (s, s + 1)
            s = (s << 1u32) + 1;
            e -= 1;
        }
        BigNum::round_exact(s, e, digits)
    }

    pub fn sqrt(&self) -> Result<BigNum> {
        if self.is_negative() {
            return Err(QuadError::precision("square root of a negative value"));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let bits = bits_for_digits(self.digits);
        let mag = self.mant.magnitude();
        let need = 2 * (bits + 3);
        let mut shift = need.saturating_sub(mag.bits());
        if (self.exp - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled: BigUint = mag << shift;
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let e = (self.exp - shift as i64) / 2;
        let (mag, e) = if exact {
            (root, e)
        } else {
            ((root << 1u32) + 1u32, e - 1)
        };
        Ok(BigNum::from_parts(Sign::Plus, mag, e, self.digits))
    }

    pub fn powi(&self, n: u32) -> BigNum {
        let mut result = BigNum::one(self.digits);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn recip(&self) -> BigNum {
        &BigNum::one(self.digits) / self
    }

    /// Approximate log10 |x|; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.mant.magnitude();
        let len = mag.bits();
        let keep = len.min(60);
        let lead = (mag >> (len - keep)).to_u64().unwrap_or(u64::MAX) as f64;
        (lead.log2() + (self.exp + (len - keep) as i64) as f64) * std::f64::consts::LOG10_2
    }

    /// Nearest `f64`, saturating at the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let l = self.log10_abs();
        if l > 308.0 {
            return self.signum() as f64 * f64::INFINITY;
        }
        if l < -320.0 {
            return 0.0;
        }
        let len = self.mant.bits();
        let keep = len.min(60);
        let lead = (self.mant.magnitude() >> (len - keep)).to_u64().unwrap() as f64;
        let e = self.exp + (len - keep) as i64;
        self.signum() as f64 * lead * 2f64.powi(e as i32)
    }

    /// Exact decimal rendering with `sig` significant digits, ties to even,
    /// as `d.ddd…e±XX`.
    pub fn to_sci_string(&self, sig: u32) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return format_sci(false, &"0".repeat(sig as usize), 0);
        }
        let mut k = self.log10_abs().floor() as i64;
        let lower = pow10(sig - 1);
        let upper = pow10(sig);
        loop {
            let q = self.scaled_decimal(sig as i64 - 1 - k);
            if q >= upper {
                k += 1;
            } else if q < lower {
                k -= 1;
            } else {
                return format_sci(self.is_negative(), &q.to_string(), k);
            }
        }
    }

    // round_half_even(|x| * 10^p)
    fn scaled_decimal(&self, p: i64) -> BigUint {
        let mut num = self.mant.magnitude().clone();
        let mut den = BigUint::one();
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= self.exp.unsigned_abs();
        }
        if p >= 0 {
            num *= pow10(p as u32);
        } else {
            den *= pow10(p.unsigned_abs() as u32);
        }
        let (q, r) = num.div_rem(&den);
        let twice: BigUint = r << 1u32;
        match twice.cmp(&den) {
            Ordering::Greater => q + 1u32,
            Ordering::Equal if q.bit(0) => q + 1u32,
            _ => q,
        }
    }
}

fn format_sci(neg: bool, digits: &str, exp10: i64) -> String {
    let mut out = String::with_capacity(digits.len() + 8);
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push('e');
    out.push(if exp10 < 0 { '-' } else { '+' });
    out.push_str(&format!("{:02}", exp10.unsigned_abs()));
    out
}

/// Correctly rounded `±(a*2^ea) / (b*2^eb)`.
fn quotient(sign: Sign, a: &BigUint, ea: i64, b: &BigUint, eb: i64, digits: u32) -> BigNum {
    let bits = bits_for_digits(digits);
    let shift = (bits + 3 + b.bits()).saturating_sub(a.bits());
    let (q, r) = (a << shift).div_rem(b);
    let e = ea - eb - shift as i64;
    let (mag, e) = if r.is_zero() {
        (q, e)
    } else {
        ((q << 1u32) + 1u32, e - 1)
    };
    BigNum::from_parts(sign, mag, e, digits)
}

/// Exact rational value of a decimal literal.
pub(crate) fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let mut n: BigInt = all.parse().ok()?;
    if neg {
        n = -n;
    }
    let e10 = exp - frac_part.len() as i64;
    if e10.unsigned_abs() > 100_000 {
        return None;
    }
    let p = BigInt::from(pow10(e10.unsigned_abs() as u32));
    Some(if e10 >= 0 {
        BigRational::from_integer(n * p)
    } else {
        BigRational::new(n, p)
    })
}

impl fmt::Debug for BigNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigNum({}, {}d)", self.to_sci_string(self.digits.min(40)), self.digits)
    }
}

impl fmt::Display for BigNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(f.precision().map_or(self.digits, |p| p as u32)))
    }
}

impl PartialEq for BigNum {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigNum {}

impl PartialOrd for BigNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigNum {
    fn cmp(&self, other: &Self) -> Ordering {
        // the sign of a correctly rounded difference is exact
        (self - other).signum().cmp(&0)
    }
}

impl Neg for &BigNum {
    type Output = BigNum;
    fn neg(self) -> BigNum {
        BigNum {
            mant: -&self.mant,
            exp: self.exp,
            digits: self.digits,
        }
    }
}

impl Neg for BigNum {
    type Output = BigNum;
    fn neg(self) -> BigNum {
        -&self
    }
}

impl Add<&BigNum> for &BigNum {
    type Output = BigNum;
    fn add(self, rhs: &BigNum) -> BigNum {
        self.add_impl(rhs, false)
    }
}

impl Sub<&BigNum> for &BigNum {
    type Output = BigNum;
    fn sub(self, rhs: &BigNum) -> BigNum {
        self.add_impl(rhs, true)
    }
}

impl Mul<&BigNum> for &BigNum {
    type Output = BigNum;
    fn mul(self, rhs: &BigNum) -> BigNum {
        let digits = self.digits.max(rhs.digits);
        BigNum::round_exact(&self.mant * &rhs.mant, self.exp + rhs.exp, digits)
    }
}

impl Div<&BigNum> for &BigNum {
    type Output = BigNum;
    fn div(self, rhs: &BigNum) -> BigNum {
        assert!(!rhs.is_zero(), "BigNum division by zero");
        let digits = self.digits.max(rhs.digits);
        if self.is_zero() {
            return BigNum::zero(digits);
        }
        let sign = if self.mant.sign() == rhs.mant.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        quotient(
            sign,
            self.mant.magnitude(),
            self.exp,
            rhs.mant.magnitude(),
            rhs.exp,
            digits,
        )
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BigNum> for BigNum {
            type Output = BigNum;
            fn $m(self, rhs: BigNum) -> BigNum { (&self).$m(&rhs) }
        }
        impl $tr<&BigNum> for BigNum {
            type Output = BigNum;
            fn $m(self, rhs: &BigNum) -> BigNum { (&self).$m(rhs) }
        }
        impl $tr<BigNum> for &BigNum {
            type Output = BigNum;
            fn $m(self, rhs: BigNum) -> BigNum { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);
