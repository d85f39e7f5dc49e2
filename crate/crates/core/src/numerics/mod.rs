//! Arithmetic substrate: exact rationals, binary multiprecision floats, π and
//! the precision-escalation controller.

mod bignum;
mod exactdiv;
mod pi;
mod precision;
mod rational;

pub use bignum::{bits_for_digits, BigNum};
pub use exactdiv::ExactDivisor;
pub use pi::pi_to_precision;
pub use precision::{
    stabilized, PrecisionPolicy, Rendered, Stabilized, DEFAULT_COSINE_DIGITS, DEFAULT_LOG_DIGITS,
    DEFAULT_MAX_DIGITS, DEFAULT_OUTPUT_DIGITS,
};
pub use rational::{
    factorial, falling_factorial, integer, log10_abs_estimate, pochhammer, ratio, Rational,
};

pub(crate) use bignum::parse_decimal;

use num_traits::{One, Signed, Zero};

/// Hard ceiling on any single precision request.
pub const MAX_SUPPORTED_DIGITS: u32 = 50_000;

/// Field operations shared by the exact and the floating scalar domains.
pub trait Scalar: Clone + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i32;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_bignum(&self, digits: u32) -> BigNum;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_bignum(&self, digits: u32) -> BigNum {
        BigNum::from_rational(self, digits)
    }
}

impl Scalar for BigNum {
    fn zero_like(&self) -> Self {
        BigNum::zero(self.digits())
    }
    fn one_like(&self) -> Self {
        BigNum::one(self.digits())
    }
    fn is_zero(&self) -> bool {
        BigNum::is_zero(self)
    }
    fn signum(&self) -> i32 {
        BigNum::signum(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_bignum(&self, digits: u32) -> BigNum {
        self.with_digits(digits)
    }
}
