use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn integer(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// n! / (n - k)!
pub fn falling_factorial(n: u32, k: u32) -> BigInt {
    assert!(k <= n);
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// Rising factorial (x)_k for a rational x.
pub fn pochhammer(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// log10 |r| from bit lengths, accurate to about one unit.
pub fn log10_abs_estimate(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let nb = r.numer().abs().bits() as f64;
    let db = r.denom().bits() as f64;
    (nb - db) * std::f64::consts::LOG10_2
}
