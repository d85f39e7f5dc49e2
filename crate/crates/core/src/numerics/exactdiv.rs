//! Division known in advance to leave no remainder, via a 2-adic inverse.
//!
//! For d = 2^t·d' with d' odd, a / d = (a >> t) · d'^{-1} mod 2^b whenever the
//! quotient fits in b bits. One Newton-iterated inverse serves every dividend,
//! and each quotient then costs one truncated product instead of a long division.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct ExactDivisor {
    divisor: BigInt,
    shift: u64,
    inverse: BigUint,
    bits: u64,
    mask: BigUint,
}

impl ExactDivisor {
    /// Divisor for quotients of at most `quotient_bits` bits. Panics on zero.
    pub fn new(divisor: &BigInt, quotient_bits: u64) -> Self {
        assert!(!divisor.is_zero(), "exact division by zero");
        let mag = divisor.magnitude();
        let shift = mag.trailing_zeros().unwrap_or(0);
        let odd = mag >> shift;
        let bits = quotient_bits.max(1) + 1;
        let mask = (BigUint::one() << bits) - 1u32;
        // Newton: x ← x(2 − d x), doubling correct low bits each round.
        let mut inverse = BigUint::one();
        let mut correct = 1u64;
        while correct < bits {
            correct = (2 * correct).min(bits);
            let modulus_mask = (BigUint::one() << correct) - 1u32;
            let dx = (&odd * &inverse) & &modulus_mask;
            let two_minus = ((&modulus_mask + 3u32) - dx) & &modulus_mask;
            inverse = (&inverse * two_minus) & modulus_mask;
        }
        ExactDivisor {
            divisor: divisor.clone(),
            shift,
            inverse,
            bits,
            mask,
        }
    }

    pub fn divisor(&self) -> &BigInt {
        &self.divisor
    }

    /// a / d, assuming d divides a and the quotient fits the promised width.
    pub fn divide(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            return BigInt::zero();
        }
        let low = (a.magnitude() >> self.shift) & &self.mask;
        let q = (low * &self.inverse) & &self.mask;
        debug_assert!(q.bits() < self.bits, "quotient exceeds promised width");
        let sign = if a.sign() == self.divisor.sign() { Sign::Plus } else { Sign::Minus };
        BigInt::from_biguint(sign, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        let d = ExactDivisor::new(&BigInt::from(12), 8);
        assert_eq!(d.divide(&BigInt::from(144)), BigInt::from(12));
        assert_eq!(d.divide(&BigInt::from(-36)), BigInt::from(-3));
        let d = ExactDivisor::new(&BigInt::from(-7), 8);
        assert_eq!(d.divide(&BigInt::from(49)), BigInt::from(-7));
        assert_eq!(d.divide(&BigInt::zero()), BigInt::zero());
    }

    proptest! {
        #[test]
        fn matches_long_division(
            q in proptest::collection::vec(any::<u64>(), 1..40),
            d in proptest::collection::vec(any::<u64>(), 1..40),
            neg_q in any::<bool>(),
            neg_d in any::<bool>(),
        ) {
            let mut q = BigInt::from(BigUint::new(q.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect()));
            let mut d = BigInt::from(BigUint::new(d.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect()));
            prop_assume!(!d.is_zero());
            if neg_q { q = -q; }
            if neg_d { d = -d; }
            let a = &q * &d;
            let div = ExactDivisor::new(&d, q.bits());
            prop_assert_eq!(div.divide(&a), q);
        }
    }
}
