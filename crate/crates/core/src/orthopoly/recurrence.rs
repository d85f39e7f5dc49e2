//! Stieltjes construction of the monic orthogonal family from moments:
//! p₋₁ = 0, p₀ = 1, p_{n+1} = (x − a_n) p_n − b_n p_{n−1}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::polynomial::MonicPolynomial;
use crate::error::{QuadError, Result};
use crate::moments::{Kernel, MomentSequence};
use crate::numerics::{BigNum, ExactDivisor, Rational, Scalar};

/// Recurrence coefficients a₀..a_N, b₀..b_N and squared norms h₀..h_{N+1}.
#[derive(Debug, Clone)]
pub struct RecurrenceTable<S> {
    kernel: Kernel,
    a: Vec<S>,
    b: Vec<S>,
    norms: Vec<S>,
}

impl<S: Scalar> RecurrenceTable<S> {
    /// Run the recurrence from `moments` up to degree `n + 1`.
    ///
    /// Inner products use orthogonality against lower degrees:
    /// ⟨p_k, p_k⟩ = ⟨p_k, x^k⟩ and ⟨x p_k, p_k⟩ = ⟨p_k, x^{k+1}⟩ + c_{k−1} ⟨p_k, x^k⟩,
    /// where c_{k−1} is the subleading coefficient of p_k.
    pub fn from_moments(moments: &MomentSequence<S>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QuadError::contract("recurrence needs N >= 1"));
        }
        let kernel = moments.kernel();
        let symmetric = kernel.is_symmetric();
        let needed = 2 * n + 2;
        if moments.max_index() < needed {
            return Err(QuadError::contract(format!(
                "recurrence to N = {n} needs moment {needed}, sequence stops at {}",
                moments.max_index()
            )));
        }
        let mu = moments.values();
        let zero = mu[0].zero_like();

        // ⟨p, x^shift⟩
        let moment_dot = |p: &[S], shift: usize| -> S {
            let mut acc = zero.clone();
            for (j, c) in p.iter().enumerate() {
                if symmetric && (j + shift) % 2 == 1 {
                    continue;
                }
                if !c.is_zero() {
                    acc = acc.add(&c.mul(&mu[j + shift]));
                }
            }
            acc
        };

        let mut a = Vec::with_capacity(n + 1);
        let mut b = Vec::with_capacity(n + 1);
        let mut norms: Vec<S> = Vec::with_capacity(n + 2);
        let mut prev: Vec<S> = Vec::new();
        let mut cur: Vec<S> = vec![zero.one_like()];

        for k in 0..=n + 1 {
            let h = moment_dot(&cur, k);
            if h.signum() <= 0 {
                return Err(QuadError::precision(format!(
                    "squared norm of p_{k} is not positive"
                )));
            }
            norms.push(h);
            if k == n + 1 {
                break;
            }
            let h = &norms[k];
            let ak = if symmetric {
                zero.clone()
            } else {
                let mut g = moment_dot(&cur, k + 1);
                if k >= 1 {
                    g = g.add(&cur[k - 1].mul(h));
                }
                g.div(h)
            };
            let bk = if k == 0 {
                zero.clone()
            } else {
                let bk = h.div(&norms[k - 1]);
                if bk.signum() <= 0 {
                    return Err(QuadError::precision(format!("b_{k} is not positive")));
                }
                bk
            };
            let next = step(&cur, &prev, &ak, &bk, symmetric);
            a.push(ak);
            b.push(bk);
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(RecurrenceTable { kernel, a, b, norms })
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    /// Largest N for which a_N and b_N are available.
    pub fn max_degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self) -> &[S] {
        &self.a
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    /// ⟨p_n, p_n⟩ for n = 0..=N+1.
    pub fn norms(&self) -> &[S] {
        &self.norms
    }

    /// Monic p_n for n ≤ N + 1.
    pub fn polynomial(&self, n: usize) -> Result<MonicPolynomial<S>> {
        if n > self.max_degree() + 1 {
            return Err(QuadError::contract(format!(
                "p_{n} requested from a table that reaches p_{}",
                self.max_degree() + 1
            )));
        }
        let symmetric = self.kernel.is_symmetric();
        let mut prev: Vec<S> = Vec::new();
        let mut cur: Vec<S> = vec![self.norms[0].one_like()];
        for k in 0..n {
            let next = step(&cur, &prev, &self.a[k], &self.b[k], symmetric);
            prev = std::mem::replace(&mut cur, next);
        }
        MonicPolynomial::new(cur)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RecurrenceTable<T> {
        RecurrenceTable {
            kernel: self.kernel,
            a: self.a.iter().map(&f).collect(),
            b: self.b.iter().map(&f).collect(),
            norms: self.norms.iter().map(&f).collect(),
        }
    }

    /// Same coefficients rounded to `digits`.
    pub fn to_bignum(&self, digits: u32) -> RecurrenceTable<BigNum> {
        self.map(|v| v.to_bignum(digits))
    }

    /// Leading part of the table, up to degree `n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.max_degree() {
            return Err(QuadError::contract(format!(
                "cannot truncate a degree-{} table to {n}",
                self.max_degree()
            )));
        }
        Ok(RecurrenceTable {
            kernel: self.kernel,
            a: self.a[..=n].to_vec(),
            b: self.b[..=n].to_vec(),
            norms: self.norms[..=n + 1].to_vec(),
        })
    }
}

/// (x − a) p − b q, with the a-term skipped for symmetric families.
fn step<S: Scalar>(p: &[S], q: &[S], a: &S, b: &S, symmetric: bool) -> Vec<S> {
    let zero = p[0].zero_like();
    let mut out = vec![zero; p.len() + 1];
    for (j, c) in p.iter().enumerate() {
        out[j + 1] = c.clone();
    }
    if !symmetric && !a.is_zero() {
        for (j, c) in p.iter().enumerate() {
            out[j] = out[j].sub(&a.mul(c));
        }
    }
    if !b.is_zero() {
        for (j, c) in q.iter().enumerate() {
            if !c.is_zero() {
                out[j] = out[j].sub(&b.mul(c));
            }
        }
    }
    out
}

impl RecurrenceTable<Rational> {
    /// Exact table for (−log x)^m.
    pub fn exact(kernel: Kernel, n: usize) -> Result<Self> {
        match kernel {
            Kernel::LogPower(m) => {
                let moments = MomentSequence::log_exact(m, 2 * n + 2)?;
                RecurrenceTable::from_rational_moments(&moments, n)
            }
            Kernel::Cosine => Err(QuadError::contract(
                "exact rational arithmetic is only available for logarithmic kernels",
            )),
        }
    }
}

impl RecurrenceTable<Rational> {
    /// Same table as [`RecurrenceTable::from_moments`], computed fraction-free.
    ///
    /// With integer moments M_k = L·μ_k and Hankel determinants Δ_k, the
    /// scaled polynomials q_k = Δ_k p_k have integer coefficients and
    /// Δ_{k+1} = ⟨q_k, x^k⟩. Each step divides exactly by Δ_k², so no gcd is
    /// ever taken; large results are stored unreduced.
    pub fn from_rational_moments(moments: &MomentSequence<Rational>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QuadError::contract("recurrence needs N >= 1"));
        }
        let needed = 2 * n + 2;
        if moments.max_index() < needed {
            return Err(QuadError::contract(format!(
                "recurrence to N = {n} needs moment {needed}, sequence stops at {}",
                moments.max_index()
            )));
        }
        let kernel = moments.kernel();
        let symmetric = kernel.is_symmetric();
        let values = &moments.values()[..=needed];
        let scale = values.iter().fold(BigInt::one(), |acc, m| lcm(&acc, m.denom()));
        let big: Vec<BigInt> = values
            .iter()
            .map(|m| m.numer() * (&scale / m.denom()))
            .collect();

        let dot = |q: &[BigInt], shift: usize| -> BigInt {
            let mut acc = BigInt::zero();
            for (j, c) in q.iter().enumerate() {
                if !(symmetric && (j + shift) % 2 == 1) && !Zero::is_zero(c) {
                    acc += c * &big[j + shift];
                }
            }
            acc
        };

        let mut a = Vec::with_capacity(n + 1);
        let mut b = Vec::with_capacity(n + 1);
        let mut norms = Vec::with_capacity(n + 2);
        let mut delta_prev = BigInt::one();
        let mut delta = BigInt::one();
        let mut q_prev: Vec<BigInt> = Vec::new();
        let mut q = vec![BigInt::one()];
        for k in 0..=n + 1 {
            let delta_next = dot(&q, k);
            if !delta_next.is_positive() {
                return Err(QuadError::precision(format!("squared norm of p_{k} is not positive")));
            }
            norms.push(fraction(delta_next.clone(), &delta * &scale));
            if k == n + 1 {
                break;
            }
            // A = Δ_k Δ_{k+1} a_k
            let big_a = if symmetric {
                BigInt::zero()
            } else {
                let mut s = &delta * dot(&q, k + 1);
                if k >= 1 {
                    s += &q[k - 1] * &delta_next;
                }
                s
            };
            a.push(fraction(big_a.clone(), &delta * &delta_next));
            b.push(if k == 0 {
                Rational::zero()
            } else {
                fraction(&delta_next * &delta_prev, &delta * &delta)
            });

            // Δ_k² q_{k+1} = Δ_k Δ_{k+1} x q_k − A q_k − Δ_{k+1}² q_{k−1}
            let lead = &delta * &delta_next;
            let tail = &delta_next * &delta_next;
            let mut raw = vec![BigInt::zero(); q.len() + 1];
            for (j, c) in q.iter().enumerate() {
                raw[j + 1] += c * &lead;
                if !Zero::is_zero(&big_a) {
                    raw[j] -= c * &big_a;
                }
            }
            for (j, c) in q_prev.iter().enumerate() {
                raw[j] -= c * &tail;
            }
            let divisor = &delta * &delta;
            let widest = raw.iter().map(|c| c.bits()).max().unwrap_or(0);
            let exact = ExactDivisor::new(&divisor, (widest + 1).saturating_sub(divisor.bits()) + 1);
            let next: Vec<BigInt> = raw.iter().map(|c| exact.divide(c)).collect();
            debug_assert_eq!(next.last(), Some(&delta_next));

            q_prev = std::mem::replace(&mut q, next);
            delta_prev = std::mem::replace(&mut delta, delta_next);
        }
        Ok(RecurrenceTable { kernel, a, b, norms })
    }
}

/// num/den, reduced only while cheap; den > 0.
fn fraction(num: BigInt, den: BigInt) -> Rational {
    const REDUCE_BELOW_BITS: u64 = 4096;
    if den.bits() < REDUCE_BELOW_BITS {
        Rational::new(num, den)
    } else {
        Rational::new_raw(num, den)
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    match b.to_u64() {
        Some(small) => {
            let g = (a % small).to_u64().unwrap_or(0).gcd(&small);
            a * (small / g)
        }
        None => a.lcm(b),
    }
}

/// Digits the moment-based construction loses by degree `n` for the cosine
/// kernel: measured at about 0.72 n, provisioned as ⌈3n/4⌉ + 10.
pub fn moment_guard_digits(n: usize) -> u32 {
    (3 * n as u32).div_ceil(4) + 10
}

impl RecurrenceTable<BigNum> {
    /// Table at `digits`: logarithmic kernels are built exactly and rounded,
    /// the cosine kernel from moments carrying [`moment_guard_digits`] extra.
    pub fn at_precision(kernel: Kernel, n: usize, digits: u32) -> Result<Self> {
        match kernel {
            Kernel::LogPower(_) => Ok(RecurrenceTable::exact(kernel, n)?.to_bignum(digits)),
            Kernel::Cosine => {
                let wide = digits + moment_guard_digits(n);
                let moments = MomentSequence::cosine(2 * n + 2, wide)?;
                let t = RecurrenceTable::from_moments(&moments, n)?;
                Ok(t.map(|v| v.with_digits(digits)))
            }
        }
    }

    /// p_n(x) and p_n'(x) by running the recurrence at `x`.
    pub fn eval_with_derivative(&self, n: usize, x: &BigNum) -> (BigNum, BigNum) {
        let symmetric = self.kernel.is_symmetric();
        let digits = x.digits();
        let mut p_prev = BigNum::zero(digits);
        let mut p = BigNum::one(digits);
        let mut d_prev = BigNum::zero(digits);
        let mut d = BigNum::zero(digits);
        for k in 0..n {
            let shifted = if symmetric { x.clone() } else { x - &self.a[k] };
            let (p_next, d_next) = if k == 0 {
                (shifted.clone(), BigNum::one(digits))
            } else {
                let bk = &self.b[k];
                (
                    &(&shifted * &p) - &(bk * &p_prev),
                    &(&p + &(&shifted * &d)) - &(bk * &d_prev),
                )
            };
            p_prev = std::mem::replace(&mut p, p_next);
            d_prev = std::mem::replace(&mut d, d_next);
        }
        (p, d)
    }

    /// p_n(x) by the recurrence.
    pub fn eval(&self, n: usize, x: &BigNum) -> BigNum {
        let symmetric = self.kernel.is_symmetric();
        let digits = x.digits();
        let mut p_prev = BigNum::zero(digits);
        let mut p = BigNum::one(digits);
        for k in 0..n {
            let shifted = if symmetric { x.clone() } else { x - &self.a[k] };
            let next = if k == 0 {
                shifted
            } else {
                &(&shifted * &p) - &(&self.b[k] * &p_prev)
            };
            p_prev = std::mem::replace(&mut p, next);
        }
        p
    }
}

/// p_{1,m} = x − 2^{−1−m} and the closed form of p_{2,m}.
pub fn generic_low_degree(m: u32) -> Result<(MonicPolynomial<Rational>, MonicPolynomial<Rational>)> {
    if m == 0 {
        return Err(QuadError::contract("m must be positive"));
    }
    let pow = |base: i64, e: u32| Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(base), e as usize));
    let e = m + 1;
    let (two, three, four) = (pow(2, e), pow(3, e), pow(4, e));
    let one = Rational::from_integer(1.into());
    let inv_two = &one / &two;
    let inv_three = &one / &three;
    let p1 = MonicPolynomial::new(vec![-inv_two.clone(), one.clone()])?;
    let den = &three - &four;
    let lin = (&three - &two) / &den;
    let constant = (&(&four * &inv_three) - &(&three * &inv_two)) / &den;
    let p2 = MonicPolynomial::new(vec![constant, lin, one])?;
    Ok((p1, p2))
}
