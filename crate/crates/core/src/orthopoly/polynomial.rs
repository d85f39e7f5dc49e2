use std::ops::Deref;

use crate::error::{QuadError, Result};
use crate::moments::MomentSequence;
use crate::numerics::{BigNum, Scalar};

/// Dense polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    /// Trailing zero coefficients are kept; `degree` is `len - 1`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(QuadError::contract("polynomial needs at least one coefficient"));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &S) -> S {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial<S> {
        if self.coeffs.len() == 1 {
            return Polynomial {
                coeffs: vec![self.coeffs[0].zero_like()],
            };
        }
        let one = self.coeffs[0].one_like();
        let mut k = one.clone();
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for c in &self.coeffs[1..] {
            out.push(c.mul(&k));
            k = k.add(&one);
        }
        Polynomial { coeffs: out }
    }

    /// Coefficient sequence of `self * other`.
    pub fn product(&self, other: &Polynomial<S>) -> Polynomial<S> {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Polynomial { coeffs: out }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Polynomial whose leading coefficient is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial<S>(Polynomial<S>);

impl<S: Scalar> MonicPolynomial<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        let p = Polynomial::new(coeffs)?;
        let lead = p.leading();
        if !lead.sub(&lead.one_like()).is_zero() {
            return Err(QuadError::contract("leading coefficient is not 1"));
        }
        Ok(MonicPolynomial(p))
    }

    pub fn one(like: &S) -> Self {
        MonicPolynomial(Polynomial {
            coeffs: vec![like.one_like()],
        })
    }

    pub fn into_inner(self) -> Polynomial<S> {
        self.0
    }

    pub fn to_bignum(&self, digits: u32) -> MonicPolynomial<BigNum> {
        MonicPolynomial(self.0.map(|c| c.to_bignum(digits)))
    }
}

impl<S> Deref for MonicPolynomial<S> {
    type Target = Polynomial<S>;
    fn deref(&self) -> &Polynomial<S> {
        &self.0
    }
}

/// p / √⟨p, p⟩.
#[derive(Debug, Clone)]
pub struct NormalizedPolynomial {
    base: MonicPolynomial<BigNum>,
    inverse_norm: BigNum,
}

impl NormalizedPolynomial {
    pub fn base(&self) -> &MonicPolynomial<BigNum> {
        &self.base
    }

    pub fn inverse_norm(&self) -> &BigNum {
        &self.inverse_norm
    }

    /// Leading coefficient of the normalized polynomial.
    pub fn leading(&self) -> &BigNum {
        &self.inverse_norm
    }

    pub fn evaluate(&self, x: &BigNum) -> BigNum {
        &self.inverse_norm * &self.base.evaluate(x)
    }

    pub fn derivative(&self) -> Polynomial<BigNum> {
        self.base.derivative().map(|c| c * &self.inverse_norm)
    }

    pub fn coeffs(&self) -> Vec<BigNum> {
        self.base.coeffs().iter().map(|c| c * &self.inverse_norm).collect()
    }
}

/// Wrap `p` with `1/√norm_squared` at `digits`.
pub fn normalize<S: Scalar>(
    p: &MonicPolynomial<S>,
    norm_squared: &S,
    digits: u32,
) -> Result<NormalizedPolynomial> {
    if norm_squared.signum() <= 0 {
        return Err(QuadError::precision("non-positive squared norm"));
    }
    let root = norm_squared.to_bignum(digits).sqrt()?;
    Ok(NormalizedPolynomial {
        base: p.to_bignum(digits),
        inverse_norm: root.recip(),
    })
}

/// ⟨f, g⟩ = Σ_j c_j μ_j with c the coefficients of f·g.
pub fn inner_product<S: Scalar>(
    f: &Polynomial<S>,
    g: &Polynomial<S>,
    moments: &MomentSequence<S>,
) -> Result<S> {
    let needed = f.degree() + g.degree();
    if needed > moments.max_index() {
        return Err(QuadError::contract(format!(
            "inner product needs moment {needed}, sequence stops at {}",
            moments.max_index()
        )));
    }
    let prod = f.product(g);
    let mu = moments.values();
    let mut acc = mu[0].zero_like();
    for (c, m) in prod.coeffs().iter().zip(mu) {
        if !c.is_zero() && !m.is_zero() {
            acc = acc.add(&c.mul(m));
        }
    }
    Ok(acc)
}
