//! Dense univariate polynomials over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{EngineError, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// Univariate polynomial over Q, dense ascending coefficients.
/// Invariant: leading coefficient nonzero unless the polynomial is zero
/// (empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct UniPoly {
    pub coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = UniPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The monomial `c * s^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dlead = divisor.leading();
        let ddeg = divisor.degree();
        if rem.degree() < ddeg || rem.is_zero() {
            return (Self::zero(), rem);
        }
        let mut q = vec![Rat::zero(); rem.degree() - ddeg + 1];
        while !rem.is_zero() && rem.degree() >= ddeg {
            let k = rem.degree() - ddeg;
            let c = rem.leading() / &dlead;
            q[k] = c.clone();
            // rem -= c * s^k * divisor
            for (i, b) in divisor.coeffs.iter().enumerate() {
                let v = &c * b;
                rem.coeffs[i + k] -= v;
            }
            rem.trim();
        }
        (Self::from_coeffs(q), rem)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(EngineError::Other("inexact univariate division".into()))
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c / &l).collect(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitute `s -> g(s)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Primitive integer form: (content, integer coefficients) with content > 0
    /// and gcd of the integer coefficients 1. `self = content * primitive`.
    pub fn primitive_int(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), vec![]);
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * &den / c.denom())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = num_integer::gcd(g, v.clone());
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        // keep the sign of the leading coefficient in the primitive part
        let prim: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
        (Rat::new(g, den), prim)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if i == 0 {
                format!("{}", mag)
            } else {
                let pw = if i == 1 {
                    var.to_string()
                } else {
                    format!("{}^{}", var, i)
                };
                if mag.is_one() {
                    pw
                } else {
                    format!("{}*{}", mag, pw)
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{}", body)
                } else {
                    body
                });
            } else if c.is_negative() {
                parts.push(format!(" - {}", body));
            } else {
                parts.push(format!(" + {}", body));
            }
        }
        parts.concat()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("s"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_rem_roundtrip() {
        let p = UniPoly::from_i64(&[2, 0, -3, 1]); // s^3 - 3s^2 + 2
        let d = UniPoly::from_i64(&[-1, 1]); // s - 1
        let (q, r) = p.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), p);
        assert_eq!(r, UniPoly::zero()); // 1 is a root
    }

    #[test]
    fn gcd_common_factor() {
        let a = UniPoly::from_i64(&[-1, 0, 1]); // s^2-1
        let b = UniPoly::from_i64(&[1, 1]); // s+1
        assert_eq!(a.gcd(&b), b.monic());
    }

    #[test]
    fn compose_and_eval() {
        let p = UniPoly::from_i64(&[1, 2, 1]); // (s+1)^2
        let g = UniPoly::from_i64(&[-1, 1]); // s-1
        assert_eq!(p.compose(&g), UniPoly::from_i64(&[0, 0, 1]));
        assert_eq!(p.eval(&rat_int(3)), rat_int(16));
    }
}
