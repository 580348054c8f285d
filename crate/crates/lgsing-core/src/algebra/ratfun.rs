//! The field Q(lambda), represented as reduced fractions of integer-content
//! univariate polynomials. Denominators are normalized with positive leading
//! coefficient.

use num_traits::{One, Signed, Zero};
use std::fmt;

use super::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct RatFun {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFun {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "RatFun with zero denominator");
        let mut r = RatFun { num, den };
        r.reduce();
        r
    }

    pub fn zero() -> Self {
        RatFun {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun {
            num: UniPoly::one(),
            den: UniPoly::one(),
        }
    }

    pub fn from_rat(c: Rat) -> Self {
        RatFun {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFun {
            num: p,
            den: UniPoly::one(),
        }
    }

    /// lambda itself
    pub fn lambda() -> Self {
        RatFun {
            num: UniPoly::monomial(Rat::one(), 1),
            den: UniPoly::one(),
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = UniPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > 0 {
            self.num = self.num.div_exact(&g).expect("gcd divides num");
            self.den = self.den.div_exact(&g).expect("gcd divides den");
        }
        // normalize: denominator monic with content folded into numerator
        let dl = self.den.leading();
        if !dl.is_one() {
            self.num = self.num.scale(&(Rat::one() / &dl));
            self.den = self.den.scale(&(Rat::one() / &dl));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_constant() {
            if self.num.is_zero() {
                Some(Rat::zero())
            } else {
                Some(self.num.coeff(0) / self.den.coeff(0))
            }
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        Ok(Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Evaluate at a rational lambda; None if the denominator vanishes there.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.den.is_constant() && self.den.coeff(0).is_one() {
            return self.num.to_string_in(var);
        }
        let n = if self.num.is_constant() || self.num.coeffs.iter().filter(|c| !c.is_zero()).count() == 1 {
            self.num.to_string_in(var)
        } else {
            format!("({})", self.num.to_string_in(var))
        };
        let d = if self.den.is_constant() {
            self.den.to_string_in(var)
        } else {
            format!("({})", self.den.to_string_in(var))
        };
        format!("{}/{}", n, d)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("lambda"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::rat_int;

    #[test]
    fn arithmetic_and_reduction() {
        // (l^2 - 1)/(l - 1) reduces to l + 1
        let a = RatFun::new(UniPoly::from_i64(&[-1, 0, 1]), UniPoly::from_i64(&[-1, 1]));
        assert_eq!(a, RatFun::from_poly(UniPoly::from_i64(&[1, 1])));
        let b = RatFun::new(UniPoly::from_i64(&[1]), UniPoly::from_i64(&[1, 1]));
        let prod = a.mul(&b);
        assert!(prod.is_one());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RatFun::new(UniPoly::from_i64(&[3, 2]), UniPoly::from_i64(&[-5, 0, 7]));
        let i = a.inv().unwrap();
        assert!(a.mul(&i).is_one());
        assert_eq!(a.eval(&rat_int(1)), Some(rat_int(5) / rat_int(2)));
    }
}
