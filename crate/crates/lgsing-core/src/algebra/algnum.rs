//! Algebraic numbers represented by monic irreducible minimal polynomials
//! over Q; used for sporadic critical values.

use std::fmt;

use super::factor::is_irreducible;
use super::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    /// monic irreducible over Q
    pub minpoly: UniPoly,
    /// optional conjugate label, only for display
    pub label: Option<String>,
}

impl AlgebraicNumber {
    pub fn new(minpoly: UniPoly) -> Result<Self> {
        let m = minpoly.monic();
        if m.degree() == 0 || m.is_zero() {
            return Err(EngineError::ZeroPolynomial("algebraic number".into()));
        }
        if !is_irreducible(&m)? {
            return Err(EngineError::ReducibleExtension(format!("{}", m)));
        }
        Ok(AlgebraicNumber {
            minpoly: m,
            label: None,
        })
    }

    pub fn from_rational(r: Rat) -> Self {
        AlgebraicNumber {
            minpoly: UniPoly::from_coeffs(vec![-r, Rat::from_integer(1.into())]),
            label: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.degree() == 1 {
            Some(-self.minpoly.coeff(0))
        } else {
            None
        }
    }

    /// Deterministic display: the minimal polynomial in `lambda`.
    pub fn minpoly_string(&self) -> String {
        // clear denominators for readability
        let (_, ints) = self.minpoly.primitive_int();
        let p = UniPoly::from_coeffs(
            ints.iter()
                .map(|v| Rat::from_integer(v.clone()))
                .collect(),
        );
        p.to_string_in("lambda")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            write!(f, "lambda = {}", r)
        } else {
            write!(f, "{} = 0", self.minpoly_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::rat_int;

    #[test]
    fn rational_and_irrational() {
        let a = AlgebraicNumber::from_rational(rat_int(1728));
        assert_eq!(a.as_rational(), Some(rat_int(1728)));
        let m = UniPoly::from_i64(&[-2, 0, 2, 1]);
        let b = AlgebraicNumber::new(m).unwrap();
        assert_eq!(b.degree(), 3);
        assert!(b.as_rational().is_none());
        let bad = UniPoly::from_i64(&[-1, 0, 0, 0, 1]);
        assert!(AlgebraicNumber::new(bad).is_err());
    }
}
