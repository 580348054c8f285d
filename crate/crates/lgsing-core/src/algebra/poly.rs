//! Sparse multivariate (Laurent) polynomials over a tower field.
//!
//! Terms live in a BTreeMap keyed by exponent vector, so iteration order is
//! deterministic and reports are byte-stable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::field::{BaseElem, FieldDescriptor, Scalar};
use super::monomial::Monomial;
use super::ratfun::RatFun;
use super::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

pub type VarSet = Arc<Vec<String>>;

pub fn vars(names: &[&str]) -> VarSet {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    pub field: FieldDescriptor,
    pub vars: VarSet,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(field: &FieldDescriptor, vars: &VarSet) -> Self {
        Polynomial {
            field: field.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &FieldDescriptor, vars: &VarSet) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn constant(field: &FieldDescriptor, vars: &VarSet, c: Scalar) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(vars.len()), c);
        }
        p
    }

    pub fn var(field: &FieldDescriptor, vars: &VarSet, i: usize) -> Self {
        let mut p = Self::zero(field, vars);
        p.terms.insert(Monomial::var(vars.len(), i), field.one());
        p
    }

    pub fn monomial(field: &FieldDescriptor, vars: &VarSet, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn is_laurent(&self) -> bool {
        !self.terms.keys().all(|m| m.is_polynomial())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::unit(self.vars.len()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn insert_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field && self.vars == o.vars);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.insert_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field && self.vars == o.vars);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.insert_term(m.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = c.neg();
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field && self.vars == o.vars);
        let mut r = Self::zero(&self.field, &self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.insert_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, &self.vars);
        }
        let mut r = Self::zero(&self.field, &self.vars);
        for (m, a) in &self.terms {
            r.insert_term(m.clone(), a.mul(c));
        }
        r
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, &self.vars);
        }
        let mut r = Self::zero(&self.field, &self.vars);
        for (m1, a) in &self.terms {
            r.insert_term(m1.mul(m), a.mul(c));
        }
        r
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, &self.vars);
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

    pub fn derivative(&self, var: usize) -> Self {
        let mut r = Self::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            r.insert_term(m2, c.mul(&self.field.from_int(e as i64)));
        }
        r
    }

    /// Substitute variable `var` by polynomial `g` (in the same context).
    pub fn substitute(&self, var: usize, g: &Self) -> Self {
        debug_assert!(self.field == g.field && self.vars == g.vars);
        let mut powers: Vec<Self> = vec![Self::one(&self.field, &self.vars)];
        let maxe = self
            .terms
            .keys()
            .map(|m| m.0[var])
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        for _ in 0..maxe {
            powers.push(powers.last().unwrap().mul(g));
        }
        let mut r = Self::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            assert!(e >= 0, "substitute on Laurent exponent");
            let mut m2 = m.clone();
            m2.0[var] = 0;
            let part = powers[e as usize].mul_term(&m2, c);
            r = r.add(&part);
        }
        r
    }

    /// Substitute a scalar for variable `var` (exponent must be >= 0).
    pub fn substitute_scalar(&self, var: usize, value: &Scalar) -> Self {
        let mut r = Self::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            assert!(e >= 0, "substitute_scalar on Laurent exponent");
            let mut m2 = m.clone();
            m2.0[var] = 0;
            r.insert_term(m2, c.mul(&value.pow(e as u64)));
        }
        r
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                assert!(e >= 0, "eval on Laurent exponent");
                if e > 0 {
                    v = v.mul(&point[i].pow(e as u64));
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Map this polynomial into a new variable context; `mapping[i]` is the
    /// index of old variable i in the new context.
    pub fn map_vars(&self, newvars: &VarSet, mapping: &[usize]) -> Self {
        let mut r = Self::zero(&self.field, newvars);
        for (m, c) in &self.terms {
            let mut e = vec![0i32; newvars.len()];
            for (i, &ex) in m.0.iter().enumerate() {
                e[mapping[i]] = ex;
            }
            r.insert_term(Monomial(e), c.clone());
        }
        r
    }

    pub fn promote(&self, field: &FieldDescriptor) -> Result<Self> {
        let mut r = Self::zero(field, &self.vars);
        for (m, c) in &self.terms {
            r.insert_term(m.clone(), c.promote(field)?);
        }
        Ok(r)
    }

    /// Homogenize to the given total degree using variable `hvar`.
    pub fn homogenize(&self, hvar: usize, degree: i64) -> Result<Self> {
        let mut r = Self::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            debug_assert_eq!(m.0[hvar], 0);
            let d = m.degree();
            if d > degree {
                return Err(EngineError::DegreeOverflow(format!(
                    "term degree {} exceeds target {}",
                    d, degree
                )));
            }
            let mut m2 = m.clone();
            m2.0[hvar] = (degree - d) as i32;
            r.insert_term(m2, c.clone());
        }
        Ok(r)
    }

    pub fn is_homogeneous(&self) -> Option<i64> {
        let mut d = None;
        for m in self.terms.keys() {
            match d {
                None => d = Some(m.degree()),
                Some(dd) if dd == m.degree() => {}
                _ => return None,
            }
        }
        d.or(Some(0))
    }

    /// Exact division by a single term; errors if any exponent would go
    /// negative (for polynomial contexts the caller checks).
    pub fn div_term(&self, m: &Monomial, c: &Scalar) -> Result<Self> {
        let ci = c.inv()?;
        let mut r = Self::zero(&self.field, &self.vars);
        for (m1, a) in &self.terms {
            let mut e = Vec::with_capacity(m1.0.len());
            for (x, y) in m1.0.iter().zip(&m.0) {
                e.push(x - y);
            }
            r.insert_term(Monomial(e), a.mul(&ci));
        }
        Ok(r)
    }

    /// Lowest exponent of variable `var` across all terms (0 for zero poly).
    pub fn min_exponent(&self, var: usize) -> i32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    pub fn max_exponent(&self, var: usize) -> i32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Drop all terms of total degree greater than `d` (used by the
    /// truncated local computations).
    pub fn truncate_degree(&self, d: i64) -> Self {
        let mut r = Self::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            if m.degree() <= d {
                r.terms.insert(m.clone(), c.clone());
            }
        }
        r
    }

    /// Minimal total degree among terms; None for the zero polynomial.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// Specialize lambda (the field-level transcendental) to a rational.
    pub fn specialize_lambda(&self, value: &Rat, target: &FieldDescriptor) -> Result<Self> {
        let mut r = Self::zero(target, &self.vars);
        for (m, c) in &self.terms {
            r.insert_term(m.clone(), c.specialize_lambda(value, target)?);
        }
        Ok(r)
    }

    /// Over Q only: divide by the gcd of all coefficients times sign of the
    /// leading one, producing integer-primitive content. Keeps Groebner
    /// intermediates small.
    pub fn rat_content_normalize(&self) -> Self {
        if self.is_zero() || self.field.has_extension() || self.field.has_lambda() {
            return self.clone();
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            if let BaseElem::Rat(r) = &c.repr[0] {
                num_gcd = num_integer::gcd(num_gcd, r.numer().clone());
                den_lcm = num_integer::lcm(den_lcm, r.denom().clone());
            }
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let mut factor = Rat::new(den_lcm, num_gcd);
        // make the (storage-order) leading coefficient positive
        if let Some((_, c)) = self.terms.iter().next_back() {
            if let BaseElem::Rat(r) = &c.repr[0] {
                if (r * &factor).is_negative() {
                    factor = -factor;
                }
            }
        }
        let f = self.field.from_rat(factor);
        self.mul_scalar(&f)
    }

    /// Content normalization for Q(lambda) coefficients: divides by a common
    /// rational-function factor so coefficients are polynomial in lambda with
    /// integer-primitive content, positive leading coefficient of the
    /// storage-leading term.
    pub fn lambda_content_normalize(&self) -> Self {
        if self.is_zero() || self.field.has_extension() || !self.field.has_lambda() {
            return self.clone();
        }
        let mut den_lcm = UniPoly::one();
        for c in self.terms.values() {
            if let BaseElem::Fun(f) = &c.repr[0] {
                let g = den_lcm.gcd(&f.den);
                den_lcm = den_lcm.mul(&f.den.div_exact(&g).expect("gcd divides"));
            }
        }
        let mut num_gcd = UniPoly::zero();
        for c in self.terms.values() {
            if let BaseElem::Fun(f) = &c.repr[0] {
                let scaled = f.num.mul(&den_lcm.div_exact(&f.den).expect("lcm divisible"));
                num_gcd = if num_gcd.is_zero() {
                    scaled
                } else {
                    num_gcd.gcd(&scaled)
                };
            }
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let factor = RatFun::new(den_lcm, num_gcd);
        let mut out = self.mul_scalar(&Scalar {
            field: self.field.clone(),
            repr: vec![BaseElem::Fun(factor)],
        });
        // integer content cleanup + sign
        let mut ngcd = num_bigint::BigInt::zero();
        let mut dlcm = num_bigint::BigInt::one();
        for c in out.terms.values() {
            if let BaseElem::Fun(f) = &c.repr[0] {
                for r in f.num.coeffs.iter() {
                    ngcd = num_integer::gcd(ngcd, r.numer().clone());
                    dlcm = num_integer::lcm(dlcm, r.denom().clone());
                }
            }
        }
        if !ngcd.is_zero() {
            let mut factor = Rat::new(dlcm, ngcd);
            if let Some((_, c)) = out.terms.iter().next_back() {
                if let BaseElem::Fun(f) = &c.repr[0] {
                    if (f.num.leading() * &factor).is_negative() {
                        factor = -factor;
                    }
                }
            }
            out = out.mul_scalar(&out.field.from_rat(factor));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::parse::format_polynomial(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qvars() -> (FieldDescriptor, VarSet) {
        (FieldDescriptor::rationals(), vars(&["x", "y", "z"]))
    }

    #[test]
    fn ring_ops() {
        let (q, vs) = qvars();
        let x = Polynomial::var(&q, &vs, 0);
        let y = Polynomial::var(&q, &vs, 1);
        let p = x.add(&y).pow(2);
        let expect = x
            .mul(&x)
            .add(&x.mul(&y).mul_scalar(&q.from_int(2)))
            .add(&y.mul(&y));
        assert_eq!(p, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_and_homogenize() {
        let (q, _) = qvars();
        let vs = vars(&["x", "y", "z", "t"]);
        let x = Polynomial::var(&q, &vs, 0);
        let y = Polynomial::var(&q, &vs, 1);
        let one = Polynomial::one(&q, &vs);
        // (x+1)^2 with x -> x+y
        let p = x.add(&one).pow(2);
        let s = p.substitute(0, &x.add(&y));
        assert_eq!(s, x.add(&y).add(&one).pow(2));
        let h = s.homogenize(3, 4).unwrap();
        assert_eq!(h.is_homogeneous(), Some(4));
    }

    #[test]
    fn laurent_degrees() {
        let (q, vs) = qvars();
        let mut p = Polynomial::zero(&q, &vs);
        p.terms.insert(Monomial(vec![-1, -1, -1]), q.one());
        p.terms.insert(Monomial(vec![1, 0, 0]), q.one());
        assert!(p.is_laurent());
        assert_eq!(p.min_exponent(0), -1);
        assert_eq!(p.max_exponent(0), 1);
    }
}
