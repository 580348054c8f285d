//! Field towers Q ⊂ Q(alpha) and Q(lambda) ⊂ Q(lambda)(alpha), with a dynamic
//! scalar type used throughout the engine. Extension elements live in the
//! power basis of a monic irreducible minimal polynomial (degree <= 8).

use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

use super::factor::is_irreducible;
use super::ratfun::RatFun;
use super::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum BaseField {
    Q,
    QLambda,
}

/// An element of the base field (Q or Q(lambda)).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum BaseElem {
    Rat(Rat),
    Fun(RatFun),
}

impl BaseElem {
    pub fn zero(base: BaseField) -> Self {
        match base {
            BaseField::Q => BaseElem::Rat(Rat::zero()),
            BaseField::QLambda => BaseElem::Fun(RatFun::zero()),
        }
    }
    pub fn one(base: BaseField) -> Self {
        match base {
            BaseField::Q => BaseElem::Rat(Rat::one()),
            BaseField::QLambda => BaseElem::Fun(RatFun::one()),
        }
    }
    pub fn base(&self) -> BaseField {
        match self {
            BaseElem::Rat(_) => BaseField::Q,
            BaseElem::Fun(_) => BaseField::QLambda,
        }
    }
    pub fn is_zero(&self) -> bool {
        match self {
            BaseElem::Rat(r) => r.is_zero(),
            BaseElem::Fun(f) => f.is_zero(),
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (BaseElem::Rat(a), BaseElem::Rat(b)) => BaseElem::Rat(a + b),
            (BaseElem::Fun(a), BaseElem::Fun(b)) => BaseElem::Fun(a.add(b)),
            _ => panic!("mixed base fields"),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        match (self, o) {
            (BaseElem::Rat(a), BaseElem::Rat(b)) => BaseElem::Rat(a - b),
            (BaseElem::Fun(a), BaseElem::Fun(b)) => BaseElem::Fun(a.sub(b)),
            _ => panic!("mixed base fields"),
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (BaseElem::Rat(a), BaseElem::Rat(b)) => BaseElem::Rat(a * b),
            (BaseElem::Fun(a), BaseElem::Fun(b)) => BaseElem::Fun(a.mul(b)),
            _ => panic!("mixed base fields"),
        }
    }
    pub fn neg(&self) -> Self {
        match self {
            BaseElem::Rat(a) => BaseElem::Rat(-a.clone()),
            BaseElem::Fun(a) => BaseElem::Fun(a.neg()),
        }
    }
    pub fn inv(&self) -> Result<Self> {
        match self {
            BaseElem::Rat(a) => {
                if a.is_zero() {
                    Err(EngineError::DivisionByZero)
                } else {
                    Ok(BaseElem::Rat(Rat::one() / a))
                }
            }
            BaseElem::Fun(a) => Ok(BaseElem::Fun(a.inv()?)),
        }
    }
    fn promote(&self) -> Self {
        match self {
            BaseElem::Rat(a) => BaseElem::Fun(RatFun::from_rat(a.clone())),
            BaseElem::Fun(_) => self.clone(),
        }
    }
}

#[derive(PartialEq, Eq, Debug)]
struct FieldDef {
    base: BaseField,
    /// minimal polynomial of alpha, monic, ascending, without the leading 1:
    /// alpha^d = -(ext[0] + ext[1] alpha + ... + ext[d-1] alpha^{d-1})
    ext: Option<Vec<BaseElem>>,
}

/// Shared, immutable description of a tower field.
#[derive(Clone, Debug)]
pub struct FieldDescriptor(Arc<FieldDef>);

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for FieldDescriptor {}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor(Arc::new(FieldDef {
            base: BaseField::Q,
            ext: None,
        }))
    }

    pub fn rational_functions() -> Self {
        FieldDescriptor(Arc::new(FieldDef {
            base: BaseField::QLambda,
            ext: None,
        }))
    }

    /// Q(alpha) with alpha a root of the given monic irreducible polynomial
    /// over Q. Irreducibility is re-verified here.
    pub fn extension_of_q(minpoly: &UniPoly) -> Result<Self> {
        let m = minpoly.monic();
        if m.degree() < 1 || m.degree() > 8 {
            return Err(EngineError::UnsupportedField(format!(
                "extension degree {} out of range",
                m.degree()
            )));
        }
        if !is_irreducible(&m)? {
            return Err(EngineError::ReducibleExtension(format!("{}", m)));
        }
        let ext = m.coeffs[..m.degree()]
            .iter()
            .map(|c| BaseElem::Rat(c.clone()))
            .collect();
        Ok(FieldDescriptor(Arc::new(FieldDef {
            base: BaseField::Q,
            ext: Some(ext),
        })))
    }

    /// Q(lambda)(alpha) where the minimal polynomial has lambda-free
    /// coefficients (the only case the tower needs).
    pub fn extension_of_qlambda(minpoly: &UniPoly) -> Result<Self> {
        let m = minpoly.monic();
        if m.degree() < 1 || m.degree() > 8 {
            return Err(EngineError::UnsupportedField(format!(
                "extension degree {} out of range",
                m.degree()
            )));
        }
        if !is_irreducible(&m)? {
            return Err(EngineError::ReducibleExtension(format!("{}", m)));
        }
        let ext = m.coeffs[..m.degree()]
            .iter()
            .map(|c| BaseElem::Fun(RatFun::from_rat(c.clone())))
            .collect();
        Ok(FieldDescriptor(Arc::new(FieldDef {
            base: BaseField::QLambda,
            ext: Some(ext),
        })))
    }

    pub fn base(&self) -> BaseField {
        self.0.base
    }

    pub fn degree(&self) -> usize {
        self.0.ext.as_ref().map(|e| e.len()).unwrap_or(1)
    }

    pub fn has_extension(&self) -> bool {
        self.0.ext.is_some()
    }

    pub fn has_lambda(&self) -> bool {
        self.0.base == BaseField::QLambda
    }

    /// Minimal polynomial of alpha over Q, if the extension has rational
    /// coefficients.
    pub fn ext_minpoly_q(&self) -> Option<UniPoly> {
        let ext = self.0.ext.as_ref()?;
        let mut coeffs = Vec::with_capacity(ext.len() + 1);
        for e in ext {
            match e {
                BaseElem::Rat(r) => coeffs.push(r.clone()),
                BaseElem::Fun(f) => coeffs.push(f.as_rat()?),
            }
        }
        coeffs.push(Rat::one());
        Some(UniPoly::from_coeffs(coeffs))
    }

    pub fn zero(&self) -> Scalar {
        Scalar {
            field: self.clone(),
            repr: vec![BaseElem::zero(self.0.base); self.degree()],
        }
    }

    pub fn one(&self) -> Scalar {
        let mut s = self.zero();
        s.repr[0] = BaseElem::one(self.0.base);
        s
    }

    pub fn from_rat(&self, c: Rat) -> Scalar {
        let mut s = self.zero();
        s.repr[0] = match self.0.base {
            BaseField::Q => BaseElem::Rat(c),
            BaseField::QLambda => BaseElem::Fun(RatFun::from_rat(c)),
        };
        s
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rat(Rat::from_integer(n.into()))
    }

    /// The transcendental lambda; requires base Q(lambda).
    pub fn lambda(&self) -> Result<Scalar> {
        if self.0.base != BaseField::QLambda {
            return Err(EngineError::UnsupportedField(
                "lambda not in this field".into(),
            ));
        }
        let mut s = self.zero();
        s.repr[0] = BaseElem::Fun(RatFun::lambda());
        Ok(s)
    }

    /// The generator alpha; requires an extension.
    pub fn alpha(&self) -> Result<Scalar> {
        if !self.has_extension() || self.degree() < 2 {
            return Err(EngineError::UnsupportedField(
                "alpha not in this field".into(),
            ));
        }
        let mut s = self.zero();
        s.repr[1] = BaseElem::one(self.0.base);
        Ok(s)
    }

    fn ext(&self) -> Option<&Vec<BaseElem>> {
        self.0.ext.as_ref()
    }
}

/// An exact element of a tower field.
#[derive(Clone, Debug)]
pub struct Scalar {
    pub field: FieldDescriptor,
    /// power-basis coefficients; length = extension degree (1 if none)
    pub repr: Vec<BaseElem>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(self.field == other.field, "comparing scalars across fields");
        self.repr == other.repr
    }
}
impl Eq for Scalar {}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        self.repr.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.field == o.field, "scalar fields differ");
        Scalar {
            field: self.field.clone(),
            repr: self
                .repr
                .iter()
                .zip(&o.repr)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.field == o.field, "scalar fields differ");
        Scalar {
            field: self.field.clone(),
            repr: self
                .repr
                .iter()
                .zip(&o.repr)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Scalar {
            field: self.field.clone(),
            repr: self.repr.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert!(self.field == o.field, "scalar fields differ");
        let d = self.field.degree();
        if d == 1 {
            return Scalar {
                field: self.field.clone(),
                repr: vec![self.repr[0].mul(&o.repr[0])],
            };
        }
        let base = self.field.base();
        // schoolbook product then reduce by the minimal polynomial
        let mut prod = vec![BaseElem::zero(base); 2 * d - 1];
        for (i, a) in self.repr.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.repr.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        let ext = self.field.ext().unwrap();
        for k in (d..2 * d - 1).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = prod[k].clone();
            prod[k] = BaseElem::zero(base);
            // alpha^k = alpha^{k-d} * alpha^d = -alpha^{k-d} * sum ext[i] alpha^i
            for (i, e) in ext.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let v = c.mul(e);
                prod[k - d + i] = prod[k - d + i].sub(&v);
            }
        }
        prod.truncate(d);
        Scalar {
            field: self.field.clone(),
            repr: prod,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        let d = self.field.degree();
        if d == 1 {
            return Ok(Scalar {
                field: self.field.clone(),
                repr: vec![self.repr[0].inv()?],
            });
        }
        // extended Euclid in base[s] modulo the minimal polynomial
        let base = self.field.base();
        let ext = self.field.ext().unwrap();
        let mut m: Vec<BaseElem> = ext.clone();
        m.push(BaseElem::one(base)); // monic minimal polynomial
        let a: Vec<BaseElem> = self.repr.clone();
        let (g, s) = ext_gcd(&a, &m, base)?;
        // g must be a nonzero constant
        if g.len() != 1 || g[0].is_zero() {
            return Err(EngineError::UnsupportedField(
                "element not invertible: minimal polynomial not irreducible?".into(),
            ));
        }
        let ginv = g[0].inv()?;
        let mut repr: Vec<BaseElem> = s.iter().map(|c| c.mul(&ginv)).collect();
        repr.resize(d, BaseElem::zero(base));
        repr.truncate(d);
        Ok(Scalar {
            field: self.field.clone(),
            repr,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
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

    /// Embed into a larger tower field (Q -> Q(lambda), add extension, etc.).
    /// The extension minimal polynomial must match if both have one.
    pub fn promote(&self, target: &FieldDescriptor) -> Result<Self> {
        if self.field == *target {
            return Ok(self.clone());
        }
        // base promotion
        let base_ok = match (self.field.base(), target.base()) {
            (BaseField::Q, _) => true,
            (BaseField::QLambda, BaseField::QLambda) => true,
            (BaseField::QLambda, BaseField::Q) => false,
        };
        if !base_ok {
            return Err(EngineError::UnsupportedField(
                "cannot demote Q(lambda) scalar to Q".into(),
            ));
        }
        match (self.field.has_extension(), target.has_extension()) {
            (false, _) => {
                let mut repr = vec![BaseElem::zero(target.base()); target.degree()];
                repr[0] = match target.base() {
                    BaseField::Q => self.repr[0].clone(),
                    BaseField::QLambda => self.repr[0].promote(),
                };
                Ok(Scalar {
                    field: target.clone(),
                    repr,
                })
            }
            (true, true) => {
                if self.field.degree() != target.degree() {
                    return Err(EngineError::UnsupportedField(
                        "extension degree mismatch in promotion".into(),
                    ));
                }
                let repr = match target.base() {
                    BaseField::Q => self.repr.clone(),
                    BaseField::QLambda => self.repr.iter().map(|c| c.promote()).collect(),
                };
                Ok(Scalar {
                    field: target.clone(),
                    repr,
                })
            }
            (true, false) => Err(EngineError::UnsupportedField(
                "cannot drop field extension in promotion".into(),
            )),
        }
    }

    /// Specialize lambda to a rational value; errors if a denominator
    /// vanishes there. Result lives over Q (or Q(alpha)).
    pub fn specialize_lambda(&self, value: &Rat, target: &FieldDescriptor) -> Result<Self> {
        let repr: Result<Vec<BaseElem>> = self
            .repr
            .iter()
            .map(|c| match c {
                BaseElem::Rat(r) => Ok(BaseElem::Rat(r.clone())),
                BaseElem::Fun(f) => f
                    .eval(value)
                    .map(BaseElem::Rat)
                    .ok_or(EngineError::DivisionByZero),
            })
            .collect();
        Ok(Scalar {
            field: target.clone(),
            repr: repr?,
        })
    }

    /// The rational value, if this scalar is in Q's image.
    pub fn as_rat(&self) -> Option<Rat> {
        for c in &self.repr[1..] {
            if !c.is_zero() {
                return None;
            }
        }
        match &self.repr[0] {
            BaseElem::Rat(r) => Some(r.clone()),
            BaseElem::Fun(f) => f.as_rat(),
        }
    }

    /// Numerator polynomials in lambda whose roots are exactly the lambda
    /// values where this (nonzero) scalar vanishes or is undefined.
    pub fn lambda_numerator(&self) -> Option<UniPoly> {
        match &self.repr[0] {
            BaseElem::Fun(_) => {
                // collect numerators of all coordinates; product captures
                // vanishing of the whole vector only if degree 1, so restrict
                // to degree-1 towers (profiles run over plain Q(lambda))
                if self.repr.len() == 1 {
                    if let BaseElem::Fun(f) = &self.repr[0] {
                        return Some(f.num.clone());
                    }
                }
                None
            }
            _ => None,
        }
    }
}

/// extended gcd for dense polynomials over a base field:
/// returns (g, s) with s*a = g mod m (t is not needed).
fn ext_gcd(
    a: &[BaseElem],
    m: &[BaseElem],
    base: BaseField,
) -> Result<(Vec<BaseElem>, Vec<BaseElem>)> {
    let trim = |v: &mut Vec<BaseElem>| {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    };
    let mut r0: Vec<BaseElem> = m.to_vec();
    let mut r1: Vec<BaseElem> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<BaseElem> = vec![];
    let mut s1: Vec<BaseElem> = vec![BaseElem::one(base)];
    while !r1.is_empty() {
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut q: Vec<BaseElem> = vec![BaseElem::zero(base); rem.len().saturating_sub(r1.len()) + 1];
        let l1 = r1.last().unwrap().clone();
        let l1inv = l1.inv()?;
        while rem.len() >= r1.len() && !rem.is_empty() {
            let k = rem.len() - r1.len();
            let c = rem.last().unwrap().mul(&l1inv);
            q[k] = q[k].add(&c);
            for (i, b) in r1.iter().enumerate() {
                let v = c.mul(b);
                rem[i + k] = rem[i + k].sub(&v);
            }
            trim(&mut rem);
        }
        // s_new = s0 - q*s1
        let mut qs = vec![BaseElem::zero(base); q.len() + s1.len()];
        for (i, qc) in q.iter().enumerate() {
            if qc.is_zero() {
                continue;
            }
            for (j, sc) in s1.iter().enumerate() {
                qs[i + j] = qs[i + j].add(&qc.mul(sc));
            }
        }
        let n = s0.len().max(qs.len());
        let mut snew = Vec::with_capacity(n);
        for i in 0..n {
            let x = s0.get(i).cloned().unwrap_or(BaseElem::zero(base));
            let y = qs.get(i).cloned().unwrap_or(BaseElem::zero(base));
            snew.push(x.sub(&y));
        }
        let mut snew = snew;
        trim(&mut snew);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = snew;
    }
    Ok((r0, s0))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scalar(self))
    }
}

/// Print a scalar as a polynomial in `alpha` with base coefficients printed
/// in `lambda`; matches the polynomial grammar.
pub fn format_scalar(s: &Scalar) -> String {
    let coeff_str = |c: &BaseElem| -> String {
        match c {
            BaseElem::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            BaseElem::Fun(fun) => fun.to_string_in("lambda"),
        }
    };
    if s.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in s.repr.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = coeff_str(c);
        let body = if i == 0 {
            cs
        } else {
            let pw = if i == 1 {
                "alpha".to_string()
            } else {
                format!("alpha^{}", i)
            };
            if cs == "1" {
                pw
            } else if cs == "-1" {
                format!("-{}", pw)
            } else if cs.contains(['+', '-', '/'].as_ref())
                && !(cs.starts_with('-') && !cs[1..].contains(['+', '-', '/'].as_ref()))
            {
                format!("({})*{}", cs, pw)
            } else {
                format!("{}*{}", cs, pw)
            }
        };
        parts.push(body);
    }
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(p);
        } else if let Some(stripped) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::rat_int;

    #[test]
    fn q_arithmetic() {
        let q = FieldDescriptor::rationals();
        let a = q.from_rat(rat_int(3) / rat_int(4));
        let b = q.from_int(2);
        assert_eq!(a.add(&b).sub(&b), a);
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn quartic_extension_inverse() {
        // alpha^4 + alpha^2 - 1 = 0 (the Y5-style field)
        let m = UniPoly::from_i64(&[-1, 0, 1, 0, 1]);
        let f = FieldDescriptor::extension_of_q(&m).unwrap();
        let a = f.alpha().unwrap();
        let v = a.pow(3).add(&a.mul(&f.from_int(2))).sub(&f.from_int(5));
        let vi = v.inv().unwrap();
        assert!(v.mul(&vi).is_one());
    }

    #[test]
    fn lambda_alpha_tower() {
        // Q(lambda)(alpha) with alpha^2 = 3
        let m = UniPoly::from_i64(&[-3, 0, 1]);
        let f = FieldDescriptor::extension_of_qlambda(&m).unwrap();
        let a = f.alpha().unwrap();
        let l = f.lambda().unwrap();
        let v = a.mul(&l).add(&f.one()); // 1 + lambda*alpha
        let vi = v.inv().unwrap();
        assert!(v.mul(&vi).is_one());
        assert_eq!(a.mul(&a), f.from_int(3));
    }

    #[test]
    fn reducible_extension_rejected() {
        let m = UniPoly::from_i64(&[-1, 0, 0, 0, 1]); // s^4 - 1 reducible
        assert!(FieldDescriptor::extension_of_q(&m).is_err());
    }

    #[test]
    fn promote_q_into_tower() {
        let m = UniPoly::from_i64(&[-2, 0, 2, 1]);
        let f = FieldDescriptor::extension_of_q(&m).unwrap();
        let q = FieldDescriptor::rationals();
        let x = q.from_int(7).promote(&f).unwrap();
        assert_eq!(x, f.from_int(7));
        assert!(q.from_int(1).promote(&q).unwrap().is_one());
    }
}
