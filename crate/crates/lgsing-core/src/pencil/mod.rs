//! Quartic pencils N - lambda*D in P^3, projective points over tower fields,
//! chart families, and blow-ups along rational linear centers.

pub mod blowup;

use std::sync::Arc;

use crate::algebra::field::{FieldDescriptor, Scalar};
use crate::algebra::groebner::Budget;
use crate::algebra::monomial::{Monomial, MonomialOrder};
use crate::algebra::poly::{vars, Polynomial, VarSet};
use crate::error::{EngineError, Result};

pub const PENCIL_DEGREE: i64 = 4;

pub fn pencil_vars() -> VarSet {
    vars(&["x", "y", "z", "t"])
}

/// N - lambda*D, both homogeneous quartics over Q in x, y, z, t.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticPencil {
    pub n: Polynomial,
    pub d: Polynomial,
}

impl QuarticPencil {
    /// Validates homogeneity, equal degree, nonzero D, and that no variable
    /// (plus any supplied irreducible factor of D) divides both N and D.
    pub fn new(n: Polynomial, d: Polynomial, d_factors: &[Polynomial]) -> Result<Self> {
        if d.is_zero() {
            return Err(EngineError::ZeroPolynomial("pencil D".into()));
        }
        let dn = n
            .is_homogeneous()
            .ok_or_else(|| EngineError::DegreeOverflow("N not homogeneous".into()))?;
        let dd = d
            .is_homogeneous()
            .ok_or_else(|| EngineError::DegreeOverflow("D not homogeneous".into()))?;
        if dn != dd || dn != PENCIL_DEGREE {
            return Err(EngineError::DegreeOverflow(format!(
                "pencil degrees N={}, D={}",
                dn, dd
            )));
        }
        // common variable factors
        for v in 0..4 {
            let n_div = n.terms.keys().all(|m| m.0[v] > 0);
            let d_div = d.terms.keys().all(|m| m.0[v] > 0);
            if n_div && d_div {
                return Err(EngineError::FixedComponent(n.vars[v].clone()));
            }
        }
        // supplied non-variable factors of D must not divide N
        for f in d_factors {
            if f.is_constant() {
                continue;
            }
            let r = crate::algebra::groebner::reduce(
                &n,
                std::slice::from_ref(f),
                MonomialOrder::GrevLex,
                Budget::default(),
            )?;
            if r.is_zero() {
                return Err(EngineError::FixedComponent(format!("{}", f)));
            }
        }
        Ok(QuarticPencil { n, d })
    }

    /// The member F_lambda = N - lambda*D over Q(lambda), in pencil vars.
    pub fn member(&self) -> Result<Polynomial> {
        let ql = FieldDescriptor::rational_functions();
        let n = self.n.promote(&ql)?;
        let d = self.d.promote(&ql)?;
        Ok(n.sub(&d.mul_scalar(&ql.lambda()?)))
    }

    /// All four homogeneous partials of N - lambda*D over Q(lambda).
    pub fn partials(&self) -> Result<Vec<Polynomial>> {
        let f = self.member()?;
        Ok((0..4).map(|i| f.derivative(i)).collect())
    }
}

/// A point of P^3 over Q, Q(lambda), or Q(alpha); normalized so the first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    pub field: FieldDescriptor,
    pub coords: [Scalar; 4],
}

impl ProjectivePoint {
    pub fn new(field: &FieldDescriptor, coords: [Scalar; 4]) -> Result<Self> {
        let mut p = ProjectivePoint {
            field: field.clone(),
            coords,
        };
        p.normalize()?;
        Ok(p)
    }

    pub fn from_rationals(nums: [i64; 4]) -> Result<Self> {
        let q = FieldDescriptor::rationals();
        let coords = [
            q.from_int(nums[0]),
            q.from_int(nums[1]),
            q.from_int(nums[2]),
            q.from_int(nums[3]),
        ];
        Self::new(&q, coords)
    }

    fn normalize(&mut self) -> Result<()> {
        let lead = self
            .coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| EngineError::Other("projective point with all zeros".into()))?;
        let inv = self.coords[lead].inv()?;
        for c in self.coords.iter_mut() {
            *c = c.mul(&inv);
        }
        Ok(())
    }

    pub fn first_nonzero(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Promote the coordinates into a larger field.
    pub fn promote(&self, field: &FieldDescriptor) -> Result<Self> {
        let coords = [
            self.coords[0].promote(field)?,
            self.coords[1].promote(field)?,
            self.coords[2].promote(field)?,
            self.coords[3].promote(field)?,
        ];
        Ok(ProjectivePoint {
            field: field.clone(),
            coords,
        })
    }

    pub fn display(&self) -> String {
        format!(
            "[{}:{}:{}:{}]",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

/// true iff N(p) = 0 and D(p) = 0 (identically in lambda for moving points).
pub fn base_locus_member(pencil: &QuarticPencil, p: &ProjectivePoint) -> Result<bool> {
    let n = pencil.n.promote(&p.field)?;
    let d = pencil.d.promote(&p.field)?;
    Ok(n.eval(&p.coords).is_zero() && d.eval(&p.coords).is_zero())
}

/// A linear center: a Q-rational point or a line cut out by two independent
/// Q-linear forms in the pencil coordinates.
#[derive(Clone, Debug)]
pub enum LinearCenter {
    Point(ProjectivePoint),
    Line(Polynomial, Polynomial),
}

impl LinearCenter {
    pub fn line(f1: Polynomial, f2: Polynomial) -> Result<Self> {
        for f in [&f1, &f2] {
            if f.is_homogeneous() != Some(1) {
                return Err(EngineError::Other(format!(
                    "line form `{}` not linear homogeneous",
                    f
                )));
            }
        }
        // independence: the 2x4 coefficient matrix has rank 2
        let a: Vec<Scalar> = (0..4).map(|i| coeff_lin(&f1, i)).collect();
        let b: Vec<Scalar> = (0..4).map(|i| coeff_lin(&f2, i)).collect();
        let mut independent = false;
        for i in 0..4 {
            for j in i + 1..4 {
                let det = a[i].mul(&b[j]).sub(&a[j].mul(&b[i]));
                if !det.is_zero() {
                    independent = true;
                }
            }
        }
        if !independent {
            return Err(EngineError::Other("line forms not independent".into()));
        }
        Ok(LinearCenter::Line(f1, f2))
    }
}

fn coeff_lin(f: &Polynomial, i: usize) -> Scalar {
    f.terms
        .get(&Monomial::var(f.nvars(), i))
        .cloned()
        .unwrap_or_else(|| f.field.zero())
}

/// One blow-up step in a chart family's history: enough data to replay the
/// blow-down map on polynomials.
#[derive(Clone, Debug)]
pub struct BlowUpStep {
    /// substitution: previous chart coordinates as polynomials in the new
    /// coordinates (index-aligned with the chart variable list)
    pub down_map: Vec<Polynomial>,
    /// index of the exceptional coordinate in the new chart
    pub exceptional: usize,
    /// exact multiplicity divided out of the total transform
    pub multiplicity: i64,
}

/// An affine chart of the pencil (or of an iterated blow-up of one):
/// G(v1, v2, v3, lambda) over Q, linear in lambda.
#[derive(Clone, Debug)]
pub struct ChartFamily {
    /// which pencil coordinate was set to 1
    pub chart: usize,
    /// names: three affine coordinates then "lambda"
    pub vars: VarSet,
    pub g: Polynomial,
    pub history: Vec<BlowUpStep>,
}

impl ChartFamily {
    /// Split G = n_part - lambda * d_part (G is linear in lambda).
    pub fn split_lambda(&self) -> (Polynomial, Polynomial) {
        let nl = self.vars.len();
        let lam = nl - 1;
        let mut n = Polynomial::zero(&self.g.field, &self.vars);
        let mut d = Polynomial::zero(&self.g.field, &self.vars);
        for (m, c) in &self.g.terms {
            match m.0[lam] {
                0 => {
                    n.terms.insert(m.clone(), c.clone());
                }
                1 => {
                    let mut e = m.clone();
                    e.0[lam] = 0;
                    d.terms.insert(e, c.neg());
                }
                _ => panic!("chart family not linear in lambda"),
            }
        }
        (n, d)
    }
}

/// Build the quartic pencil of a Laurent polynomial: N = homogenization of
/// f*m, D = homogenization of m, both to degree 4 via t.
pub fn compactify_to_pencil(f: &Polynomial, clearing: &Monomial) -> Result<QuarticPencil> {
    // f lives over Q in 3 variables
    if f.nvars() != 3 {
        return Err(EngineError::Other(
            "compactify expects a 3-variable Laurent polynomial".into(),
        ));
    }
    let cleared = f.mul_term(clearing, &f.field.one());
    if cleared.terms.keys().any(|m| !m.is_polynomial()) {
        return Err(EngineError::NotCleared(format!("{}", f)));
    }
    if !Monomial(clearing.0.clone()).is_polynomial() {
        return Err(EngineError::NotCleared("clearing monomial negative".into()));
    }
    // move into x,y,z,t context
    let pv = pencil_vars();
    let mapping = [0usize, 1, 2];
    let cleared4 = cleared.map_vars(&pv, &mapping);
    if cleared4.total_degree() > PENCIL_DEGREE {
        return Err(EngineError::DegreeOverflow(format!(
            "f*m has degree {}",
            cleared4.total_degree()
        )));
    }
    let full_degree = cleared4.total_degree() == PENCIL_DEGREE;
    let n = cleared4.homogenize(3, PENCIL_DEGREE)?;
    let m4 = Polynomial::monomial(
        &f.field,
        &pv,
        Monomial(vec![clearing.0[0], clearing.0[1], clearing.0[2], 0]),
        f.field.one(),
    );
    if m4.total_degree() > PENCIL_DEGREE {
        return Err(EngineError::DegreeOverflow("clearing monomial degree".into()));
    }
    let d = m4.homogenize(3, PENCIL_DEGREE)?;
    if full_degree {
        QuarticPencil::new(n, d, &[])
    } else {
        // degree-deficient inputs pick up a forced t-power in both sides;
        // the homogenization rule still defines the pair
        Ok(QuarticPencil { n, d })
    }
}

/// Smallest monomial clearing all denominators of f (componentwise max of
/// negative exponents).
pub fn infer_clearing_monomial(f: &Polynomial) -> Monomial {
    let n = f.nvars();
    let mut e = vec![0i32; n];
    for m in f.terms.keys() {
        for i in 0..n {
            e[i] = e[i].max(-m.0[i]);
        }
    }
    Monomial(e)
}

/// Restrict the pencil to an affine chart; empty history.
pub fn dehomogenize(pencil: &QuarticPencil, chart: usize) -> Result<ChartFamily> {
    let names: Vec<String> = (0..4)
        .filter(|&i| i != chart)
        .map(|i| pencil.n.vars[i].clone())
        .chain(std::iter::once("lambda".to_string()))
        .collect();
    let vs: VarSet = Arc::new(names);
    let ql = FieldDescriptor::rational_functions();
    let member = pencil.member()?;
    let one = ql.one();
    let restricted = member.substitute_scalar(chart, &one);
    // remap x,y,z,t minus chart into v1,v2,v3 and lambda coefficient into a
    // polynomial variable
    let mut g = Polynomial::zero(&pencil.n.field, &vs);
    for (m, c) in &restricted.terms {
        let mut e = vec![0i32; 4];
        let mut k = 0;
        for i in 0..4 {
            if i == chart {
                continue;
            }
            e[k] = m.0[i];
            k += 1;
        }
        // c is a polynomial in lambda of degree <= 1
        let (c0, c1) = lambda_linear_parts(c)?;
        if !c0.is_zero() {
            let mut e0 = e.clone();
            e0[3] = 0;
            add_term(&mut g, Monomial(e0), c0);
        }
        if !c1.is_zero() {
            let mut e1 = e.clone();
            e1[3] = 1;
            add_term(&mut g, Monomial(e1), c1);
        }
    }
    Ok(ChartFamily {
        chart,
        vars: vs,
        g,
        history: vec![],
    })
}

fn add_term(p: &mut Polynomial, m: Monomial, c: Scalar) {
    use std::collections::btree_map::Entry;
    match p.terms.entry(m) {
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

/// Split a Q(lambda) scalar that is polynomial of degree <= 1 in lambda into
/// rational parts (c0 + c1*lambda), returned over Q.
fn lambda_linear_parts(c: &Scalar) -> Result<(Scalar, Scalar)> {
    let q = FieldDescriptor::rationals();
    match &c.repr[0] {
        crate::algebra::field::BaseElem::Fun(f) => {
            if !f.den.is_constant() || f.num.degree() > 1 {
                return Err(EngineError::Other(
                    "pencil member not linear in lambda".into(),
                ));
            }
            let den = f.den.coeff(0);
            Ok((
                q.from_rat(f.num.coeff(0) / den.clone()),
                q.from_rat(f.num.coeff(1) / den),
            ))
        }
        crate::algebra::field::BaseElem::Rat(r) => Ok((q.from_rat(r.clone()), q.zero())),
    }
}

/// Re-homogenize a chart family with empty history back to a pencil
/// (used by the round-trip property test).
pub fn rehomogenize(family: &ChartFamily) -> Result<QuarticPencil> {
    let (n3, d3) = family.split_lambda();
    let pv = pencil_vars();
    // insert the chart variable back at its position
    let mapping: Vec<usize> = (0..4).filter(|&i| i != family.chart).collect();
    let n4 = remap3to4(&n3, &pv, &mapping);
    let d4 = remap3to4(&d3, &pv, &mapping);
    let n = n4.homogenize(family.chart, PENCIL_DEGREE)?;
    let d = d4.homogenize(family.chart, PENCIL_DEGREE)?;
    QuarticPencil::new(n, d, &[])
}

fn remap3to4(p: &Polynomial, pv: &VarSet, mapping: &[usize]) -> Polynomial {
    let mut out = Polynomial::zero(&p.field, pv);
    for (m, c) in &p.terms {
        let mut e = vec![0i32; 4];
        for k in 0..3 {
            e[mapping[k]] = m.0[k];
        }
        out.terms.insert(Monomial(e), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::unipoly::UniPoly;

    fn p3_laurent() -> Polynomial {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        parse_polynomial("x+y+z+1/(x*y*z)", &vs, &q).unwrap()
    }

    #[test]
    fn compactify_p3() {
        let f = p3_laurent();
        let m = infer_clearing_monomial(&f);
        assert_eq!(m, Monomial(vec![1, 1, 1]));
        let pencil = compactify_to_pencil(&f, &m).unwrap();
        let q = FieldDescriptor::rationals();
        let pv = pencil_vars();
        let n_expect = parse_polynomial("(x+y+z)*x*y*z+t^4", &pv, &q).unwrap();
        let d_expect = parse_polynomial("x*y*z*t", &pv, &q).unwrap();
        assert_eq!(pencil.n, n_expect);
        assert_eq!(pencil.d, d_expect);
    }

    #[test]
    fn compactify_quadric() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let f = parse_polynomial("(x+1)^2/(x*y*z)+y+z", &vs, &q).unwrap();
        let pencil = compactify_to_pencil(&f, &Monomial(vec![1, 1, 1])).unwrap();
        let pv = pencil_vars();
        let n_expect = parse_polynomial("(x+t)^2*t^2+(y+z)*x*y*z", &pv, &q).unwrap();
        assert_eq!(pencil.n, n_expect);
    }

    #[test]
    fn compactify_monomial_degree_rule() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let f = parse_polynomial("x", &vs, &q).unwrap();
        let pencil = compactify_to_pencil(&f, &Monomial(vec![0, 0, 0])).unwrap();
        let pv = pencil_vars();
        assert_eq!(pencil.n, parse_polynomial("x*t^3", &pv, &q).unwrap());
        assert_eq!(pencil.d, parse_polynomial("t^4", &pv, &q).unwrap());
    }

    #[test]
    fn dehomogenize_roundtrip() {
        let f = p3_laurent();
        let pencil = compactify_to_pencil(&f, &Monomial(vec![1, 1, 1])).unwrap();
        let fam = dehomogenize(&pencil, 3).unwrap();
        let back = rehomogenize(&fam).unwrap();
        assert_eq!(back.n, pencil.n);
        assert_eq!(back.d, pencil.d);
        // dehomogenize at t: N part is (x+y+z)xyz + 1, D part is xyz
        let (n3, d3) = fam.split_lambda();
        let q = FieldDescriptor::rationals();
        let n_expect = parse_polynomial("(x+y+z)*x*y*z+1", &fam.vars, &q).unwrap();
        let d_expect = parse_polynomial("x*y*z", &fam.vars, &q).unwrap();
        assert_eq!(n3, n_expect);
        assert_eq!(d3, d_expect);
    }

    #[test]
    fn base_locus_checks() {
        let f = p3_laurent();
        let pencil = compactify_to_pencil(&f, &Monomial(vec![1, 1, 1])).unwrap();
        // [1:0:0:0] on the base locus
        let p = ProjectivePoint::from_rationals([1, 0, 0, 0]).unwrap();
        assert!(base_locus_member(&pencil, &p).unwrap());
        // the sporadic orbit avoids it: alpha^4=1 has the rational points
        // [1:1:1:1] (alpha=1): D(1,1,1,1) = 1 != 0
        let p2 = ProjectivePoint::from_rationals([1, 1, 1, 1]).unwrap();
        assert!(!base_locus_member(&pencil, &p2).unwrap());
        // moving point over Q(lambda) evaluates identically
        let ql = FieldDescriptor::rational_functions();
        let lam = ql.lambda().unwrap();
        let pm = ProjectivePoint::new(
            &ql,
            [
                ql.from_int(-1),
                lam.clone(),
                ql.zero(),
                ql.one(),
            ],
        )
        .unwrap();
        // not on this pencil's base locus necessarily; just exercise the call
        let _ = base_locus_member(&pencil, &pm).unwrap();
        let _ = UniPoly::one();
    }
}
