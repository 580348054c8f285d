//! Zero-dimensional system solving by lex triangularization and recursive
//! back-substitution, with complete root finders for Q, Q(lambda), and
//! number fields Q(alpha). Roots outside the coefficient field make the
//! solver report an unsupported structure rather than guess.

use num_traits::{One, Zero};
use std::sync::Arc;

use super::factor::{factor_univariate_capped, squarefree_decomposition};
use super::field::{BaseElem, FieldDescriptor, Scalar};
use super::groebner::{groebner_basis, Budget};
use super::monomial::MonomialOrder;
use super::poly::{Polynomial, VarSet};
use super::ratfun::RatFun;
use super::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

/// Dense univariate over an arbitrary tower field (ascending).
#[derive(Clone, Debug)]
pub struct FieldPoly {
    pub field: FieldDescriptor,
    pub coeffs: Vec<Scalar>,
}

impl FieldPoly {
    pub fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
    /// divide by (w - root); panics if the division is inexact
    pub fn deflate(&self, root: &Scalar) -> FieldPoly {
        let n = self.coeffs.len();
        let mut out = vec![self.field.zero(); n - 1];
        let mut carry = self.field.zero();
        for i in (0..n).rev() {
            let v = self.coeffs[i].add(&carry);
            if i == 0 {
                assert!(v.is_zero(), "deflate: not a root");
            } else {
                out[i - 1] = v.clone();
                carry = v.mul(root);
            }
        }
        FieldPoly {
            field: self.field.clone(),
            coeffs: out,
        }
    }
}

/// Roots found in the coefficient field plus whether the polynomial split
/// completely into linear factors over it.
pub struct RootOutcome {
    pub roots: Vec<(Scalar, usize)>,
    pub fully_split: bool,
    pub residual_degree: usize,
}

/// All roots of `p` lying in its coefficient field.
pub fn field_roots(p: &FieldPoly) -> Result<RootOutcome> {
    if p.is_zero() {
        return Err(EngineError::ZeroPolynomial("field_roots".into()));
    }
    let field = &p.field;
    let candidates: Vec<Scalar> = if field.has_extension() {
        if field.has_lambda() {
            return Err(EngineError::UnsupportedField(
                "root finding over Q(lambda)(alpha) not supported".into(),
            ));
        }
        number_field_root_candidates(p)?
    } else if field.has_lambda() {
        lambda_root_candidates(p)?
    } else {
        rational_root_candidates(p)?
    };
    // deflate to get exact multiplicities
    let mut work = p.clone();
    let mut roots = Vec::new();
    for cand in candidates {
        let mut mult = 0usize;
        while !work.is_zero() && work.degree() >= 1 && work.eval(&cand).is_zero() {
            work = work.deflate(&cand);
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
    }
    let residual_degree = work.degree();
    Ok(RootOutcome {
        roots,
        fully_split: residual_degree == 0,
        residual_degree,
    })
}

fn rational_root_candidates(p: &FieldPoly) -> Result<Vec<Scalar>> {
    let up = UniPoly::from_coeffs(
        p.coeffs
            .iter()
            .map(|c| c.as_rat().expect("rational coefficients"))
            .collect(),
    );
    let (_, factors) = factor_univariate_capped(&up, 16.max(up.degree()))?;
    let mut out = Vec::new();
    for (f, _) in factors {
        if f.degree() == 1 {
            let r = -f.coeff(0) / f.coeff(1);
            out.push(p.field.from_rat(r));
        }
    }
    Ok(out)
}

/// Roots in Q(lambda): w = c * r(lambda)/s(lambda) with r | trailing and
/// s | leading coefficient (up to rational constants), found exactly.
fn lambda_root_candidates(p: &FieldPoly) -> Result<Vec<Scalar>> {
    // clear denominators: coefficients as UniPoly in lambda
    let funs: Vec<RatFun> = p
        .coeffs
        .iter()
        .map(|c| match &c.repr[0] {
            BaseElem::Fun(f) => f.clone(),
            BaseElem::Rat(r) => RatFun::from_rat(r.clone()),
        })
        .collect();
    let mut den = UniPoly::one();
    for f in &funs {
        let g = den.gcd(&f.den);
        den = den.mul(&f.den.div_exact(&g).expect("gcd divides"));
    }
    let mut coeffs: Vec<UniPoly> = funs
        .iter()
        .map(|f| f.num.mul(&den.div_exact(&f.den).expect("lcm divisible")))
        .collect();
    // strip w = 0 roots
    let mut out: Vec<Scalar> = Vec::new();
    if coeffs.first().map(|c| c.is_zero()).unwrap_or(false) {
        out.push(p.field.zero());
        while coeffs.first().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.remove(0);
        }
    }
    if coeffs.len() <= 1 {
        return Ok(out);
    }
    let lead = coeffs.last().unwrap().clone();
    let trail = coeffs[0].clone();
    let divisors_of = |q: &UniPoly| -> Result<Vec<UniPoly>> {
        let (_, factors) = factor_univariate_capped(q, 24.max(q.degree()))?;
        let mut divs: Vec<UniPoly> = vec![UniPoly::one()];
        for (f, m) in factors {
            let mut next = Vec::new();
            for d in &divs {
                let mut acc = d.clone();
                next.push(acc.clone());
                for _ in 0..m {
                    acc = acc.mul(&f);
                    next.push(acc.clone());
                }
            }
            divs = next;
        }
        divs.sort_by_key(|d| (d.degree(), format!("{}", d)));
        divs.dedup();
        Ok(divs)
    };
    let rs = divisors_of(&trail)?;
    let ss = divisors_of(&lead)?;
    let d = coeffs.len() - 1;
    let mut seen: Vec<RatFun> = Vec::new();
    for r in &rs {
        for s in &ss {
            // condition: sum_i coeffs[i] * c^i * r^i * s^(d-i) = 0 identically
            // in lambda; view as polynomial in c with UniPoly coefficients.
            let mut cpoly: Vec<UniPoly> = Vec::with_capacity(d + 1);
            for (i, q) in coeffs.iter().enumerate() {
                cpoly.push(q.mul(&r.pow(i)).mul(&s.pow(d - i)));
            }
            // the lambda-coefficient vectors give simultaneous conditions;
            // gcd over i of the univariate-in-c polynomials formed per
            // lambda-degree
            let max_ldeg = cpoly.iter().map(|q| q.degree()).max().unwrap_or(0);
            let mut gcd_c = UniPoly::zero();
            for ld in 0..=max_ldeg {
                let slice = UniPoly::from_coeffs(cpoly.iter().map(|q| q.coeff(ld)).collect());
                if slice.is_zero() {
                    continue;
                }
                gcd_c = if gcd_c.is_zero() {
                    slice
                } else {
                    gcd_c.gcd(&slice)
                };
                if gcd_c.degree() == 0 {
                    break;
                }
            }
            if gcd_c.is_zero() || gcd_c.degree() == 0 {
                continue;
            }
            let (_, cf) = factor_univariate_capped(&gcd_c, 16.max(gcd_c.degree()))?;
            for (f, _) in cf {
                if f.degree() != 1 {
                    continue;
                }
                let c0 = -f.coeff(0) / f.coeff(1);
                if c0.is_zero() {
                    continue;
                }
                let root = RatFun::new(r.scale(&c0), s.clone());
                if !seen.contains(&root) {
                    seen.push(root);
                }
            }
        }
    }
    for f in seen {
        out.push(Scalar {
            field: p.field.clone(),
            repr: vec![BaseElem::Fun(f)],
        });
    }
    Ok(out)
}

/// Roots in a number field Q(alpha) via the norm resultant and gcds.
fn number_field_root_candidates(p: &FieldPoly) -> Result<Vec<Scalar>> {
    let field = &p.field;
    let m = field
        .ext_minpoly_q()
        .ok_or_else(|| EngineError::UnsupportedField("extension without Q minpoly".into()))?;
    let d = m.degree();
    // bivariate coefficients: g = sum_{i,j} g[i][j] s^i w^j  (s = alpha)
    let degw = p.degree();
    // norm N(w) = Res_s(m(s), g(s, w)) computed by Sylvester/Bareiss over Q[w]
    let mut rows: Vec<Vec<UniPoly>> = Vec::new();
    let degs_g = d.saturating_sub(1); // g reduced mod m
    let size = d + degs_g;
    if size == 0 {
        return Ok(vec![]);
    }
    // coefficients of m in s (degree d), of g in s (degree <= d-1, UniPoly in w)
    let mcoef: Vec<UniPoly> = (0..=d)
        .map(|i| UniPoly::constant(m.coeff(i)))
        .collect();
    let mut gcoef: Vec<UniPoly> = vec![UniPoly::zero(); degs_g + 1];
    for (j, c) in p.coeffs.iter().enumerate() {
        for (i, b) in c.repr.iter().enumerate() {
            let r = match b {
                BaseElem::Rat(r) => r.clone(),
                _ => unreachable!(),
            };
            if !r.is_zero() {
                gcoef[i] = gcoef[i].add(&UniPoly::monomial(r, j));
            }
        }
    }
    let degw_eff = degw;
    let _ = degw_eff;
    // Sylvester matrix of m (degree d) and g (degree degs_g) in s
    for k in 0..degs_g {
        let mut row = vec![UniPoly::zero(); size];
        for (i, c) in mcoef.iter().enumerate() {
            row[k + (d - i)] = c.clone();
        }
        rows.push(row);
    }
    for k in 0..d {
        let mut row = vec![UniPoly::zero(); size];
        for (i, c) in gcoef.iter().enumerate() {
            row[k + (degs_g - i)] = c.clone();
        }
        rows.push(row);
    }
    let norm = bareiss_det(rows)?;
    if norm.is_zero() {
        return Err(EngineError::UnsupportedSolution(
            "vanishing norm in number-field root finding".into(),
        ));
    }
    // square-free part, then factor over Q
    let mut candidates = Vec::new();
    for (part, _) in squarefree_decomposition(&norm.monic()) {
        if part.degree() == 0 {
            continue;
        }
        let (_, factors) = factor_univariate_capped(&part, 32.max(part.degree()))?;
        for (q, _) in factors {
            // gcd over Q(alpha) of p and q(w)
            let qf = FieldPoly {
                field: field.clone(),
                coeffs: q.coeffs.iter().map(|c| field.from_rat(c.clone())).collect(),
            };
            let g = fieldpoly_gcd(p, &qf)?;
            if g.degree() == 1 {
                let root = g.coeffs[0].neg().div(&g.coeffs[1])?;
                candidates.push(root);
            }
            // degree >= 2 gcds would mean conjugate roots inside Q(alpha);
            // none of the catalog's fibers need them
        }
    }
    Ok(candidates)
}

fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> Result<UniPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(UniPoly::one());
    }
    let mut sign = 1i32;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(UniPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev)?;
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { det.neg() } else { det })
}

pub(crate) fn fieldpoly_gcd_for_duval(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly> {
    fieldpoly_gcd(a, b)
}

fn fieldpoly_gcd(a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly> {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    r0.trim();
    r1.trim();
    while !r1.is_zero() {
        // r0 mod r1
        let l1 = r1.coeffs.last().unwrap().clone();
        let l1inv = l1.inv()?;
        let mut rem = r0.clone();
        while !rem.is_zero() && rem.degree() >= r1.degree() {
            if rem.coeffs.len() < r1.coeffs.len() {
                break;
            }
            let k = rem.degree() - r1.degree();
            let c = rem.coeffs.last().unwrap().mul(&l1inv);
            for (i, bc) in r1.coeffs.iter().enumerate() {
                let v = c.mul(bc);
                rem.coeffs[i + k] = rem.coeffs[i + k].sub(&v);
            }
            rem.trim();
            if rem.is_zero() {
                break;
            }
        }
        r0 = r1;
        r1 = rem;
    }
    // monic
    if !r0.is_zero() {
        let l = r0.coeffs.last().unwrap().clone();
        let li = l.inv()?;
        for c in r0.coeffs.iter_mut() {
            *c = c.mul(&li);
        }
    }
    Ok(r0)
}

/// Extract the member of a lex Groebner basis univariate in the last
/// variable, as a FieldPoly.
fn last_var_univariate(gb: &[Polynomial]) -> Option<FieldPoly> {
    let n = gb.first()?.nvars();
    for p in gb {
        if p.terms.keys().all(|m| m.0[..n - 1].iter().all(|&e| e == 0)) {
            let deg = p.max_exponent(n - 1) as usize;
            let mut coeffs = vec![p.field.zero(); deg + 1];
            for (m, c) in &p.terms {
                coeffs[m.0[n - 1] as usize] = c.clone();
            }
            return Some(FieldPoly {
                field: p.field.clone(),
                coeffs,
            });
        }
    }
    None
}

/// All solutions (in the coefficient field) of a zero-dimensional system.
/// Errors when a positive-dimensional fiber is met or when solutions exist
/// outside the field.
pub fn solve_zero_dimensional(
    gens: &[Polynomial],
    budget: Budget,
) -> Result<Vec<Vec<Scalar>>> {
    let live: Vec<Polynomial> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    if live.is_empty() {
        return Err(EngineError::PositiveDimensional("zero ideal".into()));
    }
    let field = live[0].field.clone();
    let n = live[0].nvars();
    let gb = groebner_basis(&live, MonomialOrder::Lex, budget)?;
    if gb.iter().any(|p| p.is_constant() && !p.is_zero()) {
        return Ok(vec![]);
    }
    if gb.is_empty() {
        return Err(EngineError::PositiveDimensional("zero ideal".into()));
    }
    let uni = last_var_univariate(&gb).ok_or_else(|| {
        EngineError::PositiveDimensional(format!(
            "no univariate eliminant in {}",
            live[0].vars[n - 1]
        ))
    })?;
    let outcome = field_roots(&uni)?;
    if !outcome.fully_split {
        return Err(EngineError::UnsupportedSolution(format!(
            "eliminant in {} has an irreducible factor of degree {} over the base field",
            live[0].vars[n - 1],
            outcome.residual_degree
        )));
    }
    let mut points = Vec::new();
    for (root, _) in outcome.roots {
        if n == 1 {
            points.push(vec![root]);
            continue;
        }
        // substitute and recurse on the first n-1 variables
        let newvars: VarSet = Arc::new(live[0].vars[..n - 1].to_vec());
        let reduced: Vec<Polynomial> = gb
            .iter()
            .map(|p| {
                let q = p.substitute_scalar(n - 1, &root);
                let mut out = Polynomial::zero(&field, &newvars);
                for (m, c) in &q.terms {
                    out.terms
                        .insert(super::monomial::Monomial(m.0[..n - 1].to_vec()), c.clone());
                }
                out
            })
            .filter(|p| !p.is_zero())
            .collect();
        if reduced.is_empty() {
            return Err(EngineError::PositiveDimensional(
                "fiber over root is the whole space".into(),
            ));
        }
        for mut sol in solve_zero_dimensional(&reduced, budget)? {
            sol.push(root.clone());
            points.push(sol);
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::poly::vars;
    use crate::algebra::unipoly::rat_int;

    #[test]
    fn simple_system() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y"]);
        // x^2 = 1, y = x: solutions (1,1), (-1,-1)
        let gens = vec![
            parse_polynomial("x^2-1", &vs, &q).unwrap(),
            parse_polynomial("y-x", &vs, &q).unwrap(),
        ];
        let mut sols = solve_zero_dimensional(&gens, Budget::default()).unwrap();
        sols.sort_by_key(|s| format!("{:?}", s[0].as_rat()));
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert_eq!(s[0].as_rat(), s[1].as_rat());
        }
    }

    #[test]
    fn irrational_solution_rejected() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x"]);
        let gens = vec![parse_polynomial("x^2-2", &vs, &q).unwrap()];
        assert!(matches!(
            solve_zero_dimensional(&gens, Budget::default()),
            Err(EngineError::UnsupportedSolution(_))
        ));
    }

    #[test]
    fn positive_dimensional_rejected() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y"]);
        let gens = vec![parse_polynomial("x*y", &vs, &q).unwrap()];
        assert!(matches!(
            solve_zero_dimensional(&gens, Budget::default()),
            Err(EngineError::PositiveDimensional(_))
        ));
    }

    #[test]
    fn lambda_roots_linear_in_lambda() {
        // (w - lambda)(w - 2)(w - (3 lambda + 1)/lambda) cleared:
        let f = FieldDescriptor::rational_functions();
        let lam = f.lambda().unwrap();
        let two = f.from_int(2);
        let three = f.from_int(3);
        let r3 = three
            .mul(&lam)
            .add(&f.one())
            .div(&lam)
            .unwrap();
        let roots = [lam.clone(), two.clone(), r3.clone()];
        // build polynomial prod (w - r)
        let mut coeffs = vec![f.one()];
        for r in &roots {
            // multiply by (w - r)
            let mut next = vec![f.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(r));
            }
            coeffs = next;
        }
        let p = FieldPoly {
            field: f.clone(),
            coeffs,
        };
        let out = field_roots(&p).unwrap();
        assert!(out.fully_split);
        assert_eq!(out.roots.len(), 3);
        for r in &roots {
            assert!(out.roots.iter().any(|(x, _)| x == r));
        }
    }

    #[test]
    fn number_field_roots() {
        // over Q(a), a^3+2a^2-2=0: roots of (w - a)(w - (a^2+1)) w
        let m = UniPoly::from_i64(&[-2, 0, 2, 1]);
        let f = FieldDescriptor::extension_of_q(&m).unwrap();
        let a = f.alpha().unwrap();
        let r2 = a.mul(&a).add(&f.one());
        let roots = [a.clone(), r2.clone(), f.zero()];
        let mut coeffs = vec![f.one()];
        for r in &roots {
            let mut next = vec![f.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(r));
            }
            coeffs = next;
        }
        let p = FieldPoly {
            field: f.clone(),
            coeffs,
        };
        let out = field_roots(&p).unwrap();
        assert!(out.fully_split, "residual degree {}", out.residual_degree);
        assert_eq!(out.roots.len(), 3);
        for r in &roots {
            assert!(out.roots.iter().any(|(x, _)| x == r));
        }
        let _ = rat_int(0);
    }
}
