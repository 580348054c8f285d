//! Torus critical points of a Laurent polynomial: the Givental-type check.
//! The cleared critical system is saturated by the torus coordinates and by
//! the numerator (dropping the fiber over zero, which is the central fiber
//! for every catalog model); the remaining points are grouped by the
//! minimal polynomial of their critical value.

use std::sync::Arc;

use crate::algebra::algnum::AlgebraicNumber;
use crate::algebra::factor::factor_univariate_capped;
use crate::algebra::field::{FieldDescriptor, Scalar};
use crate::algebra::groebner::Budget;
use crate::algebra::ideal::{eliminate, is_zero_dimensional, saturate};
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::{Polynomial, VarSet};
use crate::algebra::solve::solve_zero_dimensional;
use crate::algebra::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

#[derive(Clone, Debug)]
pub struct TorusOrbit {
    /// minimal polynomial of the critical value
    pub value: AlgebraicNumber,
    /// critical points per conjugate fiber, coordinates in Q(alpha)
    pub points: Vec<Vec<Scalar>>,
    pub nondegenerate: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct TorusReport {
    pub orbits: Vec<TorusOrbit>,
}

impl TorusReport {
    /// Total number of critical points counted with conjugates.
    pub fn total_count(&self) -> usize {
        self.orbits
            .iter()
            .map(|o| o.value.degree() * o.points.len())
            .sum()
    }
    pub fn all_nondegenerate(&self) -> bool {
        self.orbits
            .iter()
            .all(|o| o.nondegenerate.iter().all(|&b| b))
    }
    /// Distinct critical values, counted with conjugates.
    pub fn distinct_value_count(&self) -> usize {
        self.orbits.iter().map(|o| o.value.degree()).sum()
    }
}

/// All isolated torus critical points of f with nonzero critical value.
pub fn torus_critical_points(f: &Polynomial, budget: Budget) -> Result<TorusReport> {
    if f.nvars() != 3 {
        return Err(EngineError::Other(
            "torus critical points expect exactly 3 variables".into(),
        ));
    }
    if f.field.has_lambda() || f.field.has_extension() {
        return Err(EngineError::UnsupportedField(
            "torus mode runs over Q".into(),
        ));
    }
    let q = f.field.clone();
    // clearing exponents k_i = max(0, -min exp)
    let ks: Vec<i32> = (0..3).map(|i| (-f.min_exponent(i)).max(0)).collect();
    let clear = Monomial(ks.clone());
    let p = f.mul_term(&clear, &q.one());
    debug_assert!(p.terms.keys().all(|m| m.is_polynomial()));
    // g_i = x_i dP/dx_i - k_i P
    let mut gens: Vec<Polynomial> = Vec::new();
    for i in 0..3 {
        let xi = Polynomial::var(&q, &f.vars, i);
        let gi = xi
            .mul(&p.derivative(i))
            .sub(&p.mul_scalar(&q.from_int(ks[i] as i64)));
        if !gi.is_zero() {
            gens.push(gi);
        }
    }
    if gens.is_empty() {
        return Err(EngineError::PositiveDimensional(
            "critical system empty".into(),
        ));
    }
    // saturate by x*y*z*P: stay on the torus, drop the zero-value locus
    let xyz = Polynomial::monomial(&q, &f.vars, Monomial(vec![1, 1, 1]), q.one());
    let sat = saturate(&gens, &xyz.mul(&p), budget)?;
    if sat.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Ok(TorusReport { orbits: vec![] });
    }
    match is_zero_dimensional(&sat, budget)? {
        Some(true) => {}
        Some(false) => {
            return Err(EngineError::PositiveDimensional(
                "torus critical locus has positive dimension off the zero fiber".into(),
            ))
        }
        None => return Ok(TorusReport { orbits: vec![] }),
    }
    // critical values: adjoin s with s*x^k = P and eliminate x,y,z
    let vnames: Vec<String> = f
        .vars
        .iter()
        .cloned()
        .chain(std::iter::once("s_val".to_string()))
        .collect();
    let vs4: VarSet = Arc::new(vnames);
    let map = [0usize, 1, 2];
    let mut ext: Vec<Polynomial> = sat.iter().map(|g| g.map_vars(&vs4, &map)).collect();
    let s = Polynomial::var(&q, &vs4, 3);
    let clear4 = Polynomial::monomial(
        &q,
        &vs4,
        Monomial(vec![ks[0], ks[1], ks[2], 0]),
        q.one(),
    );
    ext.push(s.mul(&clear4).sub(&p.map_vars(&vs4, &map)));
    let elim = eliminate(&ext, 3, budget)?;
    let h = elim
        .first()
        .ok_or_else(|| EngineError::Other("no critical-value eliminant".into()))?;
    let hu = poly_to_unipoly_last(h)?;
    let (_, factors) = factor_univariate_capped(&hu, 24.max(hu.degree()))?;
    let mut orbits = Vec::new();
    for (m, _) in factors {
        let value = AlgebraicNumber::new(m)?;
        let (fiber_gens, field) = specialize_value(&sat, &p, &clear, &value)?;
        let sols = solve_zero_dimensional(&fiber_gens, budget)?;
        if sols.is_empty() {
            continue;
        }
        let mut points = Vec::new();
        let mut nondeg = Vec::new();
        for sol in sols {
            let nd = hessian_nondegenerate(f, &sol, &field)?;
            points.push(sol);
            nondeg.push(nd);
        }
        orbits.push(TorusOrbit {
            value,
            points,
            nondegenerate: nondeg,
        });
    }
    orbits.sort_by_key(|o| o.value.minpoly_string());
    Ok(TorusReport { orbits })
}

/// Specialize the saturated system to the fiber over a critical value:
/// gens + (value * x^k - P) with the value adjoined as alpha (or rational).
fn specialize_value(
    sat: &[Polynomial],
    p: &Polynomial,
    clear: &Monomial,
    value: &AlgebraicNumber,
) -> Result<(Vec<Polynomial>, FieldDescriptor)> {
    let field = match value.as_rational() {
        Some(_) => FieldDescriptor::rationals(),
        None => FieldDescriptor::extension_of_q(&value.minpoly)?,
    };
    let val: Scalar = match value.as_rational() {
        Some(r) => field.from_rat(r),
        None => field.alpha()?,
    };
    let mut out: Vec<Polynomial> = Vec::new();
    for g in sat {
        out.push(g.promote(&field)?);
    }
    let clear_poly = Polynomial::monomial(
        &field,
        &p.vars,
        clear.clone(),
        field.one(),
    );
    let pp = p.promote(&field)?;
    out.push(clear_poly.mul_scalar(&val).sub(&pp));
    Ok((out, field))
}

fn poly_to_unipoly_last(h: &Polynomial) -> Result<UniPoly> {
    let n = h.nvars();
    let deg = h.max_exponent(n - 1) as usize;
    let mut coeffs = vec![Rat::from_integer(0.into()); deg + 1];
    for (m, c) in &h.terms {
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 && i != n - 1 {
                return Err(EngineError::Other("value eliminant not univariate".into()));
            }
        }
        coeffs[m.0[n - 1] as usize] = c
            .as_rat()
            .ok_or_else(|| EngineError::Other("eliminant coefficient not rational".into()))?;
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Determinant of the 3x3 Hessian of the Laurent polynomial at the point.
fn hessian_nondegenerate(
    f: &Polynomial,
    point: &[Scalar],
    field: &FieldDescriptor,
) -> Result<bool> {
    let fp = f.promote(field)?;
    let mut h = vec![vec![field.zero(); 3]; 3];
    for i in 0..3 {
        let di = fp.derivative(i);
        for j in i..3 {
            let dij = di.derivative(j);
            let v = eval_laurent(&dij, point)?;
            h[i][j] = v.clone();
            h[j][i] = v;
        }
    }
    let det = h[0][0]
        .mul(&h[1][1].mul(&h[2][2]).sub(&h[1][2].mul(&h[2][1])))
        .sub(&h[0][1].mul(&h[1][0].mul(&h[2][2]).sub(&h[1][2].mul(&h[2][0]))))
        .add(&h[0][2].mul(&h[1][0].mul(&h[2][1]).sub(&h[1][1].mul(&h[2][0]))));
    Ok(!det.is_zero())
}

/// Evaluate a Laurent polynomial at a point with invertible coordinates.
pub fn eval_laurent(f: &Polynomial, point: &[Scalar]) -> Result<Scalar> {
    let field = &f.field;
    let mut acc = field.zero();
    let inverses: Result<Vec<Scalar>> = point.iter().map(|c| c.inv()).collect();
    let inverses = inverses?;
    for (m, c) in &f.terms {
        let mut v = c.clone();
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                v = v.mul(&point[i].pow(e as u64));
            } else if e < 0 {
                v = v.mul(&inverses[i].pow((-e) as u64));
            }
        }
        acc = acc.add(&v);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::poly::vars;

    #[test]
    fn p3_model_four_points() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let f = parse_polynomial("x+y+z+1/(x*y*z)", &vs, &q).unwrap();
        let rep = torus_critical_points(&f, Budget::default()).unwrap();
        // values 4 alpha with alpha^4 = 1: minimal polynomials s-4, s+4, s^2+16
        assert_eq!(rep.total_count(), 4);
        assert!(rep.all_nondegenerate());
        assert_eq!(rep.orbits.len(), 3);
    }

    #[test]
    fn quartic_threefold_model() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let f = parse_polynomial("(x+y+z+1)^4/(x*y*z)", &vs, &q).unwrap();
        let rep = torus_critical_points(&f, Budget::default()).unwrap();
        assert_eq!(rep.total_count(), 1);
        assert!(rep.all_nondegenerate());
        // the single critical value is rational (256)
        assert_eq!(
            rep.orbits[0].value.as_rational(),
            Some(crate::algebra::unipoly::rat_int(256))
        );
    }

    #[test]
    fn arity_contract() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x"]);
        let f = parse_polynomial("x+1/x", &vs, &q).unwrap();
        assert!(torus_critical_points(&f, Budget::default()).is_err());
    }
}
