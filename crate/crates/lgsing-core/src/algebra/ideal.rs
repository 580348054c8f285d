//! Ideal operations built on the Groebner kernel: elimination, saturation
//! (Rabinowitsch), pairwise intersection (t-trick), and saturation by the
//! maximal ideal of a known point.

use super::field::FieldDescriptor;
use super::groebner::{groebner_basis, quotient_dimension, Budget};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Polynomial, VarSet};
use crate::error::Result;
use std::sync::Arc;

/// New context with one auxiliary variable in front; shifts all exponents.
fn prepend_var(p: &Polynomial, newvars: &VarSet) -> Polynomial {
    let mapping: Vec<usize> = (0..p.nvars()).map(|i| i + 1).collect();
    p.map_vars(newvars, &mapping)
}

fn drop_first_var(p: &Polynomial, oldvars: &VarSet) -> Polynomial {
    let newvars: VarSet = Arc::new(oldvars[1..].to_vec());
    let mut out = Polynomial::zero(&p.field, &newvars);
    for (m, c) in &p.terms {
        debug_assert_eq!(m.0[0], 0);
        out.terms.insert(Monomial(m.0[1..].to_vec()), c.clone());
    }
    out
}

/// Elements of a Groebner basis not involving the first `k` variables,
/// computed with a block elimination order. Returns them in the reduced
/// context with those variables removed.
pub fn eliminate(gens: &[Polynomial], k: usize, budget: Budget) -> Result<Vec<Polynomial>> {
    if gens.is_empty() {
        return Ok(vec![]);
    }
    let gb = groebner_basis(gens, MonomialOrder::Block(k), budget)?;
    let vars = gens[0].vars.clone();
    let newvars: VarSet = Arc::new(vars[k..].to_vec());
    let mut out = Vec::new();
    for p in gb {
        if p.terms.keys().all(|m| m.0[..k].iter().all(|&e| e == 0)) {
            let mut q = Polynomial::zero(&p.field, &newvars);
            for (m, c) in &p.terms {
                q.terms.insert(Monomial(m.0[k..].to_vec()), c.clone());
            }
            out.push(q);
        }
    }
    Ok(out)
}

/// Saturation I : h^infty via the Rabinowitsch trick.
pub fn saturate(gens: &[Polynomial], h: &Polynomial, budget: Budget) -> Result<Vec<Polynomial>> {
    if gens.is_empty() {
        return Ok(vec![]);
    }
    let field = gens[0].field.clone();
    let vars = gens[0].vars.clone();
    let mut newnames = vec!["w_sat".to_string()];
    newnames.extend(vars.iter().cloned());
    let newvars: VarSet = Arc::new(newnames);
    let mut ext: Vec<Polynomial> = gens.iter().map(|p| prepend_var(p, &newvars)).collect();
    let w = Polynomial::var(&field, &newvars, 0);
    let hh = prepend_var(h, &newvars);
    ext.push(w.mul(&hh).sub(&Polynomial::one(&field, &newvars)));
    let gb = groebner_basis(&ext, MonomialOrder::Block(1), budget)?;
    let mut out = Vec::new();
    for p in gb {
        if p.terms.keys().all(|m| m.0[0] == 0) {
            out.push(drop_first_var(&p, &newvars));
        }
    }
    Ok(out)
}

/// Ideal intersection via the t-trick: (t*I + (1-t)*J) ∩ k[x].
pub fn intersect(a: &[Polynomial], b: &[Polynomial], budget: Budget) -> Result<Vec<Polynomial>> {
    if a.is_empty() {
        return Ok(b.to_vec());
    }
    if b.is_empty() {
        return Ok(a.to_vec());
    }
    let field = a[0].field.clone();
    let vars = a[0].vars.clone();
    let mut newnames = vec!["t_int".to_string()];
    newnames.extend(vars.iter().cloned());
    let newvars: VarSet = Arc::new(newnames);
    let t = Polynomial::var(&field, &newvars, 0);
    let one_minus_t = Polynomial::one(&field, &newvars).sub(&t);
    let mut ext = Vec::new();
    for p in a {
        ext.push(t.mul(&prepend_var(p, &newvars)));
    }
    for p in b {
        ext.push(one_minus_t.mul(&prepend_var(p, &newvars)));
    }
    let gb = groebner_basis(&ext, MonomialOrder::Block(1), budget)?;
    let mut out = Vec::new();
    for p in gb {
        if p.terms.keys().all(|m| m.0[0] == 0) {
            out.push(drop_first_var(&p, &newvars));
        }
    }
    Ok(out)
}

/// Saturation by the ideal (k_1, ..., k_r) of a known component:
/// I : K^infty = ∩_i (I : k_i^infty).
pub fn saturate_by_ideal(
    gens: &[Polynomial],
    k: &[Polynomial],
    budget: Budget,
) -> Result<Vec<Polynomial>> {
    let mut acc: Option<Vec<Polynomial>> = None;
    for f in k {
        if f.is_zero() {
            continue;
        }
        let s = saturate(gens, f, budget)?;
        acc = Some(match acc {
            None => s,
            Some(prev) => intersect(&prev, &s, budget)?,
        });
    }
    Ok(acc.unwrap_or_else(|| gens.to_vec()))
}

/// Is the affine variety of the ideal zero-dimensional? (Assumes a field,
/// any characteristic-zero tower handled by the kernel.)
pub fn is_zero_dimensional(gens: &[Polynomial], budget: Budget) -> Result<Option<bool>> {
    let gb = groebner_basis(gens, MonomialOrder::GrevLex, budget)?;
    if gb.is_empty() {
        return Ok(Some(false)); // zero ideal
    }
    if gb.iter().any(|p| p.is_constant() && !p.is_zero()) {
        return Ok(None); // empty variety
    }
    Ok(Some(quotient_dimension(&gb, MonomialOrder::GrevLex).is_some()))
}

/// The monic generator of I ∩ k[last variable], if any.
pub fn univariate_eliminant(
    gens: &[Polynomial],
    budget: Budget,
) -> Result<Option<Polynomial>> {
    if gens.is_empty() {
        return Ok(None);
    }
    let n = gens[0].nvars();
    let elim = eliminate(gens, n - 1, budget)?;
    Ok(elim.into_iter().next())
}

#[macro_export]
macro_rules! polyvec {
    ($field:expr, $vars:expr, $($t:expr),*) => {
        vec![$($crate::algebra::parse::parse_polynomial($t, &$vars, &$field).unwrap()),*]
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::poly::vars;

    #[test]
    fn saturation_removes_component() {
        // I = (x*y) : x^infty = (y)
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y"]);
        let gens = vec![parse_polynomial("x*y", &vs, &q).unwrap()];
        let h = parse_polynomial("x", &vs, &q).unwrap();
        let s = saturate(&gens, &h, Budget::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0], parse_polynomial("y", &vs, &q).unwrap());
    }

    #[test]
    fn intersection_of_points() {
        // (x, y) ∩ (x-1, y) = (y, x^2-x)
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y"]);
        let a = vec![
            parse_polynomial("x", &vs, &q).unwrap(),
            parse_polynomial("y", &vs, &q).unwrap(),
        ];
        let b = vec![
            parse_polynomial("x-1", &vs, &q).unwrap(),
            parse_polynomial("y", &vs, &q).unwrap(),
        ];
        let i = intersect(&a, &b, Budget::default()).unwrap();
        let gb = groebner_basis(&i, MonomialOrder::Lex, Budget::default()).unwrap();
        assert_eq!(
            quotient_dimension(&gb, MonomialOrder::Lex),
            Some(2)
        );
    }

    #[test]
    fn saturate_by_point() {
        // V(x*z, y*z) = {z=0 plane} ∪ {x=y=0 line}; saturating by the ideal
        // of the plane's... saturate by (x, y) removes the line component
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let gens = vec![
            parse_polynomial("x*z", &vs, &q).unwrap(),
            parse_polynomial("y*z", &vs, &q).unwrap(),
        ];
        let k = vec![
            parse_polynomial("x", &vs, &q).unwrap(),
            parse_polynomial("y", &vs, &q).unwrap(),
        ];
        let s = saturate_by_ideal(&gens, &k, Budget::default()).unwrap();
        // result should be (z)
        assert!(s.iter().any(|p| *p == parse_polynomial("z", &vs, &q).unwrap()));
        assert!(s
            .iter()
            .all(|p| p.terms.keys().all(|m| m.0[0] == 0 && m.0[1] == 0)));
    }
}
