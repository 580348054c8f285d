//! Milnor number by truncated linear algebra: the dimension of
//! R/(Jacobian + m^D) stabilizes in D exactly at the Milnor number for an
//! isolated singularity. This is the classifier's independent cross-check,
//! so it deliberately shares no code with the splitting-lemma reduction.

use crate::algebra::field::Scalar;
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::Polynomial;
use crate::error::{EngineError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorResult {
    pub mu: usize,
    pub stabilization_degree: i64,
}

#[derive(Clone, Copy, Debug)]
pub struct MilnorOptions {
    pub degree_budget: i64,
}

impl Default for MilnorOptions {
    fn default() -> Self {
        MilnorOptions { degree_budget: 16 }
    }
}

fn monomials_below(n: usize, d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];
    fn rec(i: usize, rem: i64, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=rem {
            cur[i] = e as i32;
            rec(i + 1, rem - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d - 1, &mut cur, &mut out);
    out
}

/// dim of F[x]/(J + m^D) where J = Jacobian ideal of g.
fn truncated_dim(partials: &[Polynomial], n: usize, d: i64) -> Result<usize> {
    let cols = monomials_below(n, d);
    let colix: std::collections::HashMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for g in partials {
        if g.is_zero() {
            continue;
        }
        let ord = g.order().unwrap_or(0);
        for m in monomials_below(n, d - ord) {
            let prod = g.mul_term(&m, &g.field.one());
            let mut row: Vec<(usize, Scalar)> = Vec::new();
            for (mm, c) in &prod.terms {
                if mm.degree() < d {
                    row.push((colix[mm], c.clone()));
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    // sparse-ish Gaussian elimination over the field
    let ncols = cols.len();
    let mut pivots: Vec<Option<Vec<Scalar>>> = vec![None; ncols];
    let mut rank = 0usize;
    for row in rows {
        let mut dense = vec![partials[0].field.zero(); ncols];
        for (j, c) in row {
            dense[j] = dense[j].add(&c);
        }
        loop {
            let lead = dense.iter().position(|c| !c.is_zero());
            match lead {
                None => break,
                Some(j) => match &pivots[j] {
                    Some(p) => {
                        let factor = dense[j].div(&p[j])?;
                        for k in j..ncols {
                            if !p[k].is_zero() {
                                let v = factor.mul(&p[k]);
                                dense[k] = dense[k].sub(&v);
                            }
                        }
                    }
                    None => {
                        pivots[j] = Some(dense);
                        rank += 1;
                        break;
                    }
                },
            }
        }
    }
    Ok(ncols - rank)
}

/// Milnor number of g at the origin.
pub fn milnor_number(g: &Polynomial, opts: MilnorOptions) -> Result<MilnorResult> {
    let n = g.nvars();
    if g.terms.keys().any(|m| !m.is_polynomial()) {
        return Err(EngineError::Classification("Laurent input".into()));
    }
    let partials: Vec<Polynomial> = (0..n).map(|i| g.derivative(i)).collect();
    if partials.iter().all(|p| p.is_zero()) {
        return Err(EngineError::Classification("zero Jacobian".into()));
    }
    let mut prev: Option<usize> = None;
    for d in 2..=opts.degree_budget {
        let dim = truncated_dim(&partials, n, d)?;
        if let Some(p) = prev {
            if p == dim {
                return Ok(MilnorResult {
                    mu: dim,
                    stabilization_degree: d - 1,
                });
            }
        }
        prev = Some(dim);
    }
    Err(EngineError::DegreeBudget(
        "milnor dimension did not stabilize (non-isolated or budget)".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldDescriptor;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::poly::vars;

    fn mu(text: &str) -> usize {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let g = parse_polynomial(text, &vs, &q).unwrap();
        milnor_number(&g, MilnorOptions::default()).unwrap().mu
    }

    #[test]
    fn classic_values() {
        assert_eq!(mu("x^2+y^2+z^2"), 1);
        assert_eq!(mu("x^2+y^2+z^4"), 3);
        assert_eq!(mu("x^2+y^2*z+z^3"), 4);
        assert_eq!(mu("x^2+y^3+z^4"), 6);
        assert_eq!(mu("x^2+y^3+z^5"), 8);
    }

    #[test]
    fn deep_a_series() {
        assert_eq!(mu("x^2+y^2+z^8"), 7);
    }

    #[test]
    fn non_isolated_reported() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let g = parse_polynomial("x^2", &vs, &q).unwrap();
        assert!(milnor_number(&g, MilnorOptions::default()).is_err());
    }
}
