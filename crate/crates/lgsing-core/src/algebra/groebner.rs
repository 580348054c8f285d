//! Buchberger's algorithm with normal pair selection, the product and chain
//! criteria, and content-normalized intermediates. The systems handled here
//! are small (pencil Jacobians: 4 generators, degree <= 3, 4-6 variables),
//! so a careful classical implementation is enough.

use std::collections::BTreeMap;

use super::field::{FieldDescriptor, Scalar};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Polynomial, VarSet};
use crate::error::{EngineError, Result};

/// Step budget shared by one Groebner computation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { steps: 2_000_000 }
    }
}

pub struct BudgetCounter {
    remaining: u64,
    label: &'static str,
}

impl BudgetCounter {
    pub fn new(budget: Budget, label: &'static str) -> Self {
        BudgetCounter {
            remaining: budget.steps,
            label,
        }
    }
    pub fn spend(&mut self, n: u64) -> Result<()> {
        if self.remaining < n {
            return Err(EngineError::BudgetExceeded(self.label.into()));
        }
        self.remaining -= n;
        Ok(())
    }
}

/// A polynomial in "GB form": terms sorted descending by the active order.
#[derive(Clone, Debug)]
struct OrdPoly {
    terms: Vec<(Monomial, Scalar)>,
}

impl OrdPoly {
    fn from_poly(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, Scalar)> =
            p.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        OrdPoly { terms }
    }
    fn to_poly(&self, field: &FieldDescriptor, vars: &VarSet) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.clone());
        }
        Polynomial {
            field: field.clone(),
            vars: vars.clone(),
            terms,
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn lt(&self) -> &(Monomial, Scalar) {
        &self.terms[0]
    }
}

struct GbContext {
    field: FieldDescriptor,
    vars: VarSet,
    order: MonomialOrder,
}

impl GbContext {
    /// r - (c/lc(g)) * m * g  where r's term at m*lm(g) gets cancelled
    fn cancel(
        &self,
        r: &OrdPoly,
        at: usize,
        g: &OrdPoly,
    ) -> Result<OrdPoly> {
        let (rm, rc) = &r.terms[at];
        let (gm, gc) = g.lt();
        let shift = rm.checked_div(gm).expect("cancel: not divisible");
        let factor = rc.div(gc)?;
        // merge r - factor * shift * g
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(r.terms.len() + g.terms.len());
        let mut i = 0usize;
        let mut j = 0usize;
        while i < r.terms.len() || j < g.terms.len() {
            if j >= g.terms.len() {
                out.push(r.terms[i].clone());
                i += 1;
                continue;
            }
            let gterm = (g.terms[j].0.mul(&shift), g.terms[j].1.mul(&factor));
            if i >= r.terms.len() {
                out.push((gterm.0, gterm.1.neg()));
                j += 1;
                continue;
            }
            match self.order.cmp(&r.terms[i].0, &gterm.0) {
                std::cmp::Ordering::Greater => {
                    out.push(r.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((gterm.0, gterm.1.neg()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = r.terms[i].1.sub(&gterm.1);
                    if !c.is_zero() {
                        out.push((r.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(OrdPoly { terms: out })
    }

    /// Full normal form of `p` modulo `basis`.
    fn normal_form(
        &self,
        p: &OrdPoly,
        basis: &[OrdPoly],
        counter: &mut BudgetCounter,
    ) -> Result<OrdPoly> {
        let mut r = p.clone();
        let mut frontier = 0usize; // terms before this index are fully reduced
        'outer: while frontier < r.terms.len() {
            counter.spend(1)?;
            let m = &r.terms[frontier].0;
            for g in basis {
                if g.is_zero() {
                    continue;
                }
                if m.checked_div(&g.lt().0).is_some() {
                    r = self.cancel(&r, frontier, g)?;
                    continue 'outer;
                }
            }
            frontier += 1;
        }
        Ok(r)
    }

    fn content_normalize(&self, p: Polynomial) -> Polynomial {
        if self.field.has_lambda() {
            p.lambda_content_normalize()
        } else {
            p.rat_content_normalize()
        }
    }
}

/// Reduced Groebner basis of the given generators.
pub fn groebner_basis(
    generators: &[Polynomial],
    order: MonomialOrder,
    budget: Budget,
) -> Result<Vec<Polynomial>> {
    let nonzero: Vec<&Polynomial> = generators.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(vec![]);
    }
    let field = nonzero[0].field.clone();
    let vars = nonzero[0].vars.clone();
    for p in &nonzero {
        if p.field != field || p.vars != vars {
            return Err(EngineError::Other(
                "groebner generators in mixed contexts".into(),
            ));
        }
        if p.terms.keys().any(|m| !m.is_polynomial()) {
            return Err(EngineError::Other(
                "groebner input must be polynomial (no Laurent terms)".into(),
            ));
        }
    }
    let ctx = GbContext {
        field: field.clone(),
        vars: vars.clone(),
        order,
    };
    let mut counter = BudgetCounter::new(budget, "groebner");

    let mut basis: Vec<OrdPoly> = Vec::new();
    for p in &nonzero {
        let q = ctx.content_normalize((*p).clone());
        basis.push(OrdPoly::from_poly(&q, order));
    }

    // pair queue, normal strategy: smallest lcm first
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }

    while !pairs.is_empty() {
        counter.spend(1)?;
        // select pair with minimal lcm in the order (normal strategy)
        let mut best = 0usize;
        let mut best_lcm = basis[pairs[0].0].lt().0.lcm(&basis[pairs[0].1].lt().0);
        for (k, (i, j)) in pairs.iter().enumerate().skip(1) {
            let l = basis[*i].lt().0.lcm(&basis[*j].lt().0);
            if order.cmp(&l, &best_lcm) == std::cmp::Ordering::Less {
                best_lcm = l;
                best = k;
            }
        }
        let (i, j) = pairs.swap_remove(best);
        let (fi, fj) = (&basis[i], &basis[j]);
        let (mi, _) = fi.lt();
        let (mj, _) = fj.lt();
        // product criterion
        if mi.coprime(mj) {
            continue;
        }
        // chain criterion: exists k with lt(k) | lcm(i,j) and both (i,k),(j,k) done
        let l = mi.lcm(mj);
        let mut skip = false;
        for (k, fk) in basis.iter().enumerate() {
            if k == i || k == j || fk.is_zero() {
                continue;
            }
            if l.checked_div(&fk.lt().0).is_some()
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
            {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }
        // s-polynomial
        let spoly = {
            let (mi, ci) = fi.lt();
            let (mj, cj) = fj.lt();
            let l = mi.lcm(mj);
            let pi = fi
                .to_poly(&field, &vars)
                .mul_term(&l.checked_div(mi).unwrap(), &ci.inv()?);
            let pj = fj
                .to_poly(&field, &vars)
                .mul_term(&l.checked_div(mj).unwrap(), &cj.inv()?);
            pi.sub(&pj)
        };
        let s = OrdPoly::from_poly(&spoly, order);
        let r = ctx.normal_form(&s, &basis, &mut counter)?;
        if r.is_zero() {
            continue;
        }
        let rp = ctx.content_normalize(r.to_poly(&field, &vars));
        let newidx = basis.len();
        basis.push(OrdPoly::from_poly(&rp, order));
        for k in 0..newidx {
            if !basis[k].is_zero() {
                pairs.push((k, newidx));
            }
        }
    }

    // autoreduce: minimalize then fully reduce each element
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if basis[i].is_zero() {
            keep[i] = false;
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] || basis[j].is_zero() {
                continue;
            }
            if basis[i].lt().0.checked_div(&basis[j].lt().0).is_some()
                && !(basis[i].lt().0 == basis[j].lt().0 && j > i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<OrdPoly> = basis
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(p, _)| p.clone())
        .collect();
    let mut reduced: Vec<Polynomial> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<OrdPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = ctx.normal_form(&minimal[i], &others, &mut counter)?;
        if !r.is_zero() {
            let mut rp = ctx.content_normalize(r.to_poly(&field, &vars));
            // monic leading coefficient for extension fields where content
            // normalization is not available
            if field.has_extension() {
                let lead = OrdPoly::from_poly(&rp, order).lt().1.clone();
                rp = rp.mul_scalar(&lead.inv()?);
            }
            reduced.push(rp);
        }
    }
    // deterministic output order: by leading monomial, descending
    reduced.sort_by(|a, b| {
        let la = OrdPoly::from_poly(a, order).lt().0.clone();
        let lb = OrdPoly::from_poly(b, order).lt().0.clone();
        order.cmp(&lb, &la)
    });
    Ok(reduced)
}

/// Normal form of `p` with respect to an (arbitrary) polynomial set.
pub fn reduce(
    p: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
    budget: Budget,
) -> Result<Polynomial> {
    if basis.is_empty() || p.is_zero() {
        return Ok(p.clone());
    }
    let ctx = GbContext {
        field: p.field.clone(),
        vars: p.vars.clone(),
        order,
    };
    let mut counter = BudgetCounter::new(budget, "reduce");
    let ob: Vec<OrdPoly> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrdPoly::from_poly(g, order))
        .collect();
    let r = ctx.normal_form(&OrdPoly::from_poly(p, order), &ob, &mut counter)?;
    Ok(r.to_poly(&p.field, &p.vars))
}

/// Number of standard monomials of a Groebner basis, or None for infinite.
pub fn quotient_dimension(gb: &[Polynomial], order: MonomialOrder) -> Option<usize> {
    if gb.is_empty() {
        return None; // zero ideal: infinite (0 variables handled upstream)
    }
    if gb.iter().any(|p| p.is_constant() && !p.is_zero()) {
        return Some(0);
    }
    let n = gb[0].nvars();
    let leads: Vec<Monomial> = gb
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| OrdPoly::from_poly(p, order).lt().0.clone())
        .collect();
    // finiteness: every variable needs a pure power among leading terms
    let mut caps: Vec<Option<usize>> = vec![None; n];
    for m in &leads {
        let nz: Vec<usize> = (0..n).filter(|&i| m.0[i] > 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            let e = m.0[i] as usize;
            caps[i] = Some(caps[i].map_or(e, |c: usize| c.min(e)));
        }
    }
    if caps.iter().any(|c| c.is_none()) {
        return None;
    }
    let caps: Vec<usize> = caps.into_iter().map(|c| c.unwrap()).collect();
    // enumerate monomials below the staircase
    let mut count = 0usize;
    let mut exps = vec![0usize; n];
    loop {
        let m = Monomial(exps.iter().map(|&e| e as i32).collect());
        if !leads.iter().any(|l| m.checked_div(l).is_some()) {
            count += 1;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            exps[i] += 1;
            if exps[i] < caps[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::poly::vars;

    fn gb_of(texts: &[&str], names: &[&str], order: MonomialOrder) -> Vec<Polynomial> {
        let q = FieldDescriptor::rationals();
        let vs = vars(names);
        let gens: Vec<Polynomial> = texts
            .iter()
            .map(|t| parse_polynomial(t, &vs, &q).unwrap())
            .collect();
        groebner_basis(&gens, order, Budget::default()).unwrap()
    }

    #[test]
    fn textbook_lex() {
        let gb = gb_of(&["x^2-1", "x*y-y"], &["x", "y"], MonomialOrder::Lex);
        // generators reduce to zero
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y"]);
        for t in ["x^2-1", "x*y-y"] {
            let p = parse_polynomial(t, &vs, &q).unwrap();
            let r = reduce(&p, &gb, MonomialOrder::Lex, Budget::default()).unwrap();
            assert!(r.is_zero(), "{} did not reduce to zero", t);
        }
    }

    #[test]
    fn maximal_ideal() {
        let gb = gb_of(&["x", "y", "z"], &["x", "y", "z"], MonomialOrder::GrevLex);
        assert_eq!(gb.len(), 3);
        assert_eq!(quotient_dimension(&gb, MonomialOrder::GrevLex), Some(1));
    }

    #[test]
    fn quotient_dims() {
        let gb = gb_of(&["x^2", "y", "z"], &["x", "y", "z"], MonomialOrder::GrevLex);
        assert_eq!(quotient_dimension(&gb, MonomialOrder::GrevLex), Some(2));
        let gb2 = gb_of(&["x*y"], &["x", "y"], MonomialOrder::GrevLex);
        assert_eq!(quotient_dimension(&gb2, MonomialOrder::GrevLex), None);
    }

    #[test]
    fn self_reduced() {
        let gb = gb_of(
            &["x^2+y^2+z^2-1", "x^2-y+z^2", "x-z"],
            &["x", "y", "z"],
            MonomialOrder::Lex,
        );
        // no leading term divides another element's any term
        for (i, g) in gb.iter().enumerate() {
            let lt = OrdPoly::from_poly(g, MonomialOrder::Lex).lt().0.clone();
            for (j, h) in gb.iter().enumerate() {
                if i == j {
                    continue;
                }
                for m in h.terms.keys() {
                    assert!(m.checked_div(&lt).is_none(), "basis not self-reduced");
                }
            }
        }
    }

    #[test]
    fn elimination_via_lex() {
        // x = t, y = t^2: eliminating t gives y - x^2
        let gb = gb_of(&["x-t", "y-t^2"], &["t", "x", "y"], MonomialOrder::Lex);
        let without_t: Vec<&Polynomial> = gb
            .iter()
            .filter(|p| p.terms.keys().all(|m| m.0[0] == 0))
            .collect();
        assert_eq!(without_t.len(), 1);
        assert_eq!(without_t[0].num_terms(), 2);
    }

    #[test]
    fn budget_exceeded_reported() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let gens: Vec<Polynomial> = ["x^3*y^2-z^5", "x*z^2-y^3", "y^5-x^2*z"]
            .iter()
            .map(|t| parse_polynomial(t, &vs, &q).unwrap())
            .collect();
        let r = groebner_basis(&gens, MonomialOrder::Lex, Budget { steps: 5 });
        assert!(matches!(r, Err(EngineError::BudgetExceeded(_))));
    }
}
