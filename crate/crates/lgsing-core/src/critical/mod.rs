//! Decomposition of the singular locus of a pencil over the lambda-line:
//! persistent point families (dominating the line), sporadic fiber points,
//! and non-isolated (central) fibers. The same machinery runs on blown-up
//! chart families when a resolution script asks for it.

pub mod profile;
pub mod torus;

use std::sync::Arc;

use num_traits::One;

use crate::algebra::algnum::AlgebraicNumber;
use crate::algebra::factor::factor_univariate_capped;
use crate::algebra::field::{BaseElem, FieldDescriptor, Scalar};
use crate::algebra::groebner::Budget;
use crate::algebra::ideal::{eliminate, is_zero_dimensional, saturate_by_ideal};
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::{Polynomial, VarSet};
use crate::algebra::solve::solve_zero_dimensional;
use crate::algebra::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};
use crate::pencil::{base_locus_member, ProjectivePoint, QuarticPencil};

/// A persistent singular point: singular in every fiber; coordinates over Q
/// or affine-linear in lambda.
#[derive(Clone, Debug)]
pub struct PersistentPoint {
    pub point: ProjectivePoint,
    pub on_base_locus: bool,
    pub moving: bool,
}

/// A sporadic fiber orbit: an irreducible lambda-value with the singular
/// points of that fiber away from the persistent set, coordinates in
/// Q(alpha) for alpha the class of lambda.
#[derive(Clone, Debug)]
pub struct SporadicOrbit {
    pub lambda0: AlgebraicNumber,
    /// points per conjugate fiber (usually one)
    pub points: Vec<ProjectivePoint>,
    pub on_base_locus: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub persistent: Vec<PersistentPoint>,
    pub sporadic: Vec<SporadicOrbit>,
    pub non_isolated: Vec<AlgebraicNumber>,
}

/// The lambda values of non-isolated fibers.
pub fn detect_central(dec: &Decomposition) -> Vec<AlgebraicNumber> {
    dec.non_isolated.clone()
}

fn chart_vars(pencil: &QuarticPencil, chart: usize) -> VarSet {
    let names: Vec<String> = (0..4)
        .filter(|&i| i != chart)
        .map(|i| pencil.n.vars[i].clone())
        .chain(std::iter::once("lambda".to_string()))
        .collect();
    Arc::new(names)
}

/// The four homogeneous partials of N - lambda D restricted to a chart, as
/// polynomials over Q in (3 chart vars, lambda).
fn chart_jacobian(pencil: &QuarticPencil, chart: usize) -> Result<Vec<Polynomial>> {
    let vs = chart_vars(pencil, chart);
    let q = FieldDescriptor::rationals();
    let mut out = Vec::new();
    for i in 0..4 {
        let ni = pencil.n.derivative(i);
        let di = pencil.d.derivative(i);
        // restrict to chart and remap
        let mut g = Polynomial::zero(&q, &vs);
        for (src, lam_deg, sign) in [(&ni, 0i32, 1i64), (&di, 1i32, -1i64)] {
            for (m, c) in &src.terms {
                let mut e = vec![0i32; 4];
                let mut k = 0;
                for j in 0..4 {
                    if j == chart {
                        continue;
                    }
                    e[k] = m.0[j];
                    k += 1;
                }
                e[3] = lam_deg;
                let coeff = if sign < 0 { c.neg() } else { c.clone() };
                add_term(&mut g, Monomial(e), coeff);
            }
        }
        if !g.is_zero() {
            out.push(g);
        }
    }
    Ok(out)
}

fn add_term(p: &mut Polynomial, m: Monomial, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
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

/// Convert a Q[u0,u1,u2,lambda] polynomial into a Q(lambda)[u0,u1,u2] one.
pub fn to_lambda_coeffs(p: &Polynomial) -> Polynomial {
    let ql = FieldDescriptor::rational_functions();
    let n = p.nvars() - 1;
    let vs: VarSet = Arc::new(p.vars[..n].to_vec());
    let mut out = Polynomial::zero(&ql, &vs);
    let lam = ql.lambda().expect("lambda");
    for (m, c) in &p.terms {
        let le = m.0[n] as u64;
        let coeff = c
            .promote(&ql)
            .expect("promote to Q(lambda)")
            .mul(&lam.pow(le));
        add_term(&mut out, Monomial(m.0[..n].to_vec()), coeff);
    }
    out
}

/// Substitute an algebraic (or rational) value for lambda: the result lives
/// over Q when deg = 1, else over Q(alpha) with alpha the class of lambda.
pub fn specialize_lambda_var(
    p: &Polynomial,
    value: &AlgebraicNumber,
) -> Result<(Polynomial, FieldDescriptor)> {
    let n = p.nvars() - 1;
    let vs: VarSet = Arc::new(p.vars[..n].to_vec());
    let field = if let Some(r) = value.as_rational() {
        let q = FieldDescriptor::rationals();
        let mut out = Polynomial::zero(&q, &vs);
        for (m, c) in &p.terms {
            let le = m.0[n] as u64;
            let rv = q.from_rat(r.clone()).pow(le);
            add_term(&mut out, Monomial(m.0[..n].to_vec()), c.mul(&rv));
        }
        return Ok((out, q));
    } else {
        FieldDescriptor::extension_of_q(&value.minpoly)?
    };
    let alpha = field.alpha()?;
    let mut out = Polynomial::zero(&field, &vs);
    for (m, c) in &p.terms {
        let le = m.0[n] as u64;
        let cv = c.promote(&field)?.mul(&alpha.pow(le));
        add_term(&mut out, Monomial(m.0[..n].to_vec()), cv);
    }
    Ok((out, field))
}

/// Reassemble a projective point from chart-affine coordinates.
fn projective_from_chart(
    chart: usize,
    coords: &[Scalar],
    field: &FieldDescriptor,
) -> Result<ProjectivePoint> {
    let one = field.one();
    let mut full: Vec<Scalar> = Vec::with_capacity(4);
    let mut k = 0;
    for i in 0..4 {
        if i == chart {
            full.push(one.clone());
        } else {
            full.push(coords[k].clone());
            k += 1;
        }
    }
    ProjectivePoint::new(field, [full[0].clone(), full[1].clone(), full[2].clone(), full[3].clone()])
}

/// Check the supported coordinate shape: on a primitive representative all
/// coordinates must be polynomials in lambda of degree <= 1.
fn check_affine_linear(p: &ProjectivePoint) -> Result<()> {
    if !p.field.has_lambda() {
        return Ok(());
    }
    // common denominator
    let mut den = UniPoly::one();
    for c in &p.coords {
        if let BaseElem::Fun(f) = &c.repr[0] {
            let g = den.gcd(&f.den);
            den = den.mul(&f.den.div_exact(&g).expect("gcd divides"));
        }
    }
    for c in &p.coords {
        if let BaseElem::Fun(f) = &c.repr[0] {
            let num = f.num.mul(&den.div_exact(&f.den).expect("lcm"));
            if num.degree() > 1 {
                return Err(EngineError::UnsupportedSolution(format!(
                    "persistent coordinate {} not affine-linear in lambda",
                    f
                )));
            }
        }
    }
    if den.degree() > 1 {
        return Err(EngineError::UnsupportedSolution(
            "persistent point denominator beyond linear".into(),
        ));
    }
    Ok(())
}

/// If every coordinate is lambda-free, demote the point to Q.
fn demote_if_constant(p: &ProjectivePoint) -> ProjectivePoint {
    if !p.field.has_lambda() {
        return p.clone();
    }
    let q = FieldDescriptor::rationals();
    let mut coords = Vec::new();
    for c in &p.coords {
        match c.as_rat() {
            Some(r) => coords.push(q.from_rat(r)),
            None => return p.clone(),
        }
    }
    ProjectivePoint::new(&q, [coords[0].clone(), coords[1].clone(), coords[2].clone(), coords[3].clone()])
        .expect("nonzero point")
}

/// Persistent singular points of the pencil (all charts, deduplicated).
pub fn persistent_points(pencil: &QuarticPencil, budget: Budget) -> Result<Vec<PersistentPoint>> {
    let ql = FieldDescriptor::rational_functions();
    let mut found: Vec<ProjectivePoint> = Vec::new();
    for chart in 0..4 {
        let jac_q = chart_jacobian(pencil, chart)?;
        let jac_l: Vec<Polynomial> = jac_q.iter().map(to_lambda_coeffs).collect();
        let live: Vec<Polynomial> = jac_l.into_iter().filter(|p| !p.is_zero()).collect();
        if live.is_empty() {
            return Err(EngineError::PositiveDimensional(
                "chart Jacobian vanishes identically".into(),
            ));
        }
        // empty variety fast path: groebner == [1]
        let sols = match solve_zero_dimensional(&live, budget) {
            Ok(s) => s,
            Err(EngineError::PositiveDimensional(m)) => {
                return Err(EngineError::PositiveDimensional(format!(
                    "persistent component in chart {} not a point family: {}",
                    pencil.n.vars[chart], m
                )))
            }
            Err(e) => return Err(e),
        };
        for sol in sols {
            let p = projective_from_chart(chart, &sol, &ql)?;
            check_affine_linear(&p)?;
            let p = demote_if_constant(&p);
            if !found.iter().any(|q| same_point(q, &p)) {
                found.push(p);
            }
        }
    }
    found.sort_by_key(|p| p.display());
    let mut out = Vec::new();
    for p in found {
        let on_base = base_locus_member(pencil, &p)?;
        let moving = p.field.has_lambda();
        out.push(PersistentPoint {
            point: p,
            on_base_locus: on_base,
            moving,
        });
    }
    Ok(out)
}

pub fn same_point(a: &ProjectivePoint, b: &ProjectivePoint) -> bool {
    if a.field == b.field {
        return a.coords == b.coords;
    }
    // compare across Q / Q(lambda) by promotion
    let ql = FieldDescriptor::rational_functions();
    match (a.promote(&ql), b.promote(&ql)) {
        (Ok(x), Ok(y)) => x.coords == y.coords,
        _ => false,
    }
}

/// The fiber analysis of one candidate lambda value in one chart.
enum FiberVerdict {
    Nothing,
    NonIsolated,
    Points(Vec<ProjectivePoint>, FieldDescriptor),
}

fn analyze_fiber(
    chart: usize,
    j_sat: &[Polynomial],
    lambda0: &AlgebraicNumber,
    persistent: &[PersistentPoint],
    budget: Budget,
) -> Result<FiberVerdict> {
    let mut fiber: Vec<Polynomial> = Vec::new();
    let mut field = FieldDescriptor::rationals();
    for p in j_sat {
        let (q, f) = specialize_lambda_var(p, lambda0)?;
        field = f;
        if !q.is_zero() {
            fiber.push(q);
        }
    }
    if fiber.is_empty() {
        return Ok(FiberVerdict::NonIsolated);
    }
    match is_zero_dimensional(&fiber, budget)? {
        None => Ok(FiberVerdict::Nothing),
        Some(false) => Ok(FiberVerdict::NonIsolated),
        Some(true) => {
            let sols = solve_zero_dimensional(&fiber, budget)?;
            let mut pts = Vec::new();
            for sol in sols {
                let p = projective_from_chart(chart, &sol, &field)?;
                // drop collision artifacts: points equal to a persistent
                // point's position at lambda0
                if persistent_position_at(persistent, lambda0, &p)? {
                    continue;
                }
                pts.push(p);
            }
            if pts.is_empty() {
                Ok(FiberVerdict::Nothing)
            } else {
                Ok(FiberVerdict::Points(pts, field))
            }
        }
    }
}

/// Is `p` (over Q(alpha) for alpha = class of lambda0) the specialization of
/// some persistent point at lambda0?
fn persistent_position_at(
    persistent: &[PersistentPoint],
    lambda0: &AlgebraicNumber,
    p: &ProjectivePoint,
) -> Result<bool> {
    for pp in persistent {
        let spec = specialize_point(&pp.point, lambda0)?;
        if let Some(sp) = spec {
            if sp.field == p.field && sp.coords == p.coords {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Specialize a (possibly moving) point at a lambda value, into the fiber
/// field; None if a denominator vanishes there.
pub fn specialize_point(
    p: &ProjectivePoint,
    lambda0: &AlgebraicNumber,
) -> Result<Option<ProjectivePoint>> {
    let target = if let Some(_r) = lambda0.as_rational() {
        FieldDescriptor::rationals()
    } else {
        FieldDescriptor::extension_of_q(&lambda0.minpoly)?
    };
    if !p.field.has_lambda() {
        return Ok(Some(p.promote(&target)?));
    }
    let mut coords = Vec::new();
    for c in &p.coords {
        match &c.repr[0] {
            BaseElem::Rat(r) => coords.push(target.from_rat(r.clone())),
            BaseElem::Fun(f) => {
                let v = match lambda0.as_rational() {
                    Some(r) => {
                        let d = f.den.eval(&r);
                        if d == Rat::one() - Rat::one() {
                            return Ok(None);
                        }
                        target.from_rat(f.num.eval(&r) / d)
                    }
                    None => {
                        let alpha = target.alpha()?;
                        let num = eval_unipoly(&f.num, &alpha, &target);
                        let den = eval_unipoly(&f.den, &alpha, &target);
                        if den.is_zero() {
                            return Ok(None);
                        }
                        num.div(&den)?
                    }
                };
                coords.push(v);
            }
        }
    }
    if coords.iter().all(|c| c.is_zero()) {
        return Ok(None);
    }
    Ok(Some(ProjectivePoint::new(
        &target,
        [coords[0].clone(), coords[1].clone(), coords[2].clone(), coords[3].clone()],
    )?))
}

pub fn eval_unipoly(p: &UniPoly, x: &Scalar, field: &FieldDescriptor) -> Scalar {
    let mut acc = field.zero();
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(x).add(&field.from_rat(c.clone()));
    }
    acc
}

/// Full critical decomposition of a pencil.
pub fn critical_decomposition(pencil: &QuarticPencil, budget: Budget) -> Result<Decomposition> {
    let persistent = persistent_points(pencil, budget)?;
    let mut sporadic: Vec<SporadicOrbit> = Vec::new();
    let mut non_isolated: Vec<AlgebraicNumber> = Vec::new();
    for chart in 0..4 {
        let jac = chart_jacobian(pencil, chart)?;
        // saturate away each persistent point visible in this chart
        let mut j_sat: Vec<Polynomial> = jac.clone();
        for pp in &persistent {
            if pp.point.coords[chart].is_zero() {
                continue;
            }
            let k = point_component_ideal(&pp.point, chart, &jac[0].vars)?;
            j_sat = saturate_by_ideal(&j_sat, &k, budget)?;
            if j_sat.iter().any(|p| p.is_constant() && !p.is_zero()) {
                break;
            }
        }
        if j_sat.iter().any(|p| p.is_constant() && !p.is_zero()) {
            continue; // chart exhausted by persistent points
        }
        // eliminate the three chart variables
        let elim = eliminate(&j_sat, 3, budget)?;
        let h = match elim.first() {
            None => {
                return Err(EngineError::Other(format!(
                    "saturated critical ideal still dominates the lambda-line in chart {}",
                    pencil.n.vars[chart]
                )))
            }
            Some(p) => p.clone(),
        };
        if h.is_constant() {
            continue;
        }
        // factor h(lambda) over Q
        let hu = poly_to_unipoly(&h)?;
        let (_, factors) = factor_univariate_capped(&hu, 24.max(hu.degree()))?;
        for (m, _) in factors {
            let lambda0 = AlgebraicNumber::new(m.clone())?;
            match analyze_fiber(chart, &j_sat, &lambda0, &persistent, budget)? {
                FiberVerdict::Nothing => {}
                FiberVerdict::NonIsolated => {
                    if !non_isolated.iter().any(|a| a.minpoly == lambda0.minpoly) {
                        non_isolated.push(lambda0.clone());
                    }
                }
                FiberVerdict::Points(pts, _field) => {
                    merge_sporadic(&mut sporadic, lambda0, pts, pencil)?;
                }
            }
        }
    }
    sporadic.sort_by_key(|s| s.lambda0.minpoly_string());
    non_isolated.sort_by_key(|a| a.minpoly_string());
    Ok(Decomposition {
        persistent,
        sporadic,
        non_isolated,
    })
}

fn merge_sporadic(
    sporadic: &mut Vec<SporadicOrbit>,
    lambda0: AlgebraicNumber,
    pts: Vec<ProjectivePoint>,
    pencil: &QuarticPencil,
) -> Result<()> {
    let slot = sporadic
        .iter_mut()
        .find(|s| s.lambda0.minpoly == lambda0.minpoly);
    match slot {
        Some(orbit) => {
            for p in pts {
                if !orbit
                    .points
                    .iter()
                    .any(|q| q.field == p.field && q.coords == p.coords)
                {
                    let ob = base_locus_member(pencil, &p)?;
                    orbit.points.push(p);
                    orbit.on_base_locus.push(ob);
                }
            }
        }
        None => {
            let mut on_base = Vec::new();
            for p in &pts {
                on_base.push(base_locus_member(pencil, p)?);
            }
            sporadic.push(SporadicOrbit {
                lambda0,
                points: pts,
                on_base_locus: on_base,
            });
        }
    }
    Ok(())
}

/// The ideal of a persistent point's graph in chart coordinates, with
/// lambda-denominators cleared: generators den_i * u_i - num_i.
fn point_component_ideal(
    p: &ProjectivePoint,
    chart: usize,
    vars: &VarSet,
) -> Result<Vec<Polynomial>> {
    let q = FieldDescriptor::rationals();
    let inv = p.coords[chart].inv()?;
    let mut gens = Vec::new();
    let mut k = 0usize;
    for i in 0..4 {
        if i == chart {
            continue;
        }
        let a = p.coords[i].mul(&inv);
        let (num, den) = match &a.repr[0] {
            BaseElem::Rat(r) => (
                UniPoly::constant(r.clone()),
                UniPoly::one(),
            ),
            BaseElem::Fun(f) => (f.num.clone(), f.den.clone()),
        };
        // den(lambda) * u_k - num(lambda)
        let mut g = Polynomial::zero(&q, vars);
        for (e, c) in den.coeffs.iter().enumerate() {
            if c == &(Rat::one() - Rat::one()) {
                continue;
            }
            let mut mon = vec![0i32; vars.len()];
            mon[k] = 1;
            mon[3] = e as i32;
            add_term(&mut g, Monomial(mon), q.from_rat(c.clone()));
        }
        for (e, c) in num.coeffs.iter().enumerate() {
            let mut mon = vec![0i32; vars.len()];
            mon[3] = e as i32;
            add_term(&mut g, Monomial(mon), q.from_rat(-c.clone()));
        }
        if !g.is_zero() {
            gens.push(g);
        }
        k += 1;
    }
    Ok(gens)
}

fn poly_to_unipoly(p: &Polynomial) -> Result<UniPoly> {
    // p univariate in its last (only) variable over Q
    let n = p.nvars();
    let deg = p.max_exponent(n - 1) as usize;
    let mut coeffs = vec![Rat::one() - Rat::one(); deg + 1];
    for (m, c) in &p.terms {
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 && i != n - 1 {
                return Err(EngineError::Other("eliminant not univariate".into()));
            }
        }
        coeffs[m.0[n - 1] as usize] = c
            .as_rat()
            .ok_or_else(|| EngineError::Other("eliminant coefficient not rational".into()))?;
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Verify that a reported point satisfies all four partials (soundness).
pub fn verify_singular(pencil: &QuarticPencil, p: &ProjectivePoint, lambda0: Option<&AlgebraicNumber>) -> Result<bool> {
    match lambda0 {
        None => {
            // identically in lambda: over Q(lambda)
            let ql = FieldDescriptor::rational_functions();
            let pp = p.promote(&ql)?;
            for i in 0..4 {
                let ni = pencil.n.derivative(i).promote(&ql)?;
                let di = pencil.d.derivative(i).promote(&ql)?;
                let v = ni
                    .eval(&pp.coords)
                    .sub(&ql.lambda()?.mul(&di.eval(&pp.coords)));
                if !v.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Some(l0) => {
            let field = p.field.clone();
            let lam = if let Some(r) = l0.as_rational() {
                field.from_rat(r)
            } else {
                field.alpha()?
            };
            for i in 0..4 {
                let ni = pencil.n.derivative(i).promote(&field)?;
                let di = pencil.d.derivative(i).promote(&field)?;
                let v = ni.eval(&p.coords).sub(&lam.mul(&di.eval(&p.coords)));
                if !v.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
