//! Blow-ups of chart families along rational points and lines, with exact
//! strict transforms. Centers are lambda-independent and linear, so the
//! transform is substitution followed by exact division by the exceptional
//! coordinate.

use num_traits::One;

use crate::algebra::field::{FieldDescriptor, Scalar};
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::Polynomial;
use crate::algebra::unipoly::Rat;
use crate::error::{EngineError, Result};

use super::{BlowUpStep, ChartFamily, LinearCenter, ProjectivePoint};

/// Divide by the largest power of variable `v` dividing every term, but at
/// most per-lambda-coefficient: the multiplicity is computed over the whole
/// family (min across terms). Returns (quotient, multiplicity).
fn divide_exceptional(g: &Polynomial, v: usize) -> (Polynomial, i64) {
    let k = g.terms.keys().map(|m| m.0[v]).min().unwrap_or(0) as i64;
    if k <= 0 {
        return (g.clone(), 0);
    }
    let mut out = Polynomial::zero(&g.field, &g.vars);
    for (m, c) in &g.terms {
        let mut e = m.clone();
        e.0[v] -= k as i32;
        out.terms.insert(e, c.clone());
    }
    (out, k)
}

/// Affine position of a projective Q-point in a pencil chart, or None when
/// the point is at the chart's infinity.
pub fn affine_position(p: &ProjectivePoint, chart: usize) -> Option<[Rat; 3]> {
    if p.coords[chart].is_zero() {
        return None;
    }
    let inv = p.coords[chart].inv().ok()?;
    let mut out = Vec::new();
    for i in 0..4 {
        if i == chart {
            continue;
        }
        out.push(p.coords[i].mul(&inv).as_rat()?);
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Blow up a chart family along a linear center. Returns one new chart per
/// standard blow-up chart (3 for a point, 2 for a line).
pub fn blow_up(family: &ChartFamily, center: &LinearCenter) -> Result<Vec<ChartFamily>> {
    match center {
        LinearCenter::Point(p) => blow_up_point(family, p),
        LinearCenter::Line(f1, f2) => blow_up_line(family, f1, f2),
    }
}

fn blow_up_point(family: &ChartFamily, p: &ProjectivePoint) -> Result<Vec<ChartFamily>> {
    if !family.history.is_empty() {
        return Err(EngineError::Other(
            "point blow-up centers are given in pencil coordinates; chart already blown up"
                .into(),
        ));
    }
    let pos = affine_position(p, family.chart).ok_or_else(|| {
        EngineError::CenterDisjoint(format!(
            "point {} not visible in chart {}",
            p.display(),
            family.g.vars[family.chart.min(2)]
        ))
    })?;
    let field = family.g.field.clone();
    let vs = family.vars.clone();
    // translate center to the origin
    let mut g0 = family.g.clone();
    let mut translate: Vec<Polynomial> = Vec::new();
    for i in 0..3 {
        let xi = Polynomial::var(&field, &vs, i);
        let shifted = xi.add(&Polynomial::constant(
            &field,
            &vs,
            field.from_rat(pos[i].clone()),
        ));
        translate.push(shifted.clone());
        g0 = g0.substitute(i, &shifted);
    }
    let mut out = Vec::new();
    for e_var in 0..3 {
        // chart e_var: x_{e_var} = e, x_j = e * x_j (j != e_var)
        let e = Polynomial::var(&field, &vs, e_var);
        let mut total = g0.clone();
        for j in 0..3 {
            if j == e_var {
                continue;
            }
            let xj = Polynomial::var(&field, &vs, j);
            total = total.substitute(j, &e.mul(&xj));
        }
        let (strict, mult) = divide_exceptional(&total, e_var);
        if mult == 0 {
            return Err(EngineError::CenterDisjoint(
                "center not on the family".into(),
            ));
        }
        if strict.is_zero() {
            return Err(EngineError::StrictTransformZero);
        }
        // blow-down map: previous coords in terms of new ones
        let mut down: Vec<Polynomial> = Vec::new();
        for i in 0..3 {
            let xi = Polynomial::var(&field, &vs, i);
            let expr = if i == e_var {
                xi
            } else {
                Polynomial::var(&field, &vs, e_var).mul(&xi)
            };
            // compose with the translation
            let shifted = expr.add(&Polynomial::constant(
                &field,
                &vs,
                field.from_rat(pos[i].clone()),
            ));
            down.push(shifted);
        }
        down.push(Polynomial::var(&field, &vs, 3)); // lambda fixed
        out.push(ChartFamily {
            chart: family.chart,
            vars: vs.clone(),
            g: strict,
            history: {
                let mut h = family.history.clone();
                h.push(BlowUpStep {
                    down_map: down,
                    exceptional: e_var,
                    multiplicity: mult,
                });
                h
            },
        });
    }
    Ok(out)
}

fn coeff_lin(f: &Polynomial, i: usize) -> Scalar {
    f.terms
        .get(&Monomial::var(f.nvars(), i))
        .cloned()
        .unwrap_or_else(|| f.field.zero())
}

/// Restrict a homogeneous linear form in pencil coordinates to a chart as an
/// affine-linear polynomial in the chart variables.
fn restrict_form(form: &Polynomial, chart: usize, family: &ChartFamily) -> Polynomial {
    let field = &family.g.field;
    let vs = &family.vars;
    let mut out = Polynomial::zero(field, vs);
    let mut k = 0usize;
    for i in 0..4 {
        let c = coeff_lin(form, i);
        if i == chart {
            if !c.is_zero() {
                out = out.add(&Polynomial::constant(field, vs, c));
            }
        } else {
            if !c.is_zero() {
                let xk = Polynomial::var(field, vs, k);
                out = out.add(&xk.mul_scalar(&c));
            }
            k += 1;
        }
    }
    out
}

fn blow_up_line(
    family: &ChartFamily,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<Vec<ChartFamily>> {
    if !family.history.is_empty() {
        return Err(EngineError::Other(
            "line blow-up centers are given in pencil coordinates; chart already blown up".into(),
        ));
    }
    let field = family.g.field.clone();
    let vs = family.vars.clone();
    let l1 = restrict_form(f1, family.chart, family);
    let l2 = restrict_form(f2, family.chart, family);
    // affine-linear change (v1, v2, v3) = (l1, l2, complement); pick the
    // complement coordinate making the linear part invertible
    let lin = |f: &Polynomial, i: usize| -> Scalar { coeff_lin(f, i) };
    let mut chosen: Option<(usize, Vec<Vec<Rat>>, Vec<Rat>)> = None;
    'comp: for c in 0..3 {
        // matrix rows: l1, l2, unit vector e_c
        let mut a = vec![vec![Rat::one(); 3]; 3];
        let mut b = vec![Rat::one(), Rat::one(), Rat::one()];
        for (r, f) in [&l1, &l2].iter().enumerate() {
            for j in 0..3 {
                a[r][j] = match lin(f, j).as_rat() {
                    Some(v) => v,
                    None => continue 'comp,
                };
            }
            b[r] = f.constant_term().as_rat().unwrap_or_else(|| Rat::one());
        }
        for j in 0..3 {
            a[2][j] = if j == c {
                Rat::one()
            } else {
                Rat::one() - Rat::one()
            };
        }
        b[2] = Rat::one() - Rat::one();
        if mat3_det(&a) != Rat::one() - Rat::one() {
            chosen = Some((c, a, b));
            break;
        }
    }
    let (_, a, b) = chosen.ok_or_else(|| {
        EngineError::CenterDisjoint("line degenerates in this chart".into())
    })?;
    // v = A u + b  =>  u = A^{-1} (v - b)
    let ainv = mat3_inverse(&a).ok_or_else(|| {
        EngineError::CenterDisjoint("line change of coordinates not invertible".into())
    })?;
    // old coordinates in terms of new ones
    let mut old_in_new: Vec<Polynomial> = Vec::new();
    for i in 0..3 {
        let mut acc = Polynomial::zero(&field, &vs);
        for j in 0..3 {
            let vj = Polynomial::var(&field, &vs, j);
            let shifted = vj.sub(&Polynomial::constant(
                &field,
                &vs,
                field.from_rat(b[j].clone()),
            ));
            acc = acc.add(&shifted.mul_scalar(&field.from_rat(ainv[i][j].clone())));
        }
        old_in_new.push(acc);
    }
    // transform G into the new coordinates
    let mut g_new = family.g.clone();
    // simultaneous substitution via a temporary 7-variable trick is not
    // needed: substitute sequentially into fresh variables by evaluating
    // G(old(new)) directly
    g_new = substitute_all(&family.g, &old_in_new)?;
    let mut out = Vec::new();
    for e_var in 0..2 {
        // charts of the blow-up of {v1 = v2 = 0}
        let other = 1 - e_var;
        let e = Polynomial::var(&field, &vs, e_var);
        let vo = Polynomial::var(&field, &vs, other);
        let mut total = g_new.clone();
        total = total.substitute(other, &e.mul(&vo));
        let (strict, mult) = divide_exceptional(&total, e_var);
        if mult == 0 {
            return Err(EngineError::CenterDisjoint(
                "line center not on the family".into(),
            ));
        }
        if strict.is_zero() {
            return Err(EngineError::StrictTransformZero);
        }
        // blow-down: new chart coords -> old chart coords
        let mut down: Vec<Polynomial> = Vec::new();
        for i in 0..3 {
            // old_i = old_in_new(v1, v2, v3) with v_other replaced by e*v_other
            let composed = old_in_new[i]
                .substitute(other, &e.mul(&vo));
            down.push(composed);
        }
        down.push(Polynomial::var(&field, &vs, 3));
        out.push(ChartFamily {
            chart: family.chart,
            vars: vs.clone(),
            g: strict,
            history: {
                let mut h = family.history.clone();
                h.push(BlowUpStep {
                    down_map: down,
                    exceptional: e_var,
                    multiplicity: mult,
                });
                h
            },
        });
    }
    Ok(out)
}

/// Substitute all three affine variables simultaneously.
pub fn substitute_all(g: &Polynomial, repl: &[Polynomial]) -> Result<Polynomial> {
    let field = &g.field;
    let vs = &g.vars;
    let mut acc = Polynomial::zero(field, vs);
    for (m, c) in &g.terms {
        let mut term = Polynomial::constant(field, vs, c.clone());
        for i in 0..3 {
            let e = m.0[i];
            if e < 0 {
                return Err(EngineError::Other("Laurent term in chart family".into()));
            }
            if e > 0 {
                term = term.mul(&repl[i].pow(e as usize));
            }
        }
        if m.0[3] != 0 {
            let lam = Polynomial::var(field, vs, 3);
            term = term.mul(&lam.pow(m.0[3] as usize));
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn mat3_det(a: &[Vec<Rat>]) -> Rat {
    let d = a[0][0].clone() * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
        - a[0][1].clone() * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + a[0][2].clone() * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0]);
    d
}

fn mat3_inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let det = mat3_det(a);
    if det == Rat::one() - Rat::one() {
        return None;
    }
    let cof = |r: usize, c: usize| -> Rat {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let m = &a[rs[0]][cs[0]] * &a[rs[1]][cs[1]] - &a[rs[0]][cs[1]] * &a[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            m
        } else {
            -m
        }
    };
    let mut inv = vec![vec![Rat::one(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = cof(j, i) / det.clone();
        }
    }
    Some(inv)
}

/// Verify the strict-transform identity of the final history step:
/// strict * e^mult composed with nothing equals the pull-back of `prev`
/// under the step's blow-down map.
pub fn verify_strict_transform(
    prev: &Polynomial,
    step: &BlowUpStep,
    strict: &Polynomial,
) -> Result<bool> {
    let e = Polynomial::var(&strict.field, &strict.vars, step.exceptional);
    let lhs = strict.mul(&e.pow(step.multiplicity as usize));
    let rhs = substitute_all(prev, &step.down_map)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldDescriptor;
    use crate::algebra::parse::parse_polynomial;
    use crate::algebra::poly::vars;
    use crate::pencil::ChartFamily;

    fn toy_family(text: &str) -> ChartFamily {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z", "lambda"]);
        ChartFamily {
            chart: 3,
            vars: vs.clone(),
            g: parse_polynomial(text, &vs, &q).unwrap(),
            history: vec![],
        }
    }

    #[test]
    fn a2_resolves_in_one_blowup() {
        let fam = toy_family("x^2+y^2+z^3");
        let p = ProjectivePoint::from_rationals([0, 0, 0, 1]).unwrap();
        let charts = blow_up(&fam, &LinearCenter::Point(p)).unwrap();
        assert_eq!(charts.len(), 3);
        // x-chart: (x, xy, xz): total x^2 + x^2 y^2 + x^3 z^3, strict after /x^2
        let q = FieldDescriptor::rationals();
        let expect =
            parse_polynomial("1+y^2+x*z^3", &charts[0].vars, &q).unwrap();
        assert_eq!(charts[0].g, expect);
        assert_eq!(charts[0].history[0].multiplicity, 2);
        // strict transform identity
        for c in &charts {
            assert!(verify_strict_transform(&fam.g, &c.history[0], &c.g).unwrap());
        }
    }

    #[test]
    fn a3_drops_to_a1() {
        let fam = toy_family("x^2+y^2+z^4");
        let p = ProjectivePoint::from_rationals([0, 0, 0, 1]).unwrap();
        let charts = blow_up(&fam, &LinearCenter::Point(p)).unwrap();
        // z-chart: (zx, zy, z): strict x^2+y^2+z^2
        let q = FieldDescriptor::rationals();
        let expect = parse_polynomial("x^2+y^2+z^2", &charts[2].vars, &q).unwrap();
        assert_eq!(charts[2].g, expect);
    }

    #[test]
    fn line_blowup_strict_identity() {
        // family with a singular line {x = y = 0}
        let fam = toy_family("x^2+y^2+lambda*x*y*z");
        let q = FieldDescriptor::rationals();
        let pv = crate::pencil::pencil_vars();
        let f1 = parse_polynomial("x", &pv, &q).unwrap();
        let f2 = parse_polynomial("y", &pv, &q).unwrap();
        let center = LinearCenter::line(f1, f2).unwrap();
        let charts = blow_up(&fam, &center).unwrap();
        assert_eq!(charts.len(), 2);
        for c in &charts {
            assert!(verify_strict_transform(&fam.g, &c.history[0], &c.g).unwrap());
            assert_eq!(c.history[0].multiplicity, 2);
        }
    }

    #[test]
    fn off_chart_center_rejected() {
        let fam = toy_family("x^2+y^2+z^3");
        let p = ProjectivePoint::from_rationals([1, 0, 0, 0]).unwrap();
        assert!(matches!(
            blow_up(&fam, &LinearCenter::Point(p)),
            Err(EngineError::CenterDisjoint(_))
        ));
    }
}
