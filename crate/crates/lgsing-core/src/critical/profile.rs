//! Generic-versus-special type profiles of persistent singular points. The
//! classifier runs once over Q(lambda) with inversion logging; the logged
//! scalars' numerator roots are exactly the candidate lambda values where
//! the reduction could degenerate, and each candidate is re-classified.

use crate::algebra::algnum::AlgebraicNumber;
use crate::algebra::factor::factor_univariate_capped;
use crate::algebra::field::{BaseElem, FieldDescriptor, Scalar};
use crate::algebra::poly::Polynomial;
use crate::duval::{classify, ClassificationResult, ClassifyOptions, DuValType};
use crate::error::{EngineError, Result};
use crate::pencil::{dehomogenize, ProjectivePoint, QuarticPencil};

use super::{specialize_lambda_var, to_lambda_coeffs};

#[derive(Clone, Debug)]
pub struct TypeProfile {
    pub generic: DuValType,
    pub generic_evidence: ClassificationResult,
    /// strictly degenerating lambda values with their special types
    pub jumps: Vec<(AlgebraicNumber, DuValType)>,
}

impl TypeProfile {
    pub fn is_constant(&self) -> bool {
        self.jumps.is_empty()
    }
}

/// Profile of a singular point of a family G(u, lambda) given by chart-local
/// polynomials over Q (lambda last variable), at the affine position `shift`
/// with coordinates over Q(lambda).
pub fn profile_local(
    g_q: &Polynomial,
    shift: &[Scalar],
    central: &[AlgebraicNumber],
    opts: ClassifyOptions,
) -> Result<TypeProfile> {
    let g_l = to_lambda_coeffs(g_q);
    let ql = FieldDescriptor::rational_functions();
    let mut shifted = g_l.clone();
    for (i, a) in shift.iter().enumerate() {
        let xi = Polynomial::var(&ql, &g_l.vars, i);
        let repl = xi.add(&Polynomial::constant(&ql, &g_l.vars, a.clone()));
        shifted = shifted.substitute(i, &repl);
    }
    let generic_res = classify(&shifted, opts)?;
    let generic = generic_res.du_val.clone();
    let generic_mu = generic.milnor();
    // jump candidates: lambda roots of everything inverted during the run
    let mut candidates: Vec<AlgebraicNumber> = Vec::new();
    for s in &generic_res.divisions_logged {
        collect_lambda_roots(s, &mut candidates)?;
    }
    candidates.retain(|c| !central.iter().any(|z| z.minpoly == c.minpoly));
    candidates.sort_by_key(|c| c.minpoly_string());
    candidates.dedup_by(|a, b| a.minpoly == b.minpoly);
    let mut jumps = Vec::new();
    for cand in candidates {
        // specialize the original family and re-derive the local equation:
        // the shift itself may involve lambda
        let (spec_g, field) = specialize_lambda_var(g_q, &cand)?;
        // specialize the shift coordinates
        let mut spec_shift: Vec<Scalar> = Vec::new();
        let mut ok = true;
        for a in shift {
            match specialize_scalar(a, &cand, &field)? {
                Some(v) => spec_shift.push(v),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue; // position escapes to infinity at this lambda
        }
        let mut local = spec_g.clone();
        for (i, a) in spec_shift.iter().enumerate() {
            let xi = Polynomial::var(&field, &spec_g.vars, i);
            let repl = xi.add(&Polynomial::constant(&field, &spec_g.vars, a.clone()));
            local = local.substitute(i, &repl);
        }
        let res = match classify(&local, opts) {
            Ok(r) => r,
            Err(EngineError::DegreeBudget(m)) => {
                return Err(EngineError::Classification(format!(
                    "budget exceeded re-classifying at {}: {}",
                    cand, m
                )))
            }
            Err(e) => return Err(e),
        };
        let degenerates = match (generic_mu, res.du_val.milnor()) {
            (Some(g), Some(s)) => s > g,
            (_, None) => true, // NonADE at the special value
            _ => false,
        };
        if degenerates {
            jumps.push((cand, res.du_val));
        }
    }
    Ok(TypeProfile {
        generic,
        generic_evidence: generic_res,
        jumps,
    })
}

/// Profile of a persistent point of a pencil.
pub fn type_profile(
    pencil: &QuarticPencil,
    point: &ProjectivePoint,
    central: &[AlgebraicNumber],
    opts: ClassifyOptions,
) -> Result<TypeProfile> {
    let chart = point.first_nonzero();
    let fam = dehomogenize(pencil, chart)?;
    let ql = FieldDescriptor::rational_functions();
    let pp = point.promote(&ql)?;
    let inv = pp.coords[chart].inv()?;
    let mut shift = Vec::new();
    for i in 0..4 {
        if i == chart {
            continue;
        }
        shift.push(pp.coords[i].mul(&inv));
    }
    profile_local(&fam.g, &shift, central, opts)
}

fn specialize_scalar(
    a: &Scalar,
    value: &AlgebraicNumber,
    target: &FieldDescriptor,
) -> Result<Option<Scalar>> {
    match &a.repr[0] {
        BaseElem::Rat(r) => Ok(Some(target.from_rat(r.clone()))),
        BaseElem::Fun(f) => match value.as_rational() {
            Some(rv) => {
                let d = f.den.eval(&rv);
                if d == num_traits::Zero::zero() {
                    return Ok(None);
                }
                Ok(Some(target.from_rat(f.num.eval(&rv) / d)))
            }
            None => {
                let alpha = target.alpha()?;
                let num = super::eval_unipoly(&f.num, &alpha, target);
                let den = super::eval_unipoly(&f.den, &alpha, target);
                if den.is_zero() {
                    return Ok(None);
                }
                Ok(Some(num.div(&den)?))
            }
        },
    }
}

fn collect_lambda_roots(s: &Scalar, out: &mut Vec<AlgebraicNumber>) -> Result<()> {
    // the scalar lives over Q(lambda) (degree-1 tower); its numerator's roots
    // are the candidate lambda values
    for b in &s.repr {
        if let BaseElem::Fun(f) = b {
            if f.num.degree() == 0 {
                continue;
            }
            let (_, factors) = factor_univariate_capped(&f.num, 24.max(f.num.degree()))?;
            for (m, _) in factors {
                if m.degree() >= 1 {
                    out.push(AlgebraicNumber::new(m)?);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial::Monomial;
    use crate::algebra::poly::vars;
    use crate::pencil::compactify_to_pencil;
    use crate::algebra::parse::parse_polynomial;

    #[test]
    fn p3_points_constant_a3() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let f = parse_polynomial("x+y+z+1/(x*y*z)", &vs, &q).unwrap();
        let pencil = compactify_to_pencil(&f, &Monomial(vec![1, 1, 1])).unwrap();
        let p = ProjectivePoint::from_rationals([1, 0, 0, 0]).unwrap();
        let prof = type_profile(&pencil, &p, &[], ClassifyOptions::default()).unwrap();
        assert_eq!(prof.generic, DuValType::A(3));
        assert!(prof.is_constant(), "unexpected jumps: {:?}", prof.jumps);
        let p2 = ProjectivePoint::from_rationals([1, -1, 0, 0]).unwrap();
        let prof2 = type_profile(&pencil, &p2, &[], ClassifyOptions::default()).unwrap();
        assert_eq!(prof2.generic, DuValType::A(3));
        assert!(prof2.is_constant());
    }

    #[test]
    fn v16_jump_at_one() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let f = parse_polynomial("(x+y+z+1)*(x+1)*(y+1)*(z+1)/(x*y*z)", &vs, &q).unwrap();
        let pencil = compactify_to_pencil(&f, &Monomial(vec![1, 1, 1])).unwrap();
        // P3^1 = [1:0:0:-1]: A1 generically, A2 at lambda = 1
        let p = ProjectivePoint::from_rationals([1, 0, 0, -1]).unwrap();
        let central = vec![AlgebraicNumber::from_rational(num_traits::Zero::zero())];
        let prof = type_profile(&pencil, &p, &central, ClassifyOptions::default()).unwrap();
        assert_eq!(prof.generic, DuValType::A(1));
        assert_eq!(prof.jumps.len(), 1);
        assert_eq!(
            prof.jumps[0].0.as_rational(),
            Some(num_traits::One::one())
        );
        assert_eq!(prof.jumps[0].1, DuValType::A(2));
    }
}
