//! Text grammar for (Laurent) polynomials.
//!
//! integers, names [a-zA-Z][a-zA-Z0-9]*, operators + - * / ^, parentheses.
//! Division requires the denominator to simplify to a single invertible term.
//! `lambda` and `alpha` parse as scalars when the field provides them.

use num_traits::{One, Signed};

use super::field::{BaseElem, FieldDescriptor, Scalar};
use super::monomial::Monomial;
use super::poly::{Polynomial, VarSet};
use super::unipoly::Rat;
use crate::error::{EngineError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(bytes[start..i].iter().collect())));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                out.push((start, Tok::Name(bytes[start..i].iter().collect())));
            }
            _ => {
                return Err(EngineError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", c),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: &'a FieldDescriptor,
    vars: &'a VarSet,
    text_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }
    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.text_len)
    }
    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            self.term()?.neg()
        } else {
            if matches!(self.peek(), Some(Tok::Plus)) {
                self.bump();
            }
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    let pos = self.here();
                    self.bump();
                    let f = self.factor()?;
                    acc = divide_by_term(&acc, &f, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(s)) => {
                    let e: i64 = s.parse().map_err(|_| EngineError::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    if neg {
                        // negative power: 1 / base^e
                        let p = base.pow(e as usize);
                        let one = Polynomial::one(&p.field, &p.vars);
                        return divide_by_term(&one, &p, pos);
                    }
                    return Ok(base.pow(e as usize));
                }
                _ => {
                    return Err(EngineError::Syntax {
                        pos,
                        msg: "expected integer exponent after ^".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(s)) => {
                let n: i64 = s.parse().map_err(|_| EngineError::Syntax {
                    pos,
                    msg: "integer literal too large".into(),
                })?;
                Ok(Polynomial::constant(
                    self.field,
                    self.vars,
                    self.field.from_int(n),
                ))
            }
            Some(Tok::Name(name)) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Polynomial::var(self.field, self.vars, i));
                }
                if name == "lambda" && self.field.has_lambda() {
                    return Ok(Polynomial::constant(
                        self.field,
                        self.vars,
                        self.field.lambda()?,
                    ));
                }
                if name == "alpha" && self.field.has_extension() {
                    return Ok(Polynomial::constant(
                        self.field,
                        self.vars,
                        self.field.alpha()?,
                    ));
                }
                Err(EngineError::UnknownVariable(name))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(EngineError::Syntax {
                        pos,
                        msg: "unbalanced parenthesis".into(),
                    }),
                }
            }
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            other => Err(EngineError::Syntax {
                pos,
                msg: format!("unexpected token {:?}", other),
            }),
        }
    }
}

fn divide_by_term(num: &Polynomial, den: &Polynomial, pos: usize) -> Result<Polynomial> {
    if den.is_zero() {
        return Err(EngineError::Syntax {
            pos,
            msg: "division by zero".into(),
        });
    }
    if den.num_terms() != 1 {
        return Err(EngineError::NonMonomialDenominator(format!("{}", den)));
    }
    let (m, c) = den.terms.iter().next().unwrap();
    num.div_term(m, c)
}

/// Parse `text` into a Laurent polynomial in the given variables and field.
pub fn parse_polynomial(
    text: &str,
    variables: &VarSet,
    field: &FieldDescriptor,
) -> Result<Polynomial> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        vars: variables,
        text_len: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(EngineError::Syntax {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

fn scalar_atom(s: &Scalar) -> String {
    let txt = super::field::format_scalar(s);
    if txt.contains('+') || (txt.len() > 1 && txt[1..].contains('-')) || txt.contains('/') {
        format!("({})", txt)
    } else {
        txt
    }
}

fn rat_is_one(c: &Scalar) -> bool {
    c.as_rat().map(|r| r.is_one()).unwrap_or(false)
}

fn rat_is_minus_one(c: &Scalar) -> bool {
    c.as_rat().map(|r| (-r).is_one()).unwrap_or(false)
}

/// Deterministic printing: terms in descending (total degree, storage-lex)
/// order; Laurent terms printed as products over a monomial denominator.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Monomial, &Scalar)> = p.terms.iter().collect();
    terms.sort_by(|a, b| {
        b.0.degree()
            .cmp(&a.0.degree())
            .then_with(|| b.0 .0.cmp(&a.0 .0))
    });
    let mut parts: Vec<String> = Vec::new();
    for (m, c) in terms {
        let mut numerator: Vec<String> = Vec::new();
        let mut denominator: Vec<String> = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            let name = &p.vars[i];
            if e > 0 {
                numerator.push(if e == 1 {
                    name.clone()
                } else {
                    format!("{}^{}", name, e)
                });
            } else if e < 0 {
                denominator.push(if e == -1 {
                    name.clone()
                } else {
                    format!("{}^{}", name, -e)
                });
            }
        }
        let mut lead = String::new();
        let is_neg_simple = c.as_rat().map(|r| r.is_negative()).unwrap_or(false);
        let cmag: Scalar = if is_neg_simple { c.neg() } else { c.clone() };
        if numerator.is_empty() || !(rat_is_one(&cmag) || rat_is_minus_one(&cmag)) {
            if numerator.is_empty() && denominator.is_empty() {
                lead = scalar_atom(&cmag);
            } else if !rat_is_one(&cmag) {
                lead = scalar_atom(&cmag);
            }
        }
        let mut body = String::new();
        if !lead.is_empty() {
            body.push_str(&lead);
        }
        for n in &numerator {
            if !body.is_empty() {
                body.push('*');
            }
            body.push_str(n);
        }
        if body.is_empty() {
            body.push('1');
        }
        if !denominator.is_empty() {
            if denominator.len() == 1 && !denominator[0].contains('^') {
                body.push_str(&format!("/{}", denominator[0]));
            } else {
                body.push_str(&format!("/({})", denominator.join("*")));
            }
        }
        if parts.is_empty() {
            parts.push(if is_neg_simple {
                format!("-{}", body)
            } else {
                body
            });
        } else if is_neg_simple {
            parts.push(format!(" - {}", body));
        } else {
            parts.push(format!(" + {}", body));
        }
    }
    parts.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;

    #[test]
    fn laurent_example() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let p = parse_polynomial("x+y+z+1/(x*y*z)", &vs, &q).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert!(p.terms.contains_key(&Monomial(vec![-1, -1, -1])));
        assert!(p.terms.contains_key(&Monomial(vec![1, 0, 0])));
    }

    #[test]
    fn zero_is_empty() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x"]);
        let p = parse_polynomial("0", &vs, &q).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn expansion_with_denominator() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z"]);
        let p = parse_polynomial("(x+1)^2/(x*y*z)+y+z", &vs, &q).unwrap();
        assert_eq!(p.num_terms(), 5);
    }

    #[test]
    fn non_monomial_denominator_rejected() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y"]);
        assert!(matches!(
            parse_polynomial("x/(x+y)", &vs, &q),
            Err(EngineError::NonMonomialDenominator(_))
        ));
    }

    #[test]
    fn unknown_variable() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x"]);
        assert!(matches!(
            parse_polynomial("x+w", &vs, &q),
            Err(EngineError::UnknownVariable(_))
        ));
    }

    #[test]
    fn syntax_error_position() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x"]);
        match parse_polynomial("x+ +*", &vs, &q) {
            Err(EngineError::Syntax { pos, .. }) => assert!(pos >= 3),
            other => panic!("expected syntax error, got {:?}", other),
        }
    }

    #[test]
    fn roundtrip_print_parse() {
        let q = FieldDescriptor::rationals();
        let vs = vars(&["x", "y", "z", "t"]);
        for text in [
            "x+y+z+1/(x*y*z)",
            "(x+t)^2*t^2+(y+z)*x*y*z",
            "x^4-3*x*y*z*t+2/(x^2*y)",
            "-x+5",
        ] {
            let p = parse_polynomial(text, &vs, &q).unwrap();
            let s = format_polynomial(&p);
            let p2 = parse_polynomial(&s, &vs, &q).unwrap();
            assert_eq!(p, p2, "roundtrip failed for `{}` -> `{}`", text, s);
        }
    }

    #[test]
    fn lambda_scalar_parses() {
        let f = FieldDescriptor::rational_functions();
        let vs = vars(&["x", "y", "z", "t"]);
        let p = parse_polynomial("x^4-lambda*x*y*z*t", &vs, &f).unwrap();
        assert_eq!(p.num_terms(), 2);
        let s = format_polynomial(&p);
        let p2 = parse_polynomial(&s, &vs, &f).unwrap();
        assert_eq!(p, p2);
    }
}
