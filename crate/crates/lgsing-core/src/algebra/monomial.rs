//! Exponent vectors and monomial orders.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Exponent vector; negative entries are allowed for Laurent monomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// self / o, None when not divisible (componentwise, nonnegative result).
    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial(e))
    }

    pub fn lcm(&self, o: &Self) -> Self {
        Monomial(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Monomial orders used by the Groebner kernel. `Block(k)` eliminates the
/// first `k` variables (graded-reverse-lex inside each block).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::GrevLex => grevlex(&a.0, &b.0),
            MonomialOrder::Block(k) => {
                grevlex(&a.0[..*k], &b.0[..*k]).then_with(|| grevlex(&a.0[*k..], &b.0[*k..]))
            }
        }
    }
}

fn grevlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            match x.cmp(y) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {}
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_order() {
        let o = MonomialOrder::GrevLex;
        // x^2 > xy > y^2 > x > y > 1 in grevlex with x before y
        let x2 = Monomial(vec![2, 0]);
        let xy = Monomial(vec![1, 1]);
        let y2 = Monomial(vec![0, 2]);
        assert_eq!(o.cmp(&x2, &xy), Ordering::Greater);
        assert_eq!(o.cmp(&xy, &y2), Ordering::Greater);
        assert_eq!(o.cmp(&y2, &Monomial(vec![1, 0])), Ordering::Greater);
    }

    #[test]
    fn block_eliminates() {
        // any monomial containing the first variable beats any not containing it
        let o = MonomialOrder::Block(1);
        let a = Monomial(vec![1, 0, 0]);
        let b = Monomial(vec![0, 5, 7]);
        assert_eq!(o.cmp(&a, &b), Ordering::Greater);
    }
}
