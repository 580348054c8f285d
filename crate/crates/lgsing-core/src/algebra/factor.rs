//! Univariate factorization over Q: square-free decomposition followed by
//! Zassenhaus lifting (factor mod p, Hensel lift, subset recombination).
//!
//! Degree is capped; the catalog never needs more than quartic minimal
//! polynomials, internal callers (norm resultants) pass a larger cap.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::unipoly::{Rat, UniPoly};
use crate::error::{EngineError, Result};

pub const DEFAULT_DEGREE_CAP: usize = 8;

/// Full factorization of `p` over Q.
/// Returns the leading constant and the monic irreducible factors with
/// multiplicities, sorted deterministically.
pub fn factor_univariate(p: &UniPoly) -> Result<(Rat, Vec<(UniPoly, usize)>)> {
    factor_univariate_capped(p, DEFAULT_DEGREE_CAP)
}

pub fn factor_univariate_capped(
    p: &UniPoly,
    cap: usize,
) -> Result<(Rat, Vec<(UniPoly, usize)>)> {
    if p.is_zero() {
        return Err(EngineError::ZeroPolynomial("factor_univariate".into()));
    }
    if p.degree() > cap {
        return Err(EngineError::DegreeBudget(format!(
            "degree {} exceeds factorization cap {}",
            p.degree(),
            cap
        )));
    }
    let constant = p.leading();
    let monic = p.monic();
    if monic.degree() == 0 {
        return Ok((constant, vec![]));
    }
    let mut out: Vec<(UniPoly, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        if part.degree() == 0 {
            continue;
        }
        for irr in factor_squarefree(&part)? {
            out.push((irr, mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0)))
    });
    Ok((constant, out))
}

/// Is `p` irreducible over Q? Constants are not irreducible.
pub fn is_irreducible(p: &UniPoly) -> Result<bool> {
    if p.is_zero() || p.degree() == 0 {
        return Ok(false);
    }
    let (_, factors) = factor_univariate_capped(p, DEFAULT_DEGREE_CAP.max(p.degree()))?;
    Ok(factors.len() == 1 && factors[0].1 == 1)
}

/// Yun's square-free decomposition of a monic polynomial:
/// returns pairs (squarefree part, multiplicity).
pub fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    if a0.degree() == 0 {
        out.push((p.monic(), 1));
        return out;
    }
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let mut c = dp.div_exact(&a0).expect("gcd divides");
    let mut i = 1usize;
    loop {
        let d = c.sub(&b.derivative());
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.monic(), i));
        }
        if b.degree() == a.degree() {
            break;
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        i += 1;
        if b.degree() == 0 {
            break;
        }
    }
    out
}

/// Factor a monic square-free polynomial into monic irreducibles.
fn factor_squarefree(p: &UniPoly) -> Result<Vec<UniPoly>> {
    if p.degree() <= 1 {
        return Ok(vec![p.monic()]);
    }
    // integer primitive form
    let (_, ints) = p.primitive_int();
    let f = IntPoly { c: ints };
    let factors = zassenhaus(&f)?;
    Ok(factors
        .into_iter()
        .map(|g| g.to_unipoly().monic())
        .collect())
}

// ---------------------------------------------------------------------------
// integer polynomials + mod-p arithmetic
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
struct IntPoly {
    c: Vec<BigInt>, // ascending, trimmed
}

impl IntPoly {
    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }
    fn leading(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }
    fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_coeffs(self.c.iter().map(|v| BigRational::from(v.clone())).collect())
    }
    fn max_abs(&self) -> BigInt {
        self.c
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

fn modp(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    r.to_u64().unwrap()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Polynomial over F_p, ascending dense coefficients, trimmed.
#[derive(Clone, Debug, PartialEq)]
struct PPoly {
    c: Vec<u64>,
    p: u64,
}

impl PPoly {
    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }
    fn zero(p: u64) -> Self {
        PPoly { c: vec![], p }
    }
    fn one(p: u64) -> Self {
        PPoly { c: vec![1], p }
    }
    fn x(p: u64) -> Self {
        PPoly { c: vec![0, 1], p }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }
    fn leading(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }
    fn from_int(f: &IntPoly, p: u64) -> Self {
        let mut r = PPoly {
            c: f.c.iter().map(|v| modp(v, p)).collect(),
            p,
        };
        r.trim();
        r
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = *self.c.get(i).unwrap_or(&0);
            let b = *o.c.get(i).unwrap_or(&0);
            c[i] = (a + b) % p;
        }
        let mut r = PPoly { c, p };
        r.trim();
        r
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = *self.c.get(i).unwrap_or(&0);
            let b = *o.c.get(i).unwrap_or(&0);
            c[i] = (a + p - b) % p;
        }
        let mut r = PPoly { c, p };
        r.trim();
        r
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = ((c[i + j] as u128 + a as u128 * b as u128) % p) as u64;
            }
        }
        let mut r = PPoly { c, p: self.p };
        r.trim();
        r
    }
    fn scale(&self, k: u64) -> Self {
        let p = self.p as u128;
        let mut r = PPoly {
            c: self
                .c
                .iter()
                .map(|&a| ((a as u128 * k as u128) % p) as u64)
                .collect(),
            p: self.p,
        };
        r.trim();
        r
    }
    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree();
        let dinv = inv_mod(d.leading(), p);
        let mut rem = self.clone();
        if rem.degree() < dd || rem.is_zero() {
            return (Self::zero(p), rem);
        }
        let mut q = vec![0u64; rem.degree() - dd + 1];
        while !rem.is_zero() && rem.degree() >= dd {
            let k = rem.degree() - dd;
            let c = ((rem.leading() as u128 * dinv as u128) % p as u128) as u64;
            q[k] = c;
            for (i, &b) in d.c.iter().enumerate() {
                let v = (c as u128 * b as u128) % p as u128;
                rem.c[i + k] = ((rem.c[i + k] as u128 + p as u128 - v) % p as u128) as u64;
            }
            rem.trim();
        }
        let mut qq = PPoly { c: q, p };
        qq.trim();
        (qq, rem)
    }
    fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut b = self.div_rem(m).1;
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).div_rem(m).1;
            }
            b = b.mul(&b).div_rem(m).1;
            e >>= 1;
        }
        acc
    }
    fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, &a) in self.c.iter().enumerate().skip(1) {
            c.push(((a as u128 * (i as u128 % p)) % p) as u64);
        }
        let mut r = PPoly { c, p: self.p };
        r.trim();
        r
    }
}

/// Distinct-degree then equal-degree (Cantor–Zassenhaus) factorization of a
/// monic square-free polynomial over F_p, p odd. Deterministic RNG.
fn factor_mod_p(f: &PPoly) -> Vec<PPoly> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rng_state: u64 = 0x9e3779b97f4a7c15 ^ (p.wrapping_mul(f.degree() as u64 + 1));
    let mut next = move || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        rng_state
    };
    // distinct degree
    let mut v = f.monic();
    let mut h = PPoly::x(p);
    let mut d = 0usize;
    let mut stack: Vec<(PPoly, usize)> = Vec::new();
    while v.degree() >= 1 {
        d += 1;
        if v.degree() < 2 * d {
            stack.push((v.clone(), v.degree()));
            break;
        }
        h = h.pow_mod(p, &v);
        let g = v.gcd(&h.sub(&PPoly::x(p)));
        if g.degree() > 0 {
            stack.push((g.clone(), d));
            let (q, r) = v.div_rem(&g);
            debug_assert!(r.is_zero());
            v = q;
            h = h.div_rem(&v).1;
        }
    }
    // equal degree split
    while let Some((g, d)) = stack.pop() {
        if g.degree() == d {
            out.push(g.monic());
            continue;
        }
        // Cantor–Zassenhaus random split
        loop {
            let deg = g.degree();
            let mut rc: Vec<u64> = (0..deg).map(|_| next() % p).collect();
            rc.push(1);
            let mut r = PPoly { c: rc, p };
            r.trim();
            let e = (p.pow(d as u32) - 1) / 2;
            let t = r.pow_mod(e, &g).sub(&PPoly::one(p));
            let w = g.gcd(&t);
            if w.degree() > 0 && w.degree() < g.degree() {
                let other = g.div_rem(&w).0;
                stack.push((w, d));
                stack.push((other, d));
                break;
            }
        }
    }
    out
}

/// Hensel lift a factorization f = g*h (mod m) to (mod m^2), where
/// s*g + t*h = 1 (mod m). Returns (g', h', s', t').
fn hensel_step(
    f: &IntPoly,
    m: &BigInt,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let e = ip_mod(&ip_sub(f, &ip_mul(g, h)), &m2);
    let (q, r) = ip_div_rem_mod(&ip_mul(s, &e), h, &m2);
    let g1 = ip_mod(&ip_add(g, &ip_add(&ip_mul(t, &e), &ip_mul(&q, g))), &m2);
    let h1 = ip_mod(&ip_add(h, &r), &m2);
    let b = ip_mod(
        &ip_sub(&ip_add(&ip_mul(s, &g1), &ip_mul(t, &h1)), &IntPoly { c: vec![BigInt::one()] }),
        &m2,
    );
    let (c, d) = ip_div_rem_mod(&ip_mul(s, &b), &h1, &m2);
    let s1 = ip_mod(&ip_sub(s, &d), &m2);
    let t1 = ip_mod(&ip_sub(&ip_sub(t, &ip_mul(t, &b)), &ip_mul(&c, &g1)), &m2);
    (g1, h1, s1, t1)
}

fn ip_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.c.len().max(b.c.len());
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.c.get(i).cloned().unwrap_or_else(BigInt::zero)
            + b.c.get(i).cloned().unwrap_or_else(BigInt::zero);
        c.push(x);
    }
    let mut r = IntPoly { c };
    ip_trim(&mut r);
    r
}

fn ip_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.c.len().max(b.c.len());
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.c.get(i).cloned().unwrap_or_else(BigInt::zero)
            - b.c.get(i).cloned().unwrap_or_else(BigInt::zero);
        c.push(x);
    }
    let mut r = IntPoly { c };
    ip_trim(&mut r);
    r
}

fn ip_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.c.is_empty() || b.c.is_empty() {
        return IntPoly { c: vec![] };
    }
    let mut c = vec![BigInt::zero(); a.c.len() + b.c.len() - 1];
    for (i, x) in a.c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.c.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    let mut r = IntPoly { c };
    ip_trim(&mut r);
    r
}

fn ip_trim(a: &mut IntPoly) {
    while a.c.last().map(|v| v.is_zero()).unwrap_or(false) {
        a.c.pop();
    }
}

/// symmetric remainder mod m, coefficients in (-m/2, m/2]
fn ip_mod(a: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    let mut r = IntPoly {
        c: a.c
            .iter()
            .map(|v| {
                let mut x = ((v % m) + m) % m;
                if x > half {
                    x -= m;
                }
                x
            })
            .collect(),
    };
    ip_trim(&mut r);
    r
}

/// division with remainder mod m by a polynomial whose leading coeff is a unit mod m
fn ip_div_rem_mod(a: &IntPoly, d: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    let dlead = d.leading();
    let linv = mod_inverse(&dlead, m).expect("leading coefficient must be unit");
    let dd = d.degree();
    let mut rem = ip_mod(a, m);
    if rem.c.len() <= dd || rem.c.is_empty() {
        return (IntPoly { c: vec![] }, rem);
    }
    let mut q = vec![BigInt::zero(); rem.degree() - dd + 1];
    while !rem.c.is_empty() && rem.degree() >= dd {
        let k = rem.degree() - dd;
        let c = ((rem.leading() * &linv) % m + m) % m;
        if c.is_zero() {
            rem.c.pop();
            ip_trim(&mut rem);
            continue;
        }
        q[k] = c.clone();
        for (i, b) in d.c.iter().enumerate() {
            let v = &rem.c[i + k] - &c * b;
            rem.c[i + k] = v;
        }
        rem = ip_mod(&rem, m);
    }
    (ip_mod(&IntPoly { c: q }, m), rem)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = num_integer::Integer::extended_gcd(&(((a % m) + m) % m), m);
    if e.gcd.is_one() {
        Some(((e.x % m) + m) % m)
    } else {
        None
    }
}

/// Zassenhaus factorization of a primitive square-free integer polynomial.
fn zassenhaus(f: &IntPoly) -> Result<Vec<IntPoly>> {
    let n = f.degree();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    // pick a prime: f stays square-free mod p and lc(f) nonzero mod p
    const PRIMES: [u64; 20] = [
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
    ];
    let mut best: Option<(u64, Vec<PPoly>)> = None;
    for &p in PRIMES.iter() {
        if modp(&f.leading(), p) == 0 {
            continue;
        }
        let fp = PPoly::from_int(f, p).monic();
        if fp.gcd(&fp.derivative()).degree() != 0 {
            continue;
        }
        let facs = factor_mod_p(&fp);
        match &best {
            Some((_, b)) if b.len() <= facs.len() => {}
            _ => best = Some((p, facs)),
        }
        if best.as_ref().map(|(_, b)| b.len()) == Some(1) {
            break;
        }
    }
    let (p, mod_factors) =
        best.ok_or_else(|| EngineError::Other("no usable prime for factorization".into()))?;
    if mod_factors.len() == 1 {
        return Ok(vec![f.clone()]); // irreducible
    }

    // Mignotte-style bound: |coeffs of any factor| <= 2^n * maxabs(f) * |lc|
    let bound: BigInt = (BigInt::one() << (n + 2)) * f.max_abs() * f.leading().abs();
    let target: BigInt = BigInt::from(2) * &bound + 1;
    // initial factorization mod p as IntPolys (symmetric lift)
    let to_int = |g: &PPoly| -> IntPoly {
        let half = p / 2;
        IntPoly {
            c: g.c
                .iter()
                .map(|&v| {
                    if v > half {
                        BigInt::from(v) - BigInt::from(p)
                    } else {
                        BigInt::from(v)
                    }
                })
                .collect(),
        }
    };
    let mod_ints: Vec<IntPoly> = mod_factors.iter().map(to_int).collect();
    let lifted = lift_group(f, &mod_ints, p, &target)?;
    let mut m = BigInt::from(p);
    while m < target {
        m = &m * &m;
    }

    // recombination
    let lc = f.leading();
    let mut remaining: Vec<IntPoly> = lifted;
    let mut fcur = f.clone();
    let mut out = Vec::new();
    let mut k = 1usize;
    'outer: while 2 * k <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, k) {
            // candidate = lc * prod(combo) mod m, symmetric; primitive part
            let mut cand = IntPoly {
                c: vec![fcur.leading()],
            };
            for &i in &combo {
                cand = ip_mod(&ip_mul(&cand, &remaining[i]), &m);
            }
            let cand = int_primitive(&cand);
            if cand.degree() == 0 {
                continue;
            }
            if let Some(quot) = int_div_exact(&fcur, &cand) {
                out.push(cand);
                let combo_set: std::collections::HashSet<usize> = combo.iter().cloned().collect();
                remaining = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo_set.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                fcur = quot;
                continue 'outer;
            }
        }
        k += 1;
    }
    if fcur.degree() > 0 {
        out.push(int_primitive(&fcur));
    }
    let _ = lc;
    Ok(out)
}

/// Lift the mod-p factor list of `f` (up to leading constant) to factors
/// mod p^(2^k) >= target. Bezout data is computed mod p (a field) for each
/// binary split; the quadratic Hensel steps carry it upward.
fn lift_group(f: &IntPoly, factors: &[IntPoly], p: u64, target: &BigInt) -> Result<Vec<IntPoly>> {
    if factors.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let mp = BigInt::from(p);
    let mid = factors.len() / 2;
    let (lo, hi) = factors.split_at(mid);
    let mut g = IntPoly {
        c: vec![BigInt::one()],
    };
    for q in lo {
        g = ip_mod(&ip_mul(&g, q), &mp);
    }
    let mut h = IntPoly {
        c: vec![BigInt::one()],
    };
    for q in hi {
        h = ip_mod(&ip_mul(&h, q), &mp);
    }
    // scale g so that lc(g*h) = lc(f) mod p
    let lcf = modbig(&f.leading(), &mp);
    let lcgh = modbig(&(g.leading() * h.leading()), &mp);
    let inv = mod_inverse(&lcgh, &mp)
        .ok_or_else(|| EngineError::Other("hensel: leading coeff not a unit".into()))?;
    let scalefac = (lcf * inv) % &mp;
    g = ip_mod(
        &IntPoly {
            c: g.c.iter().map(|v| v * &scalefac).collect(),
        },
        &mp,
    );
    let (mut s, mut t) = bezout_mod(&g, &h, &mp)?;
    let mut m = mp;
    while m < *target {
        let (g2, h2, s2, t2) = hensel_step(f, &m, &g, &h, &s, &t);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let mut out = lift_group(&g, lo, p, target)?;
    out.extend(lift_group(&h, hi, p, target)?);
    Ok(out)
}

fn modbig(v: &BigInt, m: &BigInt) -> BigInt {
    ((v % m) + m) % m
}

/// extended Euclid for polynomials over Z/m (m prime power; divisions only by units)
fn bezout_mod(g: &IntPoly, h: &IntPoly, m: &BigInt) -> Result<(IntPoly, IntPoly)> {
    // works because gcd(g mod p, h mod p) = 1 and leading coeffs stay units
    let mut r0 = ip_mod(g, m);
    let mut r1 = ip_mod(h, m);
    let one = IntPoly {
        c: vec![BigInt::one()],
    };
    let zero = IntPoly { c: vec![] };
    let (mut s0, mut s1) = (one.clone(), zero.clone());
    let (mut t0, mut t1) = (zero, one);
    while r1.degree() > 0 || (r1.c.len() == 1 && false) {
        let (q, r) = ip_div_rem_mod(&r0, &r1, m);
        let s = ip_mod(&ip_sub(&s0, &ip_mul(&q, &s1)), m);
        let t = ip_mod(&ip_sub(&t0, &ip_mul(&q, &t1)), m);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
        if r1.c.is_empty() {
            return Err(EngineError::Other("bezout: factors not coprime".into()));
        }
    }
    // r1 is a unit constant
    let u = r1
        .c
        .first()
        .cloned()
        .ok_or_else(|| EngineError::Other("bezout: zero remainder".into()))?;
    let uinv = mod_inverse(&u, m).ok_or_else(|| EngineError::Other("bezout: nonunit".into()))?;
    let s = ip_mod(
        &IntPoly {
            c: s1.c.iter().map(|v| v * &uinv).collect(),
        },
        m,
    );
    let t = ip_mod(
        &IntPoly {
            c: t1.c.iter().map(|v| v * &uinv).collect(),
        },
        m,
    );
    Ok((s, t))
}

fn int_primitive(a: &IntPoly) -> IntPoly {
    let mut g = BigInt::zero();
    for v in &a.c {
        g = num_integer::gcd(g, v.clone());
    }
    if g.is_zero() {
        return a.clone();
    }
    if a.leading().sign() == Sign::Minus {
        g = -g;
    }
    IntPoly {
        c: a.c.iter().map(|v| v / &g).collect(),
    }
}

fn int_div_exact(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    // exact division over Z via rational division
    let (q, r) = a.to_unipoly().div_rem(&b.to_unipoly());
    if !r.is_zero() {
        return None;
    }
    let (content, ints) = q.primitive_int();
    if !content.denom().is_one() {
        return None;
    }
    let mut c: Vec<BigInt> = ints.iter().map(|v| v * content.numer()).collect();
    let mut r = IntPoly {
        c: std::mem::take(&mut c),
    };
    ip_trim(&mut r);
    Some(r)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::rat_int;

    fn expand(c: &Rat, fs: &[(UniPoly, usize)]) -> UniPoly {
        let mut acc = UniPoly::constant(c.clone());
        for (f, m) in fs {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    #[test]
    fn quartic_classic() {
        // s^4 - 1 = (s-1)(s+1)(s^2+1)
        let p = UniPoly::from_i64(&[-1, 0, 0, 0, 1]);
        let (c, fs) = factor_univariate(&p).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(_, m)| *m == 1));
        assert_eq!(expand(&c, &fs), p);
        let degs: Vec<usize> = fs.iter().map(|(f, _)| f.degree()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn cubic_irreducible() {
        // s^3 + 2s^2 - 2: no rational roots, hence irreducible
        let p = UniPoly::from_i64(&[-2, 0, 2, 1]);
        let (c, fs) = factor_univariate(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
        assert_eq!(expand(&c, &fs), p);
        assert!(is_irreducible(&p).unwrap());
    }

    #[test]
    fn repeated_root() {
        let p = UniPoly::from_i64(&[0, 0, 1]); // s^2
        let (c, fs) = factor_univariate(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 2);
        assert_eq!(fs[0].0.degree(), 1);
        assert_eq!(expand(&c, &fs), p);
    }

    #[test]
    fn zero_errors() {
        assert!(factor_univariate(&UniPoly::zero()).is_err());
    }

    #[test]
    fn mixed_multiplicities() {
        // (s-1)^2 (s+2)^3 (s^2+s+1)
        let f1 = UniPoly::from_i64(&[-1, 1]);
        let f2 = UniPoly::from_i64(&[2, 1]);
        let f3 = UniPoly::from_i64(&[1, 1, 1]);
        let p = f1.pow(2).mul(&f2.pow(3)).mul(&f3).scale(&rat_int(6));
        let (c, fs) = factor_univariate(&p).unwrap();
        assert_eq!(expand(&c, &fs), p);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn big_coefficients() {
        // (s - 1728)(s^2 + 16)
        let p = UniPoly::from_i64(&[-1728, 1]).mul(&UniPoly::from_i64(&[16, 0, 1]));
        let (c, fs) = factor_univariate(&p).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(expand(&c, &fs), p);
    }

    #[test]
    fn degree_cap() {
        let mut coeffs = vec![0i64; 10];
        coeffs.push(1);
        let p = UniPoly::from_i64(&coeffs);
        assert!(factor_univariate(&p).is_err());
        assert!(factor_univariate_capped(&p, 16).is_ok());
    }
}
