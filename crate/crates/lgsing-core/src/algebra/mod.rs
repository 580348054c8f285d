//! Exact arithmetic: rationals, rational functions in lambda, field towers,
//! sparse multivariate polynomials, Groebner bases, univariate factorization.

pub mod algnum;
pub mod factor;
pub mod groebner;
pub mod ideal;
pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod solve;
pub mod unipoly;
