//! Exact rationals, multivariate polynomials over the chart variables, and
//! exact linear algebra.

mod linalg;
mod poly;
mod var;

pub use linalg::{
    nullspace, nullspace_cancellable, poly_rank, solve, solve_many, CancelToken, Matrix,
};
pub use poly::{Monomial, Poly, Polynomial, Variable};
pub use var::VariableId;

/// Arbitrary-precision rational in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor, `rat(1, 3)` is one third.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses `a` or `a/b` with optional leading sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: num_bigint::BigInt = num.parse().ok()?;
    let den: num_bigint::BigInt = den.parse().ok()?;
    if num_traits::Zero::is_zero(&den) {
        return None;
    }
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &(-3).into());
        assert_eq!(r.denom(), &2.into());
        assert_eq!(rat(0, 5), rat(0, 1));
        assert_eq!(parse_rational("-10/4"), Some(rat(-5, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
