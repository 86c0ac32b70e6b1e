//! Exact arithmetic: rational scalars, univariate polynomials, dense rational
//! matrices, and the combinatorial number families used everywhere else.
//!
//! The scalar type [`ExactRational`] is an arbitrary-precision fraction kept
//! in lowest terms with a positive denominator (zero is `0/1`).  All other
//! structures are built on top of it:
//! - [`RatPolynomial`]: coefficients in ascending degree, trimmed so the
//!   leading coefficient is nonzero unless the polynomial is zero.
//! - [`RatMatrix`]: dense row-major matrix with exact determinant,
//!   characteristic polynomial, nullspace, and inverse.
//! - [`combinatorial`]: binomials, Eulerian and unsigned Stirling triangles
//!   (memoized per row), elementary symmetric polynomials, Fibonacci numbers,
//!   the scaled Chebyshev recurrence, and the Worpitzky identity check.

mod combinatorial;
mod matrix;
mod poly;

pub use combinatorial::{
    binomial, binomial_big, elementary_symmetric, eulerian, eulerian_explicit, eulerian_row,
    factorial, fibonacci, scaled_chebyshev, stirling_first_unsigned, stirling_row,
    verify_worpitzky, worpitzky_holds_with_weights,
};
pub use matrix::RatMatrix;
pub use poly::{poly_mat_det, PolyError, RatPolynomial};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type ExactRational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

/// Shorthand for the reduced fraction `num/den`.  Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// Promote a big integer to a rational.
pub fn rat_big(n: BigInt) -> ExactRational {
    ExactRational::from_integer(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer part in rational literal: {0:?}")]
    BadInteger(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}

/// Parse `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<ExactRational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| ParseRationalError::BadInteger(t.to_string()))
    };
    match s.split_once('/') {
        None => Ok(ExactRational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den == BigInt::from(0) {
                return Err(ParseRationalError::ZeroDenominator);
            }
            Ok(ExactRational::new(num, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("17").unwrap(), rat_int(17));
        assert_eq!(parse_rational(" -5 / 10 ").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn display_is_reduced_with_positive_denominator() {
        assert_eq!(rat(10, -4).to_string(), "-5/2");
        assert_eq!(rat(8, 4).to_string(), "2");
        assert_eq!(rat(0, 7).to_string(), "0");
    }
}
