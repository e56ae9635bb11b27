//! Exact arithmetic substrate: big rationals, dense rational matrices,
//! fraction-free elimination, integer polynomials and rational functions.

mod bareiss;
mod matrix;
mod poly;
mod ratfunc;

pub use bareiss::{bareiss_solve, bareiss_solve_with_stats, charpoly, charpoly_rational, determinant, BareissStats};
pub use matrix::RationalMatrix;
pub use poly::{IntPolynomial, RatPolynomial};
pub use ratfunc::{fit_rational_function, fit_rational_function_auto, RationalFunction};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular: no nonzero pivot in column {column}")]
    Singular { column: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rational function degree bounds ({num_deg}, {den_deg}) admit no interpolant")]
    DegreeInsufficient { num_deg: usize, den_deg: usize },
    #[error("fitted rational function disagrees with held-out sample at a = {at}")]
    VerificationFailed { at: String },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample points must be distinct")]
    RepeatedSample,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("matrix has non-integer entries")]
    NotIntegral,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Integer as a rational.
pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `p/q` as a reduced rational. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `"p/q"` rendering (always with a denominator, even when it is 1).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or `"p"`; whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<BigRational, LinalgError> {
    let bad = || LinalgError::Parse(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(LinalgError::ZeroDenominator);
    }
    Ok(BigRational::new(p, q))
}

/// Nearest double. Exact rationals here have huge numerators/denominators,
/// so naive `n as f64 / d as f64` would overflow; scale by bit length first.
pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    // keep ~64 significant bits in the quotient
    let (num, den) = if shift < 64 {
        (n << ((64 - shift) as usize), d.clone())
    } else {
        (n.clone(), d << ((shift - 64) as usize))
    };
    let q = (num / den).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi((shift - 64) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(parse_rational("239741/376200").unwrap(), ratio(239741, 376200));
        assert_eq!(parse_rational(" 10 ").unwrap(), int(10));
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert!(matches!(parse_rational("1/0"), Err(LinalgError::ZeroDenominator)));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn to_f64_large_values() {
        let c0 = ratio(239741, 376200);
        assert!((to_f64(&c0) - 0.637_270_069_112_174_3).abs() < 1e-15);
        let huge = BigRational::new(BigInt::from(3) * BigInt::from(10).pow(400), BigInt::from(10).pow(400));
        assert!((to_f64(&huge) - 3.0).abs() < 1e-15);
        assert!((to_f64(&ratio(-1, 3)) + 1.0 / 3.0).abs() < 1e-16);
    }
}
