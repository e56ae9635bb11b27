//! Published closed forms for the buckyball Laplacian, kept as data so the
//! computed results can be compared against them literally.

use crate::linalg::{ratio, BigRational, IntPolynomial, RationalFunction};

/// Irreducible factors of `det(xI − A)` with exponents, ascending coefficients.
pub const CHARPOLY_FACTORS: [(&[i64], u32); 8] = [
    (&[0, 1], 1),
    (&[-2, 1], 9),
    (&[-5, 1], 4),
    (&[3, -5, 1], 5),
    (&[11, -7, 1], 5),
    (&[8, -7, 1], 4),
    (&[19, -9, 1], 3),
    (&[4, -22, 25, -9, 1], 3),
];

/// Numerator of the damped constant, ascending in `a`.
pub const DAMPED_NUMERATOR: [i64; 15] = [
    3344, 160806, 1153562, 3594661, 6334271, 7104785, 5406109, 2893077, 1109403, 306415, 60463, 8315, 757, 41, 1,
];

/// Factors of the damped constant's denominator, ascending in `a`.
pub const DAMPED_DENOMINATOR_FACTORS: [&[i64]; 8] = [
    &[0, 1],
    &[2, 1],
    &[5, 1],
    &[3, 5, 1],
    &[8, 7, 1],
    &[11, 7, 1],
    &[19, 9, 1],
    &[4, 22, 25, 9, 1],
];

/// Eigenvalue multiplicities in ascending eigenvalue order.
pub const MULTIPLICITIES: [usize; 15] = [1, 3, 5, 3, 4, 9, 5, 3, 3, 5, 3, 5, 4, 4, 3];

/// Two-decimal approximations of the distinct eigenvalues, ascending.
pub const APPROXIMATE_EIGENVALUES: [f64; 15] =
    [0.0, 0.24, 0.69, 1.17, 1.43, 2.0, 2.38, 3.13, 3.38, 4.30, 4.43, 4.61, 5.0, 5.56, 5.61];

/// Closed-form display text per `(factor index, root index)`, roots ascending.
pub const CLOSED_FORMS: [(usize, usize, &str); 15] = [
    (0, 0, "0"),
    (1, 0, "2"),
    (2, 0, "5"),
    (3, 0, "(5 - √13)/2"),
    (3, 1, "(5 + √13)/2"),
    (4, 0, "(7 - √5)/2"),
    (4, 1, "(7 + √5)/2"),
    (5, 0, "(7 - √17)/2"),
    (5, 1, "(7 + √17)/2"),
    (6, 0, "(9 - √5)/2"),
    (6, 1, "(9 + √5)/2"),
    (7, 0, "(9 - √5 - √(38 - 2√5))/4"),
    (7, 1, "(9 + √5 - √(38 + 2√5))/4"),
    (7, 2, "(9 - √5 + √(38 - 2√5))/4"),
    (7, 3, "(9 + √5 + √(38 + 2√5))/4"),
];

pub fn closed_form(factor: usize, root: usize) -> Option<&'static str> {
    CLOSED_FORMS.iter().find(|(f, r, _)| *f == factor && *r == root).map(|(_, _, s)| *s)
}

pub fn charpoly_factors() -> Vec<(IntPolynomial, u32)> {
    CHARPOLY_FACTORS.iter().map(|(c, e)| (IntPolynomial::from_i64(c), *e)).collect()
}

/// Product of the published factors.
pub fn charpoly_product() -> IntPolynomial {
    charpoly_factors().iter().fold(IntPolynomial::one(), |acc, (f, e)| &acc * &f.pow(*e))
}

/// Sharp constant of the mean-zero inequality.
pub fn c0() -> BigRational {
    ratio(239741, 376200)
}

pub fn damped_numerator() -> IntPolynomial {
    IntPolynomial::from_i64(&DAMPED_NUMERATOR)
}

pub fn damped_denominator() -> IntPolynomial {
    DAMPED_DENOMINATOR_FACTORS.iter().fold(IntPolynomial::one(), |acc, f| &acc * &IntPolynomial::from_i64(f))
}

/// `N(a)/D(a)` assembled from the published coefficients.
pub fn damped_constant() -> RationalFunction {
    RationalFunction::from_int_polys(&damped_numerator(), &damped_denominator()).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn product_degree_and_trace() {
        let p = charpoly_product();
        assert_eq!(p.degree(), Some(60));
        assert!(p.is_monic());
        // coefficient of x^59 is −trace(A) = −180
        assert_eq!(p.coeff(59), (-180).into());
        assert_eq!(MULTIPLICITIES.iter().sum::<usize>(), 60);
    }

    #[test]
    fn printed_roots() {
        let p = charpoly_product();
        assert_eq!(p.eval(&int(2)), int(0));
        assert_eq!(p.eval(&int(5)), int(0));
        assert_eq!(p.eval(&int(0)), int(0));
    }

    #[test]
    fn damped_constant_at_one() {
        // N(1) = 28136010, D(1) = 87119712
        assert_eq!(damped_numerator().eval(&int(1)), int(28136010));
        assert_eq!(damped_denominator().eval(&int(1)), int(87119712));
        assert_eq!(damped_constant().eval(&int(1)), Some(ratio(28136010, 87119712)));
        assert_eq!(damped_denominator().degree(), Some(15));
    }

    #[test]
    fn every_root_has_a_display_form() {
        for (i, (f, _)) in charpoly_factors().iter().enumerate() {
            for r in 0..f.degree().unwrap() {
                assert!(closed_form(i, r).is_some());
            }
        }
    }
}
