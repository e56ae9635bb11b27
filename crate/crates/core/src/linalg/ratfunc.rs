use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{format_rational, int, BigRational, IntPolynomial, LinalgError, RatPolynomial};

/// Quotient of integer polynomials in lowest terms.
///
/// Normal form: `gcd(num, den) = 1` over the rationals, the coefficients of
/// `num` and `den` taken together have gcd 1, and `den` has a positive
/// leading coefficient. Two equal rational functions therefore have
/// identical coefficient sequences.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunction {
    pub fn new(num: &RatPolynomial, den: &RatPolynomial) -> Result<Self, LinalgError> {
        if den.is_zero() {
            return Err(LinalgError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self { num: IntPolynomial::zero(), den: IntPolynomial::one() });
        }
        let g = num.gcd(den);
        let n = num.div_rem(&g).0;
        let d = den.div_rem(&g).0;
        // joint clearing of denominators and content
        let l = n
            .coeffs()
            .iter()
            .chain(d.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let to_int = |p: &RatPolynomial| -> Vec<BigInt> { p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect() };
        let (ni, di) = (to_int(&n), to_int(&d));
        let mut content = ni.iter().chain(&di).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if di.last().is_some_and(Signed::is_negative) {
            content = -content;
        }
        Ok(Self {
            num: IntPolynomial::new(ni.into_iter().map(|c| c / &content).collect()),
            den: IntPolynomial::new(di.into_iter().map(|c| c / &content).collect()),
        })
    }

    pub fn from_int_polys(num: &IntPolynomial, den: &IntPolynomial) -> Result<Self, LinalgError> {
        Self::new(&num.to_rational(), &den.to_rational())
    }

    pub fn constant(c: &BigRational) -> Self {
        Self::new(&RatPolynomial::constant(c.clone()), &RatPolynomial::one()).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.den
    }

    /// `None` at a pole.
    pub fn eval(&self, at: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(at);
        (!d.is_zero()).then(|| self.num.eval(at) / d)
    }

    pub fn has_pole_at(&self, at: &BigRational) -> bool {
        self.den.eval(at).is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, c, d) = self.parts(other);
        Self::new(&(&(&a * &d) + &(&c * &b)), &(&b * &d)).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, c, d) = self.parts(other);
        Self::new(&(&(&a * &d) - &(&c * &b)), &(&b * &d)).expect("product of nonzero denominators")
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.num.to_rational().scale(s), &self.den.to_rational()).expect("nonzero denominator")
    }

    fn parts(&self, other: &Self) -> (RatPolynomial, RatPolynomial, RatPolynomial, RatPolynomial) {
        (self.num.to_rational(), self.den.to_rational(), other.num.to_rational(), other.den.to_rational())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[{self}]")
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Fits `N/D` with `deg N ≤ num_deg`, `deg D ≤ den_deg` through the samples.
///
/// The homogeneous system `value·D(a) − N(a) = 0` is built from all samples
/// except the last two, which are held out and must be reproduced exactly.
/// With only `num_deg + den_deg + 2` samples a single one is held out, since
/// `num_deg + den_deg + 1` equations are the minimum that pin the quotient.
pub fn fit_rational_function(
    samples: &[(BigRational, BigRational)],
    num_deg: usize,
    den_deg: usize,
) -> Result<RationalFunction, LinalgError> {
    let needed = num_deg + den_deg + 2;
    if samples.len() < needed {
        return Err(LinalgError::TooFewSamples { needed, got: samples.len() });
    }
    for i in 0..samples.len() {
        for j in 0..i {
            if samples[i].0 == samples[j].0 {
                return Err(LinalgError::RepeatedSample);
            }
        }
    }
    let held = (samples.len() - (num_deg + den_deg + 1)).min(2);
    let (fit, held_out) = samples.split_at(samples.len() - held);
    let unknowns = num_deg + 1 + den_deg + 1;
    // unknown layout: N coefficients, then D coefficients
    let mut rows: Vec<Vec<BigRational>> = fit
        .iter()
        .map(|(a, v)| {
            let mut row = Vec::with_capacity(unknowns);
            let mut pw = BigRational::one();
            for _ in 0..=num_deg {
                row.push(-pw.clone());
                pw *= a;
            }
            let mut pw = BigRational::one();
            for _ in 0..=den_deg {
                row.push(v * &pw);
                pw *= a;
            }
            row
        })
        .collect();
    let pivots = rref(&mut rows, unknowns);
    let Some(free) = (0..unknowns).find(|c| !pivots.contains(c)) else {
        return Err(LinalgError::DegreeInsufficient { num_deg, den_deg });
    };
    let mut solution = vec![BigRational::zero(); unknowns];
    solution[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        solution[pc] = -rows[r][free].clone();
    }
    let num = RatPolynomial::new(solution[..=num_deg].to_vec());
    let den = RatPolynomial::new(solution[num_deg + 1..].to_vec());
    if den.is_zero() {
        return Err(LinalgError::DegreeInsufficient { num_deg, den_deg });
    }
    let f = RationalFunction::new(&num, &den)?;
    for (a, v) in held_out {
        if f.eval(a).as_ref() != Some(v) {
            return Err(LinalgError::VerificationFailed { at: format_rational(a) });
        }
    }
    Ok(f)
}

/// Degree-discovery fit: tries bounds `(d, d)` for `d = 0, 1, …, max_deg`,
/// sampling `sample` at the positive integers `1, 2, …` as needed, and
/// returns the first fit that survives its held-out check together with the
/// samples it consumed.
pub fn fit_rational_function_auto<F>(
    mut sample: F,
    max_deg: usize,
) -> Result<(RationalFunction, Vec<(BigRational, BigRational)>), LinalgError>
where
    F: FnMut(&BigRational) -> BigRational,
{
    let mut cache: BTreeMap<i64, BigRational> = BTreeMap::new();
    for d in 0..=max_deg {
        let count = 2 * d + 3;
        for k in 1..=count as i64 {
            cache.entry(k).or_insert_with(|| sample(&int(k)));
        }
        let samples: Vec<_> = (1..=count as i64).map(|k| (int(k), cache[&k].clone())).collect();
        match fit_rational_function(&samples, d, d) {
            Ok(f) => return Ok((f, samples)),
            Err(LinalgError::DegreeInsufficient { .. } | LinalgError::VerificationFailed { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(LinalgError::DegreeInsufficient { num_deg: max_deg, den_deg: max_deg })
}
