//! Green matrix `G(a) = (A + aI)⁻¹`, pseudo-Green matrix `G★ = A†`, and the
//! diagonal constants they carry.
//!
//! `C₀` is obtained from the diagonal of `G★` and from the trace identity
//! `Σ 1/λ = −q′(0)/q(0)` for `P(x) = x·q(x)`. `C(a)` is obtained by fitting
//! exact samples of `G(a)₀₀`, from the closed form `−(1/n)·P′(−a)/P(−a)`,
//! and from the published coefficient lists.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exec::Execution;
use crate::linalg::{
    bareiss_solve_with_stats, fit_rational_function, fit_rational_function_auto, format_rational, int, BareissStats,
    BigInt, BigRational, IntPolynomial, LinalgError, RatPolynomial, RationalFunction, RationalMatrix,
};
use crate::reference;

/// Number of integer sample points `a = 1..=33` used for the `C(a)` fit.
pub const FIT_SAMPLES: usize = 33;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreenError {
    #[error("damping parameter must be positive, got {0}")]
    NonPositiveParameter(String),
    #[error("constant vector is not in the kernel of the matrix")]
    KernelMismatch,
    #[error("diagonal is not constant: entry {index} is {found}, entry 0 is {expected}")]
    DiagonalMismatch { index: usize, expected: String, found: String },
    #[error("routes disagree: {0}")]
    RouteMismatch(String),
    #[error("a = 0 is still a pole after subtracting the 1/({residue_den}a) term")]
    PoleRemains { residue_den: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `(1/n)·𝟙𝟙ᵗ`.
pub fn projection_e0(n: usize) -> RationalMatrix {
    RationalMatrix::filled(n, n, BigRational::new(1.into(), n.into()))
}

fn check_positive(a: &BigRational) -> Result<(), GreenError> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(GreenError::NonPositiveParameter(format_rational(a)))
    }
}

/// Selected columns of `G(a)`: an `n × cols.len()` matrix.
pub fn green_columns(
    laplacian: &RationalMatrix,
    a: &BigRational,
    cols: &[usize],
    exec: Execution,
) -> Result<RationalMatrix, GreenError> {
    check_positive(a)?;
    let n = laplacian.rows();
    let rhs = RationalMatrix::from_fn(n, cols.len(), |i, c| if i == cols[c] { int(1) } else { int(0) });
    Ok(bareiss_solve_with_stats(&laplacian.add_scalar_identity(a), &rhs, exec)?.0)
}

/// `G(a)` together with the elimination counters of the solve.
pub fn green_matrix_with(
    laplacian: &RationalMatrix,
    a: &BigRational,
    exec: Execution,
) -> Result<(RationalMatrix, BareissStats), GreenError> {
    check_positive(a)?;
    let n = laplacian.rows();
    Ok(bareiss_solve_with_stats(&laplacian.add_scalar_identity(a), &RationalMatrix::identity(n), exec)?)
}

pub fn green_matrix(laplacian: &RationalMatrix, a: &BigRational) -> Result<RationalMatrix, GreenError> {
    green_matrix_with(laplacian, a, Execution::default()).map(|(g, _)| g)
}

/// `(A + E₀)⁻¹ − E₀`, valid when the kernel of `A` is exactly the constants.
pub fn pseudo_green_with(laplacian: &RationalMatrix, exec: Execution) -> Result<(RationalMatrix, BareissStats), GreenError> {
    let n = laplacian.rows();
    let ones = vec![int(1); n];
    if laplacian.mul_vec(&ones)?.iter().any(|x| !x.is_zero()) {
        return Err(GreenError::KernelMismatch);
    }
    let e0 = projection_e0(n);
    let (inv, stats) = bareiss_solve_with_stats(&laplacian.try_add(&e0)?, &RationalMatrix::identity(n), exec)?;
    Ok((inv.try_sub(&e0)?, stats))
}

pub fn pseudo_green(laplacian: &RationalMatrix) -> Result<RationalMatrix, GreenError> {
    pseudo_green_with(laplacian, Execution::default()).map(|(g, _)| g)
}

/// Outcome of the generalized-inverse identities for `G★`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoorePenroseReport {
    /// `A·G★·A = A`
    pub aga: bool,
    /// `G★·A·G★ = G★`
    pub gag: bool,
    /// `(A·G★)ᵗ = A·G★`
    pub ag_symmetric: bool,
    /// `(G★·A)ᵗ = G★·A`
    pub ga_symmetric: bool,
    /// `A·G★ = G★·A = I − E₀`
    pub complements_e0: bool,
    /// `G★·E₀ = E₀·G★ = 0`
    pub annihilates_e0: bool,
    pub symmetric: bool,
}

impl MoorePenroseReport {
    pub fn all_hold(&self) -> bool {
        self.aga
            && self.gag
            && self.ag_symmetric
            && self.ga_symmetric
            && self.complements_e0
            && self.annihilates_e0
            && self.symmetric
    }
}

pub fn moore_penrose_check(laplacian: &RationalMatrix, g_star: &RationalMatrix) -> Result<MoorePenroseReport, GreenError> {
    let n = laplacian.rows();
    let e0 = projection_e0(n);
    let ag = laplacian.try_mul(g_star)?;
    let ga = g_star.try_mul(laplacian)?;
    let complement = RationalMatrix::identity(n).try_sub(&e0)?;
    Ok(MoorePenroseReport {
        aga: ag.try_mul(laplacian)? == *laplacian,
        gag: g_star.try_mul(&ag)? == *g_star,
        ag_symmetric: ag.is_symmetric(),
        ga_symmetric: ga.is_symmetric(),
        complements_e0: ag == complement && ga == complement,
        annihilates_e0: g_star.try_mul(&e0)?.is_zero() && e0.try_mul(g_star)?.is_zero(),
        symmetric: g_star.is_symmetric(),
    })
}

/// The common value of all diagonal entries.
pub fn constant_diagonal(m: &RationalMatrix) -> Result<BigRational, GreenError> {
    let diag = m.diagonal();
    let first = diag.first().cloned().unwrap_or_else(BigRational::zero);
    if let Some((index, found)) = diag.iter().enumerate().find(|(_, d)| **d != first) {
        return Err(GreenError::DiagonalMismatch {
            index,
            expected: format_rational(&first),
            found: format_rational(found),
        });
    }
    Ok(first)
}

pub fn c0_via_diagonal(g_star: &RationalMatrix) -> Result<BigRational, GreenError> {
    constant_diagonal(g_star)
}

/// `−(1/n)·q′(0)/q(0)` for `p = x·q`, `n = deg p`.
pub fn c0_via_trace(p: &IntPolynomial) -> Result<BigRational, GreenError> {
    let n = p.degree().unwrap_or(0);
    let (q0, q1) = (p.coeff(1), p.coeff(2));
    if n == 0 || !p.coeff(0).is_zero() || q0.is_zero() {
        return Err(GreenError::KernelMismatch);
    }
    Ok(-BigRational::new(q1, q0 * BigInt::from(n)))
}

/// `−(1/n)·P′(−a)/P(−a)` in lowest terms.
pub fn c_of_a_closed_form(p: &IntPolynomial) -> RationalFunction {
    let n = p.degree().unwrap_or(0) as i64;
    // with Q(a) = P(−a), −P′(−a) = Q′(a)
    let q = p.compose_neg();
    RationalFunction::from_int_polys(&q.derivative(), &q.scale(&n.into())).expect("charpoly is nonzero")
}

/// `(a, G(a)₀₀)` for `a = 1..=count`.
pub fn diagonal_samples(
    laplacian: &RationalMatrix,
    count: usize,
    exec: Execution,
) -> Result<Vec<(BigRational, BigRational)>, GreenError> {
    let points: Vec<i64> = (1..=count as i64).collect();
    exec.map(&points, |&k| {
        let col = green_columns(laplacian, &int(k), &[0], Execution::Sequential)?;
        Ok((int(k), col[(0, 0)].clone()))
    })
    .into_iter()
    .collect()
}

/// `C(a)` fitted from [`FIT_SAMPLES`] diagonal samples with the given degree bounds.
pub fn c_of_a_fit(
    laplacian: &RationalMatrix,
    num_deg: usize,
    den_deg: usize,
    exec: Execution,
) -> Result<RationalFunction, GreenError> {
    let samples = diagonal_samples(laplacian, FIT_SAMPLES.max(num_deg + den_deg + 2), exec)?;
    Ok(fit_rational_function(&samples, num_deg, den_deg)?)
}

/// `C(a)` with degree bounds discovered by increasing `(d, d)` until the fit
/// reproduces its held-out samples.
pub fn c_of_a_discover(laplacian: &RationalMatrix, max_deg: usize) -> Result<RationalFunction, GreenError> {
    let mut failure = None;
    let fit = fit_rational_function_auto(
        |a| match green_columns(laplacian, a, &[0], Execution::Sequential) {
            Ok(col) => col[(0, 0)].clone(),
            Err(e) => {
                failure.get_or_insert(e);
                BigRational::zero()
            }
        },
        max_deg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(fit?.0)
}

/// The three independently obtained forms of `C(a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CRoutes {
    pub fitted: RationalFunction,
    pub closed_form: RationalFunction,
    pub published: RationalFunction,
}

impl CRoutes {
    pub fn compute(laplacian: &RationalMatrix, p: &IntPolynomial, exec: Execution) -> Result<Self, GreenError> {
        Ok(Self {
            fitted: c_of_a_fit(laplacian, 14, 15, exec)?,
            closed_form: c_of_a_closed_form(p),
            published: reference::damped_constant(),
        })
    }

    /// The common value, or the names of the disagreeing routes.
    pub fn agreed(&self) -> Result<&RationalFunction, GreenError> {
        let mut bad = Vec::new();
        if self.fitted != self.closed_form {
            bad.push("fitted vs closed-form");
        }
        if self.closed_form != self.published {
            bad.push("closed-form vs published");
        }
        if self.fitted != self.published {
            bad.push("fitted vs published");
        }
        if bad.is_empty() {
            Ok(&self.fitted)
        } else {
            Err(GreenError::RouteMismatch(bad.join(", ")))
        }
    }
}

/// `1/(k·a)`.
fn simple_pole(k: &BigRational) -> RationalFunction {
    RationalFunction::new(&RatPolynomial::one(), &RatPolynomial::new(vec![BigRational::zero(), k.clone()]))
        .expect("nonzero denominator")
}

/// Value at `a = 0` of `c(a) − 1/(k·a)`.
pub fn limit_at_zero(c: &RationalFunction, k: &BigRational) -> Result<BigRational, GreenError> {
    let regular = c.sub(&simple_pole(k));
    regular.eval(&BigRational::zero()).ok_or_else(|| GreenError::PoleRemains { residue_den: format_rational(k) })
}

/// `lim_{a→0} (c(a) − 1/(n·a)) = c0`.
pub fn limit_identity_check(c: &RationalFunction, c0: &BigRational, n: usize) -> Result<bool, GreenError> {
    Ok(limit_at_zero(c, &int(n as i64))? == *c0)
}

/// Exact values strictly decrease along the (ascending) points.
pub fn monotonicity_scan(c: &RationalFunction, points: &[BigRational]) -> bool {
    let values: Vec<Option<BigRational>> = points.iter().map(|a| c.eval(a)).collect();
    values.windows(2).all(|w| matches!((&w[0], &w[1]), (Some(x), Some(y)) if x > y))
}

/// One entry of the `a → 0` limit `G(a) − E₀/a → G★`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryLimit {
    pub row: usize,
    pub col: usize,
    pub function: RationalFunction,
    pub limit: Option<BigRational>,
    pub holds: bool,
}

/// Fits `G(a)ᵢⱼ` for the requested entries and checks that
/// `G(a)ᵢⱼ − (E₀)ᵢⱼ/a` is regular at 0 with value `G★ᵢⱼ`.
///
/// Each entry has denominator dividing `Π (a + λ)` over distinct
/// eigenvalues, so the degree bounds are `(d − 1, d)` with `d` the number of
/// distinct eigenvalues.
pub fn green_limit_entries(
    laplacian: &RationalMatrix,
    g_star: &RationalMatrix,
    distinct_eigenvalues: usize,
    entries: &[(usize, usize)],
    exec: Execution,
) -> Result<Vec<EntryLimit>, GreenError> {
    let n = laplacian.rows();
    let cols: Vec<usize> = entries.iter().map(|&(_, j)| j).collect::<BTreeSet<_>>().into_iter().collect();
    let d = distinct_eigenvalues;
    // two samples beyond the minimum are held out by the fit
    let count = 2 * d + 2;
    let points: Vec<i64> = (1..=count as i64).collect();
    let solved: Vec<RationalMatrix> = exec
        .map(&points, |&k| green_columns(laplacian, &int(k), &cols, Execution::Sequential))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let e0_entry = BigRational::new(1.into(), n.into());
    let outcomes: Vec<Result<EntryLimit, GreenError>> = exec.map(entries, |&(i, j)| {
        let c = cols.binary_search(&j).expect("column was solved");
        let samples: Vec<_> = points.iter().zip(&solved).map(|(&k, m)| (int(k), m[(i, c)].clone())).collect();
        let function = fit_rational_function(&samples, d.saturating_sub(1), d)?;
        let regular = function.sub(&simple_pole(&(BigRational::one() / &e0_entry)));
        let limit = regular.eval(&BigRational::zero());
        let holds = limit.as_ref() == Some(&g_star[(i, j)]);
        Ok(EntryLimit { row: i, col: j, function, limit, holds })
    });
    outcomes.into_iter().collect()
}

/// `E₀`, `G★`, `C₀` and `C(a)` for one Laplacian.
#[derive(Clone, Debug)]
pub struct GreenBundle {
    laplacian: RationalMatrix,
    pub e0: RationalMatrix,
    pub g_star: RationalMatrix,
    pub c0: BigRational,
    pub c_of_a: RationalFunction,
}

impl GreenBundle {
    /// Builds `G★` directly and `C(a)` from the closed form over `p = charpoly(A)`.
    pub fn build(laplacian: &RationalMatrix, p: &IntPolynomial, exec: Execution) -> Result<Self, GreenError> {
        let (g_star, _) = pseudo_green_with(laplacian, exec)?;
        let c0 = c0_via_diagonal(&g_star)?;
        Ok(Self {
            laplacian: laplacian.clone(),
            e0: projection_e0(laplacian.rows()),
            g_star,
            c0,
            c_of_a: c_of_a_closed_form(p),
        })
    }

    pub fn green(&self, a: &BigRational) -> Result<RationalMatrix, GreenError> {
        green_matrix(&self.laplacian, a)
    }

    pub fn c(&self, a: &BigRational) -> Result<BigRational, GreenError> {
        check_positive(a)?;
        Ok(self.c_of_a.eval(a).expect("poles of C lie at a ≤ 0"))
    }
}
