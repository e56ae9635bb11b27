//! Fraction-free (Bareiss) elimination over the integers.
//!
//! Rational inputs are brought to integer form by scaling each row of the
//! augmented system with the lcm of its denominators; that leaves the
//! solution unchanged and multiplies the determinant by a known factor.
//! Every intermediate entry after step `k` is a `(k+1)×(k+1)` minor of the
//! scaled matrix, so the divisions by the previous pivot are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{BigRational, IntPolynomial, LinalgError, RatPolynomial, RationalMatrix};
use crate::exec::Execution;

/// Work counters of one elimination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BareissStats {
    /// Pivot steps taken (one per eliminated column).
    pub pivot_steps: usize,
    /// Cross-multiply-and-divide entry updates.
    pub updates: u64,
    pub row_swaps: usize,
}

impl std::ops::Add for BareissStats {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            pivot_steps: self.pivot_steps + rhs.pivot_steps,
            updates: self.updates + rhs.updates,
            row_swaps: self.row_swaps + rhs.row_swaps,
        }
    }
}

/// Scales rows of `[m | rhs]` to integers. Returns the integer rows and the
/// per-row scale factors.
fn integer_rows(m: &RationalMatrix, rhs: Option<&RationalMatrix>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let extra: &[BigRational] = rhs.map_or(&[], |r| r.row(i));
        let entries: Vec<&BigRational> = m.row(i).iter().chain(extra).collect();
        let l = entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(entries.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scales.push(l);
    }
    (rows, scales)
}

/// Solves `m·X = rhs` exactly by fraction-free Gauss–Jordan elimination.
pub fn bareiss_solve(m: &RationalMatrix, rhs: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    bareiss_solve_with_stats(m, rhs, Execution::Sequential).map(|(x, _)| x)
}

/// [`bareiss_solve`] with a choice of row-update scheduling and the work
/// counters of the elimination.
pub fn bareiss_solve_with_stats(
    m: &RationalMatrix,
    rhs: &RationalMatrix,
    exec: Execution,
) -> Result<(RationalMatrix, BareissStats), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension(format!("{}x{} system matrix is not square", m.rows(), m.cols())));
    }
    if rhs.rows() != m.rows() {
        return Err(LinalgError::Dimension(format!(
            "right-hand side has {} rows, expected {}",
            rhs.rows(),
            m.rows()
        )));
    }
    let n = m.rows();
    let width = n + rhs.cols();
    let (mut rows, _) = integer_rows(m, Some(rhs));
    let mut stats = BareissStats::default();
    let mut prev = BigInt::one();

    for k in 0..n {
        // first nonzero pivot at or below the diagonal
        let p = (k..n).find(|&i| !rows[i][k].is_zero()).ok_or(LinalgError::Singular { column: k })?;
        if p != k {
            rows.swap(p, k);
            stats.row_swaps += 1;
        }
        let pivot_row = rows[k].clone();
        let pivot = &pivot_row[k];
        let prev_ref = &prev;
        exec.for_each_mut(&mut rows, |i, row| {
            if i == k {
                return;
            }
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..width {
                let updated = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = updated / prev_ref;
            }
            if i < k {
                // rows already reduced keep a single diagonal entry
                row[i] = pivot * &row[i] / prev_ref;
            }
        });
        stats.pivot_steps += 1;
        stats.updates += ((n - 1) * (width - k - 1) + k) as u64;
        prev = pivot_row[k].clone();
    }

    let x = RationalMatrix::from_fn(n, rhs.cols(), |i, c| BigRational::new(rows[i][n + c].clone(), rows[i][i].clone()));
    Ok((x, stats))
}

/// Exact determinant by forward Bareiss elimination.
pub fn determinant(m: &RationalMatrix) -> BigRational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let (rows, scales) = integer_rows(m, None);
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    BigRational::new(integer_determinant(rows, Execution::Sequential), scale)
}

pub(crate) fn integer_determinant(mut rows: Vec<Vec<BigInt>>, exec: Execution) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !rows[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            rows.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        let prev_ref = &prev;
        exec.for_each_mut(tail, |_, row| {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let updated = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = updated / prev_ref;
            }
        });
        prev = rows[k][k].clone();
    }
    let det = rows[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `det(xI − m)` at `x = 0, 1, …, n`.
fn charpoly_samples(m: &RationalMatrix, exec: Execution) -> Vec<(BigRational, BigRational)> {
    let n = m.rows();
    exec.map_range(n + 1, |x| {
        let xr = BigRational::from_integer(BigInt::from(x));
        let shifted = RationalMatrix::from_fn(n, n, |i, j| {
            let v = -m[(i, j)].clone();
            if i == j {
                v + &xr
            } else {
                v
            }
        });
        (xr, determinant(&shifted))
    })
}

/// Characteristic polynomial `det(xI − m)` of an integer matrix, by exact
/// interpolation through determinants at `n + 1` integer points.
pub fn charpoly(m: &RationalMatrix, exec: Execution) -> Result<IntPolynomial, LinalgError> {
    if !m.is_integral() {
        return Err(LinalgError::NotIntegral);
    }
    let p = charpoly_rational(m, exec)?;
    p.to_integer().ok_or(LinalgError::NotIntegral)
}

/// Rational-coefficient variant of [`charpoly`].
pub fn charpoly_rational(m: &RationalMatrix, exec: Execution) -> Result<RatPolynomial, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let samples = charpoly_samples(m, exec);
    RatPolynomial::interpolate(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ratio};

    #[test]
    fn identity_solve_returns_rhs() {
        let rhs = RationalMatrix::from_fn(3, 2, |i, j| ratio((i + 2 * j) as i64, 7));
        assert_eq!(bareiss_solve(&RationalMatrix::identity(3), &rhs).unwrap(), rhs);
    }

    #[test]
    fn two_by_two_inverse() {
        let m = RationalMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = bareiss_solve(&m, &RationalMatrix::identity(2)).unwrap();
        assert_eq!(inv, RationalMatrix::from_i64_rows(&[vec![1, -1], vec![-1, 2]]));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = RationalMatrix::from_i64_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        let inv = bareiss_solve(&m, &RationalMatrix::identity(3)).unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), RationalMatrix::identity(3));
        assert_eq!(determinant(&m), int(-2));
    }

    #[test]
    fn singular_is_reported() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(
            bareiss_solve(&m, &RationalMatrix::identity(2)),
            Err(LinalgError::Singular { column: 1 })
        ));
        assert_eq!(determinant(&m), int(0));
    }

    #[test]
    fn rational_entries() {
        let m = RationalMatrix::from_fn(2, 2, |i, j| if i == j { ratio(1, 2) } else { ratio(1, 3) });
        // det = 1/4 - 1/9 = 5/36
        assert_eq!(determinant(&m), ratio(5, 36));
        let inv = bareiss_solve(&m, &RationalMatrix::identity(2)).unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn parallel_rows_match_sequential() {
        let m = RationalMatrix::from_fn(6, 6, |i, j| int(((i * 7 + j * 3) % 5) as i64 - 2 + if i == j { 6 } else { 0 }));
        let rhs = RationalMatrix::identity(6);
        let (a, sa) = bareiss_solve_with_stats(&m, &rhs, Execution::Sequential).unwrap();
        let (b, sb) = bareiss_solve_with_stats(&m, &rhs, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert_eq!(sa.pivot_steps, 6);
    }

    #[test]
    fn charpoly_of_zero_one_by_one() {
        let p = charpoly(&RationalMatrix::zeros(1, 1), Execution::Sequential).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[0, 1]));
    }

    #[test]
    fn charpoly_rejects_fractions() {
        let m = RationalMatrix::filled(2, 2, ratio(1, 2));
        assert_eq!(charpoly(&m, Execution::Sequential), Err(LinalgError::NotIntegral));
        // x^2 - x
        let p = charpoly_rational(&m, Execution::Sequential).unwrap();
        assert_eq!(p, RatPolynomial::from_int(&IntPolynomial::from_i64(&[0, -1, 1])));
    }
}
