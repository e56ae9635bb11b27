//! Floating-point spectrum of the Laplacian and its reconciliation with the
//! exact factorization of the characteristic polynomial.

use thiserror::Error;

use crate::linalg::{IntPolynomial, RationalMatrix};
use crate::reference;

/// Off-diagonal Frobenius norm at which Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
/// Width of the exact bisection brackets around each factor root.
pub const ROOT_TOLERANCE: f64 = 1e-12;
/// Neighbouring eigenvalues closer than this are one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
/// Gap used when the primary clustering disagrees with the table.
pub const CLUSTER_FALLBACK_GAP: f64 = 1e-6;
/// Largest accepted distance between a numeric eigenvalue and its exact root.
pub const MATCH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("characteristic polynomial does not equal the product of the given factors")]
    FactorMismatch,
    #[error("multiplicity mismatch: {0}")]
    MultiplicityMismatch(String),
}

/// Sorted eigenvalues with the worst eigenpair residual `max ‖Av − λv‖∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSpectrum {
    pub values: Vec<f64>,
    pub residual: f64,
    pub sweeps: usize,
}

impl NumericSpectrum {
    /// `index,eigenvalue` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{v:.15}\n"));
        }
        out
    }
}

/// Cyclic Jacobi rotations on a dense symmetric matrix. Returns eigenvalues
/// (unsorted), eigenvectors as columns of the second result, and sweeps used.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>, usize) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut sweeps = 0;
    for sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q))).map(|(p, q)| a[p][q] * a[p][q]).sum::<f64>().sqrt();
        if off < JACOBI_TOLERANCE {
            break;
        }
        sweeps = sweep + 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let g = 100.0 * apq.abs();
                if sweep > 4 && a[p][p].abs() + g == a[p][p].abs() && a[q][q].abs() + g == a[q][q].abs() {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (apk, aqk) = (*x, *y);
                    *x = c * apk - s * aqk;
                    *y = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v, sweeps)
}

/// All eigenvalues of a symmetric rational matrix, ascending.
pub fn numeric_eigenvalues(m: &RationalMatrix) -> Result<NumericSpectrum, SpectralError> {
    if !m.is_symmetric() {
        return Err(SpectralError::NonSymmetric);
    }
    let a = m.to_f64_rows();
    let n = a.len();
    let (values, vectors, sweeps) = jacobi_eigen(a.clone());
    let mut residual: f64 = 0.0;
    for (k, lambda) in values.iter().enumerate() {
        for i in 0..n {
            let av: f64 = (0..n).map(|j| a[i][j] * vectors[j][k]).sum();
            residual = residual.max((av - lambda * vectors[i][k]).abs());
        }
    }
    let mut values = values;
    values.sort_by(f64::total_cmp);
    Ok(NumericSpectrum { values, residual, sweeps })
}

/// One distinct eigenvalue: a real root of an exact factor.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEntry {
    pub factor: IntPolynomial,
    pub factor_index: usize,
    /// Position among the factor's real roots, ascending.
    pub root_index: usize,
    pub closed_form_hint: String,
    pub multiplicity: usize,
    pub numeric: f64,
}

/// Distinct eigenvalues ascending, each tied to its exact factor.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTable {
    pub entries: Vec<SpectralEntry>,
}

impl SpectralTable {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `Σ multiplicity · root`, i.e. the trace.
    pub fn trace(&self) -> f64 {
        self.entries.iter().map(|e| e.multiplicity as f64 * e.numeric).sum()
    }

    /// `(1/n) Σ multiplicity / (root + a)`.
    pub fn mean_resolvent(&self, a: f64) -> f64 {
        let n = self.total_multiplicity() as f64;
        self.entries.iter().map(|e| e.multiplicity as f64 / (e.numeric + a)).sum::<f64>() / n
    }

    /// `factor,root_index,numeric,multiplicity` rows in ascending order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("factor,root_index,numeric,multiplicity\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{:.12},{}\n", e.factor, e.root_index, e.numeric, e.multiplicity));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "factor": e.factor.to_json(),
                        "factor_text": e.factor.to_string(),
                        "root_index": e.root_index,
                        "closed_form": e.closed_form_hint,
                        "multiplicity": e.multiplicity,
                        "numeric": e.numeric,
                    })
                })
                .collect(),
        )
    }
}

/// Table for an arbitrary factorization `p = Π fᵢ^eᵢ`.
pub fn spectral_table_from_factors(
    p: &IntPolynomial,
    factors: &[(IntPolynomial, u32)],
    hint: impl Fn(usize, usize) -> Option<String>,
) -> Result<SpectralTable, SpectralError> {
    let product = factors.iter().fold(IntPolynomial::one(), |acc, (f, e)| &acc * &f.pow(*e));
    if &product != p {
        return Err(SpectralError::FactorMismatch);
    }
    let mut entries = Vec::new();
    for (fi, (f, e)) in factors.iter().enumerate() {
        for (ri, root) in f.real_roots(ROOT_TOLERANCE).into_iter().enumerate() {
            entries.push(SpectralEntry {
                factor: f.clone(),
                factor_index: fi,
                root_index: ri,
                closed_form_hint: hint(fi, ri).unwrap_or_else(|| format!("root {ri} of {f}")),
                multiplicity: *e as usize,
                numeric: root,
            });
        }
    }
    entries.sort_by(|a, b| a.numeric.total_cmp(&b.numeric));
    Ok(SpectralTable { entries })
}

/// Table for the buckyball factorization.
pub fn build_spectral_table(p: &IntPolynomial) -> Result<SpectralTable, SpectralError> {
    spectral_table_from_factors(p, &reference::charpoly_factors(), |f, r| {
        reference::closed_form(f, r).map(str::to_string)
    })
}

/// Splits sorted values wherever consecutive values differ by more than `gap`.
pub fn cluster(sorted: &[f64], gap: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some(c) if v - c[c.len() - 1] <= gap => c.push(v),
            _ => out.push(vec![v]),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub cluster_count: usize,
    pub cluster_sizes: Vec<usize>,
    pub max_deviation: f64,
    pub within_tolerance: bool,
}

/// Matches clustered numeric eigenvalues to the table in ascending order.
pub fn cross_validate(num: &NumericSpectrum, table: &SpectralTable) -> Result<CrossValidation, SpectralError> {
    let expected = table.multiplicities();
    let mut clusters = cluster(&num.values, CLUSTER_TOLERANCE);
    let sizes = |c: &[Vec<f64>]| c.iter().map(Vec::len).collect::<Vec<_>>();
    if sizes(&clusters) != expected {
        let fallback = cluster(&num.values, CLUSTER_FALLBACK_GAP);
        if sizes(&fallback) == expected {
            clusters = fallback;
        }
    }
    if clusters.len() != table.entries.len() {
        return Err(SpectralError::MultiplicityMismatch(format!(
            "{} clusters for {} table rows",
            clusters.len(),
            table.entries.len()
        )));
    }
    let mut max_deviation: f64 = 0.0;
    for (c, e) in clusters.iter().zip(&table.entries) {
        if c.len() != e.multiplicity {
            return Err(SpectralError::MultiplicityMismatch(format!(
                "eigenvalue {:.6} appears {} times, expected {}",
                e.numeric,
                c.len(),
                e.multiplicity
            )));
        }
        for v in c {
            max_deviation = max_deviation.max((v - e.numeric).abs());
        }
    }
    Ok(CrossValidation {
        cluster_count: clusters.len(),
        cluster_sizes: sizes(&clusters),
        max_deviation,
        within_tolerance: max_deviation <= MATCH_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::buckyball;
    use crate::linalg::{int, ratio};

    #[test]
    fn diagonal_input() {
        let m = RationalMatrix::diagonal_matrix(&[int(3), int(1), int(2)]);
        let s = numeric_eigenvalues(&m).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![0, 1]]);
        assert_eq!(numeric_eigenvalues(&m), Err(SpectralError::NonSymmetric));
    }

    #[test]
    fn small_dense_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let m = RationalMatrix::from_fn(2, 2, |i, j| if i == j { int(2) } else { ratio(1, 1) });
        let s = numeric_eigenvalues(&m).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-14 && (s.values[1] - 3.0).abs() < 1e-14);
        assert!(s.residual < 1e-12);
    }

    #[test]
    fn buckyball_extremes() {
        let s = numeric_eigenvalues(&buckyball().laplacian()).unwrap();
        assert_eq!(s.values.len(), 60);
        assert!(s.residual <= 1e-10);
        assert!(s.values[0].abs() < 1e-10);
        assert!((s.values[59] - (9.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!(s.values.iter().all(|&v| (-1e-12..6.0).contains(&v)));
        let twos = s.values.iter().filter(|v| (*v - 2.0).abs() < 1e-8).count();
        assert_eq!(twos, 9);
    }

    #[test]
    fn cluster_splits_on_gaps() {
        let c = cluster(&[0.0, 1e-10, 1.0, 1.0 + 5e-9, 2.0], 1e-8);
        assert_eq!(c.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2, 1]);
    }

    #[test]
    fn factor_mismatch_detected() {
        let p = IntPolynomial::from_i64(&[0, 1]);
        assert_eq!(build_spectral_table(&p), Err(SpectralError::FactorMismatch));
    }
}
