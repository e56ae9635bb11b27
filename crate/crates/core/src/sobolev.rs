//! Energies, reproducing relations and the two discrete Sobolev inequalities
//! `(max |u|)² ≤ C·E(u)` over exact rational vectors.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::Execution;
use crate::linalg::{format_rational, int, BigRational, RationalMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SobolevError {
    #[error("edge-sum energy {edge_sum} differs from quadratic form {quadratic}")]
    FormMismatch { edge_sum: String, quadratic: String },
    #[error("vector does not have mean zero")]
    NotMeanZero,
    #[error("column {j0}: |entry {row}| exceeds the diagonal entry")]
    MaxNotAtDiagonal { j0: usize, row: usize },
    #[error("vector of length {got} for a {expected}x{expected} matrix")]
    Dimension { expected: usize, got: usize },
}

/// Real exact state `u = (u(0), …, u(n−1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    values: Vec<BigRational>,
}

impl StateVector {
    pub fn new(values: Vec<BigRational>) -> Self {
        Self { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        Self::new(vec![c; n])
    }

    pub fn delta(n: usize, j: usize) -> Self {
        Self::new((0..n).map(|i| int((i == j) as i64)).collect())
    }

    /// Column `j` of `m`.
    pub fn column(m: &RationalMatrix, j: usize) -> Self {
        Self::new(m.column(j))
    }

    /// Numerators uniform in `[−100, 100]`, denominators in `[1, 10]`, then
    /// the exact mean is subtracted when `mean_zero` is set. Stream `index`
    /// of the ChaCha generator seeded with `seed`, so every trial is
    /// reproducible on its own.
    pub fn random(n: usize, seed: u64, index: u64, mean_zero: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let values: Vec<BigRational> = (0..n)
            .map(|_| BigRational::new(rng.gen_range(-100i64..=100).into(), rng.gen_range(1i64..=10).into()))
            .collect();
        let u = Self::new(values);
        if mean_zero {
            let mean = u.sum() / BigRational::from_integer(n.into());
            Self::new(u.values.iter().map(|v| v - &mean).collect())
        } else {
            u
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn is_mean_zero(&self) -> bool {
        self.sum().is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `(max |u(j)|)²`.
    pub fn max_abs_squared(&self) -> BigRational {
        let m = self.values.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero);
        &m * &m
    }

    pub fn norm_squared(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, v| acc + v * v)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.values.iter().map(|v| v * s).collect())
    }
}

fn check_len(u: &StateVector, m: &RationalMatrix) -> Result<(), SobolevError> {
    if u.len() != m.rows() {
        return Err(SobolevError::Dimension { expected: m.rows(), got: u.len() });
    }
    Ok(())
}

fn quadratic(u: &[BigRational], m: &RationalMatrix, v: &[BigRational]) -> BigRational {
    let mv = m.mul_vec(v).expect("length checked by caller");
    u.iter().zip(&mv).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// `E(u) = Σ_{edges} |u(i) − u(j)|²`, read off the negative off-diagonal
/// weights of the Laplacian and checked against `uᵗAu`.
pub fn energy(u: &StateVector, laplacian: &RationalMatrix) -> Result<BigRational, SobolevError> {
    check_len(u, laplacian)?;
    let n = u.len();
    let x = u.values();
    let mut edge_sum = BigRational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let w = -&laplacian[(i, j)];
            if !w.is_zero() {
                let d = &x[i] - &x[j];
                edge_sum += w * &d * &d;
            }
        }
    }
    let q = quadratic(x, laplacian, x);
    if q != edge_sum {
        return Err(SobolevError::FormMismatch { edge_sum: format_rational(&edge_sum), quadratic: format_rational(&q) });
    }
    Ok(q)
}

/// `E(a, u) = E(u) + a·Σ |u(j)|²`.
pub fn energy_a(u: &StateVector, laplacian: &RationalMatrix, a: &BigRational) -> Result<BigRational, SobolevError> {
    Ok(energy(u, laplacian)? + a * u.norm_squared())
}

/// Which inequality is being exercised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Mean-zero vectors, `A`-energy, kernel `G★`.
    MeanZero,
    /// All vectors, `(A + aI)`-energy, kernel `G(a)`.
    Damped(BigRational),
}

impl Mode {
    fn form(&self, laplacian: &RationalMatrix) -> RationalMatrix {
        match self {
            Mode::MeanZero => laplacian.clone(),
            Mode::Damped(a) => laplacian.add_scalar_identity(a),
        }
    }

    fn energy(&self, u: &StateVector, laplacian: &RationalMatrix) -> Result<BigRational, SobolevError> {
        match self {
            Mode::MeanZero => energy(u, laplacian),
            Mode::Damped(a) => energy_a(u, laplacian, a),
        }
    }

    fn admit(&self, u: &StateVector) -> Result<(), SobolevError> {
        if *self == Mode::MeanZero && !u.is_mean_zero() {
            return Err(SobolevError::NotMeanZero);
        }
        Ok(())
    }
}

/// Whether `u(j) = (u, K·δⱼ)` held for every `j`, else the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproducingOutcome {
    pub holds: bool,
    pub offending: Option<usize>,
}

pub fn reproducing_check(
    u: &StateVector,
    kernel: &RationalMatrix,
    laplacian: &RationalMatrix,
    mode: &Mode,
) -> Result<ReproducingOutcome, SobolevError> {
    check_len(u, laplacian)?;
    mode.admit(u)?;
    let w = mode.form(laplacian).mul_vec(u.values()).expect("length checked");
    let n = u.len();
    let offending = (0..n).find(|&j| {
        let pairing = (0..n).fold(BigRational::zero(), |acc, i| acc + &w[i] * &kernel[(i, j)]);
        pairing != u.values()[j]
    });
    Ok(ReproducingOutcome { holds: offending.is_none(), offending })
}

/// One exact comparison `lhs ≤ c·energy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub lhs: BigRational,
    pub energy: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

impl Trial {
    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn sobolev_trial(
    u: &StateVector,
    c: &BigRational,
    laplacian: &RationalMatrix,
    mode: &Mode,
) -> Result<Trial, SobolevError> {
    mode.admit(u)?;
    let lhs = u.max_abs_squared();
    let energy = mode.energy(u, laplacian)?;
    let rhs = c * &energy;
    let holds = lhs <= rhs;
    Ok(Trial { lhs, energy, rhs, holds })
}

/// The equality chain for the kernel column `K·δⱼ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityWitness {
    pub j0: usize,
    /// `K(j0, j0)`, the sharp constant.
    pub constant: BigRational,
    /// Energy of the column; equals `constant` when the chain holds.
    pub energy: BigRational,
    /// `(max |K(·, j0)|)²`.
    pub lhs: BigRational,
    pub equality: bool,
}

pub fn equality_witness(
    kernel: &RationalMatrix,
    laplacian: &RationalMatrix,
    j0: usize,
    mode: &Mode,
) -> Result<EqualityWitness, SobolevError> {
    let column = StateVector::column(kernel, j0);
    let constant = kernel[(j0, j0)].clone();
    if let Some(row) = column.values().iter().position(|v| v.abs() > constant) {
        return Err(SobolevError::MaxNotAtDiagonal { j0, row });
    }
    let energy = mode.energy(&column, laplacian)?;
    let lhs = column.max_abs_squared();
    let equality = energy == constant && lhs == &constant * &energy;
    Ok(EqualityWitness { j0, constant, energy, lhs, equality })
}

/// The Schwarz step for one `j`: `|(u, G★δⱼ)_A|² ≤ E(u)·E(G★δⱼ)` and
/// `|u(j)|² ≤ E(u)·C₀`.
pub fn schwarz_check(
    u: &StateVector,
    g_star: &RationalMatrix,
    laplacian: &RationalMatrix,
    c0: &BigRational,
    j: usize,
) -> Result<bool, SobolevError> {
    Mode::MeanZero.admit(u)?;
    let col = StateVector::column(g_star, j);
    let pairing = quadratic(u.values(), laplacian, col.values());
    let eu = energy(u, laplacian)?;
    let ecol = energy(&col, laplacian)?;
    let uj = &u.values()[j];
    Ok(&pairing * &pairing <= &eu * &ecol && uj * uj <= &eu * c0)
}

/// One randomized trial with its seed coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub index: u64,
    pub trial: Trial,
}

impl TrialRecord {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "index": self.index,
            "lhs": format_rational(&self.trial.lhs),
            "energy": format_rational(&self.trial.energy),
            "rhs": format_rational(&self.trial.rhs),
            "holds": self.trial.holds,
        })
    }
}

/// `count` random trials; mean-zero vectors for [`Mode::MeanZero`].
pub fn run_trials(
    laplacian: &RationalMatrix,
    c: &BigRational,
    mode: &Mode,
    seed: u64,
    count: u64,
    exec: Execution,
) -> Result<Vec<TrialRecord>, SobolevError> {
    let n = laplacian.rows();
    let mean_zero = *mode == Mode::MeanZero;
    let indices: Vec<u64> = (0..count).collect();
    exec.map(&indices, |&index| {
        let u = StateVector::random(n, seed, index, mean_zero);
        sobolev_trial(&u, c, laplacian, mode).map(|trial| TrialRecord { index, trial })
    })
    .into_iter()
    .collect()
}

/// One JSON object per line.
pub fn trials_to_jsonl(records: &[TrialRecord]) -> String {
    records.iter().map(|r| format!("{}\n", r.to_json())).collect()
}
