//! Half-size reduction by a fixed-point-free involutive automorphism σ.
//!
//! Relabeling so that σ(k) = k + m puts the Laplacian in the form
//! `[[A₀, A₁], [A₁, A₀]]`. Conjugating by `J = [[I, I], [I, −I]]` gives
//! `diag(A₊, A₋)` with `A± = A₀ ± A₁`, so every inverse of the full matrix
//! comes from two inverses of half the size.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exec::Execution;
use crate::graph::Involution;
use crate::green::{projection_e0, GreenError};
use crate::linalg::{
    bareiss_solve_with_stats, charpoly, determinant, int, ratio, BareissStats, BigRational, IntPolynomial, LinalgError,
    RationalMatrix,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("relabeled matrix is not of the form [[A0, A1], [A1, A0]]: {0}")]
    BlockMismatch(String),
    #[error("half spectra do not recombine: {0}")]
    SpectrumSplitMismatch(String),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The blocks of a Laplacian relabeled along an involution.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSplit {
    /// `perm[old] = new`: representatives go to `0..m` in ascending order,
    /// their partners to `m..2m`.
    pub perm: Vec<usize>,
    pub a0: RationalMatrix,
    pub a1: RationalMatrix,
    pub j_matrix: RationalMatrix,
    pub a_plus: RationalMatrix,
    pub a_minus: RationalMatrix,
}

pub fn block_split(laplacian: &RationalMatrix, sigma: &Involution) -> Result<BlockSplit, SymmetryError> {
    let n = laplacian.rows();
    if sigma.perm().len() != n || n % 2 == 1 {
        return Err(SymmetryError::BlockMismatch(format!("involution on {} points for a {n}x{n} matrix", sigma.perm().len())));
    }
    let m = n / 2;
    let mut perm = vec![0; n];
    for (k, r) in sigma.representatives().into_iter().enumerate() {
        perm[r] = k;
        perm[sigma.image(r)] = k + m;
    }
    let b = laplacian.permute_symmetric(&perm);
    let a0 = b.submatrix(0, 0, m, m);
    let a1 = b.submatrix(0, m, m, m);
    if b.submatrix(m, m, m, m) != a0 {
        return Err(SymmetryError::BlockMismatch("bottom-right block differs from top-left".into()));
    }
    if b.submatrix(m, 0, m, m) != a1 {
        return Err(SymmetryError::BlockMismatch("bottom-left block differs from top-right".into()));
    }
    let id = RationalMatrix::identity(m);
    let j_matrix = RationalMatrix::from_blocks(&id, &id, &id, &id.scale(&int(-1)))?;
    Ok(BlockSplit {
        perm,
        a_plus: a0.try_add(&a1)?,
        a_minus: a0.try_sub(&a1)?,
        a0,
        a1,
        j_matrix,
    })
}

impl BlockSplit {
    pub fn half(&self) -> usize {
        self.a0.rows()
    }

    /// `perm⁻¹`: `new → old`.
    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (old, &new) in self.perm.iter().enumerate() {
            inv[new] = old;
        }
        inv
    }

    /// The relabeled full matrix `[[A₀, A₁], [A₁, A₀]]`.
    pub fn relabeled(&self) -> RationalMatrix {
        RationalMatrix::from_blocks(&self.a0, &self.a1, &self.a1, &self.a0).expect("square blocks of equal size")
    }

    /// `J⁻¹ = J/2` and `J⁻¹·[[A₀, A₁], [A₁, A₀]]·J = diag(A₊, A₋)`.
    pub fn conjugation_check(&self) -> Result<bool, SymmetryError> {
        let m = self.half();
        let j_inv = self.j_matrix.scale(&ratio(1, 2));
        let inverse_ok = self.j_matrix.try_mul(&j_inv)? == RationalMatrix::identity(2 * m);
        let conj = j_inv.try_mul(&self.relabeled())?.try_mul(&self.j_matrix)?;
        let zero = RationalMatrix::zeros(m, m);
        let diag = RationalMatrix::from_blocks(&self.a_plus, &zero, &zero, &self.a_minus)?;
        Ok(inverse_ok && conj == diag)
    }

    pub fn to_json(&self, half_spectra: Option<&HalfSpectra>) -> serde_json::Value {
        let mut out = serde_json::json!({
            "a0": self.a0.to_json(),
            "a1": self.a1.to_json(),
            "perm": self.perm,
        });
        if let Some(h) = half_spectra {
            out["charpoly_plus"] = h.plus.to_json();
            out["charpoly_minus"] = h.minus.to_json();
        }
        out
    }
}

/// Characteristic polynomials of `A₊` and `A₋`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpectra {
    pub plus: IntPolynomial,
    pub minus: IntPolynomial,
    pub det_minus: BigRational,
}

/// Checks `charpoly(A₊)·charpoly(A₋) = p`, `A₊·𝟙 = 0` and `det A₋ > 0`.
pub fn half_spectra_check(split: &BlockSplit, p: &IntPolynomial, exec: Execution) -> Result<HalfSpectra, SymmetryError> {
    let (plus, minus) = exec.join(|| charpoly(&split.a_plus, exec), || charpoly(&split.a_minus, exec));
    let (plus, minus) = (plus?, minus?);
    if &(&plus * &minus) != p {
        return Err(SymmetryError::SpectrumSplitMismatch("charpoly(A+)·charpoly(A-) differs from charpoly(A)".into()));
    }
    let ones = vec![int(1); split.half()];
    if split.a_plus.mul_vec(&ones)?.iter().any(|x| !x.is_zero()) {
        return Err(SymmetryError::SpectrumSplitMismatch("A+ does not annihilate constants".into()));
    }
    let det_minus = determinant(&split.a_minus);
    if !det_minus.is_positive() {
        return Err(SymmetryError::SpectrumSplitMismatch("det(A-) is not positive".into()));
    }
    Ok(HalfSpectra { plus, minus, det_minus })
}

/// Result of a block-route inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockGreen {
    /// The inverse in the original labeling.
    pub matrix: RationalMatrix,
    pub g_plus: RationalMatrix,
    pub g_minus: RationalMatrix,
    pub g0: RationalMatrix,
    pub g1: RationalMatrix,
    pub plus_stats: BareissStats,
    pub minus_stats: BareissStats,
}

impl BlockGreen {
    pub fn total_stats(&self) -> BareissStats {
        self.plus_stats + self.minus_stats
    }
}

/// `G(a)` for `Some(a)`, `G★` for `None`, from the half-size blocks.
pub fn assemble_green_via_blocks(
    split: &BlockSplit,
    a: Option<&BigRational>,
    exec: Execution,
) -> Result<BlockGreen, SymmetryError> {
    let m = split.half();
    let id = RationalMatrix::identity(m);
    let e_half = projection_e0(m);
    let solve = |mat: RationalMatrix| bareiss_solve_with_stats(&mat, &id, exec);
    let ((g_plus, plus_stats), (g_minus, minus_stats)) = match a {
        Some(a) => {
            if !a.is_positive() {
                return Err(GreenError::NonPositiveParameter(crate::linalg::format_rational(a)).into());
            }
            let (p, q) = exec.join(
                || solve(split.a_plus.add_scalar_identity(a)),
                || solve(split.a_minus.add_scalar_identity(a)),
            );
            (p?, q?)
        }
        None => {
            let shifted = split.a_plus.try_add(&e_half)?;
            let (p, q) = exec.join(|| solve(shifted), || solve(split.a_minus.clone()));
            let (gp, sp) = p?;
            (((gp.try_sub(&e_half)?), sp), q?)
        }
    };
    let half = ratio(1, 2);
    let g0 = g_plus.try_add(&g_minus)?.scale(&half);
    let g1 = g_plus.try_sub(&g_minus)?.scale(&half);
    let relabeled = RationalMatrix::from_blocks(&g0, &g1, &g1, &g0)?;
    Ok(BlockGreen {
        matrix: relabeled.permute_symmetric(&split.inverse_perm()),
        g_plus,
        g_minus,
        g0,
        g1,
        plus_stats,
        minus_stats,
    })
}
