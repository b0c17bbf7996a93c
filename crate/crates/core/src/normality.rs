//! Normality of block Toeplitz matrices with commuting entries.

use serde::Serialize;

use crate::algebra::CommAlgebra;
use crate::block::BlockMatrix;
use crate::error::{Error, Result};
use crate::laws::commutant_sx_classify;
use crate::matrix::DenseMat;
use crate::toeplitz::ToeplitzSpec;

/// `𝐌*𝐌 − 𝐌𝐌*`.
pub fn normal_defect(m: &BlockMatrix) -> BlockMatrix {
    let adj = m.adjoint();
    &(&adj * m) - &(m * &adj)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffDiagonalSum {
    pub i: usize,
    pub j: usize,
    pub sum: DenseMat,
}

/// The two families of block sums whose vanishing characterizes normality.
///
/// `diagonal[p] = Σ_{k≠p} (M_{k,p}*M_{k,p} − M_{p,k}M_{p,k}*)` and, for
/// `i < j`, `Σ_k (M_{k,i}*M_{k,j} − M_{i,k}M_{j,k}*)`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectSums {
    pub diagonal: Vec<DenseMat>,
    pub off_diagonal: Vec<OffDiagonalSum>,
}

impl DefectSums {
    pub fn all_zero(&self) -> bool {
        self.diagonal.iter().all(DenseMat::is_zero) && self.off_diagonal.iter().all(|o| o.sum.is_zero())
    }
}

pub fn defect_sums(m: &BlockMatrix) -> DefectSums {
    let (n, d) = (m.n(), m.d());
    let term = |acc: &mut DenseMat, a: &DenseMat, b: &DenseMat, c: &DenseMat, e: &DenseMat| {
        *acc = &(&*acc + &(a * b)) - &(c * e);
    };
    let diagonal = (0..n)
        .map(|p| {
            let mut acc = DenseMat::zeros(d);
            for k in (0..n).filter(|&k| k != p) {
                let (kp, pk) = (m.block(k, p), m.block(p, k));
                term(&mut acc, &kp.adjoint(), kp, pk, &pk.adjoint());
            }
            acc
        })
        .collect();
    let mut off_diagonal = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = DenseMat::zeros(d);
            for k in 0..n {
                term(&mut acc, &m.block(k, i).adjoint(), m.block(k, j), m.block(i, k), &m.block(j, k).adjoint());
            }
            off_diagonal.push(OffDiagonalSum { i, j, sum: acc });
        }
    }
    DefectSums { diagonal, off_diagonal }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalityReport {
    pub is_normal: bool,
    /// First `(s, k)`, 1-based, whose block equation fails.
    pub criterion_witness: Option<(usize, usize)>,
    pub defect_matrix: BlockMatrix,
}

impl NormalityReport {
    /// The criterion verdict matches the defect matrix.
    pub fn consistent(&self) -> bool {
        self.is_normal == self.defect_matrix.is_zero() && self.is_normal == self.criterion_witness.is_none()
    }
}

/// `A_sA_k* + A_{n−s}*A_{n−k} − Ω_sΩ_k* − Ω_{n−s}*Ω_{n−k}` for
/// `1 ≤ s, k ≤ n−1`.
pub fn criterion_residual(spec: &ToeplitzSpec, s: usize, k: usize) -> DenseMat {
    let n = spec.n();
    let (a, w) = (|j| spec.lower(j), |j| spec.upper(j));
    let lhs = &(a(s) * &a(k).adjoint()) + &(&a(n - s).adjoint() * a(n - k));
    let rhs = &(w(s) * &w(k).adjoint()) + &(&w(n - s).adjoint() * w(n - k));
    &lhs - &rhs
}

/// Evaluate the `(n−1)²` block equations and attach the defect of the built
/// matrix for cross-checking.
pub fn normality_criterion(spec: &ToeplitzSpec) -> NormalityReport {
    let n = spec.n();
    let criterion_witness =
        (1..n).flat_map(|s| (1..n).map(move |k| (s, k))).find(|&(s, k)| !criterion_residual(spec, s, k).is_zero());
    NormalityReport {
        is_normal: criterion_witness.is_none(),
        criterion_witness,
        defect_matrix: normal_defect(&spec.build()),
    }
}

/// [`normality_criterion`] after checking that every entry lies in `alg`.
pub fn normality_criterion_in(spec: &ToeplitzSpec, alg: &CommAlgebra) -> Result<NormalityReport> {
    if !spec.entries_in(alg) {
        return Err(Error::PreconditionViolation("spec entries are not in the algebra".into()));
    }
    Ok(normality_criterion(spec))
}

/// A block Toeplitz matrix commuting with `S_X` for a unitary `X ∈ 𝒜′` is
/// normal. Returns the criterion's verdict, which should always be `true`.
pub fn circulant_normality(spec: &ToeplitzSpec, x: &DenseMat, alg: Option<&CommAlgebra>) -> Result<bool> {
    if x.dim() != spec.d() {
        return Err(crate::error::mismatch(format!(
            "X is {}×{}, blocks are {}×{}",
            x.dim(),
            x.dim(),
            spec.d(),
            spec.d()
        )));
    }
    if !x.is_unitary() {
        return Err(Error::PreconditionViolation("X is not unitary".into()));
    }
    if let Some(alg) = alg {
        if !alg.in_commutant(x) {
            return Err(Error::PreconditionViolation("X is not in the commutant".into()));
        }
    }
    if !commutant_sx_classify(&spec.build(), x)?.structural.commutes_with_sx() {
        return Err(Error::PreconditionViolation("spec does not commute with S_X".into()));
    }
    Ok(normality_criterion(spec).is_normal)
}
