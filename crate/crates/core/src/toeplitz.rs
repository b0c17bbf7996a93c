//! Canonical block Toeplitz form and displacement representations.
//!
//! A [`ToeplitzSpec`] stores the diagonal block `A_0`, the lower entries
//! `A_1..A_{n-1}` and the upper vector entries `Ω_1..Ω_{n-1}`. The built
//! matrix `T(A,Ω) + 𝐀_0` has block `(i,j)` equal to `A_{i-j}` below the
//! diagonal, `Ω_{j-i}*` above it and `A_0` on it. The upper triangle
//! therefore holds adjoints of the stored entries, which makes
//! `T(A,Ω)* = T(Ω,A)`.

use serde::{Deserialize, Serialize};

use crate::algebra::CommAlgebra;
use crate::block::{basis_row, displacement, shift_x, BlockColumn, BlockMatrix, BlockRow};
use crate::error::{mismatch, Result};
use crate::matrix::DenseMat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ToeplitzSpec {
    d: usize,
    diag: DenseMat,
    lower: Vec<DenseMat>,
    upper: Vec<DenseMat>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n: usize,
    d: usize,
    diag: DenseMat,
    lower: Vec<DenseMat>,
    upper: Vec<DenseMat>,
}

impl TryFrom<RawSpec> for ToeplitzSpec {
    type Error = crate::error::Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        if raw.n == 0 || raw.lower.len() + 1 != raw.n {
            return Err(mismatch(format!("n = {} but {} lower entries given", raw.n, raw.lower.len())));
        }
        if raw.diag.dim() != raw.d {
            return Err(mismatch(format!("d = {} but diag is {1}×{1}", raw.d, raw.diag.dim())));
        }
        ToeplitzSpec::new(raw.diag, raw.lower, raw.upper)
    }
}

impl From<ToeplitzSpec> for RawSpec {
    fn from(s: ToeplitzSpec) -> Self {
        RawSpec { n: s.n(), d: s.d, diag: s.diag, lower: s.lower, upper: s.upper }
    }
}

/// `Δ(M) = A·P_0 + P_0*·Ω*` with `Ω_0 = 0`; the whole `(0,0)` block of
/// `Δ(M)` sits in `A_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisplacementForm {
    pub a: BlockColumn,
    pub omega: BlockColumn,
}

/// `M − S_X·M·S_X* = A·P_0 + P_0*·B*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SxDisplacementForm {
    pub a: BlockColumn,
    pub b: BlockColumn,
}

impl ToeplitzSpec {
    /// `lower[k-1] = A_k` and `upper[k-1] = Ω_k` for `k = 1..n-1`.
    pub fn new(diag: DenseMat, lower: Vec<DenseMat>, upper: Vec<DenseMat>) -> Result<Self> {
        let d = diag.dim();
        if lower.len() != upper.len() {
            return Err(mismatch(format!("{} lower entries but {} upper entries", lower.len(), upper.len())));
        }
        if let Some(bad) = lower.iter().chain(&upper).find(|m| m.dim() != d) {
            return Err(mismatch(format!("entry is {0}×{0}, diag is {d}×{d}", bad.dim())));
        }
        Ok(Self { d, diag, lower, upper })
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        assert!(n >= 1, "block order must be positive");
        Self {
            d,
            diag: DenseMat::zeros(d),
            lower: vec![DenseMat::zeros(d); n - 1],
            upper: vec![DenseMat::zeros(d); n - 1],
        }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self { diag: DenseMat::identity(d), ..Self::zeros(n, d) }
    }

    /// Build from zero-headed vectors `A`, `Ω` and the diagonal block.
    pub fn from_vectors(diag: DenseMat, a: &BlockColumn, omega: &BlockColumn) -> Result<Self> {
        if a.len() != omega.len() || a.is_empty() {
            return Err(mismatch("vectors A and Ω must have the same positive length"));
        }
        Self::new(diag, a.entries()[1..].to_vec(), omega.entries()[1..].to_vec())
    }

    pub fn n(&self) -> usize {
        self.lower.len() + 1
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `A_0`.
    pub fn diag(&self) -> &DenseMat {
        &self.diag
    }

    /// `A_k` for `1 ≤ k ≤ n-1`.
    pub fn lower(&self, k: usize) -> &DenseMat {
        &self.lower[k - 1]
    }

    /// `Ω_k` for `1 ≤ k ≤ n-1`.
    pub fn upper(&self, k: usize) -> &DenseMat {
        &self.upper[k - 1]
    }

    pub fn lower_entries(&self) -> &[DenseMat] {
        &self.lower
    }

    pub fn upper_entries(&self) -> &[DenseMat] {
        &self.upper
    }

    /// The zero-headed column `A = (0, A_1, …, A_{n-1})ᵀ`.
    pub fn lower_column(&self) -> BlockColumn {
        zero_headed(self.d, &self.lower)
    }

    /// The zero-headed column `Ω = (0, Ω_1, …, Ω_{n-1})ᵀ`.
    pub fn upper_column(&self) -> BlockColumn {
        zero_headed(self.d, &self.upper)
    }

    /// `𝐀_0 = diag(A_0, …, A_0)`.
    pub fn diag_matrix(&self) -> BlockMatrix {
        BlockMatrix::block_diagonal(self.n(), &self.diag)
    }

    /// The spec of the adjoint matrix: `(T(A,Ω) + 𝐀_0)* = T(Ω,A) + 𝐀_0*`.
    pub fn adjoint(&self) -> Self {
        Self { d: self.d, diag: self.diag.adjoint(), lower: self.upper.clone(), upper: self.lower.clone() }
    }

    pub fn with_diag(&self, diag: DenseMat) -> Result<Self> {
        Self::new(diag, self.lower.clone(), self.upper.clone())
    }

    /// Every stored entry lies in `alg`.
    pub fn entries_in(&self, alg: &CommAlgebra) -> bool {
        std::iter::once(&self.diag).chain(&self.lower).chain(&self.upper).all(|m| alg.contains(m))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.upper.iter().all(DenseMat::is_zero)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.lower.iter().all(DenseMat::is_zero)
    }

    /// Lay out `T(A,Ω) + 𝐀_0`.
    pub fn build(&self) -> BlockMatrix {
        let n = self.n();
        let upper_adj: Vec<DenseMat> = self.upper.iter().map(DenseMat::adjoint).collect();
        let mut m = BlockMatrix::zeros(n, self.d);
        for i in 0..n {
            for j in 0..n {
                let b = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => self.diag.clone(),
                    std::cmp::Ordering::Greater => self.lower[i - j - 1].clone(),
                    std::cmp::Ordering::Less => upper_adj[j - i - 1].clone(),
                };
                m.set_block(i, j, b).expect("in range");
            }
        }
        m
    }

    /// Read a spec off a block matrix whose block diagonals are constant.
    /// With `alg` given, every entry must also lie in it.
    pub fn recognize(m: &BlockMatrix, alg: Option<&CommAlgebra>) -> Option<Self> {
        let n = m.n();
        let diag = m.block(0, 0).clone();
        let lower: Vec<DenseMat> = (1..n).map(|k| m.block(k, 0).clone()).collect();
        let upper: Vec<DenseMat> = (1..n).map(|k| m.block(0, k).adjoint()).collect();
        for i in 1..n {
            for j in 1..n {
                if m.block(i, j) != m.block(i - 1, j - 1) {
                    return None;
                }
            }
        }
        let spec = Self { d: m.d(), diag, lower, upper };
        match alg {
            Some(alg) if !spec.entries_in(alg) => None,
            _ => Some(spec),
        }
    }
}

fn zero_headed(d: usize, tail: &[DenseMat]) -> BlockColumn {
    let mut entries = Vec::with_capacity(tail.len() + 1);
    entries.push(DenseMat::zeros(d));
    entries.extend_from_slice(tail);
    BlockColumn::new(d, entries).expect("entries share d")
}

/// `A·P_0 + P_0*·B*` for columns `A`, `B`.
pub fn first_row_col(a: &BlockColumn, b: &BlockColumn) -> Result<BlockMatrix> {
    let p0 = basis_row(0, a.len(), a.d())?;
    a.outer(&p0)?.checked_add(&p0.adjoint().outer(&b.adjoint())?)
}

/// Write `Δ(M) = A·P_0 + P_0*·Ω*` when `M` is block Toeplitz.
///
/// Returns `None` exactly when some block of `Δ(M)` off the first row and
/// column is nonzero, which happens exactly when `M` is not block Toeplitz.
pub fn displacement_form(m: &BlockMatrix) -> Option<DisplacementForm> {
    let delta = displacement(m);
    let n = m.n();
    for i in 1..n {
        for j in 1..n {
            if !delta.block(i, j).is_zero() {
                return None;
            }
        }
    }
    let a = delta.column(0);
    let first_row = delta.row(0);
    let mut omega_entries = vec![DenseMat::zeros(m.d())];
    omega_entries.extend(first_row.entries()[1..].iter().map(DenseMat::adjoint));
    let omega = BlockColumn::new(m.d(), omega_entries).expect("entries share d");
    let rebuilt = first_row_col(&a, &omega).expect("shapes agree");
    (rebuilt == delta).then_some(DisplacementForm { a, omega })
}

/// Write `M − S_X·M·S_X* = A·P_0 + P_0*·B*` when `M` is block Toeplitz.
///
/// Starting from `Δ(M) = A'·P_0 + P_0*·Ω'*` and `S = S_X − E` with
/// `E = X⋄P_0*P_{n-1}`:
///
/// ```text
/// A = A' − (S_X·M·P_{n-1}*)·X*
/// B = Ω' − (S_X·M*·P_{n-1}*)·X* + P_0*·(X·M_{n-1,n-1}*·X*)
/// ```
///
/// Products with `X*` are taken on the right, which is the order the block
/// products produce; it agrees with left multiplication whenever `X`
/// commutes with the entries. The identity is checked before returning.
pub fn sx_displacement_form(m: &BlockMatrix, x: &DenseMat) -> Result<Option<SxDisplacementForm>> {
    let (n, d) = (m.n(), m.d());
    let sx = shift_x(n, d, x)?;
    let Some(DisplacementForm { a: a_prime, omega: omega_prime }) = displacement_form(m) else {
        return Ok(None);
    };
    let last = basis_row(n - 1, n, d)?.adjoint();
    let x_adj = x.adjoint();

    let col_m = sx.mul_column(&m.mul_column(&last)?)?;
    let a = a_prime.checked_sub(&scale_right(&col_m, &x_adj))?;

    let m_adj = m.adjoint();
    let col_madj = sx.mul_column(&m_adj.mul_column(&last)?)?;
    let corner = &(x * &m.block(n - 1, n - 1).adjoint()) * &x_adj;
    let mut head = vec![DenseMat::zeros(d); n];
    head[0] = corner;
    let head = BlockColumn::new(d, head)?;
    let b = omega_prime.checked_sub(&scale_right(&col_madj, &x_adj))?.checked_add(&head)?;

    let lhs = m.checked_sub(&(&(&sx * m) * &sx.adjoint()))?;
    let rhs = first_row_col(&a, &b)?;
    Ok((lhs == rhs).then_some(SxDisplacementForm { a, b }))
}

fn scale_right(col: &BlockColumn, x: &DenseMat) -> BlockColumn {
    use crate::block::Diamond;
    col.diamond_right(x).expect("dimensions agree")
}

/// `P_0*·P_0`, the displacement of the identity.
pub fn corner_unit(n: usize, d: usize) -> BlockMatrix {
    let p0: BlockRow = basis_row(0, n, d).expect("n ≥ 1");
    p0.adjoint().outer(&p0).expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn s(v: &str) -> DenseMat {
        DenseMat::scalar(1, v.parse().unwrap())
    }

    fn scalar_spec(diag: &str, lower: &[&str], upper: &[&str]) -> ToeplitzSpec {
        ToeplitzSpec::new(s(diag), lower.iter().map(|v| s(v)).collect(), upper.iter().map(|v| s(v)).collect()).unwrap()
    }

    fn scalar_matrix(rows: &[&[&str]]) -> BlockMatrix {
        BlockMatrix::from_dense(&DenseMat::parse_rows(rows).unwrap(), 1).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(scalar_spec("5", &["2"], &["7"]).build(), scalar_matrix(&[&["5", "7"], &["2", "5"]]));
        // Upper vector entries appear adjointed.
        assert_eq!(scalar_spec("0", &["1+i"], &["2+3i"]).build(), scalar_matrix(&[&["0", "2-3i"], &["1+i", "0"]]));
        assert!(ToeplitzSpec::zeros(4, 2).build().is_zero());
    }

    #[test]
    fn recognize_examples() {
        let m = scalar_matrix(&[&["5", "7"], &["2", "5"]]);
        assert_eq!(ToeplitzSpec::recognize(&m, None), Some(scalar_spec("5", &["2"], &["7"])));
        assert_eq!(ToeplitzSpec::recognize(&scalar_matrix(&[&["1", "0"], &["0", "2"]]), None), None);
        let spec = scalar_spec("1", &["2", "3+i", "-4"], &["i", "0", "1/2"]);
        assert_eq!(ToeplitzSpec::recognize(&spec.build(), None), Some(spec));
    }

    #[test]
    fn recognize_with_algebra() {
        let alg = CommAlgebra::diagonal(2);
        let inside = ToeplitzSpec::identity(3, 2);
        assert!(ToeplitzSpec::recognize(&inside.build(), Some(&alg)).is_some());
        let outside = inside.with_diag(DenseMat::from_ints(&[&[0, 1], &[0, 0]]).unwrap()).unwrap();
        assert!(ToeplitzSpec::recognize(&outside.build(), None).is_some());
        assert!(ToeplitzSpec::recognize(&outside.build(), Some(&alg)).is_none());
    }

    #[test]
    fn adjoint_swaps_vectors() {
        let spec = scalar_spec("2+i", &["1", "3i"], &["-1+i", "5"]);
        assert_eq!(spec.build().adjoint(), spec.adjoint().build());
    }

    #[test]
    fn displacement_form_examples() {
        let spec = scalar_spec("3", &["1", "2i"], &["4", "-1"]);
        let form = displacement_form(&spec.build()).unwrap();
        assert_eq!(form.a.entries(), &[s("3"), s("1"), s("2i")]);
        assert_eq!(form.omega.entries(), &[s("0"), s("4"), s("-1")]);

        let form = displacement_form(&BlockMatrix::identity(3, 2)).unwrap();
        assert_eq!(form.a.entries(), &[DenseMat::identity(2), DenseMat::zeros(2), DenseMat::zeros(2)]);
        assert!(form.omega.is_zero());

        assert!(displacement_form(&scalar_matrix(&[&["1", "0"], &["0", "2"]])).is_none());
    }

    #[test]
    fn sx_form_reduces_to_plain_form_for_zero_x() {
        let spec = scalar_spec("3", &["1", "2i"], &["4", "-1"]);
        let m = spec.build();
        let sx = sx_displacement_form(&m, &DenseMat::zeros(1)).unwrap().unwrap();
        let plain = displacement_form(&m).unwrap();
        assert_eq!((sx.a, sx.b), (plain.a, plain.omega));
    }

    #[test]
    fn sx_form_on_identity() {
        // I − S_x·S_x* = [[1 − x·x̄, 0], [0, 0]].
        let x: GaussianRational = "2-i".parse().unwrap();
        let id = BlockMatrix::identity(2, 1);
        let form = sx_displacement_form(&id, &DenseMat::scalar(1, x.clone())).unwrap().unwrap();
        let residual = first_row_col(&form.a, &form.b).unwrap();
        let expected = GaussianRational::from(1) - &x * &x.conj();
        assert_eq!(residual, scalar_matrix(&[&[&expected.to_string(), "0"], &["0", "0"]]));
    }

    #[test]
    fn sx_form_rejects_non_toeplitz() {
        let m = scalar_matrix(&[&["1", "0"], &["0", "2"]]);
        assert!(sx_displacement_form(&m, &s("3")).unwrap().is_none());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":2,"d":1,"diag":[["5"]],"lower":[[["2"]]],"upper":[[["7"]]]}"#;
        let spec: ToeplitzSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, scalar_spec("5", &["2"], &["7"]));
        assert_eq!(serde_json::to_string(&spec).unwrap(), text);
        let bad = r#"{"n":3,"d":1,"diag":[["5"]],"lower":[[["2"]]],"upper":[[["7"]]]}"#;
        assert!(serde_json::from_str::<ToeplitzSpec>(bad).is_err());
    }
}
