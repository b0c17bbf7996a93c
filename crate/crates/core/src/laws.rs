//! Decision procedures for products of block Toeplitz matrices and for the
//! commutants of `S`, `S*`, `S_X` and `S_X*`.
//!
//! Throughout, `𝐀 = T(A,Ω) + 𝐀_0`, `𝐁 = T(B,Λ) + 𝐁_0`, `𝐂 = T(C,Γ) + 𝐂_0` and
//! `𝐃 = T(D,Θ) + 𝐃_0`, with zero-headed vectors taken from a
//! [`ToeplitzSpec`].
//!
//! Where a block must be multiplied by a diagonal block such as `A_0`, the
//! factor is placed on the side the block product actually puts it. With all
//! entries in one commutative `*`-closed algebra the side is irrelevant; for
//! algebras that are not closed under the adjoint only this placement keeps
//! the identities exact.

use serde::Serialize;

use crate::block::{basis_row, shift, shift_x, BlockColumn, BlockMatrix, Diamond};
use crate::error::{mismatch, Error, Result};
use crate::matrix::DenseMat;
use crate::toeplitz::{first_row_col, ToeplitzSpec};

fn check_same_shape(specs: &[&ToeplitzSpec]) -> Result<()> {
    let (n, d) = (specs[0].n(), specs[0].d());
    if let Some(bad) = specs.iter().find(|s| s.n() != n || s.d() != d) {
        return Err(mismatch(format!("specs of order {n} (d={d}) and order {} (d={})", bad.n(), bad.d())));
    }
    Ok(())
}

fn head_column(n: usize, head: DenseMat) -> BlockColumn {
    let d = head.dim();
    let mut entries = vec![DenseMat::zeros(d); n];
    entries[0] = head;
    BlockColumn::new(d, entries).expect("entries share d")
}

/// `AΛ* − Ω̃B̃*` for the pair `(𝐀, 𝐁)`. Its first row and column are zero.
pub fn vector_identity_side(a: &ToeplitzSpec, b: &ToeplitzSpec) -> Result<BlockMatrix> {
    check_same_shape(&[a, b])?;
    let a_lam = a.lower_column().outer(&b.upper_column().adjoint())?;
    let om_b = a.upper_column().tilde().outer(&b.lower_column().tilde().adjoint())?;
    a_lam.checked_sub(&om_b)
}

/// The right-hand side of the product displacement formula:
///
/// ```text
/// Δ(𝐂𝐃) = CΘ* − Γ̃D̃* + [𝐂D + C·D_0 + 𝐂_0𝐃_0P_0*]P_0 + P_0*[Γ*S𝐃S* + C_0·Θ*]
/// ```
///
/// Assembled term by term from the specs, never from the product itself.
pub fn product_displacement_rhs(c: &ToeplitzSpec, d: &ToeplitzSpec) -> Result<BlockMatrix> {
    check_same_shape(&[c, d])?;
    let (n, bd) = (c.n(), c.d());
    let (c_vec, gamma) = (c.lower_column(), c.upper_column());
    let (d_vec, theta) = (d.lower_column(), d.upper_column());
    let c_mat = c.build();
    let d_mat = d.build();

    let interior = vector_identity_side(c, d)?;

    let column = c_mat
        .mul_column(&d_vec)?
        .checked_add(&c_vec.diamond_right(d.diag())?)?
        .checked_add(&head_column(n, c.diag() * d.diag()))?;

    let s = shift(n, bd);
    let sds = &(&s * &d_mat) * &s.adjoint();
    let row = gamma.adjoint().mul_matrix(&sds)?.checked_add(&theta.adjoint().diamond(c.diag())?)?;

    let p0 = basis_row(0, n, bd)?;
    interior.checked_add(&column.outer(&p0)?)?.checked_add(&p0.adjoint().outer(&row)?)
}

/// `𝐀𝐁 − 𝐂𝐃` is block Toeplitz iff `AΛ* − Ω̃B̃* = CΘ* − Γ̃D̃*`.
pub fn product_toeplitz_test(a: &ToeplitzSpec, b: &ToeplitzSpec, c: &ToeplitzSpec, d: &ToeplitzSpec) -> Result<bool> {
    check_same_shape(&[a, b, c, d])?;
    Ok(vector_identity_side(a, b)? == vector_identity_side(c, d)?)
}

/// First column of `Δ(𝐀𝐁)`: `𝐀B + A·B_0 + 𝐀_0𝐁_0P_0*`.
pub fn zeroth_relation(a: &ToeplitzSpec, b: &ToeplitzSpec) -> Result<BlockColumn> {
    check_same_shape(&[a, b])?;
    a.build()
        .mul_column(&b.lower_column())?
        .checked_add(&a.lower_column().diamond_right(b.diag())?)?
        .checked_add(&head_column(a.n(), a.diag() * b.diag()))
}

/// Adjoint of the first row of `Δ(𝐀𝐁)`, plus the adjoint of the zeroth
/// relation's head: `𝐁*Ω + Λ·A_0* + 𝐁_0*𝐀_0*P_0*`.
///
/// The head term is `(A_0B_0)*`; for the `𝐂𝐃` side that is `(C_0D_0)*`, i.e.
/// `C_0*D_0*` in a commutative algebra.
pub fn adjoint_relation(a: &ToeplitzSpec, b: &ToeplitzSpec) -> Result<BlockColumn> {
    check_same_shape(&[a, b])?;
    b.build()
        .adjoint()
        .mul_column(&a.upper_column())?
        .checked_add(&b.upper_column().diamond_right(&a.diag().adjoint())?)?
        .checked_add(&head_column(a.n(), (a.diag() * b.diag()).adjoint()))
}

/// Given that `𝐀𝐁 − 𝐂𝐃` is block Toeplitz, decide `𝐀𝐁 = 𝐂𝐃` from the
/// zeroth and adjoint relations.
pub fn product_zero_test(a: &ToeplitzSpec, b: &ToeplitzSpec, c: &ToeplitzSpec, d: &ToeplitzSpec) -> Result<bool> {
    if !product_toeplitz_test(a, b, c, d)? {
        return Err(Error::PreconditionViolation("AB − CD is not block Toeplitz".into()));
    }
    Ok(zeroth_relation(a, b)? == zeroth_relation(c, d)? && adjoint_relation(a, b)? == adjoint_relation(c, d)?)
}

/// `𝐀𝐁` is block Toeplitz iff `AΛ* = Ω̃B̃*`.
pub fn single_product_toeplitz_test(a: &ToeplitzSpec, b: &ToeplitzSpec) -> Result<bool> {
    Ok(vector_identity_side(a, b)?.is_zero())
}

/// When `𝐀𝐁` is block Toeplitz, report whether `𝐀𝐁 = 𝐁𝐀` by direct
/// multiplication.
pub fn product_commute_check(a: &ToeplitzSpec, b: &ToeplitzSpec) -> Result<bool> {
    if !single_product_toeplitz_test(a, b)? {
        return Err(Error::PreconditionViolation("AB is not block Toeplitz".into()));
    }
    let (am, bm) = (a.build(), b.build());
    Ok(&am * &bm == &bm * &am)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftClass {
    LowerToeplitz,
    UpperToeplitz,
    Both,
    Neither,
}

impl ShiftClass {
    fn from_flags(with_s: bool, with_s_adj: bool) -> Self {
        match (with_s, with_s_adj) {
            (true, true) => Self::Both,
            (true, false) => Self::LowerToeplitz,
            (false, true) => Self::UpperToeplitz,
            (false, false) => Self::Neither,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::LowerToeplitz => "lower_toeplitz",
            Self::UpperToeplitz => "upper_toeplitz",
            Self::Both => "both",
            Self::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SxClass {
    SxCommutant,
    SxStarCommutant,
    Both,
    Neither,
}

impl SxClass {
    fn from_flags(with_sx: bool, with_sx_adj: bool) -> Self {
        match (with_sx, with_sx_adj) {
            (true, true) => Self::Both,
            (true, false) => Self::SxCommutant,
            (false, true) => Self::SxStarCommutant,
            (false, false) => Self::Neither,
        }
    }

    pub fn commutes_with_sx(self) -> bool {
        matches!(self, Self::SxCommutant | Self::Both)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::SxCommutant => "sx_commutant",
            Self::SxStarCommutant => "sx_star_commutant",
            Self::Both => "both",
            Self::Neither => "neither",
        }
    }
}

/// Classification read off the Toeplitz structure alongside the answer
/// obtained by multiplying out the commutators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification<C> {
    pub structural: C,
    pub direct: C,
    pub spec: Option<ToeplitzSpec>,
}

impl<C: PartialEq + Copy> Classification<C> {
    pub fn class(&self) -> C {
        self.structural
    }

    pub fn agrees(&self) -> bool {
        self.structural == self.direct
    }
}

/// `𝐌S = S𝐌` iff `𝐌 = T(A,0) + 𝐀_0`; `𝐌S* = S*𝐌` iff `𝐌 = T(0,Ω) + 𝐀_0`.
pub fn commutant_s_classify(m: &BlockMatrix) -> Classification<ShiftClass> {
    let spec = ToeplitzSpec::recognize(m, None);
    let structural = match &spec {
        Some(s) => ShiftClass::from_flags(s.is_lower_triangular(), s.is_upper_triangular()),
        None => ShiftClass::Neither,
    };
    let s = shift(m.n(), m.d());
    let direct = ShiftClass::from_flags(m.commutes_with(&s), m.commutes_with(&s.adjoint()));
    Classification { structural, direct, spec }
}

/// `Ω = X*⋄Ã` with `X` commuting with `A_0` and every `A_k`.
fn is_sx_form(spec: &ToeplitzSpec, x: &DenseMat) -> Result<bool> {
    let expected = spec.lower_column().tilde().diamond(&x.adjoint())?;
    Ok(expected == spec.upper_column()
        && x.commutes_with(spec.diag())
        && spec.lower_entries().iter().all(|a| x.commutes_with(a)))
}

/// `𝐌S_X = S_X𝐌` iff `𝐌 = T(A, X*⋄Ã) + 𝐀_0`, and `𝐌S_X* = S_X*𝐌` iff the
/// adjoint `𝐌*` commutes with `S_X`, i.e. the lower vector equals
/// `X*⋄Ω̃`. The structural test also requires `X` to commute with the
/// entries, which is automatic for entries in `𝒜` and `X ∈ 𝒜′`.
pub fn commutant_sx_classify(m: &BlockMatrix, x: &DenseMat) -> Result<Classification<SxClass>> {
    let sx = shift_x(m.n(), m.d(), x)?;
    let spec = ToeplitzSpec::recognize(m, None);
    let structural = match &spec {
        Some(s) => SxClass::from_flags(is_sx_form(s, x)?, is_sx_form(&s.adjoint(), x)?),
        None => SxClass::Neither,
    };
    let direct = SxClass::from_flags(m.commutes_with(&sx), m.commutes_with(&sx.adjoint()));
    Ok(Classification { structural, direct, spec })
}

/// Both factors commute with `S_X`, so `Ω = X*⋄Ã` and `Λ = X*⋄B̃`, giving
/// `AΛ* = X⋄AB̃* = Ω̃B̃*` and hence a block Toeplitz product.
pub fn sx_closure_product(a: &ToeplitzSpec, b: &ToeplitzSpec, x: &DenseMat) -> Result<bool> {
    check_same_shape(&[a, b])?;
    for (name, s) in [("A", a), ("B", b)] {
        if !commutant_sx_classify(&s.build(), x)?.structural.commutes_with_sx() {
            return Err(Error::PreconditionViolation(format!("{name} does not commute with S_X")));
        }
    }
    let b_tilde_adj = b.lower_column().tilde().adjoint();
    let a_lam = a.lower_column().outer(&b.upper_column().adjoint())?;
    let middle = a.lower_column().outer(&b_tilde_adj)?.diamond(x)?;
    let om_b = a.upper_column().tilde().outer(&b_tilde_adj)?;
    Ok(a_lam == middle && middle == om_b)
}

/// `I − S_X·S_X*` and `P_0*P_0 − S_X·(P_{n-1}*P_0⋄X*)`, which agree for
/// every `X`.
pub fn shift_x_gram_sides(n: usize, d: usize, x: &DenseMat) -> Result<(BlockMatrix, BlockMatrix)> {
    let sx = shift_x(n, d, x)?;
    let lhs = BlockMatrix::identity(n, d).checked_sub(&(&sx * &sx.adjoint()))?;
    let p0 = basis_row(0, n, d)?;
    let plast = basis_row(n - 1, n, d)?;
    let corner = plast.adjoint().outer(&p0)?.diamond(&x.adjoint())?;
    let rhs = p0.adjoint().outer(&p0)?.checked_sub(&(&sx * &corner))?;
    Ok((lhs, rhs))
}

/// `M − S_X·M·S_X*`, for checking an [`crate::toeplitz::SxDisplacementForm`].
pub fn sx_displacement(m: &BlockMatrix, x: &DenseMat) -> Result<BlockMatrix> {
    let sx = shift_x(m.n(), m.d(), x)?;
    m.checked_sub(&(&(&sx * m) * &sx.adjoint()))
}

/// `A·P_0 + P_0*·B*`.
pub fn rank_two_form(a: &BlockColumn, b: &BlockColumn) -> Result<BlockMatrix> {
    first_row_col(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CommAlgebra;
    use crate::block::displacement;
    use crate::scalar::GaussianRational;

    fn s(v: &str) -> DenseMat {
        DenseMat::scalar(1, v.parse().unwrap())
    }

    fn scalar_spec(diag: &str, lower: &[&str], upper: &[&str]) -> ToeplitzSpec {
        ToeplitzSpec::new(s(diag), lower.iter().map(|v| s(v)).collect(), upper.iter().map(|v| s(v)).collect()).unwrap()
    }

    fn direct_product_displacement(c: &ToeplitzSpec, d: &ToeplitzSpec) -> BlockMatrix {
        displacement(&(&c.build() * &d.build()))
    }

    #[test]
    fn product_displacement_identity() {
        let id = ToeplitzSpec::identity(3, 2);
        let rhs = product_displacement_rhs(&id, &id).unwrap();
        let p0 = basis_row(0, 3, 2).unwrap();
        assert_eq!(rhs, p0.adjoint().outer(&p0).unwrap());
    }

    #[test]
    fn product_displacement_two_by_two() {
        let c = scalar_spec("0", &["2+i"], &["3"]);
        let d = scalar_spec("0", &["-1"], &["1/2-i"]);
        assert_eq!(product_displacement_rhs(&c, &d).unwrap(), direct_product_displacement(&c, &d));
    }

    #[test]
    fn product_displacement_with_diagonals() {
        let c = scalar_spec("2", &["1", "i", "3"], &["-1", "2", "1+i"]);
        let d = scalar_spec("-1+i", &["4", "0", "1/3"], &["i", "-2", "5"]);
        assert_eq!(product_displacement_rhs(&c, &d).unwrap(), direct_product_displacement(&c, &d));
        let c0 = c.with_diag(s("0")).unwrap();
        let d0 = d.with_diag(s("0")).unwrap();
        assert_eq!(product_displacement_rhs(&c0, &d0).unwrap(), direct_product_displacement(&c0, &d0));
    }

    #[test]
    fn printed_row_order_needs_star_closed_algebra() {
        // Jordan algebra span{I, N}: C_0 = N does not commute with Θ_1* = N*.
        let alg = CommAlgebra::poly(DenseMat::from_ints(&[&[1, 1], &[0, 1]]).unwrap()).unwrap();
        let nil = DenseMat::from_ints(&[&[0, 1], &[0, 0]]).unwrap();
        assert!(alg.contains(&nil));
        let c = ToeplitzSpec::new(nil.clone(), vec![DenseMat::zeros(2)], vec![DenseMat::zeros(2)]).unwrap();
        let d = ToeplitzSpec::new(DenseMat::zeros(2), vec![DenseMat::zeros(2)], vec![nil.clone()]).unwrap();
        let direct = direct_product_displacement(&c, &d);
        assert_eq!(product_displacement_rhs(&c, &d).unwrap(), direct);
        // Θ*·C_0 in place of C_0·Θ* changes block (0,1).
        let printed = &nil.adjoint() * &nil;
        assert_ne!(&printed, direct.block(0, 1));
    }

    #[test]
    fn product_toeplitz_examples() {
        let a = scalar_spec("1", &["2"], &["1"]);
        let b = scalar_spec("-1", &["3"], &["3/2"]);
        assert!(product_toeplitz_test(&a, &b, &a, &b).unwrap());

        // AΛ* = 2·(3/2) = 3 and Ω̃B̃* = 1·3 = 3.
        let a = scalar_spec("0", &["2"], &["1"]);
        let b = scalar_spec("0", &["3"], &["3/2"]);
        let zero = ToeplitzSpec::zeros(2, 1);
        assert!(product_toeplitz_test(&a, &b, &zero, &zero).unwrap());
        assert!(ToeplitzSpec::recognize(&(&a.build() * &b.build()), None).is_some());

        let b6 = scalar_spec("0", &["3"], &["6"]);
        assert!(!product_toeplitz_test(&a, &b6, &zero, &zero).unwrap());
        assert!(ToeplitzSpec::recognize(&(&a.build() * &b6.build()), None).is_none());
    }

    #[test]
    fn product_zero_examples() {
        let a = scalar_spec("1", &["2", "i"], &["1", "-1"]);
        let b = scalar_spec("i", &["3", "1"], &["0", "2"]);
        assert!(product_zero_test(&a, &b, &a, &b).unwrap());

        // Circulants commute, so AB = BA.
        let ca = scalar_spec("1", &["2", "3"], &["3", "2"]);
        let cb = scalar_spec("-1", &["i", "4"], &["4", "-i"]);
        assert!(single_product_toeplitz_test(&ca, &cb).unwrap());
        assert!(product_zero_test(&ca, &cb, &cb, &ca).unwrap());

        let doubled = ToeplitzSpec::new(
            ca.diag().scale(&2.into()),
            ca.lower_entries().iter().map(|m| m.scale(&2.into())).collect(),
            ca.upper_entries().iter().map(|m| m.scale(&2.into())).collect(),
        )
        .unwrap();
        assert!(!product_zero_test(&ca, &cb, &doubled, &cb).unwrap());

        let bad = scalar_spec("0", &["3", "0"], &["6", "0"]);
        let zero = ToeplitzSpec::zeros(3, 1);
        assert!(matches!(product_zero_test(&a, &bad, &zero, &zero), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn single_product_examples() {
        let lower_a = scalar_spec("1", &["2", "3"], &["0", "0"]);
        let lower_b = scalar_spec("i", &["-1", "5"], &["0", "0"]);
        assert!(single_product_toeplitz_test(&lower_a, &lower_b).unwrap());
        assert!(product_commute_check(&lower_a, &lower_b).unwrap());
        assert!(product_commute_check(&lower_a, &lower_a).unwrap());

        let a = scalar_spec("0", &["2"], &["1"]);
        let b = scalar_spec("0", &["3"], &["6"]);
        assert!(!single_product_toeplitz_test(&a, &b).unwrap());
        assert!(matches!(product_commute_check(&a, &b), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn shift_classification_examples() {
        let s3 = shift(3, 2);
        let c = commutant_s_classify(&s3);
        assert_eq!((c.structural, c.direct), (ShiftClass::LowerToeplitz, ShiftClass::LowerToeplitz));
        let c = commutant_s_classify(&s3.adjoint());
        assert_eq!((c.structural, c.direct), (ShiftClass::UpperToeplitz, ShiftClass::UpperToeplitz));
        let c = commutant_s_classify(&BlockMatrix::identity(3, 2));
        assert_eq!((c.structural, c.direct), (ShiftClass::Both, ShiftClass::Both));
        let c = commutant_s_classify(&scalar_spec("1", &["2"], &["3"]).build());
        assert_eq!((c.structural, c.direct), (ShiftClass::Neither, ShiftClass::Neither));
    }

    #[test]
    fn sx_classification_examples() {
        let x: GaussianRational = "2-i".parse().unwrap();
        let a: GaussianRational = "3+i".parse().unwrap();
        // [[a0, x·a], [a, a0]] commutes with S_x.
        let m = BlockMatrix::from_dense(
            &DenseMat::from_rows(vec![vec![5.into(), &x * &a], vec![a.clone(), 5.into()]]).unwrap(),
            1,
        )
        .unwrap();
        let xm = DenseMat::scalar(1, x.clone());
        let c = commutant_sx_classify(&m, &xm).unwrap();
        assert!(c.agrees());
        assert_eq!(c.class(), SxClass::SxCommutant);

        let circulant =
            BlockMatrix::from_dense(&DenseMat::from_ints(&[&[1, 3, 2], &[2, 1, 3], &[3, 2, 1]]).unwrap(), 1).unwrap();
        let c = commutant_sx_classify(&circulant, &DenseMat::identity(1)).unwrap();
        assert!(c.agrees());
        assert!(c.class().commutes_with_sx());

        for m in [shift(3, 1), shift(3, 1).adjoint(), BlockMatrix::identity(3, 1)] {
            let sx = commutant_sx_classify(&m, &DenseMat::zeros(1)).unwrap();
            let plain = commutant_s_classify(&m);
            let mapped = match plain.structural {
                ShiftClass::LowerToeplitz => SxClass::SxCommutant,
                ShiftClass::UpperToeplitz => SxClass::SxStarCommutant,
                ShiftClass::Both => SxClass::Both,
                ShiftClass::Neither => SxClass::Neither,
            };
            assert_eq!(sx.structural, mapped);
            assert!(sx.agrees());
        }
    }

    #[test]
    fn sx_closure_examples() {
        let x = DenseMat::scalar(1, "3/5+4/5i".parse().unwrap());
        let a_lower = vec![s("2"), s("1-i")];
        let b_lower = vec![s("-1"), s("3")];
        let make = |lower: Vec<DenseMat>| {
            let col = BlockColumn::new(1, [vec![DenseMat::zeros(1)], lower.clone()].concat()).unwrap();
            let upper = col.tilde().diamond(&x.adjoint()).unwrap();
            ToeplitzSpec::new(s("1"), lower, upper.entries()[1..].to_vec()).unwrap()
        };
        let a = make(a_lower);
        let b = make(b_lower);
        assert!(sx_closure_product(&a, &b, &x).unwrap());
        assert!(ToeplitzSpec::recognize(&(&a.build() * &b.build()), None).is_some());

        let off = scalar_spec("1", &["2", "1"], &["5", "0"]);
        assert!(matches!(sx_closure_product(&a, &off, &x), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn gram_identity() {
        for n in 1..5 {
            let x = DenseMat::parse_rows(&[&["1", "i"], &["2", "-3/2"]]).unwrap();
            let (lhs, rhs) = shift_x_gram_sides(n, 2, &x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
