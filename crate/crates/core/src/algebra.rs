//! Commutative subalgebras of `M_d` and their commutants.
//!
//! An algebra is carried as a linear basis. Construction either checks a
//! user-supplied basis for commutativity and multiplicative closure
//! ([`CommAlgebra::from_basis`]) or closes a commuting generating set under
//! products ([`CommAlgebra::from_generators`]). The identity is always in the
//! span.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::linalg;
use crate::matrix::DenseMat;
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommAlgebra {
    d: usize,
    basis: Vec<DenseMat>,
}

/// JSON description of an algebra, tagged by `"kind"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraDescriptor {
    Diagonal { d: usize },
    Circulant { d: usize },
    Poly { generator: DenseMat },
    Explicit { basis: Vec<DenseMat> },
}

fn common_dim(mats: &[DenseMat]) -> Result<usize> {
    let d = mats.first().ok_or(Error::EmptyBasis)?.dim();
    if let Some(bad) = mats.iter().find(|m| m.dim() != d) {
        return Err(mismatch(format!("basis mixes {d}×{d} and {0}×{0} matrices", bad.dim())));
    }
    Ok(d)
}

fn span_coordinates(basis: &[DenseMat], m: &DenseMat) -> Option<Vec<GaussianRational>> {
    if basis.is_empty() {
        return m.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<GaussianRational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
    linalg::solve(&cols, m.entries())
}

impl CommAlgebra {
    /// Validate `basis` as a commutative algebra. Linearly dependent members
    /// are pruned; the identity is appended if it is not already in the span.
    /// Error indices refer to positions in the input.
    pub fn from_basis(basis: Vec<DenseMat>) -> Result<Self> {
        let d = common_dim(&basis)?;
        let mut kept: Vec<DenseMat> = Vec::new();
        let mut origin: Vec<usize> = Vec::new();
        for (i, b) in basis.into_iter().enumerate() {
            if span_coordinates(&kept, &b).is_none() {
                kept.push(b);
                origin.push(i);
            }
        }
        for i in 0..kept.len() {
            for j in i + 1..kept.len() {
                if !kept[i].commutes_with(&kept[j]) {
                    return Err(Error::NotCommutative(origin[i], origin[j]));
                }
            }
        }
        let identity = DenseMat::identity(d);
        if span_coordinates(&kept, &identity).is_none() {
            kept.push(identity);
        }
        let users = origin.len();
        for i in 0..users {
            for j in i..users {
                if span_coordinates(&kept, &(&kept[i] * &kept[j])).is_none() {
                    return Err(Error::NotClosed(origin[i], origin[j]));
                }
            }
        }
        Ok(Self { d, basis: kept })
    }

    /// The smallest algebra containing `generators` and the identity.
    /// Generators must commute pairwise.
    pub fn from_generators(generators: Vec<DenseMat>) -> Result<Self> {
        let d = common_dim(&generators)?;
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes_with(&generators[j]) {
                    return Err(Error::NotCommutative(i, j));
                }
            }
        }
        let mut basis = vec![DenseMat::identity(d)];
        for g in generators {
            if span_coordinates(&basis, &g).is_none() {
                basis.push(g);
            }
        }
        // Each pass multiplies every pair; the span only grows and is bounded
        // by dim M_d = d², so this terminates.
        loop {
            let mut grew = false;
            let len = basis.len();
            for i in 1..len {
                for j in i..len {
                    let p = &basis[i] * &basis[j];
                    if span_coordinates(&basis, &p).is_none() {
                        basis.push(p);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Ok(Self { d, basis })
    }

    /// All diagonal matrices, spanned by the diagonal matrix units.
    pub fn diagonal(d: usize) -> Self {
        let basis = (0..d)
            .map(|i| {
                let mut m = DenseMat::zeros(d);
                m.set(i, i, GaussianRational::from(1));
                m
            })
            .collect();
        Self { d, basis }
    }

    /// Circulant matrices: span of `I, C, …, C^{d-1}` for the cyclic shift `C`.
    pub fn circulant(d: usize) -> Self {
        let c = DenseMat::cyclic_shift(d);
        let basis = (0..d as u32).map(|k| c.pow(k)).collect();
        Self { d, basis }
    }

    /// Polynomials in a single matrix.
    pub fn poly(generator: DenseMat) -> Result<Self> {
        Self::from_generators(vec![generator])
    }

    pub fn from_descriptor(desc: &AlgebraDescriptor) -> Result<Self> {
        match desc {
            AlgebraDescriptor::Diagonal { d } | AlgebraDescriptor::Circulant { d } if *d == 0 => {
                Err(mismatch("algebra dimension must be positive"))
            }
            AlgebraDescriptor::Diagonal { d } => Ok(Self::diagonal(*d)),
            AlgebraDescriptor::Circulant { d } => Ok(Self::circulant(*d)),
            AlgebraDescriptor::Poly { generator } => Self::poly(generator.clone()),
            AlgebraDescriptor::Explicit { basis } => Self::from_basis(basis.clone()),
        }
    }

    /// The basis as an explicit descriptor, which rebuilds this algebra.
    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor::Explicit { basis: self.basis.clone() }
    }

    /// Matrix size `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Linear dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DenseMat] {
        &self.basis
    }

    /// Coordinates of `m` in the basis, or `None` when `m` is outside the span.
    pub fn in_span(&self, m: &DenseMat) -> Option<Vec<GaussianRational>> {
        if m.dim() != self.d {
            return None;
        }
        span_coordinates(&self.basis, m)
    }

    pub fn contains(&self, m: &DenseMat) -> bool {
        self.in_span(m).is_some()
    }

    /// `Σ c_k basis_k`.
    pub fn combine(&self, coefficients: &[GaussianRational]) -> Result<DenseMat> {
        if coefficients.len() != self.basis.len() {
            return Err(mismatch(format!(
                "{} coefficients for a basis of size {}",
                coefficients.len(),
                self.basis.len()
            )));
        }
        let mut out = DenseMat::zeros(self.d);
        for (c, b) in coefficients.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        Ok(out)
    }

    /// `X` commutes with every element of the algebra.
    pub fn in_commutant(&self, x: &DenseMat) -> bool {
        x.dim() == self.d && self.basis.iter().all(|b| x.commutes_with(b))
    }

    /// A linear basis of the commutant `{X : XB = BX for all B}`.
    pub fn commutant_basis(&self) -> Vec<DenseMat> {
        let d = self.d;
        let unit = |r: usize, c: usize| {
            let mut e = DenseMat::zeros(d);
            e.set(r, c, GaussianRational::from(1));
            e
        };
        // Column (r,c) of the system holds the entries of E_rc·B − B·E_rc.
        let mut columns: Vec<Vec<GaussianRational>> = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let e = unit(r, c);
                let mut col = Vec::with_capacity(self.basis.len() * d * d);
                for b in &self.basis {
                    col.extend_from_slice((&(&e * b) - &(b * &e)).entries());
                }
                columns.push(col);
            }
        }
        let nrows = columns[0].len();
        let rows: Vec<Vec<GaussianRational>> =
            (0..nrows).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
        linalg::null_space(rows, d * d)
            .into_iter()
            .map(|v| DenseMat::from_rows(v.chunks(d).map(<[_]>::to_vec).collect()).expect("d×d reshaping"))
            .collect()
    }

    /// The algebra is closed under the adjoint. Every element of such an
    /// algebra is normal.
    pub fn is_star_closed(&self) -> bool {
        self.basis.iter().all(|b| self.contains(&b.adjoint()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> DenseMat {
        DenseMat::from_ints(rows).unwrap()
    }

    #[test]
    fn diagonal_family_is_valid() {
        let alg = CommAlgebra::from_basis(vec![DenseMat::identity(2), m(&[&[1, 0], &[0, 2]])]).unwrap();
        assert_eq!(alg.dim(), 2);
        assert!(alg.contains(&m(&[&[5, 0], &[0, -3]])));
    }

    #[test]
    fn cyclic_shift_generates_circulants() {
        let c = DenseMat::cyclic_shift(3);
        let alg = CommAlgebra::from_generators(vec![c.clone()]).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(alg.contains(&c.pow(2)));
        assert!(c.pow(3).is_identity());
        assert_eq!(alg.basis()[0], DenseMat::identity(3));
        // The strict constructor refuses {C}: C² is outside span{C, I}.
        assert!(matches!(CommAlgebra::from_basis(vec![c]), Err(Error::NotClosed(0, 0))));
    }

    #[test]
    fn non_commuting_pair_is_rejected() {
        let e12 = m(&[&[0, 1], &[0, 0]]);
        let e21 = m(&[&[0, 0], &[1, 0]]);
        assert!(!(&e12 * &e21 == &e21 * &e12));
        assert!(matches!(CommAlgebra::from_basis(vec![e12.clone(), e21.clone()]), Err(Error::NotCommutative(0, 1))));
        assert!(matches!(CommAlgebra::from_generators(vec![e12, e21]), Err(Error::NotCommutative(0, 1))));
    }

    #[test]
    fn dependent_members_are_pruned() {
        let d2 = m(&[&[1, 0], &[0, 2]]);
        let alg = CommAlgebra::from_basis(vec![d2.clone(), d2.scale(&3.into()), DenseMat::zeros(2)]).unwrap();
        assert_eq!(alg.basis(), &[d2, DenseMat::identity(2)]);
    }

    #[test]
    fn span_membership() {
        let alg = CommAlgebra::circulant(3);
        let id_coords = alg.in_span(&DenseMat::identity(3)).unwrap();
        assert_eq!(alg.combine(&id_coords).unwrap(), DenseMat::identity(3));
        let b0 = alg.in_span(&alg.basis()[1]).unwrap();
        assert_eq!(b0, vec![0.into(), 1.into(), 0.into()]);
        let diag = CommAlgebra::from_basis(vec![DenseMat::identity(2), m(&[&[1, 0], &[0, 2]])]).unwrap();
        assert!(diag.in_span(&m(&[&[0, 1], &[0, 0]])).is_none());
    }

    #[test]
    fn commutant_membership() {
        let diag = CommAlgebra::from_basis(vec![DenseMat::identity(2), m(&[&[1, 0], &[0, 2]])]).unwrap();
        assert!(diag.in_commutant(&DenseMat::scalar(2, "3-i".parse().unwrap())));
        assert!(diag.in_commutant(&m(&[&[7, 0], &[0, -4]])));
        let x = m(&[&[0, 1], &[0, 0]]);
        assert_ne!(&x * &m(&[&[1, 0], &[0, 2]]), &m(&[&[1, 0], &[0, 2]]) * &x);
        assert!(!diag.in_commutant(&x));
    }

    #[test]
    fn commutant_bases() {
        // Diagonal algebra is maximal commutative: its commutant is itself.
        let cb = CommAlgebra::diagonal(3).commutant_basis();
        assert_eq!(cb.len(), 3);
        // Scalars only: commutant is all of M_2.
        let scalars = CommAlgebra::from_basis(vec![DenseMat::identity(2)]).unwrap();
        assert_eq!(scalars.commutant_basis().len(), 4);
        let circ = CommAlgebra::circulant(3);
        for x in circ.commutant_basis() {
            assert!(circ.contains(&x));
        }
    }

    #[test]
    fn jordan_generator() {
        let alg = CommAlgebra::poly(m(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(alg.dim(), 2);
        assert!(alg.contains(&m(&[&[0, 1], &[0, 0]])));
        assert!(!alg.is_star_closed());
        assert!(CommAlgebra::circulant(4).is_star_closed());
        assert!(CommAlgebra::diagonal(2).is_star_closed());
    }

    #[test]
    fn descriptors_from_json() {
        let d: AlgebraDescriptor = serde_json::from_str(r#"{"kind":"circulant","d":3}"#).unwrap();
        assert_eq!(CommAlgebra::from_descriptor(&d).unwrap(), CommAlgebra::circulant(3));
        let d: AlgebraDescriptor = serde_json::from_str(r#"{"kind":"poly","generator":[[1,1],[0,1]]}"#).unwrap();
        assert_eq!(CommAlgebra::from_descriptor(&d).unwrap().dim(), 2);
        let d: AlgebraDescriptor =
            serde_json::from_str(r#"{"kind":"explicit","basis":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#).unwrap();
        assert_eq!(CommAlgebra::from_descriptor(&d).unwrap().dim(), 2);
        assert!(serde_json::from_str::<AlgebraDescriptor>(r#"{"kind":"bogus"}"#).is_err());
    }
}
