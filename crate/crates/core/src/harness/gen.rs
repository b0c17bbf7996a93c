//! Seeded generators for algebras, matrices, specs and exact unitaries.

use std::str::FromStr;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AlgebraKind;
use crate::algebra::CommAlgebra;
use crate::block::BlockMatrix;
use crate::error::{Error, Result};
use crate::matrix::DenseMat;
use crate::scalar::GaussianRational;
use crate::toeplitz::ToeplitzSpec;

/// Pythagorean triples `(a, b, c)` with `a² + b² = c²`.
const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// Shape constraint applied by [`Gen::spec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// `Ω = 0`.
    LowerOnly,
    /// `A = 0`.
    UpperOnly,
    DiagonalOnly,
    /// `Ω = X*⋄Ã`.
    SxCommutant(DenseMat),
    /// `A = X*⋄Ω̃`.
    SxStarCommutant(DenseMat),
    /// `Ω = A` and a Hermitian diagonal.
    Hermitian,
    /// `Ω = c·Ã` for a scalar `c`.
    Rotated(GaussianRational),
}

impl FromStr for Constraint {
    type Err = Error;

    /// Parses the parameter-free constraints.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => Self::None,
            "lower_only" => Self::LowerOnly,
            "upper_only" => Self::UpperOnly,
            "diagonal_only" => Self::DiagonalOnly,
            "hermitian" => Self::Hermitian,
            other => return Err(Error::UnknownConstraint(other.to_string())),
        })
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Gen {
    pub fn new(seed: u64, bound: i64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), bound: bound.max(1) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    fn fraction(&mut self) -> (i64, i64) {
        (self.rng.gen_range(-self.bound..=self.bound), self.rng.gen_range(1..=self.bound))
    }

    /// `p/q + (r/s)i` with `|p|, |r| ≤ bound`, `1 ≤ q, s ≤ bound`. The
    /// imaginary part is zero half the time.
    pub fn scalar(&mut self) -> GaussianRational {
        let (p, q) = self.fraction();
        let (r, s) = if self.coin() { (0, 1) } else { self.fraction() };
        GaussianRational::from_fractions(p, q, r, s)
    }

    pub fn nonzero_scalar(&mut self) -> GaussianRational {
        loop {
            let c = self.scalar();
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn dense(&mut self, d: usize) -> DenseMat {
        let rows = (0..d).map(|_| (0..d).map(|_| self.scalar()).collect()).collect();
        DenseMat::from_rows(rows).expect("square")
    }

    pub fn nonzero_dense(&mut self, d: usize) -> DenseMat {
        loop {
            let m = self.dense(d);
            if !m.is_zero() {
                return m;
            }
        }
    }

    /// Random element of `alg`; each coordinate is zero a quarter of the time.
    pub fn element(&mut self, alg: &CommAlgebra) -> DenseMat {
        let coefficients: Vec<GaussianRational> = (0..alg.dim())
            .map(|_| if self.rng.gen_bool(0.25) { GaussianRational::zero() } else { self.scalar() })
            .collect();
        alg.combine(&coefficients).expect("one coefficient per basis element")
    }

    pub fn nonzero_element(&mut self, alg: &CommAlgebra) -> DenseMat {
        loop {
            let m = self.element(alg);
            if !m.is_zero() {
                return m;
            }
        }
    }

    /// Random element of the commutant `𝒜′`.
    pub fn commutant_element(&mut self, alg: &CommAlgebra) -> DenseMat {
        let basis = alg.commutant_basis();
        let mut out = DenseMat::zeros(alg.d());
        for b in &basis {
            out = &out + &b.scale(&self.scalar());
        }
        out
    }

    pub fn block_matrix(&mut self, n: usize, d: usize) -> BlockMatrix {
        let blocks = (0..n).map(|_| (0..n).map(|_| self.dense(d)).collect()).collect();
        BlockMatrix::from_blocks(blocks).expect("uniform blocks")
    }

    /// `n×n` block matrix with every block in `alg`.
    pub fn algebra_matrix(&mut self, alg: &CommAlgebra, n: usize) -> BlockMatrix {
        let blocks = (0..n).map(|_| (0..n).map(|_| self.element(alg)).collect()).collect();
        BlockMatrix::from_blocks(blocks).expect("uniform blocks")
    }

    /// One of `±1, ±i`.
    fn unit_root(&mut self) -> GaussianRational {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .choose(&mut self.rng)
            .map(|&(re, im)| GaussianRational::from_ints(re, im))
            .expect("nonempty")
    }

    /// An exactly unimodular scalar: `±1`, `±i`, or a Pythagorean unit
    /// `(a ± bi)/c` times one of those.
    pub fn unit_scalar(&mut self) -> GaussianRational {
        let root = self.unit_root();
        if self.coin() {
            return root;
        }
        let &(a, b, c) = TRIPLES.choose(&mut self.rng).expect("nonempty");
        let b = if self.coin() { b } else { -b };
        &GaussianRational::from_fractions(a, c, b, c) * &root
    }

    /// Permutation matrix with entries in `±1, ±i`.
    pub fn signed_permutation(&mut self, d: usize) -> DenseMat {
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut self.rng);
        let mut m = DenseMat::zeros(d);
        for (col, &row) in perm.iter().enumerate() {
            let u = self.unit_root();
            m.set(row, col, u);
        }
        m
    }

    /// Hermitian matrix with small Gaussian-integer entries.
    fn hermitian(&mut self, d: usize) -> DenseMat {
        let mut m = DenseMat::zeros(d);
        for i in 0..d {
            m.set(i, i, GaussianRational::real(self.rng.gen_range(-3..=3)));
            for j in i + 1..d {
                let v = GaussianRational::from_ints(self.rng.gen_range(-2..=2), self.rng.gen_range(-2..=2));
                m.set(j, i, v.conj());
                m.set(i, j, v);
            }
        }
        m
    }

    /// Every kind yields an algebra closed under the adjoint: `poly` uses a
    /// Hermitian generator, `explicit` conjugates the circulants by a signed
    /// permutation.
    pub fn algebra(&mut self, kind: AlgebraKind, d: usize) -> CommAlgebra {
        match kind {
            AlgebraKind::Diagonal => CommAlgebra::diagonal(d),
            AlgebraKind::Circulant => CommAlgebra::circulant(d),
            AlgebraKind::Poly => CommAlgebra::poly(self.hermitian(d)).expect("single generator"),
            AlgebraKind::Explicit => {
                let p = self.signed_permutation(d);
                let p_adj = p.adjoint();
                let basis = CommAlgebra::circulant(d).basis().iter().map(|c| &(&p * c) * &p_adj).collect();
                CommAlgebra::from_basis(basis).expect("conjugated circulants form an algebra")
            }
        }
    }

    pub fn spec(&mut self, alg: &CommAlgebra, n: usize, constraint: &Constraint) -> Result<ToeplitzSpec> {
        let d = alg.d();
        let draw = |g: &mut Self| (1..n).map(|_| g.element(alg)).collect::<Vec<_>>();
        let zeros = || vec![DenseMat::zeros(d); n.saturating_sub(1)];
        let diag = self.element(alg);
        // Entry k of X*⋄Ṽ is X*·V_{n-k}*.
        let rotate = |v: &[DenseMat], x_adj: &DenseMat| -> Vec<DenseMat> {
            (1..n).map(|k| x_adj * &v[n - k - 1].adjoint()).collect()
        };
        let (diag, lower, upper) = match constraint {
            Constraint::None => (diag, draw(self), draw(self)),
            Constraint::LowerOnly => (diag, draw(self), zeros()),
            Constraint::UpperOnly => (diag, zeros(), draw(self)),
            Constraint::DiagonalOnly => (diag, zeros(), zeros()),
            Constraint::SxCommutant(x) => {
                let lower = draw(self);
                let upper = rotate(&lower, &x.adjoint());
                (diag, lower, upper)
            }
            Constraint::SxStarCommutant(x) => {
                let upper = draw(self);
                let lower = rotate(&upper, &x.adjoint());
                (diag, lower, upper)
            }
            Constraint::Hermitian => {
                let lower = draw(self);
                (&diag + &diag.adjoint(), lower.clone(), lower)
            }
            Constraint::Rotated(c) => {
                let lower = draw(self);
                let upper = rotate(&lower, &DenseMat::scalar(d, c.clone()));
                (diag, lower, upper)
            }
        };
        ToeplitzSpec::new(diag, lower, upper)
    }

    /// An exactly unitary element of `𝒜′`. Tries diagonal unitaries, scaled
    /// signed permutations and unitary basis elements, falling back to a unit
    /// scalar multiple of the identity.
    pub fn unitary(&mut self, alg: &CommAlgebra) -> DenseMat {
        let d = alg.d();
        let mut candidates = Vec::new();
        let diag = DenseMat::diag((0..d).map(|_| self.unit_scalar()).collect());
        candidates.push(diag);
        let perm = self.signed_permutation(d).scale(&self.unit_scalar());
        candidates.push(perm);
        for b in alg.basis() {
            let u = self.unit_scalar();
            candidates.push(b.scale(&u));
        }
        candidates.retain(|m| !m.is_scalar() && m.is_unitary() && alg.in_commutant(m));
        if !candidates.is_empty() && !self.rng.gen_bool(0.2) {
            let k = self.index(candidates.len());
            return candidates.swap_remove(k);
        }
        DenseMat::scalar(d, self.unit_scalar())
    }

    /// Add a nonzero block at a position whose block diagonal has at least two
    /// entries, so a Toeplitz matrix becomes non-Toeplitz.
    pub fn perturb(&mut self, m: &BlockMatrix, alg: Option<&CommAlgebra>) -> BlockMatrix {
        let n = m.n();
        let (i, j) = loop {
            let (i, j) = (self.index(n), self.index(n));
            if i.abs_diff(j) + 2 <= n {
                break (i, j);
            }
        };
        let delta = match alg {
            Some(alg) => self.nonzero_element(alg),
            None => self.nonzero_dense(m.d()),
        };
        let mut out = m.clone();
        out.set_block(i, j, m.block(i, j) + &delta).expect("same d");
        out
    }

    /// Add a nonzero algebra element to one lower or upper entry.
    pub fn perturb_spec(&mut self, spec: &ToeplitzSpec, alg: &CommAlgebra) -> ToeplitzSpec {
        let n = spec.n();
        let mut lower = spec.lower_entries().to_vec();
        let mut upper = spec.upper_entries().to_vec();
        if n < 2 {
            return spec.clone();
        }
        let k = self.index(n - 1);
        let delta = self.nonzero_element(alg);
        let target = if self.coin() { &mut lower } else { &mut upper };
        target[k] = &target[k] + &delta;
        ToeplitzSpec::new(spec.diag().clone(), lower, upper).expect("shape unchanged")
    }
}

pub fn gen_algebra(kind: AlgebraKind, d: usize, seed: u64) -> CommAlgebra {
    Gen::new(seed, 1).algebra(kind, d)
}

pub fn gen_spec(alg: &CommAlgebra, n: usize, seed: u64, constraint: &Constraint, bound: i64) -> Result<ToeplitzSpec> {
    Gen::new(seed, bound).spec(alg, n, constraint)
}

pub fn gen_unitary(alg: &CommAlgebra, seed: u64) -> DenseMat {
    Gen::new(seed, 1).unitary(alg)
}

/// `X*X = I`, checked exactly.
pub fn is_exact_unitary(x: &DenseMat) -> bool {
    (&x.adjoint() * x).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{commutant_sx_classify, SxClass};

    #[test]
    fn algebras_are_star_closed() {
        for kind in AlgebraKind::ALL {
            for d in 1..=3 {
                for seed in 0..5 {
                    let alg = gen_algebra(kind, d, seed);
                    assert!(alg.is_star_closed(), "{kind} d={d} seed={seed}");
                    assert_eq!(alg, gen_algebra(kind, d, seed));
                }
            }
        }
        let circ = gen_algebra(AlgebraKind::Circulant, 3, 0);
        assert_eq!(circ.dim(), 3);
        assert!(circ.basis()[1].pow(3).is_identity());
        assert_eq!(gen_algebra(AlgebraKind::Diagonal, 2, 9), CommAlgebra::diagonal(2));
    }

    #[test]
    fn constraints() {
        let alg = gen_algebra(AlgebraKind::Circulant, 2, 1);
        let lower = gen_spec(&alg, 4, 3, &"lower_only".parse().unwrap(), 8).unwrap();
        assert!(lower.upper_entries().iter().all(DenseMat::is_zero));
        assert!(lower.entries_in(&alg));

        let x = gen_unitary(&alg, 5);
        let sx = gen_spec(&alg, 4, 3, &Constraint::SxCommutant(x.clone()), 8).unwrap();
        let c = commutant_sx_classify(&sx.build(), &x).unwrap();
        assert!(c.agrees() && matches!(c.class(), SxClass::SxCommutant | SxClass::Both));

        assert!(matches!("sideways".parse::<Constraint>(), Err(Error::UnknownConstraint(_))));
    }

    #[test]
    fn unitaries_are_exact() {
        for kind in AlgebraKind::ALL {
            for d in 1..=3 {
                for seed in 0..10 {
                    let alg = gen_algebra(kind, d, seed);
                    let x = gen_unitary(&alg, seed);
                    assert!(is_exact_unitary(&x) && alg.in_commutant(&x));
                }
            }
        }
        let i = DenseMat::scalar(2, GaussianRational::i());
        assert!(is_exact_unitary(&i));
        let u = DenseMat::diag(vec!["3/5+4/5i".parse().unwrap(), GaussianRational::i()]);
        assert!(is_exact_unitary(&u) && CommAlgebra::diagonal(2).in_commutant(&u));
    }

    #[test]
    fn perturbation_breaks_toeplitz() {
        let mut g = Gen::new(11, 8);
        let alg = g.algebra(AlgebraKind::Poly, 2);
        for n in 2..=5 {
            let m = g.spec(&alg, n, &Constraint::None).unwrap().build();
            assert!(ToeplitzSpec::recognize(&g.perturb(&m, Some(&alg)), None).is_none());
        }
    }
}
