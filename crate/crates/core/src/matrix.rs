//! Dense square matrices over [`GaussianRational`]; these are the blocks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{mismatch, Error, Result};
use crate::scalar::GaussianRational;

/// A `d×d` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMat {
    d: usize,
    data: Vec<GaussianRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
}

impl DenseMat {
    pub fn zeros(d: usize) -> Self {
        Self { d, data: vec![GaussianRational::zero(); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        Self::scalar(d, GaussianRational::one())
    }

    /// `c·I`.
    pub fn scalar(d: usize, c: GaussianRational) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m.data[i * d + i] = c.clone();
        }
        m
    }

    pub fn diag(entries: Vec<GaussianRational>) -> Self {
        let d = entries.len();
        let mut m = Self::zeros(d);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * d + i] = e;
        }
        m
    }

    /// The cyclic shift `e_j ↦ e_{j+1 mod d}`; it has ones on the subdiagonal
    /// and in the top-right corner.
    pub fn cyclic_shift(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for j in 0..d {
            m.data[((j + 1) % d) * d + j] = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(mismatch("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(d * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(mismatch(format!("row {i} has {} entries, expected {d} for a square matrix", row.len())));
            }
            data.extend(row);
        }
        Ok(Self { d, data })
    }

    /// Row-major integer literal, mostly for tests.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| GaussianRational::real(v)).collect()).collect())
    }

    /// Row-major string literal, e.g. `&[&["0", "i"], &["1", "0"]]`.
    pub fn parse_rows(rows: &[&[&str]]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.data[i * self.d + j] = v;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<GaussianRational>> {
        self.data.chunks(self.d).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.d)
    }

    /// True when the matrix is `c·I` for some scalar `c`.
    pub fn is_scalar(&self) -> bool {
        *self == Self::scalar(self.d, self.get(0, 0).clone())
    }

    fn check_dim(&self, other: &Self, what: &str) -> Result<()> {
        if self.d != other.d {
            return Err(mismatch(format!("{what}: {}×{0} vs {}×{1}", self.d, other.d)));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs, "add")?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs, "sub")?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs, "mul")?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn apply(&self, op: MatOp, rhs: &Self) -> Result<Self> {
        match op {
            MatOp::Add => self.checked_add(rhs),
            MatOp::Sub => self.checked_sub(rhs),
            MatOp::Mul => self.checked_mul(rhs),
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational) -> Self {
        Self { d: self.d, data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect() }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let d = self.d;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &rhs.data[k * d + j];
                    if !b.is_zero() {
                        out.data[i * d + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.d;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { d: self.d, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.d), |acc, _| acc.mul_unchecked(self))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.d == other.d && self.mul_unchecked(other) == other.mul_unchecked(self)
    }

    /// `M*M = I`, exactly.
    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul_unchecked(self).is_identity()
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// `M*M = MM*`, exactly.
    pub fn is_normal(&self) -> bool {
        let adj = self.adjoint();
        adj.mul_unchecked(self) == self.mul_unchecked(&adj)
    }
}

impl Add for &DenseMat {
    type Output = DenseMat;
    fn add(self, rhs: &DenseMat) -> DenseMat {
        self.checked_add(rhs).expect("block dimensions agree")
    }
}

impl Sub for &DenseMat {
    type Output = DenseMat;
    fn sub(self, rhs: &DenseMat) -> DenseMat {
        self.checked_sub(rhs).expect("block dimensions agree")
    }
}

impl Mul for &DenseMat {
    type Output = DenseMat;
    fn mul(self, rhs: &DenseMat) -> DenseMat {
        self.checked_mul(rhs).expect("block dimensions agree")
    }
}

impl Neg for &DenseMat {
    type Output = DenseMat;
    fn neg(self) -> DenseMat {
        DenseMat { d: self.d, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for DenseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.d)).finish()
    }
}

impl fmt::Display for DenseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .chunks(self.d)
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

impl Serialize for DenseMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.data.chunks(self.d))
    }
}

impl<'de> Deserialize<'de> for DenseMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<GaussianRational>>::deserialize(d)?;
        DenseMat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Vec<Vec<GaussianRational>>> for DenseMat {
    type Error = Error;
    fn try_from(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}
