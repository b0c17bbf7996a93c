//! `n×n` block matrices with `d×d` blocks, block columns and block rows.
//!
//! Block indices run `0..n` everywhere. `P_k` is the block row with the
//! identity at index `k`, `S` the block shift with identities on the
//! subdiagonal, and `S_X = S + X⋄P_0*P_{n-1}` the shift with `X` wrapped into
//! the top-right corner.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{mismatch, Error, Result};
use crate::matrix::DenseMat;
use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockMatrix {
    n: usize,
    d: usize,
    blocks: Vec<DenseMat>,
}

/// An `n×1` block vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockColumn {
    d: usize,
    entries: Vec<DenseMat>,
}

/// A `1×n` block vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockRow {
    d: usize,
    entries: Vec<DenseMat>,
}

fn check_entries(entries: &[DenseMat], d: usize) -> Result<()> {
    match entries.iter().position(|e| e.dim() != d) {
        Some(k) => Err(mismatch(format!("entry {k} is {0}×{0}, expected {d}×{d}", entries[k].dim()))),
        None => Ok(()),
    }
}

macro_rules! block_vector {
    ($ty:ident) => {
        impl $ty {
            pub fn new(d: usize, entries: Vec<DenseMat>) -> Result<Self> {
                check_entries(&entries, d)?;
                Ok(Self { d, entries })
            }

            pub fn zeros(n: usize, d: usize) -> Self {
                Self { d, entries: vec![DenseMat::zeros(d); n] }
            }

            pub fn len(&self) -> usize {
                self.entries.len()
            }

            pub fn is_empty(&self) -> bool {
                self.entries.is_empty()
            }

            pub fn d(&self) -> usize {
                self.d
            }

            pub fn entries(&self) -> &[DenseMat] {
                &self.entries
            }

            pub fn entry(&self, k: usize) -> &DenseMat {
                &self.entries[k]
            }

            pub fn into_entries(self) -> Vec<DenseMat> {
                self.entries
            }

            pub fn is_zero(&self) -> bool {
                self.entries.iter().all(DenseMat::is_zero)
            }

            /// Entry 0 is the zero block, as the theorem vectors require.
            pub fn has_zero_head(&self) -> bool {
                self.entries.first().map_or(true, DenseMat::is_zero)
            }

            fn check_same(&self, other: &Self) -> Result<()> {
                if self.d != other.d || self.len() != other.len() {
                    return Err(mismatch(format!(
                        "block vectors of length {} (d={}) and {} (d={})",
                        self.len(),
                        self.d,
                        other.len(),
                        other.d
                    )));
                }
                Ok(())
            }

            pub fn checked_add(&self, other: &Self) -> Result<Self> {
                self.check_same(other)?;
                let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
                Ok(Self { d: self.d, entries })
            }

            pub fn checked_sub(&self, other: &Self) -> Result<Self> {
                self.check_same(other)?;
                let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
                Ok(Self { d: self.d, entries })
            }
        }

        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                self.entries.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
                let entries = Vec::<DenseMat>::deserialize(de)?;
                let d = entries.first().map_or(1, DenseMat::dim);
                $ty::new(d, entries).map_err(serde::de::Error::custom)
            }
        }
    };
}

block_vector!(BlockColumn);
block_vector!(BlockRow);

impl BlockColumn {
    /// Entrywise adjoint, as a row.
    pub fn adjoint(&self) -> BlockRow {
        BlockRow { d: self.d, entries: self.entries.iter().map(DenseMat::adjoint).collect() }
    }

    /// `Ã`: zero head, then `A_{n-1}*, …, A_1*`. Entry 0 of `self` is ignored.
    pub fn tilde(&self) -> BlockColumn {
        let n = self.len();
        let mut entries = Vec::with_capacity(n);
        if n > 0 {
            entries.push(DenseMat::zeros(self.d));
        }
        entries.extend((1..n).map(|j| self.entries[n - j].adjoint()));
        BlockColumn { d: self.d, entries }
    }

    /// Outer product `c·r`, an `n×n` block matrix.
    pub fn outer(&self, row: &BlockRow) -> Result<BlockMatrix> {
        if self.d != row.d || self.len() != row.len() {
            return Err(mismatch("outer product of column and row of different shapes"));
        }
        let n = self.len();
        let mut out = BlockMatrix::zeros(n, self.d);
        for (i, c) in self.entries.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, r) in row.entries.iter().enumerate() {
                out.blocks[i * n + j] = c * r;
            }
        }
        Ok(out)
    }
}

impl BlockRow {
    pub fn adjoint(&self) -> BlockColumn {
        BlockColumn { d: self.d, entries: self.entries.iter().map(DenseMat::adjoint).collect() }
    }

    /// The coordinate row `P_k`: identity at index `k`, zeros elsewhere.
    pub fn basis(k: usize, n: usize, d: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        let mut row = Self::zeros(n, d);
        row.entries[k] = DenseMat::identity(d);
        Ok(row)
    }

    /// `r·M`.
    pub fn mul_matrix(&self, m: &BlockMatrix) -> Result<BlockRow> {
        if self.d != m.d || self.len() != m.n {
            return Err(mismatch("row times block matrix of different shapes"));
        }
        let n = m.n;
        let mut entries = vec![DenseMat::zeros(self.d); n];
        for (k, r) in self.entries.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            for (j, out) in entries.iter_mut().enumerate() {
                let b = m.block(k, j);
                if !b.is_zero() {
                    *out = &*out + &(r * b);
                }
            }
        }
        Ok(BlockRow { d: self.d, entries })
    }

    /// Inner product `r·c`, a single block.
    pub fn dot(&self, col: &BlockColumn) -> Result<DenseMat> {
        if self.d != col.d || self.len() != col.len() {
            return Err(mismatch("row times column of different shapes"));
        }
        Ok(self.entries.iter().zip(&col.entries).fold(DenseMat::zeros(self.d), |acc, (r, c)| &acc + &(r * c)))
    }
}

/// `P_k`, see [`BlockRow::basis`].
pub fn basis_row(k: usize, n: usize, d: usize) -> Result<BlockRow> {
    BlockRow::basis(k, n, d)
}

impl BlockMatrix {
    pub fn zeros(n: usize, d: usize) -> Self {
        Self { n, d, blocks: vec![DenseMat::zeros(d); n * n] }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self::block_diagonal(n, &DenseMat::identity(d))
    }

    /// `diag(A_0, …, A_0)`, written `𝐀_0` for a constant diagonal block.
    pub fn block_diagonal(n: usize, a0: &DenseMat) -> Self {
        let mut m = Self::zeros(n, a0.dim());
        for i in 0..n {
            m.blocks[i * n + i] = a0.clone();
        }
        m
    }

    pub fn from_blocks(blocks: Vec<Vec<DenseMat>>) -> Result<Self> {
        let n = blocks.len();
        if n == 0 {
            return Err(mismatch("block matrix must have at least one block row"));
        }
        let d = blocks[0].first().map(DenseMat::dim).ok_or_else(|| mismatch("empty block row"))?;
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in blocks.into_iter().enumerate() {
            if row.len() != n {
                return Err(mismatch(format!("block row {i} has {} blocks, expected {n}", row.len())));
            }
            for (j, b) in row.into_iter().enumerate() {
                if b.dim() != d {
                    return Err(mismatch(format!("block ({i},{j}) is {0}×{0}, expected {d}×{d}", b.dim())));
                }
                flat.push(b);
            }
        }
        Ok(Self { n, d, blocks: flat })
    }

    /// Cut an `nd×nd` matrix into `d×d` blocks.
    pub fn from_dense(m: &DenseMat, d: usize) -> Result<Self> {
        if d == 0 || !m.dim().is_multiple_of(d) {
            return Err(mismatch(format!("{0}×{0} matrix cannot be cut into {d}×{d} blocks", m.dim())));
        }
        let n = m.dim() / d;
        let mut out = Self::zeros(n, d);
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                out.blocks[(i / d) * n + j / d].set(i % d, j % d, m.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Flatten into the underlying `nd×nd` matrix.
    pub fn to_dense(&self) -> DenseMat {
        let size = self.n * self.d;
        let mut rows = vec![Vec::with_capacity(size); size];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..size {
                row.push(self.block(i / self.d, j / self.d).get(i % self.d, j % self.d).clone());
            }
        }
        DenseMat::from_rows(rows).expect("square by construction")
    }

    /// Block order `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Block size `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block(&self, i: usize, j: usize) -> &DenseMat {
        &self.blocks[i * self.n + j]
    }

    pub fn set_block(&mut self, i: usize, j: usize, b: DenseMat) -> Result<()> {
        if b.dim() != self.d {
            return Err(mismatch(format!("block is {0}×{0}, expected {1}×{1}", b.dim(), self.d)));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange { index: i.max(j), n: self.n });
        }
        self.blocks[i * self.n + j] = b;
        Ok(())
    }

    pub fn blocks(&self) -> Vec<Vec<DenseMat>> {
        self.blocks.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> BlockColumn {
        BlockColumn { d: self.d, entries: (0..self.n).map(|i| self.block(i, j).clone()).collect() }
    }

    pub fn row(&self, i: usize) -> BlockRow {
        BlockRow { d: self.d, entries: self.blocks[i * self.n..(i + 1) * self.n].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(DenseMat::is_zero)
    }

    fn check_same(&self, other: &Self, what: &str) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(mismatch(format!(
                "{what}: {}×{} blocks of size {} vs {}×{} blocks of size {}",
                self.n, self.n, self.d, other.n, other.n, other.d
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "add")?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, d: self.d, blocks })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "sub")?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, d: self.d, blocks })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "mul")?;
        let n = self.n;
        let mut out = Self::zeros(n, self.d);
        for i in 0..n {
            for k in 0..n {
                let a = self.block(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.block(k, j);
                    if !b.is_zero() {
                        let acc = &out.blocks[i * n + j] + &(a * b);
                        out.blocks[i * n + j] = acc;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `M·c`.
    pub fn mul_column(&self, col: &BlockColumn) -> Result<BlockColumn> {
        if self.d != col.d || self.n != col.len() {
            return Err(mismatch("block matrix times column of different shapes"));
        }
        let entries = (0..self.n)
            .map(|i| {
                (0..self.n).fold(DenseMat::zeros(self.d), |acc, k| {
                    let (a, c) = (self.block(i, k), &col.entries[k]);
                    if a.is_zero() || c.is_zero() {
                        acc
                    } else {
                        &acc + &(a * c)
                    }
                })
            })
            .collect();
        Ok(BlockColumn { d: self.d, entries })
    }

    /// Block conjugate transpose: block `(i,j)` of the result is `M_{ji}*`.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, self.d);
        for i in 0..n {
            for j in 0..n {
                out.blocks[j * n + i] = self.block(i, j).adjoint();
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n, self.d), |acc, _| &acc * self)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self * other == other * self
    }
}

impl Add for &BlockMatrix {
    type Output = BlockMatrix;
    fn add(self, rhs: &BlockMatrix) -> BlockMatrix {
        self.checked_add(rhs).expect("block shapes agree")
    }
}

impl Sub for &BlockMatrix {
    type Output = BlockMatrix;
    fn sub(self, rhs: &BlockMatrix) -> BlockMatrix {
        self.checked_sub(rhs).expect("block shapes agree")
    }
}

impl Mul for &BlockMatrix {
    type Output = BlockMatrix;
    fn mul(self, rhs: &BlockMatrix) -> BlockMatrix {
        self.checked_mul(rhs).expect("block shapes agree")
    }
}

/// The block shift `S`: identity blocks on the subdiagonal.
pub fn shift(n: usize, d: usize) -> BlockMatrix {
    let mut s = BlockMatrix::zeros(n, d);
    for i in 1..n {
        s.blocks[i * n + i - 1] = DenseMat::identity(d);
    }
    s
}

/// `S_X = S + X⋄P_0*P_{n-1}`: the shift with `X` in block `(0, n-1)`.
pub fn shift_x(n: usize, d: usize, x: &DenseMat) -> Result<BlockMatrix> {
    if x.dim() != d {
        return Err(mismatch(format!("X is {0}×{0}, blocks are {d}×{d}", x.dim())));
    }
    let mut s = shift(n, d);
    let corner = &s.blocks[n - 1] + x;
    s.blocks[n - 1] = corner;
    Ok(s)
}

/// Left multiplication of every block by `X`, written `X⋄v`.
pub trait Diamond: Sized {
    fn diamond(&self, x: &DenseMat) -> Result<Self>;

    /// Right multiplication of every block by `X`. Agrees with
    /// [`Diamond::diamond`] whenever `X` commutes with the entries.
    fn diamond_right(&self, x: &DenseMat) -> Result<Self>;
}

fn map_entries(entries: &[DenseMat], x: &DenseMat, left: bool) -> Result<Vec<DenseMat>> {
    entries.iter().map(|e| if left { x.checked_mul(e) } else { e.checked_mul(x) }).collect()
}

impl Diamond for BlockColumn {
    fn diamond(&self, x: &DenseMat) -> Result<Self> {
        Ok(Self { d: self.d, entries: map_entries(&self.entries, x, true)? })
    }

    fn diamond_right(&self, x: &DenseMat) -> Result<Self> {
        Ok(Self { d: self.d, entries: map_entries(&self.entries, x, false)? })
    }
}

impl Diamond for BlockRow {
    fn diamond(&self, x: &DenseMat) -> Result<Self> {
        Ok(Self { d: self.d, entries: map_entries(&self.entries, x, true)? })
    }

    fn diamond_right(&self, x: &DenseMat) -> Result<Self> {
        Ok(Self { d: self.d, entries: map_entries(&self.entries, x, false)? })
    }
}

impl Diamond for BlockMatrix {
    fn diamond(&self, x: &DenseMat) -> Result<Self> {
        Ok(Self { n: self.n, d: self.d, blocks: map_entries(&self.blocks, x, true)? })
    }

    fn diamond_right(&self, x: &DenseMat) -> Result<Self> {
        Ok(Self { n: self.n, d: self.d, blocks: map_entries(&self.blocks, x, false)? })
    }
}

/// `Δ(M) = M − S·M·S*`.
///
/// Block `(i,j)` of `S·M·S*` is `M_{i-1,j-1}` (zero on row and column 0), so
/// this is computed directly rather than by two block products.
pub fn displacement(m: &BlockMatrix) -> BlockMatrix {
    let n = m.n;
    let mut out = m.clone();
    for i in 1..n {
        for j in 1..n {
            out.blocks[i * n + j] = m.block(i, j) - m.block(i - 1, j - 1);
        }
    }
    out
}

/// `Σ_{k<n} S^k·D·(S*)^k`, the inverse of [`displacement`].
pub fn displacement_reconstruct(delta: &BlockMatrix) -> BlockMatrix {
    let n = delta.n;
    let s = shift(n, delta.d);
    let s_adj = s.adjoint();
    let mut term = delta.clone();
    let mut sum = delta.clone();
    for _ in 1..n {
        term = &(&s * &term) * &s_adj;
        sum = &sum + &term;
    }
    sum
}

impl fmt::Debug for BlockMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockMatrix").field("n", &self.n).field("d", &self.d).field("blocks", &self.blocks()).finish()
    }
}

impl fmt::Display for BlockMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.block(i, j).to_string()).collect();
            writeln!(f, "{}", row.join("  "))?;
        }
        Ok(())
    }
}

/// Serialized as an `n×n` array of `d×d` arrays of scalar strings.
impl Serialize for BlockMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.blocks.chunks(self.n))
    }
}

/// Accepts the nested `n×n` array of `d×d` blocks, or a plain matrix of
/// scalars which is read with `d = 1`.
/// One element of a nested-array block matrix: a bare scalar (the `d = 1`
/// shorthand) or a square block.
enum Cell {
    Scalar(GaussianRational),
    Block(DenseMat),
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct CellVisitor;

        impl<'de> de::Visitor<'de> for CellVisitor {
            type Value = Cell;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a scalar or a square block of scalars")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Cell, E> {
                v.parse().map(Cell::Scalar).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Cell, E> {
                Ok(Cell::Scalar(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Cell, E> {
                i64::try_from(v).map(|v| Cell::Scalar(v.into())).map_err(E::custom)
            }

            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Cell, A::Error> {
                let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
                while let Some(row) = seq.next_element()? {
                    rows.push(row);
                }
                DenseMat::from_rows(rows).map(Cell::Block).map_err(de::Error::custom)
            }
        }

        de.deserialize_any(CellVisitor)
    }
}

impl<'de> Deserialize<'de> for BlockMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<Cell>> = Vec::deserialize(de)?;
        let all_scalar = rows.iter().flatten().all(|c| matches!(c, Cell::Scalar(_)));
        let all_block = rows.iter().flatten().all(|c| matches!(c, Cell::Block(_)));
        if all_scalar && !all_block {
            let rows = rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|c| match c {
                            Cell::Scalar(v) => v,
                            Cell::Block(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            let m = DenseMat::from_rows(rows).map_err(D::Error::custom)?;
            BlockMatrix::from_dense(&m, 1).map_err(D::Error::custom)
        } else if all_block {
            let blocks = rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|c| match c {
                            Cell::Block(b) => b,
                            Cell::Scalar(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            BlockMatrix::from_blocks(blocks).map_err(D::Error::custom)
        } else {
            Err(D::Error::custom("block matrix mixes bare scalars and blocks"))
        }
    }
}
