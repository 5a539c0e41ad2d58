//! Dense matrices over `F_q`.
//!
//! Entries are base-field element indices. The matrix does not carry its
//! field; operations that need arithmetic take the [`BaseField`] explicitly.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{rho, BaseField, ExtField, FieldElement};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input; use [`Matrix::try_from_rows`] for untrusted data.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        Self::try_from_rows(rows).expect("ragged matrix rows")
    }

    pub fn try_from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(
                "rows have different lengths".into(),
            ));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Checks that every entry is an element of `f`.
    pub fn check_entries(&self, f: &BaseField) -> Result<()> {
        match self.data.iter().find(|&&x| !f.contains(x)) {
            Some(x) => Err(Error::usage(format!(
                "matrix entry {x} is not an element of F_{}",
                f.order()
            ))),
            None => Ok(()),
        }
    }

    pub fn map(&self, g: impl Fn(u32) -> u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| g(x)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn add(&self, f: &BaseField, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, f: &BaseField, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let brow = other.row(l);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^e` by square-and-multiply. Square matrices only.
    pub fn pow(&self, f: &BaseField, e: &BigUint) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "power of a non-square matrix".into(),
            ));
        }
        let mut result = Self::identity(self.rows);
        for i in (0..e.bits()).rev() {
            result = result.mul(f, &result)?;
            if e.bit(i) {
                result = result.mul(f, self)?;
            }
        }
        Ok(result)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    /// Places the blocks side by side. All blocks need the same row count.
    pub fn hconcat(blocks: &[Matrix]) -> Result<Matrix> {
        let Some(first) = blocks.first() else {
            return Ok(Matrix::zeros(0, 0));
        };
        let rows = first.rows;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch(
                "blocks have different row counts".into(),
            ));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Submatrix of columns `start..start + len`.
    pub fn column_block(&self, start: usize, len: usize) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * len);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[start..start + len]);
        }
        Matrix {
            rows: self.rows,
            cols: len,
            data,
        }
    }

    /// Reduced row echelon form and rank. Pivots are the first nonzero entry
    /// found scanning columns left to right and, within a column, rows top
    /// down.
    pub fn rref(&self, f: &BaseField) -> (Matrix, usize) {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = f.inv(m.get(rank, col)).expect("pivot is nonzero");
            if inv != 1 {
                for j in col..m.cols {
                    let v = m.get(rank, j);
                    m.set(rank, j, f.mul(v, inv));
                }
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let c = m.get(r, col);
                if c == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(c, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self, f: &BaseField) -> usize {
        self.rref(f).1
    }

    /// First `n` rows.
    pub fn top_rows(&self, n: usize) -> Matrix {
        Matrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, f: &BaseField) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = Matrix::hconcat(&[self.clone(), Matrix::identity(n)])?;
        let (r, _) = aug.rref(f);
        if r.column_block(0, n) != Matrix::identity(n) {
            return Err(Error::NotInvertible);
        }
        Ok(r.column_block(n, n))
    }

    /// Row-wise companion matrix of a monic polynomial (coefficients low
    /// first): ones on the superdiagonal, last row `(-p_0, ..., -p_(k-1))`.
    pub fn companion(f: &BaseField, poly: &[u32]) -> Result<Matrix> {
        let poly = crate::ff::poly::trim(poly.to_vec());
        let k = match crate::ff::poly::degree(&poly) {
            Some(k) if k >= 1 => k,
            _ => return Err(Error::usage("companion matrix needs degree at least 1")),
        };
        if poly[k] != 1 {
            return Err(Error::NotMonic);
        }
        let mut m = Matrix::zeros(k, k);
        for i in 0..k - 1 {
            m.set(i, i + 1, 1);
        }
        for (j, &c) in poly.iter().take(k).enumerate() {
            m.set(k - 1, j, f.neg(c));
        }
        Ok(m)
    }

    /// Plain text: one row per line, entries separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses [`Matrix::to_text`] output. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        Self::try_from_rows(rows)
            .map_err(|_| Error::Parse("matrix rows have different lengths".into()))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.row_vecs())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u32>>::deserialize(d)?;
        Matrix::try_from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `P^i` for the companion matrix `P` of `ext`'s modulus, built row by row
/// from `alpha^i`. When `alpha_i` is given it is used as `alpha^i` directly
/// and no exponentiation happens. Exponents past `ord(P)` wrap around.
pub fn companion_power(ext: &ExtField, i: &BigUint, alpha_i: Option<&FieldElement>) -> Matrix {
    match alpha_i {
        Some(a) => rho(ext, a),
        None => rho(ext, &ext.pow(&ext.alpha(), i)),
    }
}

/// `dim(rs A ∩ rs B) = rank A + rank B - rank [A; B]`.
pub fn intersection_dim(f: &BaseField, a: &Matrix, b: &Matrix) -> Result<usize> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {} differ",
            a.cols, b.cols
        )));
    }
    let stacked = a.vstack(b)?;
    Ok(a.rank(f) + b.rank(f) - stacked.rank(f))
}
