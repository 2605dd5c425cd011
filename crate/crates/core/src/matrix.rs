//! Dense matrices over GF(p) and the exact elimination routines the engine
//! is built on: products, row/column rank profiles, inversion and left
//! nullspaces.
//!
//! All routines are classical O(n^3) kernels. Rank profiles are computed by
//! scanning rows top to bottom and keeping an echelon basis of the rows
//! accepted so far, which yields the lexicographically smallest maximal
//! independent subtuple directly.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};

/// Row-major matrix of residues modulo `field.modulus()`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

/// Rank together with the (0-based, increasing) indices realising it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub indices: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from row-major data; entries must already be canonical residues.
    pub fn from_flat(field: PrimeField, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| !field.contains(x as u64)) {
            return Err(Error::InvalidInput(format!(
                "entry {bad} is not a residue modulo {}",
                field.modulus()
            )));
        }
        Ok(DenseMatrix { field, rows, cols, data })
    }

    /// Build from signed rows, reducing every entry modulo p.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        Ok(DenseMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Stack row vectors of equal length `cols` (needed when there are no rows).
    pub fn from_row_vecs(field: PrimeField, cols: usize, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(DenseMatrix {
            field,
            rows: n,
            cols,
            data,
        })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[FieldElem] {
        &self.data
    }
    pub fn into_data(self) -> Vec<FieldElem> {
        self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        debug_assert!(self.field.contains(v as u64));
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        DenseMatrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(idx.iter().map(|&j| r[j]));
        }
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(DenseMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("sub".into()));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(DenseMatrix { data, ..*self })
    }

    fn check_field(&self, other: &DenseMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.modulus(), other.field.modulus()));
        }
        Ok(())
    }

    /// Exact product `self * b`.
    pub fn mul(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        mat_mul(self, b)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut acc = vec![0u64; self.cols];
        row_times(self.field, v, self, &mut acc);
        Ok(acc.into_iter().map(|x| x as u32).collect())
    }

    pub fn row_rank_profile(&self) -> RankProfile {
        row_rank_profile(self)
    }

    pub fn column_rank_profile(&self) -> RankProfile {
        column_rank_profile(self)
    }

    pub fn rank(&self) -> usize {
        row_rank_profile(self).rank
    }

    pub fn invert(&self) -> Result<DenseMatrix> {
        invert(self)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over GF({}) [", self.rows, self.cols, self.field.modulus())?;
        for r in self.row_iter() {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// `out = v * m` with delayed reduction; `out` must have length `m.cols()`.
fn row_times(field: PrimeField, v: &[FieldElem], m: &DenseMatrix, out: &mut [u64]) {
    let p = field.modulus() as u64;
    let budget = field.acc_budget();
    out.iter_mut().for_each(|x| *x = 0);
    let mut pending = 0usize;
    for (k, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let a = a as u64;
        for (o, &b) in out.iter_mut().zip(m.row(k)) {
            *o += a * b as u64;
        }
        pending += 1;
        if pending == budget {
            out.iter_mut().for_each(|x| *x %= p);
            pending = 0;
        }
    }
    out.iter_mut().for_each(|x| *x %= p);
}

/// Exact product over GF(p).
pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.check_field(b)?;
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "product of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = DenseMatrix::zeros(a.field, a.rows, b.cols);
    let mut acc = vec![0u64; b.cols];
    for i in 0..a.rows {
        row_times(a.field, a.row(i), b, &mut acc);
        for (o, &x) in out.row_mut(i).iter_mut().zip(&acc) {
            *o = x as u32;
        }
    }
    Ok(out)
}

/// Incremental echelon basis used by the rank-profile routines.
///
/// Every stored row has a 1 at its pivot column and zeros at the pivot
/// columns of all rows stored before it, so reducing a vector against the
/// rows in insertion order clears all pivot positions.
pub(crate) struct EchelonBasis {
    field: PrimeField,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<FieldElem>>,
    scratch: Vec<u64>,
}

impl EchelonBasis {
    pub(crate) fn new(field: PrimeField, cols: usize) -> Self {
        EchelonBasis {
            field,
            cols,
            pivots: Vec::new(),
            rows: Vec::new(),
            scratch: vec![0; cols],
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; returns the reduced vector.
    fn reduce(&mut self, v: &[FieldElem]) -> Vec<FieldElem> {
        let p = self.field.modulus() as u64;
        let budget = self.field.acc_budget().saturating_sub(1).max(1);
        for (s, &x) in self.scratch.iter_mut().zip(v) {
            *s = x as u64;
        }
        let mut pending = 0usize;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = self.scratch[piv] % p;
            if c == 0 {
                self.scratch[piv] = 0;
                continue;
            }
            let nc = p - c;
            for (s, &r) in self.scratch[piv..].iter_mut().zip(&row[piv..]) {
                *s += nc * r as u64;
            }
            pending += 1;
            if pending >= budget {
                self.scratch.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
        }
        self.scratch.iter().map(|&x| (x % p) as u32).collect()
    }

    /// Try to insert `v`; returns true iff it was independent of the basis.
    pub(crate) fn insert(&mut self, v: &[FieldElem]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(r[piv]).expect("nonzero pivot");
        for x in r[piv..].iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.pivots.push(piv);
        self.rows.push(r);
        true
    }
}

/// Lexicographically smallest tuple of row indices spanning the row space.
pub fn row_rank_profile(a: &DenseMatrix) -> RankProfile {
    let mut basis = EchelonBasis::new(a.field, a.cols);
    let mut indices = Vec::new();
    for i in 0..a.rows {
        if basis.rank() == a.cols {
            break;
        }
        if basis.insert(a.row(i)) {
            indices.push(i);
        }
    }
    RankProfile {
        rank: indices.len(),
        indices,
    }
}

pub fn column_rank_profile(a: &DenseMatrix) -> RankProfile {
    row_rank_profile(&a.transpose())
}

/// Reduced row echelon form with leftmost pivots scaled to 1.
///
/// Returns the nonzero rows only, together with their pivot columns.
pub fn rref(a: &DenseMatrix) -> (DenseMatrix, Vec<usize>) {
    let f = a.field;
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for x in m.row_mut(r)[c..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row: Vec<FieldElem> = m.row(r).to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for (x, &y) in m.row_mut(i)[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = f.mul_add(*x, nf, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rows: Vec<usize> = (0..r).collect();
    (m.select_rows(&rows), pivots)
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn invert(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("cannot invert a {}x{} matrix", a.rows, a.cols)));
    }
    let n = a.rows;
    let f = a.field;
    let mut aug = DenseMatrix::zeros(f, n, 2 * n);
    for i in 0..n {
        aug.row_mut(i)[..n].copy_from_slice(a.row(i));
        aug.data[i * 2 * n + n + i] = 1;
    }
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return Err(Error::Singular);
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(red.select_cols(&cols))
}

/// Basis of `{v : v * a = 0}` in reduced row echelon form.
pub fn left_nullspace_rref(a: &DenseMatrix) -> DenseMatrix {
    let f = a.field;
    let k = a.rows;
    let (red, pivots) = rref(&a.transpose());
    let mut is_pivot = vec![false; k];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..k).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; k];
        v[free] = 1;
        for (t, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(red.get(t, free));
        }
        basis.push(v);
    }
    let b = DenseMatrix::from_row_vecs(f, k, basis).expect("consistent lengths");
    rref(&b).0
}
