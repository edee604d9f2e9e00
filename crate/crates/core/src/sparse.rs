//! Compressed sparse row matrices over ℂ and the Hermitian operator wrapper
//! every assembled operator is returned in.

use std::io::Write;
use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row count above which mat-vecs are split across the rayon pool. Each row
/// is a sequential dot product, so results do not depend on the split.
const PAR_ROWS: usize = 16_384;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists; duplicates are summed in
    /// list order and exact zeros dropped.
    pub fn from_rows(nrows: usize, ncols: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        assert_eq!(rows.len(), nrows);
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            let mut i = 0;
            while i < row.len() {
                let j = row[i].0;
                assert!(j < ncols, "column {j} out of range");
                let mut v = row[i].1;
                i += 1;
                while i < row.len() && row[i].0 == j {
                    v += row[i].1;
                    i += 1;
                }
                if v != ZERO {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            rows[i].push((j, v));
        }
        Self::from_rows(nrows, ncols, rows)
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let rows = d.iter().enumerate().map(|(i, &v)| vec![(i, v)]).collect();
        Self::from_rows(d.len(), d.len(), rows)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[Complex64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => ZERO,
        }
    }

    /// Iterates stored entries `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    fn row_dot(&self, i: usize, x: &[Complex64]) -> Complex64 {
        let (cols, vals) = self.row(i);
        let mut acc = ZERO;
        for (&j, &v) in cols.iter().zip(vals) {
            acc += v * x[j];
        }
        acc
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        if self.nrows >= PAR_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.nrows];
        self.matvec(x, &mut y);
        y
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.entries() {
            rows[j].push((i, v.conj()));
        }
        Self::from_rows(self.ncols, self.nrows, rows)
    }

    /// `alpha·self + beta·other`, entrywise.
    pub fn lin_comb(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = (0..self.nrows)
            .map(|i| {
                let (ca, va) = self.row(i);
                let (cb, vb) = other.row(i);
                let (mut p, mut q) = (0, 0);
                let mut out = Vec::with_capacity(ca.len() + cb.len());
                while p < ca.len() || q < cb.len() {
                    let ja = ca.get(p).copied().unwrap_or(usize::MAX);
                    let jb = cb.get(q).copied().unwrap_or(usize::MAX);
                    if ja == jb {
                        out.push((ja, alpha * va[p] + beta * vb[q]));
                        p += 1;
                        q += 1;
                    } else if ja < jb {
                        out.push((ja, alpha * va[p]));
                        p += 1;
                    } else {
                        out.push((jb, beta * vb[q]));
                        q += 1;
                    }
                }
                out
            })
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    pub fn add(&self, other: &Self) -> Self {
        let one = Complex64::new(1.0, 0.0);
        self.lin_comb(one, other, one)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out.drop_zeros();
        out
    }

    fn drop_zeros(&mut self) {
        if self.values.iter().all(|v| *v != ZERO) {
            return;
        }
        let rows = (0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().copied().zip(v.iter().copied()).collect()
            })
            .collect();
        *self = Self::from_rows(self.nrows, self.ncols, rows);
    }

    /// Sparse product `self · other` (row-by-row accumulation).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut acc = vec![ZERO; other.ncols];
        let mut seen = vec![false; other.ncols];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            for (&k, &a) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k);
                for (&j, &b) in cb.iter().zip(vb) {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            let row: Vec<(usize, Complex64)> = touched.iter().map(|&j| (j, acc[j])).collect();
            for &j in &touched {
                acc[j] = ZERO;
                seen[j] = false;
            }
            touched.clear();
            rows.push(row);
        }
        Self::from_rows(self.nrows, other.ncols, rows)
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        self.entries()
            .map(|(i, j, v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (largest column sum of moduli).
    pub fn norm1(&self) -> f64 {
        let mut cols = vec![0.0; self.ncols];
        for (_, j, v) in self.entries() {
            cols[j] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// Largest `|i − j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.entries()
            .map(|(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.nrows, self.ncols, ZERO);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }

    /// Symmetric permutation `P A Pᵀ` with `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nrows);
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let rows = perm
            .iter()
            .map(|&old| {
                let (c, v) = self.row(old);
                c.iter().map(|&j| inv[j]).zip(v.iter().copied()).collect()
            })
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    /// Extracts the block `[r0, r0 + nr) × [c0, c0 + nc)`.
    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Self {
        let rows = (r0..r0 + nr)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter()
                    .zip(v)
                    .filter(|(&j, _)| j >= c0 && j < c0 + nc)
                    .map(|(&j, &x)| (j - c0, x))
                    .collect()
            })
            .collect();
        Self::from_rows(nr, nc, rows)
    }
}

/// How an operator's unknowns map onto a grid: `components` copies of the
/// grid's unknowns stacked one after another.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub grid: Grid,
    pub components: usize,
}

/// A sparse matrix that equals its own adjoint entry for entry.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitianOperator {
    matrix: CsrMatrix,
    hermitian_certified: bool,
    layout: Option<Layout>,
}

impl SparseHermitianOperator {
    /// Replaces `m` by `½(m + m†)`. The two halves are computed from the same
    /// products in swapped order, so the result is Hermitian bit for bit.
    pub fn symmetrized(m: CsrMatrix, layout: Option<Layout>) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let h = m.lin_comb(half, &m.adjoint(), half);
        let hermitian_certified = h.hermitian_defect() == 0.0;
        debug_assert!(hermitian_certified);
        Self {
            matrix: h,
            hermitian_certified,
            layout,
        }
    }

    /// Wraps `m` unchanged; fails unless it is exactly Hermitian.
    pub fn try_new(m: CsrMatrix, layout: Option<Layout>) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not exactly Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self {
            matrix: m,
            hermitian_certified: true,
            layout,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CsrMatrix {
        self.matrix
    }

    pub fn hermitian_certified(&self) -> bool {
        self.hermitian_certified
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.layout.as_ref()
    }

    pub fn with_layout(mut self, layout: Option<Layout>) -> Self {
        self.layout = layout;
        self
    }

    /// Real scalar multiple; stays exactly Hermitian.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(Complex64::new(s, 0.0)),
            hermitian_certified: self.hermitian_certified,
            layout: self.layout.clone(),
        }
    }

    /// Writes the lower triangle in Matrix Market `coordinate complex
    /// hermitian` format with 1-based indices.
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> Result<()> {
        let lower: Vec<_> = self.matrix.entries().filter(|(i, j, _)| i >= j).collect();
        writeln!(out, "%%MatrixMarket matrix coordinate complex hermitian")?;
        writeln!(out, "% written by pauli-core")?;
        writeln!(out, "{} {} {}", self.dim(), self.dim(), lower.len())?;
        for (i, j, v) in lower {
            writeln!(out, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im)?;
        }
        Ok(())
    }
}

impl Deref for SparseHermitianOperator {
    type Target = CsrMatrix;

    fn deref(&self) -> &CsrMatrix {
        &self.matrix
    }
}
