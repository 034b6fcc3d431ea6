use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::{c64, C64};
use crate::error::{Error, Result};

/// Dense complex matrix with an optional subsystem partition.
///
/// When `dims` is present the matrix is square and `product(dims)` equals its
/// size. Subsystem `p` of a product basis index is the `p`-th most significant
/// digit in the mixed radix given by `dims`, i.e. `kron(A, B)` puts `A` first.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
    dims: Option<Vec<usize>>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            data: DMatrix::from_row_slice(rows, cols, entries),
            dims: None,
        })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), ncols, &flat)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c64(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            data: DMatrix::from_fn(rows, cols, f),
            dims: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
            dims: None,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: DMatrix::zeros(rows, cols),
            dims: None,
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    /// Wraps a nalgebra matrix without a partition.
    pub fn from_nalgebra(data: DMatrix<C64>) -> Self {
        Self { data, dims: None }
    }

    /// Builds a square matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[super::ComplexVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::DimensionMismatch("no columns".into()));
        };
        let n = first.dim();
        if columns.iter().any(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(Self::from_fn(n, columns.len(), |i, j| columns[j][i]))
    }

    /// Attaches a subsystem partition. The matrix must be square with
    /// `product(dims)` rows.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.rows())?;
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        self.dims = Some(dims);
        Ok(self)
    }

    /// Copies the partition of `other` when the sizes agree.
    pub(crate) fn with_dims_of(mut self, other: &ComplexMatrix) -> Self {
        if self.is_square() && other.rows() == self.rows() {
            self.dims = other.dims.clone();
        }
        self
    }

    pub(crate) fn set_dims_unchecked(&mut self, dims: Option<Vec<usize>>) {
        self.dims = dims;
    }

    pub fn dims(&self) -> Option<&[usize]> {
        self.dims.as_deref()
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[(i, j)] = value;
    }

    pub fn column(&self, j: usize) -> super::ComplexVector {
        super::ComplexVector::from_nalgebra(self.data.column(j).into_owned())
    }

    pub fn to_row_major(&self) -> Vec<Vec<C64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.data[(i, j)]).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
            dims: self.dims.clone(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            dims: self.dims.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.map(|z| z.conj()),
            dims: self.dims.clone(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: &self.data * factor,
            dims: self.dims.clone(),
        }
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.re)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.im)
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows().min(self.cols()))
            .map(|i| self.data[(i, i)])
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(
            (self.rows(), self.cols()),
            (other.rows(), other.cols()),
            "shape mismatch in max_abs_diff"
        );
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.rows() == other.rows() && self.cols() == other.cols() && self.max_abs_diff(other) < tol
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if i != j {
                    m = m.max(self.data[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn symmetry_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.transpose())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.rows()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_defect() < tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() < tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let a = self.adjoint();
        (self * &a).max_abs_diff(&(&a * self)) < tol
    }

    /// Kronecker product; the partition is the concatenation of both
    /// partitions (a factor without one counts as a single subsystem).
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let data = self.data.kronecker(&other.data);
        let dims = if self.is_square() && other.is_square() {
            let mut d = self.dims.clone().unwrap_or_else(|| vec![self.rows()]);
            d.extend(other.dims.clone().unwrap_or_else(|| vec![other.rows()]));
            Some(d)
        } else {
            None
        };
        ComplexMatrix { data, dims }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (r1, c1) = (self.rows(), self.cols());
        let mut out = ComplexMatrix::zeros(r1 + other.rows(), c1 + other.cols());
        for i in 0..r1 {
            for j in 0..c1 {
                out.data[(i, j)] = self.data[(i, j)];
            }
        }
        for i in 0..other.rows() {
            for j in 0..other.cols() {
                out.data[(r1 + i, c1 + j)] = other.data[(i, j)];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &super::ComplexVector) -> Result<super::ComplexVector> {
        if v.dim() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows(),
                self.cols(),
                v.dim()
            )));
        }
        Ok(super::ComplexVector::from_nalgebra(&self.data * v.as_nalgebra()))
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }
}

pub(crate) fn check_dims(dims: &[usize], size: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions must be positive, got {dims:?}"
        )));
    }
    let product: usize = dims.iter().product();
    if product != size {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {product}, expected {size}"
        )));
    }
    Ok(())
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} dims={:?}", self.rows(), self.cols(), self.dims)?;
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| {
                    let z = self.data[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let data = &self.data * &rhs.data;
        let dims = match (&self.dims, &rhs.dims) {
            (Some(a), Some(b)) if a != b => None,
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let mut out = ComplexMatrix { data, dims };
        if !out.is_square() {
            out.dims = None;
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
            dims: self.dims.clone().or_else(|| rhs.dims.clone()),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
            dims: self.dims.clone().or_else(|| rhs.dims.clone()),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(c64(-1.0, 0.0))
    }
}
