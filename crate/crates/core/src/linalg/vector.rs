use std::fmt;
use std::ops::Index;

use nalgebra::DVector;

use super::matrix::check_dims;
use super::{c64, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Dense complex vector with an optional subsystem partition.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    data: DVector<C64>,
    dims: Option<Vec<usize>>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("vector must be non-empty".into()));
        }
        Ok(Self {
            data: DVector::from_vec(entries),
            dims: None,
        })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn from_nalgebra(data: DVector<C64>) -> Self {
        Self { data, dims: None }
    }

    /// Computational basis vector `|index>` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut data = DVector::zeros(dim);
        data[index] = c64(1.0, 0.0);
        Self { data, dims: None }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DVector::zeros(dim),
            dims: None,
        }
    }

    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.dim())?;
        self.dims = Some(dims);
        Ok(self)
    }

    pub(crate) fn set_dims_unchecked(&mut self, dims: Option<Vec<usize>>) {
        self.dims = dims;
    }

    pub fn dims(&self) -> Option<&[usize]> {
        self.dims.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_nalgebra(&self) -> &DVector<C64> {
        &self.data
    }

    pub fn entries(&self) -> &[C64] {
        self.data.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.norm_squared()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        self.data.dotc(&other.data)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(c64(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: &self.data * factor,
            dims: self.dims.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.map(|z| z.conj()),
            dims: self.dims.clone(),
        }
    }

    pub fn add(&self, other: &ComplexVector) -> Self {
        Self {
            data: &self.data + &other.data,
            dims: self.dims.clone(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> Self {
        Self {
            data: &self.data - &other.data,
            dims: self.dims.clone(),
        }
    }

    pub fn kron(&self, other: &ComplexVector) -> Self {
        let data = self.data.kronecker(&other.data);
        let mut dims = self.dims.clone().unwrap_or_else(|| vec![self.dim()]);
        dims.extend(other.dims.clone().unwrap_or_else(|| vec![other.dim()]));
        Self {
            data,
            dims: Some(dims),
        }
    }

    /// `|self><self|`.
    pub fn outer(&self) -> ComplexMatrix {
        let m = &self.data * self.data.adjoint();
        let mut out = ComplexMatrix::from_nalgebra(m);
        out.set_dims_unchecked(self.dims.clone());
        out
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .data
            .iter()
            .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
            .collect();
        write!(f, "ComplexVector[{}] dims={:?}", entries.join(", "), self.dims)
    }
}
