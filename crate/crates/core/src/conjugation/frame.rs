use crate::error::{Error, Result};
use crate::linalg::{permute_subsystems_vector, ComplexMatrix, ComplexVector, Tolerances};

/// Family of (possibly sub-normalized) vectors, meant to resolve the
/// identity: `Σ |v_j><v_j| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    vectors: Vec<ComplexVector>,
    dims: Vec<usize>,
}

impl Frame {
    /// Builds a frame; vectors must share one dimension. The partition is
    /// taken from the first vector carrying one.
    pub fn new(vectors: Vec<ComplexVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::DimensionMismatch("frame has no vectors".into()));
        };
        let n = first.dim();
        if vectors.iter().any(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch("frame vectors of unequal length".into()));
        }
        let dims = vectors
            .iter()
            .find_map(|v| v.dims().map(<[usize]>::to_vec))
            .unwrap_or_else(|| vec![n]);
        Self::with_dims(vectors, dims)
    }

    pub fn with_dims(mut vectors: Vec<ComplexVector>, dims: Vec<usize>) -> Result<Self> {
        let n = vectors.first().map_or(0, ComplexVector::dim);
        if dims.iter().product::<usize>() != n {
            return Err(Error::DimensionMismatch(format!(
                "partition {dims:?} for vectors of length {n}"
            )));
        }
        for v in &mut vectors {
            v.set_dims_unchecked(Some(dims.clone()));
        }
        Ok(Self { vectors, dims })
    }

    /// The columns of `m` as frame vectors.
    pub fn from_columns(m: &ComplexMatrix) -> Result<Self> {
        let cols = (0..m.cols()).map(|j| m.column(j)).collect();
        match m.dims() {
            Some(d) => Self::with_dims(cols, d.to_vec()),
            None => Self::new(cols),
        }
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<ComplexVector> {
        self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `<v_j|v_j>` for each member.
    pub fn weights(&self) -> Vec<f64> {
        self.vectors.iter().map(ComplexVector::norm_sqr).collect()
    }

    /// Matrix whose columns are the frame vectors.
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.vectors).expect("frame is non-empty and uniform")
    }

    /// `Σ |v_j><v_j|`.
    pub fn frame_operator(&self) -> ComplexMatrix {
        let m = self.to_matrix();
        &m * &m.adjoint()
    }

    pub fn completeness_defect(&self) -> f64 {
        self.frame_operator()
            .max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    pub fn is_complete(&self, tol: &Tolerances) -> bool {
        self.completeness_defect() < tol.eq_tol
    }

    pub fn check_complete(&self, tol: &Tolerances) -> Result<()> {
        let d = self.completeness_defect();
        if d < tol.eq_tol {
            Ok(())
        } else {
            Err(Error::IncompleteFrame(d))
        }
    }

    /// All products `u_j ⊗ w_k`, with `j` the slow index.
    pub fn tensor(&self, other: &Frame) -> Frame {
        let vectors = self
            .vectors
            .iter()
            .flat_map(|a| other.vectors.iter().map(move |b| a.kron(b)))
            .collect();
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Frame::with_dims(vectors, dims).expect("product partition matches")
    }

    /// Reorders the tensor factors of every vector (see
    /// [`permute_subsystems_vector`]).
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Frame> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| permute_subsystems_vector(v, perm))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(vectors)
    }
}
