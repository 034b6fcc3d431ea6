//! Product-vector tests via Schmidt coefficients.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{permute_subsystems_vector, ComplexVector, Tolerances};

/// Schmidt coefficients (descending) of `v` across the cut "subsystem `p`
/// versus the rest", for a normalized copy of `v`.
pub fn schmidt_coefficients(v: &ComplexVector, p: usize) -> Result<Vec<f64>> {
    let dims = v.dims().ok_or(Error::MissingDims)?.to_vec();
    if p >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: p,
            count: dims.len(),
        });
    }
    let mut perm: Vec<usize> = (0..dims.len()).collect();
    perm.remove(p);
    perm.insert(0, p);
    let w = permute_subsystems_vector(v, &perm)?.normalized()?;
    let dp = dims[p];
    let rest = v.dim() / dp;
    let m = DMatrix::from_fn(dp, rest, |i, j| w[i * rest + j]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// True iff `v` is a full tensor product over its partition: every
/// single-subsystem cut has largest Schmidt coefficient `>= 1 - eq_tol`.
pub fn is_product_vector(v: &ComplexVector, tol: &Tolerances) -> Result<bool> {
    let n = v.dims().ok_or(Error::MissingDims)?.len();
    // For two parts one cut decides; otherwise every cut is needed.
    let cuts = if n == 2 { 1 } else if n > 2 { n } else { 0 };
    for p in 0..cuts {
        if schmidt_coefficients(v, p)?[0] < 1.0 - tol.eq_tol {
            return Ok(false);
        }
    }
    Ok(true)
}
