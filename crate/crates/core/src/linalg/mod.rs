//! Dense complex linear algebra: matrices and vectors with subsystem
//! partitions, tensor products, partial traces, unitary exponentials and the
//! Autonne–Takagi factorization.
//!
//! Eigen- and singular-value decompositions are delegated to `nalgebra`;
//! everything specific to congruence (as opposed to similarity) lives here.

mod eigen;
mod expm;
mod matrix;
pub mod random;
mod takagi;
mod vector;

pub use eigen::{
    cluster_sorted, hermitian_eigen, normal_eigen, real_symmetric_eigen,
    simultaneous_real_diagonalization,
};
pub use expm::{exp_i_hermitian_derivative, matrix_exp_i_hermitian};
pub use matrix::ComplexMatrix;
pub use takagi::{takagi, takagi_symmetric_unitary, TakagiResult};
pub use vector::ComplexVector;

use crate::error::{Error, Result};

pub use nalgebra::Complex;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = nalgebra::Complex<f64>;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

/// `e^{i phase}`.
#[inline]
pub fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

/// Numerical tolerances shared by all modules.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Entrywise matrix comparison.
    pub eq_tol: f64,
    /// Gap below which spectrum entries count as degenerate.
    pub degeneracy_tol: f64,
    /// Fisher-matrix comparisons.
    pub fisher_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq_tol: 1e-9,
            degeneracy_tol: 1e-7,
            fisher_tol: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn new(eq_tol: f64, degeneracy_tol: f64, fisher_tol: f64) -> Result<Self> {
        for (name, v) in [
            ("eq_tol", eq_tol),
            ("degeneracy_tol", degeneracy_tol),
            ("fisher_tol", fisher_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(Self {
            eq_tol,
            degeneracy_tol,
            fisher_tol,
        })
    }
}

/// Kronecker product with concatenated partitions.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Kronecker product of a non-empty list of matrices.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Option<ComplexMatrix> {
    factors.into_iter().fold(None, |acc, m| match acc {
        None => Some(m.clone()),
        Some(a) => Some(a.kron(m)),
    })
}

/// Digits of a product-basis index in the mixed radix `dims`, most
/// significant first.
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub(crate) fn undigits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Traces out every subsystem except `keep` (0-based).
pub fn partial_trace_keep(m: &ComplexMatrix, keep: usize) -> Result<ComplexMatrix> {
    let dims = m.dims().ok_or(Error::MissingDims)?.to_vec();
    if keep >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: keep,
            count: dims.len(),
        });
    }
    let n = m.require_square()?;
    let dk = dims[keep];
    let mut out = ComplexMatrix::zeros(dk, dk);
    let all_digits: Vec<Vec<usize>> = (0..n).map(|i| digits(i, &dims)).collect();
    for i in 0..n {
        for j in 0..n {
            let (di, dj) = (&all_digits[i], &all_digits[j]);
            let others_agree = di
                .iter()
                .zip(dj)
                .enumerate()
                .all(|(q, (a, b))| q == keep || a == b);
            if others_agree {
                let acc = out.get(di[keep], dj[keep]) + m.get(i, j);
                out.set(di[keep], dj[keep], acc);
            }
        }
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidParameter(format!(
            "permutation of length {} for {n} subsystems",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Reorders tensor factors: subsystem `k` of the result is subsystem
/// `perm[k]` of the input.
pub fn permute_subsystems_vector(v: &ComplexVector, perm: &[usize]) -> Result<ComplexVector> {
    let dims = v.dims().ok_or(Error::MissingDims)?.to_vec();
    check_permutation(perm, dims.len())?;
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut out = vec![c64(0.0, 0.0); v.dim()];
    for i in 0..v.dim() {
        let d = digits(i, &dims);
        let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
        out[undigits(&nd, &new_dims)] = v[i];
    }
    ComplexVector::new(out)?.with_dims(new_dims)
}

/// Matrix counterpart of [`permute_subsystems_vector`]: returns `P M P^T`.
pub fn permute_subsystems_matrix(m: &ComplexMatrix, perm: &[usize]) -> Result<ComplexMatrix> {
    let dims = m.dims().ok_or(Error::MissingDims)?.to_vec();
    check_permutation(perm, dims.len())?;
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let n = m.rows();
    let map: Vec<usize> = (0..n)
        .map(|i| {
            let d = digits(i, &dims);
            let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
            undigits(&nd, &new_dims)
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(map[i], map[j], m.get(i, j));
        }
    }
    out.with_dims(new_dims)
}

/// Swap operator on `C^d ⊗ C^d`.
pub fn swap_matrix(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut s = ComplexMatrix::zeros(n, n);
    for a in 0..d {
        for b in 0..d {
            s.set(a * d + b, b * d + a, c64(1.0, 0.0));
        }
    }
    s.with_dims(vec![d, d]).expect("d*d matches [d, d]")
}

/// Pauli matrices and the identity.
pub mod pauli {
    use super::{c64, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
        ])
        .unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    /// `i σ_Y = [[0, 1], [-1, 0]]`, the matrix of the single-qubit spin flip.
    pub fn i_y() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert!(i4.approx_eq(&ComplexMatrix::identity(4), 1e-15));
        assert_eq!(i4.dims(), Some(&[2, 2][..]));
    }

    #[test]
    fn kron_sigma_y_pair_is_spin_flip_up_to_sign() {
        // (iσ_Y)⊗(iσ_Y) = -σ_Y⊗σ_Y has anti-diagonal (1, -1, -1, 1).
        let yy = kron(&pauli::y(), &pauli::y());
        let flip = yy.scale(c64(-1.0, 0.0));
        let expected = [1.0, -1.0, -1.0, 1.0];
        for (i, e) in expected.iter().enumerate() {
            assert!((flip.get(i, 3 - i) - c64(*e, 0.0)).norm() < 1e-15);
        }
        assert!(flip.approx_eq(&kron(&pauli::i_y(), &pauli::i_y()), 1e-15));
    }

    #[test]
    fn kron_diag_with_identity() {
        let k = kron(&pauli::z(), &ComplexMatrix::identity(2));
        let expected = ComplexMatrix::from_diagonal(&[
            c64(1.0, 0.0),
            c64(1.0, 0.0),
            c64(-1.0, 0.0),
            c64(-1.0, 0.0),
        ]);
        assert!(k.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn partial_trace_examples() {
        let i4 = ComplexMatrix::identity(4).with_dims(vec![2, 2]).unwrap();
        let t = partial_trace_keep(&i4, 0).unwrap();
        assert!(t.approx_eq(&ComplexMatrix::identity(2).scale(c64(2.0, 0.0)), 1e-15));

        let t = partial_trace_keep(&swap_matrix(2), 0).unwrap();
        assert!(t.approx_eq(&ComplexMatrix::identity(2), 1e-15));

        let a = ComplexMatrix::from_rows(&[
            vec![c64(1.0, 2.0), c64(0.5, 0.0)],
            vec![c64(-1.0, 0.0), c64(3.0, -1.0)],
        ])
        .unwrap();
        let b = pauli::y();
        let t = partial_trace_keep(&kron(&a, &b), 1).unwrap();
        assert!(t.approx_eq(&b.scale(a.trace()), 1e-14));
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert_eq!(partial_trace_keep(&m, 0), Err(Error::MissingDims));
        let m = m.with_dims(vec![2, 2]).unwrap();
        assert_eq!(
            partial_trace_keep(&m, 2),
            Err(Error::SubsystemOutOfRange { index: 2, count: 2 })
        );
    }

    #[test]
    fn permutation_round_trip_on_kron() {
        let a = ComplexVector::from_real(&[1.0, 2.0]).unwrap();
        let b = ComplexVector::from_real(&[3.0, 5.0, 7.0]).unwrap();
        let ab = a.kron(&b);
        let ba = permute_subsystems_vector(&ab, &[1, 0]).unwrap();
        assert!(ba.max_abs_diff(&b.kron(&a)) < 1e-15);
        assert_eq!(ba.dims(), Some(&[3, 2][..]));

        let s = swap_matrix(2);
        let p = permute_subsystems_matrix(&kron(&pauli::x(), &pauli::z()), &[1, 0]).unwrap();
        let q = &(&s * &kron(&pauli::x(), &pauli::z())) * &s;
        assert!(p.approx_eq(&q, 1e-15));
    }

    #[test]
    fn tolerances_must_be_positive() {
        assert!(Tolerances::new(1e-9, 0.0, 1e-6).is_err());
        assert!(Tolerances::new(1e-9, 1e-7, f64::NAN).is_err());
        assert_eq!(Tolerances::new(1e-9, 1e-7, 1e-6).unwrap(), Tolerances::default());
    }
}
