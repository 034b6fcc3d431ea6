use std::ops::Range;

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use super::{c64, ComplexMatrix, C64};

/// Groups an ascending list into maximal runs whose consecutive gaps are
/// below `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] >= tol {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Eigendecomposition of a self-adjoint matrix, eigenvalues ascending.
fn sorted_eigen<T>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let n = m.nrows();
    let sym = (m + m.adjoint()) * T::from_real(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])].clone());
    (values, vectors)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (values, vectors) = sorted_eigen(h.as_nalgebra());
    (values, ComplexMatrix::from_nalgebra(vectors))
}

/// Eigenvalues (ascending) and an orthogonal eigenvector matrix of a real
/// symmetric matrix.
pub fn real_symmetric_eigen(s: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    sorted_eigen(s)
}

/// Common eigenbasis of two commuting self-adjoint matrices.
///
/// Diagonalizes `a`, then `b` inside each cluster of `a`, then `a` again
/// inside each cluster of `b` (which repairs clusters that were merged only
/// because of the tolerance).
fn simultaneous<T>(a: &DMatrix<T>, b: &DMatrix<T>, tol: f64) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let (va, q) = sorted_eigen(a);
    let mut q = q;
    for block in cluster_sorted(&va, tol) {
        if block.len() < 2 {
            continue;
        }
        let qb = q.columns(block.start, block.len()).into_owned();
        let b_block = qb.adjoint() * b * &qb;
        let (vb, r) = sorted_eigen(&b_block);
        let mut qb = &qb * r;
        for sub in cluster_sorted(&vb, tol) {
            if sub.len() < 2 {
                continue;
            }
            let qs = qb.columns(sub.start, sub.len()).into_owned();
            let a_sub = qs.adjoint() * a * &qs;
            let (_, r2) = sorted_eigen(&a_sub);
            qb.columns_mut(sub.start, sub.len()).copy_from(&(qs * r2));
        }
        q.columns_mut(block.start, block.len()).copy_from(&qb);
    }
    q
}

/// Real orthogonal `O` with `O^T a O` and `O^T b O` both diagonal, for
/// commuting real symmetric `a`, `b`.
pub fn simultaneous_real_diagonalization(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    tol: f64,
) -> DMatrix<f64> {
    simultaneous(a, b, tol)
}

/// Eigenvalues and a unitary eigenvector matrix of a normal matrix, obtained
/// from its commuting Hermitian and anti-Hermitian parts.
pub fn normal_eigen(n: &ComplexMatrix, tol: f64) -> (Vec<C64>, ComplexMatrix) {
    let m = n.as_nalgebra();
    let half = c64(0.5, 0.0);
    let h1 = (m + m.adjoint()) * half;
    let h2 = (m - m.adjoint()) * c64(0.0, -0.5);
    let q = simultaneous(&h1, &h2, tol);
    let d = q.adjoint() * m * &q;
    let values = (0..d.nrows()).map(|i| d[(i, i)]).collect();
    (values, ComplexMatrix::from_nalgebra(q))
}
