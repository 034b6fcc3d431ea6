use nalgebra::DMatrix;

use super::{
    c64, cis, real_symmetric_eigen, simultaneous_real_diagonalization, ComplexMatrix, ComplexVector,
    Tolerances, C64,
};
use crate::error::{Error, Result};

/// `A = V diag(values) V^T` with unitary `V` and `values` descending.
#[derive(Clone, Debug)]
pub struct TakagiResult {
    pub v: ComplexMatrix,
    pub values: Vec<f64>,
}

impl TakagiResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&s| c64(s, 0.0)).collect();
        &(&self.v * &ComplexMatrix::from_diagonal(&d)) * &self.v.transpose()
    }

    /// Takagi vector `j` (column `j` of `V`).
    pub fn vector(&self, j: usize) -> ComplexVector {
        self.v.column(j)
    }
}

/// Autonne–Takagi factorization of a complex symmetric matrix.
///
/// Unitary inputs take a fast path: real and imaginary parts commute, so one
/// real orthogonal matrix diagonalizes both. Other inputs go through the real
/// symmetric embedding `[[Re A, Im A], [Im A, -Re A]]`, whose eigenvector
/// `(x, y)` for eigenvalue `s >= 0` yields a Takagi vector `x + iy`.
///
/// Each column is fixed up to sign only (or up to a phase when its value is
/// zero); the sign is chosen so the largest-magnitude entry has positive
/// real part.
pub fn takagi(a: &ComplexMatrix, tol: &Tolerances) -> Result<TakagiResult> {
    a.require_square()?;
    let scale = a.max_abs().max(1.0);
    let defect = a.symmetry_defect();
    if defect > tol.eq_tol * scale {
        return Err(Error::NotSymmetric(defect));
    }
    if a.is_unitary(tol.eq_tol) {
        return takagi_symmetric_unitary(a, tol);
    }
    Ok(finish(general(a), a.max_abs()))
}

/// Fast path for symmetric unitary input: all Takagi values are 1 and `V`
/// is a real orthogonal matrix times a diagonal phase.
pub fn takagi_symmetric_unitary(s: &ComplexMatrix, tol: &Tolerances) -> Result<TakagiResult> {
    s.require_square()?;
    let defect = s.unitarity_defect();
    if defect > tol.eq_tol.max(1e-9) * 10.0 {
        return Err(Error::NotUnitary(defect));
    }
    let re = s.real_part();
    let im = s.imag_part();
    let re = (&re + re.transpose()) * 0.5;
    let im = (&im + im.transpose()) * 0.5;
    let o = simultaneous_real_diagonalization(&re, &im, 1e-6);
    let n = s.rows();
    let oc = ComplexMatrix::from_fn(n, n, |i, j| c64(o[(i, j)], 0.0));
    let d = &(&oc.transpose() * s) * &oc;
    let v = ComplexMatrix::from_fn(n, n, |i, j| oc.get(i, j) * cis(0.5 * d.get(j, j).arg()));
    Ok(finish((v, vec![1.0; n]), 1.0))
}

fn general(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let n = a.rows();
    let re = a.real_part();
    let im = a.imag_part();
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&re);
    h.view_mut((0, n), (n, n)).copy_from(&im);
    h.view_mut((n, 0), (n, n)).copy_from(&im);
    h.view_mut((n, n), (n, n)).copy_from(&(-&re));
    let h = (&h + h.transpose()) * 0.5;
    let (values, vectors) = real_symmetric_eigen(&h);

    let zero_thr = 1e-12 * a.max_abs().max(1.0) * (n as f64);
    let to_complex = |k: usize| -> nalgebra::DVector<C64> {
        nalgebra::DVector::from_fn(n, |i, _| c64(vectors[(i, k)], vectors[(i + n, k)]))
    };

    let mut cols: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(n);
    let mut sing: Vec<f64> = Vec::with_capacity(n);
    // Positive eigenvalues, largest first; they are automatically orthonormal
    // as complex vectors.
    for k in (0..2 * n).rev() {
        if values[k] <= zero_thr || cols.len() == n {
            break;
        }
        cols.push(to_complex(k));
        sing.push(values[k]);
    }
    // Null space: the real embedding doubles it, so extract an orthonormal
    // complex basis by pivoted Gram-Schmidt.
    let mut candidates: Vec<nalgebra::DVector<C64>> = (0..2 * n)
        .filter(|&k| values[k].abs() <= zero_thr)
        .map(to_complex)
        .collect();
    while cols.len() < n {
        for c in candidates.iter_mut() {
            for q in &cols {
                let p = q.dotc(c);
                *c -= q * p;
            }
        }
        let best = candidates
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .map(|(i, _)| i);
        match best {
            Some(i) if candidates[i].norm() > 1e-8 => {
                let c = candidates.swap_remove(i);
                let nrm = c.norm();
                cols.push(c / c64(nrm, 0.0));
                sing.push(0.0);
            }
            _ => {
                // Rounding left the split between positive and null space
                // inconsistent; complete with any orthonormal vectors.
                let e = complete_basis(&cols, n);
                cols.push(e);
                sing.push(0.0);
            }
        }
    }
    let v = ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]);
    (v, sing)
}

fn complete_basis(cols: &[nalgebra::DVector<C64>], n: usize) -> nalgebra::DVector<C64> {
    let mut best = nalgebra::DVector::zeros(n);
    let mut best_norm = -1.0;
    for k in 0..n {
        let mut e = nalgebra::DVector::from_fn(n, |i, _| c64(if i == k { 1.0 } else { 0.0 }, 0.0));
        for q in cols {
            let p = q.dotc(&e);
            e -= q * p;
        }
        if e.norm() > best_norm {
            best_norm = e.norm();
            best = e;
        }
    }
    let nrm = best.norm();
    best / c64(nrm, 0.0)
}

/// Sorts descending (stable) and canonicalizes column signs or phases.
fn finish((v, values): (ComplexMatrix, Vec<f64>), scale: f64) -> TakagiResult {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let zero_thr = 1e-12 * scale.max(1.0);
    let mut out = ComplexMatrix::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    for (j, &k) in order.iter().enumerate() {
        let col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let lead = col
            .iter()
            .find(|z| z.norm() >= max - 1e-12)
            .copied()
            .unwrap_or(c64(1.0, 0.0));
        let fix = if values[k] <= zero_thr {
            lead.conj() / lead.norm()
        } else if lead.re < 0.0 {
            c64(-1.0, 0.0)
        } else {
            c64(1.0, 0.0)
        };
        for (i, z) in col.iter().enumerate() {
            out.set(i, j, z * fix);
        }
        sorted.push(values[k]);
    }
    TakagiResult {
        v: out,
        values: sorted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity() {
        let r = takagi(&ComplexMatrix::identity(4), &tol()).unwrap();
        assert_eq!(r.values.len(), 4);
        assert!(r.values.iter().all(|&s| (s - 1.0).abs() < 1e-12));
        assert!(r.reconstruct().approx_eq(&ComplexMatrix::identity(4), 1e-12));
    }

    #[test]
    fn diagonal_phases() {
        let (a, b) = (0.7, -2.1);
        let m = ComplexMatrix::from_diagonal(&[cis(a), cis(b)]);
        let r = takagi(&m, &tol()).unwrap();
        assert!(r.reconstruct().approx_eq(&m, 1e-12));
        // Up to column order and sign, V = diag(e^{ia/2}, e^{ib/2}).
        for j in 0..2 {
            let col = r.vector(j);
            let (k, z) = if col[0].norm() > 0.5 { (a, col[0]) } else { (b, col[1]) };
            assert!((z * z - cis(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn swap_like_pair() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let r = takagi(&m, &tol()).unwrap();
        assert!(r.values.iter().all(|&s| (s - 1.0).abs() < 1e-12));
        assert!((&r.v * &r.v.transpose()).approx_eq(&m, 1e-12));
    }

    #[test]
    fn rank_deficient_and_rejects_asymmetric() {
        let m = ComplexMatrix::from_rows(&[
            vec![c64(1.0, 0.0), c64(0.0, 1.0)],
            vec![c64(0.0, 1.0), c64(-1.0, 0.0)],
        ])
        .unwrap();
        let r = takagi(&m, &tol()).unwrap();
        assert!((r.values[0] - 2.0).abs() < 1e-12 && r.values[1].abs() < 1e-12);
        assert!(r.v.is_unitary(1e-12));
        assert!(r.reconstruct().approx_eq(&m, 1e-12));

        let zero = ComplexMatrix::zeros(3, 3);
        let r = takagi(&zero, &tol()).unwrap();
        assert!(r.v.is_unitary(1e-12) && r.values.iter().all(|&s| s == 0.0));

        let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(takagi(&bad, &tol()), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn degenerate_general_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = random::haar_unitary(5, &mut rng);
        let d = ComplexMatrix::from_diagonal(&[
            c64(2.0, 0.0),
            c64(2.0, 0.0),
            c64(0.5, 0.0),
            c64(0.0, 0.0),
            c64(0.0, 0.0),
        ]);
        let a = &(&w * &d) * &w.transpose();
        let r = takagi(&a, &tol()).unwrap();
        assert!(r.v.is_unitary(1e-10));
        assert!(r.reconstruct().approx_eq(&a, 1e-10));
        let expected = [2.0, 2.0, 0.5, 0.0, 0.0];
        for (s, e) in r.values.iter().zip(expected) {
            assert!((s - e).abs() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn reconstructs_random_symmetric(seed in any::<u64>(), n in 2usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::random_symmetric(n, &mut rng);
            let r = takagi(&a, &tol()).unwrap();
            prop_assert!(r.v.is_unitary(1e-9));
            prop_assert!(r.reconstruct().max_abs_diff(&a) < 1e-9);
            prop_assert!(r.values.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(r.values.iter().all(|&s| s >= 0.0));
        }

        #[test]
        fn symmetric_unitary_values_are_one(seed in any::<u64>(), n in 2usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random::random_symmetric_unitary(n, &mut rng);
            let r = takagi(&s, &tol()).unwrap();
            prop_assert!(r.values.iter().all(|&v| (v - 1.0).abs() < 1e-9));
            prop_assert!(r.reconstruct().max_abs_diff(&s) < 1e-9);
        }
    }
}
