//! Random matrices and vectors for property tests and randomized searches.
//!
//! Every sampler takes the RNG explicitly so results are reproducible from a
//! seed.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{c64, cis, ComplexMatrix, ComplexVector, C64};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(normal(rng), normal(rng))
}

/// Complex Ginibre matrix.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng).into_nalgebra();
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    ComplexMatrix::from_nalgebra(q)
}

/// Haar-distributed element of SU(2).
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(2, rng);
    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    u.scale(det.sqrt().inv())
}

/// Haar-distributed real orthogonal matrix (either determinant).
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| normal(rng));
    let (mut q, r) = g.qr().unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

/// `rows x cols` real matrix with orthonormal columns (`R^T R = I`).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    random_orthogonal(rows, rng).columns(0, cols).into_owned()
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    (&g + &g.adjoint()).scale(c64(0.5, 0.0))
}

/// Complex symmetric matrix with Gaussian entries.
pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    (&g + &g.transpose()).scale(c64(0.5, 0.0))
}

/// Symmetric unitary `W diag(e^{i phi}) W^T` with Haar `W`.
pub fn random_symmetric_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let w = haar_unitary(n, rng);
    let phases: Vec<C64> = (0..n)
        .map(|_| cis(rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    let s = &(&w * &ComplexMatrix::from_diagonal(&phases)) * &w.transpose();
    // Remove the rounding asymmetry so the result is symmetric to the last bit.
    (&s + &s.transpose()).scale(c64(0.5, 0.0))
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let v = ComplexVector::new((0..n).map(|_| complex_normal(rng)).collect())
        .expect("n > 0");
    v.normalized().expect("Gaussian vector is nonzero")
}

/// Uniform point on the unit sphere in R^3.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_have_their_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            assert!(haar_unitary(n, &mut rng).is_unitary(1e-12));
            let s = random_symmetric_unitary(n, &mut rng);
            assert!(s.is_unitary(1e-12) && s.is_symmetric(1e-15));
            let o = random_orthogonal(n, &mut rng);
            let e = &o.transpose() * &o - DMatrix::identity(n, n);
            assert!(e.amax() < 1e-12);
            assert!(random_hermitian(n, &mut rng).is_hermitian(1e-15));
            assert!((random_unit_vector(n, &mut rng).norm() - 1.0).abs() < 1e-14);
        }
        let u = haar_su2(&mut rng);
        let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
        assert!((det - c64(1.0, 0.0)).norm() < 1e-12);
        let r = random_isometry(7, 4, &mut rng);
        assert!((r.transpose() * &r - DMatrix::identity(4, 4)).amax() < 1e-12);
    }
}
