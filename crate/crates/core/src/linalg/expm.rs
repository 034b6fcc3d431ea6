use super::{c64, cis, hermitian_eigen, ComplexMatrix};
use crate::error::{Error, Result};

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    h.require_square()?;
    let defect = h.hermiticity_defect();
    if defect > 1e-9 * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// `e^{i t H}` for Hermitian `H`, via its eigendecomposition.
pub fn matrix_exp_i_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    check_hermitian(h)?;
    let (values, q) = hermitian_eigen(h);
    let phases: Vec<_> = values.iter().map(|&l| cis(t * l)).collect();
    let out = &(&q * &ComplexMatrix::from_diagonal(&phases)) * &q.adjoint();
    Ok(out.with_dims_of(h))
}

/// Directional derivative `d/ds e^{i(A + sB)}` at `s = 0` for Hermitian `A`
/// and `B`, using divided differences of `x -> e^{ix}` on the spectrum of `A`.
pub fn exp_i_hermitian_derivative(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_hermitian(a)?;
    check_hermitian(b)?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "generator {}x{} vs direction {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (lam, q) = hermitian_eigen(a);
    let bq = &(&q.adjoint() * b) * &q;
    let n = lam.len();
    let g = ComplexMatrix::from_fn(n, n, |i, j| {
        let d = lam[i] - lam[j];
        let divided = if d.abs() < 1e-9 {
            c64(0.0, 1.0) * cis(0.5 * (lam[i] + lam[j]))
        } else {
            (cis(lam[i]) - cis(lam[j])) / d
        };
        divided * bq.get(i, j)
    });
    Ok((&(&q * &g) * &q.adjoint()).with_dims_of(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, random};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_time_is_identity() {
        let e = matrix_exp_i_hermitian(&pauli::y(), 0.0).unwrap();
        assert!(e.approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn sigma_z_quarter_turn() {
        let e = matrix_exp_i_hermitian(&pauli::z(), std::f64::consts::FRAC_PI_2).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c64(0.0, 1.0), c64(0.0, -1.0)]);
        assert!(e.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn rejects_non_hermitian() {
        assert!(matches!(
            matrix_exp_i_hermitian(&pauli::i_y(), 1.0),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random::random_hermitian(4, &mut rng);
        let b = random::random_hermitian(4, &mut rng);
        let d = exp_i_hermitian_derivative(&a, &b).unwrap();
        let h = 1e-5;
        let plus = matrix_exp_i_hermitian(&(&a + &b.scale(c64(h, 0.0))), 1.0).unwrap();
        let minus = matrix_exp_i_hermitian(&(&a - &b.scale(c64(h, 0.0))), 1.0).unwrap();
        let fd = (&plus - &minus).scale(c64(0.5 / h, 0.0));
        assert!(d.approx_eq(&fd, 1e-8), "{}", d.max_abs_diff(&fd));
    }

    #[test]
    fn derivative_with_degenerate_generator() {
        let a = ComplexMatrix::identity(2);
        let d = exp_i_hermitian_derivative(&a, &pauli::x()).unwrap();
        let expected = pauli::x().scale(c64(0.0, 1.0) * cis(1.0));
        assert!(d.approx_eq(&expected, 1e-14));
    }
}
