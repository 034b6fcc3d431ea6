use rand::Rng;

use super::{magic_diagonalization, magic_matrix, magic_representation};
use crate::conjugation::named::collective_spin_flip;
use crate::conjugation::{Conjugation, Frame};
use crate::error::{Error, Result};
use crate::linalg::{c64, cis, random, ComplexMatrix, ComplexVector};

fn require_four(psi: &ComplexVector) -> Result<()> {
    if psi.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a two-qubit vector, got length {}",
            psi.dim()
        )));
    }
    Ok(())
}

/// `|<ψ|Θ_f⊗Θ_f|ψ>|`, unnormalized.
fn flip_overlap(psi: &ComplexVector) -> Result<f64> {
    require_four(psi)?;
    let f = collective_spin_flip();
    Ok(psi.inner(&f.apply(psi)?).norm())
}

/// `C(ψ) = |<ψ|Θ_f⊗Θ_f|ψ>| / <ψ|ψ>`.
pub fn concurrence(psi: &ComplexVector) -> Result<f64> {
    let n = psi.norm_sqr();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((flip_overlap(psi)? / n).min(1.0))
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Entanglement entropy `h((1 + √(1 - C²))/2)`.
pub fn entanglement_entropy(psi: &ComplexVector) -> Result<f64> {
    let c = concurrence(psi)?;
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())))
}

/// `Σ_j <v_j|v_j> C(v_j) = Σ_j |<v_j|Θ_f⊗Θ_f|v_j>|` over a frame.
pub fn average_concurrence(frame: &Frame) -> Result<f64> {
    frame.vectors().iter().map(flip_overlap).sum()
}

/// `|Tr [θ]^μ|`, the minimum of [`average_concurrence`] over eigenframes.
pub fn min_average_concurrence(theta: &Conjugation) -> Result<f64> {
    Ok(magic_representation(theta)?.trace().norm())
}

/// Orthonormal basis `x_k = e^{iφ_k/2} M o_k` of the real subspace, where
/// `o_k` are the real eigenvectors of `[θ]^μ` with eigenvalues `e^{iφ_k}`.
pub fn theta_fixed_basis(theta: &Conjugation) -> Result<ComplexMatrix> {
    let (o, d) = magic_diagonalization(theta)?;
    let oc = ComplexMatrix::from_fn(4, 4, |i, j| c64(o[(i, j)], 0.0));
    let nu = &magic_matrix() * &oc;
    let x = ComplexMatrix::from_fn(4, 4, |i, k| nu.get(i, k) * cis(0.5 * d[k].arg()));
    x.with_dims(vec![2, 2])
}

/// Eigenframe `v_k = Σ_j (H_jk / 2) x_j` with the 4×4 Hadamard matrix `H`;
/// every member has concurrence `|Tr [θ]^μ| / 4`.
pub fn hadamard_eigenframe(theta: &Conjugation) -> Result<Frame> {
    let x = theta_fixed_basis(theta)?;
    const H: [[f64; 4]; 4] = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    let h = ComplexMatrix::from_fn(4, 4, |j, k| c64(0.5 * H[j][k], 0.0));
    Frame::from_columns(&(&x * &h).with_dims(vec![2, 2])?)
}

/// Random `n`-member eigenframe `y_j = Σ_k R_jk x_k` with a random real
/// `n × 4` isometry `R` (`Rᵀ R = 1`).
pub fn random_eigenframe<R: Rng + ?Sized>(
    theta: &Conjugation,
    n: usize,
    rng: &mut R,
) -> Result<Frame> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "an eigenframe of a two-qubit conjugation needs at least 4 members, got {n}"
        )));
    }
    let x = theta_fixed_basis(theta)?;
    let r = random::random_isometry(n, 4, rng);
    let rc = ComplexMatrix::from_fn(4, n, |k, j| c64(r[(j, k)], 0.0));
    let mut y = &x * &rc;
    y.set_dims_unchecked(None);
    let vectors = (0..n).map(|j| y.column(j)).collect();
    Frame::with_dims(vectors, vec![2, 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::named::{collective_spin_flip, conjugate_swap, theta_alpha};
    use crate::linalg::Tolerances;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn concurrence_examples() {
        assert_eq!(concurrence(&ComplexVector::basis(4, 0)).unwrap(), 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexVector::from_real(&[s, 0.0, 0.0, s]).unwrap();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-15);
        assert!((entanglement_entropy(&bell).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(&ComplexVector::zeros(4)), Err(Error::ZeroVector));
    }

    #[test]
    fn min_average_concurrence_examples() {
        assert!((min_average_concurrence(&collective_spin_flip()).unwrap() - 4.0).abs() < 1e-12);
        assert!((min_average_concurrence(&conjugate_swap(2).unwrap()).unwrap() - 2.0).abs() < 1e-12);
        let a = std::f64::consts::FRAC_PI_4;
        assert!((min_average_concurrence(&theta_alpha(a)).unwrap() - 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hadamard_frames_have_equal_concurrence() {
        let cases = [
            (Conjugation::complex_conjugation(&[2, 2]).unwrap(), 0.0),
            (collective_spin_flip(), 1.0),
            (conjugate_swap(2).unwrap(), 0.5),
        ];
        for (theta, c) in cases {
            let f = hadamard_eigenframe(&theta).unwrap();
            assert!(f.is_complete(&tol()));
            assert!(theta.is_eigenframe(&f, &tol()).unwrap().is_eigenframe);
            for v in f.vectors() {
                assert!((concurrence(v).unwrap() - c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_frames_respect_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let theta = conjugate_swap(2).unwrap();
        let bound = min_average_concurrence(&theta).unwrap();
        for n in 4..=8 {
            let f = random_eigenframe(&theta, n, &mut rng).unwrap();
            assert!(f.is_complete(&tol()));
            assert!((f.weights().iter().sum::<f64>() - 4.0).abs() < 1e-12);
            assert!(theta.is_eigenframe(&f, &tol()).unwrap().is_eigenframe);
            assert!(average_concurrence(&f).unwrap() >= bound - 1e-9);
        }
    }
}
