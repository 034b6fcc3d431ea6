//! Antiunitary operators and conjugations.
//!
//! An antiunitary `Θ` is stored as the unitary `U` with `Θψ = U·conj(ψ)` in
//! the computational product basis. Changing to an orthonormal basis `E`
//! (columns) gives the representation `E† U conj(E)`; a unitary `W` acts as
//! `WΘW†`, whose matrix is `W U Wᵀ`.

mod frame;
pub mod named;
mod wigner;

pub use frame::Frame;
pub use named::{build_named, Named, NamedSpec};
pub use wigner::{is_spin_flip_sum, random_spin_flip_sum, wigner_canonical_form, WignerForm};

use crate::error::{Error, Result};
use crate::linalg::{takagi_symmetric_unitary, ComplexMatrix, ComplexVector, Tolerances, C64};

/// Antiunitary operator `ψ ↦ U·conj(ψ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Antiunitary {
    u: ComplexMatrix,
}

impl Antiunitary {
    /// Wraps a unitary matrix. A matrix without a partition is treated as a
    /// single subsystem.
    pub fn new(u: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        u.require_square()?;
        let defect = u.unitarity_defect();
        if defect > tol.eq_tol {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self::from_unitary_unchecked(u))
    }

    pub(crate) fn from_unitary_unchecked(mut u: ComplexMatrix) -> Self {
        if u.dims().is_none() {
            let n = u.rows();
            u.set_dims_unchecked(Some(vec![n]));
        }
        Self { u }
    }

    /// Matrix representation in the computational product basis.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn dims(&self) -> &[usize] {
        self.u.dims().expect("partition is always attached")
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn apply(&self, psi: &ComplexVector) -> Result<ComplexVector> {
        let mut out = self.u.mul_vec(&psi.conj())?;
        out.set_dims_unchecked(psi.dims().map(<[usize]>::to_vec));
        Ok(out)
    }

    /// `Θ_A ⊗ Θ_B`; the partition is the concatenation.
    pub fn tensor(&self, other: &Antiunitary) -> Antiunitary {
        Self::from_unitary_unchecked(self.u.kron(&other.u))
    }

    /// Block-diagonal `Θ_A ⊕ Θ_B` acting on a single (unpartitioned) space.
    pub fn direct_sum(&self, other: &Antiunitary) -> Antiunitary {
        let mut u = self.u.direct_sum(&other.u);
        u.set_dims_unchecked(None);
        Self::from_unitary_unchecked(u)
    }

    /// `W Θ W†` for a unitary `W`.
    pub fn transform(&self, w: &ComplexMatrix) -> Result<Antiunitary> {
        if w.rows() != self.dim() || !w.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary for a {}-dimensional operator",
                w.rows(),
                w.cols(),
                self.dim()
            )));
        }
        let mut u = &(w * &self.u) * &w.transpose();
        u.set_dims_unchecked(self.u.dims().map(<[usize]>::to_vec));
        Ok(Self { u })
    }

    /// Matrix of `Θ` in the orthonormal basis given by the columns of `e`.
    pub fn representation_in(&self, e: &ComplexMatrix) -> ComplexMatrix {
        &(&e.adjoint() * &self.u) * &e.conj()
    }

    /// `Θ²` as a linear operator, `U·conj(U)`.
    pub fn square(&self) -> ComplexMatrix {
        &self.u * &self.u.conj()
    }

    pub fn is_conjugation(&self, tol: &Tolerances) -> bool {
        self.u.is_symmetric(tol.eq_tol)
    }

    pub fn into_conjugation(self, tol: &Tolerances) -> Result<Conjugation> {
        let defect = self.u.symmetry_defect();
        if defect > tol.eq_tol {
            return Err(Error::NotSymmetric(defect));
        }
        Ok(Conjugation { inner: self })
    }
}

/// Hermitian antiunitary (`θ² = 1`): a symmetric unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Conjugation {
    inner: Antiunitary,
}

impl Conjugation {
    pub fn new(u: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        Antiunitary::new(u, tol)?.into_conjugation(tol)
    }

    /// Plain complex conjugation on a space with the given partition.
    pub fn complex_conjugation(dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        let u = ComplexMatrix::identity(n).with_dims(dims.to_vec())?;
        Ok(Self {
            inner: Antiunitary::from_unitary_unchecked(u),
        })
    }

    pub(crate) fn from_symmetric_unitary_unchecked(u: ComplexMatrix) -> Self {
        Self {
            inner: Antiunitary::from_unitary_unchecked(u),
        }
    }

    pub fn as_antiunitary(&self) -> &Antiunitary {
        &self.inner
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.inner.matrix()
    }

    pub fn dims(&self) -> &[usize] {
        self.inner.dims()
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn apply(&self, psi: &ComplexVector) -> Result<ComplexVector> {
        self.inner.apply(psi)
    }

    pub fn tensor(&self, other: &Conjugation) -> Conjugation {
        Conjugation {
            inner: self.inner.tensor(&other.inner),
        }
    }

    /// `W θ W†`, again a conjugation.
    pub fn transform(&self, w: &ComplexMatrix) -> Result<Conjugation> {
        Ok(Conjugation {
            inner: self.inner.transform(w)?,
        })
    }

    /// Replaces the partition (same total dimension).
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Conjugation> {
        let u = self.matrix().clone().with_dims(dims)?;
        Ok(Self::from_symmetric_unitary_unchecked(u))
    }

    pub fn representation_in(&self, e: &ComplexMatrix) -> ComplexMatrix {
        self.inner.representation_in(e)
    }

    /// Eigenvalue `z` with `θψ = zψ`, if `ψ` is an eigenvector.
    ///
    /// `z = <ψ|θψ>/<ψ|ψ>` is accepted iff `|θψ - zψ| < eq_tol |ψ|`.
    pub fn is_eigenvector(&self, psi: &ComplexVector, tol: &Tolerances) -> Result<Option<C64>> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let t = self.apply(psi)?;
        let z = psi.inner(&t) / (n * n);
        let residual = t.sub(&psi.scale(z)).norm();
        if residual < tol.eq_tol * n && z.norm() > 0.0 {
            Ok(Some(z / z.norm()))
        } else {
            Ok(None)
        }
    }

    /// Checks that a complete frame consists of eigenvectors.
    pub fn is_eigenframe(&self, frame: &Frame, tol: &Tolerances) -> Result<EigenframeCheck> {
        frame.check_complete(tol)?;
        let mut eigenvalues = Vec::with_capacity(frame.len());
        for v in frame.vectors() {
            eigenvalues.push(if v.norm() == 0.0 {
                // A zero member carries no measurement outcome.
                Some(C64::new(1.0, 0.0))
            } else {
                self.is_eigenvector(v, tol)?
            });
        }
        Ok(EigenframeCheck {
            is_eigenframe: eigenvalues.iter().all(Option::is_some),
            eigenvalues,
        })
    }

    /// Orthonormal basis of the real subspace `{ψ : θψ = ψ}`, from the
    /// Takagi factorization `U = V Vᵀ`.
    pub fn real_subspace_basis(&self, tol: &Tolerances) -> Result<Frame> {
        let t = takagi_symmetric_unitary(self.matrix(), tol)?;
        let mut v = t.v;
        v.set_dims_unchecked(Some(self.dims().to_vec()));
        Frame::from_columns(&v)
    }
}

/// Result of [`Conjugation::is_eigenframe`]: per-vector eigenvalues, `None`
/// for vectors that are not eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenframeCheck {
    pub is_eigenframe: bool,
    pub eigenvalues: Vec<Option<C64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, pauli, random};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn spin_flip() -> Antiunitary {
        Antiunitary::new(pauli::i_y(), &tol()).unwrap()
    }

    #[test]
    fn complex_conjugation_conjugates() {
        let theta = Conjugation::complex_conjugation(&[2]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexVector::new(vec![c64(s, 0.0), c64(0.0, s)]).unwrap();
        let out = theta.apply(&psi).unwrap();
        assert!(out.max_abs_diff(&psi.conj()) < 1e-15);
    }

    #[test]
    fn spin_flip_is_universal_not() {
        let f = spin_flip();
        let zero = ComplexVector::basis(2, 0);
        let one = ComplexVector::basis(2, 1);
        assert!(f.apply(&zero).unwrap().max_abs_diff(&one.scale(c64(-1.0, 0.0))) < 1e-15);
        assert!(f.apply(&one).unwrap().max_abs_diff(&zero) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let psi = random::random_unit_vector(2, &mut rng);
            assert!(psi.inner(&f.apply(&psi).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn spin_flip_is_not_a_conjugation_but_its_square_is() {
        let f = spin_flip();
        assert!(!f.is_conjugation(&tol()));
        assert!(matches!(
            f.clone().into_conjugation(&tol()),
            Err(Error::NotSymmetric(_))
        ));
        let ff = f.tensor(&f);
        assert!(ff.is_conjugation(&tol()));
        assert_eq!(ff.dims(), &[2, 2]);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(matches!(Conjugation::new(m, &tol()), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn eigenvector_examples() {
        let theta = Conjugation::complex_conjugation(&[2]).unwrap();
        assert_eq!(
            theta.is_eigenvector(&ComplexVector::basis(2, 0), &tol()).unwrap(),
            Some(c64(1.0, 0.0))
        );
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexVector::new(vec![c64(s, 0.0), c64(0.0, s)]).unwrap();
        assert_eq!(theta.is_eigenvector(&psi, &tol()).unwrap(), None);
        assert_eq!(
            theta.is_eigenvector(&ComplexVector::zeros(2), &tol()),
            Err(Error::ZeroVector)
        );
        // If zη is fixed by θ then η has eigenvalue z².
        let z = crate::linalg::cis(0.3);
        let eta = ComplexVector::from_real(&[0.6, 0.8]).unwrap().scale(z.conj());
        let ev = theta.is_eigenvector(&eta, &tol()).unwrap().unwrap();
        assert!((ev - z * z).norm() < 1e-14);
    }

    #[test]
    fn real_subspace_vectors_are_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..6 {
            let theta = Conjugation::new(random::random_symmetric_unitary(n, &mut rng), &tol()).unwrap();
            let basis = theta.real_subspace_basis(&tol()).unwrap();
            assert_eq!(basis.len(), n);
            for (i, v) in basis.vectors().iter().enumerate() {
                assert!(theta.apply(v).unwrap().max_abs_diff(v) < 1e-12);
                for w in &basis.vectors()[i..] {
                    assert!(v.inner(w).im.abs() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn conjugation_squares_to_identity(seed in any::<u64>(), n in 1usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let theta = Conjugation::new(random::random_symmetric_unitary(n, &mut rng), &tol()).unwrap();
            for _ in 0..16 {
                let psi = random::random_unit_vector(n, &mut rng);
                let back = theta.apply(&theta.apply(&psi).unwrap()).unwrap();
                prop_assert!(back.max_abs_diff(&psi) < 1e-12);
            }
        }

        #[test]
        fn eigenvector_projector_is_invariant(seed in any::<u64>(), n in 1usize..=6) {
            // θ|η><η|θ = |η><η| for eigenvectors η, as a matrix:
            // U conj(|η><η|) U† = |η><η|.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let theta = Conjugation::new(random::random_symmetric_unitary(n, &mut rng), &tol()).unwrap();
            let basis = theta.real_subspace_basis(&tol()).unwrap();
            let phase = crate::linalg::cis(rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU));
            let eta = basis.vectors()[0].scale(phase);
            prop_assert!(theta.is_eigenvector(&eta, &tol()).unwrap().is_some());
            let p = eta.outer();
            let u = theta.matrix();
            let sandwiched = &(u * &p.conj()) * &u.adjoint();
            prop_assert!(sandwiched.max_abs_diff(&p) < 1e-12);
        }
    }
}
