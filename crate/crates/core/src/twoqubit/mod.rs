//! Two-qubit conjugations: magic basis, magic-basis spectra, local-unitary
//! equivalence, Prod-measurability classification, concurrence and
//! minimum-entanglement eigenframes.

mod classify;
mod ejm;
mod entanglement;
mod lu;
mod spectrum;

pub use classify::{classify, TwoQubitClass, TwoQubitTag};
pub use ejm::{
    ejm_frame, ejm_vector, ejm_vector_bell_form, iso_entangled_frame, iso_entangled_vector, ket_n,
    tetrahedron, verify_frame_conditions, FrameConditions,
};
pub use entanglement::{
    average_concurrence, binary_entropy, concurrence, entanglement_entropy, hadamard_eigenframe,
    min_average_concurrence, random_eigenframe, theta_fixed_basis,
};
pub use lu::{canonical_local_unitaries, lu_equivalent, so4_to_su2_pair};
pub use spectrum::{MagicSpectrum, SpectrumMatch};

use nalgebra::DMatrix;

use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::linalg::{c64, simultaneous_real_diagonalization, ComplexMatrix, Tolerances, C64};

/// Columns are the magic basis `Ψ+, iΨ-, iΦ+, Φ-` in the computational basis,
/// with `Ψ± = (|00> ± |11>)/√2` and `Φ± = (|01> ± |10>)/√2`.
pub fn magic_matrix() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c64(0.0, 0.0);
    let r = c64(s, 0.0);
    let i = c64(0.0, s);
    ComplexMatrix::from_rows(&[
        vec![r, i, z, z],
        vec![z, z, i, r],
        vec![z, z, i, -r],
        vec![r, -i, z, z],
    ])
    .expect("4x4")
    .with_dims(vec![2, 2])
    .expect("4 = 2*2")
}

pub(crate) fn require_two_qubits(theta: &Conjugation) -> Result<()> {
    if theta.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit operation needs dims [2, 2], got {:?}",
            theta.dims()
        )));
    }
    Ok(())
}

/// `[θ]^μ = M† [θ] conj(M)`, a symmetric unitary.
pub fn magic_representation(theta: &Conjugation) -> Result<ComplexMatrix> {
    require_two_qubits(theta)?;
    let m = magic_matrix();
    let s = theta.representation_in(&m);
    Ok((&s + &s.transpose()).scale(c64(0.5, 0.0)))
}

/// Real orthogonal `O` and eigenvalues `d` with `Oᵀ [θ]^μ O = diag(d)`.
pub(crate) fn magic_diagonalization(theta: &Conjugation) -> Result<(DMatrix<f64>, [C64; 4])> {
    let s = magic_representation(theta)?;
    let o = simultaneous_real_diagonalization(&s.real_part(), &s.imag_part(), 1e-6);
    let oc = DMatrix::from_fn(4, 4, |i, j| c64(o[(i, j)], 0.0));
    let d = oc.transpose() * s.as_nalgebra() * &oc;
    Ok((o, [d[(0, 0)], d[(1, 1)], d[(2, 2)], d[(3, 3)]]))
}

/// Magic-basis spectrum of a two-qubit conjugation.
pub fn magic_spectrum(theta: &Conjugation, tol: &Tolerances) -> Result<MagicSpectrum> {
    let (_, d) = magic_diagonalization(theta)?;
    MagicSpectrum::new(d, tol)
}
