use nalgebra::DMatrix;

use super::{magic_diagonalization, magic_matrix, magic_spectrum, require_two_qubits, MagicSpectrum};
use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::linalg::{c64, cis, ComplexMatrix, Tolerances, C64};

/// Local-unitary equivalence: equal magic-basis spectra up to a global phase.
pub fn lu_equivalent(a: &Conjugation, b: &Conjugation, tol: &Tolerances) -> Result<bool> {
    Ok(magic_spectrum(a, tol)?.equivalent(&magic_spectrum(b, tol)?, tol))
}

/// Local unitaries `(U, V)` with `[(U⊗V) θ (U⊗V)†]^μ = diag(target)`.
///
/// Diagonalizes `[θ]^μ` by a real orthogonal `O`, permutes the eigenvalues
/// onto the target, fixes the determinant with `diag(-1, 1, 1, 1)`, splits
/// the resulting SO(4) element into SU(2) ⊗ SU(2), and absorbs the global
/// phase into `U`.
pub fn canonical_local_unitaries(
    theta: &Conjugation,
    target: [C64; 4],
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    canonical_local_unitaries_within(theta, target, tol.eq_tol, tol)
}

/// As [`canonical_local_unitaries`] with an explicit spectrum-matching
/// tolerance.
pub(crate) fn canonical_local_unitaries_within(
    theta: &Conjugation,
    target: [C64; 4],
    match_tol: f64,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    require_two_qubits(theta)?;
    let target_spec = MagicSpectrum::new(target, tol)?;
    let (o, d) = magic_diagonalization(theta)?;
    let own = MagicSpectrum::new(d, tol)?;
    let m = own
        .matching(&target_spec, match_tol)
        .ok_or(Error::InequivalentSpectrum)?;

    // Row perm[k] of the permutation picks eigenvalue k: P_{perm[k], k} = 1.
    let mut p = DMatrix::<f64>::zeros(4, 4);
    for k in 0..4 {
        p[(m.permutation[k], k)] = 1.0;
    }
    let mut rot = p * o.transpose();
    if rot.determinant() < 0.0 {
        rot.row_mut(0).neg_mut();
    }
    let (u, v) = so4_to_su2_pair(&rot, tol)?;
    Ok((u.scale(cis(0.5 * m.phase)), v))
}

/// Splits `M O M†` into `U' ⊗ V'` with `U', V'` in SU(2), for a real
/// orthogonal `O` of determinant +1.
pub fn so4_to_su2_pair(o: &DMatrix<f64>, tol: &Tolerances) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if o.nrows() != 4 || o.ncols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x4 orthogonal matrix, got {}x{}",
            o.nrows(),
            o.ncols()
        )));
    }
    let ortho = (o.transpose() * o - DMatrix::identity(4, 4)).amax();
    if ortho > tol.eq_tol.max(1e-9) * 10.0 {
        return Err(Error::NotUnitary(ortho));
    }
    let det = o.determinant();
    if det < 0.0 {
        return Err(Error::NegativeDeterminant(det));
    }
    let mm = magic_matrix();
    let oc = ComplexMatrix::from_fn(4, 4, |i, j| c64(o[(i, j)], 0.0));
    let k = &(&mm * &oc) * &mm.adjoint();
    let block = |a: usize, b: usize| {
        ComplexMatrix::from_fn(2, 2, |i, j| k.get(2 * a + i, 2 * b + j))
    };
    let (mut ba, mut bb, mut best) = (0, 0, -1.0);
    for a in 0..2 {
        for b in 0..2 {
            let f = block(a, b).as_nalgebra().norm();
            if f > best {
                (ba, bb, best) = (a, b, f);
            }
        }
    }
    let blk = block(ba, bb);
    let det_b = blk.get(0, 0) * blk.get(1, 1) - blk.get(0, 1) * blk.get(1, 0);
    let u_ab = det_b.sqrt();
    let v = blk.scale(u_ab.inv());
    let u = ComplexMatrix::from_fn(2, 2, |a, b| (&v.adjoint() * &block(a, b)).trace() * 0.5);
    let err = u.kron(&v).max_abs_diff(&k);
    if err > 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "magic-basis image is not a local unitary (residual {err:e})"
        )));
    }
    Ok((u, v))
}
