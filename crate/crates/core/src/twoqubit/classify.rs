use serde::Serialize;

use super::lu::canonical_local_unitaries_within;
use super::{magic_spectrum, require_two_qubits, MagicSpectrum};
use crate::conjugation::{Conjugation, Frame};
use crate::error::Result;
use crate::linalg::{c64, ComplexMatrix, Tolerances, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TwoQubitTag {
    /// LU-equivalent to a product of local conjugations.
    Product,
    /// Has a product eigenbasis but is not a product conjugation.
    ProdMeasurable,
    /// No eigenframe of product vectors exists.
    SepUnmeasurable,
}

impl TwoQubitTag {
    pub fn is_prod_measurable(self) -> bool {
        !matches!(self, TwoQubitTag::SepUnmeasurable)
    }
}

#[derive(Clone, Debug)]
pub struct TwoQubitClass {
    pub tag: TwoQubitTag,
    pub spectrum: MagicSpectrum,
    /// Product eigenbasis, present unless Sep-unmeasurable.
    pub witness: Option<Frame>,
}

/// Classifies a two-qubit conjugation by its magic-basis spectrum.
///
/// Prod-measurable iff the spectrum splits into two antipodal pairs
/// `{a, -a, c, -c}` (within `degeneracy_tol`); a product conjugation iff in
/// addition `c = ±a`. The witness comes from the diagonal conjugation
/// `a·diag(1, 1, 1, (c/a)²)`, which has the same spectrum: the local
/// unitaries bringing both to the same magic-diagonal form map the
/// computational basis onto a product eigenbasis of `θ`.
pub fn classify(theta: &Conjugation, tol: &Tolerances) -> Result<TwoQubitClass> {
    require_two_qubits(theta)?;
    let spectrum = magic_spectrum(theta, tol)?;
    let Some([(a, _), (c, _)]) = spectrum.antipodal_pairs(tol.degeneracy_tol) else {
        return Ok(TwoQubitClass {
            tag: TwoQubitTag::SepUnmeasurable,
            spectrum,
            witness: None,
        });
    };
    let va = spectrum.values()[a];
    let z = spectrum.values()[c] / va;
    let product = (z - c64(1.0, 0.0)).norm() < tol.degeneracy_tol
        || (z + c64(1.0, 0.0)).norm() < tol.degeneracy_tol;
    let tag = if product {
        TwoQubitTag::Product
    } else {
        TwoQubitTag::ProdMeasurable
    };
    let witness = product_witness(theta, &spectrum, va, z, tol)?;
    Ok(TwoQubitClass {
        tag,
        spectrum,
        witness: Some(witness),
    })
}

fn product_witness(
    theta: &Conjugation,
    spectrum: &MagicSpectrum,
    va: C64,
    z: C64,
    tol: &Tolerances,
) -> Result<Frame> {
    let u = theta.matrix();
    if u.max_off_diagonal() < tol.eq_tol {
        return Frame::from_columns(&ComplexMatrix::identity(4).with_dims(vec![2, 2])?);
    }
    let d = ComplexMatrix::from_diagonal(&[va, va, va, va * z * z]).with_dims(vec![2, 2])?;
    let diag = Conjugation::new(d, tol)?;
    let target = *spectrum.values();
    let (u1, v1) = canonical_local_unitaries_within(theta, target, tol.degeneracy_tol, tol)?;
    let (u2, v2) = canonical_local_unitaries_within(&diag, target, tol.degeneracy_tol, tol)?;
    let w = (&u1.adjoint() * &u2).kron(&(&v1.adjoint() * &v2));
    let frame = Frame::from_columns(&w.with_dims(vec![2, 2])?)?;
    let check = theta.is_eigenframe(&frame, tol)?;
    if !check.is_eigenframe {
        log::warn!(
            "product witness fails the eigenvector test at eq_tol = {:e}; spectrum pairing is only approximate",
            tol.eq_tol
        );
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::named::{basis_2x2, candidate, collective_spin_flip, conjugate_swap, cz};
    use crate::linalg::random;
    use crate::schmidt::is_product_vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn assert_witness(theta: &Conjugation, class: &TwoQubitClass) {
        let w = class.witness.as_ref().expect("witness");
        assert!(theta.is_eigenframe(w, &tol()).unwrap().is_eigenframe);
        for v in w.vectors() {
            assert!(is_product_vector(v, &tol()).unwrap());
        }
    }

    #[test]
    fn named_classes() {
        let c = Conjugation::complex_conjugation(&[2, 2]).unwrap();
        let k = classify(&c, &tol()).unwrap();
        assert_eq!(k.tag, TwoQubitTag::Product);
        assert_witness(&c, &k);

        let k = classify(&cz(), &tol()).unwrap();
        assert_eq!(k.tag, TwoQubitTag::ProdMeasurable);
        assert_witness(&cz(), &k);

        assert_eq!(
            classify(&collective_spin_flip(), &tol()).unwrap().tag,
            TwoQubitTag::SepUnmeasurable
        );
        let k = classify(&conjugate_swap(2).unwrap(), &tol()).unwrap();
        assert_eq!(k.tag, TwoQubitTag::SepUnmeasurable);
        assert!(k.witness.is_none());
    }

    #[test]
    fn scrambled_candidates_have_product_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let phases: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..6.3)).collect();
            let theta = candidate(&basis_2x2(), &phases, &[2, 2], &tol()).unwrap();
            let w = random::haar_unitary(2, &mut rng).kron(&random::haar_unitary(2, &mut rng));
            let theta = theta.transform(&w).unwrap();
            let k = classify(&theta, &tol()).unwrap();
            assert!(k.tag.is_prod_measurable());
            assert_witness(&theta, &k);
        }
    }
}
