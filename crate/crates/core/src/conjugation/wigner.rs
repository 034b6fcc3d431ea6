use rand::Rng;

use super::Antiunitary;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, normal_eigen, random, takagi_symmetric_unitary, ComplexMatrix, Tolerances, C64,
};

/// Canonical form of an antiunitary under unitary congruence:
/// `W U Wᵀ = 1_k ⊕ A_{ω_1} ⊕ ... ⊕ A_{ω_m}` with `A_ω = [[0, 1], [ω, 0]]`.
///
/// `ω` and `conj(ω)` label congruent blocks; we report the one with
/// `Im ω >= 0` (so `ω = -1` for spin-flip blocks).
#[derive(Clone, Debug)]
pub struct WignerForm {
    pub identity_block_size: usize,
    pub omegas: Vec<C64>,
    pub w: ComplexMatrix,
}

impl WignerForm {
    /// The block matrix `1_k ⊕ A_{ω_1} ⊕ ...`.
    pub fn canonical_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(self.identity_block_size);
        let mut first = self.identity_block_size == 0;
        for &w in &self.omegas {
            let block = ComplexMatrix::from_rows(&[
                vec![c64(0.0, 0.0), c64(1.0, 0.0)],
                vec![w, c64(0.0, 0.0)],
            ])
            .expect("2x2");
            m = if first { block } else { m.direct_sum(&block) };
            first = false;
        }
        m
    }

    /// `max |W U Wᵀ - canonical|`.
    pub fn reconstruction_error(&self, a: &Antiunitary) -> f64 {
        let got = &(&self.w * a.matrix()) * &self.w.transpose();
        got.max_abs_diff(&self.canonical_matrix())
    }
}

/// Brings an antiunitary to its Wigner canonical form.
///
/// The eigenspaces of `N = U conj(U)` drive the construction: `Θ` maps the
/// `λ`-eigenspace onto the `conj(λ)`-eigenspace. The `λ = 1` space carries a
/// conjugation (identity block after a Takagi step), `λ = -1` splits into
/// pairs `(v, -Θv)`, and each `v` with `Im λ > 0` pairs with `Θv`.
pub fn wigner_canonical_form(a: &Antiunitary, tol: &Tolerances) -> WignerForm {
    let n = a.dim();
    let u = a.matrix();
    let gap = tol.degeneracy_tol.max(1e-9) * 10.0;
    let (lams, q) = normal_eigen(&a.square(), gap);

    let mut ones = Vec::new();
    let mut minus = Vec::new();
    let mut upper = Vec::new();
    for (k, &l) in lams.iter().enumerate() {
        if (l - c64(1.0, 0.0)).norm() < gap {
            ones.push(k);
        } else if (l + c64(1.0, 0.0)).norm() < gap {
            minus.push(k);
        } else if l.im > 0.0 {
            upper.push(k);
        }
    }

    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(n);
    let theta = |v: &nalgebra::DVector<C64>| u.as_nalgebra() * v.map(|z| z.conj());

    if !ones.is_empty() {
        let e1 = nalgebra::DMatrix::from_fn(n, ones.len(), |i, j| q.get(i, ones[j]));
        let c = ComplexMatrix::from_nalgebra(e1.adjoint() * u.as_nalgebra() * e1.map(|z| z.conj()));
        let c = (&c + &c.transpose()).scale(c64(0.5, 0.0));
        let t = takagi_symmetric_unitary(&c, &Tolerances::new(1e-6, tol.degeneracy_tol, tol.fisher_tol).expect("positive"))
            .expect("restriction of Θ to the fixed space is a conjugation");
        let f = e1 * t.v.as_nalgebra();
        for j in 0..f.ncols() {
            basis.push(f.column(j).into_owned());
        }
    }
    let identity_block_size = basis.len();

    let mut omegas = Vec::new();
    let mut by_angle = upper.clone();
    by_angle.sort_by(|&x, &y| lams[x].arg().total_cmp(&lams[y].arg()));
    for &k in &by_angle {
        let v = q.as_nalgebra().column(k).into_owned();
        let tv = theta(&v);
        let omega = v.dotc(&(u.as_nalgebra() * tv.map(|z| z.conj())));
        basis.push(tv);
        basis.push(v);
        omegas.push(omega);
    }

    // λ = -1: Θ² = -1 on this space; peel off pairs (v, -Θv).
    let mut pool: Vec<nalgebra::DVector<C64>> = minus
        .iter()
        .map(|&k| q.as_nalgebra().column(k).into_owned())
        .collect();
    let mut used: Vec<nalgebra::DVector<C64>> = Vec::new();
    while used.len() < minus.len() && !pool.is_empty() {
        for p in pool.iter_mut() {
            for w in &used {
                let c = w.dotc(p);
                *p -= w * c;
            }
        }
        let (best, _) = pool
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .expect("pool non-empty");
        let v = pool.swap_remove(best);
        if v.norm() < 1e-6 {
            break;
        }
        let v = &v / c64(v.norm(), 0.0);
        let w = -theta(&v);
        basis.push(v.clone());
        basis.push(w.clone());
        used.push(v);
        used.push(w);
        omegas.push(c64(-1.0, 0.0));
    }

    let e = nalgebra::DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
    WignerForm {
        identity_block_size,
        omegas,
        w: ComplexMatrix::from_nalgebra(e.adjoint()),
    }
}

/// True iff `Θ` is unitarily equivalent to a direct sum of spin flips, i.e.
/// its Wigner form has no identity block and every `ω = -1`.
pub fn is_spin_flip_sum(a: &Antiunitary, tol: &Tolerances) -> bool {
    let form = wigner_canonical_form(a, tol);
    form.identity_block_size == 0
        && 2 * form.omegas.len() == a.dim()
        && form
            .omegas
            .iter()
            .all(|&w| (w + c64(1.0, 0.0)).norm() < tol.eq_tol.max(1e-8))
}

/// `W (Θ_f ⊕ ... ⊕ Θ_f) Wᵀ` for a Haar-random `W`; `d` must be even.
pub fn random_spin_flip_sum<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Antiunitary> {
    if d == 0 || !d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "a spin-flip sum needs positive even dimension, got {d}"
        )));
    }
    let flip = crate::linalg::pauli::i_y();
    let sum = (1..d / 2).fold(flip.clone(), |acc, _| acc.direct_sum(&flip));
    let w = random::haar_unitary(d, rng);
    Ok(Antiunitary::from_unitary_unchecked(&(&w * &sum) * &w.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::Conjugation;
    use crate::linalg::{cis, pauli, random};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn block(omega: C64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c64(0.0, 0.0), c64(1.0, 0.0)], vec![omega, c64(0.0, 0.0)]])
            .unwrap()
    }

    #[test]
    fn conjugation_gives_identity_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let theta = Conjugation::new(random::random_symmetric_unitary(5, &mut rng), &tol()).unwrap();
        let form = wigner_canonical_form(theta.as_antiunitary(), &tol());
        assert_eq!(form.identity_block_size, 5);
        assert!(form.omegas.is_empty());
        assert!(form.w.is_unitary(1e-10));
        assert!(form.reconstruction_error(theta.as_antiunitary()) < 1e-10);
    }

    #[test]
    fn spin_flip_is_its_own_form() {
        let f = Antiunitary::new(pauli::i_y(), &tol()).unwrap();
        let form = wigner_canonical_form(&f, &tol());
        assert_eq!(form.identity_block_size, 0);
        assert_eq!(form.omegas.len(), 1);
        assert!((form.omegas[0] + c64(1.0, 0.0)).norm() < 1e-12);
        assert!(form.reconstruction_error(&f) < 1e-12);
        assert!(is_spin_flip_sum(&f, &tol()));
        assert!(!is_spin_flip_sum(
            Conjugation::complex_conjugation(&[2]).unwrap().as_antiunitary(),
            &tol()
        ));
    }

    #[test]
    fn scrambled_block_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for &phi in &[0.4, 1.3, 2.9, -2.0] {
            let omega = cis(phi);
            let w = random::haar_unitary(2, &mut rng);
            let u = &(&w * &block(omega).scale(cis(0.77))) * &w.transpose();
            let a = Antiunitary::new(u, &tol()).unwrap();
            let form = wigner_canonical_form(&a, &tol());
            assert_eq!(form.omegas.len(), 1);
            let expected = if omega.im >= 0.0 { omega } else { omega.conj() };
            assert!((form.omegas[0] - expected).norm() < 1e-9);
            assert!(form.reconstruction_error(&a) < 1e-9);
        }
    }

    #[test]
    fn mixed_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let canon = ComplexMatrix::identity(1)
            .direct_sum(&block(cis(2.0)))
            .direct_sum(&block(c64(-1.0, 0.0)))
            .direct_sum(&block(cis(2.0)));
        let w = random::haar_unitary(7, &mut rng);
        let a = Antiunitary::new(&(&w * &canon) * &w.transpose(), &tol()).unwrap();
        let form = wigner_canonical_form(&a, &tol());
        assert_eq!(form.identity_block_size, 1);
        assert_eq!(form.omegas.len(), 3);
        assert!(form.reconstruction_error(&a) < 1e-9);
        assert!(!is_spin_flip_sum(&a, &tol()));
    }
}
