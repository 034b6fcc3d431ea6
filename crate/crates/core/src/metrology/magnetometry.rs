use serde::{Deserialize, Serialize};

use super::PureStateModel;
use crate::conjugation::named::theta_alpha;
use crate::conjugation::{Conjugation, Frame};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, exp_i_hermitian_derivative, kron_all, matrix_exp_i_hermitian, pauli, ComplexMatrix,
    ComplexVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(alias = "x")]
    X,
    #[serde(alias = "y")]
    Y,
    #[serde(alias = "z")]
    Z,
}

impl Axis {
    fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => pauli::x(),
            Axis::Y => pauli::y(),
            Axis::Z => pauli::z(),
        }
    }

    /// `(|K+>, |K->)`.
    fn kets(self) -> (ComplexVector, ComplexVector) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = |a, b| ComplexVector::new(vec![a, b]).expect("length 2");
        match self {
            Axis::X => (v(c64(s, 0.0), c64(s, 0.0)), v(c64(s, 0.0), c64(-s, 0.0))),
            Axis::Y => (v(c64(s, 0.0), c64(0.0, s)), v(c64(0.0, s), c64(s, 0.0))),
            Axis::Z => (ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)),
        }
    }

    /// Field axes, in parameter order.
    pub fn for_field(field_dim: usize) -> Result<&'static [Axis]> {
        match field_dim {
            1 => Ok(&[Axis::Z]),
            2 => Ok(&[Axis::X, Axis::Z]),
            3 => Ok(&[Axis::X, Axis::Y, Axis::Z]),
            d => Err(Error::InvalidParameter(format!("field dimension must be 1, 2 or 3, got {d}"))),
        }
    }
}

/// Initial state of a magnetometry network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    Ghz(Axis),
    /// `Σ_K a_K |GHZ_K>` over `K = X, Y, Z`, normalized.
    Superposed([f64; 3]),
}

impl InitialState {
    pub fn vector(&self, n: usize) -> Result<ComplexVector> {
        match self {
            InitialState::Ghz(k) => ghz(*k, n),
            InitialState::Superposed(a) => {
                if a.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite(format!("superposition weights {a:?}")));
                }
                let mut sum = ComplexVector::zeros(1 << n);
                for (k, &w) in [Axis::X, Axis::Y, Axis::Z].iter().zip(a) {
                    sum = sum.add(&ghz(*k, n)?.scale(c64(w, 0.0)));
                }
                if sum.norm() < 1e-12 {
                    return Err(Error::ZeroVector);
                }
                sum.normalized()?.with_dims(vec![2; n])
            }
        }
    }
}

fn require_qubits(n: usize) -> Result<()> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidParameter(format!("qubit count must be in 1..=16, got {n}")));
    }
    Ok(())
}

/// `(|K+>^{⊗N} + |K->^{⊗N})/√2`.
pub fn ghz(axis: Axis, n: usize) -> Result<ComplexVector> {
    require_qubits(n)?;
    let (p, m) = axis.kets();
    let power = |v: &ComplexVector| (1..n).fold(v.clone(), |acc, _| acc.kron(v));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    power(&p).add(&power(&m)).scale(c64(s, 0.0)).with_dims(vec![2; n])
}

/// `H_K = Σ_p σ_K` acting on site `p`.
pub fn collective_generator(axis: Axis, n: usize) -> Result<ComplexMatrix> {
    require_qubits(n)?;
    let dim = 1 << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for p in 0..n {
        let factors: Vec<ComplexMatrix> = (0..n)
            .map(|q| if q == p { axis.pauli() } else { pauli::identity() })
            .collect();
        h = &h + &kron_all(&factors).expect("n >= 1");
    }
    h.with_dims(vec![2; n])
}

/// Pure-state model `exp(i Σ_K φ_K H_K)|ψ_ini>` with parameters ordered as
/// in [`Axis::for_field`]; derivatives are analytic.
pub fn magnetometry_model(
    field_dim: usize,
    n: usize,
    initial: &InitialState,
) -> Result<PureStateModel> {
    let axes = Axis::for_field(field_dim)?;
    let psi0 = initial.vector(n)?;
    let gens = axes
        .iter()
        .map(|&k| collective_generator(k, n))
        .collect::<Result<Vec<_>>>()?;
    let total = move |gens: &[ComplexMatrix], x: &[f64]| {
        gens.iter()
            .zip(x)
            .fold(ComplexMatrix::zeros(1 << n, 1 << n), |acc, (g, &phi)| &acc + &g.scale(c64(phi, 0.0)))
    };
    let (g1, p1) = (gens.clone(), psi0.clone());
    let model = PureStateModel::new(field_dim, vec![2; n], move |x| {
        matrix_exp_i_hermitian(&total(&g1, x), 1.0)?.mul_vec(&p1)
    })?;
    Ok(model.with_derivative(move |x| {
        let a = total(&gens, x);
        gens.iter()
            .map(|g| exp_i_hermitian_derivative(&a, g)?.mul_vec(&psi0))
            .collect()
    }))
}

/// Symmetry block solving the locality ansatz: `σ_X` on one qubit for a
/// one-dimensional field, `θ(α)` on a qubit pair otherwise. The global phase
/// is fixed to 1.
pub fn magnetometry_conjugation(field_dim: usize, alpha: f64) -> Result<Conjugation> {
    Axis::for_field(field_dim)?;
    if field_dim == 1 {
        Ok(Conjugation::from_symmetric_unitary_unchecked(
            pauli::x().with_dims(vec![2]).expect("2"),
        ))
    } else if alpha.is_finite() {
        Ok(theta_alpha(alpha))
    } else {
        Err(Error::NonFinite(format!("alpha = {alpha}")))
    }
}

/// `block^{⊗ N/k}` on `N` qubits, where the block acts on `k` qubits.
pub fn network_conjugation(block: &Conjugation, n: usize) -> Result<Conjugation> {
    require_qubits(n)?;
    let k = block.dims().len();
    if block.dims().iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch(format!(
            "network blocks must act on qubits, got dims {:?}",
            block.dims()
        )));
    }
    if !n.is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!(
            "{n} qubits cannot be split into {k}-qubit blocks"
        )));
    }
    let mut out = block.clone();
    for _ in 1..n / k {
        out = out.tensor(block);
    }
    Ok(out)
}

/// `frame^{⊗copies}`.
pub fn network_frame(frame: &Frame, copies: usize) -> Result<Frame> {
    if copies == 0 {
        return Err(Error::InvalidParameter("need at least one copy".into()));
    }
    Ok((1..copies).fold(frame.clone(), |acc, _| acc.tensor(frame)))
}

#[cfg(test)]
mod tests {
    use super::super::{
        anticommutator_defect, conjugate_operator, is_imaginarity_free, qcrb_saturation_gap, Povm,
    };
    use super::*;
    use crate::conjugation::named::collective_spin_flip;
    use crate::linalg::Tolerances;
    use crate::twoqubit::{min_average_concurrence, theta_fixed_basis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn ghz_states() {
        let g = ghz(Axis::Z, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(g.max_abs_diff(&ComplexVector::from_real(&[s, 0.0, 0.0, s]).unwrap()) < 1e-15);
        assert!(ghz(Axis::X, 2).unwrap().max_abs_diff(&g) < 1e-15);
        // With Θ_f = iσ_Y·conj every even GHZ state is fixed; with σ_Y·conj
        // it picks up (-1)^{N/2}.
        let flip = collective_spin_flip();
        let bare = flip.transform(&ComplexMatrix::identity(4).scale(c64(0.0, 1.0))).unwrap();
        for n in [2, 4] {
            let f = network_conjugation(&flip, n).unwrap();
            let g = network_conjugation(&bare, n).unwrap();
            let sign = if n % 4 == 0 { 1.0 } else { -1.0 };
            for k in [Axis::X, Axis::Y, Axis::Z] {
                let v = ghz(k, n).unwrap();
                assert!(f.apply(&v).unwrap().max_abs_diff(&v) < 1e-14);
                assert!(g.apply(&v).unwrap().max_abs_diff(&v.scale(c64(sign, 0.0))) < 1e-14);
            }
        }
    }

    #[test]
    fn zero_superposition_is_rejected() {
        let bad = InitialState::Superposed([1.0, 0.0, -1.0]);
        assert_eq!(bad.vector(2), Err(Error::ZeroVector));
        assert!(bad.vector(4).is_ok());
    }

    #[test]
    fn model_at_origin_is_initial_state() {
        let m = magnetometry_model(1, 2, &InitialState::Ghz(Axis::Z)).unwrap();
        assert!(m.state(&[0.0]).unwrap().max_abs_diff(&ghz(Axis::Z, 2).unwrap()) < 1e-14);
        let m = magnetometry_model(3, 2, &InitialState::Superposed([1.0, 0.0, 0.0])).unwrap();
        assert!((m.state(&[0.1, 0.2, 0.3]).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_and_numeric_derivatives_agree() {
        let m = magnetometry_model(3, 3, &InitialState::Superposed([0.3, 1.0, -0.5])).unwrap();
        let x = [0.2, -0.4, 0.7];
        let a = m.derivatives(&x).unwrap();
        let n = m.finite_difference_derivatives(&x).unwrap();
        for (a, n) in a.iter().zip(&n) {
            assert!(a.max_abs_diff(n) < 1e-8);
        }
    }

    #[test]
    fn anticommutation_certificates() {
        let t1 = magnetometry_conjugation(1, 0.0).unwrap();
        assert!(anticommutator_defect(&t1, &pauli::z()).unwrap() < 1e-15);
        assert!(anticommutator_defect(&t1, &pauli::x()).unwrap() > 1.0);
        for alpha in [0.0, 0.4, std::f64::consts::FRAC_PI_2, 2.5] {
            let t = magnetometry_conjugation(3, alpha).unwrap();
            for k in [Axis::X, Axis::Y, Axis::Z] {
                let h = collective_generator(k, 2).unwrap();
                assert!(anticommutator_defect(&t, &h).unwrap() < 1e-14);
            }
        }
        let a = magnetometry_conjugation(2, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(a.matrix().max_abs_diff(collective_spin_flip().matrix()) < 1e-15);
        assert!((min_average_concurrence(&a).unwrap() - 4.0).abs() < 1e-12);
        assert!(magnetometry_conjugation(1, 0.0).unwrap().matrix().max_abs_diff(&pauli::x()) < 1e-15);
        assert!(matches!(magnetometry_conjugation(4, 0.0), Err(Error::InvalidParameter(_))));
        let a = magnetometry_conjugation(2, 0.0).unwrap();
        assert!((min_average_concurrence(&a).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 4] {
            let theta = network_conjugation(&magnetometry_conjugation(3, 0.7).unwrap(), n).unwrap();
            let h = [Axis::X, Axis::Y, Axis::Z].iter().fold(
                ComplexMatrix::zeros(1 << n, 1 << n),
                |acc, &k| &acc + &collective_generator(k, n).unwrap().scale(c64(rng.random_range(-1.5..1.5), 0.0)),
            );
            let u = matrix_exp_i_hermitian(&h, 1.0).unwrap();
            assert!(conjugate_operator(&theta, &u).unwrap().max_abs_diff(&u) < 1e-12);
        }
    }

    #[test]
    fn odd_networks_cannot_be_paired() {
        let t = magnetometry_conjugation(2, 0.0).unwrap();
        assert!(matches!(network_conjugation(&t, 3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn bilocal_eigenframes_saturate() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (n, alpha) in [(2, 0.0), (2, 1.1), (4, 0.3)] {
            let block = magnetometry_conjugation(3, alpha).unwrap();
            let theta = network_conjugation(&block, n).unwrap();
            let m = magnetometry_model(3, n, &InitialState::Superposed([1.0, 0.6, -0.8])).unwrap();
            let pts: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            assert!(is_imaginarity_free(&m, &theta, &pts, &tol()).unwrap());
            let basis = Frame::from_columns(&theta_fixed_basis(&block).unwrap()).unwrap();
            let povm = Povm::from_frame(&network_frame(&basis, n / 2).unwrap(), &tol()).unwrap();
            for x in &pts {
                let (f, saturated) = qcrb_saturation_gap(&povm, &m, x, &tol()).unwrap();
                assert!(saturated, "gap {} at n = {n}, alpha = {alpha}", f.max_gap());
            }
        }
    }
}
