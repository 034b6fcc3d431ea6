use conjlab::conjugation::{Conjugation, Frame};
use conjlab::linalg::{matrix_exp_i_hermitian, random};
use conjlab::measurability::{prod_eigenbasis_search, sep_witness_check, SearchOptions, Verdict};
use conjlab::metrology::{
    collective_generator, conjugate_operator, fidelity_qfi, is_imaginarity_free,
    magnetometry_conjugation, network_conjugation, qcrb_saturation_gap, quantum_fisher_pure, Axis,
    Povm, PureStateModel,
};
use conjlab::reproduce::{figure2, figure2_csv};
use conjlab::{c64, ComplexMatrix, ComplexVector, Tolerances};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn hamiltonian_model(d: usize, params: usize, rng: &mut ChaCha8Rng) -> PureStateModel {
    let gens: Vec<ComplexMatrix> = (0..params).map(|_| random::random_hermitian(d, rng)).collect();
    let psi0 = random::random_unit_vector(d, rng);
    PureStateModel::new(params, vec![d], move |x| {
        let h = gens
            .iter()
            .zip(x)
            .fold(ComplexMatrix::zeros(d, d), |acc, (g, &t)| &acc + &g.scale(c64(t, 0.0)));
        matrix_exp_i_hermitian(&h, 1.0)?.mul_vec(&psi0)
    })
    .unwrap()
}

/// `E · exp(Σ x_k A_k) r` with real antisymmetric `A_k`, so every state has
/// real coordinates in the real-subspace basis `E` of `θ`.
fn symmetric_model(theta: &Conjugation, params: usize, rng: &mut ChaCha8Rng) -> PureStateModel {
    let d = theta.dim();
    let e = theta.real_subspace_basis(&tol()).unwrap().to_matrix();
    let gens: Vec<DMatrix<f64>> = (0..params)
        .map(|_| {
            let g = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
            &g - g.transpose()
        })
        .collect();
    let r0 = DMatrix::from_fn(d, 1, |_, _| rng.random_range(-1.0..1.0)).normalize();
    PureStateModel::new(params, vec![d], move |x| {
        let a = gens.iter().zip(x).fold(DMatrix::zeros(d, d), |acc, (g, &t)| acc + g * t);
        let r = a.exp() * &r0;
        e.mul_vec(&ComplexVector::from_real(r.as_slice())?)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quantum_bound_dominates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.random_range(2..=5);
        let model = hamiltonian_model(d, 2, &mut rng);
        let povm = Povm::from_frame(&Frame::from_columns(&random::haar_unitary(d, &mut rng)).unwrap(), &tol()).unwrap();
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (f, _) = qcrb_saturation_gap(&povm, &model, &x, &tol()).unwrap();
        prop_assert!(f.gap_min_eigenvalue() > -1e-6);
    }

    #[test]
    fn eigenframes_of_a_symmetry_saturate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.random_range(2..=5);
        let theta = Conjugation::new(random::random_symmetric_unitary(d, &mut rng), &tol()).unwrap();
        let model = symmetric_model(&theta, 2, &mut rng);
        let x = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        prop_assert!(is_imaginarity_free(&model, &theta, std::slice::from_ref(&x), &tol()).unwrap());
        // Any real rotation of the real-subspace basis is again an eigenframe.
        let e = theta.real_subspace_basis(&tol()).unwrap().to_matrix();
        let o = random::random_orthogonal(d, &mut rng);
        let oc = ComplexMatrix::from_fn(d, d, |i, j| c64(o[(i, j)], 0.0));
        let frame = Frame::from_columns(&(&e * &oc)).unwrap();
        prop_assert!(theta.is_eigenframe(&frame, &tol()).unwrap().is_eigenframe);
        let povm = Povm::from_frame(&frame, &tol()).unwrap();
        let (f, saturated) = qcrb_saturation_gap(&povm, &model, &x, &tol()).unwrap();
        prop_assert!(saturated, "gap {}", f.max_gap());
    }

    #[test]
    fn fidelity_oracle_agrees(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = hamiltonian_model(3, 2, &mut rng);
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let q = quantum_fisher_pure(&model, &x).unwrap();
        for i in 0..2 {
            let f = fidelity_qfi(&model, &x, i, 1e-4).unwrap();
            prop_assert!((f - q[(i, i)]).abs() < 1e-6 * q[(i, i)].max(1.0));
        }
    }

    #[test]
    fn network_evolution_is_invariant(seed in any::<u64>(), n in prop::sample::select(vec![2usize, 4])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = rng.random_range(-3.0..3.0);
        let theta = network_conjugation(&magnetometry_conjugation(3, alpha).unwrap(), n).unwrap();
        let h = [Axis::X, Axis::Y, Axis::Z].iter().fold(ComplexMatrix::zeros(1 << n, 1 << n), |acc, &k| {
            &acc + &collective_generator(k, n).unwrap().scale(c64(rng.random_range(-1.5..1.5), 0.0))
        });
        let u = matrix_exp_i_hermitian(&h, 1.0).unwrap();
        prop_assert!(conjugate_operator(&theta, &u).unwrap().max_abs_diff(&u) < 1e-10);
    }

    #[test]
    fn search_witnesses_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = [rng.random_range(2..=3), rng.random_range(2..=3)];
        let factors: Vec<_> = dims
            .iter()
            .map(|&d| Conjugation::new(random::random_symmetric_unitary(d, &mut rng), &tol()).unwrap())
            .collect();
        let theta = factors[0]
            .with_dims(vec![dims[0]]).unwrap()
            .tensor(&factors[1].with_dims(vec![dims[1]]).unwrap());
        let w = random::haar_unitary(dims[0], &mut rng).kron(&random::haar_unitary(dims[1], &mut rng));
        let theta = theta.transform(&w).unwrap();
        let report = prod_eigenbasis_search(&theta, SearchOptions { budget: 16, seed }, &tol()).unwrap();
        prop_assert_eq!(report.verdict, Verdict::ProdMeasurable);
        prop_assert!(sep_witness_check(&theta, report.witness.as_ref().unwrap(), &tol()).unwrap());
    }
}

#[test]
fn figure2_output_is_deterministic() {
    let a = figure2_csv(&figure2(8, &tol()).unwrap());
    let b = figure2_csv(&figure2(8, &tol()).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 8 * 9 / 2);
}
