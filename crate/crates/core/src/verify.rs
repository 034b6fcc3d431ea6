//! Cross-module invariant suite behind the `verify` command.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjugation::named::{candidate, basis_2x2, collective_spin_flip, conjugate_swap, theta_alpha};
use crate::conjugation::{
    is_spin_flip_sum, random_spin_flip_sum, wigner_canonical_form, Antiunitary, Conjugation, Frame,
};
use crate::error::Result;
use crate::linalg::{random, takagi, Tolerances};
use crate::measurability::{prod_eigenbasis_search, sep_witness_check, SearchOptions, Verdict};
use crate::metrology::{
    anticommutator_defect, antiparallel_network, collective_generator, magnetometry_conjugation,
    magnetometry_model, network_conjugation, network_frame, qcrb_saturation_gap,
    quantum_fisher_pure, Axis, InitialState, Povm, PureStateModel,
};
use crate::reproduce::{figure2, figure2_closed_form, table1};
use crate::twoqubit::{
    average_concurrence, canonical_local_unitaries, ejm_frame, hadamard_eigenframe, lu_equivalent,
    magic_representation, magic_spectrum, min_average_concurrence, random_eigenframe, tetrahedron,
    theta_fixed_basis, verify_frame_conditions,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type CheckFn = fn(&mut ChaCha8Rng, &Tolerances) -> Result<(bool, String)>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("takagi_reconstruction", takagi_reconstruction),
    ("real_subspace_eigenframe", real_subspace_eigenframe),
    ("spin_flip_tensor_criterion", spin_flip_tensor_criterion),
    ("table1_spectra", table1_spectra),
    ("lu_canonical_form", lu_canonical_form),
    ("concurrence_bound", concurrence_bound),
    ("figure2_closed_form", figure2_matches),
    ("elegant_joint_measurement", elegant_joint_measurement),
    ("product_witnesses", product_witnesses),
    ("qcrb_inequality", qcrb_inequality),
    ("magnetometry_saturation", magnetometry_saturation),
    ("antiparallel_doubling", antiparallel_doubling),
];

/// Runs every check with a fresh RNG stream derived from `seed`.
pub fn run_invariant_suite(seed: u64, tol: &Tolerances) -> VerifyReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(k, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let start = Instant::now();
            let (passed, detail) = f(&mut rng, tol).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    VerifyReport { seed, checks }
}

fn takagi_reconstruction(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for d in 2..=6 {
        for _ in 0..5 {
            let a = random::random_symmetric(d, rng);
            let t = takagi(&a, tol)?;
            worst = worst
                .max(t.reconstruct().max_abs_diff(&a))
                .max(t.v.unitarity_defect());
        }
    }
    Ok((worst < 1e-9, format!("max defect {worst:.2e}")))
}

fn real_subspace_eigenframe(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    for d in 2..=6 {
        let theta = Conjugation::new(random::random_symmetric_unitary(d, rng), tol)?;
        let f = theta.real_subspace_basis(tol)?;
        let check = theta.is_eigenframe(&f, tol)?;
        let ones = check
            .eigenvalues
            .iter()
            .all(|z| z.is_some_and(|z| (z.re - 1.0).abs() < 1e-9));
        if !(check.is_eigenframe && ones) {
            return Ok((false, format!("dimension {d}")));
        }
    }
    Ok((true, "dimensions 2..=6".into()))
}

fn spin_flip_tensor_criterion(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let da = 2 * rng.random_range(1..=3);
        let db = 2 * rng.random_range(1..=3);
        let a = random_spin_flip_sum(da, rng)?;
        let b = random_spin_flip_sum(db, rng)?;
        if !(is_spin_flip_sum(&a, tol) && a.tensor(&b).is_conjugation(tol)) {
            return Ok((false, format!("spin-flip sums {da} x {db}")));
        }
        worst = worst.max(wigner_canonical_form(&a, tol).reconstruction_error(&a));
        let n = rng.random_range(2..=6);
        let c = Antiunitary::new(random::haar_unitary(n, rng), tol)?;
        if is_spin_flip_sum(&c, tol) || c.tensor(&b).is_conjugation(tol) {
            return Ok((false, format!("generic factor of dimension {n}")));
        }
    }
    Ok((worst < 1e-8, format!("max Wigner reconstruction error {worst:.2e}")))
}

fn table1_spectra(_: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let rows = table1(tol)?;
    let expect = [[1.0, 1.0, 1.0, 1.0], [1.0, -1.0, -1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];
    let tags = [false, false, true];
    for ((row, want), tag) in rows.iter().zip(expect).zip(tags) {
        let want = crate::twoqubit::MagicSpectrum::new(want.map(|x| crate::linalg::c64(x, 0.0)), tol)?;
        if !row.spectrum.multiset_eq(&want, 1e-9) || row.tag.is_prod_measurable() != tag {
            return Ok((false, row.name.into()));
        }
    }
    Ok((true, "3 rows".into()))
}

fn lu_canonical_form(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let u = random::random_symmetric_unitary(4, rng).with_dims(vec![2, 2])?;
        let theta = Conjugation::new(u, tol)?;
        let target = *magic_spectrum(&theta, tol)?.values();
        let (a, b) = canonical_local_unitaries(&theta, target, tol)?;
        let rep = magic_representation(&theta.transform(&a.kron(&b))?)?;
        let diag = crate::linalg::ComplexMatrix::from_diagonal(&target);
        worst = worst.max(rep.max_abs_diff(&diag));
        let w = random::haar_unitary(2, rng).kron(&random::haar_unitary(2, rng));
        if !lu_equivalent(&theta, &theta.transform(&w)?, tol)? {
            return Ok((false, "scrambled copy declared inequivalent".into()));
        }
    }
    Ok((worst < 1e-8, format!("max diagonalization defect {worst:.2e}")))
}

fn concurrence_bound(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let u = random::random_symmetric_unitary(4, rng).with_dims(vec![2, 2])?;
        let theta = Conjugation::new(u, tol)?;
        let bound = min_average_concurrence(&theta)?;
        let h = average_concurrence(&hadamard_eigenframe(&theta)?)?;
        worst = worst.max((h - bound).abs());
        for _ in 0..20 {
            let n = rng.random_range(4..=8);
            let c = average_concurrence(&random_eigenframe(&theta, n, rng)?)?;
            if c < bound - 1e-9 {
                return Ok((false, format!("frame below bound by {:.2e}", bound - c)));
            }
        }
    }
    Ok((worst < 1e-9, format!("Hadamard frame gap {worst:.2e}")))
}

fn figure2_matches(_: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let pts = figure2(16, tol)?;
    let worst = pts
        .iter()
        .map(|p| (p.min_avg_concurrence - figure2_closed_form(p.phi2, p.phi3)).abs())
        .fold(0.0, f64::max);
    Ok((worst < 1e-12, format!("{} points, max deviation {worst:.2e}", pts.len())))
}

fn elegant_joint_measurement(_: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let f = ejm_frame(0.0, &tetrahedron(), tol)?;
    let swap = conjugate_swap(2)?;
    let check = swap.is_eigenframe(&f, tol)?;
    let cond = verify_frame_conditions(&f)?;
    let mut worst = 0.0f64;
    for k in 0..8 {
        let a = k as f64 * 0.4;
        let got = min_average_concurrence(&theta_alpha(a))?;
        worst = worst.max((got - 2.0 * (1.0 + 3.0 * a.sin().powi(2)).sqrt()).abs());
    }
    Ok((
        check.is_eigenframe && cond.hold(1e-9) && worst < 1e-9,
        format!("moment defect {:.2e}, alpha-family defect {worst:.2e}", cond.moment_defect),
    ))
}

fn product_witnesses(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    for _ in 0..10 {
        let phases: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let theta = candidate(&basis_2x2(), &phases, &[2, 2], tol)?;
        let report = prod_eigenbasis_search(&theta, SearchOptions::default(), tol)?;
        let ok = report.verdict == Verdict::ProdMeasurable
            && match &report.witness {
                Some(w) => sep_witness_check(&theta, w, tol)?,
                None => false,
            };
        if !ok {
            return Ok((false, format!("candidate with phases {phases:?}")));
        }
    }
    let flip = prod_eigenbasis_search(&collective_spin_flip(), SearchOptions::default(), tol)?;
    Ok((flip.verdict == Verdict::NotProdMeasurable, "10 candidates and the collective spin flip".into()))
}

fn random_model(d: usize, params: usize, rng: &mut ChaCha8Rng) -> Result<PureStateModel> {
    let gens: Vec<_> = (0..params).map(|_| random::random_hermitian(d, rng)).collect();
    let psi0 = random::random_unit_vector(d, rng);
    PureStateModel::new(params, vec![d], move |x| {
        let h = gens.iter().zip(x).fold(
            crate::linalg::ComplexMatrix::zeros(d, d),
            |acc, (g, &t)| &acc + &g.scale(crate::linalg::c64(t, 0.0)),
        );
        crate::linalg::matrix_exp_i_hermitian(&h, 1.0)?.mul_vec(&psi0)
    })
}

fn qcrb_inequality(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let d = rng.random_range(2..=4);
        let model = random_model(d, 2, rng)?;
        let povm = Povm::from_frame(&Frame::from_columns(&random::haar_unitary(d, rng))?, tol)?;
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (f, _) = qcrb_saturation_gap(&povm, &model, &x, tol)?;
        worst = worst.min(f.gap_min_eigenvalue());
    }
    Ok((worst > -tol.fisher_tol, format!("smallest gap eigenvalue {worst:.2e}")))
}

fn magnetometry_saturation(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    // Phase estimation with the local symmetry σ_X·conj.
    let local = magnetometry_conjugation(1, 0.0)?;
    for n in 2..=4 {
        let model = magnetometry_model(1, n, &InitialState::Ghz(Axis::Z))?;
        let frame = network_frame(&local.real_subspace_basis(tol)?, n)?;
        let povm = Povm::from_frame(&frame, tol)?;
        for _ in 0..3 {
            let x = [rng.random_range(-1.5..1.5)];
            let (f, _) = qcrb_saturation_gap(&povm, &model, &x, tol)?;
            let target = 4.0 * (n * n) as f64;
            worst = worst
                .max((f.quantum[(0, 0)] - target).abs())
                .max((f.classical[(0, 0)] - target).abs());
        }
    }
    // Bilocal symmetry θ(α) for the vector field.
    for alpha in [0.0, 0.9] {
        let block = magnetometry_conjugation(3, alpha)?;
        for k in [Axis::X, Axis::Y, Axis::Z] {
            worst = worst.max(anticommutator_defect(&block, &collective_generator(k, 2)?)?);
        }
        let n = 4;
        let _ = network_conjugation(&block, n)?;
        let model = magnetometry_model(3, n, &InitialState::Superposed([1.0, 0.5, -0.7]))?;
        let frame = network_frame(&Frame::from_columns(&theta_fixed_basis(&block)?)?, n / 2)?;
        let povm = Povm::from_frame(&frame, tol)?;
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (f, _) = qcrb_saturation_gap(&povm, &model, &x, tol)?;
        worst = worst.max(f.max_gap());
    }
    Ok((worst < tol.fisher_tol, format!("max deviation {worst:.2e}")))
}

fn antiparallel_doubling(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(bool, String)> {
    let model = {
        let gens: Vec<_> = (0..2).map(|_| random::random_hermitian(4, rng)).collect();
        let psi0 = random::random_unit_vector(4, rng);
        PureStateModel::new(2, vec![2, 2], move |x| {
            let h = &gens[0].scale(crate::linalg::c64(x[0], 0.0)) + &gens[1].scale(crate::linalg::c64(x[1], 0.0));
            crate::linalg::matrix_exp_i_hermitian(&h, 1.0)?.mul_vec(&psi0)
        })?
    };
    let factors = [
        Conjugation::new(random::random_symmetric_unitary(2, rng), tol)?,
        Conjugation::new(random::random_symmetric_unitary(2, rng), tol)?,
    ];
    let ap = antiparallel_network(&model, &factors)?;
    let povm = Povm::from_frame(&ap.cross_node_eigenframe(tol)?, tol)?;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (f, _) = qcrb_saturation_gap(&povm, ap.model(), &x, tol)?;
        let single = quantum_fisher_pure(&model, &x)?;
        worst = worst.max(f.max_gap()).max((&f.quantum - single * 2.0).amax());
    }
    Ok((worst < tol.fisher_tol, format!("max deviation {worst:.2e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let report = run_invariant_suite(7, &Tolerances::default());
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(report.checks.len(), CHECKS.len());
    }
}
