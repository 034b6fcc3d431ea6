use super::PureStateModel;
use crate::conjugation::{Conjugation, Frame};
use crate::error::{Error, Result};
use crate::linalg::{c64, cis, swap_matrix, ComplexVector, Tolerances};

/// Doubled model `|ψ_x> ⊗ θ|ψ_x>` together with its symmetry.
#[derive(Clone, Debug)]
pub struct AntiparallelModel {
    model: PureStateModel,
    theta: Conjugation,
    theta_s: Conjugation,
    factors: Option<Vec<Conjugation>>,
}

/// `S(θ⊗θ)` on `H ⊗ H`, with `S` the swap of the two copies.
fn swapped_square(theta: &Conjugation) -> Result<Conjugation> {
    let d = theta.dim();
    let u = &swap_matrix(d) * &theta.matrix().kron(theta.matrix());
    let mut dims = theta.dims().to_vec();
    dims.extend_from_slice(theta.dims());
    Ok(Conjugation::from_symmetric_unitary_unchecked(u.with_dims(dims)?))
}

/// Builds the doubled model; `θ` must act on the model's Hilbert space.
pub fn antiparallel_model(model: &PureStateModel, theta: &Conjugation) -> Result<AntiparallelModel> {
    if theta.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "conjugation on dimension {}, model on {}",
            theta.dim(),
            model.dim()
        )));
    }
    let theta = theta.with_dims(model.dims().to_vec())?;
    let mut dims = model.dims().to_vec();
    dims.extend_from_slice(model.dims());

    let (base, t) = (model.clone(), theta.clone());
    let doubled = PureStateModel::new(model.n_params(), dims.clone(), move |x| {
        let psi = base.state(x)?;
        Ok(psi.kron(&t.apply(&psi)?))
    })?;
    let (base, t) = (model.clone(), theta.clone());
    let doubled = doubled.with_derivative(move |x| {
        let psi = base.state(x)?;
        let tpsi = t.apply(&psi)?;
        base.derivatives(x)?
            .iter()
            .map(|d| Ok(d.kron(&tpsi).add(&psi.kron(&t.apply(d)?))))
            .collect()
    });
    Ok(AntiparallelModel {
        model: doubled,
        theta_s: swapped_square(&theta)?,
        theta,
        factors: None,
    })
}

/// Doubled model of a network symmetric under the product `⊗_p θ_p`; node
/// `p` of the model must have the dimension of `θ_p`.
pub fn antiparallel_network(
    model: &PureStateModel,
    factors: &[Conjugation],
) -> Result<AntiparallelModel> {
    let node_dims: Vec<usize> = factors.iter().map(Conjugation::dim).collect();
    if node_dims != model.dims() {
        return Err(Error::DimensionMismatch(format!(
            "factors act on {node_dims:?}, model nodes are {:?}",
            model.dims()
        )));
    }
    let theta = factors[1..]
        .iter()
        .fold(factors[0].with_dims(vec![node_dims[0]])?, |acc, f| {
            acc.tensor(&f.with_dims(vec![f.dim()]).expect("own dimension"))
        });
    let mut out = antiparallel_model(model, &theta)?;
    out.factors = Some(factors.to_vec());
    Ok(out)
}

impl AntiparallelModel {
    pub fn model(&self) -> &PureStateModel {
        &self.model
    }

    pub fn theta(&self) -> &Conjugation {
        &self.theta
    }

    /// Symmetry `θ_S = S(θ⊗θ)` of the doubled model.
    pub fn theta_s(&self) -> &Conjugation {
        &self.theta_s
    }

    /// Per-node conjugations when built by [`antiparallel_network`].
    pub fn factors(&self) -> Option<&[Conjugation]> {
        self.factors.as_deref()
    }

    /// Per-node blocks `S_p(θ_p⊗θ_p)` on `H_p ⊗ H_p'`.
    pub fn node_symmetries(&self) -> Result<Vec<Conjugation>> {
        let factors = self.factors.as_ref().ok_or_else(|| {
            Error::InvalidParameter("the conjugation was not given as a product".into())
        })?;
        factors.iter().map(swapped_square).collect()
    }

    /// Product eigenframe of `θ_S` across doubled nodes `(p, p')`, from the
    /// real-subspace basis of each node symmetry.
    pub fn cross_node_eigenframe(&self, tol: &Tolerances) -> Result<Frame> {
        let frames = self
            .node_symmetries()?
            .iter()
            .map(|s| s.real_subspace_basis(tol))
            .collect::<Result<Vec<_>>>()?;
        self.assemble_cross_node_frame(&frames)
    }

    /// Tensors per-node frames on `H_p ⊗ H_p'` and reorders the factors to
    /// the model's layout `H_1 ⊗ … ⊗ H_N ⊗ H_1' ⊗ … ⊗ H_N'`.
    pub fn assemble_cross_node_frame(&self, node_frames: &[Frame]) -> Result<Frame> {
        let nodes = self.theta.dims();
        if node_frames.len() != nodes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} node frames for {} nodes",
                node_frames.len(),
                nodes.len()
            )));
        }
        let mut frames = Vec::with_capacity(node_frames.len());
        for (f, &d) in node_frames.iter().zip(nodes) {
            if f.dim() != d * d {
                return Err(Error::DimensionMismatch(format!(
                    "node frame on dimension {}, expected {}",
                    f.dim(),
                    d * d
                )));
            }
            frames.push(Frame::with_dims(f.vectors().to_vec(), vec![d, d])?);
        }
        let paired = frames[1..].iter().fold(frames[0].clone(), |acc, f| acc.tensor(f));
        let n = nodes.len();
        let perm: Vec<usize> = (0..2 * n)
            .map(|k| if k < n { 2 * k } else { 2 * (k - n) + 1 })
            .collect();
        paired.permute_subsystems(&perm)
    }
}

/// Qubit model `|n(ϑ, φ)>` of a spin pointing along polar angle `ϑ` and
/// azimuth `φ`.
pub fn spin_direction_model() -> Result<PureStateModel> {
    PureStateModel::new(2, vec![2], |x| {
        let (t, p) = (x[0], x[1]);
        ComplexVector::new(vec![c64((0.5 * t).cos(), 0.0), cis(p) * (0.5 * t).sin()])
    })
}

#[cfg(test)]
mod tests {
    use super::super::{
        is_imaginarity_free, qcrb_saturation_gap, quantum_fisher_pure, Povm,
    };
    use super::*;
    use crate::linalg::{matrix_exp_i_hermitian, random, ComplexMatrix};
    use crate::schmidt::is_product_vector;
    use crate::twoqubit::{ejm_frame, tetrahedron};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn random_points(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Vec<Vec<f64>> {
        (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(0.2..2.9)).collect())
            .collect()
    }

    #[test]
    fn antiparallel_spins_are_swap_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = spin_direction_model().unwrap();
        let ap = antiparallel_model(&base, &Conjugation::complex_conjugation(&[2]).unwrap()).unwrap();
        let pts = random_points(&mut rng, 20, 2);
        assert!(is_imaginarity_free(ap.model(), ap.theta_s(), &pts, &tol()).unwrap());
        let ejm = ejm_frame(0.0, &tetrahedron(), &tol()).unwrap();
        let povm = Povm::from_frame(&ejm, &tol()).unwrap();
        for x in &pts {
            let (f, saturated) = qcrb_saturation_gap(&povm, ap.model(), x, &tol()).unwrap();
            assert!(saturated, "gap {}", f.max_gap());
            let single = quantum_fisher_pure(&base, x).unwrap();
            assert!((&f.quantum - single * 2.0).amax() < 1e-6);
        }
    }

    #[test]
    fn product_network_has_cross_node_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for dims in [[2usize, 2], [2, 3]] {
            let d: usize = dims.iter().product();
            let gens: Vec<ComplexMatrix> = (0..3).map(|_| random::random_hermitian(d, &mut rng)).collect();
            let psi0 = random::random_unit_vector(d, &mut rng);
            let base = PureStateModel::new(3, dims.to_vec(), move |x| {
                let h = gens.iter().zip(x).fold(ComplexMatrix::zeros(d, d), |acc, (g, &t)| {
                    &acc + &g.scale(c64(t, 0.0))
                });
                matrix_exp_i_hermitian(&h, 1.0)?.mul_vec(&psi0)
            })
            .unwrap();
            let factors: Vec<Conjugation> = dims
                .iter()
                .map(|&k| {
                    Conjugation::new(random::random_symmetric_unitary(k, &mut rng), &tol()).unwrap()
                })
                .collect();
            let ap = antiparallel_network(&base, &factors).unwrap();
            let frame = ap.cross_node_eigenframe(&tol()).unwrap();
            assert!(ap.theta_s().is_eigenframe(&frame, &tol()).unwrap().is_eigenframe);
            for v in frame.vectors() {
                let v = crate::linalg::permute_subsystems_vector(v, &[0, 2, 1, 3])
                    .unwrap()
                    .with_dims(vec![dims[0] * dims[0], dims[1] * dims[1]])
                    .unwrap();
                assert!(is_product_vector(&v, &tol()).unwrap());
            }
            let povm = Povm::from_frame(&frame, &tol()).unwrap();
            for x in random_points(&mut rng, 10, 3) {
                let (f, saturated) = qcrb_saturation_gap(&povm, ap.model(), &x, &tol()).unwrap();
                assert!(saturated, "gap {}", f.max_gap());
                let single = quantum_fisher_pure(&base, &x).unwrap();
                assert!((&f.quantum - single * 2.0).amax() < 1e-6);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let base = spin_direction_model().unwrap();
        let t = Conjugation::complex_conjugation(&[2, 2]).unwrap();
        assert!(matches!(antiparallel_model(&base, &t), Err(Error::DimensionMismatch(_))));
        let f = [Conjugation::complex_conjugation(&[3]).unwrap()];
        assert!(matches!(antiparallel_network(&base, &f), Err(Error::DimensionMismatch(_))));
    }
}
