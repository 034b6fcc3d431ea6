//! Named conjugations and antiunitaries, constructible from Rust or from a
//! tagged JSON spec such as `{"kind": "conjugate_swap", "d": 2}`.

use serde::{Deserialize, Serialize};

use super::{Antiunitary, Conjugation};
use crate::error::{Error, Result};
use crate::io::{MatrixJson, VectorJson};
use crate::linalg::{c64, cis, kron_all, pauli, swap_matrix, ComplexMatrix, ComplexVector, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NamedSpec {
    /// `S·conj` on `C^d ⊗ C^d`.
    ConjugateSwap { d: usize },
    /// `Σ_j e^{iφ_j} |ψ_j><ψ_j*| ∘ conj` over an orthonormal product basis.
    Candidate {
        basis: Vec<VectorJson>,
        phases: Vec<f64>,
        #[serde(default)]
        dims: Option<Vec<usize>>,
    },
    /// `θ_1 ⊗ ... ⊗ θ_N` from symmetric unitary factors.
    Product { factors: Vec<MatrixJson> },
    /// Controlled-Z followed by complex conjugation.
    Cz,
    /// `Θ_f ⊗ Θ_f`.
    CollectiveSpinFlip,
    /// Block-diagonal `U_1 ⊕ ... ⊕ U_d` with symmetric unitary blocks.
    Oneway { blocks: Vec<MatrixJson> },
    /// Single-qubit spin flip `iσ_Y·conj` (not a conjugation).
    SpinFlip,
    /// Plain complex conjugation.
    ComplexConjugation { dims: Vec<usize> },
    /// The two-qubit family `θ(α)` of the field-estimation models.
    ThetaAlpha { alpha: f64 },
    /// Arbitrary matrix representation.
    Matrix(MatrixJson),
}

/// Output of [`build_named`].
#[derive(Clone, Debug, PartialEq)]
pub enum Named {
    Conjugation(Conjugation),
    Antiunitary(Antiunitary),
}

impl Named {
    pub fn as_antiunitary(&self) -> &Antiunitary {
        match self {
            Named::Conjugation(c) => c.as_antiunitary(),
            Named::Antiunitary(a) => a,
        }
    }

    pub fn into_conjugation(self, tol: &Tolerances) -> Result<Conjugation> {
        match self {
            Named::Conjugation(c) => Ok(c),
            Named::Antiunitary(a) => a.into_conjugation(tol),
        }
    }
}

pub fn build_named(spec: &NamedSpec, tol: &Tolerances) -> Result<Named> {
    Ok(match spec {
        NamedSpec::ConjugateSwap { d } => Named::Conjugation(conjugate_swap(*d)?),
        NamedSpec::Candidate { basis, phases, dims } => {
            let vectors = basis
                .iter()
                .enumerate()
                .map(|(j, v)| v.to_vector(&format!("basis[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            let dims = dims
                .clone()
                .or_else(|| vectors.iter().find_map(|v| v.dims().map(<[usize]>::to_vec)))
                .ok_or(Error::MissingDims)?;
            Named::Conjugation(candidate(&vectors, phases, &dims, tol)?)
        }
        NamedSpec::Product { factors } => {
            let ms = factors
                .iter()
                .enumerate()
                .map(|(j, f)| f.to_matrix(&format!("factors[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            Named::Conjugation(product(&ms, tol)?)
        }
        NamedSpec::Cz => Named::Conjugation(cz()),
        NamedSpec::CollectiveSpinFlip => Named::Conjugation(collective_spin_flip()),
        NamedSpec::Oneway { blocks } => {
            let ms = blocks
                .iter()
                .enumerate()
                .map(|(j, b)| b.to_matrix(&format!("blocks[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            Named::Conjugation(oneway(&ms, tol)?)
        }
        NamedSpec::SpinFlip => Named::Antiunitary(spin_flip()),
        NamedSpec::ComplexConjugation { dims } => {
            Named::Conjugation(Conjugation::complex_conjugation(dims)?)
        }
        NamedSpec::ThetaAlpha { alpha } => Named::Conjugation(theta_alpha(*alpha)),
        NamedSpec::Matrix(m) => {
            let a = Antiunitary::new(m.to_matrix("matrix")?, tol)?;
            if a.is_conjugation(tol) {
                Named::Conjugation(a.into_conjugation(tol)?)
            } else {
                Named::Antiunitary(a)
            }
        }
    })
}

/// `θ_S = S·conj` on `C^d ⊗ C^d`.
pub fn conjugate_swap(d: usize) -> Result<Conjugation> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    Ok(Conjugation::from_symmetric_unitary_unchecked(swap_matrix(d)))
}

/// `CZ·conj` on two qubits.
pub fn cz() -> Conjugation {
    let u = ComplexMatrix::from_diagonal(&[
        c64(1.0, 0.0),
        c64(1.0, 0.0),
        c64(1.0, 0.0),
        c64(-1.0, 0.0),
    ])
    .with_dims(vec![2, 2])
    .expect("4 = 2*2");
    Conjugation::from_symmetric_unitary_unchecked(u)
}

/// Single-qubit spin flip `Θ_f = iσ_Y·conj`.
pub fn spin_flip() -> Antiunitary {
    Antiunitary::from_unitary_unchecked(pauli::i_y())
}

/// `Θ_f ⊗ Θ_f`.
pub fn collective_spin_flip() -> Conjugation {
    Conjugation::from_symmetric_unitary_unchecked(pauli::i_y().kron(&pauli::i_y()))
}

/// `θ(α)` with matrix
/// `[[0,0,0,1],[0,-e^{iα}cos α, i e^{iα} sin α,0],[0, i e^{iα} sin α, -e^{iα}cos α,0],[1,0,0,0]]`.
pub fn theta_alpha(alpha: f64) -> Conjugation {
    let e = cis(alpha);
    let a = -e * alpha.cos();
    let b = c64(0.0, 1.0) * e * alpha.sin();
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let u = ComplexMatrix::from_rows(&[
        vec![z, z, z, one],
        vec![z, a, b, z],
        vec![z, b, a, z],
        vec![one, z, z, z],
    ])
    .expect("4x4")
    .with_dims(vec![2, 2])
    .expect("4 = 2*2");
    Conjugation::from_symmetric_unitary_unchecked(u)
}

/// Tensor product of local conjugations given by symmetric unitaries.
pub fn product(factors: &[ComplexMatrix], tol: &Tolerances) -> Result<Conjugation> {
    let mut locals = Vec::with_capacity(factors.len());
    for f in factors {
        let c = Conjugation::new(f.clone(), tol)?;
        let mut m = c.matrix().clone();
        m.set_dims_unchecked(None);
        locals.push(m);
    }
    let u = kron_all(&locals).ok_or_else(|| Error::InvalidParameter("no factors".into()))?;
    Ok(Conjugation::from_symmetric_unitary_unchecked(u))
}

/// Block-diagonal bipartite conjugation on `C^d ⊗ C^{d'}`: block `j` acts on
/// the second factor when the first is `|j>`.
pub fn oneway(blocks: &[ComplexMatrix], tol: &Tolerances) -> Result<Conjugation> {
    let Some(first) = blocks.first() else {
        return Err(Error::InvalidParameter("no blocks".into()));
    };
    let dp = first.rows();
    let mut u: Option<ComplexMatrix> = None;
    for (j, b) in blocks.iter().enumerate() {
        if b.rows() != dp || !b.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "block {j} is {}x{}, expected {dp}x{dp}",
                b.rows(),
                b.cols()
            )));
        }
        let defect = b.symmetry_defect();
        if defect > tol.eq_tol {
            return Err(Error::NotSymmetric(defect));
        }
        let defect = b.unitarity_defect();
        if defect > tol.eq_tol {
            return Err(Error::NotUnitary(defect));
        }
        u = Some(match u {
            None => b.clone(),
            Some(acc) => acc.direct_sum(b),
        });
    }
    let u = u.expect("non-empty").with_dims(vec![blocks.len(), dp])?;
    Ok(Conjugation::from_symmetric_unitary_unchecked(u))
}

/// `(Σ_j e^{iφ_j} ψ_j ψ_jᵀ)·conj` for an orthonormal basis `ψ_j`; every
/// `ψ_j` is then an eigenvector with eigenvalue `e^{iφ_j}`.
pub fn candidate(
    basis: &[ComplexVector],
    phases: &[f64],
    dims: &[usize],
    tol: &Tolerances,
) -> Result<Conjugation> {
    let n: usize = dims.iter().product();
    if basis.len() != n || phases.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors and {} phases for dimension {n}",
            basis.len(),
            phases.len()
        )));
    }
    if basis.iter().any(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch(format!("basis vectors must have length {n}")));
    }
    let e = ComplexMatrix::from_columns(basis)?;
    let gram_defect = (&e.adjoint() * &e).max_abs_diff(&ComplexMatrix::identity(n));
    if gram_defect > tol.eq_tol {
        return Err(Error::InvalidParameter(format!(
            "basis is not orthonormal (max |E†E - I| = {gram_defect:e})"
        )));
    }
    let d: Vec<_> = phases.iter().map(|&p| cis(p)).collect();
    let u = &(&e * &ComplexMatrix::from_diagonal(&d)) * &e.transpose();
    let u = (&u + &u.transpose()).scale(c64(0.5, 0.0)).with_dims(dims.to_vec())?;
    Ok(Conjugation::from_symmetric_unitary_unchecked(u))
}

fn ket(entries: &[f64]) -> ComplexVector {
    ComplexVector::from_real(entries).expect("non-empty")
}

/// The 3×2 product basis `|0,+>, |0,->, |1,0>, |1,1>, |2,0>, |2,1>`.
pub fn basis_3x2() -> Vec<ComplexVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = [ket(&[1.0, 0.0, 0.0]), ket(&[0.0, 1.0, 0.0]), ket(&[0.0, 0.0, 1.0])];
    let plus = ket(&[s, s]);
    let minus = ket(&[s, -s]);
    let zero = ket(&[1.0, 0.0]);
    let one = ket(&[0.0, 1.0]);
    vec![
        a[0].kron(&plus),
        a[0].kron(&minus),
        a[1].kron(&zero),
        a[1].kron(&one),
        a[2].kron(&zero),
        a[2].kron(&one),
    ]
}

/// The 2×2 product basis `|0,+>, |0,->, |1,0>, |1,1>`.
pub fn basis_2x2() -> Vec<ComplexVector> {
    basis_3x2().into_iter().take(4).map(|v| {
        // Drop the unused third level of the first factor.
        let e: Vec<_> = v.entries()[..4].to_vec();
        ComplexVector::new(e).expect("4 entries").with_dims(vec![2, 2]).expect("2*2")
    }).collect()
}
