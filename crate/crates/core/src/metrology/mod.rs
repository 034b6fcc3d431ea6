//! Fisher information of pure-state models, quantum Cramér-Rao bound
//! saturation by eigenframe measurements, magnetometry networks and the
//! antiparallel construction.

mod antiparallel;
mod magnetometry;

pub use antiparallel::{
    antiparallel_model, antiparallel_network, spin_direction_model, AntiparallelModel,
};
pub use magnetometry::{
    collective_generator, ghz, magnetometry_conjugation, magnetometry_model, network_conjugation,
    network_frame, Axis, InitialState,
};

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::conjugation::{Conjugation, Frame};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, ComplexVector, Tolerances};

/// Outcomes with probability below this contribute nothing to the classical
/// Fisher information.
pub const PROB_FLOOR: f64 = 1e-12;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;

type StateFn = dyn Fn(&[f64]) -> Result<ComplexVector> + Send + Sync;
type DerivativeFn = dyn Fn(&[f64]) -> Result<Vec<ComplexVector>> + Send + Sync;

/// A family of normalized pure states `x ↦ |ψ_x>` with derivative access.
#[derive(Clone)]
pub struct PureStateModel {
    n_params: usize,
    dims: Vec<usize>,
    state: Arc<StateFn>,
    derivative: Option<Arc<DerivativeFn>>,
    step: f64,
}

impl fmt::Debug for PureStateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PureStateModel")
            .field("n_params", &self.n_params)
            .field("dims", &self.dims)
            .field("analytic_derivative", &self.derivative.is_some())
            .field("step", &self.step)
            .finish()
    }
}

impl PureStateModel {
    pub fn new(
        n_params: usize,
        dims: Vec<usize>,
        state: impl Fn(&[f64]) -> Result<ComplexVector> + Send + Sync + 'static,
    ) -> Result<Self> {
        if n_params == 0 || dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "model needs parameters and a partition, got {n_params} parameters and dims {dims:?}"
            )));
        }
        Ok(Self {
            n_params,
            dims,
            state: Arc::new(state),
            derivative: None,
            step: DEFAULT_STEP,
        })
    }

    /// Supplies analytic derivatives `∂_i|ψ_x>`.
    pub fn with_derivative(
        mut self,
        d: impl Fn(&[f64]) -> Result<Vec<ComplexVector>> + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_step(mut self, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
        }
        self.step = h;
        Ok(self)
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_params {
            return Err(Error::DimensionMismatch(format!(
                "model has {} parameters, point has {}",
                self.n_params,
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("parameter point {x:?}")));
        }
        Ok(())
    }

    /// `|ψ_x>`, checked for length, finiteness and unit norm.
    pub fn state(&self, x: &[f64]) -> Result<ComplexVector> {
        self.check_point(x)?;
        let psi = (self.state)(x)?;
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "model state has length {}, expected {}",
                psi.dim(),
                self.dim()
            )));
        }
        if !psi.is_finite() {
            return Err(Error::NonFinite("model state".into()));
        }
        if (psi.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "model state is not normalized (norm {})",
                psi.norm()
            )));
        }
        psi.with_dims(self.dims.clone())
    }

    /// `∂_i|ψ_x>` for every parameter: analytic when supplied, otherwise
    /// central differences.
    pub fn derivatives(&self, x: &[f64]) -> Result<Vec<ComplexVector>> {
        match &self.derivative {
            Some(d) => {
                self.check_point(x)?;
                let out = d(x)?;
                if out.len() != self.n_params || out.iter().any(|v| v.dim() != self.dim()) {
                    return Err(Error::DimensionMismatch(
                        "analytic derivative has the wrong shape".into(),
                    ));
                }
                if out.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("model derivative".into()));
                }
                Ok(out)
            }
            None => self.finite_difference_derivatives(x),
        }
    }

    /// Central differences `(ψ(x + h e_i) - ψ(x - h e_i)) / 2h`, ignoring any
    /// analytic derivative.
    pub fn finite_difference_derivatives(&self, x: &[f64]) -> Result<Vec<ComplexVector>> {
        self.check_point(x)?;
        let h = self.step;
        (0..self.n_params)
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                let d = self
                    .state(&xp)?
                    .sub(&self.state(&xm)?)
                    .scale(crate::linalg::c64(0.5 / h, 0.0));
                if d.is_finite() {
                    Ok(d)
                } else {
                    Err(Error::NonFinite("finite-difference derivative".into()))
                }
            })
            .collect()
    }
}

/// Positive operator-valued measure, with the generating frame when every
/// element has rank one.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    frame: Option<Frame>,
}

impl Povm {
    /// Checks Hermiticity, positivity (smallest eigenvalue ≥ -eq_tol) and
    /// completeness.
    pub fn new(elements: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidParameter("POVM has no elements".into()));
        };
        let n = first.require_square()?;
        let mut sum = ComplexMatrix::zeros(n, n);
        for e in &elements {
            if e.require_square()? != n {
                return Err(Error::DimensionMismatch("POVM elements of unequal size".into()));
            }
            let defect = e.hermiticity_defect();
            if defect > tol.eq_tol {
                return Err(Error::NotHermitian(defect));
            }
            let (values, _) = hermitian_eigen(e);
            if values.first().is_some_and(|&v| v < -tol.eq_tol) {
                return Err(Error::InvalidParameter(format!(
                    "POVM element has negative eigenvalue {}",
                    values[0]
                )));
            }
            sum = &sum + e;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(n));
        if defect > tol.eq_tol {
            return Err(Error::IncompleteFrame(defect));
        }
        Ok(Self {
            elements,
            frame: None,
        })
    }

    /// Rank-one POVM `{|v_j><v_j|}` of a complete frame.
    pub fn from_frame(frame: &Frame, tol: &Tolerances) -> Result<Self> {
        frame.check_complete(tol)?;
        Ok(Self {
            elements: frame.vectors().iter().map(ComplexVector::outer).collect(),
            frame: Some(frame.clone()),
        })
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `p_ω = <ψ|Π_ω|ψ>` and `∂_i p_ω = 2 Re <ψ|Π_ω|∂_iψ>`.
    fn probabilities(&self, psi: &ComplexVector, dpsi: &[ComplexVector]) -> Result<Vec<(f64, Vec<f64>)>> {
        let mut out = Vec::with_capacity(self.len());
        match &self.frame {
            Some(f) => {
                for v in f.vectors() {
                    let a = v.inner(psi);
                    let grad = dpsi.iter().map(|d| 2.0 * (a.conj() * v.inner(d)).re).collect();
                    out.push((a.norm_sqr(), grad));
                }
            }
            None => {
                for e in &self.elements {
                    let epsi = e.mul_vec(psi)?;
                    let grad = dpsi.iter().map(|d| 2.0 * d.inner(&epsi).re).collect();
                    out.push((psi.inner(&epsi).re, grad));
                }
            }
        }
        Ok(out)
    }
}

fn require_matching(povm: &Povm, model: &PureStateModel) -> Result<()> {
    if povm.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "POVM acts on dimension {}, model state has dimension {}",
            povm.dim(),
            model.dim()
        )));
    }
    Ok(())
}

/// `[F_C]_ij = Σ_ω ∂_i p_ω ∂_j p_ω / p_ω`, skipping `p_ω < PROB_FLOOR`.
pub fn classical_fisher(povm: &Povm, model: &PureStateModel, x: &[f64]) -> Result<DMatrix<f64>> {
    require_matching(povm, model)?;
    let psi = model.state(x)?;
    let dpsi = model.derivatives(x)?;
    let n = model.n_params();
    let mut f = DMatrix::<f64>::zeros(n, n);
    for (p, grad) in povm.probabilities(&psi, &dpsi)? {
        if p < PROB_FLOOR {
            let g = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if g > PROB_FLOOR.sqrt() {
                log::warn!("outcome with p = {p:.1e} has derivative {g:.1e}; skipped");
            }
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                f[(i, j)] += grad[i] * grad[j] / p;
            }
        }
    }
    Ok(f)
}

/// `[F_Q]_ij = 4 Re(<∂_iψ|∂_jψ> - <∂_iψ|ψ><ψ|∂_jψ>)`.
pub fn quantum_fisher_pure(model: &PureStateModel, x: &[f64]) -> Result<DMatrix<f64>> {
    let psi = model.state(x)?;
    let d = model.derivatives(x)?;
    let n = model.n_params();
    let overlaps: Vec<_> = d.iter().map(|di| psi.inner(di)).collect();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        4.0 * (d[i].inner(&d[j]) - overlaps[i].conj() * overlaps[j]).re
    }))
}

/// Fidelity-based estimate of `[F_Q]_ii`: `8(1 - |<ψ_x|ψ_{x+δe_i}>|)/δ²`,
/// averaged over `±δ` so the odd-order error cancels.
pub fn fidelity_qfi(model: &PureStateModel, x: &[f64], i: usize, delta: f64) -> Result<f64> {
    if i >= model.n_params() {
        return Err(Error::InvalidParameter(format!("no parameter {i}")));
    }
    let psi = model.state(x)?;
    let mut total = 0.0;
    for s in [delta, -delta] {
        let mut xd = x.to_vec();
        xd[i] += s;
        total += 1.0 - psi.inner(&model.state(&xd)?).norm();
    }
    Ok(4.0 * total / (delta * delta))
}

/// `θ|ψ_x> ∝ |ψ_x>` at every sample point.
pub fn is_imaginarity_free(
    model: &PureStateModel,
    theta: &Conjugation,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<bool> {
    if theta.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "conjugation on dimension {}, model on {}",
            theta.dim(),
            model.dim()
        )));
    }
    for x in points {
        if theta.is_eigenvector(&model.state(x)?, tol)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical and quantum Fisher matrices at one point.
#[derive(Clone, Debug)]
pub struct FisherMatrices {
    pub classical: DMatrix<f64>,
    pub quantum: DMatrix<f64>,
    /// `quantum - classical`.
    pub gap: DMatrix<f64>,
}

impl FisherMatrices {
    pub fn max_gap(&self) -> f64 {
        self.gap.amax()
    }

    /// Smallest eigenvalue of the gap; the QCRB says it is ≥ 0.
    pub fn gap_min_eigenvalue(&self) -> f64 {
        let sym = (&self.gap + self.gap.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }

    /// Ratio of extreme singular values of `F_Q`; infinite when singular.
    pub fn quantum_condition_number(&self) -> f64 {
        let sv = self.quantum.singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    }

    pub fn to_json(&self) -> FisherJson {
        let rows = |m: &DMatrix<f64>| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect()
        };
        FisherJson {
            classical: rows(&self.classical),
            quantum: rows(&self.quantum),
            gap_norm: self.max_gap(),
            quantum_condition_number: self.quantum_condition_number(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FisherJson {
    pub classical: Vec<Vec<f64>>,
    pub quantum: Vec<Vec<f64>>,
    pub gap_norm: f64,
    /// `None` encodes an infinite condition number.
    #[serde(serialize_with = "finite_or_null")]
    pub quantum_condition_number: f64,
}

fn finite_or_null<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

/// Both Fisher matrices, their gap, and whether `max|F_Q - F_C| < fisher_tol`.
pub fn qcrb_saturation_gap(
    povm: &Povm,
    model: &PureStateModel,
    x: &[f64],
    tol: &Tolerances,
) -> Result<(FisherMatrices, bool)> {
    let classical = classical_fisher(povm, model, x)?;
    let quantum = quantum_fisher_pure(model, x)?;
    let gap = &quantum - &classical;
    let f = FisherMatrices {
        classical,
        quantum,
        gap,
    };
    let saturated = f.max_gap() < tol.fisher_tol;
    Ok((f, saturated))
}

/// `θ A θ` as a linear operator: `U conj(A) conj(U)`.
pub fn conjugate_operator(theta: &Conjugation, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != theta.dim() || a.cols() != theta.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} against conjugation on dimension {}",
            a.rows(),
            a.cols(),
            theta.dim()
        )));
    }
    let u = theta.matrix();
    Ok(&(u * &a.conj()) * &u.conj())
}

/// `max |θH + Hθ|` read as `U conj(H) + H U`, the anticommutator's matrix.
pub fn anticommutator_defect(theta: &Conjugation, h: &ComplexMatrix) -> Result<f64> {
    let u = theta.matrix();
    if h.rows() != u.rows() || h.cols() != u.cols() {
        return Err(Error::DimensionMismatch(format!(
            "generator {}x{} against conjugation on dimension {}",
            h.rows(),
            h.cols(),
            u.rows()
        )));
    }
    Ok((&(u * &h.conj()) + &(h * u)).max_abs())
}
