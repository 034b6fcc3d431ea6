use serde::Serialize;

use crate::conjugation::Frame;
use crate::error::{Error, Result};
use crate::linalg::{c64, cis, pauli, ComplexVector, Tolerances, C64};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The four tetrahedron directions `(±1, ±1, ±1)/√3` with an even number of
/// minus signs.
pub fn tetrahedron() -> [[f64; 3]; 4] {
    let s = 1.0 / SQRT3;
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

fn check_unit(n: &[f64; 3], tol: &Tolerances) -> Result<()> {
    if n.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("direction".into()));
    }
    let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (len - 1.0).abs() > tol.eq_tol {
        return Err(Error::InvalidParameter(format!(
            "direction {n:?} is not a unit vector (length {len})"
        )));
    }
    Ok(())
}

/// Spin-1/2 state `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>` pointing along `n`.
pub fn ket_n(n: &[f64; 3]) -> ComplexVector {
    let [x, y, z] = *n;
    let c = (0.5 * (1.0 + z)).max(0.0).sqrt();
    let entries = if c < 1e-12 {
        vec![c64(0.0, 0.0), c64(1.0, 0.0)]
    } else {
        vec![c64(c, 0.0), c64(x, y) / (2.0 * c)]
    };
    ComplexVector::new(entries).expect("two entries")
}

fn neg(n: &[f64; 3]) -> [f64; 3] {
    n.map(|x| -x)
}

/// `Ψ_n(α) = ((√3 + e^{iα})/(2√2)) |n, n*> + ((e^{iα} - √3)/(2√2)) F |n*, n>`
/// with `F = iσ_Y ⊗ iσ_Y`. At `α = 0` this is the elegant joint vector, an
/// eigenvector of the conjugate swap with eigenvalue 1.
pub fn ejm_vector(alpha: f64, n: &[f64; 3]) -> ComplexVector {
    let k = ket_n(n);
    let ks = k.conj();
    let e = cis(alpha);
    let a = (e + SQRT3) / (2.0 * std::f64::consts::SQRT_2);
    let b = (e - SQRT3) / (2.0 * std::f64::consts::SQRT_2);
    let flip = pauli::i_y().kron(&pauli::i_y());
    let second = flip.mul_vec(&ks.kron(&k)).expect("4x4 on 4");
    k.kron(&ks)
        .scale(a)
        .add(&second.scale(b))
        .with_dims(vec![2, 2])
        .expect("4 = 2*2")
}

/// The elegant joint vector in the Bell basis:
/// `½Ψ+ + (√3/2) n_z Ψ- + (√3/2) n_x Φ+ - (√3/2) i n_y Φ-`.
pub fn ejm_vector_bell_form(n: &[f64; 3]) -> ComplexVector {
    let [x, y, z] = *n;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = 0.5 * SQRT3;
    // Components on |00>, |01>, |10>, |11>.
    let psi_p = [s, 0.0, 0.0, s];
    let psi_m = [s, 0.0, 0.0, -s];
    let phi_p = [0.0, s, s, 0.0];
    let phi_m = [0.0, s, -s, 0.0];
    let entries = (0..4)
        .map(|i| {
            c64(0.5 * psi_p[i] + h * z * psi_m[i] + h * x * phi_p[i], -h * y * phi_m[i])
        })
        .collect();
    ComplexVector::new(entries)
        .expect("four entries")
        .with_dims(vec![2, 2])
        .expect("4 = 2*2")
}

/// `((√3 + e^{iα})/(2√2)) |n, -n> + ((√3 - e^{iα})/(2√2)) |-n, n>`, an
/// eigenvector of `θ(α)` of concurrence `√(1 + 3 sin²α)/2`.
pub fn iso_entangled_vector(alpha: f64, n: &[f64; 3]) -> ComplexVector {
    let (p, m) = (ket_n(n), ket_n(&neg(n)));
    let e = cis(alpha);
    let r = 2.0 * std::f64::consts::SQRT_2;
    let a = (e + SQRT3) / r;
    let b = (-e + SQRT3) / r;
    p.kron(&m)
        .scale(a)
        .add(&m.kron(&p).scale(b))
        .with_dims(vec![2, 2])
        .expect("4 = 2*2")
}

fn check_tetrahedron(directions: &[[f64; 3]; 4], tol: &Tolerances) -> Result<()> {
    for n in directions {
        check_unit(n, tol)?;
    }
    let mut worst: f64 = 0.0;
    for j in 0..4 {
        for k in j + 1..4 {
            let dot: f64 = (0..3).map(|i| directions[j][i] * directions[k][i]).sum();
            worst = worst.max((dot + 1.0 / 3.0).abs());
        }
    }
    if worst > tol.eq_tol {
        return Err(Error::NotTetrahedral(worst));
    }
    Ok(())
}

/// Four [`ejm_vector`]s along tetrahedron directions: a basis of eigenvectors
/// of a conjugation local-unitarily equivalent to `θ(α)`, equal to the
/// conjugate swap at `α = 0`.
pub fn ejm_frame(alpha: f64, directions: &[[f64; 3]; 4], tol: &Tolerances) -> Result<Frame> {
    check_tetrahedron(directions, tol)?;
    Frame::with_dims(directions.iter().map(|n| ejm_vector(alpha, n)).collect(), vec![2, 2])
}

/// Four [`iso_entangled_vector`]s: an eigenbasis of `θ(α)` itself.
pub fn iso_entangled_frame(alpha: f64, directions: &[[f64; 3]; 4], tol: &Tolerances) -> Result<Frame> {
    check_tetrahedron(directions, tol)?;
    Frame::with_dims(
        directions.iter().map(|n| iso_entangled_vector(alpha, n)).collect(),
        vec![2, 2],
    )
}

/// Weights `r_j`, directions `n_j` and the moment conditions
/// `Σ r² = 4`, `Σ r² n = 0`, `Σ r² n nᵀ = (4/3)·1` of an elegant-joint-type
/// frame of the conjugate swap.
#[derive(Clone, Debug, Serialize)]
pub struct FrameConditions {
    pub weights: Vec<f64>,
    pub directions: Vec<[f64; 3]>,
    pub sum_weights: f64,
    pub first_moment: [f64; 3],
    pub second_moment: [[f64; 3]; 3],
    /// Largest departure of any member from the form `r Ψ_n`.
    pub shape_defect: f64,
    /// Largest departure from the three moment conditions.
    pub moment_defect: f64,
}

impl FrameConditions {
    pub fn hold(&self, tol: f64) -> bool {
        self.shape_defect <= tol && self.moment_defect <= tol
    }
}

/// Decomposes each member in the real basis `Ψ+, Ψ-, Φ+, iΦ-` of the
/// conjugate swap, reads off `r_j` and `n_j`, and evaluates the moment
/// conditions.
pub fn verify_frame_conditions(frame: &Frame) -> Result<FrameConditions> {
    if frame.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "frame conditions need a two-qubit frame, got dimension {}",
            frame.dim()
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c64(0.0, 0.0);
    let r = |x: f64| c64(x, 0.0);
    let basis: [[C64; 4]; 4] = [
        [r(s), z, z, r(s)],
        [r(s), z, z, r(-s)],
        [z, r(s), r(s), z],
        [z, c64(0.0, s), c64(0.0, -s), z],
    ];
    let mut out = FrameConditions {
        weights: Vec::new(),
        directions: Vec::new(),
        sum_weights: 0.0,
        first_moment: [0.0; 3],
        second_moment: [[0.0; 3]; 3],
        shape_defect: 0.0,
        moment_defect: 0.0,
    };
    for v in frame.vectors() {
        let mut c: Vec<C64> = basis
            .iter()
            .map(|b| (0..4).map(|i| b[i].conj() * v[i]).sum())
            .collect();
        // Strip the global phase using the largest coefficient, then make the
        // Ψ+ coefficient non-negative.
        let big = c
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(z);
        if big.norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        let ph = big.conj() / big.norm();
        c.iter_mut().for_each(|x| *x *= ph);
        if c[0].re < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
        let imag = c.iter().map(|x| x.im.abs()).fold(0.0, f64::max);
        let w = v.norm();
        let rho = w * w;
        let scale = 2.0 / (SQRT3 * w);
        let n = [c[2].re * scale, -c[3].re * scale, c[1].re * scale];
        let ratio = (c[0].re - 0.5 * w).abs();
        out.shape_defect = out.shape_defect.max(imag).max(ratio);
        out.sum_weights += rho;
        for a in 0..3 {
            out.first_moment[a] += rho * n[a];
            for b in 0..3 {
                out.second_moment[a][b] += rho * n[a] * n[b];
            }
        }
        out.weights.push(w);
        out.directions.push(n);
    }
    let mut d = (out.sum_weights - 4.0).abs();
    for a in 0..3 {
        d = d.max(out.first_moment[a].abs());
        for b in 0..3 {
            let target = if a == b { 4.0 / 3.0 } else { 0.0 };
            d = d.max((out.second_moment[a][b] - target).abs());
        }
    }
    out.moment_defect = d;
    Ok(out)
}
