//! Fisher-information sweeps driven by JSON experiment files.

use std::fmt::Write as _;
use std::path::Path;

use conjlab::conjugation::{Conjugation, Frame};
use conjlab::io::{MatrixJson, VectorJson};
use conjlab::linalg::matrix_exp_i_hermitian;
use conjlab::metrology::{
    antiparallel_network, is_imaginarity_free, magnetometry_conjugation, magnetometry_model,
    network_conjugation, network_frame, qcrb_saturation_gap, quantum_fisher_pure,
    spin_direction_model, Axis, FisherJson, FisherMatrices, InitialState, Povm, PureStateModel,
};
use conjlab::twoqubit::{ejm_frame, tetrahedron};
use conjlab::{c64, ComplexMatrix, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::to_json;
use crate::input::{conjugation_from_spec, load, spec_from_value};
use crate::{CliError, Context, Format, Outcome};

fn check_experiment(found: &Option<String>, want: &str) -> Result<(), CliError> {
    match found {
        Some(e) if e != want => Err(CliError(format!("experiment: expected \"{want}\", got \"{e}\""))),
        _ => Ok(()),
    }
}

fn check_points(points: &[Vec<f64>], n_params: usize) -> Result<(), CliError> {
    if points.is_empty() {
        return Err(CliError("points: at least one point is required".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != n_params {
            return Err(CliError(format!(
                "points[{i}]: {} coordinates, the model has {n_params} parameters",
                p.len()
            )));
        }
        if let Some(j) = p.iter().position(|x| !x.is_finite()) {
            return Err(CliError(format!("points[{i}][{j}]: not finite")));
        }
    }
    Ok(())
}

fn trace(rows: &[Vec<f64>]) -> f64 {
    rows.iter().enumerate().map(|(i, r)| r[i]).sum()
}

fn fisher_csv(header: &str, rows: &[(&[f64], &FisherJson, bool)]) -> String {
    let mut s = String::from(header);
    s.push_str("trace_classical,trace_quantum,gap_norm,quantum_condition_number,saturated\n");
    for (x, f, saturated) in rows {
        for v in *x {
            let _ = write!(s, "{v},");
        }
        let cond = if f.quantum_condition_number.is_finite() {
            f.quantum_condition_number.to_string()
        } else {
            "inf".into()
        };
        let _ = writeln!(
            s,
            "{},{},{:e},{cond},{saturated}",
            trace(&f.classical),
            trace(&f.quantum),
            f.gap_norm
        );
    }
    s
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MagnetometryConfig {
    #[serde(default)]
    experiment: Option<String>,
    field_dim: usize,
    qubits: usize,
    #[serde(default)]
    alpha: f64,
    initial: InitialState,
    points: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct MagnetometryPoint {
    phi: Vec<f64>,
    #[serde(flatten)]
    fisher: FisherJson,
    saturated: bool,
    symmetric: bool,
}

#[derive(Serialize)]
struct MagnetometryJson {
    experiment: &'static str,
    field_dim: usize,
    qubits: usize,
    alpha: f64,
    parameters: &'static [Axis],
    all_saturated: bool,
    points: Vec<MagnetometryPoint>,
}

pub fn magnetometry(ctx: &Context, path: &Path) -> Result<Outcome, CliError> {
    let format = ctx.format("magnetometry", true, Format::Json)?;
    let cfg: MagnetometryConfig = load(path)?;
    check_experiment(&cfg.experiment, "magnetometry")?;
    let axes = Axis::for_field(cfg.field_dim).map_err(|e| CliError(format!("field_dim: {e}")))?;
    let block = magnetometry_conjugation(cfg.field_dim, cfg.alpha)
        .map_err(|e| CliError(format!("alpha: {e}")))?;
    let theta =
        network_conjugation(&block, cfg.qubits).map_err(|e| CliError(format!("qubits: {e}")))?;
    let model = magnetometry_model(cfg.field_dim, cfg.qubits, &cfg.initial)
        .map_err(|e| CliError(format!("initial: {e}")))?;
    check_points(&cfg.points, axes.len())?;

    let copies = cfg.qubits / block.dims().len();
    let frame = network_frame(&block.real_subspace_basis(&ctx.tol)?, copies)?;
    let povm = Povm::from_frame(&frame, &ctx.tol)?;

    let mut points = Vec::with_capacity(cfg.points.len());
    for x in &cfg.points {
        let (f, saturated) = qcrb_saturation_gap(&povm, &model, x, &ctx.tol)?;
        points.push(MagnetometryPoint {
            phi: x.clone(),
            fisher: f.to_json(),
            saturated,
            symmetric: is_imaginarity_free(&model, &theta, std::slice::from_ref(x), &ctx.tol)?,
        });
    }
    let text = match format {
        Format::Json => to_json(&MagnetometryJson {
            experiment: "magnetometry",
            field_dim: cfg.field_dim,
            qubits: cfg.qubits,
            alpha: cfg.alpha,
            parameters: axes,
            all_saturated: points.iter().all(|p| p.saturated),
            points,
        })?,
        Format::Csv => {
            let header: String = axes.iter().map(|a| format!("phi_{a:?},")).collect();
            let rows: Vec<_> = points
                .iter()
                .map(|p| (p.phi.as_slice(), &p.fisher, p.saturated))
                .collect();
            fisher_csv(&header, &rows)
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ModelSpec {
    /// Qubit pointing along polar and azimuthal angles.
    SpinDirection,
    /// `exp(i Σ x_k G_k)|ψ₀>`.
    Hamiltonian {
        generators: Vec<MatrixJson>,
        initial: VectorJson,
    },
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
enum Measurement {
    #[default]
    CrossNode,
    Ejm,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntiparallelConfig {
    #[serde(default)]
    experiment: Option<String>,
    model: ModelSpec,
    factors: Vec<Value>,
    #[serde(default)]
    measurement: Measurement,
    points: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct AntiparallelPoint {
    x: Vec<f64>,
    #[serde(flatten)]
    fisher: FisherJson,
    saturated: bool,
    /// `max |F_Q - 2 F_Q^{single}|`.
    doubling_defect: f64,
}

#[derive(Serialize)]
struct AntiparallelJson {
    experiment: &'static str,
    measurement: Measurement,
    eigenframe: bool,
    all_saturated: bool,
    points: Vec<AntiparallelPoint>,
}

fn hamiltonian_model(
    generators: &[MatrixJson],
    initial: &VectorJson,
    tol: &Tolerances,
) -> Result<PureStateModel, CliError> {
    if generators.is_empty() {
        return Err(CliError("model.generators: at least one generator is required".into()));
    }
    let psi0 = initial.to_vector("model.initial")?;
    let d = psi0.dim();
    if psi0.norm() < 1e-12 {
        return Err(CliError("model.initial: zero vector".into()));
    }
    let psi0 = psi0.normalized()?;
    let dims = psi0.dims().map_or_else(|| vec![d], <[usize]>::to_vec);
    let mut gens = Vec::with_capacity(generators.len());
    for (j, g) in generators.iter().enumerate() {
        let field = format!("model.generators[{j}]");
        let m = g.to_matrix(&field)?;
        if m.rows() != d || m.cols() != d {
            return Err(CliError(format!(
                "{field}: {}x{} generator for a state of dimension {d}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_hermitian(tol.eq_tol * m.max_abs().max(1.0)) {
            return Err(CliError(format!("{field}: not Hermitian")));
        }
        gens.push(m);
    }
    let n = gens.len();
    Ok(PureStateModel::new(n, dims, move |x| {
        let h = gens
            .iter()
            .zip(x)
            .fold(ComplexMatrix::zeros(d, d), |acc, (g, &t)| &acc + &g.scale(c64(t, 0.0)));
        matrix_exp_i_hermitian(&h, 1.0)?.mul_vec(&psi0)
    })?)
}

pub fn antiparallel(ctx: &Context, path: &Path) -> Result<Outcome, CliError> {
    let format = ctx.format("antiparallel", true, Format::Json)?;
    let cfg: AntiparallelConfig = load(path)?;
    check_experiment(&cfg.experiment, "antiparallel")?;
    let base = match &cfg.model {
        ModelSpec::SpinDirection => spin_direction_model()?,
        ModelSpec::Hamiltonian { generators, initial } => {
            hamiltonian_model(generators, initial, &ctx.tol)?
        }
    };
    if cfg.factors.is_empty() {
        return Err(CliError("factors: at least one factor is required".into()));
    }
    let factors = cfg
        .factors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let source = format!("factors[{j}]");
            conjugation_from_spec(&spec_from_value(v.clone(), &source)?, &source, &ctx.tol)
        })
        .collect::<Result<Vec<Conjugation>, _>>()?;
    let ap = antiparallel_network(&base, &factors).map_err(|e| CliError(format!("factors: {e}")))?;
    check_points(&cfg.points, base.n_params())?;

    let frame: Frame = match cfg.measurement {
        Measurement::CrossNode => ap.cross_node_eigenframe(&ctx.tol)?,
        Measurement::Ejm => {
            if base.dims() != [2] {
                return Err(CliError(format!(
                    "measurement: the elegant joint measurement needs a single-qubit model, got dims {:?}",
                    base.dims()
                )));
            }
            ap.assemble_cross_node_frame(&[ejm_frame(0.0, &tetrahedron(), &ctx.tol)?])?
        }
    };
    let eigenframe = ap.theta_s().is_eigenframe(&frame, &ctx.tol)?.is_eigenframe;
    let povm = Povm::from_frame(&frame, &ctx.tol)?;

    let mut points = Vec::with_capacity(cfg.points.len());
    for x in &cfg.points {
        let (f, saturated): (FisherMatrices, bool) = qcrb_saturation_gap(&povm, ap.model(), x, &ctx.tol)?;
        let single = quantum_fisher_pure(&base, x)?;
        points.push(AntiparallelPoint {
            x: x.clone(),
            doubling_defect: (&f.quantum - single * 2.0).amax(),
            fisher: f.to_json(),
            saturated,
        });
    }
    let text = match format {
        Format::Json => to_json(&AntiparallelJson {
            experiment: "antiparallel",
            measurement: cfg.measurement,
            eigenframe,
            all_saturated: points.iter().all(|p| p.saturated),
            points,
        })?,
        Format::Csv => {
            let header: String = (1..=base.n_params()).map(|k| format!("x{k},")).collect();
            let rows: Vec<_> = points
                .iter()
                .map(|p| (p.x.as_slice(), &p.fisher, p.saturated))
                .collect();
            fisher_csv(&header, &rows)
        }
    };
    Ok(Outcome::ok(text))
}
