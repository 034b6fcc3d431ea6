use std::fmt::Write as _;
use std::path::Path;

use conjlab::conjugation::{Conjugation, Frame};
use conjlab::io::{ComplexJson, MatrixJson, VectorJson};
use conjlab::linalg::takagi as factorize;
use conjlab::measurability::{prod_eigenbasis_search, SearchOptions, Verdict};
use conjlab::reproduce::{figure2_csv, table1 as table1_rows};
use conjlab::twoqubit::{average_concurrence, classify as classify_two_qubit, hadamard_eigenframe, magic_spectrum};
use conjlab::verify::run_invariant_suite;
use serde::Serialize;

use crate::input::{load, load_conjugation};
use crate::{CliError, Context, Format, Outcome, Status};

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn frame_json(frame: &Frame) -> Vec<VectorJson> {
    frame.vectors().iter().map(VectorJson::from_vector).collect()
}

fn require_two_qubits(theta: &Conjugation, verb: &str) -> Result<(), CliError> {
    if theta.dims() != [2, 2] {
        return Err(CliError(format!(
            "`{verb}` needs a two-qubit conjugation (dims [2, 2]), got dims {:?}",
            theta.dims()
        )));
    }
    Ok(())
}

pub fn spectrum(ctx: &Context, input: &Path) -> Result<Outcome, CliError> {
    ctx.format("spectrum", false, Format::Json)?;
    let theta = load_conjugation(input, &ctx.tol)?;
    require_two_qubits(&theta, "spectrum")?;
    Ok(Outcome::ok(to_json(&magic_spectrum(&theta, &ctx.tol)?.to_json())?))
}

#[derive(Serialize)]
struct ClassifyJson {
    tag: conjlab::twoqubit::TwoQubitTag,
    prod_measurable: bool,
    spectrum: Vec<ComplexJson>,
    canonical_phases: Vec<f64>,
    witness: Option<Vec<VectorJson>>,
}

pub fn classify(ctx: &Context, input: &Path) -> Result<Outcome, CliError> {
    ctx.format("classify", false, Format::Json)?;
    let theta = load_conjugation(input, &ctx.tol)?;
    require_two_qubits(&theta, "classify")?;
    let class = classify_two_qubit(&theta, &ctx.tol)?;
    let spectrum = class.spectrum.to_json();
    Ok(Outcome::ok(to_json(&ClassifyJson {
        tag: class.tag,
        prod_measurable: class.tag.is_prod_measurable(),
        spectrum: spectrum.spectrum,
        canonical_phases: spectrum.canonical_phases,
        witness: class.witness.as_ref().map(frame_json),
    })?))
}

#[derive(Serialize)]
struct TakagiJson {
    values: Vec<f64>,
    v: MatrixJson,
    reconstruction_error: f64,
}

pub fn takagi(ctx: &Context, input: &Path) -> Result<Outcome, CliError> {
    ctx.format("takagi", false, Format::Json)?;
    let source = input.display().to_string();
    let a = load::<MatrixJson>(input)?.to_matrix(&source)?;
    let t = factorize(&a, &ctx.tol).map_err(|e| CliError(format!("{source}: {e}")))?;
    Ok(Outcome::ok(to_json(&TakagiJson {
        reconstruction_error: t.reconstruct().max_abs_diff(&a),
        values: t.values,
        v: MatrixJson::from_matrix(&t.v),
    })?))
}

#[derive(Serialize)]
struct EigenframeJson {
    construction: &'static str,
    vectors: Vec<VectorJson>,
    eigenvalues: Vec<ComplexJson>,
    completeness_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    average_concurrence: Option<f64>,
}

pub fn eigenframe(ctx: &Context, input: &Path, hadamard: bool) -> Result<Outcome, CliError> {
    ctx.format("eigenframe", false, Format::Json)?;
    let theta = load_conjugation(input, &ctx.tol)?;
    let (construction, frame) = if hadamard {
        require_two_qubits(&theta, "eigenframe --hadamard")?;
        ("hadamard", hadamard_eigenframe(&theta)?)
    } else {
        ("real_subspace", theta.real_subspace_basis(&ctx.tol)?)
    };
    let check = theta.is_eigenframe(&frame, &ctx.tol)?;
    let eigenvalues = check
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, z)| {
            z.map(ComplexJson::from)
                .ok_or_else(|| CliError(format!("frame member {j} is not an eigenvector")))
        })
        .collect::<Result<_, _>>()?;
    let average = if theta.dims() == [2, 2] {
        Some(average_concurrence(&frame)?)
    } else {
        None
    };
    Ok(Outcome::ok(to_json(&EigenframeJson {
        construction,
        vectors: frame_json(&frame),
        eigenvalues,
        completeness_defect: frame.completeness_defect(),
        average_concurrence: average,
    })?))
}

pub fn measurability(ctx: &Context, input: &Path) -> Result<Outcome, CliError> {
    ctx.format("measurability", false, Format::Json)?;
    let theta = load_conjugation(input, &ctx.tol)?;
    let options = SearchOptions {
        budget: ctx.budget,
        seed: ctx.seed,
    };
    let report = prod_eigenbasis_search(&theta, options, &ctx.tol)?;
    Ok(Outcome {
        text: to_json(&report.to_json())?,
        status: if report.verdict == Verdict::Indeterminate {
            Status::Indeterminate
        } else {
            Status::Ok
        },
    })
}

pub fn table1(ctx: &Context) -> Result<Outcome, CliError> {
    let rows = table1_rows(&ctx.tol)?;
    let text = match ctx.format("table1", true, Format::Json)? {
        Format::Json => to_json(&rows.iter().map(|r| r.to_json()).collect::<Vec<_>>())?,
        Format::Csv => {
            let mut s = String::from("name,");
            for k in 1..=4 {
                let _ = write!(s, "s{k}_re,s{k}_im,");
            }
            s.push_str("tag,prod_measurable\n");
            for r in &rows {
                s.push_str(r.name);
                for z in r.spectrum.values() {
                    let _ = write!(s, ",{},{}", z.re, z.im);
                }
                let _ = writeln!(s, ",{:?},{}", r.tag, r.tag.is_prod_measurable());
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

pub fn figure2(ctx: &Context) -> Result<Outcome, CliError> {
    let points = conjlab::reproduce::figure2(ctx.grid, &ctx.tol)?;
    Ok(Outcome::ok(match ctx.format("figure2", true, Format::Csv)? {
        Format::Csv => figure2_csv(&points),
        Format::Json => to_json(&points)?,
    }))
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    seed: u64,
    passed: bool,
    checks: Vec<CheckJson<'a>>,
}

pub fn verify(ctx: &Context) -> Result<Outcome, CliError> {
    ctx.format("verify", false, Format::Json)?;
    let report = run_invariant_suite(ctx.seed, &ctx.tol);
    for c in &report.checks {
        log::info!("{} took {:.3} s", c.name, c.seconds);
    }
    // Timings stay out of the document so reruns are byte-identical.
    let doc = VerifyJson {
        seed: report.seed,
        passed: report.all_passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name,
                passed: c.passed,
                detail: &c.detail,
            })
            .collect(),
    };
    Ok(Outcome {
        text: to_json(&doc)?,
        status: if doc.passed { Status::Ok } else { Status::SuiteFailed },
    })
}
