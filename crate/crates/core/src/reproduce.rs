//! Reference data sets: magic-basis spectra of the named two-qubit
//! conjugations and the minimum-average-concurrence landscape.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::Serialize;

use crate::conjugation::named::{collective_spin_flip, conjugate_swap};
use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::linalg::{c64, cis, ComplexMatrix, Tolerances, C64};
use crate::twoqubit::{classify, magic_matrix, min_average_concurrence, MagicSpectrum, TwoQubitTag};

#[derive(Clone, Debug)]
pub struct Table1Row {
    pub name: &'static str,
    pub spectrum: MagicSpectrum,
    pub tag: TwoQubitTag,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1RowJson {
    pub name: &'static str,
    pub spectrum: Vec<crate::io::ComplexJson>,
    pub prod_measurable: bool,
    pub tag: TwoQubitTag,
}

impl Table1Row {
    pub fn to_json(&self) -> Table1RowJson {
        Table1RowJson {
            name: self.name,
            spectrum: self.spectrum.values().iter().map(|&z| z.into()).collect(),
            prod_measurable: self.tag.is_prod_measurable(),
            tag: self.tag,
        }
    }
}

/// Collective spin flip, conjugate swap and the product conjugation
/// `conj ⊗ conj`, each with its spectrum and class.
pub fn table1(tol: &Tolerances) -> Result<Vec<Table1Row>> {
    let rows = [
        ("collective spin flip", collective_spin_flip()),
        ("conjugate swap", conjugate_swap(2)?),
        ("product", Conjugation::complex_conjugation(&[2, 2])?),
    ];
    rows.into_iter()
        .map(|(name, theta)| {
            let class = classify(&theta, tol)?;
            Ok(Table1Row {
                name,
                spectrum: class.spectrum,
                tag: class.tag,
            })
        })
        .collect()
}

/// Two-qubit conjugation whose magic-basis matrix is `diag(values)`.
pub fn magic_diagonal_conjugation(values: [C64; 4], tol: &Tolerances) -> Result<Conjugation> {
    let m = magic_matrix();
    let u = &(&m * &ComplexMatrix::from_diagonal(&values)) * &m.transpose();
    Conjugation::new(u.with_dims(vec![2, 2])?, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Figure2Point {
    pub phi2: f64,
    pub phi3: f64,
    pub min_avg_concurrence: f64,
}

fn grid_phase(k: usize, grid: usize) -> f64 {
    TAU * k as f64 / grid as f64
}

/// Minimum average concurrence for the spectrum `{1, 1, e^{iφ₂}, e^{iφ₃}}`
/// at `φ_k = 2πk/G`, `0 ≤ φ₂ ≤ φ₃ < 2π`, row-major in `φ₂`. Values come
/// from the conjugation itself, not the closed form.
pub fn figure2(grid: usize, tol: &Tolerances) -> Result<Vec<Figure2Point>> {
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be positive".into()));
    }
    let one = c64(1.0, 0.0);
    let mut out = Vec::with_capacity(grid * (grid + 1) / 2);
    for i in 0..grid {
        for j in i..grid {
            let (phi2, phi3) = (grid_phase(i, grid), grid_phase(j, grid));
            let theta = magic_diagonal_conjugation([one, one, cis(phi2), cis(phi3)], tol)?;
            out.push(Figure2Point {
                phi2,
                phi3,
                min_avg_concurrence: min_average_concurrence(&theta)?,
            });
        }
    }
    Ok(out)
}

/// `|2 + e^{iφ₂} + e^{iφ₃}|`.
pub fn figure2_closed_form(phi2: f64, phi3: f64) -> f64 {
    (c64(2.0, 0.0) + cis(phi2) + cis(phi3)).norm()
}

/// CSV with header `phi2,phi3,min_avg_concurrence`, 12 significant digits.
pub fn figure2_csv(points: &[Figure2Point]) -> String {
    let mut s = String::from("phi2,phi3,min_avg_concurrence\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{}",
            sig12(p.phi2),
            sig12(p.phi3),
            sig12(p.min_avg_concurrence)
        );
    }
    s
}

/// Scientific notation with 12 significant digits; tiny values print as 0.
fn sig12(x: f64) -> String {
    if x.abs() < 1e-300 {
        return "0".into();
    }
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn table1_rows() {
        let rows = table1(&tol()).unwrap();
        let expect = [
            ([1.0, 1.0, 1.0, 1.0], false),
            ([1.0, -1.0, -1.0, -1.0], false),
            ([1.0, -1.0, -1.0, 1.0], true),
        ];
        for (row, (spec, prod)) in rows.iter().zip(expect) {
            let want = MagicSpectrum::new(spec.map(|x| c64(x, 0.0)), &tol()).unwrap();
            assert!(row.spectrum.multiset_eq(&want, 1e-9), "{}", row.name);
            assert_eq!(row.tag.is_prod_measurable(), prod);
        }
    }

    #[test]
    fn figure2_small_grid() {
        let pts = figure2(4, &tol()).unwrap();
        assert_eq!(pts.len(), 10);
        for p in &pts {
            assert!((p.min_avg_concurrence - figure2_closed_form(p.phi2, p.phi3)).abs() < 1e-12);
        }
        let corner = pts.iter().find(|p| p.phi2 == TAU / 2.0 && p.phi3 == TAU / 2.0).unwrap();
        assert!(corner.min_avg_concurrence < 1e-12);
        let csv = figure2_csv(&pts);
        assert!(csv.starts_with("phi2,phi3,min_avg_concurrence\n0,0,4.00000000000e0\n"));
        assert_eq!(csv.lines().count(), 11);
    }
}
