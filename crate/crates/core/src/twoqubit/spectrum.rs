use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::ComplexJson;
use crate::linalg::{cis, Tolerances, C64};

/// Unordered multiset of four unimodular numbers, compared up to a global
/// phase.
#[derive(Clone, Debug, PartialEq)]
pub struct MagicSpectrum {
    values: [C64; 4],
}

/// How one spectrum maps onto another: `e^{i phase} self[k] ≈
/// other[permutation[k]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMatch {
    pub phase: f64,
    pub permutation: [usize; 4],
    pub max_residual: f64,
    /// Set when the worst residual exceeds half the acceptance tolerance.
    pub near_boundary: bool,
}

fn wrap(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    if p >= TAU - 1e-12 {
        0.0
    } else {
        p
    }
}

impl MagicSpectrum {
    pub fn new(values: [C64; 4], tol: &Tolerances) -> Result<Self> {
        for v in &values {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite("spectrum value".into()));
            }
            if (v.norm() - 1.0).abs() > tol.eq_tol.max(1e-9) * 10.0 {
                return Err(Error::InvalidParameter(format!(
                    "spectrum value {v} is not unimodular"
                )));
            }
        }
        Ok(Self { values })
    }

    /// From phases `φ_k`, i.e. values `e^{iφ_k}`.
    pub fn from_phases(phases: [f64; 4]) -> Self {
        Self {
            values: phases.map(cis),
        }
    }

    pub fn values(&self) -> &[C64; 4] {
        &self.values
    }

    /// Phases in `[0, 2π)`, in stored order.
    pub fn phases(&self) -> [f64; 4] {
        self.values.map(|z| wrap(z.arg()))
    }

    /// `|Σ z_k|`.
    pub fn trace_abs(&self) -> f64 {
        self.values.iter().sum::<C64>().norm()
    }

    /// Canonical representative: rotate so that some value becomes 1,
    /// choosing the rotation whose ascending phase list in `[0, 2π)` is
    /// lexicographically smallest.
    pub fn canonical_phases(&self) -> [f64; 4] {
        let mut best: Option<[f64; 4]> = None;
        for k in 0..4 {
            let r = self.values[k].conj();
            let mut ph = self.values.map(|z| wrap((z * r).arg()));
            ph[k] = 0.0;
            ph.sort_by(f64::total_cmp);
            let better = match &best {
                None => true,
                Some(b) => {
                    let mut ord = std::cmp::Ordering::Equal;
                    for (x, y) in ph.iter().zip(b) {
                        if (x - y).abs() > 1e-12 {
                            ord = x.total_cmp(y);
                            break;
                        }
                    }
                    ord == std::cmp::Ordering::Less
                }
            };
            if better {
                best = Some(ph);
            }
        }
        best.expect("four candidates")
    }

    /// Equality as multisets (no rotation), by greedy matching.
    pub fn multiset_eq(&self, other: &MagicSpectrum, tol: f64) -> bool {
        greedy_match(&self.values, &other.values, tol).is_some()
    }

    /// Finds a global phase and a matching that carry `self` onto `other`.
    pub fn matching(&self, other: &MagicSpectrum, tol: f64) -> Option<SpectrumMatch> {
        let mut best: Option<SpectrumMatch> = None;
        for k in 0..4 {
            let rot = other.values[0] * self.values[k].conj();
            let rotated = self.values.map(|z| z * rot);
            if let Some((perm, res)) = greedy_match(&rotated, &other.values, tol) {
                if best.as_ref().is_none_or(|b| res < b.max_residual) {
                    best = Some(SpectrumMatch {
                        phase: rot.arg(),
                        permutation: perm,
                        max_residual: res,
                        near_boundary: res > 0.5 * tol,
                    });
                }
            }
        }
        if let Some(m) = &best {
            if m.near_boundary {
                log::warn!(
                    "spectrum match residual {:.3e} is within a factor 2 of the tolerance {tol:.1e}",
                    m.max_residual
                );
            }
        }
        best
    }

    /// Equivalence up to a global phase, at `eq_tol`.
    pub fn equivalent(&self, other: &MagicSpectrum, tol: &Tolerances) -> bool {
        self.matching(other, tol.eq_tol).is_some()
    }

    /// Splits the four values into two antipodal pairs `{a, -a}, {c, -c}`
    /// if possible. Returns the index pairs.
    pub fn antipodal_pairs(&self, tol: f64) -> Option<[(usize, usize); 2]> {
        let v = &self.values;
        let splits = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
        splits
            .into_iter()
            .map(|s| {
                let err = s
                    .iter()
                    .map(|&(a, b)| (v[a] + v[b]).norm())
                    .fold(0.0, f64::max);
                (s, err)
            })
            .filter(|(_, err)| *err < tol)
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(s, _)| s)
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            spectrum: self.values.map(ComplexJson::from).to_vec(),
            canonical_phases: self.canonical_phases().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumJson {
    pub spectrum: Vec<ComplexJson>,
    pub canonical_phases: Vec<f64>,
}

/// Greedy assignment of each `a[k]` to the nearest unused `b`, accepted when
/// every distance is below `tol`.
fn greedy_match(a: &[C64; 4], b: &[C64; 4], tol: f64) -> Option<([usize; 4], f64)> {
    let mut used = [false; 4];
    let mut perm = [0; 4];
    let mut worst: f64 = 0.0;
    // Match the most constrained values first: those with the fewest
    // candidates inside the tolerance.
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by_key(|&k| b.iter().filter(|&&y| (a[k] - y).norm() < tol).count());
    for k in order {
        let (j, d) = (0..4)
            .filter(|&j| !used[j])
            .map(|j| (j, (a[k] - b[j]).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if d >= tol {
            return None;
        }
        used[j] = true;
        perm[k] = j;
        worst = worst.max(d);
    }
    Some((perm, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn spec(v: [C64; 4]) -> MagicSpectrum {
        MagicSpectrum::new(v, &tol()).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let one = c64(1.0, 0.0);
        let i = c64(0.0, 1.0);
        assert!(spec([one; 4]).equivalent(&spec([-one; 4]), &tol()));
        assert!(spec([one, -one, i, -i]).equivalent(&spec([i, -i, -one, one]), &tol()));
        assert!(!spec([one; 4]).equivalent(&spec([one, one, one, -one]), &tol()));
    }

    #[test]
    fn matching_reports_phase_and_permutation() {
        let s = MagicSpectrum::from_phases([0.1, 0.7, 2.0, 4.0]);
        let t = MagicSpectrum::from_phases([4.0 + 1.3, 0.1 + 1.3, 2.0 + 1.3, 0.7 + 1.3]);
        let m = s.matching(&t, 1e-9).unwrap();
        for k in 0..4 {
            let z = s.values()[k] * cis(m.phase);
            assert!((z - t.values()[m.permutation[k]]).norm() < 1e-12);
        }
        assert!(!m.near_boundary);
    }

    #[test]
    fn canonical_phases_are_rotation_invariant() {
        let s = MagicSpectrum::from_phases([0.3, 1.1, 1.1, PI]);
        let t = MagicSpectrum::from_phases([2.3, 3.1, 3.1, PI + 2.0]);
        let (a, b) = (s.canonical_phases(), t.canonical_phases());
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
        assert_eq!(a[0], 0.0);
    }

    #[test]
    fn antipodal_detection() {
        let one = c64(1.0, 0.0);
        let i = c64(0.0, 1.0);
        assert!(spec([one, i, -one, -i]).antipodal_pairs(1e-7).is_some());
        assert!(spec([one; 4]).antipodal_pairs(1e-7).is_none());
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(MagicSpectrum::new([c64(2.0, 0.0); 4], &tol()).is_err());
    }
}
