//! The full verification run for one target: character checks, then the
//! inversion identity at every multiplier-type map, or at a seeded sample
//! of them on larger targets.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::{verify_character_completeness, verify_multiplicativity, verify_orthogonality};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::quantum::{qft_matrix, verify_inversion_pair};
use crate::target::Target;
use crate::{par, Limits};

/// How many maps to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapSelection {
    All,
    /// A seeded sample without replacement.
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    /// Largest residual, or `0`/`1` for yes/no checks.
    pub value: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub target: String,
    pub order: usize,
    pub tolerance: f64,
    pub maps_checked: usize,
    pub maps_total: usize,
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Largest residual over the numeric checks.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.name != "completeness" && c.name != "compatibility")
            .map(|c| c.value)
            .fold(0.0, par::nan_max)
    }
}

fn residual_line(name: &str, value: f64, tolerance: f64, detail: String) -> CheckLine {
    CheckLine {
        name: name.into(),
        value,
        passed: value <= tolerance,
        detail,
    }
}

/// Multipliers `s` the run will use, in index order.
pub fn select_maps(target: &Target, selection: MapSelection) -> Vec<GroupElement> {
    let g = target.group();
    let n = g.order();
    match selection {
        MapSelection::Sample { count, seed } if count < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = sample(&mut rng, n, count).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| g.element_of_unchecked(i)).collect()
        }
        _ => g.elements().collect(),
    }
}

pub fn verify_target(target: &Target, selection: MapSelection, limits: &Limits) -> Result<VerifyReport> {
    let basis = target.basis();
    let n = basis.order();
    let tol = limits.tolerance;
    let mut checks = Vec::new();

    let f = qft_matrix(&basis, limits)?;
    checks.push(residual_line(
        "qft-unitarity",
        f.unitarity_residual(),
        tol,
        "‖F^†F − I‖_max".into(),
    ));
    checks.push(residual_line(
        "orthogonality",
        verify_orthogonality(&basis, limits)?,
        tol,
        "max |⟨χ_i, χ_j⟩ − δ_ij|".into(),
    ));
    checks.push(residual_line(
        "multiplicativity",
        verify_multiplicativity(&basis, limits)?,
        tol,
        "max |χ_{x+y} − χ_x χ_y|".into(),
    ));
    let complete = verify_character_completeness(&basis, limits)?;
    checks.push(CheckLine {
        name: "completeness".into(),
        value: if complete { 1.0 } else { 0.0 },
        passed: complete,
        detail: format!("{n} pairwise distinct characters"),
    });

    let maps = select_maps(target, selection);
    let mut worst = 0.0;
    let mut failures = Vec::new();
    for s in &maps {
        let (psi, phi) = target.structured_pair(s)?;
        match verify_inversion_pair(&basis, &psi, &phi, limits) {
            Ok(report) => worst = par::nan_max(worst, report.residual),
            Err(Error::Precondition(msg)) => failures.push(format!("s = {}: {msg}", target.format_element(s))),
            Err(e) => return Err(e),
        }
    }
    checks.push(CheckLine {
        name: "compatibility".into(),
        value: if failures.is_empty() { 1.0 } else { 0.0 },
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} maps additive and compatible", maps.len())
        } else {
            failures.join("; ")
        },
    });
    checks.push(residual_line(
        "inversion",
        worst,
        tol,
        "max ‖(F^†⊗F) A_ψ (F⊗F^†) − B_φ‖_max".into(),
    ));

    Ok(VerifyReport {
        target: target.to_string(),
        order: n,
        tolerance: tol,
        maps_checked: maps.len(),
        maps_total: n,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_targets_pass() {
        for text in ["Z4xZ2", "GF(9);f=Z^2+1", "M2(Z2)", "Z12"] {
            let t: Target = text.parse().unwrap();
            let report = verify_target(&t, MapSelection::All, &Limits::default()).unwrap();
            assert!(report.passed(), "{text}: {report:?}");
            assert!(report.max_residual() <= 1e-9);
            assert_eq!(report.maps_checked, report.order);
        }
    }

    #[test]
    fn sampling_is_seeded_and_sorted() {
        let t: Target = "Z3xZ3xZ3".parse().unwrap();
        let a = select_maps(&t, MapSelection::Sample { count: 5, seed: 1 });
        let b = select_maps(&t, MapSelection::Sample { count: 5, seed: 1 });
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(select_maps(&t, MapSelection::Sample { count: 100, seed: 1 }).len(), 27);
    }
}
