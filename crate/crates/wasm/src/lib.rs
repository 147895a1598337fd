//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! so the page needs no generated TypeScript types.

use qftlab_core::experiment::{run_separation_experiment, SeparationConfig};
use qftlab_core::quantum::{a_psi, b_psi, inversion_residual, qft_matrix};
use qftlab_core::{Limits, Target};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest group order drawn as a character grid.
pub const GRID_MAX: usize = 256;
/// Largest group order whose `n² × n²` conjugated operator is drawn.
pub const HEATMAP_MAX: usize = 12;
/// Upper limit on trials per cell, to keep the page responsive.
pub const TRIALS_MAX: usize = 20_000;

fn parse(target: &str) -> Result<Target, String> {
    target.parse().map_err(|e: qftlab_core::Error| e.to_string())
}

pub fn character_grid_json(target: &str) -> Result<Value, String> {
    let t = parse(target)?;
    let basis = t.basis();
    let n = basis.order();
    if n > GRID_MAX {
        return Err(format!("order {n} is above the demo limit of {GRID_MAX}"));
    }
    let g = t.group();
    let table = basis.phase_table();
    let phases: Vec<&[u32]> = table.chunks(n).collect();
    let labels: Vec<String> = g.elements().map(|x| t.format_element(&x)).collect();
    Ok(json!({
        "target": t.to_string(),
        "basis": basis.describe(),
        "n": n,
        "phase_modulus": basis.phase_modulus(),
        "labels": labels,
        "phases": phases,
    }))
}

pub fn inversion_heatmap_json(target: &str, s: &str) -> Result<Value, String> {
    let t = parse(target)?;
    let n = t.group().order();
    if n > HEATMAP_MAX {
        return Err(format!("order {n} is above the demo limit of {HEATMAP_MAX}"));
    }
    let s = t.parse_element(s).map_err(|e| e.to_string())?;
    let (psi, phi) = t.structured_pair(&s).map_err(|e| e.to_string())?;
    let basis = t.basis();
    let limits = Limits::default();
    let f = qft_matrix(&basis, &limits).map_err(|e| e.to_string())?;
    let f_dag = f.adjoint();
    let left = f_dag.kron(&f);
    let right = f.kron(&f_dag);
    let conjugated = left
        .matmul(&a_psi(&psi).to_dense())
        .and_then(|m| m.matmul(&right))
        .map_err(|e| e.to_string())?;
    let b = b_psi(&phi).to_dense();
    let dim = n * n;
    let magnitudes: Vec<Vec<f64>> = (0..dim)
        .map(|r| conjugated.row(r).iter().map(|z| z.norm()).collect())
        .collect();
    let expected: Vec<Vec<u8>> = (0..dim)
        .map(|r| b.row(r).iter().map(|z| u8::from(z.norm() > 0.5)).collect())
        .collect();
    let residual = conjugated.max_abs_diff(&b);
    let fast = inversion_residual(&basis, &psi, &phi, &limits).map_err(|e| e.to_string())?;
    Ok(json!({
        "target": t.to_string(),
        "s": t.format_element(&s),
        "n": n,
        "residual": residual,
        "residual_fast": fast,
        "magnitudes": magnitudes,
        "expected": expected,
    }))
}

pub fn separation_curve_json(orders: &str, trials: usize, seed: u32) -> Result<Value, String> {
    let orders: Vec<u64> = orders
        .split(',')
        .map(|o| o.trim().parse().map_err(|_| format!("bad order {o:?}")))
        .collect::<Result<_, _>>()?;
    if trials == 0 || trials > TRIALS_MAX {
        return Err(format!("trials must be between 1 and {TRIALS_MAX}"));
    }
    let config = SeparationConfig {
        orders,
        trials,
        budgets: None,
        seed: seed.into(),
        quantum_trials: trials.min(20),
        audit: false,
    };
    let report = run_separation_experiment(&config).map_err(|e| e.to_string())?;
    let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    value["passed"] = json!(report.passed());
    Ok(value)
}

fn to_js(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Phases `r` with `χ_x(y) = e^{2πi r / L}`, one row per `x`.
#[wasm_bindgen]
pub fn character_grid(target: &str) -> Result<String, JsError> {
    to_js(character_grid_json(target))
}

/// `|(F^†⊗F) A_ψ (F⊗F^†)|` next to the pattern of `B_φ`.
#[wasm_bindgen]
pub fn inversion_heatmap(target: &str, s: &str) -> Result<String, JsError> {
    to_js(inversion_heatmap_json(target, s))
}

/// Collision rates, bounds and quantum correctness for comma-separated primes.
#[wasm_bindgen]
pub fn separation_curve(orders: &str, trials: usize, seed: u32) -> Result<String, JsError> {
    to_js(separation_curve_json(orders, trials, seed))
}
