use num_complex::Complex64;

use super::operator::{IndexMap, Operator};
use super::state::{Registers, StateVector};
use crate::error::{structural, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::hom::Homomorphism;

/// `P_x |y⟩ = |x + y⟩`.
pub fn translation_op(group: &GroupSpec, x: &GroupElement) -> Result<Operator> {
    if !group.contains(x) {
        return Err(structural(format!("{x:?} is not an element of {group}")));
    }
    let targets = group
        .elements()
        .map(|y| group.index_of_unchecked(&group.add_unchecked(x, &y)))
        .collect();
    Ok(Operator::IndexMap(IndexMap::permutation_unchecked(targets)))
}

/// `A_ψ |x⟩|y⟩ = |x⟩|y + ψ(x)⟩`.
pub fn a_psi(psi: &Homomorphism) -> Operator {
    let g = psi.domain();
    let n = g.order();
    let add = g.addition_table();
    let images = psi.table();
    let mut targets = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            targets.push(x * n + add[y * n + images[x]]);
        }
    }
    Operator::IndexMap(IndexMap::permutation_unchecked(targets))
}

/// `B_ψ |x⟩|y⟩ = |x + ψ(y)⟩|y⟩`.
pub fn b_psi(psi: &Homomorphism) -> Operator {
    let g = psi.domain();
    let n = g.order();
    let add = g.addition_table();
    let images = psi.table();
    let mut targets = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            targets.push(add[x * n + images[y]] * n + y);
        }
    }
    Operator::IndexMap(IndexMap::permutation_unchecked(targets))
}

/// `U_π |y⟩ = |π(y)⟩`, with `π` given by element indices.
pub fn permutation_op(group: &GroupSpec, pi: &[usize]) -> Result<Operator> {
    if pi.len() != group.order() {
        return Err(structural(format!(
            "permutation of length {} on a group of order {}",
            pi.len(),
            group.order()
        )));
    }
    IndexMap::new(pi.to_vec(), None).map(Operator::IndexMap)
}

/// `(U ⊗ V) |ψ⟩` on a two-register state, one register at a time.
pub fn tensor_apply(u: &Operator, v: &Operator, state: &StateVector) -> Result<StateVector> {
    let n = state.n();
    if state.registers() != Registers::Two {
        return Err(structural("tensor_apply needs a two-register state"));
    }
    if u.dim() != n || v.dim() != n {
        return Err(structural(format!(
            "operators of dimension {} and {} on registers of dimension {n}",
            u.dim(),
            v.dim()
        )));
    }
    let out = apply_registers(u, v, n, state.amplitudes());
    let result = StateVector::from_raw(n, Registers::Two, out)?;
    result.check_norm()?;
    Ok(result)
}

pub(crate) fn apply_registers(u: &Operator, v: &Operator, n: usize, amps: &[Complex64]) -> Vec<Complex64> {
    apply_registers_with(|c| u.apply_unchecked(c), |r| v.apply_unchecked(r), n, amps)
}

/// `(U ⊗ V)` for any pair of single-register maps.
pub(crate) fn apply_registers_with<U, V>(u: U, v: V, n: usize, amps: &[Complex64]) -> Vec<Complex64>
where
    U: Fn(&[Complex64]) -> Vec<Complex64>,
    V: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut rows: Vec<Complex64> = Vec::with_capacity(n * n);
    for x in 0..n {
        rows.extend(v(&amps[x * n..(x + 1) * n]));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for y in 0..n {
        for x in 0..n {
            column[x] = rows[x * n + y];
        }
        for (x, a) in u(&column).into_iter().enumerate() {
            out[x * n + y] = a;
        }
    }
    out
}
