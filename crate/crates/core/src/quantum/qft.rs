use num_complex::Complex64;

use super::operator::{DenseMatrix, Operator};
use super::state::{Registers, StateVector};
use crate::character::CharacterBasis;
use crate::error::{structural, Result};
use crate::group::GroupElement;
use crate::{par, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `F_G`
    Forward,
    /// `F_G^†`
    Inverse,
}

/// Dense `F_G` with entry `(y, x) = χ_x(y) / √n`.
pub fn qft_matrix(basis: &CharacterBasis, limits: &Limits) -> Result<DenseMatrix> {
    let n = basis.order();
    limits.require_dense(n)?;
    let table = basis.phase_table();
    let scale = 1.0 / (n as f64).sqrt();
    // table is indexed [x * n + y]; the matrix wants row y, column x.
    Ok(DenseMatrix::from_fn(n, |y, x| {
        basis.root(table[x * n + y] as u64) * scale
    }))
}

pub fn qft(basis: &CharacterBasis, limits: &Limits) -> Result<Operator> {
    qft_matrix(basis, limits).map(Operator::Dense)
}

/// Applies `F_G` or `F_G^†` without materializing the matrix, `O(n²)`.
pub fn qft_apply(basis: &CharacterBasis, v: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    let n = basis.order();
    if v.len() != n {
        return Err(structural(format!(
            "transform over a group of order {n} applied to {} amplitudes",
            v.len()
        )));
    }
    let elems: Vec<GroupElement> = basis.group().elements().collect();
    let scale = 1.0 / (n as f64).sqrt();
    Ok(par::map_collect(n, |out| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (input, &a) in v.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            acc += match direction {
                // out[y] = Σ_x χ_x(y) v[x]
                Direction::Forward => basis.value(&elems[input], &elems[out]) * a,
                // out[x] = Σ_y conj(χ_x(y)) v[y]
                Direction::Inverse => basis.value(&elems[out], &elems[input]).conj() * a,
            };
        }
        acc * scale
    }))
}

/// `|χ_x⟩ = (1/√n) Σ_y conj(χ_x(y)) |y⟩`, which is `F_G |−x⟩`.
pub fn fourier_state(basis: &CharacterBasis, x: &GroupElement) -> Result<StateVector> {
    let g = basis.group();
    if !g.contains(x) {
        return Err(structural(format!("{x:?} is not an element of {g}")));
    }
    let n = g.order();
    let scale = 1.0 / (n as f64).sqrt();
    let amps = g.elements().map(|y| basis.value(x, &y).conj() * scale).collect();
    StateVector::from_amplitudes(n, Registers::One, amps)
}
