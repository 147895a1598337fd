use num_complex::Complex64;
use serde_json::Value;

use super::state::complex_json;
use crate::error::{structural, Result};
use crate::par;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn<F: Fn(usize, usize) -> Complex64>(dim: usize, f: F) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        DenseMatrix::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(structural(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let rows = par::map_collect(n, |r| {
            let mut out = vec![ZERO; n];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
            out
        });
        Ok(DenseMatrix {
            dim: n,
            data: rows.concat(),
        })
    }

    /// `self ⊗ other` with `other` as the fast index.
    pub fn kron(&self, other: &DenseMatrix) -> Self {
        let (a, b) = (self.dim, other.dim);
        DenseMatrix::from_fn(a * b, |r, c| {
            self.get(r / b, c / b) * other.get(r % b, c % b)
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Chebyshev distance between matrices.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, par::nan_max)
    }

    /// `‖U U^† − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim;
        par::max_f64(n, |r| {
            let row_r = self.row(r);
            (0..n)
                .map(|c| {
                    let dot: Complex64 = row_r
                        .iter()
                        .zip(self.row(c))
                        .map(|(a, b)| a * b.conj())
                        .sum();
                    let target = if r == c { ONE } else { ZERO };
                    (dot - target).norm()
                })
                .fold(0.0, par::nan_max)
        })
    }

    /// Rows as `[[re, im], …]` arrays.
    pub fn to_json(&self) -> Value {
        Value::Array((0..self.dim).map(|r| complex_json(self.row(r))).collect())
    }
}

/// `|i⟩ ↦ phase_i |target_i⟩` for a permutation `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexMap {
    targets: Vec<usize>,
    phases: Option<Vec<Complex64>>,
}

impl IndexMap {
    /// Validates that `targets` is a bijection and every phase has modulus 1.
    pub fn new(targets: Vec<usize>, phases: Option<Vec<Complex64>>) -> Result<Self> {
        let n = targets.len();
        let mut seen = vec![false; n];
        for &t in &targets {
            if t >= n || std::mem::replace(&mut seen[t], true) {
                return Err(structural("index map is not a bijection"));
            }
        }
        if let Some(ph) = &phases {
            if ph.len() != n {
                return Err(structural("one phase per basis index is required"));
            }
            if ph.iter().any(|p| (p.norm() - 1.0).abs() > 1e-12) {
                return Err(structural("index-map phases must have unit modulus"));
            }
        }
        Ok(IndexMap { targets, phases })
    }

    pub(crate) fn permutation_unchecked(targets: Vec<usize>) -> Self {
        IndexMap {
            targets,
            phases: None,
        }
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn phases(&self) -> Option<&[Complex64]> {
        self.phases.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; v.len()];
        match &self.phases {
            None => {
                for (&t, &a) in self.targets.iter().zip(v) {
                    out[t] = a;
                }
            }
            Some(ph) => {
                for ((&t, &a), &p) in self.targets.iter().zip(v).zip(ph) {
                    out[t] = a * p;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut inv = vec![0; n];
        let mut inv_phases = self.phases.as_ref().map(|_| vec![ONE; n]);
        for (i, &t) in self.targets.iter().enumerate() {
            inv[t] = i;
            if let (Some(out), Some(ph)) = (inv_phases.as_mut(), self.phases.as_ref()) {
                out[t] = ph[i].conj();
            }
        }
        IndexMap {
            targets: inv,
            phases: inv_phases,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim());
        for (i, &t) in self.targets.iter().enumerate() {
            let p = self.phases.as_ref().map_or(ONE, |ph| ph[i]);
            m.set(t, i, p);
        }
        m
    }
}

/// A linear operator in one of three storage forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Dense(DenseMatrix),
    IndexMap(IndexMap),
    /// Product applied left to right: the first factor acts first.
    Composite(Vec<Operator>),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Dense(m) => m.dim(),
            Operator::IndexMap(m) => m.dim(),
            Operator::Composite(parts) => parts.first().map_or(0, Operator::dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator::IndexMap(IndexMap::permutation_unchecked((0..dim).collect()))
    }

    /// Applies the operator to a raw amplitude vector of matching length.
    pub fn apply_slice(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(structural(format!(
                "operator of dimension {} applied to a vector of length {}",
                self.dim(),
                v.len()
            )));
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Operator::Dense(m) => m.apply(v),
            Operator::IndexMap(m) => m.apply(v),
            Operator::Composite(parts) => parts
                .iter()
                .fold(v.to_vec(), |acc, op| op.apply_unchecked(&acc)),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Operator::Dense(m) => Operator::Dense(m.adjoint()),
            Operator::IndexMap(m) => Operator::IndexMap(m.adjoint()),
            Operator::Composite(parts) => {
                Operator::Composite(parts.iter().rev().map(Operator::adjoint).collect())
            }
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::IndexMap(m) => m.to_dense(),
            Operator::Composite(parts) => parts.iter().fold(
                DenseMatrix::identity(self.dim()),
                |acc, op| op.to_dense().matmul(&acc).expect("composite factors share a dimension"),
            ),
        }
    }

    /// `‖U U^† − I‖_max`; zero for index maps, which are unitary by
    /// construction.
    pub fn unitarity_residual(&self) -> f64 {
        match self {
            Operator::Dense(m) => m.unitarity_residual(),
            Operator::IndexMap(_) => 0.0,
            Operator::Composite(parts) => {
                if parts.iter().all(|p| matches!(p, Operator::IndexMap(_))) {
                    0.0
                } else {
                    self.to_dense().unitarity_residual()
                }
            }
        }
    }
}
