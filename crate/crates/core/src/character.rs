//! Character families `{χ_x : x ∈ G}` that index a Fourier basis by `G`.
//!
//! Every supported pairing is of the form `χ_x(y) = exp(2πi·r(x, y)/L)` with
//! an integer phase `r(x, y) ∈ [0, L)`. Phases are computed exactly in
//! integers and converted through a precomputed table of `L`-th roots of
//! unity, so no trigonometric call ever sees a large argument.

use std::collections::HashSet;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{structural, Error, Result};
use crate::field::{FieldSpec, LinearFunctional};
use crate::group::{GroupElement, GroupSpec};
use crate::matrix_ring::{BaseRing, MatrixRingSpec};
use crate::{par, Limits, DEFAULT_TOLERANCE};

#[derive(Clone, Debug, PartialEq)]
enum Pairing {
    /// `∏_j ω_j^{x_j y_j}` with `ω_j = e^{2πi/m_j}`; `scale[j] = L / m_j`.
    Product { scale: Vec<u64> },
    /// `e^{2πi φ(xy)/p}` on `(GF(q), +)`.
    Field {
        field: FieldSpec,
        functional: LinearFunctional,
    },
    /// `e^{2πi ((xy mod r) mod p)/p}` on `Z_r` with `p | r`.
    ResidueRing { modulus: u64, reduction: u64 },
    /// `∏_{i,j} χ_{y_ij}(z_ji)` built on a base-ring basis.
    Matrix {
        ring: MatrixRingSpec,
        base: Box<CharacterBasis>,
    },
}

/// A pairing `G × G → T` realizing `x ↦ χ_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterBasis {
    group: GroupSpec,
    pairing: Pairing,
    phase_modulus: u64,
    roots: Vec<Complex64>,
    tolerance: f64,
}

fn roots_of_unity(l: u64) -> Vec<Complex64> {
    (0..l)
        .map(|r| Complex64::from_polar(1.0, TAU * r as f64 / l as f64))
        .collect()
}

/// `exp(2πi·r/m)` with `r` reduced modulo `m` first.
pub fn root_of_unity(r: u64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (r % m) as f64 / m as f64)
}

impl CharacterBasis {
    fn build(group: GroupSpec, pairing: Pairing, phase_modulus: u64) -> Self {
        CharacterBasis {
            group,
            pairing,
            phase_modulus,
            roots: roots_of_unity(phase_modulus),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// The standard basis of a product of cyclic groups.
    pub fn product(group: &GroupSpec) -> Self {
        let l = group.exponent();
        let scale = group.moduli().iter().map(|&m| l / m).collect();
        CharacterBasis::build(group.clone(), Pairing::Product { scale }, l)
    }

    /// Characters `e^{2πi φ(xy)/p}` of `(GF(q), +)`.
    pub fn field(field: &FieldSpec, functional: LinearFunctional) -> Result<Self> {
        if functional.weights().len() != field.degree() {
            return Err(structural("functional does not match the field degree"));
        }
        Ok(CharacterBasis::build(
            field.additive_group(),
            Pairing::Field {
                field: field.clone(),
                functional,
            },
            field.characteristic(),
        ))
    }

    /// Field characters with the coefficient-extraction functional `φ(x) = x_0`.
    pub fn field_default(field: &FieldSpec) -> Self {
        CharacterBasis::field(field, LinearFunctional::constant_term(field))
            .expect("constant-term functional matches the field")
    }

    /// Ring-style pairing `e^{2πi ((xy mod r) mod p)/p}` on `Z_r`, `p | r`.
    ///
    /// For `p < r` the family is not injective in `x`, which makes it a probe
    /// for completeness failures on rings with zero divisors.
    pub fn residue_ring(modulus: u64, reduction: u64) -> Result<Self> {
        if reduction < 2 || modulus % reduction != 0 {
            return Err(structural(format!(
                "reduction {reduction} must be at least 2 and divide {modulus}"
            )));
        }
        Ok(CharacterBasis::build(
            GroupSpec::cyclic(modulus)?,
            Pairing::ResidueRing { modulus, reduction },
            reduction,
        ))
    }

    /// The basis `χ_Y(Z) = ∏ χ_{y_ij}(z_ji)` with the natural base-ring basis.
    pub fn matrix(ring: &MatrixRingSpec) -> Self {
        let base = match ring.base() {
            BaseRing::Cyclic(r) => CharacterBasis::product(&GroupSpec::cyclic(*r).expect("r ≥ 2")),
            BaseRing::Field(f) => CharacterBasis::field_default(f),
        };
        CharacterBasis::matrix_with_base(ring, base).expect("natural base basis fits")
    }

    pub fn matrix_with_base(ring: &MatrixRingSpec, base: CharacterBasis) -> Result<Self> {
        if base.group != ring.base().additive_group() {
            return Err(structural(format!(
                "base basis over {} does not match {}",
                base.group,
                ring.base()
            )));
        }
        let l = base.phase_modulus;
        Ok(CharacterBasis::build(
            ring.additive_group().clone(),
            Pairing::Matrix {
                ring: ring.clone(),
                base: Box::new(base),
            },
            l,
        ))
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `L` such that every character value is an `L`-th root of unity.
    pub fn phase_modulus(&self) -> u64 {
        self.phase_modulus
    }

    pub fn describe(&self) -> String {
        match &self.pairing {
            Pairing::Product { .. } => format!("product characters on {}", self.group),
            Pairing::Field { field, functional } => {
                format!("functional characters on GF({}) with {functional:?}", field.order())
            }
            Pairing::ResidueRing { modulus, reduction } => {
                format!("Z{modulus} characters through reduction mod {reduction}")
            }
            Pairing::Matrix { ring, .. } => format!("transposed-product characters on {ring}"),
        }
    }

    /// Integer phase `r` with `χ_x(y) = exp(2πi·r/L)`.
    pub fn phase(&self, x: &GroupElement, y: &GroupElement) -> u64 {
        pairing_phase(&self.pairing, self.phase_modulus, x.coords(), y.coords())
    }

    pub fn phase_by_index(&self, x: usize, y: usize) -> u64 {
        let ex = self.group.element_of_unchecked(x);
        let ey = self.group.element_of_unchecked(y);
        self.phase(&ex, &ey)
    }

    /// `χ_x(y)`, validating both arguments.
    pub fn character_value(&self, x: &GroupElement, y: &GroupElement) -> Result<Complex64> {
        for e in [x, y] {
            if !self.group.contains(e) {
                return Err(structural(format!("{e:?} is not an element of {}", self.group)));
            }
        }
        Ok(self.value(x, y))
    }

    pub fn value(&self, x: &GroupElement, y: &GroupElement) -> Complex64 {
        self.roots[self.phase(x, y) as usize]
    }

    pub fn value_by_index(&self, x: usize, y: usize) -> Complex64 {
        self.roots[self.phase_by_index(x, y) as usize]
    }

    pub(crate) fn root(&self, phase: u64) -> Complex64 {
        self.roots[phase as usize]
    }

    /// Row-major table of phases `r(x, y)` indexed by `x * n + y`.
    pub fn phase_table(&self) -> Vec<u32> {
        let n = self.order();
        let elems: Vec<_> = self.group.elements().collect();
        let rows = par::map_collect(n, |i| {
            elems
                .iter()
                .map(|y| self.phase(&elems[i], y) as u32)
                .collect::<Vec<_>>()
        });
        rows.concat()
    }
}

fn pairing_phase(pairing: &Pairing, l: u64, x: &[u64], y: &[u64]) -> u64 {
    match pairing {
        Pairing::Product { scale } => x
            .iter()
            .zip(y)
            .zip(scale)
            .fold(0, |acc, ((&a, &b), &s)| {
                let m = l / s;
                (acc + (a * b % m) * s) % l
            }),
        Pairing::Field { field, functional } => functional.eval(&field.mul_coeffs(x, y)),
        Pairing::ResidueRing { modulus, reduction } => (x[0] * y[0] % modulus) % reduction,
        Pairing::Matrix { ring, base } => {
            let d = ring.dim();
            let w = ring.base().width();
            let mut acc = 0;
            for i in 0..d {
                for j in 0..d {
                    let yij = &x[(i * d + j) * w..(i * d + j + 1) * w];
                    let zji = &y[(j * d + i) * w..(j * d + i + 1) * w];
                    acc = (acc + pairing_phase(&base.pairing, l, yij, zji)) % l;
                }
            }
            acc
        }
    }
}

/// `max_{i,j} |(1/n) Σ_x χ_i(x) conj(χ_j(x)) − δ_ij|`.
pub fn verify_orthogonality(basis: &CharacterBasis, limits: &Limits) -> Result<f64> {
    let n = basis.order();
    limits.require_dense(n)?;
    let table = basis.phase_table();
    let l = basis.phase_modulus();
    let inv_n = 1.0 / n as f64;
    Ok(par::max_f64(n, |i| {
        let row_i = &table[i * n..(i + 1) * n];
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let row_j = &table[j * n..(j + 1) * n];
            let sum: Complex64 = row_i
                .iter()
                .zip(row_j)
                .map(|(&a, &b)| basis.root((a as u64 + l - b as u64) % l))
                .sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = par::nan_max(worst, (sum * inv_n - target).norm());
        }
        worst
    }))
}

/// `max_{x,y,z} |χ_{x+y}(z) − χ_x(z) χ_y(z)|`, together with `max_z |χ_0(z) − 1|`.
pub fn verify_multiplicativity(basis: &CharacterBasis, limits: &Limits) -> Result<f64> {
    let n = basis.order();
    limits.require_dense(n)?;
    let table = basis.phase_table();
    let add = basis.group().addition_table();
    let one = Complex64::new(1.0, 0.0);
    let identity = (0..n)
        .map(|z| (basis.root(table[z] as u64) - one).norm())
        .fold(0.0, par::nan_max);
    let mixed = par::max_f64(n, |x| {
        let mut worst: f64 = 0.0;
        for y in 0..n {
            let s = add[x * n + y];
            for z in 0..n {
                let lhs = basis.root(table[s * n + z] as u64);
                let rhs = basis.root(table[x * n + z] as u64) * basis.root(table[y * n + z] as u64);
                worst = par::nan_max(worst, (lhs - rhs).norm());
            }
        }
        worst
    });
    Ok(par::nan_max(identity, mixed))
}

/// Whether `x ↦ χ_x` is injective, by comparing complete value rows.
pub fn verify_character_completeness(basis: &CharacterBasis, limits: &Limits) -> Result<bool> {
    let n = basis.order();
    limits.require_dense(n)?;
    let table = basis.phase_table();
    let mut seen = HashSet::with_capacity(n);
    Ok(table.chunks(n).all(|row| seen.insert(row)))
}

/// Checks that a basis really is over `group`, for callers pairing the two.
pub(crate) fn require_group(basis: &CharacterBasis, group: &GroupSpec) -> Result<()> {
    if basis.group() == group {
        Ok(())
    } else {
        Err(Error::Structural(format!(
            "basis over {} used with {}",
            basis.group(),
            group
        )))
    }
}
