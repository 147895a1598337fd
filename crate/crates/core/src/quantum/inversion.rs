//! Machine checks of `(F^† ⊗ F) A_ψ (F ⊗ F^†) = B_φ`.
//!
//! The fast path computes every entry of the left-hand side exactly as a
//! dense `n² × n²` product would, but uses the block form
//! `A_ψ = Σ_z |z⟩⟨z| ⊗ P_{ψ(z)}`, which turns the conjugated operator into
//! `Σ_t (F^† D_t F) ⊗ (F P_t F^†)` with `D_t` the projector onto `ψ^{-1}(t)`.
//! The entries are streamed row block by row block and never stored.

use num_complex::Complex64;
use serde::Serialize;

use super::operator::DenseMatrix;
use super::ops::{a_psi, b_psi};
use super::qft::qft_matrix;
use crate::character::{require_group, CharacterBasis};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::hom::{check_compatibility, check_pair_compatibility, verify_homomorphism, Homomorphism, PairWitness};
use crate::{par, Limits};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    /// `‖(F^†⊗F) A_ψ (F⊗F^†) − B_φ‖_max`.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Dimension of one register.
    pub n: usize,
}

impl InversionReport {
    fn new(residual: f64, tolerance: f64, n: usize) -> Self {
        InversionReport {
            residual,
            tolerance,
            passed: residual <= tolerance,
            n,
        }
    }
}

/// Checks the inversion identity at a compatible `ψ`.
///
/// An incompatible `ψ` is reported as [`Error::Precondition`], never as a
/// failed identity.
pub fn verify_inversion(basis: &CharacterBasis, psi: &Homomorphism, limits: &Limits) -> Result<InversionReport> {
    require_group(basis, psi.domain())?;
    let additive = verify_homomorphism(psi, limits)?;
    if let Some((x, y)) = additive.witness {
        return Err(Error::Precondition(format!(
            "{} is not additive at ({x:?}, {y:?})",
            psi.describe()
        )));
    }
    let compat = check_compatibility(basis, psi, limits)?;
    if let Some((y, z)) = compat.witness {
        return Err(Error::Precondition(format!(
            "{} is not compatible with the basis: χ_y(ψ(z)) ≠ χ_ψ(y)(z) at y = {y:?}, z = {z:?}",
            psi.describe()
        )));
    }
    let residual = inversion_residual(basis, psi, psi, limits)?;
    Ok(InversionReport::new(residual, limits.tolerance, basis.order()))
}

/// Checks `(F^†⊗F) A_ψ (F⊗F^†) = B_φ` for a compatible commuting pair.
pub fn verify_inversion_pair(
    basis: &CharacterBasis,
    psi: &Homomorphism,
    phi: &Homomorphism,
    limits: &Limits,
) -> Result<InversionReport> {
    require_group(basis, psi.domain())?;
    require_group(basis, phi.domain())?;
    for map in [psi, phi] {
        if let Some((x, y)) = verify_homomorphism(map, limits)?.witness {
            return Err(Error::Precondition(format!(
                "{} is not additive at ({x:?}, {y:?})",
                map.describe()
            )));
        }
    }
    match check_pair_compatibility(basis, psi, phi, limits)?.witness {
        None => {}
        Some(PairWitness::Character { y, z }) => {
            return Err(Error::Precondition(format!(
                "pair is not compatible: χ_y(ψ(z)) ≠ χ_φ(y)(z) at y = {y:?}, z = {z:?}"
            )))
        }
        Some(PairWitness::Commutation { x }) => {
            return Err(Error::Precondition(format!(
                "ψ and φ do not commute at {x:?}"
            )))
        }
    }
    let residual = inversion_residual(basis, psi, phi, limits)?;
    Ok(InversionReport::new(residual, limits.tolerance, basis.order()))
}

/// Raw residual `‖(F^†⊗F) A_ψ (F⊗F^†) − B_φ‖_max` with no precondition checks.
pub fn inversion_residual(
    basis: &CharacterBasis,
    psi: &Homomorphism,
    phi: &Homomorphism,
    limits: &Limits,
) -> Result<f64> {
    require_group(basis, psi.domain())?;
    require_group(basis, phi.domain())?;
    let g = basis.group();
    let n = g.order();
    let f = qft_matrix(basis, limits)?;
    let psi_t = psi.table();
    let phi_t = phi.table();
    let add = g.addition_table();
    let neg = g.negation_table();

    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (z, &t) in psi_t.iter().enumerate() {
        preimages[t].push(z);
    }
    let image: Vec<usize> = (0..n).filter(|&t| !preimages[t].is_empty()).collect();
    let nn = n * n;

    let tcount = image.len();

    // G[k][w·n + y] = (F P_t F^†)[w][y] = Σ_v F[w][v] conj(F[y][v − t]) for t = image[k].
    let g_rows: Vec<Vec<Complex64>> = par::map_collect(tcount, |k| {
        let neg_t = neg[image[k]];
        let mut row = vec![Complex64::new(0.0, 0.0); nn];
        for w in 0..n {
            let fw = f.row(w);
            for y in 0..n {
                let fy = f.row(y);
                let mut acc = Complex64::new(0.0, 0.0);
                for (v, &a) in fw.iter().enumerate() {
                    acc += a * fy[add[v * n + neg_t]].conj();
                }
                row[w * n + y] = acc;
            }
        }
        row
    });
    let g_mat: Vec<Complex64> = g_rows.concat();

    // H[u·n + x][k] = (F^† D_t F)[u][x] = Σ_{z ∈ ψ⁻¹(t)} conj(F[z][u]) F[z][x].
    let mut h_mat = vec![Complex64::new(0.0, 0.0); nn * tcount];
    for (k, &t) in image.iter().enumerate() {
        for &z in &preimages[t] {
            let fz = f.row(z);
            for u in 0..n {
                let cu = fz[u].conj();
                for x in 0..n {
                    h_mat[(u * n + x) * tcount + k] += cu * fz[x];
                }
            }
        }
    }

    // Entry ((u, w), (x, y)) of the product is Σ_k H[u·n + x][k] · G[k][w·n + y].
    // B_φ has a single 1 per column, at u = x + φ(y), w = y.
    let blocks = nn.div_ceil(ROW_BLOCK);
    let worst = par::max_f64(blocks, |blk| {
        let first = blk * ROW_BLOCK;
        let rows = ROW_BLOCK.min(nn - first);
        let mut block = vec![Complex64::new(0.0, 0.0); rows * nn];
        complex_gemm(rows, tcount, nn, &h_mat[first * tcount..(first + rows) * tcount], &g_mat, &mut block);
        let mut worst: f64 = 0.0;
        for r in 0..rows {
            let (u, x) = ((first + r) / n, (first + r) % n);
            let out = &block[r * nn..(r + 1) * nn];
            for (i, &v) in out.iter().enumerate() {
                let (w, y) = (i / n, i % n);
                let expected = if w == y && add[x * n + phi_t[y]] == u { 1.0 } else { 0.0 };
                worst = par::nan_max(worst, (v - expected).norm());
            }
        }
        worst
    });
    Ok(worst)
}

const ROW_BLOCK: usize = 32;

/// `c = a · b` for row-major `a: m×k`, `b: k×n`, `c: m×n`.
fn complex_gemm(m: usize, k: usize, n: usize, a: &[Complex64], b: &[Complex64], c: &mut [Complex64]) {
    assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
    // SAFETY: Complex64 is #[repr(C)] { re, im }, layout-identical to [f64; 2],
    // and the asserted lengths cover every index the strides reach.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr().cast::<[f64; 2]>(),
            k as isize,
            1,
            b.as_ptr().cast::<[f64; 2]>(),
            n as isize,
            1,
            [0.0, 0.0],
            c.as_mut_ptr().cast::<[f64; 2]>(),
            n as isize,
            1,
        );
    }
}

/// The same residual from fully materialized `n² × n²` matrices; only for
/// small groups, as an independent cross-check of [`inversion_residual`].
pub fn inversion_residual_dense(
    basis: &CharacterBasis,
    psi: &Homomorphism,
    phi: &Homomorphism,
    max_two_register_dim: usize,
) -> Result<f64> {
    require_group(basis, psi.domain())?;
    require_group(basis, phi.domain())?;
    let n = basis.order();
    if n * n > max_two_register_dim {
        return Err(Error::CapExceeded {
            order: n * n,
            cap: max_two_register_dim,
        });
    }
    let f = qft_matrix(basis, &Limits::default())?;
    let fd = f.adjoint();
    let left = fd.kron(&f);
    let right = f.kron(&fd);
    let a: DenseMatrix = a_psi(psi).to_dense();
    let b: DenseMatrix = b_psi(phi).to_dense();
    let lhs = left.matmul(&a.matmul(&right)?)?;
    Ok(lhs.max_abs_diff(&b))
}

/// Deviations at each intermediate state of the inversion argument applied
/// to one basis state `|x⟩|y⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    /// `(F⊗F^†)|x⟩|y⟩` vs `(1/√n) Σ_z χ_x(z)|z⟩ ⊗ |F_{−y}⟩`.
    pub prepare: f64,
    /// after `A_ψ`, vs `(1/√n) Σ_z χ_x(z) χ_y(ψ(z)) |z⟩ ⊗ |F_{−y}⟩`.
    pub eigenphase: f64,
    /// the same state vs `|F_{x+φ(y)}⟩ ⊗ |F_{−y}⟩`.
    pub compatibility: f64,
    /// after `(F^†⊗F)`, vs `|x + φ(y)⟩|y⟩`.
    pub finish: f64,
}

impl ChainReport {
    pub fn max(&self) -> f64 {
        [self.prepare, self.eigenphase, self.compatibility, self.finish]
            .into_iter()
            .fold(0.0, par::nan_max)
    }
}

pub fn inversion_chain(
    basis: &CharacterBasis,
    psi: &Homomorphism,
    phi: &Homomorphism,
    x: &GroupElement,
    y: &GroupElement,
    limits: &Limits,
) -> Result<ChainReport> {
    require_group(basis, psi.domain())?;
    require_group(basis, phi.domain())?;
    let g = basis.group();
    let xi = g.index_of(x)?;
    let yi = g.index_of(y)?;
    let n = g.order();
    let f = qft_matrix(basis, limits)?;
    let fd = f.adjoint();
    let column = |m: &DenseMatrix, c: usize| -> Vec<Complex64> { (0..n).map(|r| m.get(r, c)).collect() };
    let kron = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        a.iter().flat_map(|&p| b.iter().map(move |&q| p * q)).collect()
    };
    let dist = super::state::max_distance;
    let scale = 1.0 / (n as f64).sqrt();

    let f_neg_y = column(&f, g.index_of_unchecked(&g.neg_unchecked(y)));
    let s1 = kron(&column(&f, xi), &column(&fd, yi));
    let e1: Vec<Complex64> = kron(
        &g.elements().map(|z| basis.value(x, &z) * scale).collect::<Vec<_>>(),
        &f_neg_y,
    );
    let s2 = a_psi(psi).apply_unchecked(&s1);
    let e2 = kron(
        &g.elements()
            .map(|z| basis.value(x, &z) * basis.value(y, &psi.apply_unchecked(&z)) * scale)
            .collect::<Vec<_>>(),
        &f_neg_y,
    );
    let target = g.add_unchecked(x, &phi.apply_unchecked(y));
    let ti = g.index_of_unchecked(&target);
    let e3 = kron(&column(&f, ti), &f_neg_y);
    let s4 = super::ops::apply_registers(
        &super::operator::Operator::Dense(fd.clone()),
        &super::operator::Operator::Dense(f.clone()),
        n,
        &s2,
    );
    let mut e4 = vec![Complex64::new(0.0, 0.0); n * n];
    e4[ti * n + yi] = Complex64::new(1.0, 0.0);
    Ok(ChainReport {
        prepare: dist(&s1, &e1),
        eigenphase: dist(&s2, &e2),
        compatibility: dist(&s2, &e3),
        finish: dist(&s4, &e4),
    })
}
