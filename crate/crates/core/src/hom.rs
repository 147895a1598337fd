//! Endomorphisms of the additive groups and their verification.

use std::fmt;

use rand::Rng;

use crate::character::{require_group, CharacterBasis};
use crate::error::{structural, Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::{GroupElement, GroupSpec};
use crate::matrix_ring::MatrixRingSpec;
use crate::Limits;

#[derive(Clone, PartialEq)]
pub enum HomKind {
    /// `ψ_s(y) = (s_1 y_1, …, s_k y_k)`.
    Diagonal(GroupElement),
    /// `x ↦ s·x` in `GF(q)`.
    FieldMul { field: FieldSpec, s: FieldElement },
    /// `X ↦ S·X`.
    MatrixLeft { ring: MatrixRingSpec, s: GroupElement },
    /// `X ↦ X·S`.
    MatrixRight { ring: MatrixRingSpec, s: GroupElement },
    /// Images listed by element index; additivity is not assumed.
    Table(Vec<usize>),
}

/// A map `G → G` in structured form.
#[derive(Clone, PartialEq)]
pub struct Homomorphism {
    domain: GroupSpec,
    kind: HomKind,
}

impl Homomorphism {
    pub fn diagonal(group: &GroupSpec, s: &GroupElement) -> Result<Self> {
        if !group.contains(s) {
            return Err(structural(format!("{s:?} is not an element of {group}")));
        }
        Ok(Homomorphism {
            domain: group.clone(),
            kind: HomKind::Diagonal(s.clone()),
        })
    }

    pub fn zero(group: &GroupSpec) -> Self {
        Homomorphism {
            domain: group.clone(),
            kind: HomKind::Diagonal(group.zero()),
        }
    }

    pub fn identity(group: &GroupSpec) -> Self {
        let ones = group.element(&vec![1; group.rank()]).expect("rank matches");
        Homomorphism {
            domain: group.clone(),
            kind: HomKind::Diagonal(ones),
        }
    }

    pub fn field_mul(field: &FieldSpec, s: &FieldElement) -> Result<Self> {
        if !field.contains(s) {
            return Err(structural(format!("{s:?} is not a GF({}) element", field.order())));
        }
        Ok(Homomorphism {
            domain: field.additive_group(),
            kind: HomKind::FieldMul {
                field: field.clone(),
                s: s.clone(),
            },
        })
    }

    pub fn matrix_left(ring: &MatrixRingSpec, s: &GroupElement) -> Result<Self> {
        Self::matrix(ring, s, true)
    }

    pub fn matrix_right(ring: &MatrixRingSpec, s: &GroupElement) -> Result<Self> {
        Self::matrix(ring, s, false)
    }

    fn matrix(ring: &MatrixRingSpec, s: &GroupElement, left: bool) -> Result<Self> {
        if !ring.additive_group().contains(s) {
            return Err(structural(format!("{s:?} is not a matrix of {ring}")));
        }
        let (ring, s) = (ring.clone(), s.clone());
        Ok(Homomorphism {
            domain: ring.additive_group().clone(),
            kind: if left {
                HomKind::MatrixLeft { ring, s }
            } else {
                HomKind::MatrixRight { ring, s }
            },
        })
    }

    /// An arbitrary map given by the image index of every element index.
    pub fn from_table(group: &GroupSpec, images: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if images.len() != n {
            return Err(structural(format!("table has {} entries, group order is {n}", images.len())));
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= n) {
            return Err(Error::Range { index: bad, size: n });
        }
        Ok(Homomorphism {
            domain: group.clone(),
            kind: HomKind::Table(images),
        })
    }

    pub fn from_fn<F>(group: &GroupSpec, f: F) -> Result<Self>
    where
        F: Fn(&GroupElement) -> GroupElement,
    {
        let images = group
            .elements()
            .map(|x| group.index_of(&f(&x)))
            .collect::<Result<Vec<_>>>()?;
        Homomorphism::from_table(group, images)
    }

    pub fn domain(&self) -> &GroupSpec {
        &self.domain
    }

    pub fn kind(&self) -> &HomKind {
        &self.kind
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.domain.contains(x) {
            return Err(structural(format!("{x:?} is not an element of {}", self.domain)));
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &GroupElement) -> GroupElement {
        match &self.kind {
            HomKind::Diagonal(s) => GroupElement::from_coords_unchecked(
                s.coords()
                    .iter()
                    .zip(x.coords())
                    .zip(self.domain.moduli())
                    .map(|((&a, &b), &m)| a * b % m)
                    .collect(),
            ),
            HomKind::FieldMul { field, s } => {
                GroupElement::from_coords_unchecked(field.mul_coeffs(s.coeffs(), x.coords()))
            }
            HomKind::MatrixLeft { ring, s } => ring.mul(s, x),
            HomKind::MatrixRight { ring, s } => ring.mul(x, s),
            HomKind::Table(images) => self
                .domain
                .element_of_unchecked(images[self.domain.index_of_unchecked(x)]),
        }
    }

    pub fn apply_index(&self, x: usize) -> usize {
        match &self.kind {
            HomKind::Table(images) => images[x],
            _ => {
                let e = self.domain.element_of_unchecked(x);
                self.domain.index_of_unchecked(&self.apply_unchecked(&e))
            }
        }
    }

    /// Image index of every element index.
    pub fn table(&self) -> Vec<usize> {
        match &self.kind {
            HomKind::Table(images) => images.clone(),
            _ => (0..self.domain.order()).map(|i| self.apply_index(i)).collect(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            HomKind::Diagonal(s) => format!("ψ_s on {} with s = {s}", self.domain),
            HomKind::FieldMul { field, s } => {
                format!("x ↦ ({})·x on GF({})", field.format_element(s), field.order())
            }
            HomKind::MatrixLeft { ring, s } => format!("X ↦ S·X on {ring}, S = {s}"),
            HomKind::MatrixRight { ring, s } => format!("X ↦ X·S on {ring}, S = {s}"),
            HomKind::Table(_) => format!("table map on {}", self.domain),
        }
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Outcome of an exhaustive or sampled check, with the first failing input.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> CheckOutcome<W> {
    fn pass() -> Self {
        CheckOutcome {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: W) -> Self {
        CheckOutcome {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Exhaustive additivity check `ψ(x + y) = ψ(x) + ψ(y)`, scanning `x` then `y`
/// in index order.
pub fn verify_homomorphism(
    psi: &Homomorphism,
    limits: &Limits,
) -> Result<CheckOutcome<(GroupElement, GroupElement)>> {
    let g = psi.domain();
    let n = g.order();
    limits.require_dense(n)?;
    let images = psi.table();
    let add = g.addition_table();
    for x in 0..n {
        for y in 0..n {
            if images[add[x * n + y]] != add[images[x] * n + images[y]] {
                return Ok(CheckOutcome::fail((
                    g.element_of_unchecked(x),
                    g.element_of_unchecked(y),
                )));
            }
        }
    }
    Ok(CheckOutcome::pass())
}

/// Additivity on `trials` random pairs, for groups beyond the dense cap.
pub fn verify_homomorphism_sampled<R: Rng + ?Sized>(
    psi: &Homomorphism,
    trials: usize,
    rng: &mut R,
) -> CheckOutcome<(GroupElement, GroupElement)> {
    let g = psi.domain();
    for _ in 0..trials {
        let x = g.element_of_unchecked(rng.gen_range(0..g.order()));
        let y = g.element_of_unchecked(rng.gen_range(0..g.order()));
        let lhs = psi.apply_unchecked(&g.add_unchecked(&x, &y));
        let rhs = g.add_unchecked(&psi.apply_unchecked(&x), &psi.apply_unchecked(&y));
        if lhs != rhs {
            return CheckOutcome::fail((x, y));
        }
    }
    CheckOutcome::pass()
}

/// `χ_y(ψ(z)) = χ_{ψ(y)}(z)` for all `y, z`, within the basis tolerance.
pub fn check_compatibility(
    basis: &CharacterBasis,
    psi: &Homomorphism,
    limits: &Limits,
) -> Result<CheckOutcome<(GroupElement, GroupElement)>> {
    match check_pair_compatibility(basis, psi, psi, limits)? {
        CheckOutcome {
            witness: Some(PairWitness::Character { y, z }),
            ..
        } => Ok(CheckOutcome::fail((y, z))),
        _ => Ok(CheckOutcome::pass()),
    }
}

/// Why a pair `(ψ, φ)` failed [`check_pair_compatibility`].
#[derive(Debug, Clone, PartialEq)]
pub enum PairWitness {
    /// `χ_y(ψ(z)) ≠ χ_{φ(y)}(z)`.
    Character { y: GroupElement, z: GroupElement },
    /// `ψ(φ(x)) ≠ φ(ψ(x))`.
    Commutation { x: GroupElement },
}

/// `χ_y(ψ(z)) = χ_{φ(y)}(z)` for all `y, z` and `ψ∘φ = φ∘ψ`.
pub fn check_pair_compatibility(
    basis: &CharacterBasis,
    psi: &Homomorphism,
    phi: &Homomorphism,
    limits: &Limits,
) -> Result<CheckOutcome<PairWitness>> {
    let g = basis.group();
    require_group(basis, psi.domain())?;
    require_group(basis, phi.domain())?;
    let n = g.order();
    limits.require_dense(n)?;
    let table = basis.phase_table();
    let psi_t = psi.table();
    let phi_t = phi.table();
    let tol = basis.tolerance();
    for y in 0..n {
        for z in 0..n {
            let lhs = basis.root(table[y * n + psi_t[z]] as u64);
            let rhs = basis.root(table[phi_t[y] * n + z] as u64);
            if (lhs - rhs).norm() > tol {
                return Ok(CheckOutcome::fail(PairWitness::Character {
                    y: g.element_of_unchecked(y),
                    z: g.element_of_unchecked(z),
                }));
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| psi_t[phi_t[x]] != phi_t[psi_t[x]]) {
        return Ok(CheckOutcome::fail(PairWitness::Commutation {
            x: g.element_of_unchecked(x),
        }));
    }
    Ok(CheckOutcome::pass())
}
