//! The hidden homomorphism problem.
//!
//! A [`BlackBox`] hides a homomorphism `ψ` and a permutation `π` of `G` and
//! answers `(x, y) ↦ (x, π(y + ψ(x)))`, classically or on a two-register
//! state. [`solve_quantum`] recovers `ψ(a)` with exactly one query when `ψ`
//! is compatible with the chosen characters. [`solve_classical_collision`]
//! is the classical counterpart on `Z_p`: it can only learn `ψ(1)` by
//! provoking two equal outputs.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::{require_group, CharacterBasis};
use crate::error::{structural, Error, Result};
use crate::field::FieldSpec;
use crate::group::{inv_mod_prime, GroupElement, GroupSpec};
use crate::hom::Homomorphism;
use crate::quantum::ops::apply_registers_with;
use crate::quantum::{qft_apply, qft_matrix, Direction};
use crate::quantum::{measure_register, DenseMatrix, Register, Registers, StateVector, DETERMINISTIC_THRESHOLD};
use crate::Limits;

/// Largest order for which the solver keeps dense copies of `F_G` and `F_G^†`.
const SOLVER_DENSE_MAX: usize = 1024;

/// Oracle `(x, y) ↦ (x, π(y + ψ(x)))` that counts its queries.
///
/// The hidden data is only reachable through [`BlackBox::audit`], which
/// solvers never call.
#[derive(Debug, Clone)]
pub struct BlackBox {
    psi: Homomorphism,
    images: Vec<usize>,
    pi: Vec<usize>,
    queries: u64,
    seed: Option<u64>,
}

/// Read-only view of a box's hidden data, for checking answers.
#[derive(Debug, Clone, Copy)]
pub struct Audit<'a> {
    pub psi: &'a Homomorphism,
    pub pi: &'a [usize],
    pub seed: Option<u64>,
}

impl BlackBox {
    pub fn new(psi: Homomorphism, pi: Vec<usize>) -> Result<Self> {
        let n = psi.domain().order();
        if pi.len() != n {
            return Err(structural(format!(
                "permutation of length {} for a group of order {n}",
                pi.len()
            )));
        }
        let mut seen = vec![false; n];
        for &t in &pi {
            if t >= n {
                return Err(Error::Range { index: t, size: n });
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(structural(format!("permutation repeats {t}")));
            }
        }
        let images = psi.table();
        Ok(BlackBox {
            psi,
            images,
            pi,
            queries: 0,
            seed: None,
        })
    }

    /// `ψ` given, `π` drawn by a Fisher–Yates shuffle from `seed`.
    pub fn with_random_permutation(psi: Homomorphism, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::seeded(psi, &mut rng, seed)
    }

    /// `ψ_s` with `s` uniform in `G`, then a uniform `π`, all from `seed`.
    pub fn random_diagonal(group: &GroupSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = group.element_of_unchecked(rng.gen_range(0..group.order()));
        let psi = Homomorphism::diagonal(group, &s).expect("sampled element lies in the group");
        Self::seeded(psi, &mut rng, seed)
    }

    /// `x ↦ s·x` with `s` uniform in `GF(q)`, then a uniform `π`, all from `seed`.
    pub fn random_field(field: &FieldSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = field.random_element(&mut rng);
        let psi = Homomorphism::field_mul(field, &s).expect("sampled element lies in the field");
        Self::seeded(psi, &mut rng, seed)
    }

    fn seeded(psi: Homomorphism, rng: &mut ChaCha8Rng, seed: u64) -> Self {
        let mut pi: Vec<usize> = (0..psi.domain().order()).collect();
        pi.shuffle(rng);
        let mut bb = BlackBox::new(psi, pi).expect("a shuffle is a permutation");
        bb.seed = Some(seed);
        bb
    }

    pub fn group(&self) -> &GroupSpec {
        self.psi.domain()
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    pub fn audit(&self) -> Audit<'_> {
        Audit {
            psi: &self.psi,
            pi: &self.pi,
            seed: self.seed,
        }
    }

    fn target(&self, x: usize, y: usize) -> usize {
        self.pi[add_indices(self.group().moduli(), y, self.images[x])]
    }

    /// `(x, π(y + ψ(x)))`.
    pub fn classical_query(&mut self, x: &GroupElement, y: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        let g = self.psi.domain();
        let xi = g.index_of(x)?;
        let yi = g.index_of(y)?;
        let out = self.classical_query_index(xi, yi);
        Ok((x.clone(), self.group().element_of_unchecked(out)))
    }

    /// Index form of [`classical_query`](Self::classical_query); returns the second component.
    pub fn classical_query_index(&mut self, x: usize, y: usize) -> usize {
        self.queries += 1;
        self.target(x, y)
    }

    /// `(I ⊗ U_π) A_ψ` applied to a two-register state.
    pub fn quantum_query(&mut self, state: &StateVector) -> Result<StateVector> {
        let n = self.group().order();
        if state.registers() != Registers::Two || state.n() != n {
            return Err(structural(format!(
                "query on a group of order {n} needs a two-register state of dimension {}",
                n * n
            )));
        }
        self.queries += 1;
        let amps = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for x in 0..n {
            for y in 0..n {
                out[x * n + self.target(x, y)] = amps[x * n + y];
            }
        }
        StateVector::from_raw(n, Registers::Two, out)
    }
}

/// Mixed-radix sum of two element indices, last coordinate fastest.
fn add_indices(moduli: &[u64], a: usize, b: usize) -> usize {
    if let [m] = moduli {
        let m = *m as usize;
        return (a + b) % m;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for &m in moduli.iter().rev() {
        let m = m as usize;
        out += ((a % m + b % m) % m) * place;
        place *= m;
        a /= m;
        b /= m;
    }
    out
}

/// Result of [`solve_quantum`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumSolution {
    pub value: GroupElement,
    /// Probability of `value` when register 1 is measured.
    pub probability: f64,
    /// Queries spent by this call.
    pub queries: u64,
}

/// One-query solver with `F_G` precomputed for repeated use.
#[derive(Debug, Clone)]
pub struct QuantumSolver {
    basis: CharacterBasis,
    dense: Option<(DenseMatrix, DenseMatrix)>,
}

impl QuantumSolver {
    pub fn new(basis: &CharacterBasis, limits: &Limits) -> Result<Self> {
        let n = basis.order();
        let dense = if n <= SOLVER_DENSE_MAX.min(limits.dense_cap) {
            let f = qft_matrix(basis, limits)?;
            let f_dag = f.adjoint();
            Some((f, f_dag))
        } else {
            None
        };
        Ok(QuantumSolver {
            basis: basis.clone(),
            dense,
        })
    }

    pub fn basis(&self) -> &CharacterBasis {
        &self.basis
    }

    fn transform(&self, v: &[Complex64], direction: Direction) -> Vec<Complex64> {
        if v.iter().all(|a| a.re == 0.0 && a.im == 0.0) {
            return v.to_vec();
        }
        match (&self.dense, direction) {
            (Some((f, _)), Direction::Forward) => f.apply(v),
            (Some((_, f_dag)), Direction::Inverse) => f_dag.apply(v),
            (None, d) => qft_apply(&self.basis, v, d).expect("length matches the basis"),
        }
    }

    /// `(reg1, reg2)` transforms applied to a two-register state.
    fn transform_pair(&self, state: &StateVector, first: Direction, second: Direction) -> Result<StateVector> {
        let n = state.n();
        let out = apply_registers_with(
            |c| self.transform(c, first),
            |r| self.transform(r, second),
            n,
            state.amplitudes(),
        );
        let result = StateVector::from_raw(n, Registers::Two, out)?;
        result.check_norm()?;
        Ok(result)
    }

    /// Prepares `|0⟩|a⟩`, applies `F ⊗ F^†`, one query, `F^† ⊗ F`, and
    /// measures register 1, which must be deterministic.
    pub fn solve(&self, bb: &mut BlackBox, a: &GroupElement) -> Result<QuantumSolution> {
        let g = self.basis.group();
        require_group(&self.basis, bb.group())?;
        let n = g.order();
        let start = StateVector::basis_pair(n, 0, g.index_of(a)?)?;
        let before = bb.query_count();

        let prepared = self.transform_pair(&start, Direction::Forward, Direction::Inverse)?;
        let queried = bb.quantum_query(&prepared)?;
        let finished = self.transform_pair(&queried, Direction::Inverse, Direction::Forward)?;

        let dist = measure_register(&finished, Register::First)?;
        let Some(outcome) = dist.deterministic(DETERMINISTIC_THRESHOLD) else {
            let best = dist.probabilities().iter().cloned().fold(0.0, f64::max);
            return Err(Error::Integrity(format!(
                "register 1 is not deterministic (largest outcome probability {best}); \
                 the hidden map is not additive"
            )));
        };
        Ok(QuantumSolution {
            value: g.element_of_unchecked(outcome),
            probability: dist.probability(outcome),
            queries: bb.query_count() - before,
        })
    }
}

/// One-shot form of [`QuantumSolver::solve`].
pub fn solve_quantum(
    bb: &mut BlackBox,
    basis: &CharacterBasis,
    a: &GroupElement,
    limits: &Limits,
) -> Result<QuantumSolution> {
    QuantumSolver::new(basis, limits)?.solve(bb, a)
}

/// Result of [`solve_classical_collision`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalSolution {
    /// `ψ(1)` if two outputs collided.
    pub psi_one: Option<u64>,
    pub queries: u64,
}

/// Query plan for the collision solver on `Z_p`.
///
/// Query `k` is `(k, y_k)`. Before any collision the outputs carry no
/// information beyond "all distinct so far", so the whole sequence can be
/// fixed in advance. Each `y_k` is chosen so that the values of `ψ(1)` it
/// would expose, `(y_k − y_j)·(x_j − x_k)^{-1}` for earlier `j`, are
/// pairwise distinct and not already ruled out, as far as possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionPlan {
    p: u64,
    ys: Vec<u64>,
}

impl CollisionPlan {
    /// Plan for up to `budget` queries, at most `p` of them.
    pub fn new(p: u64, budget: usize) -> Result<Self> {
        let group = GroupSpec::cyclic(p)?;
        if !group.is_cyclic_prime() {
            return Err(Error::NotPrime(p));
        }
        let len = budget.min(p as usize);
        let pu = p as usize;
        let mut ys: Vec<u64> = Vec::with_capacity(len);
        let mut excluded = vec![false; pu];
        let mut stamp = vec![0u32; pu];
        let mut generation = 0u32;
        for k in 0..len as u64 {
            let inv: Vec<u64> = (0..k)
                .map(|j| inv_mod_prime((j + p - k) % p, p).expect("distinct x differ mod p"))
                .collect();
            let implied = |y: u64, j: usize| (y + p - ys[j]) % p * inv[j] % p;
            let mut best = (0u64, 0usize);
            for y in 0..p {
                generation += 1;
                let mut fresh = 0;
                for j in 0..k as usize {
                    let s = implied(y, j) as usize;
                    if !excluded[s] && stamp[s] != generation {
                        stamp[s] = generation;
                        fresh += 1;
                    }
                }
                if fresh > best.1 || y == 0 {
                    best = (y, fresh);
                }
                if fresh == k as usize {
                    break;
                }
            }
            let y = best.0;
            for j in 0..k as usize {
                excluded[implied(y, j) as usize] = true;
            }
            ys.push(y);
        }
        Ok(CollisionPlan { p, ys })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    /// `(x_k, y_k)` for `k = 0, 1, …`.
    pub fn queries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.ys.iter().enumerate().map(|(k, &y)| (k as u64, y))
    }

    /// Runs at most `budget` planned queries against `bb`.
    pub fn execute(&self, bb: &mut BlackBox, budget: usize) -> Result<ClassicalSolution> {
        let g = bb.group();
        if g.moduli() != [self.p] {
            return Err(structural(format!("plan for Z{} used on {g}", self.p)));
        }
        let before = bb.query_count();
        let mut seen: HashMap<usize, (u64, u64)> = HashMap::new();
        for (x, y) in self.queries().take(budget) {
            let out = bb.classical_query_index(x as usize, y as usize);
            if let Some(&(xj, yj)) = seen.get(&out) {
                return Ok(ClassicalSolution {
                    psi_one: psi_one_from_collision(self.p, (x, y), (xj, yj)),
                    queries: bb.query_count() - before,
                });
            }
            seen.insert(out, (x, y));
        }
        Ok(ClassicalSolution {
            psi_one: None,
            queries: bb.query_count() - before,
        })
    }
}

/// `ψ(1) = (y_i − y_j)·(x_j − x_i)^{-1} mod p` from two colliding queries.
///
/// Returns `None` when `x_i = x_j`, where the collision says nothing.
pub fn psi_one_from_collision(p: u64, (xi, yi): (u64, u64), (xj, yj): (u64, u64)) -> Option<u64> {
    let dy = (yi % p + p - yj % p) % p;
    let dx = (xj % p + p - xi % p) % p;
    inv_mod_prime(dx, p).map(|inv| (dy as u128 * inv as u128 % p as u128) as u64)
}

/// Classical solver on `Z_p`: up to `budget` distinct queries, answering
/// `ψ(1)` only if two outputs collide.
pub fn solve_classical_collision(bb: &mut BlackBox, budget: usize) -> Result<ClassicalSolution> {
    let g = bb.group();
    if g.rank() != 1 {
        return Err(Error::Precondition(format!(
            "the collision solver needs a cyclic group of prime order, not {g}"
        )));
    }
    let p = g.moduli()[0];
    CollisionPlan::new(p, budget)?.execute(bb, budget)
}

/// `⌈√(2n/3)⌉`, the least `m` with `3m² ≥ 2n`.
pub fn lower_bound_threshold(n: u64) -> u64 {
    let mut m = ((2.0 * n as f64 / 3.0).sqrt()) as u64;
    while 3 * m * m < 2 * n {
        m += 1;
    }
    while m > 0 && 3 * (m - 1) * (m - 1) >= 2 * n {
        m -= 1;
    }
    m
}

/// `m² / (2n − m²)`, or `None` once `m² ≥ 2n` and the bound says nothing.
pub fn collision_bound(n: u64, m: u64) -> Option<f64> {
    let m2 = (m * m) as f64;
    let denom = 2.0 * n as f64 - m2;
    (denom > 0.0).then(|| m2 / denom)
}

/// Success of guessing uniformly among the `n − m(m−1)/2` values of `ψ(1)`
/// left after `m` collision-free queries.
pub fn guess_success(n: u64, m: u64) -> f64 {
    let ruled_out = m * m.saturating_sub(1) / 2;
    if ruled_out + 1 >= n {
        1.0
    } else {
        1.0 / (n - ruled_out) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_ring::MatrixRingSpec;

    fn z(moduli: &[u64]) -> GroupSpec {
        GroupSpec::new(moduli.to_vec()).unwrap()
    }

    fn psi_s(g: &GroupSpec, s: &[u64]) -> Homomorphism {
        Homomorphism::diagonal(g, &g.element(s).unwrap()).unwrap()
    }

    #[test]
    fn classical_query_examples() {
        let g = z(&[5]);
        let mut bb = BlackBox::new(psi_s(&g, &[3]), (0..5).collect()).unwrap();
        let (x, y) = bb.classical_query(&g.element(&[1]).unwrap(), &g.element(&[1]).unwrap()).unwrap();
        assert_eq!((x.coords(), y.coords()), (&[1][..], &[4][..]));
        assert_eq!(bb.query_count(), 1);

        let mut trivial = BlackBox::new(Homomorphism::zero(&g), (0..5).collect()).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(trivial.classical_query_index(x, y), y);
            }
        }
        assert_eq!(trivial.query_count(), 25);
    }

    #[test]
    fn new_rejects_non_permutations() {
        let g = z(&[3]);
        assert!(BlackBox::new(Homomorphism::zero(&g), vec![0, 0, 1]).is_err());
        assert!(BlackBox::new(Homomorphism::zero(&g), vec![0, 1]).is_err());
        assert!(BlackBox::new(Homomorphism::zero(&g), vec![0, 1, 3]).is_err());
    }

    #[test]
    fn add_indices_matches_group_addition() {
        let g = z(&[4, 3, 2]);
        let add = g.addition_table();
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(add_indices(g.moduli(), a, b), add[a * n + b]);
            }
        }
    }

    #[test]
    fn quantum_query_on_basis_states_and_superpositions() {
        let g = z(&[4, 2]);
        let n = g.order();
        let bb_template = BlackBox::with_random_permutation(psi_s(&g, &[3, 1]), 9);
        for x in 0..n {
            for y in 0..n {
                let mut bb = bb_template.clone();
                let expected = bb.clone().classical_query_index(x, y);
                let out = bb.quantum_query(&StateVector::basis_pair(n, x, y).unwrap()).unwrap();
                assert_eq!(out.amplitude(x * n + expected), Complex64::new(1.0, 0.0));
                assert_eq!(bb.query_count(), 1);
            }
        }

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        amps[n + 2] = Complex64::new(h, 0.0);
        amps[5 * n + 7] = Complex64::new(0.0, h);
        let mut bb = bb_template.clone();
        let out = bb
            .quantum_query(&StateVector::from_amplitudes(n, Registers::Two, amps).unwrap())
            .unwrap();
        let t1 = bb_template.clone().classical_query_index(1, 2);
        let t2 = bb_template.clone().classical_query_index(5, 7);
        assert_eq!(out.amplitude(n + t1), Complex64::new(h, 0.0));
        assert_eq!(out.amplitude(5 * n + t2), Complex64::new(0.0, h));
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantum_query_identity_when_trivial() {
        let g = z(&[3, 3]);
        let n = g.order();
        let mut bb = BlackBox::new(Homomorphism::zero(&g), (0..n).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let state = StateVector::random(n, Registers::Two, &mut rng);
        let out = bb.quantum_query(&state).unwrap();
        assert!(out.max_distance(&state) == 0.0);
    }

    #[test]
    fn quantum_query_rejects_wrong_dimension() {
        let mut bb = BlackBox::random_diagonal(&z(&[5]), 1);
        let state = StateVector::basis_pair(4, 0, 0).unwrap();
        assert!(bb.quantum_query(&state).is_err());
        assert_eq!(bb.query_count(), 0);
    }

    #[test]
    fn quantum_solver_examples() {
        let limits = Limits::default();
        let g = z(&[5]);
        let basis = CharacterBasis::product(&g);
        for seed in 0..10 {
            let mut bb = BlackBox::with_random_permutation(psi_s(&g, &[3]), seed);
            let sol = solve_quantum(&mut bb, &basis, &g.element(&[1]).unwrap(), &limits).unwrap();
            assert_eq!(sol.value.coords(), &[3]);
            assert_eq!(sol.queries, 1);
            assert!(sol.probability >= DETERMINISTIC_THRESHOLD);
        }

        let g = z(&[4, 2]);
        let basis = CharacterBasis::product(&g);
        let mut bb = BlackBox::with_random_permutation(psi_s(&g, &[3, 1]), 77);
        let sol = solve_quantum(&mut bb, &basis, &g.element(&[1, 1]).unwrap(), &limits).unwrap();
        assert_eq!(sol.value.coords(), &[3, 1]);

        let g = z(&[7]);
        let basis = CharacterBasis::product(&g);
        for a in 0..7 {
            let mut bb = BlackBox::with_random_permutation(Homomorphism::zero(&g), a);
            let sol = solve_quantum(&mut bb, &basis, &g.element(&[a]).unwrap(), &limits).unwrap();
            assert_eq!(sol.value.coords(), &[0]);
        }
    }

    #[test]
    fn quantum_answer_does_not_depend_on_permutation() {
        let limits = Limits::default();
        let field = FieldSpec::builtin(8).unwrap();
        let basis = CharacterBasis::field_default(&field);
        let g = field.additive_group();
        let solver = QuantumSolver::new(&basis, &limits).unwrap();
        let psi = Homomorphism::field_mul(&field, &field.element(&[0, 1, 1]).unwrap()).unwrap();
        let a = g.element(&[1, 0, 1]).unwrap();
        let expected = psi.apply(&a).unwrap();
        for seed in 0..20 {
            let mut bb = BlackBox::with_random_permutation(psi.clone(), seed);
            assert_eq!(solver.solve(&mut bb, &a).unwrap().value, expected);
        }
    }

    #[test]
    fn functional_and_dense_solvers_agree() {
        let g = z(&[6, 2]);
        let basis = CharacterBasis::product(&g);
        let dense = QuantumSolver::new(&basis, &Limits::default()).unwrap();
        let functional = QuantumSolver::new(
            &basis,
            &Limits {
                dense_cap: 4,
                ..Limits::default()
            },
        )
        .unwrap();
        assert!(functional.dense.is_none());
        for seed in 0..5 {
            let bb = BlackBox::random_diagonal(&g, seed);
            let a = g.element_of(seed as usize * 5 % 12).unwrap();
            let expected = bb.audit().psi.apply(&a).unwrap();
            assert_eq!(dense.solve(&mut bb.clone(), &a).unwrap().value, expected);
            assert_eq!(functional.solve(&mut bb.clone(), &a).unwrap().value, expected);
        }
    }

    #[test]
    fn incompatible_additive_map_yields_its_adjoint() {
        // (a, b) ↦ (a, a) on Z2×Z2 is additive but not compatible; the circuit
        // then answers with the adjoint (a, b) ↦ (a + b, 0) instead.
        let g = z(&[2, 2]);
        let psi = Homomorphism::from_fn(&g, |x| g.element(&[x.coords()[0], x.coords()[0]]).unwrap()).unwrap();
        let basis = CharacterBasis::product(&g);
        let mut wrong = 0;
        for a in g.elements() {
            let mut bb = BlackBox::with_random_permutation(psi.clone(), 3);
            let sol = solve_quantum(&mut bb, &basis, &a, &Limits::default()).unwrap();
            let c = a.coords();
            assert_eq!(sol.value.coords(), &[(c[0] + c[1]) % 2, 0]);
            wrong += usize::from(sol.value != psi.apply(&a).unwrap());
        }
        assert!(wrong > 0);
    }

    #[test]
    fn non_additive_map_is_an_integrity_error() {
        let g = z(&[5]);
        let psi = Homomorphism::from_table(&g, vec![0, 1, 4, 4, 2]).unwrap();
        let basis = CharacterBasis::product(&g);
        let mut bb = BlackBox::with_random_permutation(psi, 1);
        let err = solve_quantum(&mut bb, &basis, &g.element(&[1]).unwrap(), &Limits::default());
        assert!(matches!(err, Err(Error::Integrity(_))));
    }

    #[test]
    fn matrix_ring_box_with_left_multiplication() {
        // Left multiplication is compatible only up to transposition, so the
        // solver is exercised here on the zero map and the identity.
        let ring: MatrixRingSpec = "M2(Z2)".parse().unwrap();
        let basis = CharacterBasis::matrix(&ring);
        let g = ring.additive_group();
        let a = g.element(&[1, 0, 1, 1]).unwrap();
        for psi in [Homomorphism::zero(&g), Homomorphism::identity(&g)] {
            let mut bb = BlackBox::with_random_permutation(psi.clone(), 5);
            let sol = solve_quantum(&mut bb, &basis, &a, &Limits::default()).unwrap();
            assert_eq!(sol.value, psi.apply(&a).unwrap());
        }
    }

    #[test]
    fn collision_arithmetic() {
        // (0,0) and (1,t) colliding forces ψ(1) = −t.
        for t in 0..11 {
            assert_eq!(psi_one_from_collision(11, (1, t), (0, 0)), Some((11 - t) % 11));
            assert_eq!(psi_one_from_collision(11, (0, 0), (1, t)), Some((11 - t) % 11));
        }
        assert_eq!(psi_one_from_collision(11, (3, 1), (3, 4)), None);
    }

    #[test]
    fn collision_answers_match_audit() {
        let g = z(&[7]);
        for seed in 0..200 {
            let mut bb = BlackBox::with_random_permutation(psi_s(&g, &[3]), seed);
            let sol = solve_classical_collision(&mut bb, 7).unwrap();
            assert!(sol.queries <= 7);
            assert_eq!(sol.psi_one, Some(3));
        }
        for seed in 0..200 {
            let mut bb = BlackBox::random_diagonal(&z(&[31]), seed);
            let s = bb.audit().psi.apply(&GroupElement::from_coords_unchecked(vec![1])).unwrap();
            let sol = solve_classical_collision(&mut bb, 12).unwrap();
            assert_eq!(bb.query_count(), sol.queries);
            if let Some(v) = sol.psi_one {
                assert_eq!(v, s.coords()[0]);
            }
        }
    }

    #[test]
    fn collision_budget_edges() {
        let mut bb = BlackBox::random_diagonal(&z(&[13]), 2);
        assert_eq!(
            solve_classical_collision(&mut bb, 1).unwrap(),
            ClassicalSolution { psi_one: None, queries: 1 }
        );
        assert_eq!(solve_classical_collision(&mut bb, 0).unwrap().queries, 0);
        let mut bb = BlackBox::random_diagonal(&z(&[12]), 2);
        assert!(matches!(solve_classical_collision(&mut bb, 5), Err(Error::NotPrime(12))));
        let mut bb = BlackBox::random_diagonal(&z(&[3, 3]), 2);
        assert!(matches!(solve_classical_collision(&mut bb, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn plan_queries_are_distinct() {
        let plan = CollisionPlan::new(31, 31).unwrap();
        let mut qs: Vec<_> = plan.queries().collect();
        qs.dedup();
        assert_eq!(qs.len(), 31);
        assert!(qs.iter().enumerate().all(|(k, &(x, _))| x == k as u64));
    }

    /// Exact first-collision distribution of the plan, by counting hidden `s`.
    fn exposed_by_prefix(plan: &CollisionPlan, m: usize) -> usize {
        let p = plan.p();
        let qs: Vec<_> = plan.queries().take(m).collect();
        (0..p)
            .filter(|&s| {
                let mut outs: Vec<u64> = qs.iter().map(|&(x, y)| (y + s * x) % p).collect();
                outs.sort_unstable();
                outs.windows(2).any(|w| w[0] == w[1])
            })
            .count()
    }

    #[test]
    fn plan_exposes_every_pair_while_it_can() {
        // With no wasted pairs, m queries expose m(m−1)/2 values of s.
        let plan = CollisionPlan::new(101, 12).unwrap();
        for m in 0..=8 {
            assert_eq!(exposed_by_prefix(&plan, m), m * m.saturating_sub(1) / 2);
        }
        assert_eq!(exposed_by_prefix(&CollisionPlan::new(13, 13).unwrap(), 13), 13);
    }

    #[test]
    fn plan_median_first_collision() {
        // Smallest m whose prefix exposes at least half of the possible s.
        let medians: Vec<usize> = [31u64, 61, 127, 257]
            .iter()
            .map(|&p| {
                let plan = CollisionPlan::new(p, 40).unwrap();
                (0..=40).find(|&m| 2 * exposed_by_prefix(&plan, m) >= p as usize).unwrap()
            })
            .collect();
        assert_eq!(medians, [7, 9, 12, 17]);
    }

    #[test]
    fn threshold_values() {
        assert_eq!(lower_bound_threshold(7), 3);
        assert_eq!(lower_bound_threshold(101), 9);
        assert_eq!(lower_bound_threshold(2), 2);
        for n in 2..2000u64 {
            let expected = (2.0 * n as f64 / 3.0).sqrt().ceil() as u64;
            assert_eq!(lower_bound_threshold(n), expected, "n = {n}");
        }
    }

    #[test]
    fn bound_values() {
        assert!((collision_bound(101, 5).unwrap() - 25.0 / 177.0).abs() < 1e-15);
        assert_eq!(collision_bound(8, 4), None);
        assert_eq!(collision_bound(31, 0), Some(0.0));
        assert_eq!(guess_success(31, 0), 1.0 / 31.0);
        assert_eq!(guess_success(31, 5), 1.0 / 21.0);
        assert_eq!(guess_success(7, 5), 1.0);
    }
}
