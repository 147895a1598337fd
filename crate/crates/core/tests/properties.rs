use proptest::prelude::*;
use qftlab_core::group::is_prime;
use qftlab_core::hidden::{solve_classical_collision, BlackBox, QuantumSolver};
use qftlab_core::hom::{check_compatibility, verify_homomorphism};
use qftlab_core::quantum::{qft_apply, qft_matrix, tensor_apply, verify_inversion, Direction, Registers, StateVector};
use qftlab_core::{CharacterBasis, FieldSpec, GroupSpec, Homomorphism, Limits};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_group() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(2u64..7, 1..=3)
        .prop_filter("order at most 36", |m| m.iter().product::<u64>() <= 36)
        .prop_map(|m| GroupSpec::new(m).unwrap())
}

fn small_prime() -> impl Strategy<Value = u64> {
    (2u64..200).prop_filter("prime", |&p| is_prime(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qft_is_unitary_and_inverted_by_adjoint(g in small_group(), seed in any::<u64>()) {
        let basis = CharacterBasis::product(&g);
        let f = qft_matrix(&basis, &Limits::default()).unwrap();
        prop_assert!(f.unitarity_residual() <= 1e-12);
        let v = StateVector::random(g.order(), Registers::One, &mut ChaCha8Rng::seed_from_u64(seed));
        let there = qft_apply(&basis, v.amplitudes(), Direction::Forward).unwrap();
        let back = qft_apply(&basis, &there, Direction::Inverse).unwrap();
        let err = back.iter().zip(v.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn diagonal_maps_are_compatible_and_invert(g in small_group(), index in any::<prop::sample::Index>()) {
        let basis = CharacterBasis::product(&g);
        let s = g.element_of(index.index(g.order())).unwrap();
        let psi = Homomorphism::diagonal(&g, &s).unwrap();
        let limits = Limits::default();
        prop_assert!(verify_homomorphism(&psi, &limits).unwrap().holds);
        prop_assert!(check_compatibility(&basis, &psi, &limits).unwrap().holds);
        prop_assert!(verify_inversion(&basis, &psi, &limits).unwrap().residual <= 1e-9);
    }

    #[test]
    fn quantum_solver_is_exact(g in small_group(), seed in any::<u64>(), a in any::<prop::sample::Index>()) {
        let basis = CharacterBasis::product(&g);
        let solver = QuantumSolver::new(&basis, &Limits::default()).unwrap();
        let mut bb = BlackBox::random_diagonal(&g, seed);
        let a = g.element_of(a.index(g.order())).unwrap();
        let expected = bb.audit().psi.apply(&a).unwrap();
        let sol = solver.solve(&mut bb, &a).unwrap();
        prop_assert_eq!(sol.value, expected);
        prop_assert_eq!(bb.query_count(), 1);
        prop_assert!(sol.probability >= 1.0 - 1e-9);
    }

    #[test]
    fn quantum_answer_ignores_permutation(seed_a in any::<u64>(), seed_b in any::<u64>(), s in 0u64..7, a in 0u64..7) {
        let g = GroupSpec::cyclic(7).unwrap();
        let basis = CharacterBasis::product(&g);
        let psi = Homomorphism::diagonal(&g, &g.element(&[s]).unwrap()).unwrap();
        let a = g.element(&[a]).unwrap();
        let solver = QuantumSolver::new(&basis, &Limits::default()).unwrap();
        let one = solver.solve(&mut BlackBox::with_random_permutation(psi.clone(), seed_a), &a).unwrap();
        let two = solver.solve(&mut BlackBox::with_random_permutation(psi, seed_b), &a).unwrap();
        prop_assert_eq!(one.value, two.value);
    }

    #[test]
    fn collision_answers_are_sound(p in small_prime(), seed in any::<u64>(), budget in 0usize..40) {
        let g = GroupSpec::cyclic(p).unwrap();
        let mut bb = BlackBox::random_diagonal(&g, seed);
        let s = bb.audit().psi.apply_index(1) as u64;
        let sol = solve_classical_collision(&mut bb, budget).unwrap();
        prop_assert!(sol.queries as usize <= budget);
        prop_assert_eq!(sol.queries, bb.query_count());
        if let Some(v) = sol.psi_one {
            prop_assert_eq!(v, s);
        }
    }

    #[test]
    fn query_is_a_permutation_of_basis_states(g in small_group(), seed in any::<u64>()) {
        let n = g.order();
        let mut bb = BlackBox::random_diagonal(&g, seed);
        let mut hit = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                let out = bb.classical_query_index(x, y);
                prop_assert!(!hit[x * n + out]);
                hit[x * n + out] = true;
            }
        }
    }

    #[test]
    fn tensor_apply_preserves_norm(g in small_group(), seed in any::<u64>()) {
        let basis = CharacterBasis::product(&g);
        let f = qftlab_core::quantum::qft(&basis, &Limits::default()).unwrap();
        let n = g.order();
        let state = StateVector::random(n, Registers::Two, &mut ChaCha8Rng::seed_from_u64(seed));
        let out = tensor_apply(&f, &f.adjoint(), &state).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn field_multiplication_distributes(q in prop::sample::select(vec![4u64, 8, 9, 16, 25, 27]), seed in any::<u64>()) {
        let field = FieldSpec::builtin(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (field.random_element(&mut rng), field.random_element(&mut rng), field.random_element(&mut rng));
        prop_assert_eq!(
            field.mul(&a, &field.add(&b, &c)),
            field.add(&field.mul(&a, &b), &field.mul(&a, &c))
        );
        prop_assert_eq!(field.mul(&field.mul(&a, &b), &c), field.mul(&a, &field.mul(&b, &c)));
    }
}
