//! Property tests for the algebraic invariants: tensor structure,
//! spectral decompositions, smearing identities, duality, and the
//! broadcast-preservation laws. Quantum objects are generated through
//! the crate's seeded generators, driven by proptest-supplied seeds.

use proptest::prelude::*;

use layerscope::channel::{BroadcastingChannel, Channel};
use layerscope::compatibility::degree_of_compatibility;
use layerscope::instrument::{nondisturbance_by_luders, Instrument};
use layerscope::observable::{mutually_commuting, validate_povm, JointObservable, Observable};
use layerscope::operator::{
    commutator, jacobi_hermitian, ComplexMatrix, Factor, HermitianOperator,
};
use layerscope::random::{
    random_commuting_qubit_pair, random_diagonal_observable, random_hermitian,
    random_observable, random_state, random_unitary, seeded_rng,
};
use num_complex::Complex64;

fn entries(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim)
}

fn matrix_from(dim: usize, raw: &[(f64, f64)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let (re, im) = raw[i * dim + j];
            m.set(i, j, Complex64::new(re, im));
        }
    }
    m
}

proptest! {
    #[test]
    fn tensor_is_associative_and_bilinear(
        a in entries(2), b in entries(2), c in entries(3), alpha in -2.0f64..2.0
    ) {
        let a = matrix_from(2, &a);
        let b = matrix_from(2, &b);
        let c = matrix_from(3, &c);

        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);

        let scaled = a.scale_re(alpha).tensor(&b);
        let factored = a.tensor(&b).scale_re(alpha);
        prop_assert!(scaled.max_abs_diff(&factored) <= 1e-12);

        let summed = (&a + &b).tensor(&c);
        let split = &a.tensor(&c) + &b.tensor(&c);
        prop_assert!(summed.max_abs_diff(&split) <= 1e-12);
    }

    #[test]
    fn partial_trace_inverts_tensor(a in entries(2), b in entries(3)) {
        let a = matrix_from(2, &a);
        let b = matrix_from(3, &b);
        let product = a.tensor(&b);
        let back = product.partial_trace(2, 3, Factor::A).unwrap();
        prop_assert!(back.max_abs_diff(&a.scale(b.trace())) <= 1e-12);
        let back_b = product.partial_trace(2, 3, Factor::B).unwrap();
        prop_assert!(back_b.max_abs_diff(&b.scale(a.trace())) <= 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 2usize..=6) {
        let h = random_hermitian(&mut seeded_rng(seed), dim, 1.0);
        let eig = jacobi_hermitian(h.matrix());
        let rebuilt = eig.reconstruct_with(|l| l);
        prop_assert!(rebuilt.max_abs_diff(h.matrix()) <= 1e-10);
        let gram = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn commutator_is_antisymmetric(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = random_hermitian(&mut rng, 3, 1.0);
        let b = random_hermitian(&mut rng, 3, 1.0);
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert!((&ab + &ba).max_abs() <= 1e-14);
    }

    #[test]
    fn smearing_composes_multiplicatively(
        seed in any::<u64>(), p in 0.05f64..1.0, q in 0.05f64..1.0
    ) {
        let a = random_observable(&mut seeded_rng(seed), 2, 3);
        let twice = a.unsharp(p).unwrap().unsharp(q).unwrap();
        let once = a.unsharp(p * q).unwrap();
        for (e, f) in twice.effects().iter().zip(once.effects()) {
            prop_assert!(e.matrix().max_abs_diff(f.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn smearing_preserves_commutation_structure(
        seed in any::<u64>(), p in 0.1f64..1.0, q in 0.1f64..1.0
    ) {
        let mut rng = seeded_rng(seed);
        let (a, b, _) = random_commuting_qubit_pair(&mut rng, 2, 2);
        prop_assert!(mutually_commuting(
            &a.unsharp(p).unwrap(), &b.unsharp(q).unwrap(), 1e-10
        ).unwrap());

        // Conversely the commutators scale by exactly p·q.
        let x = Observable::qubit_binary([1.0, 0.0, 0.0]).unwrap();
        let z = Observable::qubit_binary([0.0, 0.0, 1.0]).unwrap();
        let raw = commutator(x.effect(0), z.effect(0)).unwrap();
        let smeared = commutator(
            x.unsharp(p).unwrap().effect(0),
            z.unsharp(q).unwrap().effect(0),
        )
        .unwrap();
        prop_assert!(smeared.max_abs_diff(&raw.scale_re(p * q)) <= 1e-12);
    }

    #[test]
    fn margins_of_random_joints_are_povms(seed in any::<u64>()) {
        let base = random_observable(&mut seeded_rng(seed), 2, 6);
        let joint = JointObservable::new(base, 2, 3).unwrap();
        let (a, b) = joint.margins();
        prop_assert!(validate_povm(&a, 1e-9).is_valid);
        prop_assert!(validate_povm(&b, 1e-9).is_valid);
    }

    #[test]
    fn trivial_observables_commute_with_everything(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let t = Observable::trivial(2, &[0.2, 0.5, 0.3]).unwrap();
        let any_obs = random_observable(&mut rng, 2, 3);
        prop_assert!(t.is_commutative(1e-12));
        prop_assert!(mutually_commuting(&t, &any_obs, 1e-12).unwrap());
    }

    #[test]
    fn duality_identity_holds_for_random_channels(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let ch = layerscope::random::random_channel(&mut rng, 2, 3, 2);
        let rho = random_state(&mut rng, 2);
        let effect = random_hermitian(&mut rng, 3, 1.0);
        let lhs = ch.apply(&rho).unwrap().matrix().hs_inner(effect.matrix()).re;
        let rhs = rho.matrix().hs_inner(ch.dual_apply(&effect).unwrap().matrix()).re;
        prop_assert!((lhs - rhs).abs() <= 1e-10);
        // Dual unitality.
        let unital = ch.dual_apply(&HermitianOperator::identity(3)).unwrap();
        prop_assert!(unital.matrix().max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-10);
    }

    #[test]
    fn broadcasting_survives_nondisturbing_precomposition(
        seed in any::<u64>(), weight in 0.0f64..=1.0
    ) {
        let mut rng = seeded_rng(seed);
        let basis = random_unitary(&mut rng, 2);
        let a = random_diagonal_observable(&mut rng, &basis, 2, 0.0);
        let copier = BroadcastingChannel::copier_from_basis(&basis).unwrap();
        let theta = Channel::identity(2)
            .mix(&Channel::dephasing_in_basis(&basis).unwrap(), weight)
            .unwrap();
        prop_assert!(theta.is_nondisturbing_for(&a, 1e-10).unwrap());
        let composed = copier.after(&theta).unwrap();
        prop_assert!(composed.broadcast_residual(&a).unwrap() <= 1e-10);
        // Smearing equivalence at the channel level.
        prop_assert!(composed.broadcast_residual(&a.unsharp(0.4).unwrap()).unwrap() <= 1e-10);
    }

    #[test]
    fn luders_route_matches_mutual_commutation_for_commutative_qubit_pairs(
        seed in any::<u64>()
    ) {
        let mut rng = seeded_rng(seed);
        // Commutative pair in a common basis: both orders nondisturb.
        let (a, b, _) = random_commuting_qubit_pair(&mut rng, 2, 2);
        prop_assert!(nondisturbance_by_luders(&a, &b, 1e-10).unwrap());
        prop_assert!(nondisturbance_by_luders(&b, &a, 1e-10).unwrap());

        // Noncommuting sharp pair: the Lüders route must fail.
        let (c, d) = layerscope::random::random_noncommuting_qubit_pair(&mut rng);
        prop_assert!(!nondisturbance_by_luders(&c, &d, 1e-6).unwrap());
    }

    #[test]
    fn coarse_graining_keeps_the_total_map(seed in any::<u64>()) {
        let a = random_observable(&mut seeded_rng(seed), 2, 4);
        let inst = Instrument::luders(&a).unwrap();
        let grained = inst.coarse_grain(&[vec![0, 2], vec![1, 3]]).unwrap();
        let before = inst.total_channel().unwrap();
        let after = grained.total_channel().unwrap();
        prop_assert!(
            before.choi().matrix().max_abs_diff(after.choi().matrix()) <= 1e-12
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn degree_is_unitarily_invariant(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let u = random_unitary(&mut rng, 2);
        let x = Observable::qubit_binary([1.0, 0.0, 0.0]).unwrap();
        let z = Observable::qubit_binary([0.0, 0.0, 1.0]).unwrap();
        let rotate = |o: &Observable| {
            let effects = o
                .effects()
                .iter()
                .map(|e| {
                    HermitianOperator::symmetrize(
                        &u.matmul(e.matrix()).matmul(&u.adjoint()),
                    )
                })
                .collect();
            Observable::new(effects).unwrap()
        };
        let tol = 1e-6;
        let plain = degree_of_compatibility(&x, &z, tol).unwrap();
        let rotated = degree_of_compatibility(&rotate(&x), &rotate(&z), tol).unwrap();
        prop_assert!((plain.value - rotated.value).abs() <= 2.0 * tol);
    }
}
