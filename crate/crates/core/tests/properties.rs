use approx::assert_abs_diff_eq;
use bornlab::effects::{antipodal_measurement, Effect};
use bornlab::gpt::{PureRay, Theory, TheorySpec};
use bornlab::irreps::{realize, su_basis, IrrepSpec};
use bornlab::linalg::{commutator_c, commutator_r, haar_unitary};
use bornlab::partitions::{branch, dimension_formula, interlacings, su_dim, Partition};
use bornlab::phenomenology::GProfile;
use bornlab::symtensor::{omega_n, sym_power_unitary, SymBasis};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn realization_is_a_homomorphism(j in 1u32..6, seed in any::<u64>()) {
        let rep = realize(IrrepSpec { d: 2, j }).unwrap();
        let mut r = rng(seed);
        let basis = su_basis(2);
        let coeffs: Vec<Vec<f64>> = (0..2).map(|_| (0..3).map(|_| rand::Rng::gen_range(&mut r, -1.0..1.0)).collect()).collect();
        let k: Vec<_> = coeffs.iter().map(|cs| cs.iter().zip(&basis).fold(basis[0].matrix.scale(0.0), |acc, (x, g)| acc + g.matrix.scale(*x))).collect();
        let lhs = commutator_r(&rep.represent(&k[0]).unwrap(), &rep.represent(&k[1]).unwrap());
        let rhs = rep.represent(&commutator_c(&k[0], &k[1])).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn states_are_covariant(j in 1u32..6, seed in any::<u64>()) {
        let th = Theory::new(TheorySpec::qubit_like(j).unwrap()).unwrap();
        let mut r = rng(seed);
        let psi = PureRay::random(2, &mut r);
        let u = haar_unitary(2, &mut r);
        let lhs = th.group_element(&u).unwrap() * th.omega(&psi).unwrap();
        let rhs = th.omega(&psi.transformed(&u)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn pure_states_share_one_norm(js in prop::collection::btree_set(1u32..5, 1..3), seed in any::<u64>()) {
        let th = Theory::new(TheorySpec::new(2, js.iter().copied(), bornlab::Restriction::Unrestricted).unwrap()).unwrap();
        let psi = PureRay::random(2, &mut rng(seed));
        prop_assert!((th.omega(&psi).unwrap().norm_squared() - js.len() as f64).abs() < 1e-9);
    }

    #[test]
    fn odd_blocks_send_orthogonal_rays_to_antipodes(j in (0u32..4).prop_map(|k| 2 * k + 1), seed in any::<u64>()) {
        let th = Theory::new(TheorySpec::qubit_like(j).unwrap()).unwrap();
        let psi = PureRay::random(2, &mut rng(seed));
        let sum = th.omega(&psi).unwrap() + th.omega(&psi.perp().unwrap()).unwrap();
        prop_assert!(sum.norm() < 1e-9);
    }

    #[test]
    fn binary_measurements_are_normalized(j in 1u32..6, seed in any::<u64>()) {
        let th = Theory::new(TheorySpec::qubit_like(j).unwrap()).unwrap();
        let mut r = rng(seed);
        let m = antipodal_measurement(&th.omega(&PureRay::random(2, &mut r)).unwrap());
        let w = th.omega(&PureRay::random(2, &mut r)).unwrap();
        prop_assert!((m.probabilities(&w).iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let e: &Effect = &m.effects[0];
        prop_assert!((e.value(&w) + e.complement().value(&w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interlacings_add_up(d in 2usize..6, j in 0u32..5) {
        let lambda = Partition::family(d, j);
        let total: u64 = interlacings(&lambda).iter().map(su_dim).sum();
        prop_assert_eq!(total, dimension_formula(d, j).unwrap());
        // the U(1) generator is traceless on the irrep
        let trace: num_rational::Ratio<i128> = branch(&lambda).unwrap().iter().map(|b| b.charge() * b.su_dim as i128).sum();
        prop_assert_eq!(trace, num_rational::Ratio::from_integer(0));
    }

    #[test]
    fn tensor_states_are_rank_one(d in 2usize..4, n in 1u32..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = PureRay::random(d, &mut r).amplitudes();
        let s = omega_n(&psi, n).unwrap();
        prop_assert!((s.trace() - 1.0).abs() < 1e-12);
        prop_assert!((&s.matrix * &s.matrix - &s.matrix).norm() < 1e-10);
        let basis = SymBasis::new(d, n);
        let u = haar_unitary(d, &mut r);
        let g = sym_power_unitary(&basis, &u);
        let moved = omega_n(&(&u * &psi), n).unwrap().matrix;
        prop_assert!((&g * &s.matrix * g.adjoint() - moved).norm() < 1e-10);
    }

    #[test]
    fn g_is_odd_under_half_turn(j in (0u32..4).prop_map(|k| 2 * k + 1), t in 0.0f64..6.3) {
        let p = GProfile::new(j).unwrap();
        let a = p.value(t).unwrap().matrix_form;
        let b = p.value(t + std::f64::consts::PI).unwrap().matrix_form;
        prop_assert!((a + b).abs() < 1e-9);
    }
}

#[test]
fn casimir_is_scalar_on_irreps() {
    for (d, j) in [(2, 1), (2, 4), (3, 1), (3, 2), (4, 1)] {
        let rep = realize(IrrepSpec { d, j }).unwrap();
        let cas = rep.casimir();
        let expect = -4.0 * j as f64 * (j as f64 + d as f64 - 1.0);
        for a in 0..rep.n() {
            assert_abs_diff_eq!(cas[(a, a)], expect, epsilon = 1e-8);
        }
        assert_abs_diff_eq!((cas.clone() - nalgebra::DMatrix::identity(rep.n(), rep.n()) * expect).norm(), 0.0, epsilon = 1e-8);
    }
}
