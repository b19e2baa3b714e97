use approx::assert_abs_diff_eq;
use bornlab::effects::Effect;
use bornlab::gpt::{Restriction, Theory, TheorySpec};
use bornlab::phenomenology::{self, BitSymmetryConfig};
use bornlab::symtensor::TensorLift;
use bornlab::Error;

fn qubit(j: u32) -> Theory {
    Theory::new(TheorySpec::qubit_like(j).unwrap()).unwrap()
}

#[test]
fn tangent_measurement_also_separates_the_antipodes() {
    let th = qubit(3);
    let pair = phenomenology::nonantipodal_pair(&th).unwrap();
    let e = &pair.measurement.effects[0];
    assert_abs_diff_eq!(e.value(&-&pair.states.0), 0.0, epsilon = 1e-7);
    assert_abs_diff_eq!(e.value(&-&pair.states.1), 1.0, epsilon = 1e-7);
}

#[test]
fn qubit_tangent_construction_is_degenerate() {
    assert!(matches!(phenomenology::nonantipodal_pair(&qubit(1)), Err(Error::Degenerate(_))));
}

#[test]
fn tensor_picture_reproduces_the_tangent_measurement() {
    let th = qubit(3);
    let pair = phenomenology::nonantipodal_pair(&th).unwrap();
    let lift = TensorLift::new(&th, 3).unwrap();
    let e: &Effect = &pair.measurement.effects[0];
    let (a, t) = lift.crosscheck(&th, &pair.psi, e).unwrap();
    assert_abs_diff_eq!(a, 1.0, epsilon = 1e-7);
    assert_abs_diff_eq!(t, 1.0, epsilon = 1e-7);
    let (a, t) = lift.crosscheck(&th, &pair.phi, e).unwrap();
    assert_abs_diff_eq!(a, 0.0, epsilon = 1e-7);
    assert_abs_diff_eq!(t, 0.0, epsilon = 1e-7);
}

#[test]
fn bit_symmetry_witness_mixes_overlaps() {
    let rep = phenomenology::bit_symmetry_test(&qubit(3), &BitSymmetryConfig { random_pairs: 10, seed: 2 }).unwrap();
    let (a, b) = rep.witness.unwrap();
    assert!((a.overlap - b.overlap).abs() > 1e-6);
    assert!(a.overlap.min(b.overlap) < 1e-9);
}

#[test]
fn even_only_theories_are_rejected_for_bit_symmetry() {
    let th = Theory::new(TheorySpec::new(2, [2], Restriction::Unrestricted).unwrap()).unwrap();
    assert!(phenomenology::bit_symmetry_test(&th, &BitSymmetryConfig::default()).is_err());
}

#[test]
fn restriction_of_adjoint() {
    let r = phenomenology::restriction_support(3, 1, 100, 3).unwrap();
    let labels: Vec<_> = r.blocks.iter().map(|b| (b.i, b.dim)).collect();
    assert_eq!(labels, vec![(Some(0), 1), (Some(1), 3)]);
    assert!(r.blocks.iter().all(|b| b.has_support));
    assert!(r.charged_residual < 1e-9);
}

#[test]
fn three_state_rays_are_not_orthogonal() {
    let demo = phenomenology::three_state_demo().unwrap();
    for a in 0..3 {
        for b in (a + 1)..3 {
            assert!(demo.rays[a].overlap(&demo.rays[b]) > 0.5);
        }
    }
    assert!(demo.lp.is_feasible());
}

#[test]
fn pure_state_dual_game_is_compliant() {
    let th = Theory::new(TheorySpec::new(2, [5], Restriction::PureStateDual).unwrap()).unwrap();
    let g = phenomenology::nse_game(&th).unwrap();
    assert_abs_diff_eq!(g.p_guess_a, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(g.p_guess_a_prime, 0.5, epsilon = 1e-6);
}

#[test]
fn swap_candidate_for_random_pair_is_an_involution() {
    let th = qubit(5);
    let pair = phenomenology::nonantipodal_pair(&th).unwrap();
    let pg = phenomenology::phase_group(&th, &pair.measurement).unwrap();
    assert_eq!(pg.lie_dimension, 0);
    let cand = pg.candidate.unwrap();
    assert!(cand.involutive);
    let u = cand.unitary.to_complex().unwrap();
    let moved = pair.psi.transformed(&u);
    assert!(moved.overlap(&pair.phi.perp().unwrap()) > 1.0 - 1e-9);
}
