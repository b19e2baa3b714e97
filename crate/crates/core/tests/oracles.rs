//! Closed-form checks computed independently of the library's own constructions.

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use bornlab::effects::{antipodal_measurement, default_witnesses, distinguishability_lp, validate_measurement};
use bornlab::gpt::{angle_ray, PureRay, Restriction, Theory, TheorySpec};
use bornlab::irreps::{realize, IrrepSpec};
use bornlab::linalg::{c, CVec};
use bornlab::partitions::dimension_formula;
use bornlab::phenomenology::{g_of_t, x_null_vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn legendre(j: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if j == 0 {
        return p0;
    }
    for l in 1..j {
        let l = l as f64;
        let p2 = ((2.0 * l + 1.0) * x * p1 - l * p0) / (l + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[test]
fn zonal_overlaps_are_legendre() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for j in 1..=7 {
        let th = Theory::new(TheorySpec::qubit_like(j).unwrap()).unwrap();
        for _ in 0..20 {
            let (a, b) = (PureRay::random(2, &mut rng), PureRay::random(2, &mut rng));
            let x = 2.0 * a.overlap(&b).powi(2) - 1.0;
            let dot = th.omega(&a).unwrap().dot(&th.omega(&b).unwrap());
            assert_abs_diff_eq!(dot, legendre(j, x), epsilon = 1e-10);
        }
    }
}

#[test]
fn qubit_is_the_bloch_ball() {
    let th = Theory::new(TheorySpec::qubit_like(1).unwrap()).unwrap();
    let plus = angle_ray(0.0, PI / 2.0);
    let w0 = th.omega(&PureRay::basis(2, 0)).unwrap();
    let wp = th.omega(&plus).unwrap();
    assert_abs_diff_eq!(w0.dot(&wp), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(w0.norm(), 1.0, epsilon = 1e-12);
}

#[test]
fn explicit_dimensions() {
    let table = [((2, 0), 1), ((2, 3), 7), ((3, 1), 8), ((3, 2), 27), ((3, 3), 64), ((4, 1), 15), ((4, 2), 84), ((5, 1), 24)];
    for ((d, j), n) in table {
        assert_eq!(dimension_formula(d, j).unwrap(), n, "d={d} j={j}");
    }
    assert_eq!(realize(IrrepSpec { d: 4, j: 1 }).unwrap().n(), 15);
}

#[test]
fn x_kernel_is_rotated_reference() {
    // the kernel of D(X) is the weight vector of the state rotated onto the X axis
    let v = x_null_vector(1).unwrap();
    assert_abs_diff_eq!(v.vector[0], 0.5f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(v.vector[1], 0.0, epsilon = 1e-12);
    let g = g_of_t(1, 0.3).unwrap();
    assert_abs_diff_eq!(g.matrix_form, 0.3f64.sin(), epsilon = 1e-12);
}

#[test]
fn qubit_distinguishability_follows_orthogonality() {
    let th = Theory::new(TheorySpec::qubit_like(1).unwrap()).unwrap();
    let w = default_witnesses(&th, 1).unwrap();
    let psi = angle_ray(0.4, 1.0);
    let pair = [th.omega(&psi).unwrap(), th.omega(&psi.perp().unwrap()).unwrap()];
    assert!(distinguishability_lp(&th, &pair, &w).unwrap().is_feasible());
    let near = [th.omega(&psi).unwrap(), th.omega(&angle_ray(0.4, 2.5)).unwrap()];
    assert!(distinguishability_lp(&th, &near, &w).unwrap().is_infeasible());
}

#[test]
fn antipodal_measurement_is_valid_for_odd_j() {
    for j in [1, 3, 5] {
        let th = Theory::new(TheorySpec::qubit_like(j).unwrap()).unwrap();
        let m = antipodal_measurement(th.reference());
        assert!(validate_measurement(&th, &m).unwrap().valid, "j={j}");
    }
}

#[test]
fn pure_state_dual_rejects_non_antipodal_pairs() {
    let th = Theory::new(TheorySpec::new(2, [3], Restriction::PureStateDual).unwrap()).unwrap();
    let fam = bornlab::effects::pure_state_dual_effects(&th).unwrap();
    let mut v = CVec::zeros(2);
    v[0] = c(0.6, 0.0);
    v[1] = c(0.0, 0.8);
    let phi = PureRay::new(&v).unwrap();
    let states = [th.omega(&PureRay::basis(2, 0)).unwrap(), th.omega(&phi).unwrap()];
    assert!(fam.distinguishes(&states).is_none());
}
