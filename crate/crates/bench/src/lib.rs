//! Fixtures shared by the criterion benches.

use bornlab::{PureRay, Restriction, Theory, TheorySpec};

pub fn qubit_theory(j: u32) -> Theory {
    Theory::new(TheorySpec::qubit_like(j).expect("valid j")).expect("realizable")
}

pub fn theory(d: usize, js: &[u32]) -> Theory {
    Theory::new(TheorySpec::new(d, js.iter().copied(), Restriction::Unrestricted).expect("valid spec")).expect("realizable")
}

/// Orthogonal pair |0>, |1>.
pub fn antipodal_rays() -> (PureRay, PureRay) {
    (PureRay::basis(2, 0), PureRay::basis(2, 1))
}
