//! Symmetric tensor powers: states |psi><psi|^{(x)N} and Hermitian effects on Sym^N(C^d).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::effects::Effect;
use crate::error::{Error, Result};
use crate::gpt::{PureRay, Theory};
use crate::irreps::{casimir_blocks, symtensor_generators, IrrepSpec};
use crate::linalg::{self, c, CMat, CVec, RMat, RVec};
use crate::tol;

/// Occupation-number basis of Sym^N(C^d) in decreasing lexicographic order.
#[derive(Clone, Debug)]
pub struct SymBasis {
    pub d: usize,
    pub n: u32,
    pub occupations: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SymBasis {
    pub fn new(d: usize, n: u32) -> Self {
        let mut occupations = Vec::new();
        let mut cur = Vec::with_capacity(d);
        fn rec(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() + 1 == d {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for k in (0..=left).rev() {
                cur.push(k);
                rec(d, left - k, cur, out);
                cur.pop();
            }
        }
        rec(d, n, &mut cur, &mut occupations);
        let index = occupations.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        SymBasis { d, n, occupations, index }
    }

    pub fn len(&self) -> usize {
        self.occupations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn index_of(&self, occ: &[u32]) -> Option<usize> {
        self.index.get(occ).copied()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Lie algebra action of `k` on Sym^N: sum_{a,b} k_ab a_a^dagger a_b.
pub fn dsym(basis: &SymBasis, k: &CMat) -> CMat {
    let m = basis.len();
    let d = basis.d;
    let mut out = CMat::zeros(m, m);
    for (col, occ) in basis.occupations.iter().enumerate() {
        for a in 0..d {
            for b in 0..d {
                let kab = k[(a, b)];
                if kab == c(0.0, 0.0) || occ[b] == 0 {
                    continue;
                }
                if a == b {
                    out[(col, col)] += kab * occ[a] as f64;
                    continue;
                }
                let mut next = occ.clone();
                next[b] -= 1;
                next[a] += 1;
                let row = basis.index_of(&next).expect("occupation stays in basis");
                out[(row, col)] += kab * ((occ[b] * (occ[a] + 1)) as f64).sqrt();
            }
        }
    }
    out
}

/// Amplitudes of psi^{(x)N} in the occupation basis.
pub fn sym_power_vector(basis: &SymBasis, psi: &CVec) -> CVec {
    let nf = factorial(basis.n);
    CVec::from_iterator(
        basis.len(),
        basis.occupations.iter().map(|occ| {
            let mut amp = c((nf / occ.iter().map(|&k| factorial(k)).product::<f64>()).sqrt(), 0.0);
            for (k, &e) in occ.iter().enumerate() {
                amp *= psi[k].powu(e);
            }
            amp
        }),
    )
}

/// Sym^N(U) by expanding prod_b (sum_a U_ab x_a)^{m_b} as a polynomial.
pub fn sym_power_unitary(basis: &SymBasis, u: &CMat) -> CMat {
    let d = basis.d;
    let m = basis.len();
    let mut out = CMat::zeros(m, m);
    for (col, occ) in basis.occupations.iter().enumerate() {
        let mut poly: HashMap<Vec<u32>, num_complex::Complex64> = HashMap::new();
        poly.insert(vec![0; d], c(1.0, 0.0));
        for (b, &mb) in occ.iter().enumerate() {
            for _ in 0..mb {
                let mut next: HashMap<Vec<u32>, num_complex::Complex64> = HashMap::new();
                for (mono, coeff) in &poly {
                    for a in 0..d {
                        let mut key = mono.clone();
                        key[a] += 1;
                        *next.entry(key).or_insert(c(0.0, 0.0)) += coeff * u[(a, b)];
                    }
                }
                poly = next;
            }
        }
        let norm_in = occ.iter().map(|&k| factorial(k)).product::<f64>().sqrt();
        for (mono, coeff) in poly {
            let row = basis.index_of(&mono).expect("degree is preserved");
            let norm_out = mono.iter().map(|&k| factorial(k)).product::<f64>().sqrt();
            out[(row, col)] += coeff * (norm_out / norm_in);
        }
    }
    out
}

/// Rank-one state |psi><psi|^{(x)N} restricted to the symmetric subspace.
#[derive(Clone, Debug)]
pub struct SymTensorState {
    pub n: u32,
    pub matrix: CMat,
}

pub fn omega_n(psi: &CVec, n: u32) -> Result<SymTensorState> {
    omega_n_with_cap(psi, n, tol::SIZE_CAP)
}

pub fn omega_n_with_cap(psi: &CVec, n: u32, cap: usize) -> Result<SymTensorState> {
    let basis = SymBasis::new(psi.len(), n);
    if basis.len() * basis.len() > cap {
        return Err(Error::SizeCap { dim: basis.len() * basis.len(), cap });
    }
    let v = sym_power_vector(&basis, &(psi / c(psi.norm(), 0.0)));
    Ok(SymTensorState { n, matrix: &v * v.adjoint() })
}

impl SymTensorState {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Hermitian matrix on Sym^N(C^d); probabilities are tr(E rho).
#[derive(Clone, Debug)]
pub struct SymTensorEffect {
    pub matrix: CMat,
}

impl SymTensorEffect {
    pub fn probability(&self, state: &SymTensorState) -> f64 {
        (&self.matrix * &state.matrix).trace().re
    }
}

/// One isotypic component of Herm(Sym^N(C^d)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorBlock {
    pub j: u32,
    pub multiplicity: usize,
    pub dim: u64,
}

pub fn block_decomposition(d: usize, n: u32) -> Result<Vec<TensorBlock>> {
    let rep = symtensor_generators(d, n, tol::SIZE_CAP)?;
    let mut out: Vec<TensorBlock> = Vec::new();
    for b in casimir_blocks(&rep)? {
        let j = b.j.ok_or_else(|| Error::Structural(format!("Casimir eigenvalue {} has no label", b.eigenvalue)))?;
        let dim = IrrepSpec { d, j }.dimension()?;
        if b.dim as u64 % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim as usize, got: b.dim });
        }
        out.push(TensorBlock { j, multiplicity: b.dim / dim as usize, dim });
    }
    out.sort_by_key(|b| b.j);
    let m = SymBasis::new(d, n).len() as u64;
    let total: u64 = out.iter().map(|b| b.multiplicity as u64 * b.dim).sum();
    if total != m * m {
        return Err(Error::DimensionMismatch { expected: (m * m) as usize, got: total as usize });
    }
    let mult = |j: u32| out.iter().find(|b| b.j == j).map_or(0, |b| b.multiplicity);
    if mult(0) != 1 || mult(n) != 1 {
        return Err(Error::Structural("extreme blocks must appear once".into()));
    }
    Ok(out)
}

/// Maps affine effects of a theory to Hermitian matrices on Sym^N(C^d).
pub struct TensorLift {
    pub n: u32,
    m: usize,
    /// one (theory block offset, intertwiner, left inverse) per block
    maps: Vec<(usize, RMat, RMat)>,
}

impl TensorLift {
    pub fn new(theory: &Theory, n: u32) -> Result<Self> {
        let d = theory.d();
        let max_j = theory.spec.j.iter().max().copied().unwrap_or(0);
        if n < max_j {
            return Err(Error::InvalidArgument(format!("tensor power {n} is below the largest block {max_j}")));
        }
        let ambient = symtensor_generators(d, n, tol::SIZE_CAP)?;
        let m = SymBasis::new(d, n).len();
        let seed = SymBasis::new(d, n);
        let mut e0 = CVec::zeros(d);
        e0[0] = c(1.0, 0.0);
        let v0 = sym_power_vector(&seed, &e0);
        let x0 = linalg::herm_to_real(&(&v0 * v0.adjoint()));
        let blocks = casimir_blocks(&ambient)?;
        let mut maps = Vec::new();
        for (b, blk) in theory.rep.blocks.iter().enumerate() {
            let j = blk.j.ok_or_else(|| Error::Structural("theory block has no label".into()))?;
            let cb = blocks.iter().find(|cb| cb.j == Some(j)).ok_or_else(|| Error::Structural(format!("no tensor block for j={j}")))?;
            if cb.dim != blk.size {
                return Err(Error::Structural(format!("block j={j} repeats in the tensor power")));
            }
            let target = &cb.basis * (cb.basis.transpose() * &x0);
            let src = theory.rep.block_generators(b);
            let seed_src = theory.reference().rows(blk.offset, blk.size).into_owned();
            let kr = linalg::krylov(&src, &seed_src, Some((ambient.basis_generators(), &target)), 1e-8);
            if kr.basis.len() != blk.size {
                return Err(Error::DimensionMismatch { expected: blk.size, got: kr.basis.len() });
            }
            let t = linalg::columns(&kr.images, m * m) * linalg::columns(&kr.basis, blk.size).transpose();
            for (g, a) in src.iter().zip(ambient.basis_generators()) {
                if (&t * g - a * &t).norm() > tol::STRUCT * t.norm().max(1.0) * 10.0 {
                    return Err(Error::Structural(format!("block j={j} map does not intertwine")));
                }
            }
            let gram = t.transpose() * &t;
            let inv = gram.try_inverse().ok_or_else(|| Error::Structural("singular block map".into()))?;
            maps.push((blk.offset, t.clone(), inv));
        }
        Ok(TensorLift { n, m, maps })
    }

    pub fn lift(&self, effect: &Effect) -> SymTensorEffect {
        let mut f = linalg::herm_to_real(&CMat::identity(self.m, self.m)) * effect.c;
        for (offset, t, inv) in &self.maps {
            let e = effect.e.rows(*offset, t.ncols()).into_owned();
            f += t * (inv * e);
        }
        SymTensorEffect { matrix: linalg::real_to_herm(&f, self.m) }
    }

    /// (affine probability, tensor-power probability)
    pub fn crosscheck(&self, theory: &Theory, psi: &PureRay, effect: &Effect) -> Result<(f64, f64)> {
        let p_affine = effect.value(&theory.omega(psi)?);
        let p_tensor = self.lift(effect).probability(&omega_n(&psi.amplitudes(), self.n)?);
        if (p_affine - p_tensor).abs() > 1e-9 {
            return Err(Error::Discrepancy(format!("affine {p_affine} vs tensor {p_tensor}")));
        }
        Ok((p_affine, p_tensor))
    }
}

/// Probability of `effect` on psi through the affine and the tensor-power pictures, with N = max J.
pub fn crosscheck_probability(theory: &Theory, psi: &PureRay, effect: &Effect) -> Result<(f64, f64)> {
    let n = theory.spec.j.iter().max().copied().unwrap_or(1);
    TensorLift::new(theory, n)?.crosscheck(theory, psi, effect)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrosscheckSummary {
    pub n: u32,
    pub pairs: usize,
    pub max_difference: f64,
}

/// Compares both pictures on `pairs` seeded random rays and random (not necessarily valid) affine effects.
pub fn crosscheck_random(theory: &Theory, pairs: usize, seed: u64) -> Result<CrosscheckSummary> {
    let n = theory.spec.j.iter().max().copied().unwrap_or(1);
    let lift = TensorLift::new(theory, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let psi = PureRay::random(theory.d(), &mut rng);
        let e = RVec::from_fn(theory.n(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let effect = Effect::new(e, rng.gen_range(-1.0..1.0));
        let (a, t) = lift.crosscheck(theory, &psi, &effect)?;
        worst = worst.max((a - t).abs());
    }
    Ok(CrosscheckSummary { n, pairs, max_difference: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::TheorySpec;

    #[test]
    fn basis_order() {
        let b = SymBasis::new(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.occupations[0], vec![2, 0, 0]);
        assert_eq!(b.occupations[5], vec![0, 0, 2]);
    }

    #[test]
    fn n1_is_density_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = PureRay::random(3, &mut rng).amplitudes();
        let s = omega_n(&psi, 1).unwrap();
        assert!((s.matrix.clone() - &psi * psi.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn symmetric_square_of_qubit() {
        let psi = CVec::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let s = omega_n(&psi, 2).unwrap();
        assert_eq!(s.matrix.nrows(), 3);
        assert!((s.trace() - 1.0).abs() < 1e-12);
        // amplitudes (a^2, sqrt2 a b, b^2)
        let v = sym_power_vector(&SymBasis::new(2, 2), &psi);
        assert!((v[0] - c(0.36, 0.0)).norm() < 1e-12);
        assert!((v[1] - c(0.0, 0.48 * 2f64.sqrt())).norm() < 1e-12);
        assert!((v[2] - c(-0.64, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (d, n) in [(2, 3), (3, 2)] {
            let basis = SymBasis::new(d, n);
            let u = linalg::haar_unitary(d, &mut rng);
            let psi = PureRay::random(d, &mut rng).amplitudes();
            let g = sym_power_unitary(&basis, &u);
            let lhs = &g * omega_n(&psi, n).unwrap().matrix * g.adjoint();
            let rhs = omega_n(&(&u * &psi), n).unwrap().matrix;
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn decompositions() {
        let b = block_decomposition(2, 2).unwrap();
        assert_eq!(b.iter().map(|x| (x.j, x.multiplicity)).collect::<Vec<_>>(), vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(block_decomposition(2, 1).unwrap().len(), 2);
        let b = block_decomposition(3, 1).unwrap();
        assert_eq!(b.iter().map(|x| x.dim).collect::<Vec<_>>(), vec![1, 8]);
    }

    #[test]
    fn unit_effect_lifts_to_identity() {
        let th = Theory::new(TheorySpec::qubit_like(1).unwrap()).unwrap();
        let psi = PureRay::basis(2, 1);
        let (a, t) = crosscheck_probability(&th, &psi, &Effect::unit(3)).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lift_below_max_j_rejected() {
        let th = Theory::new(TheorySpec::qubit_like(3).unwrap()).unwrap();
        assert!(TensorLift::new(&th, 2).is_err());
    }
}
