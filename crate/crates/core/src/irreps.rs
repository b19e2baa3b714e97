//! Real representations D_j^d of PU(d) and their direct sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, RMat};
use crate::partitions::dimension_formula;
use crate::symtensor::{dsym, SymBasis};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorLabel {
    Z,
    X,
    Y,
    Generic,
}

/// Traceless anti-Hermitian element of su(d).
#[derive(Clone, Debug)]
pub struct LieGenerator {
    pub label: GeneratorLabel,
    pub matrix: CMat,
}

impl LieGenerator {
    pub fn new(label: GeneratorLabel, matrix: CMat) -> Result<Self> {
        let scale = matrix.norm().max(1.0);
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidArgument("generator must be square".into()));
        }
        if matrix.trace().norm() > 1e-12 * scale || (&matrix + matrix.adjoint()).norm() > 1e-12 * scale {
            return Err(Error::InvalidArgument("generator must be traceless and anti-Hermitian".into()));
        }
        Ok(LieGenerator { label, matrix })
    }

    /// diag(i, -i)
    pub fn z() -> Self {
        let m = CMat::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
        LieGenerator { label: GeneratorLabel::Z, matrix: m }
    }

    /// [[0, i], [i, 0]]
    pub fn x() -> Self {
        let m = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        LieGenerator { label: GeneratorLabel::X, matrix: m }
    }

    /// [Z, X] / 2
    pub fn y() -> Self {
        let m = linalg::commutator_c(&Self::z().matrix, &Self::x().matrix) * c(0.5, 0.0);
        LieGenerator { label: GeneratorLabel::Y, matrix: m }
    }
}

/// Basis of su(d) orthonormal for tr(A^dagger B) = 2. For d = 2 it is (X, Y, Z).
pub fn su_basis(d: usize) -> Vec<LieGenerator> {
    if d == 2 {
        return vec![LieGenerator::x(), LieGenerator::y(), LieGenerator::z()];
    }
    let mut out = Vec::with_capacity(d * d - 1);
    for k in 0..d {
        for l in (k + 1)..d {
            let mut s = CMat::zeros(d, d);
            s[(k, l)] = c(0.0, 1.0);
            s[(l, k)] = c(0.0, 1.0);
            out.push(LieGenerator { label: GeneratorLabel::Generic, matrix: s });
            let mut a = CMat::zeros(d, d);
            a[(k, l)] = c(1.0, 0.0);
            a[(l, k)] = c(-1.0, 0.0);
            out.push(LieGenerator { label: GeneratorLabel::Generic, matrix: a });
        }
    }
    for l in 1..d {
        let f = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut h = CMat::zeros(d, d);
        for m in 0..l {
            h[(m, m)] = c(0.0, f);
        }
        h[(l, l)] = c(0.0, -f * l as f64);
        out.push(LieGenerator { label: GeneratorLabel::Generic, matrix: h });
    }
    out
}

/// Generators of the stabilizer U(1) x SU(d-1) of the first basis ray.
pub fn stabilizer_generators(d: usize) -> Vec<CMat> {
    let mut u1 = CMat::zeros(d, d);
    u1[(0, 0)] = c(0.0, 1.0);
    for k in 1..d {
        u1[(k, k)] = c(0.0, -1.0 / (d as f64 - 1.0));
    }
    let mut out = vec![u1];
    if d >= 3 {
        for g in su_basis(d - 1) {
            let mut m = CMat::zeros(d, d);
            m.view_mut((1, 1), (d - 1, d - 1)).copy_from(&g.matrix);
            out.push(m);
        }
    }
    out
}

/// The matrices D(X), D(Z) of the spin-j irrep in the weight basis m = j, ..., -j.
pub fn spin_generators(j: u32) -> Result<(CMat, CMat)> {
    if j == 0 {
        return Err(Error::InvalidArgument("spin label must be at least 1".into()));
    }
    let n = (2 * j + 1) as usize;
    let mut z = CMat::zeros(n, n);
    let mut x = CMat::zeros(n, n);
    for r in 0..n {
        z[(r, r)] = c(0.0, j as f64 - r as f64);
    }
    for m in 1..n {
        let v = ((m * (n - m)) as f64).sqrt() / 2.0;
        x[(m - 1, m)] = c(0.0, v);
        x[(m, m - 1)] = c(0.0, v);
    }
    Ok((x, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepSpec {
    pub d: usize,
    pub j: u32,
}

impl IrrepSpec {
    pub fn dimension(&self) -> Result<u64> {
        dimension_formula(self.d, self.j)
    }
}

/// Position of one irreducible block inside a direct sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockIndex {
    /// None for an ambient (not yet decomposed) space
    pub j: Option<u32>,
    pub offset: usize,
    pub size: usize,
}

/// A real representation of su(d), stored as the images of [`su_basis`].
#[derive(Clone, Debug)]
pub struct RepRealization {
    pub d: usize,
    pub blocks: Vec<BlockIndex>,
    generators: Vec<RMat>,
}

impl RepRealization {
    pub fn from_parts(d: usize, blocks: Vec<BlockIndex>, generators: Vec<RMat>) -> Result<Self> {
        if generators.len() != d * d - 1 {
            return Err(Error::DimensionMismatch { expected: d * d - 1, got: generators.len() });
        }
        let n = generators[0].nrows();
        if blocks.iter().map(|b| b.size).sum::<usize>() != n {
            return Err(Error::Structural("block layout does not cover the space".into()));
        }
        Ok(RepRealization { d, blocks, generators })
    }

    pub fn n(&self) -> usize {
        self.generators[0].nrows()
    }

    /// Images of the basis returned by [`su_basis`].
    pub fn basis_generators(&self) -> &[RMat] {
        &self.generators
    }

    /// Coefficients of `k` in [`su_basis`].
    pub fn coefficients(&self, k: &CMat) -> Result<Vec<f64>> {
        if k.nrows() != self.d || k.ncols() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: k.nrows() });
        }
        let basis = su_basis(self.d);
        let coeffs: Vec<f64> = basis.iter().map(|b| (b.matrix.adjoint() * k).trace().re / 2.0).collect();
        let mut rebuilt = CMat::zeros(self.d, self.d);
        for (b, &x) in basis.iter().zip(&coeffs) {
            rebuilt += &b.matrix * c(x, 0.0);
        }
        if (&rebuilt - k).norm() > 1e-10 * k.norm().max(1.0) {
            return Err(Error::InvalidArgument("matrix is not in su(d)".into()));
        }
        Ok(coeffs)
    }

    pub fn combine(&self, coeffs: &[f64]) -> RMat {
        let mut out = RMat::zeros(self.n(), self.n());
        for (g, &x) in self.generators.iter().zip(coeffs) {
            if x != 0.0 {
                out += g * x;
            }
        }
        out
    }

    /// Lie algebra image of `k`.
    pub fn represent(&self, k: &CMat) -> Result<RMat> {
        Ok(self.combine(&self.coefficients(k)?))
    }

    /// Image of a d = 2 generator with the half-angle convention D(e^{Kt/2}) = e^{D(K) t}.
    pub fn half(&self, g: &LieGenerator) -> Result<RMat> {
        Ok(self.represent(&g.matrix)? * 0.5)
    }

    /// Group element for a unitary (global phase ignored).
    pub fn group_element(&self, u: &CMat) -> Result<RMat> {
        let k = linalg::unitary_log(u)?;
        Ok(self.represent(&k)?.exp())
    }

    pub fn casimir(&self) -> RMat {
        let mut cas = RMat::zeros(self.n(), self.n());
        for g in &self.generators {
            cas += g * g;
        }
        (&cas + cas.transpose()) * 0.5
    }

    /// Restriction to the invariant subspace spanned by orthonormal columns `q`.
    pub fn restrict(&self, q: &RMat, j: Option<u32>) -> RepRealization {
        let generators = self.generators.iter().map(|g| q.transpose() * g * q).collect();
        RepRealization { d: self.d, blocks: vec![BlockIndex { j, offset: 0, size: q.ncols() }], generators }
    }

    pub fn block_generators(&self, b: usize) -> Vec<RMat> {
        let blk = &self.blocks[b];
        self.generators.iter().map(|g| g.view((blk.offset, blk.offset), (blk.size, blk.size)).into_owned()).collect()
    }

    pub fn block_of(&self, j: u32) -> Option<usize> {
        self.blocks.iter().position(|b| b.j == Some(j))
    }

    pub fn to_dump(&self) -> RealizationDump {
        RealizationDump {
            d: self.d,
            blocks: self.blocks.clone(),
            generators: self.generators.iter().map(MatrixDump::from_real).collect(),
        }
    }

    pub fn from_dump(dump: &RealizationDump) -> Result<Self> {
        let gens = dump.generators.iter().map(|m| m.to_real()).collect::<Result<Vec<_>>>()?;
        Self::from_parts(dump.d, dump.blocks.clone(), gens)
    }
}

/// Row-major matrix with explicit real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixDump {
    pub fn from_real(m: &RMat) -> Self {
        let mut re = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                re.push(m[(r, col)]);
            }
        }
        MatrixDump { rows: m.nrows(), cols: m.ncols(), im: vec![0.0; re.len()], re }
    }

    pub fn from_complex(m: &CMat) -> Self {
        let mut re = Vec::with_capacity(m.len());
        let mut im = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                re.push(m[(r, col)].re);
                im.push(m[(r, col)].im);
            }
        }
        MatrixDump { rows: m.nrows(), cols: m.ncols(), re, im }
    }

    pub fn to_complex(&self) -> Result<CMat> {
        if self.re.len() != self.rows * self.cols || self.im.len() != self.re.len() {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: self.re.len() });
        }
        Ok(CMat::from_fn(self.rows, self.cols, |r, col| {
            let k = r * self.cols + col;
            c(self.re[k], self.im[k])
        }))
    }

    pub fn to_real(&self) -> Result<RMat> {
        if self.im.iter().any(|&x| x != 0.0) {
            return Err(Error::InvalidArgument("expected a real matrix".into()));
        }
        Ok(linalg::real_part(&self.to_complex()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationDump {
    pub d: usize,
    pub blocks: Vec<BlockIndex>,
    pub generators: Vec<MatrixDump>,
}

/// e^{K t}
pub fn exponentiate<T>(k: &nalgebra::DMatrix<T>, t: f64) -> nalgebra::DMatrix<T>
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    (k * T::from_real(t)).exp()
}

/// Real form of the spin-j irrep. The first basis vector is the zero-weight vector.
pub fn spin_realization(j: u32) -> Result<RepRealization> {
    let (x, z) = spin_generators(j)?;
    let n = x.nrows();
    let gx = x * c(2.0, 0.0);
    let gz = z * c(2.0, 0.0);
    let gy = linalg::commutator_c(&gz, &gx) * c(0.5, 0.0);
    let complex = [gx, gy, gz];
    let realified: Vec<RMat> = complex.iter().map(linalg::realify).collect();
    let mut seed = linalg::CVec::zeros(n);
    seed[j as usize] = c(1.0, 0.0);
    let kr = linalg::krylov(&realified, &linalg::realify_vec(&seed), None, 1e-8);
    if kr.basis.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: kr.basis.len() });
    }
    let mut b = CMat::zeros(n, n);
    for (k, v) in kr.basis.iter().enumerate() {
        b.set_column(k, &linalg::complexify_vec(v));
    }
    if (b.adjoint() * &b - CMat::identity(n, n)).norm() > tol::STRUCT {
        return Err(Error::Structural("orbit span is not a real form".into()));
    }
    let mut gens = Vec::with_capacity(3);
    for g in &complex {
        let r = b.adjoint() * g * &b;
        if linalg::imag_norm(&r) > tol::STRUCT {
            return Err(Error::Structural("generator is not real in the constructed basis".into()));
        }
        gens.push(linalg::real_part(&r));
    }
    RepRealization::from_parts(2, vec![BlockIndex { j: Some(j), offset: 0, size: n }], gens)
}

/// Lie algebra action on Hermitian matrices over Sym^N(C^d).
pub fn symtensor_generators(d: usize, n_power: u32, cap: usize) -> Result<RepRealization> {
    if d < 2 || n_power < 1 {
        return Err(Error::InvalidArgument("need d >= 2 and N >= 1".into()));
    }
    let basis = SymBasis::new(d, n_power);
    let m = basis.len();
    if m * m > cap {
        return Err(Error::SizeCap { dim: m * m, cap });
    }
    let herm = linalg::herm_basis(m);
    let mut gens = Vec::with_capacity(d * d - 1);
    for g in su_basis(d) {
        let a = dsym(&basis, &g.matrix);
        let mut r = RMat::zeros(m * m, m * m);
        for (q, bq) in herm.iter().enumerate() {
            let l = &a * bq - bq * &a;
            r.set_column(q, &linalg::herm_to_real(&l));
        }
        gens.push(r);
    }
    RepRealization::from_parts(d, vec![BlockIndex { j: None, offset: 0, size: m * m }], gens)
}

/// One Casimir eigenspace.
#[derive(Clone, Debug)]
pub struct CasimirBlock {
    pub eigenvalue: f64,
    pub dim: usize,
    /// orthonormal columns spanning the eigenspace
    pub basis: RMat,
    /// label j with eigenvalue -4 j (j + d - 1), when it is an integer
    pub j: Option<u32>,
}

pub fn casimir_label(d: usize, eigenvalue: f64) -> Option<u32> {
    let dm = d as f64 - 1.0;
    let disc = dm * dm - eigenvalue;
    if disc < 0.0 {
        return None;
    }
    let j = (-dm + disc.sqrt()) / 2.0;
    let r = j.round();
    ((j - r).abs() < 1e-6 && r >= 0.0).then_some(r as u32)
}

/// Eigenspaces of the quadratic Casimir, ordered from the trivial block upwards.
pub fn casimir_blocks(rep: &RepRealization) -> Result<Vec<CasimirBlock>> {
    let eig = rep.casimir().symmetric_eigen();
    let n = rep.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let scale = eig.eigenvalues.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        let v = eig.eigenvalues[k];
        if let Some(last) = clusters.last_mut() {
            let prev = eig.eigenvalues[*last.last().unwrap()];
            let gap = (prev - v).abs();
            if gap <= tol::CLUSTER * scale {
                last.push(k);
                continue;
            }
            if gap <= tol::CLUSTER_GAP * scale {
                return Err(Error::Ambiguity(format!("Casimir eigenvalues {prev} and {v} are too close to split")));
            }
        }
        clusters.push(vec![k]);
    }
    Ok(clusters
        .into_iter()
        .map(|idx| {
            let mut basis = RMat::zeros(n, idx.len());
            for (col, &k) in idx.iter().enumerate() {
                basis.set_column(col, &eig.eigenvectors.column(k));
            }
            let eigenvalue = idx.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / idx.len() as f64;
            CasimirBlock { eigenvalue, dim: idx.len(), basis, j: casimir_label(rep.d, eigenvalue) }
        })
        .collect())
}

fn trivial(d: usize) -> RepRealization {
    RepRealization {
        d,
        blocks: vec![BlockIndex { j: Some(0), offset: 0, size: 1 }],
        generators: vec![RMat::zeros(1, 1); d * d - 1],
    }
}

/// Concrete real form of D_j^d.
pub fn realize(spec: IrrepSpec) -> Result<RepRealization> {
    realize_with_cap(spec, tol::SIZE_CAP)
}

pub fn realize_with_cap(spec: IrrepSpec, cap: usize) -> Result<RepRealization> {
    if spec.d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    if spec.j == 0 {
        return Ok(trivial(spec.d));
    }
    if spec.d == 2 {
        return spin_realization(spec.j);
    }
    let ambient = symtensor_generators(spec.d, spec.j, cap)?;
    let blocks = casimir_blocks(&ambient)?;
    let top = blocks
        .iter()
        .find(|b| b.j == Some(spec.j))
        .ok_or_else(|| Error::Structural(format!("no Casimir block with label {}", spec.j)))?;
    let expected = spec.dimension()? as usize;
    if top.dim != expected {
        return Err(Error::DimensionMismatch { expected, got: top.dim });
    }
    Ok(ambient.restrict(&top.basis, Some(spec.j)))
}

/// Block diagonal sum of the given irreps, in the order given.
pub fn direct_sum(specs: &[IrrepSpec]) -> Result<RepRealization> {
    let Some(first) = specs.first() else {
        return Err(Error::InvalidArgument("empty list of irreps".into()));
    };
    let d = first.d;
    if specs.iter().any(|s| s.d != d) {
        return Err(Error::InvalidArgument("all irreps must share the same d".into()));
    }
    let parts = specs.iter().map(|&s| realize(s)).collect::<Result<Vec<_>>>()?;
    let n: usize = parts.iter().map(|p| p.n()).sum();
    let mut gens = vec![RMat::zeros(n, n); d * d - 1];
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (spec, p) in specs.iter().zip(&parts) {
        for (g, pg) in gens.iter_mut().zip(p.basis_generators()) {
            g.view_mut((offset, offset), (p.n(), p.n())).copy_from(pg);
        }
        blocks.push(BlockIndex { j: Some(spec.j), offset, size: p.n() });
        offset += p.n();
    }
    RepRealization::from_parts(d, blocks, gens)
}

/// Basis vectors annihilated by every stabilizer generator, within a representation.
pub fn stabilizer_invariants(rep: &RepRealization) -> Result<RMat> {
    let n = rep.n();
    let stab = stabilizer_generators(rep.d);
    let mut stacked = RMat::zeros(n * stab.len(), n);
    for (k, s) in stab.iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&rep.represent(s)?);
    }
    Ok(linalg::null_space(&stacked, tol::STRUCT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hom_error(rep: &RepRealization) -> f64 {
        let basis = su_basis(rep.d);
        let mut worst: f64 = 0.0;
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let lhs = linalg::commutator_r(&rep.basis_generators()[a], &rep.basis_generators()[b]);
                let rhs = rep.represent(&linalg::commutator_c(&basis[a].matrix, &basis[b].matrix)).unwrap();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    #[test]
    fn fundamental_generators() {
        assert_eq!(LieGenerator::z().matrix[(0, 0)], c(0.0, 1.0));
        assert_eq!(LieGenerator::x().matrix[(0, 1)], c(0.0, 1.0));
        assert!(LieGenerator::new(GeneratorLabel::Generic, CMat::identity(2, 2)).is_err());
        for d in 2..5 {
            let b = su_basis(d);
            assert_eq!(b.len(), d * d - 1);
            for p in &b {
                LieGenerator::new(p.label, p.matrix.clone()).unwrap();
                for q in &b {
                    let ip = (p.matrix.adjoint() * &q.matrix).trace();
                    let expect = if std::ptr::eq(p, q) { 2.0 } else { 0.0 };
                    assert!((ip - c(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spin_one_matrices() {
        let (x, z) = spin_generators(1).unwrap();
        let zd: Vec<_> = (0..3).map(|k| z[(k, k)]).collect();
        assert_eq!(zd, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, -1.0)]);
        for m in 0..2 {
            assert!((x[(m, m + 1)] - c(0.0, 2f64.sqrt() / 2.0)).norm() < 1e-15);
        }
        assert!(spin_generators(0).is_err());
    }

    #[test]
    fn spin_commutator_closes() {
        for j in 1..5 {
            let (x, z) = spin_generators(j).unwrap();
            let y = linalg::commutator_c(&z, &x);
            let back = linalg::commutator_c(&z, &y);
            let expected = &x * c(-1.0, 0.0);
            assert!((back - expected).norm() < 1e-12, "j = {j}");
        }
    }

    #[test]
    fn represented_commutator_gives_twice_y() {
        let rep = spin_realization(2).unwrap();
        let z = rep.represent(&LieGenerator::z().matrix).unwrap();
        let x = rep.represent(&LieGenerator::x().matrix).unwrap();
        let y = rep.represent(&LieGenerator::y().matrix).unwrap();
        assert!((linalg::commutator_r(&z, &x) - y * 2.0).norm() < 1e-9);
    }

    #[test]
    fn spin_z_periodicity() {
        let (_, z) = spin_generators(3).unwrap();
        let g = exponentiate(&z, 2.0 * std::f64::consts::PI);
        assert!((g - CMat::identity(7, 7)).norm() < 1e-9);
        let (_, z1) = spin_generators(1).unwrap();
        let g1 = exponentiate(&z1, std::f64::consts::PI);
        let expect = [-1.0, 1.0, -1.0];
        for k in 0..3 {
            assert!((g1[(k, k)] - c(expect[k], 0.0)).norm() < 1e-12);
        }
        let central = exponentiate(&z, 0.37).column(3).into_owned();
        assert!((central[3] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn realizations_are_homomorphisms() {
        for spec in [IrrepSpec { d: 2, j: 1 }, IrrepSpec { d: 2, j: 3 }, IrrepSpec { d: 3, j: 1 }, IrrepSpec { d: 3, j: 2 }] {
            let rep = realize(spec).unwrap();
            assert_eq!(rep.n() as u64, spec.dimension().unwrap());
            assert!(hom_error(&rep) < 1e-9, "{spec:?}");
            for g in rep.basis_generators() {
                assert!((g + g.transpose()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn exponentials_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = realize(IrrepSpec { d: 3, j: 1 }).unwrap();
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = exponentiate(&rep.combine(&coeffs), rng.gen_range(-3.0..3.0));
            assert!((g.transpose() * &g - RMat::identity(8, 8)).norm() < 1e-9);
        }
    }

    #[test]
    fn symtensor_block_dimensions() {
        let dims = |d, n| -> Vec<usize> {
            let rep = symtensor_generators(d, n, 2000).unwrap();
            casimir_blocks(&rep).unwrap().iter().map(|b| b.dim).collect()
        };
        assert_eq!(dims(2, 1), vec![1, 3]);
        assert_eq!(dims(2, 2), vec![1, 3, 5]);
        assert_eq!(dims(3, 1), vec![1, 8]);
        assert_eq!(dims(3, 2), vec![1, 8, 27]);
        assert!(matches!(symtensor_generators(3, 9, 2000), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn direct_sum_layout() {
        let rep = direct_sum(&[IrrepSpec { d: 2, j: 1 }, IrrepSpec { d: 2, j: 2 }]).unwrap();
        assert_eq!(rep.n(), 8);
        assert_eq!(rep.blocks[1], BlockIndex { j: Some(2), offset: 3, size: 5 });
        assert!(hom_error(&rep) < 1e-9);
        assert!(direct_sum(&[IrrepSpec { d: 2, j: 1 }, IrrepSpec { d: 3, j: 1 }]).is_err());
        assert_eq!(direct_sum(&[IrrepSpec { d: 2, j: 3 }]).unwrap().n(), 7);
    }

    #[test]
    fn stabilizer_invariant_is_unique() {
        for spec in [IrrepSpec { d: 2, j: 3 }, IrrepSpec { d: 3, j: 1 }, IrrepSpec { d: 3, j: 2 }] {
            let rep = realize(spec).unwrap();
            assert_eq!(stabilizer_invariants(&rep).unwrap().ncols(), 1, "{spec:?}");
        }
    }

    #[test]
    fn dump_round_trip() {
        let rep = realize(IrrepSpec { d: 2, j: 2 }).unwrap();
        let text = serde_json::to_string(&rep.to_dump()).unwrap();
        let back = RepRealization::from_dump(&serde_json::from_str(&text).unwrap()).unwrap();
        for (a, b) in rep.basis_generators().iter().zip(back.basis_generators()) {
            assert_eq!(a, b);
        }
    }
}
