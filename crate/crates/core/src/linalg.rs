//! Small dense linear algebra helpers shared by the representation code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type RVec = DVector<f64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
}

pub fn commutator_r(a: &RMat, b: &RMat) -> RMat {
    a * b - b * a
}

pub fn commutator_c(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Real 2n x 2n form of a complex n x n matrix acting on (Re v, Im v).
pub fn realify(m: &CMat) -> RMat {
    let n = m.nrows();
    let mut out = RMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for col in 0..n {
            let z = m[(r, col)];
            out[(r, col)] = z.re;
            out[(r, col + n)] = -z.im;
            out[(r + n, col)] = z.im;
            out[(r + n, col + n)] = z.re;
        }
    }
    out
}

pub fn realify_vec(v: &CVec) -> RVec {
    let n = v.len();
    RVec::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

pub fn complexify_vec(v: &RVec) -> CVec {
    let n = v.len() / 2;
    CVec::from_fn(n, |i, _| c(v[i], v[i + n]))
}

/// Orthonormal basis (columns) of the null space of `a`.
pub fn null_space(a: &RMat, tol: f64) -> RMat {
    let cols = a.ncols();
    let padded = if a.nrows() < cols {
        let mut p = RMat::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol * smax)
        .collect();
    let mut out = RMat::zeros(cols, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &vt.row(i).transpose());
    }
    out
}

pub fn rank(a: &RMat, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax.max(1.0)).count()
}

/// Result of a lockstep Krylov expansion.
pub struct Krylov {
    /// orthonormal spanning vectors of the source orbit span
    pub basis: Vec<RVec>,
    /// images of the same vectors under the linear map fixed by seed -> dst seed
    pub images: Vec<RVec>,
}

/// Expands the span of words in `gens` applied to `seed` by Gram-Schmidt.
/// When `dst` is given, the same linear operations are replayed on
/// `dst.1` with `dst.0` as generators, which yields the images of every
/// basis vector under the unique intertwiner mapping `seed` to `dst.1`.
pub fn krylov(gens: &[RMat], seed: &RVec, dst: Option<(&[RMat], &RVec)>, tol: f64) -> Krylov {
    let mut basis: Vec<RVec> = Vec::new();
    let mut images: Vec<RVec> = Vec::new();
    let push = |v: RVec, w: Option<RVec>, basis: &mut Vec<RVec>, images: &mut Vec<RVec>| -> bool {
        let mut v = v;
        let mut w = w;
        for _ in 0..2 {
            for (b, img) in basis.iter().zip(images.iter().map(Some).chain(std::iter::repeat(None))) {
                let p = b.dot(&v);
                v -= b * p;
                if let (Some(w), Some(img)) = (w.as_mut(), img) {
                    *w -= img * p;
                }
            }
        }
        let nv = v.norm();
        if nv <= tol {
            return false;
        }
        basis.push(v / nv);
        if let Some(w) = w {
            images.push(w / nv);
        }
        true
    };
    let scale = seed.norm().max(1e-300);
    push(seed / scale, dst.map(|d| d.1 / scale), &mut basis, &mut images);
    let mut k = 0;
    while k < basis.len() {
        for (g, gen) in gens.iter().enumerate() {
            let v = gen * &basis[k];
            let w = dst.map(|d| &d.0[g] * &images[k]);
            push(v, w, &mut basis, &mut images);
        }
        k += 1;
    }
    Krylov { basis, images }
}

pub fn columns(vs: &[RVec], rows: usize) -> RMat {
    let mut m = RMat::zeros(rows, vs.len());
    for (k, v) in vs.iter().enumerate() {
        m.set_column(k, v);
    }
    m
}

/// Precomputed spectral form of `exp(a t)` for a real antisymmetric `a`.
#[derive(Clone, Debug)]
pub struct Flow {
    w: CMat,
    w_adj: CMat,
    lambda: Vec<f64>,
}

impl Flow {
    pub fn new(a: &RMat) -> Self {
        let h = to_complex(a) * c(0.0, -1.0);
        let h = (&h + h.adjoint()) * c(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let w = eig.eigenvectors;
        Flow { w_adj: w.adjoint(), w, lambda: eig.eigenvalues.iter().cloned().collect() }
    }

    pub fn matrix(&self, t: f64) -> RMat {
        let mut scaled = self.w.clone();
        for (k, &l) in self.lambda.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, l * t);
            for r in 0..scaled.nrows() {
                scaled[(r, k)] *= ph;
            }
        }
        real_part(&(scaled * &self.w_adj))
    }

    pub fn apply(&self, t: f64, v: &RVec) -> RVec {
        let coeff = &self.w_adj * v.map(|x| c(x, 0.0));
        let rotated = CVec::from_fn(coeff.len(), |k, _| coeff[k] * Complex64::from_polar(1.0, self.lambda[k] * t));
        (&self.w * rotated).map(|z| z.re)
    }
}

/// Rescales a unitary by a global phase so that its determinant is one.
pub fn to_special(u: &CMat) -> CMat {
    let d = u.nrows() as f64;
    let det = u.determinant();
    let phase = Complex64::from_polar(1.0, -det.arg() / d);
    u * phase
}

/// Traceless anti-Hermitian `k` with `exp(k)` equal to `u` up to a global phase.
pub fn unitary_log(u: &CMat) -> Result<CMat> {
    let d = u.nrows();
    let su = to_special(u);
    let schur = nalgebra::linalg::Schur::try_new(su, 1e-15, 10_000)
        .ok_or_else(|| Error::Structural("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut theta: Vec<f64> = (0..d).map(|k| t[(k, k)].arg()).collect();
    let total: f64 = theta.iter().sum();
    let wraps = (total / (2.0 * std::f64::consts::PI)).round() as i64;
    for _ in 0..wraps.abs() {
        let idx = if wraps > 0 {
            (0..d).max_by(|&a, &b| theta[a].partial_cmp(&theta[b]).unwrap()).unwrap()
        } else {
            (0..d).min_by(|&a, &b| theta[a].partial_cmp(&theta[b]).unwrap()).unwrap()
        };
        theta[idx] -= wraps.signum() as f64 * 2.0 * std::f64::consts::PI;
    }
    let diag = CMat::from_diagonal(&CVec::from_iterator(d, theta.iter().map(|&x| c(0.0, x))));
    let k = &q * diag * q.adjoint();
    Ok((&k - k.adjoint()) * c(0.5, 0.0))
}

pub fn random_complex_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..d {
        let z = r[(k, k)];
        let ph = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for row in 0..d {
            q[(row, k)] *= ph;
        }
    }
    q
}

/// Number of real coordinates of d x d Hermitian matrices.
pub fn herm_dim(m: usize) -> usize {
    m * m
}

/// Hilbert-Schmidt orthonormal real basis of Hermitian m x m matrices:
/// diagonal units, then symmetric and antisymmetric off-diagonal pairs.
pub fn herm_basis(m: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(m * m);
    for a in 0..m {
        let mut e = CMat::zeros(m, m);
        e[(a, a)] = c(1.0, 0.0);
        out.push(e);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..m {
        for b in (a + 1)..m {
            let mut e = CMat::zeros(m, m);
            e[(a, b)] = c(s, 0.0);
            e[(b, a)] = c(s, 0.0);
            out.push(e);
            let mut f = CMat::zeros(m, m);
            f[(a, b)] = c(0.0, -s);
            f[(b, a)] = c(0.0, s);
            out.push(f);
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`herm_basis`].
pub fn herm_to_real(h: &CMat) -> RVec {
    let m = h.nrows();
    let s = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(m * m);
    for a in 0..m {
        out.push(h[(a, a)].re);
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let z = h[(b, a)];
            out.push(s * z.re);
            out.push(s * z.im);
        }
    }
    RVec::from_vec(out)
}

pub fn real_to_herm(x: &RVec, m: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = CMat::zeros(m, m);
    for a in 0..m {
        h[(a, a)] = c(x[a], 0.0);
    }
    let mut k = m;
    for a in 0..m {
        for b in (a + 1)..m {
            let (re, im) = (x[k] * s, x[k + 1] * s);
            h[(b, a)] = c(re, im);
            h[(a, b)] = c(re, -im);
            k += 2;
        }
    }
    h
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
