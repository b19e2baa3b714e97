//! Operational properties of the state spaces: the tangent measurement and its
//! g(t) profile, bit symmetry, phase groups, simultaneous encoding, the
//! three-state measurement and restrictions to smaller subspaces.

use std::f64::consts::PI;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effects::{
    self, antipodal_measurement, default_witnesses, distinguishability_lp, effect_extrema_with, pure_state_dual_effects, Effect,
    Extrema, Extremizer, LpOutcome, Measurement, ScanConfig, ValidationReport,
};
use crate::error::{Error, Result};
use crate::gpt::{angle_ray, PureRay, Restriction, Theory, TheorySpec};
use crate::irreps::{self, casimir_label, spin_generators, LieGenerator};
use crate::linalg::{self, c, CMat, CVec, RMat, RVec};
use crate::tol;

/// Kernel vector of D_j(X) in the weight basis, with a_l = v[j - l] and v[j + l] = -a_l.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XNullVector {
    pub j: u32,
    pub vector: Vec<f64>,
    /// coefficients for l = j, j - 2, ..., 1
    pub a: Vec<f64>,
}

pub fn x_null_vector(j: u32) -> Result<XNullVector> {
    if j % 2 == 0 {
        return Err(Error::InvalidArgument("the X kernel pattern needs odd j".into()));
    }
    let (x, _) = spin_generators(j)?;
    let t = x.map(|z| z.im);
    let kernel = linalg::null_space(&t, 1e-10);
    if kernel.ncols() != 1 {
        return Err(Error::Structural(format!("D(X) kernel has dimension {}", kernel.ncols())));
    }
    let mut v = kernel.column(0).into_owned();
    v /= v.norm();
    if v[0] < 0.0 {
        v = -v;
    }
    let k = j as usize;
    let mut a = Vec::new();
    for l in (1..=j as usize).rev().step_by(2) {
        if (v[k - l] + v[k + l]).abs() > 1e-10 {
            return Err(Error::Structural("kernel vector is not antisymmetric about the centre".into()));
        }
        a.push(v[k - l]);
    }
    for l in (0..=j as usize).filter(|l| l % 2 == 0) {
        if v[k - l].abs() > 1e-10 || v[k + l].abs() > 1e-10 {
            return Err(Error::Structural("kernel vector has weight on even offsets".into()));
        }
    }
    Ok(XNullVector { j, vector: v.iter().cloned().collect(), a })
}

/// g(t) from the matrix expression and from the sine series.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GValue {
    pub matrix_form: f64,
    pub closed_form: f64,
}

/// Precomputed pieces of the g(t) analysis for one j.
pub struct GProfile {
    pub null: XNullVector,
    dz: CMat,
    w: CVec,
}

impl GProfile {
    pub fn new(j: u32) -> Result<Self> {
        let null = x_null_vector(j)?;
        let (_, dz) = spin_generators(j)?;
        let w = CVec::from_iterator(null.vector.len(), null.vector.iter().map(|&x| c(x, 0.0)));
        Ok(GProfile { null, dz, w })
    }

    fn ls(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let j = self.null.j as usize;
        (1..=j).rev().step_by(2).zip(self.null.a.iter()).map(|(l, &a)| (l as f64, a * a))
    }

    /// (omega^X)^dagger D(Z)^dagger exp(D(Z) t) omega^X
    pub fn matrix_form(&self, t: f64) -> Result<f64> {
        let lhs = &self.dz * &self.w;
        let rhs = irreps::exponentiate(&self.dz, t) * &self.w;
        let z = lhs.dotc(&rhs);
        if z.im.abs() > 1e-9 {
            return Err(Error::Discrepancy(format!("g({t}) has imaginary part {}", z.im)));
        }
        Ok(z.re)
    }

    /// 2 sum_l l |a_l|^2 sin(l t)
    pub fn closed_form(&self, t: f64) -> f64 {
        2.0 * self.ls().map(|(l, a2)| l * a2 * (l * t).sin()).sum::<f64>()
    }

    fn derivative(&self, t: f64) -> f64 {
        2.0 * self.ls().map(|(l, a2)| l * l * a2 * (l * t).cos()).sum::<f64>()
    }

    fn second_derivative(&self, t: f64) -> f64 {
        -2.0 * self.ls().map(|(l, a2)| l * l * l * a2 * (l * t).sin()).sum::<f64>()
    }

    pub fn value(&self, t: f64) -> Result<GValue> {
        let m = self.matrix_form(t)?;
        let cf = self.closed_form(t);
        if (m - cf).abs() > 1e-9 {
            return Err(Error::Discrepancy(format!("g({t}): matrix form {m} vs series {cf}")));
        }
        Ok(GValue { matrix_form: m, closed_form: cf })
    }
}

pub fn g_of_t(j: u32, t: f64) -> Result<GValue> {
    GProfile::new(j)?.value(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GExtremum {
    pub t: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Global extrema of g on [0, 2 pi), sorted by t.
pub fn find_g_extrema(j: u32) -> Result<Vec<GExtremum>> {
    let prof = GProfile::new(j)?;
    let samples = 200_000;
    let h = 2.0 * PI / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|k| prof.closed_form(k as f64 * h)).collect();
    let mut local = Vec::new();
    for k in 0..samples {
        let (prev, next) = (vals[(k + samples - 1) % samples], vals[(k + 1) % samples]);
        let kind = if vals[k] >= prev && vals[k] > next {
            ExtremumKind::Max
        } else if vals[k] <= prev && vals[k] < next {
            ExtremumKind::Min
        } else {
            continue;
        };
        let mut t = k as f64 * h;
        for _ in 0..50 {
            let step = prof.derivative(t) / prof.second_derivative(t);
            if !step.is_finite() {
                break;
            }
            t -= step.clamp(-h, h);
            if step.abs() < 1e-15 {
                break;
            }
        }
        let t = t.rem_euclid(2.0 * PI);
        local.push(GExtremum { t, value: prof.value(t)?.matrix_form, kind });
    }
    let gmax = local.iter().filter(|x| x.kind == ExtremumKind::Max).map(|x| x.value).fold(f64::NEG_INFINITY, f64::max);
    let gmin = local.iter().filter(|x| x.kind == ExtremumKind::Min).map(|x| x.value).fold(f64::INFINITY, f64::min);
    let mut out: Vec<GExtremum> = Vec::new();
    for x in local {
        let best = if x.kind == ExtremumKind::Max { gmax } else { gmin };
        if (x.value - best).abs() > 1e-9 * best.abs().max(1.0) {
            continue;
        }
        let dup = out.iter().any(|y| {
            let d = (y.t - x.t).abs();
            y.kind == x.kind && d.min(2.0 * PI - d) < 1e-7
        });
        if !dup {
            out.push(x);
        }
    }
    out.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    Ok(out)
}

/// Binary measurement {E, 1 - E} with E the tight rescaling of w -> e . w over the orbit.
#[derive(Clone, Debug)]
pub struct TightMeasurement {
    pub measurement: Measurement,
    /// pure states with E = 1
    pub ones: Vec<Extremizer>,
    /// pure states with E = 0
    pub zeros: Vec<Extremizer>,
}

pub fn tight_measurement(theory: &Theory, e: &RVec, scan: &ScanConfig) -> Result<TightMeasurement> {
    let ex: Extrema = effect_extrema_with(theory, &Effect::new(e.clone(), 0.0), scan)?;
    let width = ex.max - ex.min;
    if width <= tol::STRUCT {
        return Err(Error::Degenerate("effect direction is constant on pure states".into()));
    }
    let effect = Effect::new(e / width, -ex.min / width);
    let rescale = |x: &Extremizer| Extremizer { ray: x.ray.clone(), state: x.state.clone(), value: (x.value - ex.min) / width };
    Ok(TightMeasurement {
        measurement: Measurement::binary(effect),
        ones: ex.argmax.iter().map(rescale).collect(),
        zeros: ex.argmin.iter().map(rescale).collect(),
    })
}

fn single_odd_j(theory: &Theory) -> Result<u32> {
    match theory.spec.single_j() {
        Some(j) if theory.d() == 2 && j % 2 == 1 => Ok(j),
        _ => Err(Error::InvalidArgument("needs an irreducible d = 2 theory with odd j".into())),
    }
}

/// Block-supported vector: `v` placed in block `b`, zeros elsewhere.
fn in_block(theory: &Theory, b: usize, v: &RVec) -> RVec {
    let blk = &theory.rep.blocks[b];
    let mut out = RVec::zeros(theory.n());
    out.rows_mut(blk.offset, blk.size).copy_from(v);
    out
}

fn block_part(theory: &Theory, b: usize, w: &RVec) -> RVec {
    let blk = &theory.rep.blocks[b];
    w.rows(blk.offset, blk.size).into_owned()
}

/// e = D(X) omega_ref restricted to block b.
fn tangent_direction(theory: &Theory, b: usize) -> Result<RVec> {
    let x = theory.rep.half(&LieGenerator::x())?;
    let v = x * theory.reference();
    Ok(in_block(theory, b, &block_part(theory, b, &v)))
}

pub fn tangent_measurement(theory: &Theory) -> Result<TightMeasurement> {
    single_odd_j(theory)?;
    tight_measurement(theory, &tangent_direction(theory, 0)?, &ScanConfig::default())
}

#[derive(Clone, Debug)]
pub struct NonantipodalPair {
    pub psi: PureRay,
    pub phi: PureRay,
    pub states: (RVec, RVec),
    pub measurement: Measurement,
    pub overlap: f64,
    pub report: ValidationReport,
}

fn pick_pair(t: &TightMeasurement) -> Option<(&Extremizer, &Extremizer)> {
    for a in &t.ones {
        for b in &t.zeros {
            if (&a.state + &b.state).norm() > tol::ANTIPODAL {
                return Some((a, b));
            }
        }
    }
    None
}

/// Two non-orthogonal rays distinguished perfectly by the tangent measurement.
pub fn nonantipodal_pair(theory: &Theory) -> Result<NonantipodalPair> {
    let tm = tangent_measurement(theory)?;
    let Some((a, b)) = pick_pair(&tm) else {
        return Err(Error::Degenerate("the tangent measurement only separates antipodal states".into()));
    };
    let report = effects::validate_measurement(theory, &tm.measurement)?;
    if !report.valid {
        return Err(Error::Verification("tangent measurement is not valid".into()));
    }
    let e = &tm.measurement.effects[0];
    let (va, vb) = (e.value(&theory.omega(&a.ray)?), e.value(&theory.omega(&b.ray)?));
    if (va - 1.0).abs() > tol::EFFECT || vb.abs() > tol::EFFECT {
        return Err(Error::Verification(format!("distinguished values {va}, {vb}")));
    }
    let overlap = a.ray.overlap(&b.ray);
    if overlap <= tol::OVERLAP {
        return Err(Error::Verification("distinguished rays are orthogonal".into()));
    }
    Ok(NonantipodalPair {
        psi: a.ray.clone(),
        phi: b.ray.clone(),
        states: (a.state.clone(), b.state.clone()),
        measurement: tm.measurement,
        overlap,
        report,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifiedPair {
    pub psi: PureRay,
    pub phi: PureRay,
    pub overlap: f64,
    pub source: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BitSymmetryReport {
    pub bit_symmetric: bool,
    pub witness: Option<(CertifiedPair, CertifiedPair)>,
    pub pairs: Vec<CertifiedPair>,
    pub distinct_overlaps: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BitSymmetryConfig {
    /// random pairs certified through the antipodal measurement
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for BitSymmetryConfig {
    fn default() -> Self {
        BitSymmetryConfig { random_pairs: 100, seed: 1 }
    }
}

fn certify_binary(theory: &Theory, m: &Measurement, psi: &PureRay, phi: &PureRay, scan: &ScanConfig) -> Result<bool> {
    let e = &m.effects[0];
    let ok_values = (e.value(&theory.omega(psi)?) - 1.0).abs() < tol::EFFECT && e.value(&theory.omega(phi)?).abs() < tol::EFFECT;
    Ok(ok_values && effects::validate_measurement_with(theory, m, scan)?.valid)
}

/// Collects certified distinguishable pairs and compares their overlaps.
pub fn bit_symmetry_test(theory: &Theory, cfg: &BitSymmetryConfig) -> Result<BitSymmetryReport> {
    let mut pairs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let light = ScanConfig { ns: 64, nt: 64, starts: 6, ..ScanConfig::default() };
    if theory.d() == 2 {
        if !theory.spec.has_odd() {
            return Err(Error::InvalidArgument("bit symmetry is tested on faithful theories".into()));
        }
        let psd = pure_state_dual_effects(theory).ok();
        let odd_blocks: Vec<usize> = (0..theory.rep.blocks.len()).filter(|&b| theory.rep.blocks[b].j.unwrap_or(0) % 2 == 1).collect();
        let orth_measurement = |psi: &PureRay| -> Result<Measurement> {
            let w = theory.omega(psi)?;
            if let Some(f) = &psd {
                return f.measurement_for(psi);
            }
            let b = odd_blocks[0];
            Ok(antipodal_measurement(&in_block(theory, b, &block_part(theory, b, &w))))
        };
        let mut rays = vec![PureRay::basis(2, 0)];
        rays.extend((0..cfg.random_pairs).map(|_| PureRay::random(2, &mut rng)));
        let certified: Vec<Option<CertifiedPair>> = rays
            .par_iter()
            .enumerate()
            .map(|(k, psi)| {
                let phi = psi.perp()?;
                let m = orth_measurement(psi)?;
                let scan = if k == 0 { ScanConfig::default() } else { light };
                Ok(certify_binary(theory, &m, psi, &phi, &scan)?.then(|| CertifiedPair {
                    overlap: psi.overlap(&phi),
                    psi: psi.clone(),
                    phi,
                    source: "orthogonal pair, antipodal measurement on an odd block".into(),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        pairs.extend(certified.into_iter().flatten());
        if psd.is_none() {
            for (b, blk) in theory.rep.blocks.iter().enumerate() {
                let j = blk.j.unwrap_or(0);
                let zonal = in_block(theory, b, &block_part(theory, b, theory.reference()));
                let mut directions = vec![(zonal, format!("zonal measurement on block j={j}"))];
                if j % 2 == 1 && j >= 3 {
                    directions.push((tangent_direction(theory, b)?, format!("tangent measurement on block j={j}")));
                }
                for (dir, source) in directions {
                    let tm = tight_measurement(theory, &dir, &ScanConfig::default())?;
                    for a in &tm.ones {
                        for z in &tm.zeros {
                            if certify_binary(theory, &tm.measurement, &a.ray, &z.ray, &ScanConfig::default())? {
                                pairs.push(CertifiedPair { psi: a.ray.clone(), phi: z.ray.clone(), overlap: a.ray.overlap(&z.ray), source: source.clone() });
                            }
                        }
                    }
                }
            }
        } else {
            let tangent = Theory::new(TheorySpec::new(2, theory.spec.j.iter().copied(), Restriction::Unrestricted)?)?;
            if let Ok(pair) = nonantipodal_pair(&tangent) {
                let (w0, w1) = (theory.omega(&pair.psi)?, theory.omega(&pair.phi)?);
                if psd.as_ref().unwrap().distinguishes(&[w0, w1]).is_some() {
                    pairs.push(CertifiedPair { overlap: pair.overlap, psi: pair.psi, phi: pair.phi, source: "pure-state-dual effect on a non-orthogonal pair".into() });
                }
            }
        }
    } else {
        let witnesses = default_witnesses(theory, cfg.seed)?;
        let d = theory.d();
        let psi = PureRay::basis(d, 1);
        for theta in [PI / 2.0, PI / 3.0] {
            let mut v = CVec::zeros(d);
            v[1] = c(theta.cos(), 0.0);
            v[2] = c(theta.sin(), 0.0);
            let phi = PureRay::new(&v)?;
            let states = [theory.omega(&psi)?, theory.omega(&phi)?];
            if let LpOutcome::Feasible { .. } = distinguishability_lp(theory, &states, &witnesses)? {
                pairs.push(CertifiedPair {
                    overlap: psi.overlap(&phi),
                    psi: psi.clone(),
                    phi,
                    source: format!("linear program on span{{|1>, |2>}}, angle {theta:.6}"),
                });
            }
        }
    }
    let mut distinct: Vec<f64> = Vec::new();
    let mut witness = None;
    for p in &pairs {
        if distinct.iter().all(|&o| (o - p.overlap).abs() > tol::OVERLAP) {
            distinct.push(p.overlap);
        }
    }
    'outer: for a in &pairs {
        for b in &pairs {
            if (a.overlap - b.overlap).abs() > tol::OVERLAP {
                witness = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(BitSymmetryReport { bit_symmetric: witness.is_none() && !pairs.is_empty(), witness, pairs, distinct_overlaps: distinct })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SwapCandidate {
    pub unitary: irreps::MatrixDump,
    pub involutive: bool,
    pub preserves_effects: bool,
    /// largest change of an effect vector under the candidate
    pub effect_change: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseGroupReport {
    pub lie_dimension: usize,
    pub discrete_swap_exists: bool,
    pub candidate: Option<SwapCandidate>,
}

/// The unitary mapping psi to phi-perp and phi to psi-perp (up to phases).
fn swap_unitary(psi: &PureRay, phi: &PureRay) -> Result<CMat> {
    let (p, q) = (psi.amplitudes(), phi.amplitudes());
    let (pp, qp) = (psi.perp()?.amplitudes(), phi.perp()?.amplitudes());
    let num = p.dotc(&qp);
    let den = pp.dotc(&q);
    if den.norm() < 1e-12 {
        return Err(Error::Degenerate("rays are orthogonal".into()));
    }
    let gamma = -num / den;
    Ok(&qp * p.adjoint() + (&q * pp.adjoint()) * gamma)
}

pub fn phase_group(theory: &Theory, m: &Measurement) -> Result<PhaseGroupReport> {
    if theory.d() != 2 {
        return Err(Error::InvalidArgument("phase groups are computed for d = 2".into()));
    }
    let gens = theory.rep.basis_generators();
    let n = theory.n();
    let k = m.effects.len();
    let mut a = RMat::zeros(n * k, gens.len());
    for (col, g) in gens.iter().enumerate() {
        for (i, e) in m.effects.iter().enumerate() {
            a.view_mut((i * n, col), (n, 1)).copy_from(&(g.transpose() * &e.e));
        }
    }
    let lie_dimension = gens.len() - linalg::rank(&a, tol::STRUCT);
    let mut candidate = None;
    if k == 2 {
        let tm = tight_measurement(theory, &m.effects[0].e, &ScanConfig::default())?;
        let tight = tm.ones.iter().all(|x| (m.effects[0].value(&x.state) - 1.0).abs() < tol::EFFECT)
            && tm.zeros.iter().all(|x| m.effects[0].value(&x.state).abs() < tol::EFFECT);
        if tight {
            if let Some((x, y)) = pick_pair(&tm) {
                let u = swap_unitary(&x.ray, &y.ray)?;
                let unitary_err = (u.adjoint() * &u - CMat::identity(2, 2)).norm();
                if unitary_err > 1e-9 {
                    return Err(Error::Structural("swap candidate is not unitary".into()));
                }
                let sq = linalg::to_special(&(&u * &u));
                let involutive = (&sq - CMat::identity(2, 2)).norm() < 1e-9 || (&sq + CMat::identity(2, 2)).norm() < 1e-9;
                let g = theory.group_element(&u)?;
                let change = m.effects.iter().map(|e| (g.transpose() * &e.e - &e.e).norm()).fold(0.0, f64::max);
                candidate = Some(SwapCandidate {
                    unitary: irreps::MatrixDump::from_complex(&u),
                    involutive,
                    preserves_effects: change < tol::STRUCT,
                    effect_change: change,
                });
            }
        }
    }
    Ok(PhaseGroupReport {
        lie_dimension,
        discrete_swap_exists: candidate.as_ref().is_some_and(|c| c.involutive && c.preserves_effects),
        candidate,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameReport {
    pub p_guess_a: f64,
    pub p_guess_a_prime: f64,
    pub strategy: String,
}

/// max mu . u subject to |u . w| <= 1 on witnesses.
fn separating_direction(mu: &RVec, witnesses: &[RVec]) -> Result<RVec> {
    let n = mu.len();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<microlp::Variable> = (0..n).map(|a| lp.add_var(mu[a], (-100.0, 100.0))).collect();
    for w in witnesses {
        let row: Vec<(microlp::Variable, f64)> = vars.iter().zip(w.iter()).map(|(&v, &x)| (v, x)).collect();
        lp.add_constraint(&row, ComparisonOp::Le, 1.0);
        lp.add_constraint(&row, ComparisonOp::Ge, -1.0);
    }
    match lp.solve() {
        Ok(microlp::SolveOutcome::Solution(sol)) => Ok(RVec::from_iterator(n, vars.iter().map(|v| sol[*v]))),
        Ok(_) => Err(Error::Lp("solver interrupted".into())),
        Err(e) => Err(Error::Lp(e.to_string())),
    }
}

/// Four-state encoding of two bits, and Bob's best guesses of each.
pub fn nse_game(theory: &Theory) -> Result<GameReport> {
    single_odd_j(theory)?;
    let psd = pure_state_dual_effects(theory).ok();
    let reference = theory.reference().clone();
    let mut candidates: Vec<(TightMeasurement, &str)> = Vec::new();
    let antipodal = TightMeasurement {
        measurement: antipodal_measurement(&reference),
        ones: vec![Extremizer { ray: PureRay::basis(2, 0), state: reference.clone(), value: 1.0 }],
        zeros: vec![Extremizer { ray: PureRay::basis(2, 1), state: -&reference, value: 0.0 }],
    };
    candidates.push((antipodal, "antipodal measurement"));
    if psd.is_none() {
        candidates.push((tangent_measurement(theory)?, "tangent measurement"));
    }
    let witnesses = if psd.is_none() { default_witnesses(theory, 0)? } else { Vec::new() };
    let mut best: Option<GameReport> = None;
    for (tm, name) in candidates {
        let w0 = tm.ones[0].state.clone();
        let w1 = pick_pair(&tm).map(|(_, z)| z.state.clone()).unwrap_or_else(|| -&w0);
        let e0 = &tm.measurement.effects[0];
        let p_guess_a = (e0.value(&w0) + e0.value(&-&w1) + (1.0 - e0.value(&w1)) + (1.0 - e0.value(&-&w0))) / 4.0;
        let mu = (&w0 + &w1) / 2.0;
        let (p_prime, how) = if mu.norm() < 1e-12 {
            (0.5, "encoded states average to the maximally mixed state".to_string())
        } else if psd.is_some() {
            let ex = effect_extrema_with(theory, &Effect::new(mu.clone(), 0.0), &ScanConfig::default())?;
            (0.5 + ex.max / (2.0 * reference.norm_squared()), "best pure-state-dual effect".to_string())
        } else {
            let u = separating_direction(&mu, &witnesses)?;
            let ex = effect_extrema_with(theory, &Effect::new(u.clone(), 0.0), &ScanConfig::default())?;
            (0.5 + mu.dot(&u) / (ex.max - ex.min), "tight effect along the LP separating direction".to_string())
        };
        let report = GameReport {
            p_guess_a,
            p_guess_a_prime: p_prime,
            strategy: format!("a encoded with the {name}; a' guessed with the {how}"),
        };
        if best.as_ref().map_or(true, |b| report.p_guess_a_prime > b.p_guess_a_prime + 1e-12) && (p_guess_a - 1.0).abs() < tol::EFFECT {
            best = Some(report);
        }
    }
    best.ok_or_else(|| Error::Verification("no perfect encoding of the first bit".into()))
}

#[derive(Clone, Debug)]
pub struct ThreeStateDemo {
    pub theory: Theory,
    pub rays: Vec<PureRay>,
    pub states: Vec<RVec>,
    pub measurement: Measurement,
    pub report: ValidationReport,
    pub lp: LpOutcome,
}

/// Three pairwise distinguishable states of the J = {1, 2} theory.
pub fn three_state_demo() -> Result<ThreeStateDemo> {
    let theory = Theory::new(TheorySpec::new(2, [1, 2], Restriction::Unrestricted)?)?;
    let (b1, b2) = (theory.rep.block_of(1).unwrap(), theory.rep.block_of(2).unwrap());
    let g1 = theory.rep.block_generators(b1);
    let g2 = theory.rep.block_generators(b2);
    // action of the j = 1 block on 3 x 3 matrices M -> R M - M R, column-major vec
    let adj: Vec<RMat> = g1
        .iter()
        .map(|r| {
            let id = RMat::identity(3, 3);
            id.kronecker(r) - r.transpose().kronecker(&id)
        })
        .collect();
    let vec_of = |m: &RMat| RVec::from_column_slice(m.as_slice());
    let b0 = block_part(&theory, b1, theory.reference());
    let seed_dst = vec_of(&(&b0 * b0.transpose() - RMat::identity(3, 3) / 3.0));
    let seed_src = block_part(&theory, b2, theory.reference());
    let kr = linalg::krylov(&g2, &seed_src, Some((&adj, &seed_dst)), 1e-8);
    if kr.basis.len() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: kr.basis.len() });
    }
    let t = linalg::columns(&kr.images, 9) * linalg::columns(&kr.basis, 5).transpose();
    for (ra, aa) in g2.iter().zip(&adj) {
        if (&t * ra - aa * &t).norm() > tol::STRUCT {
            return Err(Error::Structural("real-qutrit map does not intertwine".into()));
        }
    }
    let rays = vec![PureRay::basis(2, 0), angle_ray(0.0, PI / 2.0), angle_ray(PI / 2.0, PI / 2.0)];
    let states: Vec<RVec> = rays.iter().map(|r| theory.omega(r)).collect::<Result<_>>()?;
    let axes: Vec<RVec> = states.iter().map(|w| block_part(&theory, b1, w)).collect();
    for a in 0..3 {
        for b in 0..3 {
            let expect = if a == b { 1.0 } else { 0.0 };
            if (axes[a].dot(&axes[b]) - expect).abs() > tol::STRUCT {
                return Err(Error::Structural("real-qutrit axes are not orthonormal".into()));
            }
        }
    }
    let mut effects_out = Vec::new();
    for u in &axes {
        let p = vec_of(&(u * u.transpose() - RMat::identity(3, 3) / 3.0));
        effects_out.push(Effect::new(in_block(&theory, b2, &(t.transpose() * p)), 1.0 / 3.0));
    }
    let measurement = Measurement::new(effects_out);
    for (j, w) in states.iter().enumerate() {
        for (i, e) in measurement.effects.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (e.value(w) - expect).abs() > tol::EFFECT {
                return Err(Error::Verification(format!("E_{i}(w_{j}) = {}", e.value(w))));
            }
        }
    }
    let report = effects::validate_measurement(&theory, &measurement)?;
    if !report.valid {
        return Err(Error::Verification("three-outcome measurement is not valid".into()));
    }
    let lp = distinguishability_lp(&theory, &states, &default_witnesses(&theory, 0)?)?;
    Ok(ThreeStateDemo { theory, rays, states, measurement, report, lp })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportBlock {
    /// SU(d-1) family index from the Casimir eigenvalue
    pub i: Option<u32>,
    pub dim: usize,
    pub has_support: bool,
    pub max_norm: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub d: usize,
    pub j: u32,
    pub blocks: Vec<SupportBlock>,
    /// largest component of a restricted image outside the zero-charge subspace
    pub charged_residual: f64,
}

/// Projects images of rays in span{|1>, |2>} onto the zero-charge SU(d-1) blocks of D_j^d.
pub fn restriction_support(d: usize, j: u32, samples: usize, seed: u64) -> Result<RestrictionReport> {
    if d < 3 {
        return Err(Error::InvalidArgument("restriction needs d >= 3".into()));
    }
    let theory = Theory::new(TheorySpec::new(d, [j], Restriction::Unrestricted)?)?;
    let stab = irreps::stabilizer_generators(d);
    let charge = theory.rep.represent(&stab[0])?;
    let kq = linalg::null_space(&charge, tol::STRUCT);
    let gens: Vec<RMat> = stab[1..].iter().map(|g| Ok(kq.transpose() * theory.rep.represent(g)? * &kq)).collect::<Result<_>>()?;
    let sub = irreps::RepRealization::from_parts(d - 1, vec![irreps::BlockIndex { j: None, offset: 0, size: kq.ncols() }], gens)?;
    let blocks = irreps::casimir_blocks(&sub)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norms = vec![0.0f64; blocks.len()];
    let mut residual = 0.0f64;
    for _ in 0..samples {
        let mut v = CVec::zeros(d);
        v[1] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        v[2] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        let w = theory.omega(&PureRay::new(&v)?)?;
        let inside = kq.transpose() * &w;
        residual = residual.max((&w - &kq * &inside).norm());
        for (k, b) in blocks.iter().enumerate() {
            norms[k] = norms[k].max((b.basis.transpose() * &inside).norm());
        }
    }
    Ok(RestrictionReport {
        d,
        j,
        blocks: blocks
            .iter()
            .zip(norms)
            .map(|(b, nrm)| SupportBlock { i: casimir_label(d - 1, b.eigenvalue), dim: b.dim, has_support: nrm > 1e-6, max_norm: nrm })
            .collect(),
        charged_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_null_examples() {
        let v1 = x_null_vector(1).unwrap();
        assert!((v1.a[0] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((v1.vector[2] + v1.a[0]).abs() < 1e-12);
        let v3 = x_null_vector(3).unwrap();
        assert!(v3.a[0].abs() > v3.a[1].abs());
        let (x, _) = spin_generators(3).unwrap();
        let w = CVec::from_iterator(7, v3.vector.iter().map(|&a| c(a, 0.0)));
        assert!((x * w).norm() < 1e-10);
        assert!(x_null_vector(2).is_err());
    }

    #[test]
    fn g_symmetries() {
        for j in [1, 3, 5] {
            let p = GProfile::new(j).unwrap();
            assert!(p.value(0.0).unwrap().matrix_form.abs() < 1e-12);
            for k in 0..50 {
                let t = 0.1 + 0.13 * k as f64;
                let g = p.value(t).unwrap().matrix_form;
                assert!((g + p.value(t + PI).unwrap().matrix_form).abs() < 1e-9);
                assert!((g - p.value(PI - t).unwrap().matrix_form).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn g_extrema_examples() {
        let e1 = find_g_extrema(1).unwrap();
        assert_eq!(e1.len(), 2);
        assert!((e1[0].t - PI / 2.0).abs() < 1e-8 && e1[0].kind == ExtremumKind::Max);
        assert!((e1[1].t - 3.0 * PI / 2.0).abs() < 1e-8);
        let e3 = find_g_extrema(3).unwrap();
        let maxima: Vec<_> = e3.iter().filter(|x| x.kind == ExtremumKind::Max).collect();
        assert_eq!(maxima.len(), 2);
        assert!(((maxima[1].t - maxima[0].t) - PI).abs() > 1e-3);
        let p5 = GProfile::new(5).unwrap();
        let half = p5.value(PI / 2.0).unwrap().matrix_form;
        assert!(half > 0.0 && p5.value(PI / 10.0).unwrap().matrix_form > half);
    }

    #[test]
    fn swap_unitary_maps_rays() {
        let psi = PureRay::basis(2, 0);
        let phi = angle_ray(0.3, 1.1);
        let u = swap_unitary(&psi, &phi).unwrap();
        assert!(psi.transformed(&u).overlap(&phi.perp().unwrap()) > 1.0 - 1e-12);
        assert!(phi.transformed(&u).overlap(&psi.perp().unwrap()) > 1.0 - 1e-12);
    }
}
