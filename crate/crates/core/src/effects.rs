//! Affine effects, measurements, validity over the state space and perfect
//! distinguishability by linear programming.

use std::f64::consts::PI;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{angle_ray, OrbitGrid, PureRay, Restriction, StateVector, Theory};
use crate::irreps::su_basis;
use crate::linalg::{c, CMat, RMat, RVec};
use crate::tol;

/// E(w) = e . w + c
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    pub e: RVec,
    pub c: f64,
}

impl Effect {
    pub fn new(e: RVec, c: f64) -> Self {
        Effect { e, c }
    }

    pub fn unit(n: usize) -> Self {
        Effect { e: RVec::zeros(n), c: 1.0 }
    }

    pub fn value(&self, w: &RVec) -> f64 {
        self.e.dot(w) + self.c
    }

    pub fn complement(&self) -> Effect {
        Effect { e: -&self.e, c: 1.0 - self.c }
    }
}

pub fn evaluate(effect: &Effect, state: &StateVector) -> Result<f64> {
    if effect.e.len() != state.coords.len() {
        return Err(Error::DimensionMismatch { expected: effect.e.len(), got: state.coords.len() });
    }
    Ok(effect.value(&state.coords))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub effects: Vec<Effect>,
}

impl Measurement {
    pub fn new(effects: Vec<Effect>) -> Self {
        Measurement { effects }
    }

    /// The two-outcome measurement {E, 1 - E}.
    pub fn binary(effect: Effect) -> Self {
        let other = effect.complement();
        Measurement { effects: vec![effect, other] }
    }

    pub fn probabilities(&self, w: &RVec) -> Vec<f64> {
        self.effects.iter().map(|e| e.value(w)).collect()
    }

    pub fn to_json(&self) -> MeasurementJson {
        MeasurementJson {
            effects: self.effects.iter().map(|e| EffectJson { e: e.e.iter().cloned().collect(), c: e.c }).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EffectJson {
    pub e: Vec<f64>,
    pub c: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasurementJson {
    pub effects: Vec<EffectJson>,
}

impl MeasurementJson {
    pub fn to_measurement(&self) -> Measurement {
        Measurement {
            effects: self.effects.iter().map(|e| Effect { e: RVec::from_vec(e.e.clone()), c: e.c }).collect(),
        }
    }
}

/// A pure state at which an effect attains an extreme value.
#[derive(Clone, Debug)]
pub struct Extremizer {
    pub ray: PureRay,
    pub state: RVec,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct Extrema {
    pub min: f64,
    pub argmin: Vec<Extremizer>,
    pub max: f64,
    pub argmax: Vec<Extremizer>,
    /// every refined local extremum, minima first
    pub local: Vec<Extremizer>,
}

/// How the orbit is scanned before refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub ns: usize,
    pub nt: usize,
    pub haar_samples: usize,
    pub seed: u64,
    /// refined starting points per direction
    pub starts: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { ns: 256, nt: 256, haar_samples: 4000, seed: 7, starts: 24 }
    }
}

/// Newton refinement of e . w over the orbit, moving through exp(sum_a delta_a K_a).
struct Refiner<'a> {
    theory: &'a Theory,
    gens: &'a [RMat],
    fund: Vec<CMat>,
}

impl<'a> Refiner<'a> {
    fn new(theory: &'a Theory) -> Self {
        Refiner { theory, gens: theory.rep.basis_generators(), fund: su_basis(theory.d()).into_iter().map(|g| g.matrix).collect() }
    }

    fn step(&self, ray: &PureRay, state: &RVec, delta: &[f64]) -> (PureRay, RVec) {
        let r = self.theory.rep.combine(delta).exp();
        let mut k = CMat::zeros(self.theory.d(), self.theory.d());
        for (f, &x) in self.fund.iter().zip(delta) {
            k += f * c(x, 0.0);
        }
        (ray.transformed(&k.exp()), r * state)
    }

    /// Local maximum of e . w starting from (ray, state).
    fn maximize(&self, e: &RVec, ray: PureRay, state: RVec) -> (PureRay, RVec, f64, bool) {
        let m = self.gens.len();
        let (mut ray, mut state) = (ray, state);
        let mut f = e.dot(&state);
        let mut converged = false;
        for _ in 0..300 {
            let tangents: Vec<RVec> = self.gens.iter().map(|g| g * &state).collect();
            let grad = RVec::from_iterator(m, tangents.iter().map(|t| e.dot(t)));
            if grad.norm() < tol::GRADIENT {
                converged = true;
                break;
            }
            let et: Vec<RVec> = self.gens.iter().map(|g| g.transpose() * e).collect();
            let hess = RMat::from_fn(m, m, |a, b| 0.5 * (et[a].dot(&tangents[b]) + et[b].dot(&tangents[a])));
            let eig = hess.symmetric_eigen();
            let lmax = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            let floor = (1e-3 * lmax).max(1e-12);
            let mut delta = RVec::zeros(m);
            for k in 0..m {
                let v = eig.eigenvectors.column(k);
                let gv = v.dot(&grad);
                delta += v * (gv / eig.eigenvalues[k].abs().max(floor));
            }
            let dn = delta.norm();
            if dn > 0.5 {
                delta *= 0.5 / dn;
            }
            let mut accepted = false;
            let mut scale = 1.0;
            for _ in 0..50 {
                let trial: Vec<f64> = delta.iter().map(|x| x * scale).collect();
                let (r2, s2) = self.step(&ray, &state, &trial);
                let f2 = e.dot(&s2);
                if f2 >= f - 1e-15 * f.abs().max(1.0) {
                    ray = r2;
                    state = s2;
                    f = f2;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (ray, state, f, converged)
    }
}

/// Starting points for refinement from a scan of the orbit.
fn scan_candidates(theory: &Theory, e: &RVec, cfg: &ScanConfig) -> Result<(Vec<(PureRay, RVec, f64)>, Vec<(PureRay, RVec, f64)>)> {
    if let Some((fz, fx)) = theory.flows() {
        let (ns, nt) = (cfg.ns, cfg.nt);
        let cols: Vec<RVec> = (0..nt).map(|l| fx.apply(PI * l as f64 / (nt - 1) as f64, theory.reference())).collect();
        let values: Vec<Vec<f64>> = (0..ns)
            .into_par_iter()
            .map(|k| {
                let es = fz.apply(-2.0 * PI * k as f64 / ns as f64, e);
                cols.iter().map(|v| es.dot(v)).collect()
            })
            .collect();
        let point = |k: usize, l: usize| {
            let (s, t) = (2.0 * PI * k as f64 / ns as f64, PI * l as f64 / (nt - 1) as f64);
            let ray = angle_ray(s, t);
            let state = fz.apply(s, &cols[l]);
            (ray, state, values[k][l])
        };
        let mut maxima = Vec::new();
        let mut minima = Vec::new();
        for k in 0..ns {
            for l in 0..nt {
                if (l == 0 || l == nt - 1) && k != 0 {
                    continue;
                }
                let v = values[k][l];
                let mut is_max = true;
                let mut is_min = true;
                for dk in [ns - 1, 0, 1] {
                    for dl in [-1i64, 0, 1] {
                        let ll = l as i64 + dl;
                        if ll < 0 || ll >= nt as i64 || (dk == 0 && dl == 0) {
                            continue;
                        }
                        let w = values[(k + dk) % ns][ll as usize];
                        is_max &= v >= w;
                        is_min &= v <= w;
                    }
                }
                if is_max {
                    maxima.push((k, l, v));
                }
                if is_min {
                    minima.push((k, l, v));
                }
            }
        }
        maxima.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
        minima.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap());
        maxima.truncate(cfg.starts);
        minima.truncate(cfg.starts);
        return Ok((
            maxima.iter().map(|&(k, l, _)| point(k, l)).collect(),
            minima.iter().map(|&(k, l, _)| point(k, l)).collect(),
        ));
    }
    let pts = theory.orbit_sample(OrbitGrid::Haar { samples: cfg.haar_samples, seed: cfg.seed })?;
    let mut scored: Vec<(PureRay, RVec, f64)> = pts.into_iter().map(|p| {
        let v = e.dot(&p.state);
        (p.ray, p.state, v)
    }).collect();
    let pick = |scored: &mut Vec<(PureRay, RVec, f64)>, descending: bool| {
        scored.sort_by(|a, b| if descending { b.2.partial_cmp(&a.2).unwrap() } else { a.2.partial_cmp(&b.2).unwrap() });
        let mut chosen: Vec<(PureRay, RVec, f64)> = Vec::new();
        for cand in scored.iter() {
            if chosen.len() >= cfg.starts {
                break;
            }
            if chosen.iter().all(|c| (&c.1 - &cand.1).norm() > 0.3) {
                chosen.push(cand.clone());
            }
        }
        chosen
    };
    let maxima = pick(&mut scored, true);
    let minima = pick(&mut scored, false);
    Ok((maxima, minima))
}

fn dedupe(mut found: Vec<Extremizer>, best: f64, maximize: bool) -> Vec<Extremizer> {
    found.retain(|x| if maximize { x.value >= best - tol::EFFECT } else { x.value <= best + tol::EFFECT });
    let mut out: Vec<Extremizer> = Vec::new();
    for x in found {
        if out.iter().all(|y| (&y.state - &x.state).norm() > tol::EXTREMIZER_DISTANCE) {
            out.push(x);
        }
    }
    out
}

/// Global extrema of w -> e . w + c over pure states.
pub fn effect_extrema_over_orbit(theory: &Theory, effect: &Effect) -> Result<Extrema> {
    effect_extrema_with(theory, effect, &ScanConfig::default())
}

pub fn effect_extrema_with(theory: &Theory, effect: &Effect, cfg: &ScanConfig) -> Result<Extrema> {
    if effect.e.len() != theory.n() {
        return Err(Error::DimensionMismatch { expected: theory.n(), got: effect.e.len() });
    }
    let e = &effect.e;
    if e.norm() == 0.0 {
        let ray = PureRay::basis(theory.d(), 0);
        let x = Extremizer { ray, state: theory.reference().clone(), value: effect.c };
        return Ok(Extrema { min: effect.c, argmin: vec![x.clone()], max: effect.c, argmax: vec![x.clone()], local: vec![x] });
    }
    let (max_starts, min_starts) = scan_candidates(theory, e, cfg)?;
    let refiner = Refiner::new(theory);
    let neg = -e;
    let maxima: Vec<Extremizer> = max_starts
        .into_par_iter()
        .map(|(ray, state, _)| {
            let (ray, state, f, _) = refiner.maximize(e, ray, state);
            Extremizer { ray, state, value: f + effect.c }
        })
        .collect();
    let minima: Vec<Extremizer> = min_starts
        .into_par_iter()
        .map(|(ray, state, _)| {
            let (ray, state, f, _) = refiner.maximize(&neg, ray, state);
            Extremizer { ray, state, value: -f + effect.c }
        })
        .collect();
    let max = maxima.iter().map(|x| x.value).fold(f64::NEG_INFINITY, f64::max);
    let min = minima.iter().map(|x| x.value).fold(f64::INFINITY, f64::min);
    let mut local = minima.clone();
    local.extend(maxima.iter().cloned());
    Ok(Extrema { min, argmin: dedupe(minima, min, false), max, argmax: dedupe(maxima, max, true), local })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Normalization,
    BelowZero,
    AboveOne,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub effect: Option<usize>,
    pub kind: ViolationKind,
    pub value: f64,
    pub ray: Option<PureRay>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// (min, max) of each effect over pure states
    pub ranges: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
struct DetailedValidation {
    report: ValidationReport,
    extrema: Vec<Extrema>,
}

fn validate_detailed(theory: &Theory, m: &Measurement, cfg: &ScanConfig) -> Result<DetailedValidation> {
    let n = theory.n();
    let mut violations = Vec::new();
    let mut esum = RVec::zeros(n);
    let mut csum = 0.0;
    for eff in &m.effects {
        if eff.e.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: eff.e.len() });
        }
        esum += &eff.e;
        csum += eff.c;
    }
    if esum.norm() > tol::NORMALIZATION {
        violations.push(Violation { effect: None, kind: ViolationKind::Normalization, value: esum.norm(), ray: None });
    }
    if (csum - 1.0).abs() > tol::NORMALIZATION {
        violations.push(Violation { effect: None, kind: ViolationKind::Normalization, value: csum, ray: None });
    }
    let extrema = m.effects.iter().map(|eff| effect_extrema_with(theory, eff, cfg)).collect::<Result<Vec<_>>>()?;
    let mut ranges = Vec::new();
    for (i, ex) in extrema.iter().enumerate() {
        ranges.push((ex.min, ex.max));
        if ex.min < -tol::EFFECT {
            violations.push(Violation { effect: Some(i), kind: ViolationKind::BelowZero, value: ex.min, ray: ex.argmin.first().map(|x| x.ray.clone()) });
        }
        if ex.max > 1.0 + tol::EFFECT {
            violations.push(Violation { effect: Some(i), kind: ViolationKind::AboveOne, value: ex.max, ray: ex.argmax.first().map(|x| x.ray.clone()) });
        }
    }
    Ok(DetailedValidation { report: ValidationReport { valid: violations.is_empty(), violations, ranges }, extrema })
}

pub fn validate_measurement(theory: &Theory, m: &Measurement) -> Result<ValidationReport> {
    Ok(validate_detailed(theory, m, &ScanConfig::default())?.report)
}

pub fn validate_measurement_with(theory: &Theory, m: &Measurement, cfg: &ScanConfig) -> Result<ValidationReport> {
    Ok(validate_detailed(theory, m, cfg)?.report)
}

/// Default relaxed-validity sample: a 64 x 64 angle grid for d = 2, Haar samples otherwise.
pub fn default_witnesses(theory: &Theory, seed: u64) -> Result<Vec<RVec>> {
    let grid = if theory.d() == 2 { OrbitGrid::Angles { ns: 64, nt: 64 } } else { OrbitGrid::Haar { samples: 2000, seed } };
    let pts = theory.orbit_sample(grid)?;
    Ok(pts
        .into_iter()
        .filter(|p| match p.t {
            Some(t) if t == 0.0 || t == PI => p.s == Some(0.0),
            _ => true,
        })
        .map(|p| p.state)
        .collect())
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    /// a verified measurement with E_i(w_j) = delta_ij
    Feasible { measurement: Measurement, margin: f64, rounds: usize, report: ValidationReport },
    /// the relaxed problem has no solution, so neither does the exact one
    Infeasible { margin: f64, rounds: usize },
    /// the cutting-plane loop ran out of rounds
    Unverified { margin: f64, rounds: usize, worst_violation: f64 },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn margin(&self) -> f64 {
        match self {
            LpOutcome::Feasible { margin, .. } | LpOutcome::Infeasible { margin, .. } | LpOutcome::Unverified { margin, .. } => *margin,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpConfig {
    pub max_rounds: usize,
    pub coefficient_bound: f64,
    pub scan: ScanConfig,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig { max_rounds: 20, coefficient_bound: 100.0, scan: ScanConfig::default() }
    }
}

/// Minimizes s subject to sum e_i = 0, sum c_i = 1, E_i(w_j) = delta_ij,
/// first-order stationarity of every E_i at every w_j, and E_i(w) >= -s on witnesses.
fn solve_relaxation(theory: &Theory, states: &[RVec], witnesses: &[RVec], bound: f64) -> Result<(f64, Measurement)> {
    let n = theory.n();
    let k = states.len();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<(Vec<microlp::Variable>, microlp::Variable)> = (0..k)
        .map(|_| ((0..n).map(|_| lp.add_var(0.0, (-bound, bound))).collect(), lp.add_var(0.0, (-bound, bound))))
        .collect();
    let slack = lp.add_var(1.0, (-1.0, 10.0));
    let add_row = |lp: &mut Problem, i: usize, w: &RVec, extra: Option<(microlp::Variable, f64)>, with_c: bool, op: ComparisonOp, rhs: f64| {
        let mut row: Vec<(microlp::Variable, f64)> = vars[i].0.iter().zip(w.iter()).filter(|(_, &x)| x != 0.0).map(|(&v, &x)| (v, x)).collect();
        if with_c {
            row.push((vars[i].1, 1.0));
        }
        if let Some(e) = extra {
            row.push(e);
        }
        lp.add_constraint(&row, op, rhs);
    };
    for a in 0..n {
        let row: Vec<(microlp::Variable, f64)> = vars.iter().map(|v| (v.0[a], 1.0)).collect();
        lp.add_constraint(&row, ComparisonOp::Eq, 0.0);
    }
    let row: Vec<(microlp::Variable, f64)> = vars.iter().map(|v| (v.1, 1.0)).collect();
    lp.add_constraint(&row, ComparisonOp::Eq, 1.0);
    let gens = theory.rep.basis_generators();
    for (j, w) in states.iter().enumerate() {
        let tangents: Vec<RVec> = gens.iter().map(|g| g * w).collect();
        for i in 0..k {
            add_row(&mut lp, i, w, None, true, ComparisonOp::Eq, if i == j { 1.0 } else { 0.0 });
            for t in &tangents {
                if t.norm() > 1e-12 {
                    add_row(&mut lp, i, t, None, false, ComparisonOp::Eq, 0.0);
                }
            }
        }
    }
    for w in witnesses {
        if states.iter().any(|s| (s - w).norm() < 1e-6) {
            continue;
        }
        for i in 0..k {
            add_row(&mut lp, i, w, Some((slack, 1.0)), true, ComparisonOp::Ge, 0.0);
        }
    }
    let sol = match lp.solve() {
        Ok(microlp::SolveOutcome::Solution(s)) => s,
        Ok(microlp::SolveOutcome::Interrupted(_)) => return Err(Error::Lp("solver interrupted".into())),
        Err(microlp::Error::Infeasible) => return Ok((f64::INFINITY, Measurement::new(Vec::new()))),
        Err(e) => return Err(Error::Lp(e.to_string())),
    };
    let measurement = Measurement::new(
        vars.iter()
            .map(|(ev, cv)| Effect { e: RVec::from_iterator(n, ev.iter().map(|v| sol[*v])), c: sol[*cv] })
            .collect(),
    );
    Ok((sol[slack], measurement))
}

/// Perfect distinguishability of pure states, with a verified certificate when feasible.
pub fn distinguishability_lp(theory: &Theory, states: &[RVec], witnesses: &[RVec]) -> Result<LpOutcome> {
    distinguishability_lp_with(theory, states, witnesses, &LpConfig::default())
}

pub fn distinguishability_lp_with(theory: &Theory, states: &[RVec], witnesses: &[RVec], cfg: &LpConfig) -> Result<LpOutcome> {
    if states.is_empty() {
        return Err(Error::InvalidArgument("need at least one state".into()));
    }
    if let Some(s) = states.iter().find(|s| s.len() != theory.n()) {
        return Err(Error::DimensionMismatch { expected: theory.n(), got: s.len() });
    }
    if theory.spec.restriction == Restriction::PureStateDual {
        return Err(Error::InvalidArgument("use the pure-state-dual rule for restricted theories".into()));
    }
    let mut pool: Vec<RVec> = witnesses.to_vec();
    let mut worst = 0.0;
    for round in 1..=cfg.max_rounds {
        let (margin, candidate) = solve_relaxation(theory, states, &pool, cfg.coefficient_bound)?;
        if !(margin <= tol::LP_FEASIBLE) {
            return Ok(LpOutcome::Infeasible { margin, rounds: round });
        }
        let measurement = polish(candidate);
        let detail = validate_detailed(theory, &measurement, &cfg.scan)?;
        let targets_ok = states.iter().enumerate().all(|(j, w)| {
            measurement.effects.iter().enumerate().all(|(i, e)| (e.value(w) - if i == j { 1.0 } else { 0.0 }).abs() < tol::EFFECT)
        });
        if detail.report.valid && targets_ok {
            return Ok(LpOutcome::Feasible { measurement, margin, rounds: round, report: detail.report });
        }
        worst = detail
            .report
            .violations
            .iter()
            .map(|v| match v.kind {
                ViolationKind::BelowZero => -v.value,
                ViolationKind::AboveOne => v.value - 1.0,
                ViolationKind::Normalization => v.value,
            })
            .fold(0.0, f64::max);
        let mut added = 0;
        for ex in &detail.extrema {
            for x in &ex.local {
                if x.value < -1e-9 || x.value > 1.0 + 1e-9 {
                    pool.push(x.state.clone());
                    added += 1;
                }
            }
        }
        if added == 0 {
            break;
        }
    }
    let (margin, _) = solve_relaxation(theory, states, &pool, cfg.coefficient_bound)?;
    Ok(LpOutcome::Unverified { margin, rounds: cfg.max_rounds, worst_violation: worst })
}

/// Removes solver round-off from the normalization identities.
fn polish(mut m: Measurement) -> Measurement {
    let k = m.effects.len();
    if k == 0 {
        return m;
    }
    let n = m.effects[0].e.len();
    let mut esum = RVec::zeros(n);
    let mut csum = 0.0;
    for e in &m.effects {
        esum += &e.e;
        csum += e.c;
    }
    for e in &mut m.effects {
        e.e -= &esum / k as f64;
        e.c += (1.0 - csum) / k as f64;
    }
    m
}

/// The measurement {(w/(2|w|^2), 1/2), (-w/(2|w|^2), 1/2)} built on a pure state w.
pub fn antipodal_measurement(w: &RVec) -> Measurement {
    let e = w / (2.0 * w.norm_squared());
    Measurement::binary(Effect::new(e, 0.5))
}

/// Effects proportional to pure states plus a constant offset.
pub struct PureStateDualFamily<'a> {
    theory: &'a Theory,
}

pub fn pure_state_dual_effects(theory: &Theory) -> Result<PureStateDualFamily<'_>> {
    if theory.spec.restriction != Restriction::PureStateDual {
        return Err(Error::InvalidArgument("theory is not pure-state-dual".into()));
    }
    Ok(PureStateDualFamily { theory })
}

impl PureStateDualFamily<'_> {
    pub fn effect_for(&self, psi: &PureRay) -> Result<Effect> {
        let w = self.theory.omega(psi)?;
        Ok(Effect::new(&w / (2.0 * w.norm_squared()), 0.5))
    }

    pub fn measurement_for(&self, psi: &PureRay) -> Result<Measurement> {
        Ok(antipodal_measurement(&self.theory.omega(psi)?))
    }

    /// Pure-state-dual theories only separate ray pairs whose images are antipodal.
    pub fn distinguishes(&self, states: &[RVec]) -> Option<Measurement> {
        match states {
            [w] => Some(Measurement::new(vec![Effect::unit(w.len())])),
            [a, b] if (a + b).norm() < tol::STRUCT => Some(antipodal_measurement(a)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// candidate rays tried at each greedy step
    pub pool: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { pool: 24, restarts: 1, seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub lower_bound: usize,
    pub certified: Vec<PureRay>,
    pub measurement: Option<Measurement>,
    pub lp_calls: usize,
}

fn candidate_pool(d: usize, size: usize, seed: u64) -> Vec<PureRay> {
    let mut out = Vec::new();
    if d == 2 {
        for l in 1..=4 {
            for k in 0..4 {
                out.push(angle_ray(PI * k as f64 / 2.0, PI * l as f64 / 4.0));
                if l == 4 {
                    break;
                }
            }
        }
    } else {
        for k in 1..d {
            out.push(PureRay::basis(d, k));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < size {
        out.push(PureRay::random(d, &mut rng));
    }
    out.truncate(size.max(1));
    out
}

/// Greedy search for a large perfectly distinguishable set of pure states.
pub fn max_distinguishable_search(theory: &Theory, budget: &SearchBudget) -> Result<SearchResult> {
    let witnesses = if theory.spec.restriction == Restriction::Unrestricted { default_witnesses(theory, budget.seed)? } else { Vec::new() };
    let psd = pure_state_dual_effects(theory).ok();
    let mut best = SearchResult { lower_bound: 1, certified: vec![PureRay::basis(theory.d(), 0)], measurement: None, lp_calls: 0 };
    let mut calls = 0;
    for restart in 0..budget.restarts.max(1) {
        let mut pool = candidate_pool(theory.d(), budget.pool, budget.seed.wrapping_add(restart as u64));
        if restart > 0 {
            pool.shuffle(&mut ChaCha8Rng::seed_from_u64(budget.seed ^ restart as u64));
        }
        let mut chosen = vec![PureRay::basis(theory.d(), 0)];
        let mut states = vec![theory.omega(&chosen[0])?];
        let mut measurement = None;
        loop {
            let mut grown = false;
            for cand in &pool {
                let w = theory.omega(cand)?;
                if states.iter().any(|s| (s - &w).norm() < tol::ANTIPODAL) {
                    continue;
                }
                let mut trial = states.clone();
                trial.push(w.clone());
                calls += 1;
                let found = match &psd {
                    Some(family) => family.distinguishes(&trial),
                    None => match distinguishability_lp(theory, &trial, &witnesses)? {
                        LpOutcome::Feasible { measurement, .. } => Some(measurement),
                        _ => None,
                    },
                };
                if let Some(m) = found {
                    if theory.d() == 2 && theory.spec.is_irreducible() && trial.len() > 2 {
                        return Err(Error::Verification("found three distinguishable states in an irreducible d = 2 theory".into()));
                    }
                    chosen.push(cand.clone());
                    states = trial;
                    measurement = Some(m);
                    grown = true;
                    break;
                }
            }
            if !grown {
                break;
            }
        }
        if chosen.len() > best.lower_bound {
            best = SearchResult { lower_bound: chosen.len(), certified: chosen, measurement, lp_calls: 0 };
        }
    }
    best.lp_calls = calls;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::TheorySpec;

    fn theory(js: &[u32]) -> Theory {
        Theory::new(TheorySpec::new(2, js.iter().copied(), Restriction::Unrestricted).unwrap()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let t = theory(&[1]);
        let w = t.reference_vector();
        assert_eq!(evaluate(&Effect::unit(3), &w).unwrap(), 1.0);
        let half = Effect::new(t.reference() / 2.0, 0.5);
        assert!((evaluate(&half, &w).unwrap() - 1.0).abs() < 1e-12);
        assert!(evaluate(&half, &StateVector::pure(-t.reference())).unwrap().abs() < 1e-12);
        assert!(evaluate(&half, &StateVector::pure(RVec::zeros(2))).is_err());
    }

    #[test]
    fn extrema_of_bloch_effect() {
        let t = theory(&[1]);
        let plus = angle_ray(0.0, PI / 2.0);
        let eff = Effect::new(t.omega(&plus).unwrap(), 0.0);
        let ex = effect_extrema_over_orbit(&t, &eff).unwrap();
        assert!((ex.max - 1.0).abs() < 1e-10 && (ex.min + 1.0).abs() < 1e-10);
        assert_eq!(ex.argmax.len(), 1);
        assert_eq!(ex.argmin.len(), 1);
        assert!(ex.argmax[0].ray.overlap(&plus) > 1.0 - 1e-9);
        let flat = effect_extrema_over_orbit(&t, &Effect::new(RVec::zeros(3), 0.3)).unwrap();
        assert_eq!((flat.min, flat.max), (0.3, 0.3));
    }

    #[test]
    fn tangent_effect_has_two_maxima() {
        let t = theory(&[3]);
        let x = t.rep.half(&crate::irreps::LieGenerator::x()).unwrap();
        let eff = Effect::new(&x * t.reference(), 0.0);
        let ex = effect_extrema_over_orbit(&t, &eff).unwrap();
        assert_eq!(ex.argmax.len(), 2);
        assert_eq!(ex.argmin.len(), 2);
    }

    #[test]
    fn validation_examples() {
        let t = theory(&[1]);
        let z = antipodal_measurement(t.reference());
        assert!(validate_measurement(&t, &z).unwrap().valid);
        let bad = Measurement::new(vec![Effect::new(t.reference().clone(), 0.5), Effect::new(-t.reference(), 0.5)]);
        let rep = validate_measurement(&t, &bad).unwrap();
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.kind == ViolationKind::BelowZero));
    }

    #[test]
    fn qubit_lp() {
        let t = theory(&[1]);
        let wit = default_witnesses(&t, 0).unwrap();
        let w = t.reference().clone();
        assert!(distinguishability_lp(&t, &[w.clone(), -&w], &wit).unwrap().is_feasible());
        let third = t.omega(&angle_ray(0.0, PI / 2.0)).unwrap();
        let out = distinguishability_lp(&t, &[w.clone(), -&w, third], &wit).unwrap();
        assert!(out.is_infeasible(), "{out:?}");
    }

    #[test]
    fn pure_state_dual_family() {
        let t = Theory::new(TheorySpec::new(2, [3], Restriction::PureStateDual).unwrap()).unwrap();
        let fam = pure_state_dual_effects(&t).unwrap();
        let psi0 = PureRay::basis(2, 0);
        let e = fam.effect_for(&psi0).unwrap();
        assert!((e.value(t.reference()) - 1.0).abs() < 1e-12);
        assert!((e.value(&RVec::zeros(7)) - 0.5).abs() < 1e-12);
        assert!(validate_measurement(&t, &fam.measurement_for(&psi0).unwrap()).unwrap().valid);
        assert!(pure_state_dual_effects(&theory(&[3])).is_err());
    }
}
