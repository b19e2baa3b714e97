//! State spaces: the reference vector, the map from rays to states, orbits and mixtures.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::irreps::{self, IrrepSpec, LieGenerator, RepRealization};
use crate::linalg::{self, c, CMat, CVec, Flow, RMat, RVec};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Restriction {
    Unrestricted,
    PureStateDual,
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Restriction::Unrestricted => "unrestricted",
            Restriction::PureStateDual => "pure-state-dual",
        })
    }
}

impl std::str::FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unrestricted" => Ok(Restriction::Unrestricted),
            "pure-state-dual" => Ok(Restriction::PureStateDual),
            other => Err(Error::InvalidArgument(format!("unknown restriction {other:?}"))),
        }
    }
}

/// Which irreps make up the state space and which effects are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TheorySpec {
    pub d: usize,
    pub j: BTreeSet<u32>,
    pub restriction: Restriction,
}

impl TheorySpec {
    pub fn new(d: usize, js: impl IntoIterator<Item = u32>, restriction: Restriction) -> Result<Self> {
        let j: BTreeSet<u32> = js.into_iter().collect();
        if d < 2 {
            return Err(Error::InvalidArgument("d must be at least 2".into()));
        }
        if j.is_empty() {
            return Err(Error::InvalidArgument("J must not be empty".into()));
        }
        if j.contains(&0) {
            return Err(Error::InvalidArgument("every j in J must be at least 1".into()));
        }
        if restriction == Restriction::PureStateDual && (d != 2 || j.len() != 1 || j.iter().all(|x| x % 2 == 0)) {
            return Err(Error::InvalidArgument("the pure-state-dual restriction needs d = 2 and a single odd j".into()));
        }
        Ok(TheorySpec { d, j, restriction })
    }

    pub fn qubit_like(j: u32) -> Result<Self> {
        Self::new(2, [j], Restriction::Unrestricted)
    }

    pub fn is_irreducible(&self) -> bool {
        self.j.len() == 1
    }

    pub fn single_j(&self) -> Option<u32> {
        self.is_irreducible().then(|| *self.j.iter().next().unwrap())
    }

    pub fn has_odd(&self) -> bool {
        self.j.iter().any(|x| x % 2 == 1)
    }

    pub fn label(&self) -> String {
        let js: Vec<String> = self.j.iter().map(|x| x.to_string()).collect();
        format!("d={} J={{{}}} {}", self.d, js.join(","), self.restriction)
    }
}

/// A unit vector in C^d with the first non-negligible amplitude real and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureRay {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl PureRay {
    pub fn new(v: &CVec) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 1e-300) {
            return Err(Error::InvalidArgument("a ray needs a non-zero vector".into()));
        }
        let mut w = v / c(norm, 0.0);
        if let Some(k) = (0..w.len()).find(|&k| w[k].norm() > 1e-12) {
            let ph = w[k].conj() / w[k].norm();
            w *= ph;
            w[k] = c(w[k].re, 0.0);
        }
        Ok(PureRay { re: w.iter().map(|z| z.re).collect(), im: w.iter().map(|z| z.im).collect() })
    }

    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = CVec::zeros(d);
        v[k] = c(1.0, 0.0);
        PureRay::new(&v).unwrap()
    }

    pub fn random<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        PureRay::new(&linalg::random_complex_vec(d, rng)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    pub fn amplitudes(&self) -> CVec {
        CVec::from_iterator(self.dim(), self.re.iter().zip(&self.im).map(|(&a, &b)| c(a, b)))
    }

    /// |<self|other>|
    pub fn overlap(&self, other: &PureRay) -> f64 {
        self.amplitudes().dotc(&other.amplitudes()).norm()
    }

    /// The orthogonal ray in C^2.
    pub fn perp(&self) -> Result<PureRay> {
        if self.dim() != 2 {
            return Err(Error::InvalidArgument("orthogonal complement ray only defined for d = 2".into()));
        }
        let a = self.amplitudes();
        PureRay::new(&CVec::from_vec(vec![-a[1].conj(), a[0].conj()]))
    }

    pub fn transformed(&self, u: &CMat) -> PureRay {
        PureRay::new(&(u * self.amplitudes())).unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub coords: RVec,
    pub kind: StateKind,
}

impl StateVector {
    pub fn pure(coords: RVec) -> Self {
        StateVector { coords, kind: StateKind::Pure }
    }

    pub fn mixed(coords: RVec) -> Self {
        StateVector { coords, kind: StateKind::Mixed }
    }
}

#[derive(Clone, Debug)]
pub struct Ensemble {
    pub entries: Vec<(f64, PureRay)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, PureRay)>) -> Result<Self> {
        if entries.iter().any(|(p, _)| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidArgument("probabilities must be non-negative".into()));
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        Ok(Ensemble { entries })
    }
}

/// Grid specification for orbit scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitGrid {
    /// s in [0, 2pi) with ns points, t in [0, pi] with nt points including both ends
    Angles { ns: usize, nt: usize },
    Haar { samples: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub ray: PureRay,
    pub state: RVec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub faithful: bool,
    pub witness: Option<(PureRay, PureRay)>,
    /// smallest distance seen between images of distinct sampled rays
    pub min_distance: Option<f64>,
}

/// A theory with its realization and reference vector.
#[derive(Clone, Debug)]
pub struct Theory {
    pub spec: TheorySpec,
    pub rep: RepRealization,
    reference: RVec,
    flows: Option<(Flow, Flow)>,
}

impl Theory {
    pub fn new(spec: TheorySpec) -> Result<Self> {
        let specs: Vec<IrrepSpec> = spec.j.iter().map(|&j| IrrepSpec { d: spec.d, j }).collect();
        let rep = irreps::direct_sum(&specs)?;
        Self::from_realization(spec, rep)
    }

    pub fn from_realization(spec: TheorySpec, rep: RepRealization) -> Result<Self> {
        let reference = reference_vector(&rep)?;
        let flows = if spec.d == 2 {
            Some((Flow::new(&rep.half(&LieGenerator::z())?), Flow::new(&rep.half(&LieGenerator::x())?)))
        } else {
            None
        };
        Ok(Theory { spec, rep, reference, flows })
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn reference(&self) -> &RVec {
        &self.reference
    }

    pub fn reference_vector(&self) -> StateVector {
        StateVector::pure(self.reference.clone())
    }

    pub fn group_element(&self, u: &CMat) -> Result<RMat> {
        self.rep.group_element(u)
    }

    /// Image of `psi`, lifted through the Gram-Schmidt completion.
    pub fn omega(&self, psi: &PureRay) -> Result<RVec> {
        self.check_ray(psi)?;
        let u = ray_unitary(psi);
        Ok(self.group_element(&u)? * &self.reference)
    }

    /// Image of `psi` through an arbitrary lift `u` with u psi_0 proportional to psi.
    pub fn omega_via(&self, psi: &PureRay, u: &CMat) -> Result<RVec> {
        self.check_ray(psi)?;
        let image = u.column(0).into_owned();
        if (image.dotc(&psi.amplitudes()).norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument("unitary does not map the first basis ray to psi".into()));
        }
        Ok(self.group_element(u)? * &self.reference)
    }

    pub fn omega_state(&self, psi: &PureRay) -> Result<StateVector> {
        Ok(StateVector::pure(self.omega(psi)?))
    }

    fn check_ray(&self, psi: &PureRay) -> Result<()> {
        if psi.dim() != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), got: psi.dim() });
        }
        Ok(())
    }

    fn two_angle_flows(&self) -> Result<&(Flow, Flow)> {
        self.flows.as_ref().ok_or_else(|| Error::InvalidArgument("the two-angle parametrization needs d = 2".into()))
    }

    /// exp(D(Z) s) exp(D(X) t) applied to the reference vector (d = 2).
    pub fn state_at(&self, s: f64, t: f64) -> Result<RVec> {
        let (fz, fx) = self.two_angle_flows()?;
        Ok(fz.apply(s, &fx.apply(t, &self.reference)))
    }

    pub fn flows(&self) -> Option<&(Flow, Flow)> {
        self.flows.as_ref()
    }

    pub fn orbit_sample(&self, grid: OrbitGrid) -> Result<Vec<OrbitPoint>> {
        match grid {
            OrbitGrid::Angles { ns, nt } => {
                let (fz, fx) = self.two_angle_flows()?;
                if ns == 0 || nt < 2 {
                    return Err(Error::InvalidArgument("grid needs ns >= 1 and nt >= 2".into()));
                }
                let columns: Vec<(f64, RVec)> = (0..nt)
                    .map(|l| {
                        let t = PI * l as f64 / (nt - 1) as f64;
                        (t, fx.apply(t, &self.reference))
                    })
                    .collect();
                let points: Vec<OrbitPoint> = (0..ns)
                    .into_par_iter()
                    .flat_map_iter(|k| {
                        let s = 2.0 * PI * k as f64 / ns as f64;
                        let zm = fz.matrix(s);
                        columns
                            .iter()
                            .map(move |(t, v)| OrbitPoint { s: Some(s), t: Some(*t), ray: angle_ray(s, *t), state: &zm * v })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                Ok(points)
            }
            OrbitGrid::Haar { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let rays: Vec<PureRay> = (0..samples).map(|_| PureRay::random(self.d(), &mut rng)).collect();
                rays.into_par_iter()
                    .map(|ray| Ok(OrbitPoint { s: None, t: None, state: self.omega(&ray)?, ray }))
                    .collect()
            }
        }
    }

    pub fn mix(&self, ensemble: &Ensemble) -> Result<StateVector> {
        let mut acc = RVec::zeros(self.n());
        for (p, ray) in &ensemble.entries {
            acc += self.omega(ray)? * *p;
        }
        let kind = if ensemble.entries.iter().filter(|(p, _)| *p > 0.0).count() <= 1 {
            StateKind::Pure
        } else {
            StateKind::Mixed
        };
        Ok(StateVector { coords: acc, kind })
    }

    pub fn faithfulness_check(&self, samples: usize, seed: u64) -> Result<FaithfulnessReport> {
        if self.d() == 2 {
            let psi0 = PureRay::basis(2, 0);
            let psi1 = PureRay::basis(2, 1);
            if self.spec.has_odd() {
                return Ok(FaithfulnessReport { faithful: true, witness: None, min_distance: None });
            }
            let dist = (self.omega(&psi0)? - self.omega(&psi1)?).norm();
            if dist >= tol::STRUCT {
                return Err(Error::Structural(format!("even-only theory separates orthogonal rays by {dist}")));
            }
            return Ok(FaithfulnessReport { faithful: false, witness: Some((psi0, psi1)), min_distance: Some(dist) });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(PureRay, PureRay)> =
            (0..samples).map(|_| (PureRay::random(self.d(), &mut rng), PureRay::random(self.d(), &mut rng))).collect();
        let dists: Vec<f64> = pairs
            .par_iter()
            .map(|(a, b)| Ok((self.omega(a)? - self.omega(b)?).norm()))
            .collect::<Result<Vec<_>>>()?;
        let (k, min) = dists.iter().cloned().enumerate().fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
        let faithful = min > 1e-4;
        Ok(FaithfulnessReport {
            faithful,
            witness: (!faithful).then(|| pairs[k].clone()),
            min_distance: Some(min),
        })
    }

    pub fn antipodal_check(&self, psi: &PureRay, phi: &PureRay) -> Result<bool> {
        if self.d() != 2 || !self.spec.has_odd() {
            return Err(Error::InvalidArgument("antipodality test needs a faithful d = 2 theory".into()));
        }
        Ok((self.omega(psi)? + self.omega(phi)?).norm() < tol::STRUCT)
    }
}

/// Per-block unit invariant of the stabilizer, with a positive leading component.
pub fn reference_vector(rep: &RepRealization) -> Result<RVec> {
    let mut out = RVec::zeros(rep.n());
    for (b, blk) in rep.blocks.iter().enumerate() {
        let sub = RepRealization::from_parts(
            rep.d,
            vec![irreps::BlockIndex { j: blk.j, offset: 0, size: blk.size }],
            rep.block_generators(b),
        )?;
        let inv = irreps::stabilizer_invariants(&sub)?;
        if inv.ncols() != 1 {
            return Err(Error::Structural(format!("stabilizer invariants in block {b} have dimension {}", inv.ncols())));
        }
        let mut v = inv.column(0).into_owned();
        v /= v.norm();
        if let Some(lead) = v.iter().find(|x| x.abs() > 1e-6) {
            if *lead < 0.0 {
                v = -v;
            }
        }
        out.rows_mut(blk.offset, blk.size).copy_from(&v);
    }
    Ok(out)
}

/// Unitary with first column psi and determinant one.
pub fn ray_unitary(psi: &PureRay) -> CMat {
    let d = psi.dim();
    let mut cols: Vec<CVec> = vec![psi.amplitudes()];
    let mut used = vec![false; d];
    while cols.len() < d {
        let mut best: Option<(usize, CVec, f64)> = None;
        for k in (0..d).filter(|&k| !used[k]) {
            let mut v = CVec::zeros(d);
            v[k] = c(1.0, 0.0);
            for _ in 0..2 {
                for q in &cols {
                    let p = q.dotc(&v);
                    v -= q * p;
                }
            }
            let nv = v.norm();
            if best.as_ref().map_or(true, |b| nv > b.2) {
                best = Some((k, v, nv));
            }
        }
        let (k, v, nv) = best.expect("a candidate remains");
        used[k] = true;
        cols.push(v / c(nv, 0.0));
    }
    let mut u = CMat::from_columns(&cols);
    let det = u.determinant();
    let ph = det.conj() / det.norm();
    for r in 0..d {
        u[(r, d - 1)] *= ph;
    }
    u
}

/// exp(K) with K = theta (v e_0^dagger - e_0 v^dagger), the geodesic lift of psi.
pub fn geodesic_generator(psi: &PureRay) -> CMat {
    let a = psi.amplitudes();
    let d = a.len();
    let phase = if a[0].norm() > 1e-15 { a[0].conj() / a[0].norm() } else { c(1.0, 0.0) };
    let a = a * phase;
    let cos = a[0].re.clamp(-1.0, 1.0);
    let mut v = a.clone();
    v[0] = c(0.0, 0.0);
    let sin = v.norm();
    let mut k = CMat::zeros(d, d);
    if sin < 1e-15 {
        return k;
    }
    let theta = sin.atan2(cos);
    let v = v / c(sin, 0.0);
    for r in 1..d {
        k[(r, 0)] += v[r] * theta;
        k[(0, r)] -= v[r].conj() * theta;
    }
    k
}

/// Ray exp(Z s / 2) exp(X t / 2) psi_0.
pub fn angle_ray(s: f64, t: f64) -> PureRay {
    let a = c(0.0, s / 2.0).exp() * (t / 2.0).cos();
    let b = c(0.0, 1.0) * c(0.0, -s / 2.0).exp() * (t / 2.0).sin();
    PureRay::new(&CVec::from_vec(vec![a, b])).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn theory(d: usize, js: &[u32]) -> Theory {
        Theory::new(TheorySpec::new(d, js.iter().copied(), Restriction::Unrestricted).unwrap()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(TheorySpec::new(2, [], Restriction::Unrestricted).is_err());
        assert!(TheorySpec::new(2, [0], Restriction::Unrestricted).is_err());
        assert!(TheorySpec::new(2, [2], Restriction::PureStateDual).is_err());
        assert!(TheorySpec::new(2, [3], Restriction::PureStateDual).is_ok());
        assert_eq!("pure-state-dual".parse::<Restriction>().unwrap(), Restriction::PureStateDual);
    }

    #[test]
    fn ray_phase_convention() {
        let r = PureRay::new(&CVec::from_vec(vec![c(0.0, 2.0), c(1.0, 1.0)])).unwrap();
        let a = r.amplitudes();
        assert!(a[0].im == 0.0 && a[0].re > 0.0);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let p = PureRay::new(&CVec::from_vec(vec![c(0.0, 0.0), c(0.0, -3.0)])).unwrap();
        assert_eq!(p.amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn reference_vectors() {
        let q = theory(2, &[1]);
        assert_eq!(q.reference().len(), 3);
        assert!((q.reference()[0] - 1.0).abs() < 1e-12);
        let t3 = theory(2, &[3]);
        assert!((t3.reference()[0] - 1.0).abs() < 1e-12);
        assert!(t3.reference().rows(1, 6).norm() < 1e-12);
        let t = theory(3, &[1]);
        assert!((t.reference().norm() - 1.0).abs() < 1e-12);
        for g in irreps::stabilizer_generators(3) {
            assert!((t.rep.represent(&g).unwrap() * t.reference()).norm() < 1e-9);
        }
    }

    #[test]
    fn omega_examples() {
        let t3 = theory(2, &[3]);
        let psi0 = PureRay::basis(2, 0);
        let psi1 = PureRay::basis(2, 1);
        assert!((t3.omega(&psi0).unwrap() - t3.reference()).norm() < 1e-12);
        assert!((t3.omega(&psi1).unwrap() + t3.reference()).norm() < 1e-9);
        let t2 = theory(2, &[2]);
        assert!((t2.omega(&psi1).unwrap() - t2.reference()).norm() < 1e-9);
    }

    #[test]
    fn omega_is_well_defined() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (d, js) in [(2usize, vec![3u32]), (2, vec![1, 2]), (3, vec![1]), (3, vec![2])] {
            let t = theory(d, &js);
            let stab = irreps::stabilizer_generators(d);
            for _ in 0..10 {
                let psi = PureRay::random(d, &mut rng);
                let direct = t.omega(&psi).unwrap();
                let geo = t.rep.represent(&geodesic_generator(&psi)).unwrap().exp() * t.reference();
                assert!((&direct - &geo).norm() < 1e-9);
                let mut k = CMat::zeros(d, d);
                for g in &stab {
                    k += g * c(rng.gen_range(-2.0..2.0), 0.0);
                }
                let u = ray_unitary(&psi) * k.exp();
                let other = t.omega_via(&psi, &u).unwrap();
                assert!((&direct - &other).norm() < 1e-9);
                assert!((direct.norm() - t.reference().norm()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn grid_orbit() {
        let q = theory(2, &[1]);
        let pts = q.orbit_sample(OrbitGrid::Angles { ns: 8, nt: 5 }).unwrap();
        assert_eq!(pts.len(), 40);
        for p in &pts {
            assert!((p.state.norm() - 1.0).abs() < 1e-12);
            assert!((q.omega(&p.ray).unwrap() - &p.state).norm() < 1e-9);
        }
        assert!((&pts[0].state - q.reference()).norm() < 1e-12);
        let t3 = theory(2, &[3]);
        for p in t3.orbit_sample(OrbitGrid::Angles { ns: 6, nt: 7 }).unwrap() {
            assert!((t3.omega(&p.ray).unwrap() - &p.state).norm() < 1e-9);
        }
    }

    #[test]
    fn mixing() {
        let q = theory(2, &[1]);
        let e = Ensemble::new(vec![(0.5, PureRay::basis(2, 0)), (0.5, PureRay::basis(2, 1))]).unwrap();
        assert!(q.mix(&e).unwrap().coords.norm() < 1e-12);
        assert!(Ensemble::new(vec![(0.7, PureRay::basis(2, 0))]).is_err());
        let t = theory(3, &[1]);
        let pts = t.orbit_sample(OrbitGrid::Haar { samples: 4000, seed: 3 }).unwrap();
        let w = 1.0 / pts.len() as f64;
        let ens = Ensemble::new(pts.iter().map(|p| (w, p.ray.clone())).collect()).unwrap();
        assert!(t.mix(&ens).unwrap().coords.norm() < 0.05);
    }

    #[test]
    fn faithfulness() {
        assert!(!theory(2, &[2]).faithfulness_check(0, 0).unwrap().faithful);
        assert!(theory(2, &[1, 2]).faithfulness_check(0, 0).unwrap().faithful);
        assert!(theory(3, &[2]).faithfulness_check(50, 1).unwrap().faithful);
    }

    #[test]
    fn antipodes() {
        let t3 = theory(2, &[3]);
        let psi0 = PureRay::basis(2, 0);
        assert!(t3.antipodal_check(&psi0, &PureRay::basis(2, 1)).unwrap());
        assert!(!t3.antipodal_check(&psi0, &psi0).unwrap());
        assert!(theory(2, &[2]).antipodal_check(&psi0, &psi0).is_err());
    }
}
