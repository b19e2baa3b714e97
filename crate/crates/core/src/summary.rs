//! Tabulated outputs: weight diagrams, sampled g(t) curves and per-theory summary rows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::effects::{antipodal_measurement, max_distinguishable_search, Measurement, SearchBudget};
use crate::error::{Error, Result};
use crate::gpt::{Restriction, Theory, TheorySpec};
use crate::irreps::{realize, su_basis, IrrepSpec};
use crate::linalg::{c, CMat};
use crate::phenomenology::{self, BitSymmetryConfig, GExtremum, GProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightPoint {
    pub coords: Vec<f64>,
    pub multiplicity: usize,
}

/// Joint eigenvalues of the Cartan generators lambda_k / 2 on D_j^d, with multiplicities.
pub fn weights(d: usize, j: u32) -> Result<Vec<WeightPoint>> {
    let rep = realize(IrrepSpec { d, j })?;
    let basis = su_basis(d);
    let cartan: Vec<CMat> = basis[basis.len() + 1 - d..]
        .iter()
        .map(|g| rep.represent(&g.matrix).map(|r| r.map(|x| c(0.0, -x / 2.0))))
        .collect::<Result<_>>()?;
    let n = rep.n();
    let mut mix = CMat::zeros(n, n);
    for (k, h) in cartan.iter().enumerate() {
        mix += h * c(1.0 + 0.37 * (k as f64 + 1.0).sqrt(), 0.0);
    }
    let eig = mix.symmetric_eigen();
    let mut out: Vec<WeightPoint> = Vec::new();
    for col in 0..n {
        let v = eig.eigenvectors.column(col);
        let coords: Vec<f64> = cartan.iter().map(|h| (v.adjoint() * h * v)[(0, 0)].re).collect();
        for h in &cartan {
            let hv = h * v;
            let lam = (v.adjoint() * &hv)[(0, 0)];
            if (hv - v * lam).norm() > 1e-8 {
                return Err(Error::Structural("Cartan generators are not simultaneously diagonal".into()));
            }
        }
        match out.iter_mut().find(|w| w.coords.iter().zip(&coords).all(|(a, b)| (a - b).abs() < 1e-6)) {
            Some(w) => w.multiplicity += 1,
            None => out.push(WeightPoint { coords, multiplicity: 1 }),
        }
    }
    for w in &mut out {
        for x in &mut w.coords {
            if x.abs() < 1e-12 {
                *x = 0.0;
            }
        }
    }
    out.sort_by(|a, b| a.coords.partial_cmp(&b.coords).unwrap());
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GPlot {
    pub j: u32,
    pub samples: Vec<(f64, f64)>,
    pub extrema: Vec<GExtremum>,
}

/// g(t) at `count` equally spaced t in [0, 2 pi), plus its global extrema.
pub fn gplot(j: u32, count: usize) -> Result<GPlot> {
    let prof = GProfile::new(j)?;
    let samples = (0..count.max(1))
        .map(|k| {
            let t = 2.0 * PI * k as f64 / count.max(1) as f64;
            Ok((t, prof.value(t)?.matrix_form))
        })
        .collect::<Result<_>>()?;
    Ok(GPlot { j, samples, extrema: phenomenology::find_g_extrema(j)? })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub theory: String,
    pub max_distinguishable: usize,
    pub bit_symmetric: bool,
    pub phase_group: String,
    pub lie_dimension: usize,
    pub discrete_swap: bool,
    /// only defined for irreducible theories with odd j
    pub nse_holds: Option<bool>,
    pub p_guess_a_prime: Option<f64>,
}

/// Measurement used for the phase-group column: the tangent measurement when it is non-antipodal.
pub fn canonical_measurement(theory: &Theory) -> Result<Measurement> {
    if theory.spec.restriction == Restriction::Unrestricted {
        if let Ok(pair) = phenomenology::nonantipodal_pair(theory) {
            return Ok(pair.measurement);
        }
    }
    Ok(antipodal_measurement(theory.reference()))
}

pub fn report_row(spec: &TheorySpec) -> Result<ReportRow> {
    if spec.d != 2 {
        return Err(Error::InvalidArgument("summary rows are defined for d = 2".into()));
    }
    let theory = Theory::new(spec.clone())?;
    let search = max_distinguishable_search(&theory, &SearchBudget::default())?;
    let bits = phenomenology::bit_symmetry_test(&theory, &BitSymmetryConfig::default())?;
    let pg = phenomenology::phase_group(&theory, &canonical_measurement(&theory)?)?;
    let game = match spec.single_j() {
        Some(j) if j % 2 == 1 => Some(phenomenology::nse_game(&theory)?),
        _ => None,
    };
    let phase_group = match (pg.lie_dimension, pg.discrete_swap_exists) {
        (0, false) => "trivial".to_string(),
        (0, true) => "Z2".to_string(),
        (1, _) => "U(1)".to_string(),
        (k, _) => format!("dimension {k}"),
    };
    Ok(ReportRow {
        theory: spec.label(),
        max_distinguishable: search.lower_bound,
        bit_symmetric: bits.bit_symmetric,
        phase_group,
        lie_dimension: pg.lie_dimension,
        discrete_swap: pg.discrete_swap_exists,
        nse_holds: game.as_ref().map(|g| g.p_guess_a_prime <= 0.5 + 1e-6),
        p_guess_a_prime: game.map(|g| g.p_guess_a_prime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_one_weights() {
        let w = weights(2, 1).unwrap();
        let xs: Vec<f64> = w.iter().map(|p| p.coords[0]).collect();
        assert_eq!(xs.len(), 3);
        for (x, e) in xs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - e).abs() < 1e-9);
        }
    }

    #[test]
    fn adjoint_hexagon() {
        let w = weights(3, 1).unwrap();
        assert_eq!(w.iter().map(|p| p.multiplicity).sum::<usize>(), 8);
        let origin = w.iter().find(|p| p.coords.iter().all(|x| x.abs() < 1e-9)).unwrap();
        assert_eq!(origin.multiplicity, 2);
        let outer: Vec<_> = w.iter().filter(|p| p.multiplicity == 1).collect();
        assert_eq!(outer.len(), 6);
        for p in outer {
            assert!((p.coords[0].hypot(p.coords[1]) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn gplot_starts_at_zero() {
        let g = gplot(3, 64).unwrap();
        assert_eq!(g.samples[0], (0.0, 0.0));
        assert_eq!(g.extrema.len(), 4);
    }
}
