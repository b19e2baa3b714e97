use std::path::PathBuf;

use bornlab::effects::{
    antipodal_measurement, default_witnesses, distinguishability_lp, max_distinguishable_search, pure_state_dual_effects, LpOutcome,
    MeasurementJson, SearchBudget, ValidationReport,
};
use bornlab::gpt::{OrbitGrid, PureRay, Restriction, Theory, TheorySpec};
use bornlab::irreps::IrrepSpec;
use bornlab::linalg::CVec;
use bornlab::partitions::{branch, branch_zero_charge, dimension_formula, Partition};
use bornlab::phenomenology::{self, BitSymmetryConfig};
use bornlab::summary::{self, canonical_measurement, report_row, ReportRow};
use bornlab::symtensor::crosscheck_random;
use bornlab::{Error, Measurement, Result};
use clap::{Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{Output, Table};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MeasurementChoice {
    /// tangent measurement when it separates non-antipodal states, else antipodal
    Canonical,
    Antipodal,
    Tangent,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// realize the representation and print its block layout
    Build {
        /// include the generator matrices
        #[arg(long)]
        dump: bool,
    },
    /// sample pure states on an (s, t) grid, or Haar-random with --samples
    Orbit,
    /// decide perfect distinguishability of the given rays
    Distinguish {
        /// complex amplitudes, e.g. --ray 1,0 --ray 0.6,0.8i
        #[arg(long = "ray")]
        rays: Vec<String>,
    },
    /// greedy search for a large distinguishable set
    Maxdist,
    /// compare overlaps of certified distinguishable pairs
    Bitsym,
    /// Lie dimension and discrete swap of a measurement's phase group
    Phasegroup {
        #[arg(long, value_enum, default_value = "canonical")]
        measurement: MeasurementChoice,
        /// JSON file with {"effects": [{"e": [...], "c": ...}, ...]}
        #[arg(long)]
        effects: Option<PathBuf>,
    },
    /// four-state encoding of two bits
    Nse,
    /// three pairwise distinguishable states for J = {1, 2}
    Threestate,
    /// SU(d-1) x U(1) branching of D_j^d
    Branch,
    /// weight diagram of D_j^d
    Weights,
    /// sampled g(t) with its global extrema
    Gplot,
    /// affine versus tensor-power probabilities on random inputs
    Crosscheck,
    /// one summary row per theory
    Report {
        /// rows for J={1}, J={3}, pure-state-dual J={3} and J={1,2}
        #[arg(long)]
        canonical: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build { .. } => "build",
            Command::Orbit => "orbit",
            Command::Distinguish { .. } => "distinguish",
            Command::Maxdist => "maxdist",
            Command::Bitsym => "bitsym",
            Command::Phasegroup { .. } => "phasegroup",
            Command::Nse => "nse",
            Command::Threestate => "threestate",
            Command::Branch => "branch",
            Command::Weights => "weights",
            Command::Gplot => "gplot",
            Command::Crosscheck => "crosscheck",
            Command::Report { .. } => "report",
        }
    }

    /// Theory label recorded in the metadata, when the command uses --d/--J.
    pub fn theory_label(&self, cfg: &RunConfig) -> Option<String> {
        match self {
            Command::Threestate => TheorySpec::new(2, [1, 2], Restriction::Unrestricted).ok().map(|s| s.label()),
            Command::Report { canonical: true } => None,
            Command::Branch | Command::Weights | Command::Gplot => Some(format!("d={} J={:?}", cfg.d, cfg.j)),
            _ => cfg.theory_spec().ok().map(|s| s.label()),
        }
    }

    pub fn run(&self, cfg: &RunConfig) -> Result<Output> {
        match self {
            Command::Build { dump } => build(cfg, *dump),
            Command::Orbit => orbit(cfg),
            Command::Distinguish { rays } => distinguish(cfg, rays),
            Command::Maxdist => maxdist(cfg),
            Command::Bitsym => bitsym(cfg),
            Command::Phasegroup { measurement, effects } => phasegroup(cfg, *measurement, effects.as_ref()),
            Command::Nse => nse(cfg),
            Command::Threestate => threestate(),
            Command::Branch => branch_cmd(cfg),
            Command::Weights => weights(cfg),
            Command::Gplot => gplot(cfg),
            Command::Crosscheck => crosscheck(cfg),
            Command::Report { canonical } => report(cfg, *canonical),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn vec_json(v: &bornlab::linalg::RVec) -> Value {
    json!(v.iter().cloned().collect::<Vec<f64>>())
}

fn theory(cfg: &RunConfig) -> Result<Theory> {
    Theory::new(cfg.theory_spec()?)
}

fn build(cfg: &RunConfig, dump: bool) -> Result<Output> {
    let th = theory(cfg)?;
    let mut table = Table::new(&["j", "offset", "size", "dimension_formula"]);
    let mut blocks = Vec::new();
    for b in &th.rep.blocks {
        let j = b.j.unwrap_or(0);
        let formula = dimension_formula(cfg.d, j)?;
        table.push(vec![j.to_string(), b.offset.to_string(), b.size.to_string(), formula.to_string()]);
        blocks.push(json!({ "j": j, "offset": b.offset, "size": b.size, "dimension_formula": formula }));
    }
    let mut result = json!({ "d": cfg.d, "n": th.n(), "blocks": blocks, "reference": vec_json(th.reference()) });
    if dump {
        result["realization"] = to_json(&th.rep.to_dump());
    }
    Ok(Output { result, table: Some(table) })
}

fn orbit(cfg: &RunConfig) -> Result<Output> {
    let th = theory(cfg)?;
    let grid = match cfg.samples {
        Some(samples) => OrbitGrid::Haar { samples, seed: cfg.seed },
        None if cfg.d == 2 => OrbitGrid::Angles { ns: cfg.grid.0, nt: cfg.grid.1 },
        None => OrbitGrid::Haar { samples: 1000, seed: cfg.seed },
    };
    let points = th.orbit_sample(grid)?;
    let mut header = vec!["s".to_string(), "t".to_string()];
    header.extend((0..th.n()).map(|k| format!("w{k}")));
    let mut table = Table { header, rows: Vec::new() };
    let mut json_points = Vec::new();
    for p in &points {
        let mut row = vec![p.s.map_or(String::new(), |s| s.to_string()), p.t.map_or(String::new(), |t| t.to_string())];
        row.extend(p.state.iter().map(|x| x.to_string()));
        table.push(row);
        json_points.push(json!({ "s": p.s, "t": p.t, "ray": to_json(&p.ray), "state": vec_json(&p.state) }));
    }
    Ok(Output { result: json!({ "n": th.n(), "count": points.len(), "points": json_points }), table: Some(table) })
}

fn parse_ray(s: &str, d: usize) -> Result<PureRay> {
    let amps: Vec<Complex64> = s
        .split(',')
        .map(|p| p.trim().parse::<Complex64>().map_err(|_| Error::InvalidArgument(format!("bad amplitude {p:?}"))))
        .collect::<Result<_>>()?;
    if amps.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: amps.len() });
    }
    PureRay::new(&CVec::from_vec(amps))
}

fn report_json(r: &ValidationReport) -> Value {
    to_json(r)
}

fn measurement_json(m: &Measurement) -> Value {
    to_json(&m.to_json())
}

fn distinguish(cfg: &RunConfig, rays: &[String]) -> Result<Output> {
    let th = theory(cfg)?;
    let rays: Vec<PureRay> = if rays.is_empty() {
        let psi = PureRay::basis(cfg.d, 0);
        if cfg.d == 2 {
            vec![psi.clone(), psi.perp()?]
        } else {
            vec![psi, PureRay::basis(cfg.d, 1)]
        }
    } else {
        rays.iter().map(|r| parse_ray(r, cfg.d)).collect::<Result<_>>()?
    };
    let states: Vec<_> = rays.iter().map(|r| th.omega(r)).collect::<Result<_>>()?;
    let (outcome, measurement, extra) = match pure_state_dual_effects(&th) {
        Ok(family) => match family.distinguishes(&states) {
            Some(m) => ("feasible", Some(m), json!({ "method": "pure-state-dual family" })),
            None => ("infeasible", None, json!({ "method": "pure-state-dual family" })),
        },
        Err(_) => {
            let w = default_witnesses(&th, cfg.seed)?;
            match distinguishability_lp(&th, &states, &w)? {
                LpOutcome::Feasible { measurement, margin, rounds, report } => {
                    ("feasible", Some(measurement), json!({ "method": "lp", "margin": margin, "rounds": rounds, "validation": report_json(&report) }))
                }
                LpOutcome::Infeasible { margin, rounds } => ("infeasible", None, json!({ "method": "lp", "margin": margin, "rounds": rounds })),
                LpOutcome::Unverified { margin, rounds, worst_violation } => {
                    ("unverified", None, json!({ "method": "lp", "margin": margin, "rounds": rounds, "worst_violation": worst_violation }))
                }
            }
        }
    };
    if let Some(m) = &measurement {
        for (j, w) in states.iter().enumerate() {
            for (i, e) in m.effects.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (e.value(w) - expect).abs() > cfg.tol {
                    return Err(Error::Verification(format!("E_{i}(w_{j}) = {} is not within {} of {expect}", e.value(w), cfg.tol)));
                }
            }
        }
    }
    Ok(Output::json(json!({
        "rays": to_json(&rays),
        "outcome": outcome,
        "details": extra,
        "measurement": measurement.as_ref().map(measurement_json),
    })))
}

fn maxdist(cfg: &RunConfig) -> Result<Output> {
    let th = theory(cfg)?;
    let budget = SearchBudget { pool: cfg.samples.unwrap_or(24), restarts: 1, seed: cfg.seed };
    let res = max_distinguishable_search(&th, &budget)?;
    Ok(Output::json(json!({
        "lower_bound": res.lower_bound,
        "certified": to_json(&res.certified),
        "measurement": res.measurement.as_ref().map(measurement_json),
        "lp_calls": res.lp_calls,
    })))
}

fn bitsym(cfg: &RunConfig) -> Result<Output> {
    let th = theory(cfg)?;
    let rep = phenomenology::bit_symmetry_test(&th, &BitSymmetryConfig { random_pairs: cfg.samples.unwrap_or(100), seed: cfg.seed })?;
    let mut table = Table::new(&["overlap", "source"]);
    for p in &rep.pairs {
        table.push(vec![p.overlap.to_string(), p.source.clone()]);
    }
    Ok(Output { result: to_json(&rep), table: Some(table) })
}

fn phasegroup(cfg: &RunConfig, choice: MeasurementChoice, file: Option<&PathBuf>) -> Result<Output> {
    let th = theory(cfg)?;
    let m = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            let mj: MeasurementJson = serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("bad measurement file: {e}")))?;
            let m = mj.to_measurement();
            if m.effects.iter().any(|e| e.e.len() != th.n()) {
                return Err(Error::DimensionMismatch { expected: th.n(), got: m.effects[0].e.len() });
            }
            m
        }
        None => match choice {
            MeasurementChoice::Canonical => canonical_measurement(&th)?,
            MeasurementChoice::Antipodal => antipodal_measurement(th.reference()),
            MeasurementChoice::Tangent => phenomenology::tangent_measurement(&th)?.measurement,
        },
    };
    let rep = phenomenology::phase_group(&th, &m)?;
    Ok(Output::json(json!({ "measurement": measurement_json(&m), "phase_group": to_json(&rep) })))
}

fn nse(cfg: &RunConfig) -> Result<Output> {
    let th = theory(cfg)?;
    let g = phenomenology::nse_game(&th)?;
    let holds = g.p_guess_a_prime <= 0.5 + cfg.tol;
    let mut table = Table::new(&["p_guess_a", "p_guess_a_prime", "no_simultaneous_encoding"]);
    table.push(vec![g.p_guess_a.to_string(), g.p_guess_a_prime.to_string(), holds.to_string()]);
    Ok(Output { result: json!({ "game": to_json(&g), "no_simultaneous_encoding": holds }), table: Some(table) })
}

fn threestate() -> Result<Output> {
    let demo = phenomenology::three_state_demo()?;
    let matrix: Vec<Vec<f64>> = demo.states.iter().map(|w| demo.measurement.probabilities(w)).collect();
    let lp = match &demo.lp {
        LpOutcome::Feasible { margin, rounds, .. } => json!({ "outcome": "feasible", "margin": margin, "rounds": rounds }),
        LpOutcome::Infeasible { margin, rounds } => json!({ "outcome": "infeasible", "margin": margin, "rounds": rounds }),
        LpOutcome::Unverified { margin, rounds, .. } => json!({ "outcome": "unverified", "margin": margin, "rounds": rounds }),
    };
    if !demo.lp.is_feasible() {
        return Err(Error::Verification("LP oracle did not re-certify the three-state measurement".into()));
    }
    Ok(Output::json(json!({
        "rays": to_json(&demo.rays),
        "states": demo.states.iter().map(vec_json).collect::<Vec<_>>(),
        "measurement": measurement_json(&demo.measurement),
        "probabilities": matrix,
        "validation": report_json(&demo.report),
        "lp": lp,
    })))
}

fn branch_cmd(cfg: &RunConfig) -> Result<Output> {
    let j = cfg.single_j()?;
    let lambda = Partition::family(cfg.d, j);
    let blocks = branch(&lambda)?;
    let mut table = Table::new(&["mu", "u1_charge", "su_dim"]);
    for b in &blocks {
        let q = b.charge();
        table.push(vec![format!("{:?}", b.mu.parts), q.to_string(), b.su_dim.to_string()]);
    }
    let zero = if cfg.d >= 3 { Some(to_json(&branch_zero_charge(cfg.d, j)?)) } else { None };
    Ok(Output {
        result: json!({
            "lambda": lambda.parts,
            "dimension": dimension_formula(cfg.d, j)?,
            "blocks": blocks.iter().map(|b| json!({ "mu": b.mu.parts, "u1_charge": b.charge().to_string(), "su_dim": b.su_dim })).collect::<Vec<_>>(),
            "zero_charge": zero,
        }),
        table: Some(table),
    })
}

fn weights(cfg: &RunConfig) -> Result<Output> {
    let j = cfg.single_j()?;
    let w = summary::weights(cfg.d, j)?;
    let mut header: Vec<String> = (1..cfg.d).map(|k| format!("h{k}")).collect();
    header.push("multiplicity".into());
    let mut table = Table { header, rows: Vec::new() };
    for p in &w {
        let mut row: Vec<String> = p.coords.iter().map(|x| x.to_string()).collect();
        row.push(p.multiplicity.to_string());
        table.push(row);
    }
    let total: usize = w.iter().map(|p| p.multiplicity).sum();
    Ok(Output { result: json!({ "dimension": IrrepSpec { d: cfg.d, j }.dimension()?, "total": total, "weights": to_json(&w) }), table: Some(table) })
}

fn gplot(cfg: &RunConfig) -> Result<Output> {
    let j = cfg.single_j()?;
    let g = summary::gplot(j, cfg.samples.unwrap_or(1000))?;
    let mut table = Table::new(&["t", "g", "extremum"]);
    for (t, v) in &g.samples {
        table.push(vec![t.to_string(), v.to_string(), String::new()]);
    }
    for e in &g.extrema {
        table.push(vec![e.t.to_string(), e.value.to_string(), to_json(&e.kind).as_str().unwrap_or_default().to_string()]);
    }
    Ok(Output { result: to_json(&g), table: Some(table) })
}

fn crosscheck(cfg: &RunConfig) -> Result<Output> {
    let th = theory(cfg)?;
    let s = crosscheck_random(&th, cfg.samples.unwrap_or(1000), cfg.seed)?;
    if s.max_difference > cfg.tol {
        return Err(Error::Discrepancy(format!("max difference {} exceeds {}", s.max_difference, cfg.tol)));
    }
    Ok(Output::json(to_json(&s)))
}

fn row_cells(r: &ReportRow) -> Vec<String> {
    vec![
        r.theory.clone(),
        r.max_distinguishable.to_string(),
        r.bit_symmetric.to_string(),
        r.phase_group.clone(),
        r.nse_holds.map_or("n/a".into(), |b| b.to_string()),
        r.p_guess_a_prime.map_or(String::new(), |p| p.to_string()),
    ]
}

fn report(cfg: &RunConfig, canonical: bool) -> Result<Output> {
    let specs = if canonical {
        vec![
            TheorySpec::qubit_like(1)?,
            TheorySpec::qubit_like(3)?,
            TheorySpec::new(2, [3], Restriction::PureStateDual)?,
            TheorySpec::new(2, [1, 2], Restriction::Unrestricted)?,
        ]
    } else {
        vec![cfg.theory_spec()?]
    };
    let rows: Vec<ReportRow> = specs.iter().map(report_row).collect::<Result<_>>()?;
    let mut table = Table::new(&["theory", "max_distinguishable", "bit_symmetric", "phase_group", "no_simultaneous_encoding", "p_guess_a_prime"]);
    for r in &rows {
        table.push(row_cells(r));
    }
    Ok(Output { result: json!({ "rows": to_json(&rows) }), table: Some(table) })
}
