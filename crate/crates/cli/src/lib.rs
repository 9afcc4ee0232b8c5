//! Command-line front end: configuration, the five commands, JSON and text
//! output, and SVG rendering.

pub mod config;
pub mod svg;

use std::fmt::Write as _;
use std::path::PathBuf;

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use tropical_refine::invariants::{
    broccoli_from_r, generic_sample, invariant_report, r_from_n, refined_count, surgery,
    InvariantError,
};
use tropical_refine::lattice::{
    Degree, LatticeError, LatticeVector, MenelausViolation, MomentVector, RatPoint,
};
use tropical_refine::laurent::HalfLaurent;
use tropical_refine::real::{
    bridge_identity_holds, c_k_values, coamoeba_area, gamma_even, m_prime, maximal_split,
    oriented_solution_count, quad_indices, quad_refined_sum, quad_vertex_data, QuantumVertexKind,
    RealError, WeightedPlaneParam,
};
use tropical_refine::solver::TropicalSolution;
use tropical_refine::Rational;

pub use config::{Cli, Command, Format, MomentSource, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Menelaus(#[from] MenelausViolation),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("no solutions to render")]
    EmptyPlot,
}

impl CliError {
    /// Stable machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "Config",
            CliError::Io { .. } => "Io",
            CliError::Lattice(_) => "InvalidDegree",
            CliError::Menelaus(_) => "MenelausViolation",
            CliError::Invariant(e) => match e {
                InvariantError::Lattice(_) => "InvalidDegree",
                InvariantError::Tree(_) => "InvalidDegree",
                InvariantError::Solver(_) => "SolverFailure",
                InvariantError::NonGenericConfiguration { .. } => "NonGenericConfiguration",
                InvariantError::ExhaustedRetries { .. } => "ExhaustedRetries",
                InvariantError::InvarianceViolation { .. } => "InvarianceViolation",
                InvariantError::NotDivisible(_) => "NotDivisible",
                InvariantError::TheoremFormMismatch { .. } => "TheoremFormMismatch",
                InvariantError::NoTrials => "Config",
            },
            CliError::Real(RealError::NotDivisible(_)) => "NotDivisible",
            CliError::Real(_) => "RealStructure",
            CliError::EmptyPlot => "EmptyPlot",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({ "error": self.kind(), "message": self.to_string() });
        if let CliError::Invariant(InvariantError::InvarianceViolation {
            first_seed,
            first_moments,
            first_n,
            second_seed,
            second_moments,
            second_n,
        }) = self
        {
            out["details"] = json!({
                "first": { "seed": first_seed, "moments": moments_json(first_moments), "n_trop": first_n.to_json() },
                "second": { "seed": second_seed, "moments": moments_json(second_moments), "n_trop": second_n.to_json() },
            });
        }
        out
    }
}

pub fn rational_json(r: &Rational) -> Value {
    Value::from(r.to_string())
}

fn point_json(p: &RatPoint) -> Value {
    json!([rational_json(&p.x), rational_json(&p.y)])
}

fn vector_json(v: LatticeVector) -> Value {
    json!([v.x, v.y])
}

fn moments_json(m: &MomentVector) -> Value {
    Value::from(m.values().iter().map(rational_json).collect::<Vec<_>>())
}

fn int_json(n: &impl ToPrimitive) -> Value {
    n.to_i64().map_or(Value::Null, Value::from)
}

fn laurent_json(p: &HalfLaurent) -> Value {
    json!({ "terms": p.to_json(), "text": p.to_string() })
}

/// `{"type", "root", "lengths", "det", "mq"}`.
pub fn solution_json(sol: &TropicalSolution) -> Value {
    json!({
        "type": sol.combinatorial_type().serialize_tree(),
        "root": point_json(sol.root_pos()),
        "lengths": sol.lengths().iter().map(rational_json).collect::<Vec<_>>(),
        "det": int_json(sol.det_abs()),
        "mq": laurent_json(&sol.refined_multiplicity()),
    })
}

fn degree_json(d: &Degree) -> Value {
    serde_json::to_value(d).expect("degree serializes")
}

/// One moment vector with everything solved through it.
struct Sample {
    seed: Option<u64>,
    moments: MomentVector,
    n_trop: HalfLaurent,
    solutions: Vec<TropicalSolution>,
}

fn explicit_moments(values: &[Rational], delta_s: &Degree) -> Result<MomentVector, CliError> {
    let n = delta_s.len();
    if values.len() + 1 == n {
        Ok(MomentVector::new(values.to_vec()))
    } else if values.len() == n {
        Ok(MomentVector::from_full(values.to_vec(), delta_s)?)
    } else {
        Err(CliError::Config(format!(
            "{} moments given, expected {} or {}",
            values.len(),
            n - 1,
            n
        )))
    }
}

fn single_sample(cfg: &RunConfig, delta_s: &Degree) -> Result<Sample, CliError> {
    match &cfg.moments {
        MomentSource::Explicit(values) => {
            let moments = explicit_moments(values, delta_s)?;
            let (n_trop, solutions) = refined_count(delta_s, &moments)?;
            Ok(Sample {
                seed: None,
                moments,
                n_trop,
                solutions,
            })
        }
        MomentSource::Seeded { seed, trials } => {
            if *trials != 1 {
                return Err(CliError::Config(
                    "this command uses a single moment vector; drop --trials".into(),
                ));
            }
            let g = generic_sample(delta_s, *seed)?;
            Ok(Sample {
                seed: Some(*seed),
                moments: g.moments,
                n_trop: g.n_trop,
                solutions: g.solutions,
            })
        }
    }
}

struct Setup {
    delta: Degree,
    delta_s: Degree,
    n1: Option<LatticeVector>,
}

fn setup(cfg: &RunConfig) -> Result<Setup, CliError> {
    let delta = cfg
        .degree
        .clone()
        .ok_or_else(|| CliError::Config("--degree is required".into()))?;
    let (delta_s, n1) = surgery(&delta, cfg.n1, cfg.s)?;
    Ok(Setup { delta, delta_s, n1 })
}

fn header(cfg: &RunConfig, st: &Setup) -> Value {
    json!({
        "degree": degree_json(&st.delta),
        "delta_s": degree_json(&st.delta_s),
        "s": cfg.s,
        "n1": st.n1.map(vector_json),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

/// Runs the configured command and returns the bytes to write.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.command {
        Command::Enumerate => enumerate(cfg),
        Command::Invariant => invariant(cfg),
        Command::Quantum => quantum(cfg),
        Command::Realize => realize(cfg),
        Command::Plot => plot(cfg),
    }
}

/// Executes and writes to `--out` or stdout.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let output = execute(cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, output).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn join_rationals(values: &[Rational]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn enumerate(cfg: &RunConfig) -> Result<String, CliError> {
    let st = setup(cfg)?;
    let sample = single_sample(cfg, &st.delta_s)?;
    let complex: u64 = sample
        .solutions
        .iter()
        .filter_map(|s| s.det_abs().to_u64())
        .sum();
    if cfg.format == Format::Text {
        let mut t = String::new();
        writeln!(t, "degree {}", st.delta_s).unwrap();
        writeln!(t, "moments {}", join_rationals(sample.moments.values())).unwrap();
        writeln!(t, "N = {}", sample.n_trop).unwrap();
        writeln!(
            t,
            "{} solutions, complex count {complex}",
            sample.solutions.len()
        )
        .unwrap();
        for (i, s) in sample.solutions.iter().enumerate() {
            let lengths = join_rationals(s.lengths());
            writeln!(
                t,
                "{}: type {} root {} lengths [{lengths}] det {} mq {}",
                i + 1,
                s.combinatorial_type(),
                s.root_pos(),
                s.det_abs(),
                s.refined_multiplicity()
            )
            .unwrap();
        }
        return Ok(t);
    }
    let body = json!({
        "command": "enumerate",
        "seed": sample.seed,
        "moments": moments_json(&sample.moments),
        "n_trop": laurent_json(&sample.n_trop),
        "complex_count": complex,
        "solutions": sample.solutions.iter().map(solution_json).collect::<Vec<_>>(),
    });
    Ok(pretty(&merge(header(cfg, &st), body)))
}

fn invariant(cfg: &RunConfig) -> Result<String, CliError> {
    let st = setup(cfg)?;
    let m = st.delta.len();
    let (n_trop, r, bg, trials) = match &cfg.moments {
        MomentSource::Seeded { seed, trials } => {
            let report = invariant_report(&st.delta, cfg.n1, cfg.s, *trials, *seed)?;
            let trials: Vec<Value> = report
                .trials
                .iter()
                .map(|t| {
                    json!({
                        "seed": t.seed,
                        "moments": moments_json(&t.moments),
                        "attempts": t.attempts,
                        "solution_count": t.solution_count(),
                        "complex_count": int_json(&t.complex_count),
                        "n_trop": laurent_json(&t.n_trop),
                    })
                })
                .collect();
            (report.n_trop, report.r_inv, report.broccoli, trials)
        }
        MomentSource::Explicit(_) => {
            let sample = single_sample(cfg, &st.delta_s)?;
            let r = r_from_n(&sample.n_trop, m, cfg.s)?;
            let bg = broccoli_from_r(&r, m, cfg.s)?;
            let complex: u64 = sample
                .solutions
                .iter()
                .filter_map(|s| s.det_abs().to_u64())
                .sum();
            let trial = json!({
                "seed": null,
                "moments": moments_json(&sample.moments),
                "attempts": 1,
                "solution_count": sample.solutions.len(),
                "complex_count": complex,
                "n_trop": laurent_json(&sample.n_trop),
            });
            (sample.n_trop, r, bg, vec![trial])
        }
    };
    if cfg.format == Format::Text {
        let mut t = String::new();
        writeln!(t, "N = {n_trop}, R = {r}").unwrap();
        writeln!(t, "BG = {bg}").unwrap();
        writeln!(t, "m = {m}, s = {}, trials = {}", cfg.s, trials.len()).unwrap();
        return Ok(t);
    }
    let body = json!({
        "command": "invariant",
        "m": m,
        "n_trop": laurent_json(&n_trop),
        "r": laurent_json(&r),
        "broccoli": laurent_json(&bg),
        "trials": trials,
    });
    Ok(pretty(&merge(header(cfg, &st), body)))
}

fn quantum(cfg: &RunConfig) -> Result<String, CliError> {
    let m1 = cfg
        .m1
        .ok_or_else(|| CliError::Config("quantum needs --m1".into()))?;
    let delta = cfg.delta;
    let indices = quad_indices(m1, delta)?;
    let sum = quad_refined_sum(m1, delta)?;
    let areas = (0..m1)
        .map(|k| coamoeba_area(m1, k))
        .collect::<Result<Vec<_>, _>>()?;
    let c_k = c_k_values(m1)?;
    if cfg.format == Format::Text {
        let mut t = String::new();
        writeln!(t, "m1 = {m1}, delta = {delta}").unwrap();
        writeln!(t, "refined sum = {sum}").unwrap();
        writeln!(t, "k  index  area/pi^2  cot argument/pi").unwrap();
        for k in 0..m1 as usize {
            writeln!(t, "{k}  {}  {}  {}", indices[k], areas[k], c_k[k]).unwrap();
        }
        return Ok(t);
    }
    let rows: Vec<Value> = (0..m1 as usize)
        .map(|k| {
            json!({
                "k": k,
                "index": indices[k],
                "coamoeba_area": rational_json(&areas[k]),
                "cot_argument": rational_json(&c_k[k]),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "command": "quantum",
        "m1": m1,
        "delta": delta,
        "indices": indices,
        "refined_sum": laurent_json(&sum),
        "rows": rows,
    })))
}

fn realize(cfg: &RunConfig) -> Result<String, CliError> {
    let st = setup(cfg)?;
    let m = st.delta.len();
    let s = cfg.s;
    let sample = single_sample(cfg, &st.delta_s)?;
    let r = r_from_n(&sample.n_trop, m, s)?;
    let mut quarter_sum = HalfLaurent::zero();
    let mut curves = Vec::new();
    let mut text = String::new();
    for (i, sol) in sample.solutions.iter().enumerate() {
        let base = WeightedPlaneParam::from_solution(sol)?;
        let split = maximal_split(&base)?;
        let mp = m_prime(&split)?;
        let quarter = mp
            .div_integer(&4.into())
            .ok_or(RealError::InvalidSplit("m' divisible by 4"))?;
        quarter_sum = &quarter_sum + &quarter;
        let bridge = bridge_identity_holds(&mp, &sol.refined_multiplicity(), m, s);
        let oriented = oriented_solution_count(&split);
        let data = quad_vertex_data(&split)?;
        let quads: Vec<Value> = split
            .quad_vertices()
            .iter()
            .zip(&data)
            .map(|(w, d)| {
                let form = match &d.kind {
                    QuantumVertexKind::Quadrivalent(f) => Some(f),
                    QuantumVertexKind::TrivalentReal => None,
                };
                json!({
                    "base_vertex": w.base_vertex,
                    "m_w": w.multiplicity,
                    "m1": form.map(|f| f.m1),
                    "m2": form.and_then(|f| f.m2),
                    "m3": form.and_then(|f| f.m3()),
                    "indices": d.indices.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                    "refined_sum": laurent_json(&d.refined_sum),
                })
            })
            .collect();
        writeln!(
            text,
            "{}: type {} quads {} m_W [{}] fixed edges {} oriented curves {} m' = {mp} bridge {}",
            i + 1,
            sol.combinatorial_type(),
            split.quad_vertices().len(),
            split
                .quad_vertices()
                .iter()
                .map(|w| w.multiplicity.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            split.fixed_edges().len(),
            oriented,
            if bridge { "ok" } else { "FAILED" }
        )
        .unwrap();
        curves.push(json!({
            "solution": solution_json(sol),
            "even_graph_edges": gamma_even(&base),
            "quads": quads,
            "flat_vertices": split.flat_vertices().len(),
            "fixed_edges": split.fixed_edges().len(),
            "conjugate_pairs": split.conjugate_pairs(),
            "m_prime": laurent_json(&mp),
            "oriented_count": int_json(&oriented),
            "bridge_identity": bridge,
        }));
    }
    let matches = quarter_sum == r;
    if cfg.format == Format::Text {
        let mut t = String::new();
        writeln!(
            t,
            "degree {} moments {}",
            st.delta_s,
            join_rationals(sample.moments.values())
        )
        .unwrap();
        t.push_str(&text);
        writeln!(t, "sum m'/4 = {quarter_sum}").unwrap();
        writeln!(
            t,
            "R = {r} ({})",
            if matches { "reproduced" } else { "MISMATCH" }
        )
        .unwrap();
        return Ok(t);
    }
    let body = json!({
        "command": "realize",
        "m": m,
        "seed": sample.seed,
        "moments": moments_json(&sample.moments),
        "n_trop": laurent_json(&sample.n_trop),
        "r": laurent_json(&r),
        "quarter_m_prime_sum": laurent_json(&quarter_sum),
        "reconstruction_matches": matches,
        "curves": curves,
    });
    Ok(pretty(&merge(header(cfg, &st), body)))
}

fn plot(cfg: &RunConfig) -> Result<String, CliError> {
    let st = setup(cfg)?;
    let sample = single_sample(cfg, &st.delta_s)?;
    let polygon = st.delta_s.polygon()?;
    svg::render_svg(&sample.solutions, &polygon)
}
