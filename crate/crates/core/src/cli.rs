//! Batch commands behind the `netsync` binary.
//!
//! Each command reads a [`Scenario`], returns a JSON report and an exit
//! code: 0 ok, 1 usage, 2 violated hypothesis, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::graph::{CouplingMatrix, GraphSpectrum, DEFAULT_ZERO_TOL};
use crate::linalg::{eigenvalues, RealMatrix};
use crate::riccati::{DEFAULT_ARE_TOL, DEFAULT_PBH_TOL};
use crate::scenario::{InitialState, Scenario};
use crate::simulate::{
    check_coupling_strength, closed_loop_spectrum_check, random_initial_state, simulate,
    sync_error, Integrator, NetworkSetup, SimOptions, RNG_NAME, SPECTRUM_MATCH_TOL,
};
use crate::synthesis::{
    shifted_gain_sweep, synthesize, SweepGrid, SweepSummary, DEFAULT_IDENTITY_TOL,
};
use crate::system::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Synthesize,
    Spectrum,
    Simulate,
    Certify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Synthesize => "synthesize",
            Command::Spectrum => "spectrum",
            Command::Simulate => "simulate",
            Command::Certify => "certify",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub grid: Option<SweepGrid>,
    pub exact: bool,
}

/// Successful (or partially successful) run.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub written: Vec<PathBuf>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_hypothesis_violation() {
            EXIT_HYPOTHESIS
        } else if matches!(e, Error::InvalidInput(_) | Error::SigmaBelowOne(_)) {
            EXIT_USAGE
        } else {
            EXIT_NUMERICAL
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (exit {})", self.message, self.code)
    }
}

impl std::error::Error for Failure {}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `sigma_min,sigma_max,n_sigma,omega_max,n_omega`.
pub fn parse_grid(text: &str) -> Result<SweepGrid, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || usage(format!("--grid expects σmin,σmax,nσ,ωmax,nω; got {text:?}"));
    if parts.len() != 5 {
        return Err(bad());
    }
    let f = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let u = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let grid = SweepGrid {
        sigma_min: f(parts[0])?,
        sigma_max: f(parts[1])?,
        n_sigma: u(parts[2])?,
        omega_max: f(parts[3])?,
        n_omega: u(parts[4])?,
    };
    grid.validate().map_err(|e| usage(e.to_string()))?;
    Ok(grid)
}

pub fn run_file(command: Command, scenario: &Path, opts: &RunOptions) -> Result<Outcome, Failure> {
    let sc = Scenario::load(scenario)?;
    run(command, &sc, opts)
}

pub fn run(command: Command, sc: &Scenario, opts: &RunOptions) -> Result<Outcome, Failure> {
    match command {
        Command::Synthesize => cmd_synthesize(sc, opts),
        Command::Spectrum => cmd_spectrum(sc, opts),
        Command::Simulate => cmd_simulate(sc, opts),
        Command::Certify => cmd_certify(sc, opts),
    }
}

fn complex_pairs(values: &[num_complex::Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

/// Graph, its spectrum and the delta in force (explicit or `-Re(lambda2)`).
struct GraphContext {
    coupling: CouplingMatrix,
    spectrum: GraphSpectrum,
    delta: f64,
    delta_source: &'static str,
}

fn graph_context(sc: &Scenario) -> Result<Option<GraphContext>, Failure> {
    let Some(spec) = &sc.graph else {
        return Ok(None);
    };
    let coupling = spec.build()?;
    if !coupling.is_connected() {
        return Err(Error::Disconnected.into());
    }
    let spectrum = coupling.spectrum(DEFAULT_ZERO_TOL)?;
    let (delta, delta_source) = match (sc.delta, spectrum.coupling_strength()) {
        (Some(d), _) => (d, "scenario"),
        (None, Some(s)) => (s, "graph"),
        (None, None) => (1.0, "single agent default"),
    };
    if !(delta > 0.0) {
        return Err(Error::InvalidDelta(delta).into());
    }
    check_coupling_strength(&spectrum, coupling.gamma(), delta)?;
    Ok(Some(GraphContext {
        coupling,
        spectrum,
        delta,
        delta_source,
    }))
}

fn resolve_delta(
    sc: &Scenario,
    graph: &Option<GraphContext>,
) -> Result<(f64, &'static str), Failure> {
    match (graph, sc.delta) {
        (Some(g), _) => Ok((g.delta, g.delta_source)),
        (None, Some(d)) => Ok((d, "scenario")),
        (None, None) => Err(usage("scenario needs either \"delta\" or \"graph\"")),
    }
}

fn output_dir(sc: &Scenario, opts: &RunOptions) -> Option<PathBuf> {
    opts.out_dir.clone().or_else(|| sc.outputs.dir.clone())
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn to_pretty<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

fn finish(
    sc: &Scenario,
    opts: &RunOptions,
    file: &str,
    code: i32,
    report: Value,
) -> Result<Outcome, Failure> {
    let mut written = Vec::new();
    if let Some(dir) = output_dir(sc, opts) {
        written.push(write_file(&dir, file, &to_pretty(&report))?);
    }
    Ok(Outcome {
        code,
        report,
        written,
    })
}

/// `P`, the gain, the scale and the closed-loop spectrum of `A - BB'P`.
pub fn cmd_synthesize(sc: &Scenario, opts: &RunOptions) -> Result<Outcome, Failure> {
    let system = sc.system_model()?;
    let graph = graph_context(sc)?;
    let (delta, delta_source) = resolve_delta(sc, &graph)?;
    let gains = synthesize(&system, delta)?;
    let closed = gains.are.closed_loop(system.a(), system.b())?;
    let closed_eigs = eigenvalues(&closed, f64::EPSILON)?;
    let p_norm = gains.are.p.frobenius_norm();
    let report = json!({
        "command": "synthesize",
        "mode": system.mode(),
        "n": system.n(),
        "m": system.m(),
        "P": gains.are.p.to_rows(),
        "gain_name": match system.mode() { Mode::Primal => "K = B'P", Mode::Dual => "L = PB" },
        "gain": gains.gain.to_rows(),
        "delta": delta,
        "delta_source": delta_source,
        "scale": gains.scale,
        "are_residual": gains.are.residual,
        "are_residual_bound": DEFAULT_ARE_TOL * (1.0 + p_norm * p_norm),
        "newton_steps": gains.are.newton_steps,
        "closed_loop_eigenvalues": complex_pairs(&closed_eigs.sorted()),
        "tolerances": {
            "are": DEFAULT_ARE_TOL,
            "pbh": DEFAULT_PBH_TOL,
            "graph_zero": DEFAULT_ZERO_TOL,
        },
    });
    finish(sc, opts, "synthesize.json", EXIT_OK, report)
}

/// Connectivity, eigenvalues, `lambda2` and `r` of the scenario graph.
pub fn cmd_spectrum(sc: &Scenario, opts: &RunOptions) -> Result<Outcome, Failure> {
    let spec = sc
        .graph
        .as_ref()
        .ok_or_else(|| usage("scenario has no \"graph\""))?;
    let coupling = spec.build()?;
    if !coupling.is_connected() {
        return Err(Error::Disconnected.into());
    }
    let s = coupling.spectrum(DEFAULT_ZERO_TOL)?;
    let report = json!({
        "command": "spectrum",
        "p": coupling.p(),
        "connected": true,
        "eigenvalues": complex_pairs(&s.eigenvalues.sorted()),
        "zero_multiplicity": s.zero_multiplicity,
        "lambda2": s.lambda2.map(|z| [z.re, z.im]),
        "coupling_strength": s.coupling_strength(),
        "r": s.r,
        "tolerances": { "graph_zero": DEFAULT_ZERO_TOL, "null_vector": 1e-10 },
    });
    finish(sc, opts, "spectrum.json", EXIT_OK, report)
}

/// Simulates the network, writes `trajectory.csv` and `summary.json`.
pub fn cmd_simulate(sc: &Scenario, opts: &RunOptions) -> Result<Outcome, Failure> {
    let system = sc.system_model()?;
    let graph = graph_context(sc)?.ok_or_else(|| usage("scenario has no \"graph\""))?;
    let gains = synthesize(&system, graph.delta)?;
    let np = system.n() * graph.coupling.p();
    let (x0, x0_source) = match &sc.sim.x0 {
        InitialState::Values(v) => (v.clone(), "scenario".to_string()),
        InitialState::Keyword(k) if k == "random" => (
            random_initial_state(np, sc.sim.seed),
            format!("uniform [-1, 1] from {RNG_NAME}({})", sc.sim.seed),
        ),
        InitialState::Keyword(k) => return Err(usage(format!("unknown x0 keyword {k:?}"))),
    };
    let integrator = if opts.exact {
        Integrator::Exact
    } else {
        sc.sim.integrator.map(Into::into).unwrap_or_default()
    };
    if let Some(h) = sc.sim.step {
        if !(h > 0.0) {
            return Err(usage(format!("sim.step must be positive, got {h}")));
        }
    }
    let setup = NetworkSetup::new(system.clone(), graph.coupling, gains, x0)?;
    let check = closed_loop_spectrum_check(&setup)?;
    let sim_opts = SimOptions {
        horizon: sc.sim.horizon,
        step: sc.sim.step,
        integrator,
    };
    let result = simulate(&setup, &sim_opts)?;
    let decay = sync_error(&result);
    let horizon = *result.times.last().unwrap_or(&0.0);
    let step = if result.times.len() > 1 {
        result.times[1]
    } else {
        0.0
    };

    let summary = json!({
        "command": "simulate",
        "mode": system.mode(),
        "reference": system.mode().reference_form(),
        "n": setup.n(),
        "p": setup.p(),
        "delta": graph.delta,
        "delta_source": graph.delta_source,
        "scale": setup.gains().scale,
        "lambda2": graph.spectrum.lambda2.map(|z| [z.re, z.im]),
        "r": graph.spectrum.r,
        "integrator": integrator,
        "horizon": horizon,
        "step": step,
        "samples": result.times.len(),
        "x0": x0_source,
        "seed": sc.sim.seed,
        "rng": RNG_NAME,
        "error": {
            "initial": decay.initial,
            "terminal": decay.terminal,
            "ratio": decay.ratio,
            "first_crossing": decay.first_crossing,
            "crossing_threshold": "1e-6 * (1 + e(0))",
            "peak": decay.peak,
        },
        "spectrum_check": {
            "passed": check.passed,
            "max_mismatch": check.max_mismatch,
            "tolerance": check.tolerance,
            "blocks_hurwitz": check.blocks_hurwitz,
            "decay_margin": check.decay_margin,
        },
        "tolerances": {
            "are": DEFAULT_ARE_TOL,
            "graph_zero": DEFAULT_ZERO_TOL,
            "spectrum_match": SPECTRUM_MATCH_TOL,
        },
    });

    let dir = output_dir(sc, opts).unwrap_or_else(|| PathBuf::from("."));
    let mut csv = Vec::new();
    result
        .write_csv(&mut csv)
        .map_err(|e| usage(format!("cannot format CSV: {e}")))?;
    let written = vec![
        write_file(&dir, "trajectory.csv", &csv)?,
        write_file(&dir, "summary.json", &to_pretty(&summary))?,
    ];
    Ok(Outcome {
        code: EXIT_OK,
        report: summary,
        written,
    })
}

/// Sweeps the shifted-gain certificate over a `(σ, ω)` grid.
pub fn cmd_certify(sc: &Scenario, opts: &RunOptions) -> Result<Outcome, Failure> {
    let grid = opts.grid.unwrap_or_default();
    grid.validate().map_err(|e| usage(e.to_string()))?;
    let system = sc.system_model()?;
    let a = system.a();
    let b = system.b();
    let are = crate::riccati::solve_are(a, b, DEFAULT_ARE_TOL)?;
    let certs = shifted_gain_sweep(
        a,
        b,
        &are.p,
        &grid.sigmas(),
        &grid.omegas(),
        DEFAULT_IDENTITY_TOL,
    )?;
    let summary = SweepSummary::from_certificates(&certs);
    let p_norm = are.p.frobenius_norm();
    let report = json!({
        "command": "certify",
        "grid": grid,
        "points": summary.points,
        "failures": summary.failures,
        "worst_max_real_part": summary.worst_max_real_part,
        "worst_max_real_part_at": summary.worst_max_real_part_at,
        "worst_identity_residual": summary.worst_identity_residual,
        "identity_residual_bound": DEFAULT_IDENTITY_TOL * (1.0 + p_norm * p_norm),
        "passed": summary.passed,
        "tolerances": { "identity": DEFAULT_IDENTITY_TOL, "are": DEFAULT_ARE_TOL },
    });
    let code = if summary.passed {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    };
    finish(sc, opts, "certify.json", code, report)
}

/// Reads a matrix-valued field of a report back into a matrix.
pub fn report_matrix(report: &Value, key: &str) -> Option<RealMatrix> {
    let rows: Vec<Vec<f64>> = serde_json::from_value(report.get(key)?.clone()).ok()?;
    RealMatrix::from_rows(&rows).ok()
}
