//! Stacked network dynamics, trajectory integration and synchronization
//! error.
//!
//! With stacked state `x = [x_1; ...; x_p]` the closed loop is
//!
//! ```text
//! primal:  x' = (I_p ⊗ A  + Γ ⊗ c·B K) x
//! dual:    x' = (I_p ⊗ A' + Γ ⊗ c·L B') x
//! ```
//!
//! and every agent converges to `(r' ⊗ e^{At}) x(0)` (`A'` in dual mode).

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{null_vector_residual, CouplingMatrix, GraphSpectrum, DEFAULT_ZERO_TOL};
use crate::linalg::{eigenvalues, expm, is_hurwitz, kron, RealMatrix};
use crate::synthesis::GainSynthesis;
use crate::system::{Mode, SystemModel};

/// Relative tolerance for the eigenvalue-multiset comparison.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-6;

/// Everything needed to simulate one network.
#[derive(Debug, Clone)]
pub struct NetworkSetup {
    system: SystemModel,
    coupling: CouplingMatrix,
    graph: GraphSpectrum,
    gains: GainSynthesis,
    x0: Vec<f64>,
}

impl NetworkSetup {
    /// Checks dimensions, connectivity and `-Re(lambda2) >= delta`.
    pub fn new(
        system: SystemModel,
        coupling: CouplingMatrix,
        gains: GainSynthesis,
        x0: Vec<f64>,
    ) -> Result<Self> {
        let (n, p) = (system.n(), coupling.p());
        if x0.len() != n * p {
            return Err(Error::DimensionMismatch {
                op: "NetworkSetup",
                detail: format!("x0 has {} entries, expected n*p = {}", x0.len(), n * p),
            });
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("initial state"));
        }
        if gains.mode != system.mode() {
            return Err(Error::InvalidInput(format!(
                "gains synthesized for {:?} mode but system is {:?}",
                gains.mode,
                system.mode()
            )));
        }
        let expected_gain = match system.mode() {
            Mode::Primal => (system.m(), n),
            Mode::Dual => (n, system.m()),
        };
        if gains.gain.shape() != expected_gain {
            return Err(Error::DimensionMismatch {
                op: "NetworkSetup",
                detail: format!(
                    "gain is {:?}, expected {:?}",
                    gains.gain.shape(),
                    expected_gain
                ),
            });
        }
        if !coupling.is_connected() {
            return Err(Error::Disconnected);
        }
        let graph = coupling.spectrum(DEFAULT_ZERO_TOL)?;
        check_coupling_strength(&graph, coupling.gamma(), gains.delta)?;
        Ok(NetworkSetup {
            system,
            coupling,
            graph,
            gains,
            x0,
        })
    }

    pub fn system(&self) -> &SystemModel {
        &self.system
    }

    pub fn coupling(&self) -> &CouplingMatrix {
        &self.coupling
    }

    pub fn graph(&self) -> &GraphSpectrum {
        &self.graph
    }

    pub fn gains(&self) -> &GainSynthesis {
        &self.gains
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn p(&self) -> usize {
        self.coupling.p()
    }

    /// Initial state of agent `i`.
    pub fn agent_x0(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.x0[i * n..(i + 1) * n]
    }

    /// Gain block multiplying `Γ`: `c·BK` (primal) or `c·LB'` (dual).
    pub fn coupling_block(&self) -> RealMatrix {
        let b = self.system.b();
        let g = self.gains.scaled_gain();
        match self.system.mode() {
            Mode::Primal => b.matmul(&g),
            Mode::Dual => g.matmul(&b.transpose()),
        }
        .expect("dimensions validated at construction")
    }
}

/// Rejects `-Re(lambda2) < delta` (up to rounding in `lambda2`).
pub fn check_coupling_strength(
    graph: &GraphSpectrum,
    gamma: &RealMatrix,
    delta: f64,
) -> Result<()> {
    if let Some(strength) = graph.coupling_strength() {
        let slack = 1e-9 * (1.0 + gamma.frobenius_norm());
        if strength + slack < delta {
            return Err(Error::CouplingTooWeak { strength, delta });
        }
    }
    Ok(())
}

/// `I_p ⊗ A + Γ ⊗ c·BK` (primal) or `I_p ⊗ A' + Γ ⊗ c·LB'` (dual).
pub fn build_closed_loop(setup: &NetworkSetup) -> RealMatrix {
    let p = setup.p();
    let drift = kron(&RealMatrix::identity(p), &setup.system.drift());
    let coupling = kron(setup.coupling.gamma(), &setup.coupling_block());
    drift.try_add(&coupling).expect("both terms are np x np")
}

/// `sum_i r_i e^{At} x_i(0)`, with `A'` in dual mode.
pub fn reference_trajectory(setup: &NetworkSetup, r: &[f64], t: f64) -> Result<Vec<f64>> {
    let gamma = setup.coupling.gamma();
    if r.len() != setup.p() {
        return Err(Error::DimensionMismatch {
            op: "reference_trajectory",
            detail: format!("r has {} entries for p = {}", r.len(), setup.p()),
        });
    }
    let res = null_vector_residual(gamma, r);
    if res > 1e-8 * (1.0 + gamma.frobenius_norm()) {
        return Err(Error::BadNullVector { residual: res });
    }
    let mean = weighted_initial_state(setup, r);
    expm(&setup.system.drift(), t)?.matvec(&mean)
}

fn weighted_initial_state(setup: &NetworkSetup, r: &[f64]) -> Vec<f64> {
    let n = setup.n();
    let mut mean = vec![0.0; n];
    for (i, &ri) in r.iter().enumerate() {
        for (m, &x) in mean.iter_mut().zip(setup.agent_x0(i)) {
            *m += ri * x;
        }
    }
    mean
}

/// How [`integrate`] advances the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// Classical fourth-order Runge–Kutta.
    #[default]
    Rk4,
    /// Propagation by the one-step transition matrix `e^{Mh}`.
    Exact,
}

/// Sampled solution of `x' = Mx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// Integrates `x' = Mx` on `[0, horizon]` with `ceil(horizon / step)`
/// equal steps no longer than `step`.
pub fn integrate(
    m: &RealMatrix,
    x0: &[f64],
    horizon: f64,
    step: f64,
    method: Integrator,
) -> Result<Trajectory> {
    let dim = m.require_square("integrate")?;
    if x0.len() != dim {
        return Err(Error::DimensionMismatch {
            op: "integrate",
            detail: format!("x0 has {} entries for a {dim}x{dim} system", x0.len()),
        });
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidInput(format!(
            "horizon must be nonnegative, got {horizon}"
        )));
    }
    let steps = (horizon / step - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 {
        0.0
    } else {
        horizon / steps as f64
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());

    let transition = match method {
        Integrator::Exact if steps > 0 => Some(expm(m, h)?),
        _ => None,
    };
    let mut x = x0.to_vec();
    for k in 1..=steps {
        x = match &transition {
            Some(phi) => phi.matvec(&x)?,
            None => rk4_step(m, &x, h),
        };
        let t = if k == steps { horizon } else { k as f64 * h };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationDiverged { time: t });
        }
        times.push(t);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

fn rk4_step(m: &RealMatrix, x: &[f64], h: f64) -> Vec<f64> {
    let axpy = |y: &[f64], a: f64, k: &[f64]| -> Vec<f64> {
        y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect()
    };
    let k1 = m.matvec_unchecked(x);
    let k2 = m.matvec_unchecked(&axpy(x, 0.5 * h, &k1));
    let k3 = m.matvec_unchecked(&axpy(x, 0.5 * h, &k2));
    let k4 = m.matvec_unchecked(&axpy(x, h, &k3));
    x.iter()
        .enumerate()
        .map(|(i, xi)| xi + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integration settings for [`simulate`]; `None` picks the defaults
/// `T = 20/delta` and `h = min(1e-2, 0.1/|M|)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimOptions {
    pub horizon: Option<f64>,
    pub step: Option<f64>,
    pub integrator: Integrator,
}

pub fn default_step(m: &RealMatrix) -> f64 {
    let norm = m.frobenius_norm();
    if norm > 0.0 {
        (0.1 / norm).min(1e-2)
    } else {
        1e-2
    }
}

/// Network trajectory with its synchronization reference.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub n: usize,
    pub p: usize,
    pub times: Vec<f64>,
    /// Stacked `np` state per sample.
    pub states: Vec<Vec<f64>>,
    /// `n`-vector reference per sample.
    pub reference: Vec<Vec<f64>>,
    /// `|x_i(t) - reference(t)|` per agent per sample.
    pub errors: Vec<Vec<f64>>,
}

/// Integrates the closed loop and evaluates the reference trajectory and
/// per-agent errors at every sample.
pub fn simulate(setup: &NetworkSetup, opts: &SimOptions) -> Result<SimulationResult> {
    let m = build_closed_loop(setup);
    let horizon = opts.horizon.unwrap_or(20.0 / setup.gains.delta);
    let step = opts.step.unwrap_or_else(|| default_step(&m));
    let traj = integrate(&m, &setup.x0, horizon, step, opts.integrator)?;
    let (n, p) = (setup.n(), setup.p());
    let mean = weighted_initial_state(setup, &setup.graph.r);
    let drift = setup.system.drift();
    let mut reference = Vec::with_capacity(traj.times.len());
    let mut errors = Vec::with_capacity(traj.times.len());
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let xr = expm(&drift, *t)?.matvec(&mean)?;
        let err: Vec<f64> = (0..p)
            .map(|i| {
                x[i * n..(i + 1) * n]
                    .iter()
                    .zip(&xr)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        reference.push(xr);
        errors.push(err);
    }
    Ok(SimulationResult {
        n,
        p,
        times: traj.times,
        states: traj.states,
        reference,
        errors,
    })
}

impl SimulationResult {
    /// `max_i |x_i(t) - reference(t)|` at every sample.
    pub fn max_errors(&self) -> Vec<f64> {
        self.errors
            .iter()
            .map(|e| e.iter().copied().fold(0.0, f64::max))
            .collect()
    }

    /// `max_{i,j} |x_i(t) - x_j(t)|` at every sample.
    pub fn disagreement(&self) -> Vec<f64> {
        let n = self.n;
        self.states
            .iter()
            .map(|x| {
                let mut worst: f64 = 0.0;
                for i in 0..self.p {
                    for j in i + 1..self.p {
                        let d = (0..n)
                            .map(|k| (x[i * n + k] - x[j * n + k]).powi(2))
                            .sum::<f64>()
                            .sqrt();
                        worst = worst.max(d);
                    }
                }
                worst
            })
            .collect()
    }

    /// Writes `time, x_1_1..x_p_n, ref_1..ref_n, err_1..err_p`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut header = vec!["time".to_string()];
        for i in 1..=self.p {
            for k in 1..=self.n {
                header.push(format!("x_{i}_{k}"));
            }
        }
        header.extend((1..=self.n).map(|k| format!("ref_{k}")));
        header.extend((1..=self.p).map(|i| format!("err_{i}")));
        writeln!(out, "{}", header.join(","))?;
        for s in 0..self.times.len() {
            let mut row = vec![self.times[s].to_string()];
            row.extend(self.states[s].iter().map(f64::to_string));
            row.extend(self.reference[s].iter().map(f64::to_string));
            row.extend(self.errors[s].iter().map(f64::to_string));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Decay of the synchronization error `e(t) = max_i |x_i(t) - x̄(t)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    pub initial: f64,
    pub terminal: f64,
    /// `terminal / initial`; `None` when the agents start synchronized.
    pub ratio: Option<f64>,
    /// First sample time with `e(t) <= 1e-6 (1 + e(0))`.
    pub first_crossing: Option<f64>,
    pub peak: f64,
}

pub fn sync_error(result: &SimulationResult) -> DecayReport {
    let e = result.max_errors();
    let initial = e.first().copied().unwrap_or(0.0);
    let terminal = e.last().copied().unwrap_or(0.0);
    let threshold = 1e-6 * (1.0 + initial);
    let first_crossing = e
        .iter()
        .position(|&v| v <= threshold)
        .map(|k| result.times[k]);
    DecayReport {
        initial,
        terminal,
        ratio: (initial > 0.0).then(|| terminal / initial),
        first_crossing,
        peak: e.iter().copied().fold(0.0, f64::max),
    }
}

/// Basis-free check of the block-triangular structure of the closed loop.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCheck {
    /// Largest distance between matched eigenvalues.
    pub max_mismatch: f64,
    pub tolerance: f64,
    /// Spectral abscissa of each block `A + λ_i c BK`, `i = 2..p`.
    pub block_abscissae: Vec<f64>,
    pub blocks_hurwitz: bool,
    /// `min_i -abscissa(A + λ_i c BK)`; `None` when `p = 1`.
    pub decay_margin: Option<f64>,
    pub passed: bool,
}

/// Compares `eig(M)` with `eig(A) ∪ eig(A + λ_i c BK)` over the nonzero
/// eigenvalues `λ_i` of `Γ`, and checks each block is Hurwitz.
pub fn closed_loop_spectrum_check(setup: &NetworkSetup) -> Result<SpectrumCheck> {
    let m = build_closed_loop(setup);
    let actual = eigenvalues(&m, f64::EPSILON)?;
    let drift = setup.system.drift().to_complex();
    let block = setup.coupling_block().to_complex();
    let mut expected = eigenvalues(&drift, f64::EPSILON)?.values().to_vec();
    let mut block_abscissae = Vec::with_capacity(setup.graph.nonzero.len());
    let mut blocks_hurwitz = true;
    for &lambda in &setup.graph.nonzero {
        let bi = drift.try_add(&block.scale(lambda))?;
        let spec = eigenvalues(&bi, f64::EPSILON)?;
        block_abscissae.push(spec.abscissa());
        blocks_hurwitz &= is_hurwitz(&bi, 0.0)?;
        expected.extend_from_slice(spec.values());
    }
    let max_mismatch = match_multisets(actual.values(), &expected);
    let tolerance = SPECTRUM_MATCH_TOL * (1.0 + m.frobenius_norm());
    let decay_margin = block_abscissae
        .iter()
        .map(|a| -a)
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.min(v)))
        });
    Ok(SpectrumCheck {
        max_mismatch,
        tolerance,
        block_abscissae,
        blocks_hurwitz,
        decay_margin,
        passed: blocks_hurwitz && max_mismatch <= tolerance,
    })
}

/// Greedy pairing by increasing distance; returns the largest paired
/// distance, or infinity when the sizes differ.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|u, v| u.0.total_cmp(&v.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
        matched += 1;
        if matched == a.len() {
            break;
        }
    }
    worst
}

/// Uniform `[-1, 1]` initial state from a seeded ChaCha8 generator.
pub fn random_initial_state(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Name of the generator behind [`random_initial_state`].
pub const RNG_NAME: &str = "ChaCha8Rng::seed_from_u64";
