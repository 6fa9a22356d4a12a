// Scalar integrators on a random directed graph: the network agrees on
// the r-weighted average of the initial values.

use std::error::Error;

use netsync::graph::{CouplingMatrix, DEFAULT_ZERO_TOL};
use netsync::linalg::RealMatrix;
use netsync::{simulate, sync_error, synthesize, Mode, NetworkSetup, SimOptions, SystemModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = CouplingMatrix::random_connected(6, 0.3, &mut ChaCha8Rng::seed_from_u64(2));
    let s = g.spectrum(DEFAULT_ZERO_TOL)?;
    let delta = s.coupling_strength().ok_or("single agent")?;
    let system = SystemModel::new(
        RealMatrix::zeros(1, 1),
        RealMatrix::identity(1),
        Mode::Primal,
    )?;
    let gains = synthesize(&system, delta)?;

    let x0 = vec![3.0, -1.0, 0.5, 2.0, -4.0, 1.5];
    let average: f64 = s.r.iter().zip(&x0).map(|(r, x)| r * x).sum();
    let setup = NetworkSetup::new(system, g, gains, x0)?;
    let result = simulate(&setup, &SimOptions::default())?;
    let decay = sync_error(&result);

    let last = result.states.last().ok_or("empty trajectory")?;
    println!(
        "delta = {delta:.4}, horizon = {:.2}",
        result.times.last().unwrap()
    );
    println!("predicted agreement value r'x(0) = {average:.6}");
    println!(
        "final states = {:?}",
        last.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>()
    );
    println!("e(T)/e(0) = {:.2e}", decay.ratio.unwrap_or(0.0));
    if last.iter().any(|v| (v - average).abs() > 1e-6) {
        return Err("agents did not reach r'x(0)".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
