// Three double integrators on the complete graph. The states grow without
// bound while every agent converges onto the same trajectory.

use std::error::Error;

use netsync::graph::CouplingMatrix;
use netsync::linalg::RealMatrix;
use netsync::{
    closed_loop_spectrum_check, simulate, sync_error, synthesize, Mode, NetworkSetup, SimOptions,
    SystemModel,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = RealMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]])?;
    let b = RealMatrix::from_rows(&[[0.0], [1.0]])?;
    let system = SystemModel::new(a, b, Mode::Primal)?;
    // -Re(lambda2) of the complete graph on 3 nodes is 3
    let gains = synthesize(&system, 3.0)?;
    println!("K = {:?}", gains.gain.to_rows());

    let x0 = vec![1.0, 0.0, -1.0, 0.5, 0.0, -2.0];
    let setup = NetworkSetup::new(system, CouplingMatrix::complete(3), gains, x0)?;
    let check = closed_loop_spectrum_check(&setup)?;
    println!(
        "spectrum check passed = {}, block abscissae {:?}",
        check.passed, check.block_abscissae
    );

    let result = simulate(
        &setup,
        &SimOptions {
            horizon: Some(12.0),
            ..Default::default()
        },
    )?;
    let decay = sync_error(&result);
    let last = result.states.last().ok_or("empty trajectory")?;
    println!("reference at T = {:?}", result.reference.last().unwrap());
    println!("agent 1 at T  = {:?}", &last[..2]);
    println!("e(0) = {:.3}, e(T) = {:.3e}", decay.initial, decay.terminal);

    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    println!(
        "csv header: {}",
        String::from_utf8(csv)?.lines().next().unwrap_or("")
    );
    if !check.passed || decay.ratio.unwrap_or(1.0) > 1e-3 {
        return Err("network did not synchronize".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
